mod common;

use krust::syntax::{parse_source, pretty};

#[test]
fn pretty_printing_reparses_to_the_same_program() {
    for (path, src) in common::corpus_sources() {
        let ast = parse_source(&src).unwrap();
        let printed = pretty::program(&ast);
        let again = parse_source(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", path.display()));
        assert_eq!(pretty::program(&again), printed, "{}", path.display());
    }
}

#[test]
fn generated_programs_round_trip() {
    for seed in 0..200 {
        let src = common::generate::from_seed(seed);
        let printed = pretty::program(&parse_source(&src).unwrap());
        assert_eq!(pretty::program(&parse_source(&printed).unwrap()), printed, "{src}");
    }
}
