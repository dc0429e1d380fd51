// expect: reject TypeMismatch @3
fn main() {
    let flag: bool = 1;
    println!("{}", flag);
}
