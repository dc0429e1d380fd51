// expect: accept
// out: 0
// out: 1
// out: 2
// out: 10
fn main() {
    for i in 0..3 {
        println!("{}", i);
    }
    let mut total = 0;
    for k in 1..5 {
        total += k;
    }
    println!("{}", total);
}
