// expect: panic DivideByZero @8
// out: 5
fn zero() -> i32 {
    0
}
fn main() {
    println!("{}", 10 / 2);
    println!("{}", 1 / zero());
}
