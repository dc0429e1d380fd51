// expect: accept
// out: 100 7
// out: 107
const LIMIT: i32 = 100;
static SEVEN: i32 = 3 + 4;
fn sum() -> i32 {
    LIMIT + SEVEN
}
fn main() {
    println!("{} {}", LIMIT, SEVEN);
    println!("{}", sum());
}
