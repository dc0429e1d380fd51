// expect: reject BorrowConflict @5
fn main() {
    let mut a = 1;
    let r = &a;
    a = 2;
    println!("{} {}", a, *r);
}
