// expect: reject BorrowConflict @5
fn main() {
    let mut a = 1;
    let r = &mut a;
    let s = &a;
    *r = 2;
    println!("{}", *s);
}
