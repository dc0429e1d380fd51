// expect: reject MutBorrowOfImmutable @4
fn main() {
    let a = 1;
    let r = &mut a;
    *r = 3;
}
