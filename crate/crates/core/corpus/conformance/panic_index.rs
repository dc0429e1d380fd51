// expect: panic IndexOutOfBounds @9
// out: before
fn pick() -> usize {
    3
}
fn main() {
    let a = [1, 2, 3];
    println!("before");
    println!("{}", a[pick()]);
}
