// expect: reject AssignToImmutable @4
fn main() {
    let a = [1, 2, 3];
    a[0] = 9;
    println!("{}", a[0]);
}
