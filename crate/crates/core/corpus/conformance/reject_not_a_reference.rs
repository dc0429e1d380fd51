// expect: reject NotAReference @4
fn main() {
    let x = 1;
    let y = *x;
    println!("{}", y);
}
