// expect: panic Overflow @7
fn top() -> u8 {
    255
}
fn main() {
    let x: u8 = top();
    let y = x + 1;
    println!("{}", y);
}
