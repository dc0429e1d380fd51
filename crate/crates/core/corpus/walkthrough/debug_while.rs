fn main() { // expect: accept
    let mut x: i32 = 10;
    while x > 0 {
        x = x - 1;
    }
}
