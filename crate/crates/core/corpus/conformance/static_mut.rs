// expect: accept
// out: 1
static mut COUNTER: i32 = 0;
fn main() {
    COUNTER += 1;
    println!("{}", COUNTER);
}
