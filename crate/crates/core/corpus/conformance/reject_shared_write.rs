// expect: reject WriteThroughSharedRef @5
fn main() {
    let mut a = 1;
    let r = &a;
    *r = 2;
    println!("{}", a);
}
