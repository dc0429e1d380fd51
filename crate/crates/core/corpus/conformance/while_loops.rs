// expect: accept
// out: 55
// out: 0
fn main() {
    let mut i = 0;
    let mut sum = 0;
    while i < 10 {
        i += 1;
        sum += i;
    }
    println!("{}", sum);
    let mut x: i32 = 10;
    while x > 0 {
        x = x - 1;
    };
    println!("{}", x);
}
