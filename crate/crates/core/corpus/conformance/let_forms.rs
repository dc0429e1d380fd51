// expect: accept
// out: 1 2 3
// out: 5 x
fn main() {
    let a = 1;
    let mut b: i32 = 0;
    b = b + 2;
    let c;
    c = 3;
    let mut d: i64;
    d = 4;
    d += 1;
    d -= 1;
    d /= 2;
    d += 3;
    println!("{} {} {}", a, b, c);
    let a = 'x';
    println!("{} {}", d, a);
}
