// expect: accept
// out: 13 7 30 3 1
// out: 11 2 2 40
// out: true true false false false true
// out: true false
fn main() {
    let a = 10;
    let b = 3;
    println!("{} {} {} {} {}", a + b, a - b, a * b, a / b, a % b);
    println!("{} {} {} {}", a | b, a & b, a >> 2, a << 2);
    println!("{} {} {} {} {} {}", b < a, b <= a, b > a, b >= a, a == b, a != b);
    let t = true;
    let f = false;
    println!("{} {}", t || f, t && f);
}
