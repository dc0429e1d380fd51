// expect: accept
// out: 6 1 7
fn gcd(a: i32, b : i32) -> i32 {
    if a!=b {
        if a>b { return gcd(a-b, b); }
        else   { return gcd(a, b-a); }
    }else { return a; }
}
fn main() {
    println!("{} {} {}", gcd(12, 18), gcd(5, 3), gcd(7, 7));
}
