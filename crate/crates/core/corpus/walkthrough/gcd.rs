fn gcd(a: i32, b : i32) -> i32 { // expect: accept
    if a!=b {
        if a>b { return gcd(a-b, b); }
        else   { return gcd(a, b-a); }
    }else { return a; }
}
fn main() {
    println!("{}", gcd(12, 18)); // out: 6
}
