// expect: accept
// out: 1 1
// out: 7
// out: 8
// out: 2
fn main() {
    let x = 1;
    let p = &x;
    let q = &x;
    println!("{} {}", *p, *q);
    let mut y = 5;
    let r = &mut y;
    *r = 7;
    println!("{}", *r);
    *r += 1;
    println!("{}", y);
    let a = 1;
    let b = 2;
    let mut s = &a;
    s = &b;
    println!("{}", *s);
}
