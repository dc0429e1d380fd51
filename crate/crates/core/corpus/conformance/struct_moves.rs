// expect: accept
// out: 1 2
// out: 0 0
// out: 3 4
struct Point {
    x: i32,
    y: i32,
}
fn main() {
    let p = Point { x: 1, y: 2 };
    let q = p;
    println!("{} {}", q.x, q.y);
    let r = Point { x: 3, y: 4 };
    let mut s = Point { x: 0, y: 0 };
    println!("{} {}", s.x, s.y);
    s = r;
    println!("{} {}", s.x, s.y);
}
