// expect: accept
// out: 1 2
// out: 10 2
// out: 3
struct Point {
    x: i32,
    y: i32,
}
fn main() {
    let p = Point { x: 1, y: 2 };
    println!("{} {}", p.x, p.y);
    let mut q: Point = Point { y: 2, x: 1 };
    q.x = 10;
    println!("{} {}", q.x, q.y);
    struct Pair {
        a: i64,
        b: bool,
    }
    let mut s = Pair { a: 2, b: true };
    s.a += 1;
    if s.b {
        println!("{}", s.a);
    }
}
