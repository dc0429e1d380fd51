// expect: reject UseAfterMove @10
struct Point {
    x: i32,
    y: i32,
}
fn main() {
    let p = Point { x: 1, y: 2 };
    let mut q = Point { x: 0, y: 0 };
    q = p;
    println!("{} {}", q.x, p.y);
}
