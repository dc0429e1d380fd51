// expect: reject UseAfterMove @9
struct Point {
    x: i32,
    y: i32,
}
fn main() {
    let p = Point { x: 1, y: 2 };
    let q = p;
    println!("{}", p.x);
    println!("{}", q.y);
}
