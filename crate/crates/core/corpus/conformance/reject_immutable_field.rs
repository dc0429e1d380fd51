// expect: reject AssignToImmutable @8
struct Point {
    x: i32,
    y: i32,
}
fn main() {
    let p = Point { x: 1, y: 2 };
    p.x = 5;
    println!("{}", p.y);
}
