// expect: accept
// out: 6 4
// out: 11
fn double(x: i32) -> i32 {
    x * 2
}
fn main() {
    let f: fn(i32) -> i32 = double;
    fn inc(y: i32) -> i32 {
        y + 1
    }
    let g = inc;
    println!("{} {}", f(3), g(3));
    println!("{}", inc(f(5)));
}
