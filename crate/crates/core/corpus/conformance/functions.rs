// expect: accept
// out: 120
// out: 9
// out: hi
// out: 14
fn main() {
    println!("{}", fact(5));
    println!("{}", square(3));
    greet();
    println!("{}", add(4, 10));
}
fn fact(n: i32) -> i32 {
    if n <= 1 {
        return 1;
    }
    n * fact(n - 1)
}
fn square(x: i32) -> i32 {
    x * x
}
fn greet() {
    println!("hi");
    return;
}
fn add(a: i32, b: i32) -> i32 {
    return a + b;
}
