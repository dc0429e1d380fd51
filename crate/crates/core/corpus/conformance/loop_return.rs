// expect: accept
// out: 64
// out: 3
fn first_power_over(limit: i32) -> i32 {
    let mut p = 1;
    loop {
        p *= 2;
        if p > limit {
            return p;
        }
    }
}
fn count() -> i32 {
    let mut n = 0;
    loop {
        n += 1;
        if n == 3 {
            return n;
        }
    };
}
fn main() {
    println!("{}", first_power_over(40));
    println!("{}", count());
}
