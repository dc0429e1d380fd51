// expect: accept
// out: -7 false -1
// out: 20 14
fn main() {
    let a = 7;
    let t = true;
    let z: i32 = 0;
    println!("{} {} {}", -a, !t, !z);
    println!("{} {}", (a + 3) * 2, a + 3 * 2 + 1);
}
