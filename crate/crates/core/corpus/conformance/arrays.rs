// expect: accept
// out: 1 2 3
// out: 0 0 0 0
// out: 5 12 3
// out: 9
fn main() {
    let a = [1, 2, 3];
    println!("{} {} {}", a[0], a[1], a[2]);
    let z = [0; 4];
    println!("{} {} {} {}", z[0], z[1], z[2], z[3]);
    let mut m: [i32; 3] = [1, 2, 3];
    m[0] = 5;
    m[1] *= 6;
    println!("{} {} {}", m[0], m[1], m[2]);
    let i: usize = 2;
    let b: [i64; 3] = [7, 8, 9];
    println!("{}", b[i]);
}
