// expect: accept
// out: 4 6
fn main() {
    let v = vec![4, 5, 6];
    println!("{} {}", v[0], v[2]);
}
