// expect: accept
// out: 7
// out: 3
// out: 2
fn main() {
    let x = { 3 + 4 };
    println!("{}", x);
    {}
    {
        let y = 1;
        let z = { let w = y + 1; w + 1 };
        println!("{}", z);
    }
    let v = { let q = 2; q };
    println!("{}", v);
}
