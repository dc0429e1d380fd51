// expect: accept
// out: 2.5 0.1 x hello true
// out: 3.75 -1.5
// out: z
fn main() {
    let f: f64 = 2.5;
    let g: f32 = 0.1;
    let c: char = 'x';
    let s: &str = "hello";
    let b: bool = !false;
    let u: () = ();
    println!("{} {} {} {} {}", f, g, c, s, b);
    let h = f * 1.5;
    println!("{} {}", h, -1.5);
    let z = 'z';
    println!("{}", z);
    u
}
