// expect: accept
// out: -128 255 -32768 65535
// out: -2147483648 4294967295 -9223372036854775808 18446744073709551615
// out: -5 7
fn main() {
    let a: i8 = -128;
    let b: u8 = 255;
    let c: i16 = -32768;
    let d: u16 = 65535;
    println!("{} {} {} {}", a, b, c, d);
    let e: i32 = -2147483648;
    let f: u32 = 4294967295;
    let g: i64 = -9223372036854775808;
    let h: u64 = 18446744073709551615;
    println!("{} {} {} {}", e, f, g, h);
    let i: isize = -5;
    let j: usize = 7;
    println!("{} {}", i, j);
}
