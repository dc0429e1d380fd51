// expect: accept
// out: big
// out: odd
// out: neither
fn classify(n: i32) {
    if n > 100 {
        println!("big");
    }
}
fn main() {
    classify(200);
    classify(5);
    let n = 7;
    if n % 2 == 0 {
        println!("even");
    } else {
        println!("odd");
    }
    let m = 0;
    if m > 0 {
        println!("positive");
    } else {
        if m < 0 {
            println!("negative");
        } else {
            println!("neither");
        }
    }
}
