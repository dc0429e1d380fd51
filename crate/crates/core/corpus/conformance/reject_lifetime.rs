// expect: reject LifetimeError @6
fn main() {
    let r;
    {
        let y = 1;
        r = &y;
    }
    println!("{}", *r);
}
