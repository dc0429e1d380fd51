// expect: reject UnboundIdentifier @6
fn main() {
    {
        let inner = 1;
    }
    println!("{}", inner);
}
