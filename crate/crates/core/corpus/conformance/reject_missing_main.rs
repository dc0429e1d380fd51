// expect: reject MissingMain @1
fn helper() -> i32 {
    1
}
