fn main(){ // expect: reject AssignToImmutable @3
  let x=9;
  x=10; // Error!
  let mut y = 0;
  let mut z: bool;
}
