fn main(){ // expect: reject LifetimeError @5
   let mut x ;
   {
     let y = 1;
     x = &y;   // Error!
   }
   let z = 1;
   let p = &z; // OK!
}
