use qshuf::field::{ModP, Rational};
use qshuf::params::{modp_params, rational_params};
use qshuf::quiver::Quiver;
use qshuf::shuffle::{ShuffleAlgebra, Side};
use std::time::Instant;

fn main() {
    let q = Quiver::jordan();
    let a = ShuffleAlgebra::<Rational>::new(q.clone(), rational_params(&q, 1)).unwrap();
    let mut acc = a.unit(Side::Plus);
    for (k, d) in [1, -2, 3, 0, 2].iter().enumerate() {
        let t = Instant::now();
        acc = a.product(&acc, &a.generator(Side::Plus, 0, *d)).unwrap();
        println!("rat len {} terms {} time {:?}", k + 1, acc.poly.len(), t.elapsed());
    }
    let b = ShuffleAlgebra::<ModP>::new(q.clone(), modp_params(&q, 1).unwrap()).unwrap();
    let mut acc = b.unit(Side::Plus);
    for (k, d) in [1, -2, 3, 0, 2].iter().enumerate() {
        let t = Instant::now();
        acc = b.product(&acc, &b.generator(Side::Plus, 0, *d)).unwrap();
        println!("modp len {} terms {} time {:?}", k + 1, acc.poly.len(), t.elapsed());
    }
}
