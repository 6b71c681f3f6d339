use qshuf::field::ModP;
use qshuf::params::modp_params;
use qshuf::quiver::Quiver;
use qshuf::shuffle::{ShuffleAlgebra, Side};
use qshuf::slope::{slope_from_ints, slope_monomials, wheel_system, DEFAULT_CEILING};
use qshuf::linalg::sparse_rank;
use std::time::Instant;

fn run(q: Quiver, n: Vec<usize>) {
    let a = ShuffleAlgebra::<ModP>::new(q.clone(), modp_params(&q, 1).unwrap()).unwrap();
    let m = slope_from_ints(&vec![0; n.len()]);
    let t = Instant::now();
    let cols = slope_monomials(&q, &m, &n, Side::Plus, DEFAULT_CEILING).unwrap();
    let t1 = t.elapsed();
    let rows = wheel_system(&a, &n, &cols);
    let nnz: usize = rows.iter().map(|r| r.len()).sum();
    let t2 = t.elapsed();
    let nr = rows.len();
    let rank = sparse_rank(rows, cols.len());
    println!("{:?} edges={} cols={} rows={} nnz={} dim={} enum={:?} sys={:?} total={:?}", n, q.edge_count(), cols.len(), nr, nnz, cols.len() - rank, t1, t2, t.elapsed());
}

fn main() {
    for n in 1..=5 { run(Quiver::jordan(), vec![n]); }
    run(Quiver::loops(3), vec![5]);
    for d in 3..=4 { run(Quiver::kronecker(d), vec![3, 3]); }
}
