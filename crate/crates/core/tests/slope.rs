use num_rational::BigRational;
use qshuf::field::{Field, ModP, Rational};
use qshuf::laurent::SymLaurent;
use qshuf::params::{modp_params, rational_params};
use qshuf::quiver::{dot, edge_form, Quiver};
use qshuf::shuffle::{Element, ShuffleAlgebra, Side};
use qshuf::slope::*;

fn ralg(q: &Quiver, seed: u64) -> ShuffleAlgebra<Rational> {
    ShuffleAlgebra::new(q.clone(), rational_params(q, seed)).unwrap()
}

fn malg(q: &Quiver, seed: u64) -> ShuffleAlgebra<ModP> {
    ShuffleAlgebra::new(q.clone(), modp_params(q, seed).unwrap()).unwrap()
}

fn zero_slope(q: &Quiver) -> SlopeVector {
    slope_from_ints(&vec![0; q.vertex_count()])
}

fn mono(side: Side, shape: Vec<usize>, terms: &[(&[i32], i64)]) -> Element<Rational> {
    let mut p = SymLaurent::zero(shape);
    for (e, c) in terms {
        p.add_orbit(e, &Rational::from_i64(*c));
    }
    Element::new(side, p)
}

#[test]
fn bilinear_forms() {
    assert_eq!(edge_form(&Quiver::jordan(), &[2], &[3]), 6);
    let k3 = Quiver::kronecker(3);
    assert_eq!(edge_form(&k3, &[1, 0], &[0, 1]), 3);
    assert_eq!(edge_form(&k3, &[0, 1], &[1, 0]), 0);
    assert_eq!(edge_form(&k3, &[2, -1], &[0, 0]), 0);
    assert_eq!(dot(&[2i64, -1], &[0, 0]), 0);
}

#[test]
fn naive_slope_examples() {
    for d in -2..=2 {
        let f = mono(Side::Plus, vec![1], &[(&[d], 1)]);
        for m in -2..=2 {
            assert_eq!(naive_slope_leq(&f, &slope_from_ints(&[m])).unwrap(), d <= m as i32);
        }
    }
    let one = mono(Side::Plus, vec![2], &[(&[0, 0], 1)]);
    assert!(naive_slope_leq(&one, &slope_from_ints(&[0])).unwrap());
    let g = mono(Side::Minus, vec![1], &[(&[-1], 1)]);
    assert!(!naive_slope_leq(&g, &slope_from_ints(&[0])).unwrap());
    let mixed = mono(Side::Plus, vec![1], &[(&[0], 1), (&[1], 1)]);
    assert!(naive_slope_leq(&mixed, &slope_from_ints(&[0])).is_err());
}

#[test]
fn slope_examples() {
    let j = Quiver::jordan();
    let m = zero_slope(&j);
    let f = mono(Side::Plus, vec![2], &[(&[1, -1], 1)]);
    assert!(has_slope_leq(&j, &f, &m).unwrap());
    let g = mono(Side::Plus, vec![2], &[(&[2, -2], 1)]);
    assert!(!has_slope_leq(&j, &g, &m).unwrap());
    for d in -2..=2 {
        let e = mono(Side::Plus, vec![1], &[(&[d], 1)]);
        assert_eq!(has_slope_leq(&j, &e, &slope_from_ints(&[1])).unwrap(), d <= 1);
    }
    assert!(has_slope_leq(&j, &Element::<Rational>::zero(Side::Plus, vec![2]), &m).is_err());
}

#[test]
fn jordan_basis_examples() {
    let j = Quiver::jordan();
    let a = ralg(&j, 3);
    let m = zero_slope(&j);
    let b1 = slope_basis(&a, &m, &[1], Side::Plus, DEFAULT_CEILING).unwrap();
    assert_eq!(b1.dim(), 1);
    assert_eq!(b1.basis[0].poly, SymLaurent::one(vec![1]));
    let b2 = slope_basis(&a, &m, &[2], Side::Plus, DEFAULT_CEILING).unwrap();
    assert_eq!(b2.dim(), 2);
    let a2 = ralg(&Quiver::a2(), 3);
    assert_eq!(slope_basis(&a2, &slope_from_ints(&[0, 0]), &[1, 1], Side::Plus, DEFAULT_CEILING).unwrap().dim(), 2);
}

#[test]
fn basis_elements_are_members() {
    for (q, shapes) in [
        (Quiver::jordan(), vec![vec![3], vec![4]]),
        (Quiver::a2(), vec![vec![2, 1], vec![2, 2]]),
        (Quiver::loops(2), vec![vec![3]]),
    ] {
        let a = ralg(&q, 5);
        for m in [zero_slope(&q), slope_from_ints(&vec![1; q.vertex_count()])] {
            for n in &shapes {
                for side in [Side::Plus, Side::Minus] {
                    let b = slope_basis(&a, &m, n, side, DEFAULT_CEILING).unwrap();
                    assert!(b.dim() > 0);
                    for f in &b.basis {
                        assert!(in_slope_piece(&a, f, &m).unwrap(), "{q:?} {n:?} {side:?}");
                        assert!(naive_slope_leq(f, &m).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn graded_character_of_jordan() {
    let j = Quiver::jordan();
    let ch = graded_character(&malg(&j, 1), &zero_slope(&j), &[3], DEFAULT_CEILING).unwrap();
    let dims: Vec<usize> = ch.iter().map(|x| x.1).collect();
    assert_eq!(dims, vec![1, 1, 2, 3]);
    // non-integral m.n
    let half = parse_slope("1/2").unwrap();
    assert_eq!(slope_dim(&malg(&j, 1), &half, &[1], DEFAULT_CEILING).unwrap(), 0);
    assert_eq!(slope_dim(&malg(&j, 1), &half, &[0], DEFAULT_CEILING).unwrap(), 1);
    // slope a/b pieces of the Jordan quiver count partitions of n/b
    assert_eq!(slope_dim(&malg(&j, 1), &half, &[2], DEFAULT_CEILING).unwrap(), 1);
    assert_eq!(slope_dim(&malg(&j, 1), &half, &[4], DEFAULT_CEILING).unwrap(), 2);
    let third = parse_slope("2/3").unwrap();
    assert_eq!(slope_dim(&malg(&j, 1), &third, &[3], DEFAULT_CEILING).unwrap(), 1);
}

#[test]
fn rational_and_modular_dims_agree() {
    for (q, n) in [(Quiver::jordan(), vec![4]), (Quiver::kronecker(2), vec![2, 2]), (Quiver::loops(2), vec![3])] {
        let m = zero_slope(&q);
        let r = slope_basis(&ralg(&q, 9), &m, &n, Side::Plus, DEFAULT_CEILING).unwrap().dim();
        let p = slope_dim(&malg(&q, 9), &m, &n, DEFAULT_CEILING).unwrap();
        assert_eq!(r, p);
    }
}

#[test]
fn shift_equivariance() {
    for (q, bound) in [(Quiver::jordan(), vec![4]), (Quiver::a2(), vec![2, 2]), (Quiver::loops(2), vec![3])] {
        let a = malg(&q, 2);
        let base = zero_slope(&q);
        let ch0 = graded_character(&a, &base, &bound, DEFAULT_CEILING).unwrap();
        for k in [-1i64, 1] {
            let m = slope_from_ints(&vec![k; q.vertex_count()]);
            assert_eq!(graded_character(&a, &m, &bound, DEFAULT_CEILING).unwrap(), ch0);
        }
        // the shift maps bases onto bases
        let b = slope_basis(&ralg(&q, 2), &base, &bound, Side::Plus, DEFAULT_CEILING).unwrap();
        let k = vec![1i64; q.vertex_count()];
        let mk = slope_from_ints(&k);
        for f in &b.basis {
            assert!(in_slope_piece(&ralg(&q, 2), &f.tau(&k), &mk).unwrap());
        }
    }
}

#[test]
fn products_stay_in_slope() {
    let q = Quiver::jordan();
    let a = ralg(&q, 4);
    let m = zero_slope(&q);
    let b1 = slope_basis(&a, &m, &[1], Side::Plus, DEFAULT_CEILING).unwrap();
    let b2 = slope_basis(&a, &m, &[2], Side::Plus, DEFAULT_CEILING).unwrap();
    for x in &b1.basis {
        for y in &b2.basis {
            for p in [a.product(x, y).unwrap(), a.product(y, x).unwrap()] {
                assert!(has_slope_leq(&q, &p, &m).unwrap());
                assert_eq!(p.bidegree().unwrap().vdeg, 0);
            }
        }
    }
    let q = Quiver::a2();
    let a = ralg(&q, 4);
    let m = slope_from_ints(&[1, 0]);
    let x = slope_basis(&a, &m, &[1, 0], Side::Plus, DEFAULT_CEILING).unwrap();
    let y = slope_basis(&a, &m, &[1, 1], Side::Plus, DEFAULT_CEILING).unwrap();
    for f in &x.basis {
        for g in &y.basis {
            let p = a.product(f, g).unwrap();
            assert!(in_slope_piece(&a, &p, &m).unwrap());
        }
    }
}

#[test]
fn seeds_agree() {
    for (q, n) in [(Quiver::loops(2), vec![4]), (Quiver::kronecker(3), vec![2, 2])] {
        let m = zero_slope(&q);
        let dims: Vec<usize> = (1..=3).map(|s| slope_dim(&malg(&q, s), &m, &n, DEFAULT_CEILING).unwrap()).collect();
        assert!(dims.windows(2).all(|w| w[0] == w[1]), "{dims:?}");
    }
}

#[test]
fn minus_side_dims_match_plus_side() {
    let q = Quiver::a2();
    let a = ralg(&q, 6);
    for m in [slope_from_ints(&[0, 0]), slope_from_ints(&[1, -1])] {
        for n in [vec![1, 1], vec![2, 1], vec![2, 2]] {
            let p = slope_basis(&a, &m, &n, Side::Plus, DEFAULT_CEILING).unwrap().dim();
            let mi = slope_basis(&a, &m, &n, Side::Minus, DEFAULT_CEILING).unwrap().dim();
            assert_eq!(p, mi, "{m:?} {n:?}");
        }
    }
}

#[test]
fn resource_ceiling_is_reported() {
    let q = Quiver::loops(3);
    let err = slope_dim(&malg(&q, 1), &zero_slope(&q), &[4], 10).unwrap_err();
    assert!(matches!(err, qshuf::Error::ResourceLimit(_)));
}

#[test]
fn slope_parsing() {
    assert_eq!(parse_slope("0, 1/2").unwrap(), vec![BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into())]);
    let e = parse_slope("1,x").unwrap_err().to_string();
    assert!(e.contains("entry 2"), "{e}");
}
