use qshuf::field::{Field, RatFunc, Rational};
use qshuf::laurent::SymLaurent;
use qshuf::params::{rational_params, ParamValues, Params};
use qshuf::quiver::Quiver;
use qshuf::shuffle::{Element, ShuffleAlgebra, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alg(q: Quiver, seed: u64) -> ShuffleAlgebra<Rational> {
    let p = rational_params(&q, seed);
    ShuffleAlgebra::new(q, p).unwrap()
}

fn word(a: &ShuffleAlgebra<Rational>, side: Side, letters: &[(usize, i32)]) -> Element<Rational> {
    let mut acc = a.unit(side);
    for &(i, d) in letters {
        acc = a.product(&acc, &a.generator(side, i, d)).unwrap();
    }
    acc
}

fn random_letters(rng: &mut ChaCha8Rng, vertices: usize, len: usize) -> Vec<(usize, i32)> {
    (0..len).map(|_| (rng.gen_range(0..vertices), rng.gen_range(-3..=3))).collect()
}

#[test]
fn zeta_jordan_matches_closed_form() {
    let a = alg(Quiver::jordan(), 3);
    let p = a.params().clone();
    let z = a.zeta(0, 0);
    let x = Rational::new(7, 5);
    let one = Rational::one();
    let want = one
        .sub(&x.mul(&p.q_inv))
        .mul(&p.t_inv[0].sub(&x))
        .mul(&one.sub(&p.t[0].mul(&p.q_inv).div(&x).unwrap()))
        .div(&one.sub(&x))
        .unwrap();
    assert_eq!(z.eval(&x).unwrap(), want);
}

#[test]
fn zeta_a2_and_disconnected() {
    let a = alg(Quiver::a2(), 4);
    let p = a.params().clone();
    let x = Rational::new(-2, 3);
    assert_eq!(a.zeta(0, 1).eval(&x).unwrap(), p.t_inv[0].sub(&x));
    let want = Rational::one().sub(&p.t[0].mul(&p.q_inv).div(&x).unwrap());
    assert_eq!(a.zeta(1, 0).eval(&x).unwrap(), want);
    let b = alg(Quiver::new(2, &[]).unwrap(), 4);
    assert_eq!(b.zeta(0, 1).eval(&x).unwrap(), Rational::one());
}

#[test]
fn gamma_values() {
    let a = alg(Quiver::jordan(), 5);
    let p = a.params().clone();
    let one = Rational::one();
    let want = p.t_inv[0]
        .sub(&one)
        .mul(&one.sub(&p.t[0].mul(&p.q_inv)))
        .div(&one.sub(&p.q_inv))
        .unwrap();
    assert_eq!(a.gamma(0), want);
    let b = alg(Quiver::a2(), 5);
    let p = b.params().clone();
    assert_eq!(b.gamma(0), one.div(&one.sub(&p.q_inv)).unwrap());
    // two loops with equal parameters
    let mut vals = ParamValues::seeded(5, 2, 12);
    vals.t[1] = vals.t[0].clone();
    let c = ShuffleAlgebra::new(Quiver::loops(2), Params::<Rational>::from_values(&vals).unwrap()).unwrap();
    let p = c.params().clone();
    let f = p.t_inv[0].sub(&one).mul(&one.sub(&p.t[0].mul(&p.q_inv)));
    assert_eq!(c.gamma(0), f.mul(&f).div(&one.sub(&p.q_inv)).unwrap());
}

#[test]
fn product_examples() {
    let one_vertex = alg(Quiver::new(1, &[]).unwrap(), 6);
    let e0 = one_vertex.generator(Side::Plus, 0, 0);
    let prod = one_vertex.product(&e0, &e0).unwrap();
    let want = Rational::one().add(&one_vertex.params().q_inv);
    assert_eq!(prod.poly, SymLaurent::constant(vec![2], want));

    let a = alg(Quiver::a2(), 6);
    let p = a.params().clone();
    let e1 = a.generator(Side::Plus, 0, 0);
    let e2 = a.generator(Side::Plus, 1, 0);
    let x = a.product(&e1, &e2).unwrap();
    assert_eq!(x.poly.len(), 2);
    assert_eq!(x.poly.coeff(&[0, 0]), p.t_inv[0]);
    assert_eq!(x.poly.coeff(&[1, -1]), Rational::from_i64(-1));
    let y = a.product(&e2, &e1).unwrap();
    assert_eq!(y.poly.coeff(&[0, 0]), Rational::one());
    assert_eq!(y.poly.coeff(&[1, -1]), p.t[0].mul(&p.q_inv).neg());

    // unit
    let u = a.unit(Side::Plus);
    assert_eq!(a.product(&x, &u).unwrap(), x);
    assert_eq!(a.product(&u, &x).unwrap(), x);
}

#[test]
fn fast_product_matches_division_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for q in [Quiver::jordan(), Quiver::loops(2), Quiver::a2(), Quiver::kronecker(2), Quiver::new(2, &[(0, 1), (1, 0), (1, 1)]).unwrap()] {
        let a = alg(q.clone(), 11);
        for _ in 0..4 {
            let l1 = rng.gen_range(1..=2);
            let l2 = rng.gen_range(1..=2);
            let f = word(&a, Side::Plus, &random_letters(&mut rng, q.vertex_count(), l1));
            let g = word(&a, Side::Plus, &random_letters(&mut rng, q.vertex_count(), l2));
            let fast = a.plus_product(&f.poly, &g.poly).unwrap();
            let slow = a.plus_product_by_division(&f.poly, &g.poly).unwrap();
            assert_eq!(fast, slow, "quiver {:?}", q);
        }
    }
}

#[test]
fn associativity_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..50 {
        let q = if t % 2 == 0 { Quiver::jordan() } else { Quiver::a2() };
        let a = alg(q.clone(), 21);
        let mut pick = |max: usize| {
            let len = rng.gen_range(1..=max);
            word(&a, Side::Plus, &random_letters(&mut rng, q.vertex_count(), len))
        };
        let (f, g, h) = (pick(2), pick(1), pick(1));
        let lhs = a.product(&a.product(&f, &g).unwrap(), &h).unwrap();
        let rhs = a.product(&f, &a.product(&g, &h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn minus_side_is_opposite() {
    let a = alg(Quiver::a2(), 8);
    let f = word(&a, Side::Minus, &[(0, 1), (1, -2)]);
    let g = word(&a, Side::Plus, &[(1, -2), (0, 1)]);
    assert_eq!(f.poly, g.poly);
}

#[test]
fn grading_adds() {
    let a = alg(Quiver::kronecker(2), 8);
    let f = word(&a, Side::Plus, &[(0, 1), (1, 2)]);
    let g = word(&a, Side::Plus, &[(1, -1)]);
    let h = a.product(&f, &g).unwrap();
    let (bf, bg, bh) = (f.bidegree().unwrap(), g.bidegree().unwrap(), h.bidegree().unwrap());
    assert_eq!(bh.vdeg, bf.vdeg + bg.vdeg);
    assert_eq!(bh.hdeg, vec![1, 2]);
}

#[test]
fn shift_is_an_algebra_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let a = alg(Quiver::a2(), 9);
    for _ in 0..20 {
        let f = word(&a, Side::Plus, &random_letters(&mut rng, 2, 2));
        let g = word(&a, Side::Plus, &random_letters(&mut rng, 2, 1));
        let k = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        let lhs = a.product(&f, &g).unwrap().tau(&k);
        let rhs = a.product(&f.tau(&k), &g.tau(&k)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(f.tau(&k).tau(&[-k[0], -k[1]]), f);
    }
    let j = alg(Quiver::jordan(), 9);
    let e = j.generator(Side::Plus, 0, 2);
    assert_eq!(e.tau(&[1]), j.generator(Side::Plus, 0, 3));
    assert_eq!(e.tau(&[0]), e);
    let w = word(&j, Side::Plus, &[(0, 1), (0, 0)]);
    assert_eq!(w.tau(&[3]).bidegree().unwrap().vdeg, 1 + 6);
    let m = j.generator(Side::Minus, 0, 2);
    assert_eq!(m.tau(&[1]), j.generator(Side::Minus, 0, 1));
}

#[test]
fn wheel_examples() {
    let j = alg(Quiver::jordan(), 10);
    let two = word(&j, Side::Plus, &[(0, 1), (0, -1)]);
    assert!(j.wheel_check(&two).passed);
    let one3 = Element::new(Side::Plus, SymLaurent::one(vec![3]));
    let r = j.wheel_check(&one3);
    assert!(!r.passed);
    assert!(r.witness.is_some());
    let e3 = word(&j, Side::Plus, &[(0, 0), (0, 0), (0, 0)]);
    assert!(j.wheel_check(&e3).passed);
}

#[test]
fn wheel_rows_agree_with_raw_substitution() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for q in [Quiver::jordan(), Quiver::a2(), Quiver::kronecker(2), Quiver::loops(2)] {
        let a = alg(q.clone(), 12);
        for _ in 0..5 {
            // random symmetric polynomial: almost never wheel-closed
            let shape: Vec<usize> = if q.vertex_count() == 1 { vec![3] } else { vec![2, 2] };
            let n: usize = shape.iter().sum();
            let mut f = SymLaurent::zero(shape.clone());
            for _ in 0..3 {
                let e: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                f.add_orbit(&e, &Rational::from_i64(rng.gen_range(1..5)));
            }
            let el = Element::new(Side::Plus, f);
            let fast = a.wheel_check(&el).passed;
            let mut raw_ok = true;
            for e in 0..q.edge_count() {
                for pat in [1u8, 2] {
                    if let Some(r) = a.wheel_substitution(&el, e, pat).unwrap() {
                        raw_ok &= r.is_zero();
                    }
                }
            }
            assert_eq!(fast, raw_ok);
            // products always pass both
            let w = word(&a, Side::Plus, &random_letters(&mut rng, q.vertex_count(), 3));
            assert!(a.wheel_check(&w).passed);
            for e in 0..q.edge_count() {
                for pat in [1u8, 2] {
                    if let Some(r) = a.wheel_substitution(&w, e, pat).unwrap() {
                        assert!(r.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn exact_mode_agrees_with_specialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for t in 0..50 {
        let q = if t % 2 == 0 { Quiver::jordan() } else { Quiver::a2() };
        let vals = ParamValues::seeded(100 + t, q.edge_count(), 12);
        let exact = ShuffleAlgebra::new(q.clone(), Params::<RatFunc>::symbolic(q.edge_count())).unwrap();
        let spec = ShuffleAlgebra::new(q.clone(), Params::<Rational>::from_values(&vals).unwrap()).unwrap();
        let letters = random_letters(&mut rng, q.vertex_count(), 2);
        let mut fe = exact.unit(Side::Plus);
        let mut fs = spec.unit(Side::Plus);
        for &(i, d) in &letters {
            fe = exact.product(&fe, &exact.generator(Side::Plus, i, d)).unwrap();
            fs = spec.product(&fs, &spec.generator(Side::Plus, i, d)).unwrap();
        }
        let point = vals.as_vec();
        let evaluated = fe.poly.map_coeffs(|c| Rational(c.evaluate(&point).unwrap()));
        assert_eq!(evaluated, fs.poly);
    }
}
