use num_bigint::BigInt;
use qshuf::kac::*;
use qshuf::quiver::Quiver;
use qshuf::slope::DEFAULT_CEILING;

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn coeffs(p: &KacPoly) -> Vec<i64> {
    p.coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect()
}

#[test]
fn hua_examples() {
    let j = Quiver::jordan();
    for n in 1..=5 {
        assert_eq!(coeffs(&kac_hua(&j, &[n]).unwrap()), vec![0, 1]);
    }
    let a2 = Quiver::a2();
    assert_eq!(coeffs(&kac_hua(&a2, &[1, 1]).unwrap()), vec![1]);
    assert_eq!(coeffs(&kac_hua(&a2, &[2, 1]).unwrap()), vec![0]);
    for g in 0..=3 {
        assert_eq!(coeffs(&kac_hua(&Quiver::loops(g), &[1]).unwrap()), {
            let mut v = vec![0; g + 1];
            v[g] = 1;
            v
        });
    }
    // Kronecker quiver: A_{(1,1)} = 1 + t, the imaginary root
    assert_eq!(coeffs(&kac_hua(&Quiver::kronecker(2), &[1, 1]).unwrap()), vec![1, 1]);
    assert!(kac_hua(&j, &[0]).is_err());
    assert!(kac_hua(&j, &[7]).is_err());
}

#[test]
fn bruteforce_examples() {
    let j = Quiver::jordan();
    assert_eq!(kac_bruteforce(&j, &[2], &[2]).unwrap(), vec![b(2)]);
    assert_eq!(kac_bruteforce(&Quiver::a2(), &[1, 1], &[3]).unwrap(), vec![b(1)]);
    let q = Quiver::new(2, &[(0, 0), (0, 0), (0, 1), (1, 1)]).unwrap();
    assert_eq!(kac_bruteforce(&q, &[1, 0], &[2, 3, 4]).unwrap(), vec![b(4), b(9), b(16)]);
    assert_eq!(kac_bruteforce(&q, &[0, 1], &[2, 3, 4]).unwrap(), vec![b(2), b(3), b(4)]);
    assert!(kac_bruteforce(&j, &[4], &[2]).is_err());
    assert!(kac_bruteforce(&j, &[2], &[5]).is_err());
}

#[test]
fn hua_matches_bruteforce_on_small_quivers() {
    let cases = [
        (Quiver::jordan(), vec![vec![1], vec![2], vec![3]]),
        (Quiver::new(1, &[]).unwrap(), vec![vec![1], vec![2], vec![3]]),
        (Quiver::a2(), vec![vec![1, 1], vec![2, 1], vec![1, 2]]),
        (Quiver::new(2, &[(0, 1), (1, 0)]).unwrap(), vec![vec![1, 1], vec![2, 1]]),
        (Quiver::new(2, &[(0, 0), (0, 1)]).unwrap(), vec![vec![1, 1], vec![2, 1], vec![1, 2]]),
    ];
    for (q, dims) in cases {
        for n in dims {
            let h = kac_hua(&q, &n).unwrap();
            let bf = kac_bruteforce(&q, &n, &[2, 3]).unwrap();
            assert_eq!(vec![h.eval(&b(2)), h.eval(&b(3))], bf, "{q:?} {n:?}");
        }
    }
}

#[test]
fn kac_polynomials_are_nonnegative() {
    for q in [Quiver::loops(2), Quiver::kronecker(3), Quiver::new(2, &[(0, 0), (0, 1), (1, 0)]).unwrap()] {
        let bound = vec![3; q.vertex_count()];
        for p in kac_hua_box(&q, &bound).unwrap() {
            assert!(p.is_nonnegative(), "{p:?}");
        }
    }
}

#[test]
fn simple_roots_count_loops() {
    let q = Quiver::new(3, &[(0, 0), (0, 0), (0, 1), (1, 2), (2, 2)]).unwrap();
    for i in 0..3 {
        let mut n = vec![0; 3];
        n[i] = 1;
        let p = kac_hua(&q, &n).unwrap();
        let mut want = vec![b(0); q.loop_count(i) + 1];
        want[q.loop_count(i)] = b(1);
        assert_eq!(p.coeffs, want);
    }
}

#[test]
fn exp_examples() {
    let mut s = TruncSeries::zero(vec![2, 2]);
    s.set(&[1, 0], b(1));
    s.set(&[0, 1], b(1));
    s.set(&[1, 1], b(1));
    assert_eq!(plethystic_exp(&s).unwrap().coeff(&[2, 2]), b(3));
    // multiplicative in disjoint variables
    let q = Quiver::new(2, &[(0, 0), (1, 1), (1, 1)]).unwrap();
    let (_, both) = kac_exp_series(&q, &[3, 3]).unwrap();
    let (_, left) = kac_exp_series(&Quiver::loops(1), &[3]).unwrap();
    let (_, right) = kac_exp_series(&Quiver::loops(2), &[3]).unwrap();
    for i in 0..=3 {
        for j in 0..=3 {
            assert_eq!(both.coeff(&[i, j]), left.coeff(&[i]) * right.coeff(&[j]));
        }
    }
}

#[test]
fn conjecture_on_small_cases() {
    let r = check_conjecture(&Quiver::jordan(), &[5], &[1, 2, 3], DEFAULT_CEILING, 1).unwrap();
    assert!(r.all_equal);
    let lhs: Vec<usize> = r.rows.iter().map(|x| x.lhs.unwrap()).collect();
    assert_eq!(lhs, vec![1, 1, 2, 3, 5, 7]);
    let r = check_conjecture(&Quiver::loops(2), &[2], &[1, 2, 3], DEFAULT_CEILING, 2).unwrap();
    assert!(r.all_equal);
    let r = check_conjecture(&Quiver::a2(), &[1, 1], &[4, 5, 6], DEFAULT_CEILING, 1).unwrap();
    assert!(r.all_equal);
    assert_eq!(r.rows.last().unwrap().lhs, Some(2));
}

#[test]
fn conjecture_reports_caps() {
    let r = check_conjecture(&Quiver::loops(3), &[3], &[1], 10, 1).unwrap();
    assert!(!r.capped.is_empty());
    assert!(r.rows.iter().any(|x| x.capped.is_some() && x.lhs.is_none()));
}
