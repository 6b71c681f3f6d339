//! Monomial expansions of Schur polynomials, used to turn alternants into
//! symmetric polynomials (`a_{lambda + delta} / a_delta = s_lambda`).

use rustc_hash::FxHashMap;
use std::cell::RefCell;
use std::rc::Rc;

type Expansion = Rc<Vec<(Vec<i32>, u64)>>;

thread_local! {
    static EXPANSIONS: RefCell<FxHashMap<Vec<i32>, Expansion>> = RefCell::new(FxHashMap::default());
    static KOSTKA: RefCell<FxHashMap<(Vec<u32>, Vec<u32>), u64>> = RefCell::new(FxHashMap::default());
}

/// Kostka number `K_{lambda, mu}` for a partition `lambda` and a composition `mu`
/// (trailing zeros of `lambda` ignored).
pub fn kostka(lambda: &[u32], mu: &[u32]) -> u64 {
    let lam: Vec<u32> = lambda.iter().copied().filter(|&x| x > 0).collect();
    let mu: Vec<u32> = mu.to_vec();
    kostka_rec(&lam, &mu)
}

fn kostka_rec(lambda: &[u32], mu: &[u32]) -> u64 {
    let size: u32 = lambda.iter().sum();
    let msize: u32 = mu.iter().sum();
    if size != msize {
        return 0;
    }
    if mu.is_empty() {
        return u64::from(size == 0);
    }
    if lambda.len() > mu.len() {
        return 0;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = KOSTKA.with(|k| k.borrow().get(&key).copied()) {
        return v;
    }
    let last = mu[mu.len() - 1];
    let rest = &mu[..mu.len() - 1];
    // remove a horizontal strip of size `last`: lambda_{i+1} <= nu_i <= lambda_i
    let mut total = 0u64;
    let mut nu = vec![0u32; lambda.len()];
    strips(lambda, 0, last, &mut nu, &mut |nu| {
        let trimmed: Vec<u32> = nu.iter().copied().filter(|&x| x > 0).collect();
        total += kostka_rec(&trimmed, rest);
    });
    KOSTKA.with(|k| k.borrow_mut().insert(key, total));
    total
}

fn strips(lambda: &[u32], i: usize, remaining: u32, nu: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if i == lambda.len() {
        if remaining == 0 {
            f(nu);
        }
        return;
    }
    let lo = lambda.get(i + 1).copied().unwrap_or(0);
    let hi = lambda[i];
    for v in lo..=hi {
        let taken = hi - v;
        if taken > remaining {
            continue;
        }
        nu[i] = v;
        strips(lambda, i + 1, remaining - taken, nu, f);
    }
}

/// Partitions of `m` into at most `parts` parts, each at most `max_part`, padded
/// with zeros to length `parts`.
fn partitions(m: u32, parts: usize, max_part: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(m: u32, parts: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == parts {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = (parts - cur.len()) as u64;
        let top = max_part.min(m);
        for v in (0..=top).rev() {
            if (v as u64) * slots < m as u64 {
                break;
            }
            cur.push(v);
            rec(m - v, parts, v, cur, out);
            cur.pop();
        }
    }
    rec(m, parts, max_part, &mut cur, &mut out);
    out
}

fn dominated(mu: &[u32], lambda: &[u32]) -> bool {
    let (mut a, mut b) = (0u32, 0u32);
    for i in 0..mu.len() {
        a += mu[i];
        b += lambda.get(i).copied().unwrap_or(0);
        if a > b {
            return false;
        }
    }
    true
}

/// `s_lambda(z_1..z_N)` in the monomial basis for a non-increasing integer
/// vector `lambda` of length `N` (negative entries allowed). Each entry is a
/// non-increasing exponent vector with its Kostka coefficient.
pub fn schur_expansion(lambda: &[i32]) -> Expansion {
    if let Some(e) = EXPANSIONS.with(|c| c.borrow().get(lambda).cloned()) {
        return e;
    }
    let n = lambda.len();
    let shift = lambda.iter().copied().min().unwrap_or(0).min(0);
    let lam: Vec<u32> = lambda.iter().map(|&x| (x - shift) as u32).collect();
    let m: u32 = lam.iter().sum();
    let mut out = Vec::new();
    if n == 0 {
        out.push((vec![], 1));
    } else {
        for mu in partitions(m, n, lam[0]) {
            if !dominated(&mu, &lam) {
                continue;
            }
            let k = kostka(&lam, &mu);
            if k > 0 {
                out.push((mu.iter().map(|&x| x as i32 + shift).collect(), k));
            }
        }
    }
    let e = Rc::new(out);
    EXPANSIONS.with(|c| c.borrow_mut().insert(lambda.to_vec(), e.clone()));
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_kostka_numbers() {
        assert_eq!(kostka(&[2, 1], &[1, 1, 1]), 2);
        assert_eq!(kostka(&[3], &[1, 1, 1]), 1);
        assert_eq!(kostka(&[2, 2], &[1, 1, 1, 1]), 2);
        assert_eq!(kostka(&[3, 1], &[2, 2]), 1);
        assert_eq!(kostka(&[2, 1], &[3]), 0);
        // mu need not be a partition
        assert_eq!(kostka(&[2, 1], &[1, 2]), 1);
    }

    #[test]
    fn schur_two_variables() {
        // s_{(2,0)}(z1,z2) = m_{2,0} + m_{1,1}
        let e = schur_expansion(&[2, 0]);
        assert_eq!(*e, vec![(vec![2, 0], 1), (vec![1, 1], 1)]);
        // negative shift: s_{(0,-1)} = (z1 z2)^{-1} s_{(1,0)}
        let e = schur_expansion(&[0, -1]);
        assert_eq!(*e, vec![(vec![0, -1], 1)]);
    }

    #[test]
    fn dimension_count_matches_hook_formula() {
        // s_{(2,1)} in 3 variables has 8 monomials counted with multiplicity
        let e = schur_expansion(&[2, 1, 0]);
        let orbit = |mu: &Vec<i32>| -> u64 {
            let mut c = std::collections::BTreeMap::new();
            for x in mu {
                *c.entry(x).or_insert(0u64) += 1;
            }
            let mut v = 6u64;
            for (_, m) in c {
                for k in 2..=m {
                    v /= k;
                }
            }
            v
        };
        let total: u64 = e.iter().map(|(mu, k)| k * orbit(mu)).sum();
        assert_eq!(total, 8);
    }
}
