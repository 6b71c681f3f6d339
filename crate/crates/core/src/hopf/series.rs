//! Power series expansions of the zeta factors and small enumeration helpers.

use crate::field::{accumulate_btree, Field};
use crate::shuffle::ShuffleAlgebra;
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

pub(crate) type UPoly<F> = BTreeMap<i32, F>;

fn upoly_mul<F: Field>(a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            accumulate_btree(&mut out, i + j, &x.mul(y));
        }
    }
    out
}

/// `p(1/x)`.
fn upoly_flip<F: Field>(p: &UPoly<F>) -> UPoly<F> {
    p.iter().map(|(e, c)| (-e, c.clone())).collect()
}

/// Laurent expansion of `num / den` at `x = 0`, extended on demand.
#[derive(Clone, Debug)]
pub(crate) struct Expansion<F: Field> {
    /// Valuation: the first coefficient multiplies `x^val`.
    pub val: i32,
    num: Vec<F>,
    den: Vec<F>,
    den0_inv: F,
    coeffs: Vec<F>,
}

impl<F: Field> Expansion<F> {
    pub fn new(num: &UPoly<F>, den: &UPoly<F>) -> Self {
        let dense = |p: &UPoly<F>| -> (i32, Vec<F>) {
            let nz: Vec<(&i32, &F)> = p.iter().filter(|(_, c)| !c.is_zero()).collect();
            let lo = *nz.first().expect("nonzero polynomial").0;
            let hi = *nz.last().expect("nonzero polynomial").0;
            let mut out = vec![F::zero(); (hi - lo + 1) as usize];
            for (e, c) in nz {
                out[(e - lo) as usize] = c.clone();
            }
            (lo, out)
        };
        let (vn, num) = dense(num);
        let (vd, den) = dense(den);
        let den0_inv = den[0].inv().expect("leading coefficient is nonzero");
        Expansion { val: vn - vd, num, den, den0_inv, coeffs: Vec::new() }
    }

    /// Coefficient of `x^(val + k)`.
    pub fn coeff(&mut self, k: usize) -> F {
        while self.coeffs.len() <= k {
            let j = self.coeffs.len();
            let mut acc = self.num.get(j).cloned().unwrap_or_else(F::zero);
            for i in 1..=j.min(self.den.len() - 1) {
                acc.sub_assign(&self.den[i].mul(&self.coeffs[j - i]));
            }
            self.coeffs.push(acc.mul(&self.den0_inv));
        }
        self.coeffs[k].clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    InvZetaAtZero,
    InvZetaAtInfinity,
    Cartan,
}

/// Cache of the expansions used by pairings and coproducts.
pub(crate) struct SeriesBank<'a, F: Field> {
    alg: &'a ShuffleAlgebra<F>,
    map: FxHashMap<(Kind, usize, usize), Expansion<F>>,
}

impl<'a, F: Field> SeriesBank<'a, F> {
    pub fn new(alg: &'a ShuffleAlgebra<F>) -> Self {
        SeriesBank { alg, map: FxHashMap::default() }
    }

    fn entry(&mut self, kind: Kind, i: usize, j: usize) -> &mut Expansion<F> {
        let alg = self.alg;
        self.map.entry((kind, i, j)).or_insert_with(|| match kind {
            Kind::InvZetaAtZero => {
                let z = alg.zeta(i, j);
                Expansion::new(&z.den, &z.num)
            }
            Kind::InvZetaAtInfinity => {
                let z = alg.zeta(i, j);
                Expansion::new(&upoly_flip(&z.den), &upoly_flip(&z.num))
            }
            Kind::Cartan => {
                // zeta_ij(x) / zeta_ji(1/x) in y = 1/x
                let a = alg.zeta(i, j);
                let b = alg.zeta(j, i);
                let num = upoly_mul(&upoly_flip(&a.num), &b.den);
                let den = upoly_mul(&upoly_flip(&a.den), &b.num);
                Expansion::new(&num, &den)
            }
        })
    }

    /// `1 / zeta_ij(x)` expanded in `x` around 0.
    pub fn inv_zeta_at_zero(&mut self, i: usize, j: usize) -> &mut Expansion<F> {
        self.entry(Kind::InvZetaAtZero, i, j)
    }

    /// `1 / zeta_ij(x)` expanded in `y = 1/x` around 0.
    pub fn inv_zeta_at_infinity(&mut self, i: usize, j: usize) -> &mut Expansion<F> {
        self.entry(Kind::InvZetaAtInfinity, i, j)
    }

    /// `<h_i^+(z), h_j^-(w)> = zeta_ij(z/w) / zeta_ji(w/z)` in `y = w/z`.
    pub fn cartan(&mut self, i: usize, j: usize) -> &mut Expansion<F> {
        self.entry(Kind::Cartan, i, j)
    }
}

/// Calls `f` on every way of writing `total` as an ordered sum of `parts`
/// nonnegative integers.
pub(crate) fn for_each_composition(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rest: usize, buf: &mut Vec<usize>, parts: usize, f: &mut impl FnMut(&[usize])) {
        if buf.len() + 1 == parts {
            buf.push(rest);
            f(buf);
            buf.pop();
            return;
        }
        for x in 0..=rest {
            buf.push(x);
            rec(rest - x, buf, parts, f);
            buf.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut buf = Vec::with_capacity(parts);
    rec(total, &mut buf, parts, f);
}

/// Distinct orderings of a multiset of vertices given by multiplicities.
pub(crate) fn vertex_orderings(n: &[usize]) -> Vec<Vec<usize>> {
    fn rec(left: &mut Vec<usize>, buf: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.iter().all(|&x| x == 0) {
            out.push(buf.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                buf.push(i);
                rec(left, buf, out);
                buf.pop();
                left[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut n.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Integer vectors of length `len` with entries in `[lo, hi]` summing to `total`.
pub(crate) fn bounded_sums(len: usize, lo: i32, hi: i32, total: i64) -> Vec<Vec<i32>> {
    fn rec(len: usize, lo: i32, hi: i32, total: i64, buf: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if buf.len() == len {
            if total == 0 {
                out.push(buf.clone());
            }
            return;
        }
        let rest = (len - buf.len() - 1) as i64;
        for x in lo..=hi {
            let r = total - x as i64;
            if r < rest * lo as i64 || r > rest * hi as i64 {
                continue;
            }
            buf.push(x);
            rec(len, lo, hi, r, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, lo, hi, total, &mut Vec::new(), &mut out);
    out
}
