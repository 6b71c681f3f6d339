//! Kac polynomials, truncated power series and the plethystic exponential.

use crate::error::{Error, Result};
use crate::quiver::{sub_vectors, DimVec, Quiver};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::collections::VecDeque;

/// Truncated power series in commuting variables `z_i`, with coefficients
/// indexed by `0 <= n <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<T> {
    bound: DimVec,
    coeffs: Vec<T>,
}

impl<T> TruncSeries<T>
where
    T: Clone + Zero + One + for<'a> std::ops::Mul<&'a T, Output = T>,
{
    pub fn zero(bound: DimVec) -> Self {
        let len = bound.iter().map(|b| b + 1).product();
        TruncSeries { bound, coeffs: vec![T::zero(); len] }
    }

    pub fn one(bound: DimVec) -> Self {
        let mut s = Self::zero(bound);
        s.coeffs[0] = T::one();
        s
    }

    pub fn bound(&self) -> &[usize] {
        &self.bound
    }

    fn index(&self, n: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for (&x, &b) in n.iter().zip(&self.bound) {
            if x > b {
                return None;
            }
            idx = idx * (b + 1) + x;
        }
        Some(idx)
    }

    fn exponent(&self, mut idx: usize) -> DimVec {
        let mut out = vec![0; self.bound.len()];
        for i in (0..self.bound.len()).rev() {
            let b = self.bound[i] + 1;
            out[i] = idx % b;
            idx /= b;
        }
        out
    }

    pub fn coeff(&self, n: &[usize]) -> T {
        self.index(n).map(|i| self.coeffs[i].clone()).unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, n: &[usize], v: T) {
        if let Some(i) = self.index(n) {
            self.coeffs[i] = v;
        }
    }

    /// `(n, coefficient)` pairs in lexicographic order of `n`.
    pub fn iter(&self) -> impl Iterator<Item = (DimVec, &T)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, c)| (self.exponent(i), c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.bound.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exponent(i);
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = other.exponent(j);
                let sum: DimVec = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if let Some(k) = out.index(&sum) {
                    out.coeffs[k] = out.coeffs[k].clone() + a.clone() * b;
                }
            }
        }
        out
    }
}

impl TruncSeries<BigInt> {
    /// Coefficients as a map keyed by the comma separated exponent.
    pub fn to_table(&self) -> Vec<(DimVec, BigInt)> {
        self.iter().map(|(n, c)| (n, c.clone())).collect()
    }
}

fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n + BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// `Exp[sum d_n z^n] = prod_n (1 - z^n)^{-d_n}`, truncated to the bound of `input`.
pub fn plethystic_exp(input: &TruncSeries<BigInt>) -> Result<TruncSeries<BigInt>> {
    let bound = input.bound.clone();
    if !input.coeffs[0].is_zero() {
        return Err(Error::InvalidInput("plethystic exponential needs a zero constant term".into()));
    }
    let mut out = TruncSeries::one(bound.clone());
    for (n, d) in input.iter() {
        if d.is_zero() {
            continue;
        }
        if d.is_negative() {
            return Err(Error::InvalidInput(format!("negative coefficient {d} at {n:?}")));
        }
        // (1 - z^n)^{-d} = sum_k C(d+k-1, k) z^{kn}
        let mut factor = TruncSeries::zero(bound.clone());
        let mut k = 0usize;
        loop {
            let e: DimVec = n.iter().map(|x| x * k).collect();
            if factor.index(&e).is_none() {
                break;
            }
            // C(d + k - 1, k) = d (d+1) ... (d+k-1) / k!
            factor.set(&e, binomial(d, k));
            k += 1;
        }
        out = out.mul(&factor);
    }
    Ok(out)
}

/// `A_{Q,n}(t)` as a coefficient list, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacPoly {
    pub n: DimVec,
    pub coeffs: Vec<BigInt>,
}

impl KacPoly {
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// Partitions of `n` as non-increasing part lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn conjugate(l: &[usize]) -> Vec<usize> {
    let len = l.first().copied().unwrap_or(0);
    (1..=len).map(|k| l.iter().filter(|&&x| x >= k).count()).collect()
}

/// `<l, m> = sum_k l'_k m'_k`.
fn part_form(lc: &[usize], mc: &[usize]) -> i64 {
    lc.iter().zip(mc).map(|(a, b)| (a * b) as i64).sum()
}

fn rpow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Hua's generating function `sum_pi prod_e v^{<pi_s, pi_t>} / prod_i v^{<pi_i, pi_i>} b_{pi_i}(1/v)`
/// at a numeric value `v`, truncated at `bound`.
fn hua_series(q: &Quiver, bound: &[usize], v: &BigRational) -> TruncSeries<BigRational> {
    let parts: Vec<Vec<(Vec<usize>, Vec<usize>)>> = (0..=*bound.iter().max().unwrap_or(&0))
        .map(|n| partitions(n).into_iter().map(|p| {
            let c = conjugate(&p);
            (p, c)
        }).collect())
        .collect();
    let inv = v.recip();
    let b_factor = |p: &[usize]| -> BigRational {
        // prod_k prod_{j <= m_k} (1 - v^{-j})
        let mut acc = BigRational::one();
        let mut counts: FxHashMap<usize, usize> = FxHashMap::default();
        for &x in p {
            *counts.entry(x).or_insert(0) += 1;
        }
        for (_, m) in counts {
            for j in 1..=m {
                acc *= BigRational::one() - rpow(&inv, j as i64);
            }
        }
        acc
    };
    let mut out = TruncSeries::zero(bound.to_vec());
    for n in sub_vectors(bound) {
        // all tuples of partitions of the n_i
        let mut total = BigRational::zero();
        let mut choice = vec![0usize; n.len()];
        loop {
            let pi: Vec<&(Vec<usize>, Vec<usize>)> = (0..n.len()).map(|i| &parts[n[i]][choice[i]]).collect();
            let mut expo = 0i64;
            for e in q.edges() {
                expo += part_form(&pi[e.source].1, &pi[e.target].1);
            }
            let mut den = BigRational::one();
            for p in &pi {
                expo -= part_form(&p.1, &p.1);
                den *= b_factor(&p.0);
            }
            total += rpow(v, expo) / den;
            // next tuple
            let mut i = 0;
            loop {
                if i == n.len() {
                    break;
                }
                choice[i] += 1;
                if choice[i] < parts[n[i]].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n.len() {
                break;
            }
        }
        out.set(&n, total);
    }
    out
}

/// `log(P)` for a series with constant term 1.
fn series_log(p: &TruncSeries<BigRational>) -> TruncSeries<BigRational> {
    let bound = p.bound.clone();
    let mut u = p.clone();
    u.coeffs[0] = BigRational::zero();
    let depth: usize = bound.iter().sum();
    let mut out = TruncSeries::zero(bound.clone());
    let mut power = TruncSeries::one(bound);
    for k in 1..=depth {
        power = power.mul(&u);
        let sign = if k % 2 == 1 { BigRational::one() } else { -BigRational::one() };
        let f = sign / BigRational::from_integer(BigInt::from(k));
        for (o, c) in out.coeffs.iter_mut().zip(&power.coeffs) {
            *o += &f * c;
        }
    }
    out
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Upper bound for `deg A_{Q,n}`: `1 - (n, n)` with the Euler form, at least 0.
pub fn kac_degree_bound(q: &Quiver, n: &[usize]) -> usize {
    let sq: i64 = n.iter().map(|&x| (x * x) as i64).sum();
    let arrows: i64 = q.edges().iter().map(|e| (n[e.source] * n[e.target]) as i64).sum();
    (1 + arrows - sq).max(0) as usize
}

/// Largest dimension entry accepted by [`kac_hua_box`].
pub const DEFAULT_HUA_BOUND: usize = 6;

/// Kac polynomials for every `0 < n <= bound` via Hua's formula. The generating
/// function is evaluated at integer points, the plethystic logarithm is taken
/// numerically and the resulting integer values are interpolated; every value
/// must be an integer and one extra point must agree with the interpolant.
pub fn kac_hua_box(q: &Quiver, bound: &[usize]) -> Result<Vec<KacPoly>> {
    if bound.len() != q.vertex_count() {
        return Err(Error::InvalidInput("dimension vector length differs from vertex count".into()));
    }
    if let Some(&b) = bound.iter().find(|&&b| b > DEFAULT_HUA_BOUND) {
        return Err(Error::ResourceLimit(format!(
            "dimension entry {b} exceeds the Hua bound {DEFAULT_HUA_BOUND}"
        )));
    }
    let dims: Vec<DimVec> = sub_vectors(bound).into_iter().filter(|n| n.iter().any(|&x| x > 0)).collect();
    let max_deg = dims.iter().map(|n| kac_degree_bound(q, n)).max().unwrap_or(0);
    let points: Vec<i64> = (2..(2 + max_deg as i64 + 2)).collect();
    let depth: usize = bound.iter().copied().max().unwrap_or(0);
    // log P at v = t^r for every needed power
    let mut logs: FxHashMap<BigInt, TruncSeries<BigRational>> = FxHashMap::default();
    for &t in &points {
        for r in 1..=depth.max(1) {
            let v = num_traits::pow(BigInt::from(t), r);
            if !logs.contains_key(&v) {
                let s = hua_series(q, bound, &BigRational::from_integer(v.clone()));
                logs.insert(v, series_log(&s));
            }
        }
    }
    let mut out = Vec::new();
    for n in dims {
        let g = n.iter().copied().fold(0, |a: usize, b| a.gcd(&b));
        let mut values = Vec::new();
        for &t in &points {
            let mut f = BigRational::zero();
            for r in (1..=g).filter(|r| g % r == 0) {
                let mu = mobius(r);
                if mu == 0 {
                    continue;
                }
                let v = num_traits::pow(BigInt::from(t), r);
                let sub: DimVec = n.iter().map(|x| x / r).collect();
                let c = logs[&v].coeff(&sub);
                f += c * BigRational::new(BigInt::from(mu), BigInt::from(r));
            }
            let a = f * BigRational::from_integer(BigInt::from(t - 1));
            if !a.is_integer() {
                return Err(Error::Internal(format!("Hua count at t = {t}, n = {n:?} is not an integer: {a}")));
            }
            values.push((BigInt::from(t), a.to_integer()));
        }
        let deg = kac_degree_bound(q, &n);
        let coeffs = interpolate(&values[..deg + 1])?;
        let poly = KacPoly { n: n.clone(), coeffs };
        for (t, v) in &values[deg + 1..] {
            if &poly.eval(t) != v {
                return Err(Error::Internal(format!("Hua values for {n:?} exceed the degree bound {deg}")));
            }
        }
        out.push(poly);
    }
    Ok(out)
}

/// Single Kac polynomial via [`kac_hua_box`].
pub fn kac_hua(q: &Quiver, n: &[usize]) -> Result<KacPoly> {
    if n.iter().all(|&x| x == 0) {
        return Err(Error::InvalidInput("the Kac polynomial is defined for nonzero dimension vectors".into()));
    }
    kac_hua_box(q, n)?
        .into_iter()
        .find(|p| p.n == n)
        .ok_or_else(|| Error::Internal("missing dimension vector".into()))
}

/// Newton interpolation with integer output; trailing zeros trimmed.
fn interpolate(points: &[(BigInt, BigInt)]) -> Result<Vec<BigInt>> {
    let k = points.len();
    let xs: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.0.clone())).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.1.clone())).collect();
    for j in 1..k {
        for i in (j..k).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand the Newton form
    let mut poly = vec![BigRational::zero(); k];
    for i in (0..k).rev() {
        // poly = poly * (x - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); k];
        for (d, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < k {
                next[d + 1] += c;
            }
            next[d] -= c * &xs[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    let mut out: Vec<BigInt> = Vec::with_capacity(k);
    for c in poly {
        if !c.is_integer() {
            return Err(Error::Internal(format!("non-integral Kac coefficient {c}")));
        }
        out.push(c.to_integer());
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// `Exp[A_Q(1, z)]` truncated at `bound`.
pub fn kac_exp_series(q: &Quiver, bound: &[usize]) -> Result<(Vec<KacPoly>, TruncSeries<BigInt>)> {
    let polys = kac_hua_box(q, bound)?;
    let mut a = TruncSeries::zero(bound.to_vec());
    for p in &polys {
        a.set(&p.n, p.at_one());
    }
    Ok((polys, plethystic_exp(&a)?))
}

// ---------------------------------------------------------------------------
// Brute force over small finite fields.

/// Arithmetic tables of `GF(q)` for `q in {2, 3, 4}`.
#[derive(Clone, Debug)]
struct SmallField {
    q: usize,
    add: [[u8; 4]; 4],
    mul: [[u8; 4]; 4],
    neg: [u8; 4],
    inv: [u8; 4],
    /// generator of the multiplicative group
    prim: u8,
}

impl SmallField {
    fn new(q: usize) -> Result<Self> {
        let mut f = SmallField { q, add: [[0; 4]; 4], mul: [[0; 4]; 4], neg: [0; 4], inv: [0; 4], prim: 1 };
        match q {
            2 | 3 => {
                for a in 0..q {
                    for b in 0..q {
                        f.add[a][b] = ((a + b) % q) as u8;
                        f.mul[a][b] = ((a * b) % q) as u8;
                    }
                }
                f.prim = if q == 3 { 2 } else { 1 };
            }
            4 => {
                // elements are a0 + a1 x with x^2 = x + 1
                for a in 0..4usize {
                    for b in 0..4usize {
                        f.add[a][b] = (a ^ b) as u8;
                        let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                        let c2 = a1 & b1;
                        let c1 = (a0 & b1) ^ (a1 & b0) ^ c2;
                        let c0 = (a0 & b0) ^ c2;
                        f.mul[a][b] = (c0 | (c1 << 1)) as u8;
                    }
                }
                f.prim = 2;
            }
            _ => return Err(Error::InvalidInput(format!("field size {q} is not supported (use 2, 3 or 4)"))),
        }
        for a in 0..q {
            for b in 0..q {
                if f.add[a][b] == 0 {
                    f.neg[a] = b as u8;
                }
                if f.mul[a][b] == 1 {
                    f.inv[a] = b as u8;
                }
            }
        }
        Ok(f)
    }

    #[inline]
    fn sub(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][self.neg[b as usize] as usize]
    }
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(f: &SmallField, rows: &mut Vec<Vec<u8>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv[rows[r][c] as usize];
        for x in rows[r].iter_mut() {
            *x = f.mul[*x as usize][inv as usize];
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let fac = rows[i][c];
                for j in 0..ncols {
                    let t = f.mul[fac as usize][rows[r][j] as usize];
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn nullspace(f: &SmallField, mut rows: Vec<Vec<u8>>, ncols: usize) -> Vec<Vec<u8>> {
    let pivots = rref(f, &mut rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg[rows[r][free] as usize];
        }
        out.push(v);
    }
    out
}

/// A representation: one `target x source` matrix per edge, row major.
struct RepShape {
    n: DimVec,
    /// offset of vertex i's block inside an endomorphism vector
    block: Vec<usize>,
    end_len: usize,
    edges: Vec<(usize, usize, usize)>, // (source, target, offset in the entry vector)
    entries: usize,
}

impl RepShape {
    fn new(q: &Quiver, n: &[usize]) -> Self {
        let mut block = Vec::new();
        let mut acc = 0;
        for &x in n {
            block.push(acc);
            acc += x * x;
        }
        let mut edges = Vec::new();
        let mut off = 0;
        for e in q.edges() {
            edges.push((e.source, e.target, off));
            off += n[e.source] * n[e.target];
        }
        RepShape { n: n.to_vec(), block, end_len: acc, edges, entries: off }
    }

    /// Linear system for `phi_t M_e = M_e phi_s`.
    fn commutation_rows(&self, f: &SmallField, m: &[u8]) -> Vec<Vec<u8>> {
        let mut rows = Vec::new();
        for &(s, t, off) in &self.edges {
            let (ns, nt) = (self.n[s], self.n[t]);
            let me = |r: usize, c: usize| m[off + r * ns + c];
            for r in 0..nt {
                for c in 0..ns {
                    let mut row = vec![0u8; self.end_len];
                    // (phi_t M)_{rc} = sum_k phi_t[r][k] M[k][c]
                    for k in 0..nt {
                        let idx = self.block[t] + r * nt + k;
                        row[idx] = f.add[row[idx] as usize][me(k, c) as usize];
                    }
                    // - (M phi_s)_{rc} = - sum_k M[r][k] phi_s[k][c]
                    for k in 0..ns {
                        let idx = self.block[s] + k * ns + c;
                        row[idx] = f.sub(row[idx], me(r, k));
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    fn end_mul(&self, f: &SmallField, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.end_len];
        for (i, &ni) in self.n.iter().enumerate() {
            let o = self.block[i];
            for r in 0..ni {
                for c in 0..ni {
                    let mut acc = 0u8;
                    for k in 0..ni {
                        acc = f.add[acc as usize][f.mul[a[o + r * ni + k] as usize][b[o + k * ni + c] as usize] as usize];
                    }
                    out[o + r * ni + c] = acc;
                }
            }
        }
        out
    }

    fn identity(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.end_len];
        for (i, &ni) in self.n.iter().enumerate() {
            for r in 0..ni {
                out[self.block[i] + r * ni + r] = 1;
            }
        }
        out
    }

    fn is_nilpotent(&self, f: &SmallField, a: &[u8]) -> bool {
        let mut p = a.to_vec();
        let max = self.n.iter().copied().max().unwrap_or(0);
        for _ in 1..max {
            p = self.end_mul(f, &p, a);
        }
        p.iter().all(|&x| x == 0)
    }

    /// Whether the endomorphism algebra with the given basis is local with
    /// residue field `GF(q)`.
    fn is_split_local(&self, f: &SmallField, basis: &[Vec<u8>]) -> bool {
        let id = self.identity();
        let mut nil: Vec<Vec<u8>> = Vec::new();
        for b in basis {
            let mut found = None;
            for lam in 0..f.q as u8 {
                let shifted: Vec<u8> = b.iter().zip(&id).map(|(&x, &i)| f.sub(x, f.mul[lam as usize][i as usize])).collect();
                if self.is_nilpotent(f, &shifted) {
                    found = Some(shifted);
                    break;
                }
            }
            match found {
                Some(v) => nil.push(v),
                None => return false,
            }
        }
        // the algebra generated by the nilpotent parts must itself be nilpotent
        let mut w1 = nil;
        rref(f, &mut w1, self.end_len);
        let mut w = w1.clone();
        for _ in 0..=basis.len() {
            if w.is_empty() {
                return true;
            }
            let mut next = Vec::new();
            for a in &w {
                for b in &w1 {
                    next.push(self.end_mul(f, a, b));
                }
            }
            rref(f, &mut next, self.end_len);
            w = next;
        }
        w.is_empty()
    }
}

fn gl_order(n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    (0..n).map(|k| qn - q.pow(k as u32)).product()
}

/// Default ceiling on the number of endomorphism systems solved per count.
pub const DEFAULT_BRUTE_CEILING: u128 = 6_000_000;

fn decode(mut idx: u64, q: usize, out: &mut [u8]) {
    for x in out.iter_mut() {
        *x = (idx % q as u64) as u8;
        idx /= q as u64;
    }
}

fn encode(v: &[u8], q: usize) -> u64 {
    v.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

/// Orbits of `prod GL(n_i)` on the matrices of the first edge, as
/// (representative index, orbit size).
fn first_edge_orbits(f: &SmallField, shape: &RepShape) -> Vec<(u64, u64)> {
    let (s, t, _) = shape.edges[0];
    let (ns, nt) = (shape.n[s], shape.n[t]);
    let len = ns * nt;
    let total = (f.q as u64).pow(len as u32);
    // generators: transvections and a primitive diagonal scaling on each side
    type Gen = Box<dyn Fn(&[u8]) -> Vec<u8>>;
    let mut gens: Vec<Gen> = Vec::new();
    let fc = f.clone();
    let loop_edge = s == t;
    for i in 0..nt {
        for j in 0..nt {
            if i == j {
                continue;
            }
            let fc = fc.clone();
            // M -> (I + E_ij) M (I - E_ij) on a loop, (I + E_ij) M otherwise
            gens.push(Box::new(move |m: &[u8]| {
                let mut out = m.to_vec();
                for c in 0..ns {
                    out[i * ns + c] = fc.add[out[i * ns + c] as usize][m[j * ns + c] as usize];
                }
                if loop_edge {
                    let tmp = out.clone();
                    for r in 0..nt {
                        out[r * ns + j] = fc.sub(tmp[r * ns + j], tmp[r * ns + i]);
                    }
                }
                out
            }));
        }
    }
    if !loop_edge {
        for i in 0..ns {
            for j in 0..ns {
                if i == j {
                    continue;
                }
                let fc = fc.clone();
                // M -> M (I + E_ij)
                gens.push(Box::new(move |m: &[u8]| {
                    let mut out = m.to_vec();
                    for r in 0..nt {
                        out[r * ns + j] = fc.add[out[r * ns + j] as usize][m[r * ns + i] as usize];
                    }
                    out
                }));
            }
        }
    }
    if f.q > 2 {
        let p = f.prim;
        let pinv = f.inv[p as usize];
        if nt > 0 {
            let fc = fc.clone();
            gens.push(Box::new(move |m: &[u8]| {
                let mut out = m.to_vec();
                for c in 0..ns {
                    out[c] = fc.mul[p as usize][out[c] as usize];
                }
                if loop_edge {
                    for r in 0..nt {
                        out[r * ns] = fc.mul[out[r * ns] as usize][pinv as usize];
                    }
                }
                out
            }));
        }
        if !loop_edge && ns > 0 {
            let fc = fc.clone();
            gens.push(Box::new(move |m: &[u8]| {
                let mut out = m.to_vec();
                for r in 0..nt {
                    out[r * ns] = fc.mul[out[r * ns] as usize][p as usize];
                }
                out
            }));
        }
    }
    let mut seen = vec![false; total as usize];
    let mut out = Vec::new();
    let mut buf = vec![0u8; len];
    for start in 0..total {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut size = 0u64;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            size += 1;
            decode(x, f.q, &mut buf);
            for g in &gens {
                let y = encode(&g(&buf), f.q);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        out.push((start, size));
    }
    out
}

/// Number of isomorphism classes of absolutely indecomposable representations of
/// dimension `n` over `GF(q)`, for each `q` in `field_sizes`. Uses
/// `#classes = sum_x |Aut(x)| / |G|`, with `|Aut(x)| = (q-1) q^{dim End - 1}`
/// for absolutely indecomposable `x`, and groups the first edge's matrices into
/// orbits.
pub fn kac_bruteforce(q: &Quiver, n: &[usize], field_sizes: &[usize]) -> Result<Vec<BigInt>> {
    kac_bruteforce_with_ceiling(q, n, field_sizes, DEFAULT_BRUTE_CEILING)
}

pub fn kac_bruteforce_with_ceiling(q: &Quiver, n: &[usize], field_sizes: &[usize], ceiling: u128) -> Result<Vec<BigInt>> {
    if n.len() != q.vertex_count() {
        return Err(Error::InvalidInput("dimension vector length differs from vertex count".into()));
    }
    let size: usize = n.iter().sum();
    if size == 0 || size > 3 {
        return Err(Error::ResourceLimit(format!("brute force needs 0 < |n| <= 3, got {n:?}")));
    }
    let shape = RepShape::new(q, n);
    let mut out = Vec::new();
    for &fq in field_sizes {
        let f = SmallField::new(fq)?;
        let qq = fq as u128;
        let first_len = shape.edges.first().map(|&(s, t, _)| n[s] * n[t]).unwrap_or(0);
        let orbits: Vec<(u64, u64)> = if first_len > 0 { first_edge_orbits(&f, &shape) } else { vec![(0, 1)] };
        let rest_len = shape.entries - first_len;
        let rest_total = qq.checked_pow(rest_len as u32).unwrap_or(u128::MAX);
        let work = rest_total.saturating_mul(orbits.len() as u128);
        if work > ceiling {
            return Err(Error::ResourceLimit(format!(
                "brute force for n = {n:?} over GF({fq}) needs {work} systems (ceiling {ceiling})"
            )));
        }
        let group: u128 = n.iter().map(|&x| gl_order(x, qq)).product();
        let sum: u128 = orbits
            .par_iter()
            .map(|&(rep, osize)| {
                let mut m = vec![0u8; shape.entries];
                decode(rep, fq, &mut m[..first_len]);
                let mut acc = 0u128;
                for r in 0..rest_total as u64 {
                    decode(r, fq, &mut m[first_len..]);
                    let basis = nullspace(&f, shape.commutation_rows(&f, &m), shape.end_len);
                    let e = basis.len();
                    let ok = e == 1 || shape.is_split_local(&f, &basis);
                    if ok {
                        acc += (qq - 1) * qq.pow(e as u32 - 1);
                    }
                }
                acc * osize as u128
            })
            .sum();
        if sum % group != 0 {
            return Err(Error::Internal(format!("orbit count {sum}/{group} is not an integer")));
        }
        out.push(BigInt::from(sum / group));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dimension conjecture harness.

/// One coefficient of `chi_{B_0}(z) = Exp[A_Q(1, z)]`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub n: DimVec,
    /// `dim B_{0|n}` (minimum over seeds, the generic value); `None` if capped
    pub lhs: Option<usize>,
    #[serde(serialize_with = "crate::report::bigint_str")]
    pub rhs: BigInt,
    pub per_seed: Vec<Option<usize>>,
    pub seeds_agree: bool,
    pub equal: Option<bool>,
    pub capped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub quiver: Quiver,
    pub upto: DimVec,
    pub seeds: Vec<u64>,
    pub rows: Vec<ConjectureRow>,
    /// true iff every computed row is equal and all seeds agree
    pub all_equal: bool,
    pub capped: Vec<DimVec>,
}

/// Compares `dim B_{0|n}` (wheel kernels over each seed's specialization, reduced
/// modulo a large prime) with the coefficients of `Exp[A_Q(1, z)]` for all
/// `0 <= n <= upto`. Runs `(n, seed)` jobs on a pool of `jobs` threads; the
/// report does not depend on `jobs`.
pub fn check_conjecture(q: &Quiver, upto: &[usize], seeds: &[u64], ceiling: usize, jobs: usize) -> Result<ConjectureReport> {
    use crate::field::ModP;
    use crate::params::modp_params;
    use crate::shuffle::ShuffleAlgebra;
    use crate::slope::{slope_dim, slope_from_ints};

    if seeds.is_empty() {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    let (_, rhs) = kac_exp_series(q, upto)?;
    let algs: Vec<ShuffleAlgebra<ModP>> = seeds
        .iter()
        .map(|&s| ShuffleAlgebra::new(q.clone(), modp_params(q, s)?))
        .collect::<Result<_>>()?;
    let m = slope_from_ints(&vec![0; q.vertex_count()]);
    let dims = sub_vectors(upto);
    let tasks: Vec<(usize, usize)> = (0..dims.len()).flat_map(|i| (0..seeds.len()).map(move |s| (i, s))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let results: Vec<Result<Option<usize>>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, s)| match slope_dim(&algs[s], &m, &dims[i], ceiling) {
                Ok(d) => Ok(Some(d)),
                Err(Error::ResourceLimit(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    });
    let results: Vec<Option<usize>> = results.into_iter().collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut capped = Vec::new();
    let mut all_equal = true;
    for (i, n) in dims.iter().enumerate() {
        let per_seed: Vec<Option<usize>> = results[i * seeds.len()..(i + 1) * seeds.len()].to_vec();
        let rhs_n = rhs.coeff(n);
        let computed: Vec<usize> = per_seed.iter().flatten().copied().collect();
        let cap = if computed.len() < per_seed.len() {
            capped.push(n.clone());
            Some(format!("more than {ceiling} candidate monomials"))
        } else {
            None
        };
        let seeds_agree = computed.windows(2).all(|w| w[0] == w[1]);
        let lhs = computed.iter().copied().min().filter(|_| cap.is_none());
        let equal = lhs.map(|l| BigInt::from(l) == rhs_n);
        if equal == Some(false) || !seeds_agree {
            all_equal = false;
        }
        rows.push(ConjectureRow { n: n.clone(), lhs, rhs: rhs_n, per_seed, seeds_agree, equal, capped: cap });
    }
    Ok(ConjectureReport { quiver: q.clone(), upto: upto.to_vec(), seeds: seeds.to_vec(), rows, all_equal, capped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn partitions_and_conjugates() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(3), -1);
    }

    #[test]
    fn exp_of_single_variable() {
        let mut s = TruncSeries::zero(vec![5]);
        s.set(&[1], b(1));
        let e = plethystic_exp(&s).unwrap();
        for k in 0..=5 {
            assert_eq!(e.coeff(&[k]), b(1));
        }
        let z = TruncSeries::<BigInt>::zero(vec![3]);
        assert_eq!(plethystic_exp(&z).unwrap(), TruncSeries::one(vec![3]));
        let mut neg = TruncSeries::zero(vec![2]);
        neg.set(&[1], b(-1));
        assert!(plethystic_exp(&neg).is_err());
    }

    #[test]
    fn interpolation_roundtrip() {
        let pts: Vec<(BigInt, BigInt)> = (2..6).map(|t| (b(t), b(3 * t * t * t - t + 7))).collect();
        assert_eq!(interpolate(&pts).unwrap(), vec![b(7), b(-1), b(0), b(3)]);
    }

    #[test]
    fn gf4_is_a_field() {
        let f = SmallField::new(4).unwrap();
        for a in 1..4 {
            assert_eq!(f.mul[a][f.inv[a] as usize], 1);
        }
        // x * x = x + 1
        assert_eq!(f.mul[2][2], 3);
        assert!(SmallField::new(5).is_err());
    }
}
