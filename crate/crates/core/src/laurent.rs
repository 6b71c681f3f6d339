//! Laurent polynomials in vertex-grouped variables `z_{i,a}`.
//!
//! Variables are laid out block by block: the `n_0` variables of vertex 0,
//! then the `n_1` variables of vertex 1, and so on.

use crate::error::{Error, Result};
use crate::field::{accumulate, accumulate_btree, Field};
use crate::quiver::DimVec;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::collections::BTreeMap;

pub type Exps = SmallVec<[i32; 8]>;

/// Start index of each vertex block, plus the total as last entry.
pub fn offsets(shape: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(shape.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &n in shape {
        acc += n;
        out.push(acc);
    }
    out
}

/// Vertex of each variable position.
pub fn vertex_of(shape: &[usize]) -> Vec<usize> {
    let mut v = Vec::new();
    for (i, &n) in shape.iter().enumerate() {
        v.extend(std::iter::repeat(i).take(n));
    }
    v
}

/// Sorts every vertex block non-increasingly.
pub fn canonical(e: &Exps, shape: &[usize]) -> Exps {
    let mut out = e.clone();
    canonicalize_in_place(&mut out, shape);
    out
}

pub fn canonicalize_in_place(e: &mut [i32], shape: &[usize]) {
    let mut start = 0;
    for &n in shape {
        if n > 1 {
            e[start..start + n].sort_unstable_by(|a, b| b.cmp(a));
        }
        start += n;
    }
}

pub fn is_canonical(e: &[i32], shape: &[usize]) -> bool {
    let mut start = 0;
    for &n in shape {
        if e[start..start + n].windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        start += n;
    }
    true
}

/// Order of the stabilizer of a canonical exponent table: product of factorials of
/// the multiplicities of repeated exponents inside each block.
pub fn stabilizer_order(e: &[i32], shape: &[usize]) -> u64 {
    let mut total = 1u64;
    let mut start = 0;
    for &n in shape {
        let block = &e[start..start + n];
        let mut run = 1u64;
        for w in 0..n {
            if w > 0 && block[w] == block[w - 1] {
                run += 1;
                total *= run;
            } else {
                run = 1;
            }
        }
        start += n;
    }
    total
}

/// Size of the orbit of a canonical exponent table under the block permutation group.
pub fn orbit_size(e: &[i32], shape: &[usize]) -> u64 {
    let mut group = 1u64;
    for &n in shape {
        for k in 2..=n as u64 {
            group *= k;
        }
    }
    group / stabilizer_order(e, shape)
}

fn next_permutation_desc(v: &mut [i32]) -> bool {
    // steps through distinct permutations starting from the non-increasing one
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] <= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] >= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct exponent tables in the orbit of a canonical table.
pub fn orbit(e: &[i32], shape: &[usize]) -> Vec<Exps> {
    let mut out: Vec<Exps> = vec![Exps::from_slice(e)];
    let mut start = 0;
    for &n in shape {
        if n > 1 {
            let mut next = Vec::new();
            for base in &out {
                let mut cur = base.clone();
                loop {
                    next.push(cur.clone());
                    if !next_permutation_desc(&mut cur[start..start + n]) {
                        break;
                    }
                }
            }
            out = next;
        }
        start += n;
    }
    out
}

/// Unstructured Laurent polynomial: exponent table to coefficient.
#[derive(Clone, Debug)]
pub struct RawLaurent<F: Field> {
    pub shape: DimVec,
    pub terms: FxHashMap<Exps, F>,
}

impl<F: Field> RawLaurent<F> {
    pub fn zero(shape: DimVec) -> Self {
        RawLaurent { shape, terms: FxHashMap::default() }
    }

    pub fn nvars(&self) -> usize {
        self.shape.iter().sum()
    }

    pub fn add_term(&mut self, e: Exps, c: &F) {
        accumulate(&mut self.terms, e, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &RawLaurent<F>) -> RawLaurent<F> {
        let mut out = RawLaurent::zero(self.shape.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exps = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, &c1.mul(c2));
            }
        }
        out
    }

    /// Exact quotient by `z_u - z_v`; errors on a nonzero remainder.
    pub fn div_difference(&self, u: usize, v: usize) -> Result<RawLaurent<F>> {
        if self.terms.is_empty() {
            return Ok(self.clone());
        }
        // group by exponent of z_u
        let mut by_k: BTreeMap<i32, Vec<(Exps, F)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[u];
            rest[u] = 0;
            by_k.entry(k).or_default().push((rest, c.clone()));
        }
        let kmin = *by_k.keys().next().expect("nonempty");
        let kmax = *by_k.keys().next_back().expect("nonempty");
        let mut out = RawLaurent::zero(self.shape.clone());
        let mut carry: FxHashMap<Exps, F> = FxHashMap::default();
        let mut k = kmax;
        loop {
            // Q_{k-1} = P_k + z_v Q_k
            let mut cur: FxHashMap<Exps, F> = FxHashMap::default();
            for (mut e, c) in carry.drain() {
                e[v] += 1;
                cur.insert(e, c);
            }
            if let Some(ts) = by_k.get(&k) {
                for (e, c) in ts {
                    accumulate(&mut cur, e.clone(), c);
                }
            }
            if k == kmin {
                if !cur.is_empty() {
                    return Err(Error::Internal(format!(
                        "nonzero remainder dividing by z{u} - z{v}"
                    )));
                }
                break;
            }
            for (e, c) in &cur {
                let mut full = e.clone();
                full[u] = k - 1;
                out.terms.insert(full, c.clone());
            }
            carry = cur;
            k -= 1;
        }
        Ok(out)
    }
}

/// Symmetric Laurent polynomial stored by canonical orbit representatives.
///
/// The stored coefficient is the coefficient of every monomial in the orbit,
/// so the polynomial is `sum_orbits c * (sum of the distinct monomials in the orbit)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymLaurent<F: Field> {
    shape: DimVec,
    terms: BTreeMap<Exps, F>,
}

/// Target of a single variable substitution.
#[derive(Clone, Debug)]
pub enum Subst<F: Field> {
    /// `z -> c * z_target`
    Monomial(F, usize),
    /// `z -> c`
    Scalar(F),
}

impl<F: Field> SymLaurent<F> {
    pub fn zero(shape: DimVec) -> Self {
        SymLaurent { shape, terms: BTreeMap::new() }
    }

    pub fn constant(shape: DimVec, c: F) -> Self {
        let n: usize = shape.iter().sum();
        let mut s = SymLaurent::zero(shape);
        if !c.is_zero() {
            s.terms.insert(SmallVec::from_elem(0, n), c);
        }
        s
    }

    pub fn one(shape: DimVec) -> Self {
        Self::constant(shape, F::one())
    }

    /// The orbit sum of a monomial (any representative) times `c`.
    pub fn orbit_sum(shape: DimVec, e: &[i32], c: F) -> Self {
        let key = canonical(&Exps::from_slice(e), &shape);
        let mut s = SymLaurent::zero(shape);
        if !c.is_zero() {
            s.terms.insert(key, c);
        }
        s
    }

    /// Builds from canonical keys without checking.
    pub fn from_canonical_terms(shape: DimVec, terms: BTreeMap<Exps, F>) -> Self {
        debug_assert!(terms.keys().all(|k| is_canonical(k, &shape)));
        let mut s = SymLaurent { shape, terms };
        s.terms.retain(|_, c| !c.is_zero());
        s
    }

    /// Reads off a symmetric raw table. Only canonical keys are consulted.
    pub fn from_symmetric_raw(raw: &RawLaurent<F>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &raw.terms {
            if is_canonical(e, &raw.shape) && !c.is_zero() {
                terms.insert(e.clone(), c.clone());
            }
        }
        SymLaurent { shape: raw.shape.clone(), terms }
    }

    /// Full group sum of `p` over per-vertex permutations (not normalized).
    pub fn symmetrize(raw: &RawLaurent<F>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &raw.terms {
            let key = canonical(e, &raw.shape);
            let stab = stabilizer_order(&key, &raw.shape);
            let v = c.mul(&F::from_i64(stab as i64));
            accumulate_btree(&mut terms, key, &v);
        }
        SymLaurent { shape: raw.shape.clone(), terms }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn nvars(&self) -> usize {
        self.shape.iter().sum()
    }

    pub fn terms(&self) -> &BTreeMap<Exps, F> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial (any permutation of a canonical key).
    pub fn coeff(&self, e: &[i32]) -> F {
        let key = canonical(&Exps::from_slice(e), &self.shape);
        self.terms.get(&key).cloned().unwrap_or_else(F::zero)
    }

    pub fn to_raw(&self) -> RawLaurent<F> {
        let mut raw = RawLaurent::zero(self.shape.clone());
        for (e, c) in &self.terms {
            for m in orbit(e, &self.shape) {
                raw.terms.insert(m, c.clone());
            }
        }
        raw
    }

    /// Number of monomials in the expanded form.
    pub fn raw_len(&self) -> u64 {
        self.terms.keys().map(|e| orbit_size(e, &self.shape)).sum()
    }

    fn check_shape(&self, o: &Self) {
        assert_eq!(self.shape, o.shape, "shape mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_shape(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            accumulate_btree(&mut out.terms, e.clone(), c);
        }
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        self.check_shape(o);
        for (e, c) in &o.terms {
            accumulate_btree(&mut self.terms, e.clone(), c);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SymLaurent::zero(self.shape.clone());
        }
        SymLaurent {
            shape: self.shape.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.mul(c))).collect(),
        }
    }

    /// Adds `c * orbit_sum(e)`.
    pub fn add_orbit(&mut self, e: &[i32], c: &F) {
        let key = canonical(&Exps::from_slice(e), &self.shape);
        accumulate_btree(&mut self.terms, key, c);
    }

    /// Total degree, if homogeneous and nonzero.
    pub fn vdeg(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum::<i64>());
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Splits into homogeneous components by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<i64, SymLaurent<F>> {
        let mut out: BTreeMap<i64, SymLaurent<F>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d: i64 = e.iter().map(|&x| x as i64).sum();
            out.entry(d)
                .or_insert_with(|| SymLaurent::zero(self.shape.clone()))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// Max over monomials of the sum of the `k_i` largest exponents in each block.
    pub fn degree_profile(&self, k: &[usize]) -> Result<i64> {
        self.profile(k, true)
    }

    /// Min over monomials of the sum of the `k_i` smallest exponents in each block.
    pub fn min_degree_profile(&self, k: &[usize]) -> Result<i64> {
        self.profile(k, false)
    }

    fn profile(&self, k: &[usize], top: bool) -> Result<i64> {
        if self.terms.is_empty() {
            return Err(Error::InvalidInput("degree profile of the zero polynomial".into()));
        }
        if k.len() != self.shape.len() || k.iter().zip(&self.shape).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(format!("{k:?} is not below {:?}", self.shape)));
        }
        let off = offsets(&self.shape);
        let mut best: Option<i64> = None;
        for e in self.terms.keys() {
            let mut s = 0i64;
            for (i, &ki) in k.iter().enumerate() {
                let block = &e[off[i]..off[i + 1]];
                if top {
                    s += block[..ki].iter().map(|&x| x as i64).sum::<i64>();
                } else {
                    s += block[block.len() - ki..].iter().map(|&x| x as i64).sum::<i64>();
                }
            }
            best = Some(match best {
                None => s,
                Some(b) if top => b.max(s),
                Some(b) => b.min(s),
            });
        }
        Ok(best.expect("nonempty"))
    }

    /// Multiplies by `prod_{i,a} z_{i,a}^{k_i}`.
    pub fn shift(&self, k: &[i64]) -> Self {
        let vert = vertex_of(&self.shape);
        SymLaurent {
            shape: self.shape.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let e2: Exps =
                        e.iter().zip(&vert).map(|(&x, &v)| x + k[v] as i32).collect();
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Maps `c -> f(c)` coefficientwise.
    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> SymLaurent<G> {
        let terms: BTreeMap<Exps, G> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        SymLaurent { shape: self.shape.clone(), terms }
    }

    /// Exact substitution; the result keeps the variable layout with substituted
    /// positions carrying exponent 0.
    pub fn substitute(&self, assignment: &[Option<Subst<F>>]) -> Result<RawLaurent<F>> {
        substitute_raw(&self.to_raw(), assignment)
    }

    /// Evaluation at a point with all coordinates nonzero.
    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        let mut acc = F::zero();
        for (e, c) in &self.to_raw().terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                t.mul_assign(&x.pow(k as i64).ok_or_else(|| {
                    Error::DivisionByZero("negative power of a zero coordinate".into())
                })?);
            }
            acc.add_assign(&t);
        }
        Ok(acc)
    }
}

pub fn substitute_raw<F: Field>(
    raw: &RawLaurent<F>,
    assignment: &[Option<Subst<F>>],
) -> Result<RawLaurent<F>> {
    let n = raw.nvars();
    if assignment.len() != n {
        return Err(Error::InvalidInput(format!(
            "assignment has {} entries for {} variables",
            assignment.len(),
            n
        )));
    }
    for s in assignment.iter().flatten() {
        if let Subst::Monomial(_, t) = s {
            if *t >= n || assignment[*t].is_some() {
                return Err(Error::InvalidInput(format!(
                    "substitution target z{t} is itself substituted or out of range"
                )));
            }
        }
    }
    let mut out = RawLaurent::zero(raw.shape.clone());
    for (e, c) in &raw.terms {
        let mut coef = c.clone();
        let mut ne = e.clone();
        for (pos, s) in assignment.iter().enumerate() {
            let Some(s) = s else { continue };
            let k = e[pos];
            ne[pos] = 0;
            if k == 0 {
                continue;
            }
            let (base, target) = match s {
                Subst::Monomial(b, t) => (b, Some(*t)),
                Subst::Scalar(b) => (b, None),
            };
            let p = base.pow(k as i64).ok_or_else(|| {
                Error::DivisionByZero(format!("z{pos} -> 0 raised to power {k}"))
            })?;
            coef.mul_assign(&p);
            if let Some(t) = target {
                ne[t] += k;
            }
        }
        out.add_term(ne, &coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn ex(v: &[i32]) -> Exps {
        Exps::from_slice(v)
    }

    fn raw(shape: &[usize], terms: &[(&[i32], i64)]) -> RawLaurent<Rational> {
        let mut r = RawLaurent::zero(shape.to_vec());
        for (e, c) in terms {
            r.add_term(ex(e), &Rational::from_i64(*c));
        }
        r
    }

    #[test]
    fn symmetrize_examples() {
        let s = SymLaurent::symmetrize(&raw(&[2], &[(&[1, 1], 1)]));
        assert_eq!(s.coeff(&[1, 1]), Rational::from_i64(2));
        let s = SymLaurent::symmetrize(&raw(&[2], &[(&[2, 0], 1)]));
        assert_eq!(s.coeff(&[2, 0]), Rational::one());
        assert_eq!(s.coeff(&[0, 2]), Rational::one());
        let s = SymLaurent::symmetrize(&raw(&[1, 1], &[(&[1, -1], 1)]));
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&[1, -1]), Rational::one());
    }

    #[test]
    fn symmetrize_twice_scales_by_group_order() {
        let p = raw(&[3, 2], &[(&[1, 0, -2, 3, 3], 5), (&[0, 0, 1, 2, -1], -2)]);
        let s1 = SymLaurent::symmetrize(&p);
        let s2 = SymLaurent::symmetrize(&s1.to_raw());
        assert_eq!(s2, s1.scale(&Rational::from_i64(12)));
    }

    #[test]
    fn orbits_enumerate_distinct_permutations() {
        assert_eq!(orbit(&[2, 1, 1], &[3]).len(), 3);
        assert_eq!(orbit(&[2, 1, 0, 5, 4], &[3, 2]).len(), 12);
        assert_eq!(orbit_size(&[2, 1, 1, 0], &[4]), 12);
    }

    #[test]
    fn degree_profile_examples() {
        let mut f = SymLaurent::<Rational>::zero(vec![2]);
        f.add_orbit(&[2, -1], &Rational::one());
        assert_eq!(f.degree_profile(&[1]).unwrap(), 2);
        assert_eq!(f.degree_profile(&[0]).unwrap(), 0);
        assert_eq!(f.degree_profile(&[2]).unwrap(), 1);
        assert_eq!(f.min_degree_profile(&[1]).unwrap(), -1);
        assert!(SymLaurent::<Rational>::zero(vec![2]).degree_profile(&[1]).is_err());
    }

    #[test]
    fn wheel_substitution_of_monomial() {
        // z1 z2 z3 with z1 -> (q/t) z2, z3 -> (1/t) z2
        let q = Rational::new(3, 2);
        let t = Rational::new(5, 7);
        let f = SymLaurent::orbit_sum(vec![3], &[1, 1, 1], Rational::one());
        let a = vec![
            Some(Subst::Monomial(q.div(&t).unwrap(), 1)),
            None,
            Some(Subst::Monomial(t.inv().unwrap(), 1)),
        ];
        let r = f.substitute(&a).unwrap();
        assert_eq!(r.terms.len(), 1);
        let want = q.div(&t.mul(&t)).unwrap();
        assert_eq!(r.terms.get(&ex(&[0, 3, 0])).unwrap(), &want);
    }

    #[test]
    fn substitution_rejects_zero_denominators() {
        let f = SymLaurent::orbit_sum(vec![1], &[-1], Rational::one());
        assert!(f.substitute(&[Some(Subst::Scalar(Rational::zero()))]).is_err());
        assert!(f.substitute(&[None]).is_ok());
    }

    #[test]
    fn exact_division_by_difference() {
        // (z0 - z1)(z0^2 + z1^-1)
        let p = raw(&[2], &[(&[3, 0], 1), (&[1, -1], 1), (&[2, 1], -1), (&[0, 0], -1)]);
        let q = p.div_difference(0, 1).unwrap();
        let want = raw(&[2], &[(&[2, 0], 1), (&[0, -1], 1)]);
        assert_eq!(q.terms, want.terms);
        let bad = raw(&[2], &[(&[1, 0], 1)]);
        assert!(bad.div_difference(0, 1).is_err());
    }
}
