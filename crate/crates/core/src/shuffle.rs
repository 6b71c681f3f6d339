//! The shuffle algebra: zeta factors, the shuffle product, wheel conditions and shifts.

use crate::error::{Error, Result};
use crate::field::{accumulate, Field};
use crate::laurent::{offsets, vertex_of, Exps, RawLaurent, SymLaurent};
use crate::params::Params;
use crate::quiver::{DimVec, Quiver};
use crate::schur::schur_expansion;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

/// Horizontal degree (signed by side) and vertical degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub hdeg: Vec<i64>,
    pub vdeg: i64,
}

/// An element of the shuffle algebra (`Plus`) or of its opposite (`Minus`).
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F: Field> {
    pub side: Side,
    pub poly: SymLaurent<F>,
}

impl<F: Field> Element<F> {
    pub fn new(side: Side, poly: SymLaurent<F>) -> Self {
        Element { side, poly }
    }

    pub fn zero(side: Side, shape: DimVec) -> Self {
        Element { side, poly: SymLaurent::zero(shape) }
    }

    pub fn shape(&self) -> &[usize] {
        self.poly.shape()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `None` unless homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let vdeg = self.poly.vdeg()?;
        let s = self.side.sign();
        Some(Bidegree { hdeg: self.shape().iter().map(|&n| s * n as i64).collect(), vdeg })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.side, o.side);
        Element { side: self.side, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.side, o.side);
        Element { side: self.side, poly: self.poly.sub(&o.poly) }
    }

    pub fn scale(&self, c: &F) -> Self {
        Element { side: self.side, poly: self.poly.scale(c) }
    }

    /// Shift automorphism: multiplies by `prod z_{ia}^{k_i}` on the plus side and
    /// by `prod z_{ia}^{-k_i}` on the minus side.
    pub fn tau(&self, k: &[i64]) -> Self {
        let s = self.side.sign();
        let kk: Vec<i64> = k.iter().map(|&x| s * x).collect();
        Element { side: self.side, poly: self.poly.shift(&kk) }
    }
}

/// Univariate Laurent polynomials in `x`, numerator over denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaFactor<F: Field> {
    pub num: BTreeMap<i32, F>,
    pub den: BTreeMap<i32, F>,
}

fn upoly_mul<F: Field>(a: &BTreeMap<i32, F>, b: &BTreeMap<i32, F>) -> BTreeMap<i32, F> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            crate::field::accumulate_btree(&mut out, i + j, &x.mul(y));
        }
    }
    out
}

impl<F: Field> ZetaFactor<F> {
    pub fn eval(&self, x: &F) -> Option<F> {
        let ev = |p: &BTreeMap<i32, F>| -> Option<F> {
            let mut acc = F::zero();
            for (e, c) in p {
                acc.add_assign(&c.mul(&x.pow(*e as i64)?));
            }
            Some(acc)
        };
        ev(&self.num)?.div(&ev(&self.den)?)
    }
}

/// Which wheel specialization: pattern 1 puts `a, c` at the edge source,
/// pattern 2 puts them at the edge target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WheelRowKey {
    pub edge: u32,
    pub pattern: u8,
    /// Exponent of the surviving wheel variable `z_b`.
    pub zb: i32,
    /// Canonical exponents of the untouched variables.
    pub rest: Exps,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WheelReport {
    pub passed: bool,
    pub conditions_checked: usize,
    pub witness: Option<WheelRowKey>,
}

/// Shuffle algebra of a quiver at a choice of parameters.
#[derive(Clone, Debug)]
pub struct ShuffleAlgebra<F: Field> {
    quiver: Quiver,
    params: Params<F>,
}

impl<F: Field> ShuffleAlgebra<F> {
    pub fn new(quiver: Quiver, params: Params<F>) -> Result<Self> {
        if params.t.len() != quiver.edge_count() {
            return Err(Error::InvalidInput(format!(
                "{} edge parameters for {} edges",
                params.t.len(),
                quiver.edge_count()
            )));
        }
        Ok(ShuffleAlgebra { quiver, params })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn unit_vector(&self, i: usize) -> DimVec {
        let mut v = vec![0; self.vertex_count()];
        v[i] = 1;
        v
    }

    /// `zeta_ij(x)` as a ratio of Laurent polynomials in `x`.
    pub fn zeta(&self, i: usize, j: usize) -> ZetaFactor<F> {
        let p = &self.params;
        let one = F::one();
        let mut num: BTreeMap<i32, F> = BTreeMap::from([(0, one.clone())]);
        let mut den: BTreeMap<i32, F> = BTreeMap::from([(0, one.clone())]);
        if i == j {
            num = upoly_mul(&num, &BTreeMap::from([(0, one.clone()), (1, p.q_inv.neg())]));
            den = BTreeMap::from([(0, one.clone()), (1, one.neg())]);
        }
        for e in self.quiver.edges_between(i, j) {
            num = upoly_mul(&num, &BTreeMap::from([(0, p.t_inv[e.id].clone()), (1, one.neg())]));
        }
        for e in self.quiver.edges_between(j, i) {
            let c = p.t[e.id].mul(&p.q_inv).neg();
            num = upoly_mul(&num, &BTreeMap::from([(0, one.clone()), (-1, c)]));
        }
        ZetaFactor { num, den }
    }

    pub fn gamma(&self, i: usize) -> F {
        let p = &self.params;
        let one = F::one();
        let mut g = one.clone();
        for e in self.quiver.edges_between(i, i) {
            let a = p.t_inv[e.id].sub(&one);
            let b = one.sub(&p.t[e.id].mul(&p.q_inv));
            g.mul_assign(&a.mul(&b));
        }
        g.div(&one.sub(&p.q_inv)).expect("q != 1")
    }

    /// `prod_a gamma_{i_a}` over the variables of a shape.
    pub fn gamma_power(&self, shape: &[usize]) -> F {
        let mut g = F::one();
        for (i, &n) in shape.iter().enumerate() {
            g.mul_assign(&self.gamma(i).pow(n as i64).expect("nonzero"));
        }
        g
    }

    /// `e_{i,d}` or `f_{i,d}`: the monomial `z_{i1}^d` in shape `varsigma^i`.
    pub fn generator(&self, side: Side, i: usize, d: i32) -> Element<F> {
        Element::new(side, SymLaurent::orbit_sum(self.unit_vector(i), &[d], F::one()))
    }

    pub fn unit(&self, side: Side) -> Element<F> {
        Element::new(side, SymLaurent::one(vec![0; self.vertex_count()]))
    }

    /// Laurent numerator of `zeta_{v(a) v(b)}(z_a / z_b)` in a layout of `nvars`
    /// variables, after clearing `z_b - z_a` for equal vertices. Returns the
    /// polynomial part; monomial denominators are folded in as negative exponents.
    fn cross_numerator(&self, a: usize, b: usize, va: usize, vb: usize, nvars: usize) -> Vec<(Exps, F)> {
        let p = &self.params;
        let one = F::one();
        let mono = |pa: i32, pb: i32| -> Exps {
            let mut e: Exps = SmallVec::from_elem(0, nvars);
            e[a] += pa;
            e[b] += pb;
            e
        };
        let mut poly: Vec<(Exps, F)> = vec![(mono(0, 0), one.clone())];
        let mul_binomial = |poly: &Vec<(Exps, F)>, t1: (Exps, F), t2: (Exps, F)| -> Vec<(Exps, F)> {
            let mut acc: FxHashMap<Exps, F> = FxHashMap::default();
            for (e, c) in poly {
                for (m, k) in [&t1, &t2] {
                    let ne: Exps = e.iter().zip(m.iter()).map(|(x, y)| x + y).collect();
                    accumulate(&mut acc, ne, &c.mul(k));
                }
            }
            acc.into_iter().collect()
        };
        if va == vb {
            // z_b - z_a / q
            poly = mul_binomial(&poly, (mono(0, 1), one.clone()), (mono(1, 0), p.q_inv.neg()));
        }
        for e in self.quiver.edges_between(va, vb) {
            // (z_b / t - z_a) / z_b
            poly = mul_binomial(
                &poly,
                (mono(0, 0), p.t_inv[e.id].clone()),
                (mono(1, -1), one.neg()),
            );
        }
        for e in self.quiver.edges_between(vb, va) {
            // (z_a - t z_b / q) / z_a
            poly = mul_binomial(
                &poly,
                (mono(0, 0), one.clone()),
                (mono(-1, 1), p.t[e.id].mul(&p.q_inv).neg()),
            );
        }
        poly
    }

    /// Layout of a product: per vertex, the `n_i` variables of the left factor
    /// followed by the `n'_i` variables of the right factor.
    fn product_layout(n: &[usize], m: &[usize]) -> (DimVec, Vec<usize>, Vec<usize>) {
        let total: DimVec = n.iter().zip(m).map(|(a, b)| a + b).collect();
        let off = offsets(&total);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for i in 0..n.len() {
            left.extend(off[i]..off[i] + n[i]);
            right.extend(off[i] + n[i]..off[i + 1]);
        }
        (total, left, right)
    }

    /// Product of all cross numerators, plus the count of equal-vertex cross pairs.
    fn cross_product(&self, n: &[usize], m: &[usize]) -> (DimVec, Vec<usize>, Vec<usize>, Vec<(Exps, F)>, usize) {
        let (total, left, right) = Self::product_layout(n, m);
        let nv: usize = total.iter().sum();
        let vert = vertex_of(&total);
        let mut c: Vec<(Exps, F)> = vec![(SmallVec::from_elem(0, nv), F::one())];
        let mut same = 0usize;
        for &a in &left {
            for &b in &right {
                if vert[a] == vert[b] {
                    same += 1;
                }
                let f = self.cross_numerator(a, b, vert[a], vert[b], nv);
                let mut acc: FxHashMap<Exps, F> = FxHashMap::default();
                for (e1, c1) in &c {
                    for (e2, c2) in &f {
                        let ne: Exps = e1.iter().zip(e2.iter()).map(|(x, y)| x + y).collect();
                        accumulate(&mut acc, ne, &c1.mul(c2));
                    }
                }
                c = acc.into_iter().collect();
            }
        }
        (total, left, right, c, same)
    }

    fn place(raw: &RawLaurent<F>, positions: &[usize], nvars: usize, delta: &[i32]) -> Vec<(Exps, F)> {
        raw.terms
            .iter()
            .map(|(e, c)| {
                let mut out: Exps = SmallVec::from_elem(0, nvars);
                for (k, &p) in positions.iter().enumerate() {
                    out[p] = e[k] + delta[k];
                }
                (out, c.clone())
            })
            .collect()
    }

    /// Staircase `(n_i - 1, ..., 0)` per block of a shape.
    fn staircase(shape: &[usize]) -> Vec<i32> {
        let mut d = Vec::new();
        for &n in shape {
            d.extend((0..n as i32).rev());
        }
        d
    }

    /// Shuffle product. On the minus side the opposite multiplication is used.
    pub fn product(&self, f: &Element<F>, g: &Element<F>) -> Result<Element<F>> {
        if f.side != g.side {
            return Err(Error::InvalidInput("product of elements from different sides".into()));
        }
        if f.side == Side::Minus {
            let p = self.plus_product(&g.poly, &f.poly)?;
            return Ok(Element::new(Side::Minus, p));
        }
        Ok(Element::new(Side::Plus, self.plus_product(&f.poly, &g.poly)?))
    }

    /// `F * G` in the shuffle algebra, via antisymmetrization and Schur expansion.
    ///
    /// With `V` the Vandermonde product, the symmetrized expression equals
    /// `sign * Alt(F G C z^delta) / V` where `C` collects the cross numerators and
    /// `delta` is the staircase of each factor's blocks.
    pub fn plus_product(&self, f: &SymLaurent<F>, g: &SymLaurent<F>) -> Result<SymLaurent<F>> {
        let n = f.shape().to_vec();
        let m = g.shape().to_vec();
        if n.len() != self.vertex_count() || m.len() != self.vertex_count() {
            return Err(Error::InvalidInput("shape length differs from vertex count".into()));
        }
        if f.is_zero() || g.is_zero() {
            let total: DimVec = n.iter().zip(&m).map(|(a, b)| a + b).collect();
            return Ok(SymLaurent::zero(total));
        }
        let (total, left, right, cross, same) = self.cross_product(&n, &m);
        let nv: usize = total.iter().sum();
        let ys = Self::place(&f.to_raw(), &left, nv, &Self::staircase(&n));
        let zs = Self::place(&g.to_raw(), &right, nv, &Self::staircase(&m));
        let off = offsets(&total);

        let mut alt: FxHashMap<Exps, F> = FxHashMap::default();
        let mut beta: Exps = SmallVec::from_elem(0, nv);
        for (y, cy) in &ys {
            for (z, cz) in &zs {
                let cyz = cy.mul(cz);
                for (w, cw) in &cross {
                    for k in 0..nv {
                        beta[k] = y[k] + z[k] + w[k];
                    }
                    if let Some(odd) = sort_blocks_with_sign(&mut beta, &off) {
                        let mut c = cyz.mul(cw);
                        if odd {
                            c = c.neg();
                        }
                        accumulate(&mut alt, beta.clone(), &c);
                    }
                }
            }
        }
        let sign_neg = same % 2 == 1;
        let mut out: BTreeMap<Exps, F> = BTreeMap::new();
        let stairs = Self::staircase(&total);
        let mut keys: Vec<_> = alt.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        for (alpha, c) in keys {
            let c = if sign_neg { c.neg() } else { c };
            // per block: lambda = alpha - staircase
            let mut parts: Vec<std::rc::Rc<Vec<(Vec<i32>, u64)>>> = Vec::new();
            for i in 0..total.len() {
                let lam: Vec<i32> = (off[i]..off[i + 1]).map(|k| alpha[k] - stairs[k]).collect();
                parts.push(schur_expansion(&lam));
            }
            let mut acc: Vec<(Exps, u64)> = vec![(SmallVec::new(), 1)];
            for p in &parts {
                let mut next = Vec::with_capacity(acc.len() * p.len());
                for (e, k) in &acc {
                    for (mu, kk) in p.iter() {
                        let mut e2 = e.clone();
                        e2.extend_from_slice(mu);
                        next.push((e2, k * kk));
                    }
                }
                acc = next;
            }
            for (e, k) in acc {
                crate::field::accumulate_btree(&mut out, e, &c.mul(&F::from_i64(k as i64)));
            }
        }
        Ok(SymLaurent::from_canonical_terms(total, out))
    }

    /// Reference implementation: sum over shuffles, then exact division by every
    /// `z_u - z_v` of equal vertices. Slow; used to validate [`Self::plus_product`].
    pub fn plus_product_by_division(&self, f: &SymLaurent<F>, g: &SymLaurent<F>) -> Result<SymLaurent<F>> {
        let n = f.shape().to_vec();
        let m = g.shape().to_vec();
        let (total, left, right, cross, same) = self.cross_product(&n, &m);
        let nv: usize = total.iter().sum();
        let vert = vertex_of(&total);
        let zero = vec![0i32; nv];
        // A0 = sign * F G C * prod over non-cross equal-vertex pairs (z_u - z_v)
        let mut a0 = RawLaurent::zero(total.clone());
        for (y, cy) in Self::place(&f.to_raw(), &left, nv, &zero[..left.len()]) {
            for (z, cz) in Self::place(&g.to_raw(), &right, nv, &zero[..right.len()]) {
                for (w, cw) in &cross {
                    let e: Exps = (0..nv).map(|k| y[k] + z[k] + w[k]).collect();
                    a0.add_term(e, &cy.mul(&cz).mul(cw));
                }
            }
        }
        let vander = |idx: &[usize], a0: &mut RawLaurent<F>| {
            for (s, &u) in idx.iter().enumerate() {
                for &v in &idx[s + 1..] {
                    if vert[u] != vert[v] {
                        continue;
                    }
                    let mut diff = RawLaurent::zero(total.clone());
                    let mut eu: Exps = SmallVec::from_elem(0, nv);
                    eu[u] = 1;
                    let mut ev: Exps = SmallVec::from_elem(0, nv);
                    ev[v] = 1;
                    diff.add_term(eu, &F::one());
                    diff.add_term(ev, &F::one().neg());
                    *a0 = a0.mul(&diff);
                }
            }
        };
        vander(&left, &mut a0);
        vander(&right, &mut a0);
        if same % 2 == 1 {
            for c in a0.terms.values_mut() {
                *c = c.neg();
            }
        }
        // sum over shuffles: sgn(sigma) * sigma(A0)
        let off = offsets(&total);
        let mut per_vertex: Vec<Vec<(Vec<usize>, bool)>> = Vec::new();
        for i in 0..total.len() {
            let size = total[i];
            let mut maps = Vec::new();
            for subset in subsets(size, n[i]) {
                // left variables go to `subset`, right variables to the complement
                let comp: Vec<usize> = (0..size).filter(|x| !subset.contains(x)).collect();
                let mut perm = subset.clone();
                perm.extend(comp.iter().copied());
                let mut inv = 0;
                for x in &subset {
                    inv += comp.iter().filter(|y| *y < x).count();
                }
                maps.push((perm.iter().map(|p| p + off[i]).collect::<Vec<_>>(), inv % 2 == 1));
            }
            per_vertex.push(maps);
        }
        let mut sum = RawLaurent::zero(total.clone());
        let mut combos: Vec<(Vec<usize>, bool)> = vec![(vec![0; nv], false)];
        for (i, maps) in per_vertex.iter().enumerate() {
            let mut next = Vec::new();
            for (base, odd) in &combos {
                for (m, o) in maps {
                    let mut b = base.clone();
                    for (k, &target) in m.iter().enumerate() {
                        b[off[i] + k] = target;
                    }
                    next.push((b, odd ^ o));
                }
            }
            combos = next;
        }
        for (perm, odd) in combos {
            for (e, c) in &a0.terms {
                let mut ne: Exps = SmallVec::from_elem(0, nv);
                for k in 0..nv {
                    ne[perm[k]] = e[k];
                }
                let c = if odd { c.neg() } else { c.clone() };
                sum.add_term(ne, &c);
            }
        }
        for u in 0..nv {
            for v in u + 1..nv {
                if vert[u] == vert[v] {
                    sum = sum.div_difference(u, v)?;
                }
            }
        }
        Ok(SymLaurent::from_symmetric_raw(&sum))
    }

    /// Wheel-condition rows contributed by one orbit with unit coefficient.
    /// Distinct row keys are linearly independent monomials of the specialized
    /// polynomial, so an element satisfies the wheel conditions iff every row sums to zero.
    pub fn wheel_rows(&self, shape: &[usize], key: &[i32], pows: &mut PowCache<F>) -> Vec<(WheelRowKey, F)> {
        let off = offsets(shape);
        let mut out = Vec::new();
        for e in self.quiver.edges() {
            for pattern in [1u8, 2] {
                let (ac, bv) = if pattern == 1 { (e.source, e.target) } else { (e.target, e.source) };
                let need_ac = if ac == bv { 3 } else { 2 };
                if shape[ac] < need_ac || shape[bv] < 1 {
                    continue;
                }
                let ac_block = &key[off[ac]..off[ac + 1]];
                let b_block = &key[off[bv]..off[bv + 1]];
                let (ca, cc) = self.wheel_coeffs(e.id, pattern);
                let dv_ac = distinct_values(ac_block);
                let dv_b = distinct_values(b_block);
                for &xa in &dv_ac {
                    for &xc in &dv_ac {
                        for &xb in &dv_b {
                            let mut removed_ac = vec![xa, xc];
                            if ac == bv {
                                removed_ac.push(xb);
                            }
                            let Some(rest_ac) = remove_values(ac_block, &removed_ac) else { continue };
                            let rest_b = if ac == bv {
                                None
                            } else {
                                match remove_values(b_block, &[xb]) {
                                    Some(r) => Some(r),
                                    None => continue,
                                }
                            };
                            let mut rest: Exps = SmallVec::new();
                            for i in 0..shape.len() {
                                if i == ac {
                                    rest.extend_from_slice(&rest_ac);
                                } else if Some(i) == Some(bv) && ac != bv {
                                    rest.extend_from_slice(rest_b.as_ref().expect("set"));
                                } else {
                                    rest.extend_from_slice(&key[off[i]..off[i + 1]]);
                                }
                            }
                            let coef = pows.get(&ca, e.id, pattern, 0, xa).mul(&pows.get(&cc, e.id, pattern, 1, xc));
                            out.push((
                                WheelRowKey { edge: e.id as u32, pattern, zb: xa + xb + xc, rest },
                                coef,
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Multipliers `(c_a, c_c)` with `z_a = c_a z_b`, `z_c = c_c z_b`.
    pub fn wheel_coeffs(&self, edge: usize, pattern: u8) -> (F, F) {
        let p = &self.params;
        if pattern == 1 {
            (p.q.mul(&p.t_inv[edge]), p.t_inv[edge].clone())
        } else {
            (p.t[edge].clone(), p.t[edge].mul(&p.q_inv))
        }
    }

    pub fn wheel_check(&self, f: &Element<F>) -> WheelReport {
        let mut rows: FxHashMap<WheelRowKey, F> = FxHashMap::default();
        let mut pows = PowCache::default();
        for (key, c) in f.poly.terms() {
            for (rk, v) in self.wheel_rows(f.shape(), key, &mut pows) {
                accumulate(&mut rows, rk, &v.mul(c));
            }
        }
        let conditions = self.wheel_condition_count(f.shape());
        let witness = rows.into_keys().min();
        WheelReport { passed: witness.is_none(), conditions_checked: conditions, witness }
    }

    /// Number of (edge, pattern) specializations applicable to a shape.
    pub fn wheel_condition_count(&self, shape: &[usize]) -> usize {
        let mut c = 0;
        for e in self.quiver.edges() {
            for pattern in [1u8, 2] {
                let (ac, bv) = if pattern == 1 { (e.source, e.target) } else { (e.target, e.source) };
                let need = if ac == bv { 3 } else { 2 };
                if shape[ac] >= need && shape[bv] >= 1 {
                    c += 1;
                }
            }
        }
        c
    }

    /// Raw substitution for one wheel specialization with the canonical triple
    /// (first free indices of each block).
    pub fn wheel_substitution(&self, f: &Element<F>, edge: usize, pattern: u8) -> Result<Option<RawLaurent<F>>> {
        use crate::laurent::Subst;
        let shape = f.shape();
        let e = &self.quiver.edges()[edge];
        let (ac, bv) = if pattern == 1 { (e.source, e.target) } else { (e.target, e.source) };
        let need = if ac == bv { 3 } else { 2 };
        if shape[ac] < need || shape[bv] < 1 {
            return Ok(None);
        }
        let off = offsets(shape);
        let a = off[ac];
        let (b, c) = if ac == bv { (off[ac] + 1, off[ac] + 2) } else { (off[bv], off[ac] + 1) };
        let (ca, cc) = self.wheel_coeffs(edge, pattern);
        let mut asg: Vec<Option<Subst<F>>> = vec![None; f.poly.nvars()];
        asg[a] = Some(Subst::Monomial(ca, b));
        asg[c] = Some(Subst::Monomial(cc, b));
        Ok(Some(f.poly.substitute(&asg)?))
    }
}

/// Memoized powers of the wheel multipliers.
pub struct PowCache<F: Field> {
    map: FxHashMap<(usize, u8, u8, i32), F>,
}

impl<F: Field> Default for PowCache<F> {
    fn default() -> Self {
        PowCache { map: FxHashMap::default() }
    }
}

impl<F: Field> PowCache<F> {
    fn get(&mut self, base: &F, edge: usize, pattern: u8, which: u8, exp: i32) -> F {
        self.map
            .entry((edge, pattern, which, exp))
            .or_insert_with(|| base.pow(exp as i64).expect("wheel multipliers are nonzero"))
            .clone()
    }
}

fn distinct_values(block: &[i32]) -> Vec<i32> {
    let mut v = block.to_vec();
    v.dedup();
    v
}

/// Removes one occurrence of each value from a non-increasing block.
fn remove_values(block: &[i32], vals: &[i32]) -> Option<Vec<i32>> {
    let mut rest = block.to_vec();
    for v in vals {
        let pos = rest.iter().position(|x| x == v)?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Sorts each block non-increasingly; returns the parity of the permutation or
/// `None` if some block has a repeated entry.
pub(crate) fn sort_blocks_with_sign(e: &mut [i32], off: &[usize]) -> Option<bool> {
    let mut odd = false;
    for w in off.windows(2) {
        let block = &mut e[w[0]..w[1]];
        // insertion sort counting transpositions
        for i in 1..block.len() {
            let mut j = i;
            while j > 0 && block[j - 1] < block[j] {
                block.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
            if j > 0 && block[j - 1] == block[j] {
                return None;
            }
        }
        if block.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
    }
    Some(odd)
}

/// Increasing `k`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
