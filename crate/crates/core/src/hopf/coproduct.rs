//! Graded components of the coproduct and the slope coproducts `Delta_m`.

use super::series::{for_each_composition, SeriesBank};
use super::{GeneratorWord, Hopf};
use crate::error::{Error, Result};
use crate::field::{accumulate_btree, Field};
use crate::laurent::{is_canonical, offsets, vertex_of, Exps, SymLaurent};
use crate::linalg::{sparse_rank, SparseRow};
use crate::quiver::{sub_vectors, to_signed, DimVec};
use crate::shuffle::{Element, Side};
use crate::slope::{in_slope_piece, slope_basis, slope_dot};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;

/// A monomial in the Cartan elements `h_{i,+-0}^{+-1}` and the higher modes `h_{i,+-p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CartanWord {
    pub side: Side,
    /// Exponents of `h_{i,+-0}`.
    pub zero: Vec<i64>,
    /// Sorted multiset of higher modes `(i, p)`, `p >= 1`.
    pub modes: Vec<(usize, u32)>,
}

impl CartanWord {
    pub fn one(side: Side, vertices: usize) -> Self {
        CartanWord { side, zero: vec![0; vertices], modes: Vec::new() }
    }

    /// `h_{+-n} = prod_i h_{i,+-0}^{n_i}`.
    pub fn h_zero(side: Side, n: &[usize]) -> Self {
        CartanWord { side, zero: n.iter().map(|&x| x as i64).collect(), modes: Vec::new() }
    }

    /// Multiplies by `h_{i,+-p}`.
    pub fn push(&mut self, i: usize, p: u32) {
        if p == 0 {
            self.zero[i] += 1;
        } else {
            let pos = self.modes.partition_point(|x| *x < (i, p));
            self.modes.insert(pos, (i, p));
        }
    }

    pub fn mul(&self, o: &CartanWord) -> CartanWord {
        assert_eq!(self.side, o.side);
        let mut out = self.clone();
        for (a, b) in out.zero.iter_mut().zip(&o.zero) {
            *a += b;
        }
        for &(i, p) in &o.modes {
            out.push(i, p);
        }
        out
    }

    pub fn mode_total(&self) -> u64 {
        self.modes.iter().map(|x| x.1 as u64).sum()
    }

    /// Vertical degree `+-sum p`.
    pub fn vdeg(&self) -> i64 {
        self.side.sign() * self.mode_total() as i64
    }

    /// Value of the counit: 1 on products of `h_{i,+-0}`, 0 once a higher mode occurs.
    pub fn counit(&self) -> bool {
        self.modes.is_empty()
    }

    /// The word as a list of single modes, with `h_{i,0}` repeated.
    pub(crate) fn letters(&self) -> Result<Vec<(usize, u32)>> {
        let mut out = Vec::new();
        for (i, &z) in self.zero.iter().enumerate() {
            if z < 0 {
                return Err(Error::InvalidInput("pairing of inverse Cartan elements is not supported".into()));
            }
            out.extend(std::iter::repeat((i, 0)).take(z as usize));
        }
        out.extend_from_slice(&self.modes);
        Ok(out)
    }
}

/// A graded component of a coproduct: a sum of `C * m_L (x) m_R` with `C` a
/// Cartan word and `m_L, m_R` monomial orbit sums of the two legs. The Cartan
/// word sits on the left leg for plus-side elements and on the right leg for
/// minus-side elements.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensor<F: Field> {
    pub side: Side,
    pub left_shape: DimVec,
    pub right_shape: DimVec,
    /// Total vertical degrees of the legs, Cartan modes included.
    pub left_vdeg: i64,
    pub right_vdeg: i64,
    pub terms: BTreeMap<CartanWord, BTreeMap<(Exps, Exps), F>>,
}

impl<F: Field> MixedTensor<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pure tensors `(C, left, right)`, grouped by Cartan word and left orbit.
    pub fn summands(&self) -> Vec<(CartanWord, Element<F>, Element<F>)> {
        let mut out = Vec::new();
        for (c, m) in &self.terms {
            let mut by_left: BTreeMap<&Exps, SymLaurent<F>> = BTreeMap::new();
            for ((l, r), x) in m {
                by_left
                    .entry(l)
                    .or_insert_with(|| SymLaurent::zero(self.right_shape.clone()))
                    .add_orbit(r, x);
            }
            for (l, r) in by_left {
                let left = SymLaurent::orbit_sum(self.left_shape.clone(), l, F::one());
                out.push((c.clone(), Element::new(self.side, left), Element::new(self.side, r)));
            }
        }
        out
    }

    /// `x` with `self = x * other`, if the two tensors are proportional.
    pub fn ratio_to(&self, other: &MixedTensor<F>) -> Option<F> {
        let (c0, m0) = other.terms.iter().next()?;
        let (k0, v0) = m0.iter().next()?;
        let x = self.terms.get(c0)?.get(k0)?.div(v0)?;
        if self.terms.len() != other.terms.len() {
            return None;
        }
        for (c, m) in &other.terms {
            let mine = self.terms.get(c)?;
            if mine.len() != m.len() {
                return None;
            }
            for (k, v) in m {
                if *mine.get(k)? != v.mul(&x) {
                    return None;
                }
            }
        }
        Some(x)
    }

    /// Coordinates keyed by Cartan word and exponents, for rank computations.
    pub(crate) fn entries(&self) -> impl Iterator<Item = (&CartanWord, &(Exps, Exps), &F)> {
        self.terms.iter().flat_map(|(c, m)| m.iter().map(move |(k, v)| (c, k, v)))
    }
}

/// One summand of `Delta_m`.
#[derive(Clone, Debug)]
pub struct DeltaSummand<F: Field> {
    pub left_shape: DimVec,
    pub right_shape: DimVec,
    pub tensor: MixedTensor<F>,
}

impl<F: Field> Hopf<F> {
    /// Component of `Delta(F)` whose legs have bidegrees `(n1, d1)` and `(n2, d2)`.
    /// Leg degrees include the Cartan modes.
    pub fn coproduct_component(
        &self,
        f: &Element<F>,
        left: (&[usize], i64),
        right: (&[usize], i64),
    ) -> Result<MixedTensor<F>> {
        let n = f.shape().to_vec();
        let (n1, d1) = left;
        let (n2, d2) = right;
        if n1.len() != n.len() || n2.len() != n.len() || n1.iter().zip(n2).zip(&n).any(|((a, b), c)| a + b != *c) {
            return Err(Error::InvalidInput(format!("split {n1:?} + {n2:?} does not add up to {n:?}")));
        }
        let side = f.side;
        let mut out = MixedTensor {
            side,
            left_shape: n1.to_vec(),
            right_shape: n2.to_vec(),
            left_vdeg: d1,
            right_vdeg: d2,
            terms: BTreeMap::new(),
        };
        let off = offsets(&n);
        let vert = vertex_of(&n);
        let mut lpos = Vec::new();
        let mut rpos = Vec::new();
        for i in 0..n.len() {
            lpos.extend(off[i]..off[i] + n1[i]);
            rpos.extend(off[i] + n1[i]..off[i + 1]);
        }
        let (nl, nr) = (lpos.len(), rpos.len());
        let mut bank = SeriesBank::new(&self.alg);
        let mut val = vec![vec![0i32; nr]; nl];
        for a in 0..nl {
            for b in 0..nr {
                let (ia, jb) = (vert[lpos[a]], vert[rpos[b]]);
                val[a][b] = match side {
                    Side::Plus => bank.inv_zeta_at_infinity(jb, ia).val,
                    Side::Minus => bank.inv_zeta_at_zero(ia, jb).val,
                };
            }
        }
        let s0: i64 = val.iter().flatten().map(|&x| x as i64).sum();
        // cartan slots: right variables on the plus side, left variables on the minus side
        let nh = if side == Side::Plus { nr } else { nl };
        let npairs = nl * nr;
        for (e, c) in f.poly.to_raw().terms {
            let tot: i64 = e.iter().map(|&x| x as i64).sum();
            if tot != d1 + d2 {
                continue;
            }
            let alpha: i64 = lpos.iter().map(|&p| e[p] as i64).sum();
            let beta: i64 = rpos.iter().map(|&p| e[p] as i64).sum();
            let budget = match side {
                Side::Plus => beta - d2 - s0,
                Side::Minus => d1 - alpha - s0,
            };
            if budget < 0 {
                continue;
            }
            let mut coeffs: Vec<Vec<F>> = Vec::with_capacity(npairs);
            for a in 0..nl {
                for b in 0..nr {
                    let (ia, jb) = (vert[lpos[a]], vert[rpos[b]]);
                    let s = match side {
                        Side::Plus => bank.inv_zeta_at_infinity(jb, ia),
                        Side::Minus => bank.inv_zeta_at_zero(ia, jb),
                    };
                    coeffs.push((0..=budget as usize).map(|k| s.coeff(k)).collect());
                }
            }
            for_each_composition(budget as usize, npairs + nh, &mut |t| {
                let mut v = c.clone();
                let mut le: Exps = lpos.iter().map(|&p| e[p]).collect();
                let mut re: Exps = rpos.iter().map(|&p| e[p]).collect();
                for a in 0..nl {
                    for b in 0..nr {
                        let idx = a * nr + b;
                        v.mul_assign(&coeffs[idx][t[idx]]);
                        let s = val[a][b] + t[idx] as i32;
                        le[a] += s;
                        re[b] -= s;
                    }
                }
                if v.is_zero() {
                    return;
                }
                let mut cw = CartanWord::one(side, n.len());
                for h in 0..nh {
                    let p = t[npairs + h] as u32;
                    match side {
                        Side::Plus => {
                            re[h] -= p as i32;
                            cw.push(vert[rpos[h]], p);
                        }
                        Side::Minus => {
                            le[h] += p as i32;
                            cw.push(vert[lpos[h]], p);
                        }
                    }
                }
                if !is_canonical(&le, n1) || !is_canonical(&re, n2) {
                    return;
                }
                accumulate_btree(out.terms.entry(cw).or_default(), (le, re), &v);
            });
        }
        out.terms.retain(|_, m| !m.is_empty());
        Ok(out)
    }

    /// The slope coproduct: for every split, the component of `Delta(F)` whose
    /// legs both have naive slope exactly `m`. Empty components are dropped.
    pub fn delta_m(&self, f: &Element<F>, m: &[BigRational]) -> Result<Vec<DeltaSummand<F>>> {
        if !in_slope_piece(&self.alg, f, m)? {
            return Err(Error::InvalidInput("delta_m: input is not in the slope subalgebra".into()));
        }
        let n = f.shape().to_vec();
        let sign = f.side.sign();
        let mut out = Vec::new();
        for n1 in sub_vectors(&n) {
            let n2: DimVec = n.iter().zip(&n1).map(|(a, b)| a - b).collect();
            let m1 = slope_dot(m, &to_signed(&n1));
            let m2 = slope_dot(m, &to_signed(&n2));
            if !m1.is_integer() || !m2.is_integer() {
                continue;
            }
            let d1 = sign * m1.to_integer().to_i64().expect("small");
            let d2 = sign * m2.to_integer().to_i64().expect("small");
            let t = self.coproduct_component(f, (&n1, d1), (&n2, d2))?;
            if t.is_zero() {
                continue;
            }
            let expected = match f.side {
                Side::Plus => CartanWord::h_zero(Side::Plus, &n2),
                Side::Minus => CartanWord::h_zero(Side::Minus, &n1),
            };
            if t.terms.keys().any(|c| *c != expected) {
                return Err(Error::Internal(format!(
                    "slope coproduct component {n1:?} | {n2:?} carries Cartan words other than {expected:?}"
                )));
            }
            out.push(DeltaSummand { left_shape: n1, right_shape: n2, tensor: t });
        }
        Ok(out)
    }

    /// Whether `Delta_m(F)` consists of the two extreme summands only.
    pub fn primitive_check(&self, f: &Element<F>, m: &[BigRational]) -> Result<bool> {
        let n = f.shape();
        let zero = vec![0; n.len()];
        Ok(self
            .delta_m(f, m)?
            .iter()
            .all(|s| s.left_shape == zero || s.right_shape == zero))
    }

    /// Dimension of the primitive part of `B_{m|n}`: the kernel of the map
    /// collecting the intermediate summands of `Delta_m`.
    pub fn primitive_count(&self, m: &[BigRational], n: &[usize]) -> Result<usize> {
        let basis = slope_basis(&self.alg, m, n, Side::Plus, self.ceiling)?;
        let zero = vec![0; n.len()];
        let mut index: BTreeMap<(DimVec, CartanWord, (Exps, Exps)), u32> = BTreeMap::new();
        let mut rows: Vec<SparseRow<F>> = Vec::new();
        for f in &basis.basis {
            let mut row = Vec::new();
            for s in self.delta_m(f, m)? {
                if s.left_shape == zero || s.right_shape == zero {
                    continue;
                }
                for (c, k, v) in s.tensor.entries() {
                    let len = index.len() as u32;
                    let id = *index.entry((s.left_shape.clone(), c.clone(), k.clone())).or_insert(len);
                    row.push((id, v.clone()));
                }
            }
            row.sort_by_key(|x| x.0);
            rows.push(row);
        }
        let rank = sparse_rank(rows, index.len().max(1));
        Ok(basis.dim() - rank)
    }
}

impl<F: Field> Hopf<F> {
    /// Both sides of `<F, w1 w2> = <Delta(F), w1 (x) w2>` for a plus element and
    /// two minus words. The left side pairs against the concatenated word.
    pub fn bialgebra_plus(&self, f: &Element<F>, w1: &GeneratorWord, w2: &GeneratorWord) -> Result<(F, F)> {
        let nv = self.alg.vertex_count();
        let lhs = self.pairing_word(f, &w1.concat(w2))?;
        let (n1, n2) = (w1.shape(nv), w2.shape(nv));
        if n1.iter().zip(&n2).zip(f.shape()).any(|((a, b), c)| a + b != *c) {
            return Ok((lhs, F::zero()));
        }
        let comp = self.coproduct_component(f, (&n1, -w1.vdeg()), (&n2, -w2.vdeg()))?;
        let mut rhs = F::zero();
        for (c, l, r) in comp.summands() {
            let x = self.pairing_word(&r, w2)?;
            if x.is_zero() {
                continue;
            }
            rhs.add_assign(&x.mul(&self.pairing_dressed(&c, &l, w1)?));
        }
        Ok((lhs, rhs))
    }

    /// Both sides of `<a1 a2, G> = <a1 (x) a2, Delta(G)>` (paired crosswise)
    /// for two plus words and a minus element.
    pub fn bialgebra_minus(&self, a1: &GeneratorWord, a2: &GeneratorWord, g: &Element<F>) -> Result<(F, F)> {
        let nv = self.alg.vertex_count();
        let lhs = self.pairing_eword(&a1.concat(a2), g)?;
        let (n1, n2) = (a1.shape(nv), a2.shape(nv));
        if n1.iter().zip(&n2).zip(g.shape()).any(|((a, b), c)| a + b != *c) {
            return Ok((lhs, F::zero()));
        }
        let comp = self.coproduct_component(g, (&n2, -a2.vdeg()), (&n1, -a1.vdeg()))?;
        let mut rhs = F::zero();
        for (c, l, r) in comp.summands() {
            if !c.counit() {
                continue;
            }
            let x = self.pairing_eword(a1, &r)?;
            if x.is_zero() {
                continue;
            }
            rhs.add_assign(&x.mul(&self.pairing_eword(a2, &l)?));
        }
        Ok((lhs, rhs))
    }
}
