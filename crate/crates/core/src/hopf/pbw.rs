//! PBW factorization along a ray of slopes `m + r theta`, driven by hinges of
//! the coproduct.

use super::coproduct::{CartanWord, MixedTensor};
use super::Hopf;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Exps;
use crate::linalg::{solve_in_span, SparseRow};
use crate::quiver::{edge_form, sub_vectors, to_signed, DimVec};
use crate::shuffle::{Element, Side};
use crate::slope::{in_slope_piece, slope_basis, slope_dot};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A split `(n - k, d - e) | (k, e)` of the coproduct, with the slope `rho`
/// solving `e = (m + rho theta) . k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hinge {
    pub k: DimVec,
    pub e: i64,
    pub rho: BigRational,
    pub bad: bool,
}

impl Hinge {
    fn key(&self) -> (&BigRational, usize, &DimVec) {
        (&self.rho, self.k.iter().sum(), &self.k)
    }

    fn cmp_key(&self, o: &Hinge) -> Ordering {
        self.key().cmp(&o.key())
    }
}

/// One subtraction `F -> F - gamma' G` at a maximal bad hinge.
#[derive(Clone, Debug)]
pub struct HingeStep<F: Field> {
    pub shape: DimVec,
    pub vdeg: i64,
    pub hinge: Hinge,
    pub gamma: F,
    /// Whether `gamma'` equals the scalar predicted from the leading terms of the zeta factors.
    pub closed_form_agrees: bool,
    pub basis_dim: usize,
}

#[derive(Clone, Debug)]
pub struct PbwFactor<F: Field> {
    pub slope: BigRational,
    pub element: Element<F>,
}

/// `coeff * factors[0] * factors[1] * ...` with strictly increasing slopes.
#[derive(Clone, Debug)]
pub struct PbwTerm<F: Field> {
    pub coeff: F,
    pub factors: Vec<PbwFactor<F>>,
}

#[derive(Clone, Debug)]
pub struct PbwDecomposition<F: Field> {
    pub m: Vec<BigRational>,
    pub theta: Vec<BigRational>,
    pub terms: Vec<PbwTerm<F>>,
    pub steps: Vec<HingeStep<F>>,
}

impl<F: Field> PbwDecomposition<F> {
    /// Every slope emitted, in order of appearance.
    pub fn slopes(&self) -> Vec<Vec<BigRational>> {
        self.terms.iter().map(|t| t.factors.iter().map(|f| f.slope.clone()).collect()).collect()
    }
}

/// Coordinates of each element of `elems` in the span of `basis`.
fn coordinates<F: Field>(basis: &[Element<F>], elems: &[Element<F>]) -> Option<Vec<Vec<F>>> {
    let mut index: BTreeMap<Exps, u32> = BTreeMap::new();
    let mut row_of = |e: &Element<F>| -> SparseRow<F> {
        let mut r: SparseRow<F> = e
            .poly
            .terms()
            .iter()
            .map(|(k, v)| {
                let len = index.len() as u32;
                (*index.entry(k.clone()).or_insert(len), v.clone())
            })
            .collect();
        r.sort_by_key(|x| x.0);
        r
    };
    let cols: Vec<SparseRow<F>> = basis.iter().map(&mut row_of).collect();
    let rhs: Vec<SparseRow<F>> = elems.iter().map(&mut row_of).collect();
    let nrows = index.len();
    rhs.iter().map(|b| solve_in_span(&cols, b, nrows)).collect()
}

struct Ctx<'a, F: Field> {
    hopf: &'a Hopf<F>,
    m: &'a [BigRational],
    theta: &'a [BigRational],
    steps: Vec<HingeStep<F>>,
}

impl<'a, F: Field> Ctx<'a, F> {
    fn ray(&self, r: &BigRational) -> Vec<BigRational> {
        self.m.iter().zip(self.theta).map(|(a, b)| a + r * b).collect()
    }

    fn rho(&self, k: &[usize], e: i64) -> BigRational {
        let ks = to_signed(k);
        (BigRational::from_integer(BigInt::from(e)) - slope_dot(self.m, &ks)) / slope_dot(self.theta, &ks)
    }

    /// The maximal nonzero bad hinge of `f` and its component.
    fn max_bad_hinge(&self, f: &Element<F>, d: i64, r: &BigRational) -> Result<Option<(Hinge, MixedTensor<F>)>> {
        let n = f.shape().to_vec();
        let q = self.hopf.alg.quiver();
        let line = self.ray(r);
        let mut best: Option<(Hinge, MixedTensor<F>)> = None;
        for k in sub_vectors(&n) {
            let kt: usize = k.iter().sum();
            if kt == 0 || k == n {
                continue;
            }
            let rest: DimVec = n.iter().zip(&k).map(|(a, b)| a - b).collect();
            let emax = f.poly.degree_profile(&k)? - edge_form(q, &to_signed(&k), &to_signed(&rest));
            let floor = slope_dot(&line, &to_signed(&k)).floor().to_integer().to_i64().expect("small");
            for e in (floor + 1..=emax).rev() {
                let rho = self.rho(&k, e);
                let h = Hinge { k: k.clone(), e, rho, bad: true };
                if let Some((b, _)) = &best {
                    if h.cmp_key(b) != Ordering::Greater {
                        // larger e only raises rho; lower e cannot beat the current best
                        break;
                    }
                }
                let c = self.hopf.coproduct_component(f, (&rest, d - e), (&k, e))?;
                if !c.is_zero() {
                    best = Some((h, c));
                    break;
                }
            }
        }
        Ok(best)
    }

    /// `1 / prod_j c_j(n1)^{k_j}` with `c_j` the leading coefficient of the zeta factors.
    fn closed_form_gamma(&self, n1: &[usize], k: &[usize]) -> F {
        let alg = &self.hopf.alg;
        let p = alg.params();
        let q = alg.quiver();
        let mut acc = F::one();
        for (j, &kj) in k.iter().enumerate() {
            let mut c = F::one();
            for (i, &ni) in n1.iter().enumerate() {
                let mut x = if i == j { p.q.clone() } else { F::one() };
                for e in q.edges_between(i, j) {
                    x.mul_assign(&p.t_inv[e.id]);
                }
                for e in q.edges_between(j, i) {
                    x.mul_assign(&p.t[e.id].mul(&p.q_inv));
                }
                c.mul_assign(&x.pow(ni as i64).expect("nonzero"));
            }
            acc.mul_assign(&c.pow(kj as i64).expect("nonzero"));
        }
        acc.inv().expect("nonzero")
    }

    fn decompose(&mut self, f: &Element<F>, depth: usize) -> Result<Vec<PbwTerm<F>>> {
        if f.is_zero() {
            return Ok(Vec::new());
        }
        let n = f.shape().to_vec();
        if n.iter().all(|&x| x == 0) {
            return Ok(vec![PbwTerm { coeff: f.poly.coeff(&[]), factors: Vec::new() }]);
        }
        if depth > 64 {
            return Err(Error::Internal("pbw_decompose: recursion depth exceeded".into()));
        }
        let b = f
            .bidegree()
            .ok_or_else(|| Error::InvalidInput("pbw_decompose: input is not homogeneous".into()))?;
        let d = b.vdeg;
        let ns = to_signed(&n);
        let r = (BigRational::from_integer(BigInt::from(d)) - slope_dot(self.m, &ns)) / slope_dot(self.theta, &ns);
        let Some((hinge, comp)) = self.max_bad_hinge(f, d, &r)? else {
            if !in_slope_piece(&self.hopf.alg, f, &self.ray(&r))? {
                return Err(Error::Internal(format!(
                    "pbw_decompose: no bad hinge but the element is not in the slope piece at r = {r}"
                )));
            }
            return Ok(vec![PbwTerm { coeff: F::one(), factors: vec![PbwFactor { slope: r, element: f.clone() }] }]);
        };
        let k = hinge.k.clone();
        let rest: DimVec = n.iter().zip(&k).map(|(a, b)| a - b).collect();
        let hk = CartanWord::h_zero(Side::Plus, &k);
        if comp.terms.keys().any(|c| *c != hk) {
            return Err(Error::Internal(format!("pbw_decompose: maximal hinge {k:?} carries higher Cartan modes")));
        }
        let basis = slope_basis(&self.hopf.alg, &self.ray(&hinge.rho), &k, Side::Plus, self.hopf.ceiling)?.basis;
        let summands = comp.summands();
        let rights: Vec<Element<F>> = summands.iter().map(|s| s.2.clone()).collect();
        let coords = coordinates(&basis, &rights).ok_or_else(|| {
            Error::Internal(format!("pbw_decompose: hinge {k:?} right legs are not in the slope piece"))
        })?;
        let mut lefts = vec![Element::zero(Side::Plus, rest.clone()); basis.len()];
        for (s, c) in summands.iter().zip(&coords) {
            for (t, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    lefts[t] = lefts[t].add(&s.1.scale(x));
                }
            }
        }
        let mut g = Element::zero(Side::Plus, n.clone());
        for (l, bt) in lefts.iter().zip(&basis) {
            if !l.is_zero() {
                g = g.add(&self.hopf.alg.product(l, bt)?);
            }
        }
        let gcomp = self.hopf.coproduct_component(&g, (&rest, d - hinge.e), (&k, hinge.e))?;
        let gamma = comp
            .ratio_to(&gcomp)
            .ok_or_else(|| Error::Internal(format!("pbw_decompose: hinge {k:?} components are not proportional")))?;
        let closed = self.closed_form_gamma(&rest, &k);
        self.steps.push(HingeStep {
            shape: n.clone(),
            vdeg: d,
            hinge: hinge.clone(),
            gamma: gamma.clone(),
            closed_form_agrees: closed == gamma,
            basis_dim: basis.len(),
        });
        let remainder = f.sub(&g.scale(&gamma));
        if !remainder.is_zero() {
            if let Some((h2, _)) = self.max_bad_hinge(&remainder, d, &r)? {
                if h2.cmp_key(&hinge) != Ordering::Less {
                    return Err(Error::Internal(format!(
                        "pbw_decompose: subtraction at hinge {:?} did not lower the maximal hinge (now {:?})",
                        hinge.k, h2.k
                    )));
                }
            }
        }
        let mut out = Vec::new();
        for (l, bt) in lefts.iter().zip(&basis) {
            if l.is_zero() {
                continue;
            }
            for mut term in self.decompose(l, depth + 1)? {
                term.coeff.mul_assign(&gamma);
                match term.factors.last_mut() {
                    Some(last) if last.slope == hinge.rho => {
                        last.element = self.hopf.alg.product(&last.element, bt)?;
                    }
                    Some(last) if last.slope > hinge.rho => {
                        return Err(Error::Internal(format!(
                            "pbw_decompose: left factor slope {} exceeds hinge slope {}",
                            last.slope, hinge.rho
                        )));
                    }
                    _ => term.factors.push(PbwFactor { slope: hinge.rho.clone(), element: bt.clone() }),
                }
                out.push(term);
            }
        }
        out.extend(self.decompose(&remainder, depth + 1)?);
        Ok(out)
    }
}

impl<F: Field> Hopf<F> {
    /// Writes a plus-side element as a sum of ordered products of elements of
    /// the slope subalgebras along `m + r theta`, with `r` strictly increasing
    /// in each product. The result is verified by remultiplication.
    pub fn pbw_decompose(&self, f: &Element<F>, m: &[BigRational], theta: &[BigRational]) -> Result<PbwDecomposition<F>> {
        let nv = self.alg.vertex_count();
        if f.side != Side::Plus {
            return Err(Error::InvalidInput("pbw_decompose expects a plus-side element".into()));
        }
        if m.len() != nv || theta.len() != nv {
            return Err(Error::InvalidInput(format!("slope and direction must have {nv} entries")));
        }
        if theta.iter().any(|x| *x <= BigRational::zero()) {
            return Err(Error::InvalidInput("direction entries must be positive".into()));
        }
        let mut ctx = Ctx { hopf: self, m, theta, steps: Vec::new() };
        let terms = ctx.decompose(f, 0)?;
        let out = PbwDecomposition { m: m.to_vec(), theta: theta.to_vec(), terms, steps: ctx.steps };
        for t in &out.terms {
            if t.factors.windows(2).any(|w| w[0].slope >= w[1].slope) {
                return Err(Error::Internal("pbw_decompose: slopes are not strictly increasing".into()));
            }
        }
        let back = self.pbw_remultiply(&out, f.shape())?;
        if back != *f {
            return Err(Error::Internal("pbw_decompose: remultiplication does not reproduce the input".into()));
        }
        Ok(out)
    }

    /// `sum_t coeff_t * prod factors`.
    pub fn pbw_remultiply(&self, p: &PbwDecomposition<F>, shape: &[usize]) -> Result<Element<F>> {
        let mut acc = Element::zero(Side::Plus, shape.to_vec());
        for t in &p.terms {
            let mut x = self.alg.unit(Side::Plus);
            for fac in &t.factors {
                x = self.alg.product(&x, &fac.element)?;
            }
            acc = acc.add(&x.scale(&t.coeff));
        }
        Ok(acc)
    }
}
