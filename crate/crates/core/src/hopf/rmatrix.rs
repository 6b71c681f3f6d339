//! Dual bases of the slope pieces and windowed checks of the factorization of
//! the canonical tensor over slopes.

use super::series::{bounded_sums, vertex_orderings};
use super::{combine_words, GeneratorWord, Hopf, WordCombination};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{edge_form, sub_vectors, to_signed, total, DimVec};
use crate::report::{rational_str, rationals_str};
use crate::shuffle::{Element, Side};
use crate::slope::{slope_basis, slope_dot};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Bases of `B^+_{m|n}` and `B^-_{m|n}` with identity Gram matrix.
#[derive(Clone, Debug)]
pub struct DualBases<F: Field> {
    pub m: Vec<BigRational>,
    pub n: DimVec,
    pub plus: Vec<Element<F>>,
    pub minus: Vec<Element<F>>,
    /// Word expressions of the minus basis.
    pub minus_words: Vec<WordCombination<F>>,
}

impl<F: Field> DualBases<F> {
    pub fn dim(&self) -> usize {
        self.plus.len()
    }
}

/// An ordered list of blocks `(r_j, k_j)` with `r_1 < r_2 < ...`. Block `j`
/// stands for the slope piece `B_{m + r_j theta | k_j}`, whose vertical degree
/// is `e_j = (m + r_j theta) . k_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlopeAssignment {
    pub blocks: Vec<SlopeBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlopeBlock {
    #[serde(serialize_with = "rational_str")]
    pub r: BigRational,
    pub k: DimVec,
    pub e: i64,
}

impl SlopeAssignment {
    pub fn shape(&self, vertices: usize) -> DimVec {
        let mut n = vec![0; vertices];
        for b in &self.blocks {
            for (a, x) in n.iter_mut().zip(&b.k) {
                *a += x;
            }
        }
        n
    }

    pub fn vdeg(&self) -> i64 {
        self.blocks.iter().map(|b| b.e).sum()
    }

    fn in_window(&self, window: i64) -> bool {
        self.blocks.iter().all(|b| b.e.abs() <= window * total(&b.k) as i64)
    }
}

/// Result of contracting the assembled tensor against one minus word.
#[derive(Clone, Debug, Serialize)]
pub struct WordContraction {
    pub word: Vec<(usize, i32)>,
    #[serde(serialize_with = "rational_str")]
    pub p_max: BigRational,
    pub assignments: usize,
    pub nonzero_assignments: usize,
    pub outside_window: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeOneCheck {
    pub vertex: usize,
    pub d: i32,
    /// `gamma_i` as an exact string.
    pub gamma: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RprimeReport {
    #[serde(serialize_with = "rationals_str")]
    pub m: Vec<BigRational>,
    #[serde(serialize_with = "rationals_str")]
    pub theta: Vec<BigRational>,
    pub hbound: usize,
    pub window: i64,
    /// The window semantics used for the completed tensor.
    pub window_semantics: String,
    pub words_checked: usize,
    pub words_vanishing: usize,
    pub contraction_failures: Vec<WordContraction>,
    pub max_assignments_per_word: usize,
    /// Nonzero contributions from assignments with a block outside the window.
    pub outside_window_nonzero: usize,
    pub window_assignments: usize,
    pub orthogonality_pairs: usize,
    pub orthogonality_failures: Vec<(SlopeAssignment, usize, SlopeAssignment, usize, String)>,
    pub shape_one: Vec<ShapeOneCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizedPairingCase {
    pub plus: SlopeAssignment,
    pub minus: SlopeAssignment,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

type Piece = (BigRational, DimVec);

/// Products over an assignment of dual basis elements: plus products, minus
/// products and the minus word expressions.
struct Assembled<F: Field> {
    plus: Vec<Element<F>>,
    minus: Vec<Element<F>>,
    minus_words: Vec<WordCombination<F>>,
}

impl<F: Field> Hopf<F> {
    /// Gram matrix `<a_s, b_t>` with the minus side given by word expressions.
    fn gram(&self, plus: &[Element<F>], minus_words: &[WordCombination<F>]) -> Result<Matrix<F>> {
        let n = plus.len();
        let entries: Vec<Result<F>> = (0..n * minus_words.len())
            .into_par_iter()
            .map(|x| self.pairing_combination(&plus[x / minus_words.len()], &minus_words[x % minus_words.len()]))
            .collect();
        let mut g = Matrix::zeros(n, minus_words.len());
        for (x, v) in entries.into_iter().enumerate() {
            g.set(x / minus_words.len(), x % minus_words.len(), v?);
        }
        Ok(g)
    }

    /// Bases of `B^+_{m|n}` and `B^-_{m|n}` in duality under the pairing.
    pub fn dual_bases(&self, m: &[BigRational], n: &[usize]) -> Result<DualBases<F>> {
        let plus = slope_basis(&self.alg, m, n, Side::Plus, self.ceiling)?.basis;
        let raw = slope_basis(&self.alg, m, n, Side::Minus, self.ceiling)?.basis;
        if plus.len() != raw.len() {
            return Err(Error::Internal(format!(
                "plus and minus slope pieces differ in dimension ({} vs {})",
                plus.len(),
                raw.len()
            )));
        }
        let raw_words: Vec<WordCombination<F>> =
            raw.par_iter().map(|b| self.express_in_words(b)).collect::<Result<_>>()?;
        let g = self.gram(&plus, &raw_words)?;
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Internal(format!("singular pairing on the slope piece {n:?}")))?;
        let d = plus.len();
        let mut minus = Vec::with_capacity(d);
        let mut minus_words = Vec::with_capacity(d);
        for u in 0..d {
            let mut b = Element::zero(Side::Minus, n.to_vec());
            let mut w: WordCombination<F> = Vec::new();
            for t in 0..d {
                let x = inv.get(t, u);
                if x.is_zero() {
                    continue;
                }
                b = b.add(&raw[t].scale(x));
                w.extend(raw_words[t].iter().map(|(c, word)| (c.mul(x), word.clone())));
            }
            minus.push(b);
            minus_words.push(w);
        }
        if !self.gram(&plus, &minus_words)?.is_identity() {
            return Err(Error::Internal(format!("dual bases of {n:?} fail the identity check")));
        }
        Ok(DualBases { m: m.to_vec(), n: n.to_vec(), plus, minus, minus_words })
    }

    fn ray(m: &[BigRational], theta: &[BigRational], r: &BigRational) -> Vec<BigRational> {
        m.iter().zip(theta).map(|(a, b)| a + r * b).collect()
    }

    /// Slope assignments of shape `n` and total vertical degree `total_e`
    /// whose slopes lie in `[r_lo, r_hi]`.
    pub fn slope_assignments(
        &self,
        m: &[BigRational],
        theta: &[BigRational],
        n: &[usize],
        total_e: i64,
        r_lo: &BigRational,
        r_hi: &BigRational,
    ) -> Vec<SlopeAssignment> {
        struct Env<'a> {
            m: &'a [BigRational],
            theta: &'a [BigRational],
            r_lo: &'a BigRational,
            r_hi: &'a BigRational,
            out: Vec<SlopeAssignment>,
        }
        let e_of = |env: &Env, k: &[i64], r: &BigRational| -> BigRational {
            slope_dot(env.m, k) + r * slope_dot(env.theta, k)
        };
        fn rec(
            env: &mut Env,
            e_of: &dyn Fn(&Env, &[i64], &BigRational) -> BigRational,
            rest: DimVec,
            rem: i64,
            prev: Option<BigRational>,
            blocks: &mut Vec<SlopeBlock>,
        ) {
            if rest.iter().all(|&x| x == 0) {
                if rem == 0 {
                    env.out.push(SlopeAssignment { blocks: blocks.clone() });
                }
                return;
            }
            for k in sub_vectors(&rest) {
                if k.iter().all(|&x| x == 0) {
                    continue;
                }
                let ks = to_signed(&k);
                let after: DimVec = rest.iter().zip(&k).map(|(a, b)| a - b).collect();
                let lo_r = prev.clone().unwrap_or_else(|| env.r_lo.clone());
                let e_lo = e_of(env, &ks, &lo_r).floor().to_integer().to_i64().expect("small");
                let e_hi = e_of(env, &ks, env.r_hi).floor().to_integer().to_i64().expect("small");
                // the later blocks contribute at most their value at r_hi
                let cap = e_of(env, &to_signed(&after), env.r_hi).floor().to_integer().to_i64().expect("small");
                let e_min = e_lo.max(rem - cap);
                for e in e_min..=e_hi {
                    let r = (BigRational::from_integer(BigInt::from(e)) - slope_dot(env.m, &ks)) / slope_dot(env.theta, &ks);
                    if r < *env.r_lo || r > *env.r_hi {
                        continue;
                    }
                    if let Some(p) = &prev {
                        if r <= *p {
                            continue;
                        }
                    }
                    blocks.push(SlopeBlock { r: r.clone(), k: k.clone(), e });
                    rec(env, e_of, after.clone(), rem - e, Some(r), blocks);
                    blocks.pop();
                }
            }
        }
        let mut env = Env { m, theta, r_lo, r_hi, out: Vec::new() };
        rec(&mut env, &e_of, n.to_vec(), total_e, None, &mut Vec::new());
        env.out.sort();
        env.out
    }

    fn assemble(&self, a: &SlopeAssignment, duals: &BTreeMap<Piece, DualBases<F>>) -> Result<Assembled<F>> {
        let mut plus = vec![self.alg.unit(Side::Plus)];
        let mut minus = vec![self.alg.unit(Side::Minus)];
        let mut words: Vec<WordCombination<F>> = vec![vec![(F::one(), GeneratorWord::empty(Side::Minus))]];
        for b in &a.blocks {
            let d = &duals[&(b.r.clone(), b.k.clone())];
            let mut np = Vec::new();
            let mut nm = Vec::new();
            let mut nw = Vec::new();
            for ((x, y), w) in plus.iter().zip(&minus).zip(&words) {
                for u in 0..d.dim() {
                    np.push(self.alg.product(x, &d.plus[u])?);
                    nm.push(self.alg.product(y, &d.minus[u])?);
                    nw.push(combine_words(w, &d.minus_words[u]));
                }
            }
            plus = np;
            minus = nm;
            words = nw;
        }
        Ok(Assembled { plus, minus, minus_words: words })
    }

    fn pieces_of<'a>(assignments: impl Iterator<Item = &'a SlopeAssignment>) -> BTreeSet<Piece> {
        assignments.flat_map(|a| a.blocks.iter().map(|b| (b.r.clone(), b.k.clone()))).collect()
    }

    fn compute_duals(
        &self,
        m: &[BigRational],
        theta: &[BigRational],
        pieces: BTreeSet<Piece>,
        duals: &mut BTreeMap<Piece, DualBases<F>>,
    ) -> Result<()> {
        let todo: Vec<Piece> = pieces.into_iter().filter(|p| !duals.contains_key(p)).collect();
        let got: Vec<Result<DualBases<F>>> =
            todo.par_iter().map(|(r, k)| self.dual_bases(&Self::ray(m, theta, r), k)).collect();
        for (p, d) in todo.into_iter().zip(got) {
            duals.insert(p, d?);
        }
        Ok(())
    }

    /// Smallest `p` such that the minus element `g` has slope `<= m + p theta`.
    fn minus_slope_exponent(&self, g: &Element<F>, m: &[BigRational], theta: &[BigRational]) -> Result<BigRational> {
        let n = g.shape().to_vec();
        let q = self.alg.quiver();
        let mut best: Option<BigRational> = None;
        for k in sub_vectors(&n) {
            if k.iter().all(|&x| x == 0) {
                continue;
            }
            let ks = to_signed(&k);
            let rest: Vec<i64> = n.iter().zip(&k).map(|(a, b)| (a - b) as i64).collect();
            let lowest = g.poly.min_degree_profile(&k)?;
            let num = BigRational::from_integer(BigInt::from(-lowest - edge_form(q, &rest, &ks))) - slope_dot(m, &ks);
            let p = num / slope_dot(theta, &ks);
            if best.as_ref().map_or(true, |b| p > *b) {
                best = Some(p);
            }
        }
        best.ok_or_else(|| Error::InvalidInput("slope of an element of shape 0".into()))
    }

    /// Windowed check of the factorization of the canonical tensor over the
    /// slopes `m + r theta`.
    ///
    /// Every minus word `w` of size at most `hbound` with letters in
    /// `[-window, window]` is contracted against the ordered product of the
    /// dual systems over all slope assignments that can pair with it, which
    /// must return the expansion of `w`. Assignments whose blocks have
    /// `|e_j| <= window |k_j|` are checked for orthogonality, and the shape-one
    /// layer is compared with `e_{i,d} (x) f_{i,-d} / gamma_i`.
    pub fn rprime_window_check(
        &self,
        m: &[BigRational],
        theta: &[BigRational],
        hbound: usize,
        window: i64,
    ) -> Result<RprimeReport> {
        let nv = self.alg.vertex_count();
        if m.len() != nv || theta.len() != nv {
            return Err(Error::InvalidInput(format!("slope and direction must have {nv} entries")));
        }
        if theta.iter().any(|x| *x <= BigRational::zero()) {
            return Err(Error::InvalidInput("direction entries must be positive".into()));
        }
        if window < 0 || window > i32::MAX as i64 {
            return Err(Error::InvalidInput("window must be nonnegative".into()));
        }
        let w32 = window as i32;
        let shapes: Vec<DimVec> = sub_vectors(&vec![hbound; nv])
            .into_iter()
            .filter(|n| (1..=hbound).contains(&total(n)))
            .collect();

        // contraction against every test word
        let mut words = Vec::new();
        for n in &shapes {
            let len = total(n);
            let mut degs_all = Vec::new();
            for t in -(len as i64) * window..=(len as i64) * window {
                degs_all.extend(bounded_sums(len, -w32, w32, t));
            }
            for o in vertex_orderings(n) {
                for degs in &degs_all {
                    words.push(GeneratorWord::new(Side::Minus, o.iter().cloned().zip(degs.iter().cloned()).collect()));
                }
            }
        }
        let prepared: Vec<Result<Option<(GeneratorWord, Element<F>, BigRational, Vec<SlopeAssignment>)>>> = words
            .par_iter()
            .map(|w| {
                let g = self.expand_word(w)?;
                if g.is_zero() {
                    return Ok(None);
                }
                let n = w.shape(nv);
                let p = self.minus_slope_exponent(&g, m, theta)?;
                let lo = Self::first_slope_floor(m, theta, &n, -w.vdeg(), &p);
                let assigns = self.slope_assignments(m, theta, &n, -w.vdeg(), &lo, &p);
                Ok(Some((w.clone(), g, p, assigns)))
            })
            .collect();
        let mut cases = Vec::new();
        let mut words_vanishing = 0;
        for x in prepared {
            match x? {
                Some(c) => cases.push(c),
                None => words_vanishing += 1,
            }
        }

        let mut window_assigns = Vec::new();
        for n in &shapes {
            let t = total(n) as i64;
            let r_lo = self.ray_bound(m, theta, n, -window, false);
            let r_hi = self.ray_bound(m, theta, n, window, true);
            for d in -t * window..=t * window {
                window_assigns.extend(
                    self.slope_assignments(m, theta, n, d, &r_lo, &r_hi).into_iter().filter(|a| a.in_window(window)),
                );
            }
        }

        let mut duals = BTreeMap::new();
        let pieces = Self::pieces_of(cases.iter().flat_map(|c| c.3.iter()).chain(window_assigns.iter()));
        self.compute_duals(m, theta, pieces, &mut duals)?;

        let mut all_assigns: BTreeSet<SlopeAssignment> = cases.iter().flat_map(|c| c.3.iter().cloned()).collect();
        all_assigns.extend(window_assigns.iter().cloned());
        let all_assigns: Vec<SlopeAssignment> = all_assigns.into_iter().collect();
        let built: Vec<Result<Assembled<F>>> = all_assigns.par_iter().map(|a| self.assemble(a, &duals)).collect();
        let mut assembled = BTreeMap::new();
        for (a, b) in all_assigns.into_iter().zip(built) {
            assembled.insert(a, b?);
        }

        let contractions: Vec<Result<WordContraction>> = cases
            .par_iter()
            .map(|(w, g, p, assigns)| {
                let mut acc = Element::zero(Side::Minus, g.shape().to_vec());
                let mut nonzero = 0;
                let mut outside = 0;
                for a in assigns {
                    let ab = &assembled[a];
                    let mut any = false;
                    for (x, y) in ab.plus.iter().zip(&ab.minus) {
                        let c = self.pairing_word(x, w)?;
                        if !c.is_zero() {
                            any = true;
                            acc = acc.add(&y.scale(&c));
                        }
                    }
                    if any {
                        nonzero += 1;
                        if !a.in_window(window) {
                            outside += 1;
                        }
                    }
                }
                Ok(WordContraction {
                    word: w.letters.clone(),
                    p_max: p.clone(),
                    assignments: assigns.len(),
                    nonzero_assignments: nonzero,
                    outside_window: outside,
                    ok: acc == *g,
                })
            })
            .collect();
        let mut contraction_failures = Vec::new();
        let mut outside_window_nonzero = 0;
        let mut max_assignments_per_word = 0;
        for c in contractions {
            let c = c?;
            outside_window_nonzero += c.outside_window;
            max_assignments_per_word = max_assignments_per_word.max(c.assignments);
            if !c.ok {
                contraction_failures.push(c);
            }
        }

        // orthogonality among the window assignments of equal bidegree
        let mut by_degree: BTreeMap<(DimVec, i64), Vec<&SlopeAssignment>> = BTreeMap::new();
        for a in &window_assigns {
            by_degree.entry((a.shape(nv), a.vdeg())).or_default().push(a);
        }
        let mut jobs = Vec::new();
        for group in by_degree.values() {
            for &a in group {
                for &b in group {
                    for u in 0..assembled[a].plus.len() {
                        for v in 0..assembled[b].minus.len() {
                            jobs.push((a, u, b, v));
                        }
                    }
                }
            }
        }
        let ortho: Vec<Result<Option<(SlopeAssignment, usize, SlopeAssignment, usize, String)>>> = jobs
            .par_iter()
            .map(|&(a, u, b, v)| {
                let x = self.pairing_combination(&assembled[a].plus[u], &assembled[b].minus_words[v])?;
                let want = if a == b && u == v { F::one() } else { F::zero() };
                Ok((x != want).then(|| (a.clone(), u, b.clone(), v, x.to_exact_string())))
            })
            .collect();
        let mut orthogonality_failures = Vec::new();
        for o in ortho {
            if let Some(f) = o? {
                orthogonality_failures.push(f);
            }
        }

        // shape-one layer
        let mut shape_one = Vec::new();
        for i in 0..nv {
            let unit = self.alg.unit_vector(i);
            for d in -w32..=w32 {
                let r = (BigRational::from_integer(BigInt::from(d)) - m[i].clone()) / theta[i].clone();
                let key = (r.clone(), unit.clone());
                if !duals.contains_key(&key) {
                    self.compute_duals(m, theta, BTreeSet::from([key.clone()]), &mut duals)?;
                }
                let db = &duals[&key];
                let gamma = self.alg.gamma(i);
                let e = self.alg.generator(Side::Plus, i, d);
                let f = self.alg.generator(Side::Minus, i, -d).scale(&gamma.inv().expect("nonzero"));
                let ok = db.dim() == 1 && {
                    let c = db.plus[0].poly.coeff(&[d]);
                    match c.inv() {
                        Some(ci) => db.plus[0] == e.scale(&c) && db.minus[0] == f.scale(&ci),
                        None => false,
                    }
                };
                shape_one.push(ShapeOneCheck { vertex: i, d, gamma: gamma.to_exact_string(), ok });
            }
        }

        let passed = contraction_failures.is_empty()
            && orthogonality_failures.is_empty()
            && shape_one.iter().all(|s| s.ok);
        Ok(RprimeReport {
            m: m.to_vec(),
            theta: theta.to_vec(),
            hbound,
            window,
            window_semantics: format!(
                "test words: all minus words of size <= {hbound} with letter degrees in [-{window}, {window}]; \
                 each is contracted against every slope assignment that can pair with it (slopes bounded by the \
                 word's slope, total degree fixed); assignments count as inside the window when every block has \
                 |e_j| <= {window} |k_j|"
            ),
            words_checked: cases.len(),
            words_vanishing,
            contraction_failures,
            max_assignments_per_word,
            outside_window_nonzero,
            window_assignments: window_assigns.len(),
            orthogonality_pairs: jobs.len(),
            orthogonality_failures,
            shape_one,
            passed,
        })
    }

    /// A lower bound for the first slope of an assignment of shape `n` and
    /// degree `total_e` whose slopes are all at most `r_hi`.
    fn first_slope_floor(m: &[BigRational], theta: &[BigRational], n: &[usize], total_e: i64, r_hi: &BigRational) -> BigRational {
        let ns = to_signed(n);
        let mut best: Option<BigRational> = None;
        for k in sub_vectors(n) {
            if total(&k) == 0 {
                continue;
            }
            let ks = to_signed(&k);
            let rest: Vec<i64> = ns.iter().zip(&ks).map(|(a, b)| a - b).collect();
            let r = (BigRational::from_integer(BigInt::from(total_e)) - slope_dot(m, &ns) - r_hi * slope_dot(theta, &rest))
                / slope_dot(theta, &ks);
            if best.as_ref().map_or(true, |b| r < *b) {
                best = Some(r);
            }
        }
        best.expect("nonzero shape")
    }

    /// Extreme value of `r` over nonzero `k <= n` with `e = bound |k|`.
    fn ray_bound(&self, m: &[BigRational], theta: &[BigRational], n: &[usize], bound: i64, upper: bool) -> BigRational {
        let mut best: Option<BigRational> = None;
        for k in sub_vectors(n) {
            let t = total(&k) as i64;
            if t == 0 {
                continue;
            }
            let ks = to_signed(&k);
            let r = (BigRational::from_integer(BigInt::from(bound * t)) - slope_dot(m, &ks)) / slope_dot(theta, &ks);
            best = Some(match best {
                None => r,
                Some(b) if upper == (r > b) => r,
                Some(b) => b,
            });
        }
        best.expect("nonzero shape")
    }

    /// Random checks of `<prod a_r, prod b_r> = prod <a_r, b_r>` for ordered
    /// products along the ray `m + r theta`. In about a third of the cases the
    /// minus side uses a different assignment of the same bidegree.
    pub fn factorized_pairing_check(
        &self,
        m: &[BigRational],
        theta: &[BigRational],
        max_size: usize,
        trials: usize,
        seed: u64,
    ) -> Result<Vec<FactorizedPairingCase>> {
        let nv = self.alg.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shapes: Vec<DimVec> = sub_vectors(&vec![max_size; nv])
            .into_iter()
            .filter(|n| (1..=max_size).contains(&total(n)))
            .collect();
        let span = BigRational::from_integer(BigInt::from(2));
        let mut duals: BTreeMap<Piece, DualBases<F>> = BTreeMap::new();
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < trials {
            attempts += 1;
            if attempts > 1000 * trials.max(1) {
                return Err(Error::Internal("factorized_pairing_check could not find enough nonempty cases".into()));
            }
            let n = shapes.choose(&mut rng).expect("nonempty").clone();
            let t = total(&n) as i64;
            let d = rng.gen_range(-2 * t..=2 * t);
            let assigns = self.slope_assignments(m, theta, &n, d, &-span.clone(), &span);
            if assigns.is_empty() {
                continue;
            }
            self.compute_duals(m, theta, Self::pieces_of(assigns.iter()), &mut duals)?;
            let live: Vec<&SlopeAssignment> = assigns
                .iter()
                .filter(|a| a.blocks.iter().all(|b| duals[&(b.r.clone(), b.k.clone())].dim() > 0))
                .collect();
            if live.is_empty() {
                continue;
            }
            let pa = live.choose(&mut rng).expect("nonempty");
            let ma = if rng.gen_range(0..3) == 0 { live.choose(&mut rng).expect("nonempty") } else { pa };
            let mut rand_elem = |basis: &[Element<F>], side: Side, k: &[usize]| -> Element<F> {
                let mut x = Element::zero(side, k.to_vec());
                for b in basis {
                    x = x.add(&b.scale(&F::from_i64(rng.gen_range(-3..=3))));
                }
                if x.is_zero() {
                    basis[0].clone()
                } else {
                    x
                }
            };
            let mut plus_factors = BTreeMap::new();
            for b in &pa.blocks {
                let db = &duals[&(b.r.clone(), b.k.clone())];
                plus_factors.insert(b.r.clone(), rand_elem(&db.plus, Side::Plus, &b.k));
            }
            let mut minus_factors = BTreeMap::new();
            for b in &ma.blocks {
                let db = &duals[&(b.r.clone(), b.k.clone())];
                // random combinations of the dual basis, carried with their word expressions
                let coeffs: Vec<F> = (0..db.dim()).map(|_| F::from_i64(rng.gen_range(-3..=3))).collect();
                let mut x = Element::zero(Side::Minus, b.k.clone());
                let mut w: WordCombination<F> = Vec::new();
                for (u, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    x = x.add(&db.minus[u].scale(c));
                    w.extend(db.minus_words[u].iter().map(|(y, word)| (y.mul(c), word.clone())));
                }
                if x.is_zero() {
                    x = db.minus[0].clone();
                    w = db.minus_words[0].clone();
                }
                minus_factors.insert(b.r.clone(), (x, w));
            }
            let mut a_prod = self.alg.unit(Side::Plus);
            for x in plus_factors.values() {
                a_prod = self.alg.product(&a_prod, x)?;
            }
            let mut b_words: WordCombination<F> = vec![(F::one(), GeneratorWord::empty(Side::Minus))];
            for (_, w) in minus_factors.values() {
                b_words = combine_words(&b_words, w);
            }
            let lhs = self.pairing_combination(&a_prod, &b_words)?;
            let slopes: BTreeSet<&BigRational> = plus_factors.keys().chain(minus_factors.keys()).collect();
            let mut rhs = F::one();
            for r in slopes {
                let v = match (plus_factors.get(r), minus_factors.get(r)) {
                    (Some(a), Some((_, w))) => self.pairing_combination(a, w)?,
                    _ => F::zero(),
                };
                rhs.mul_assign(&v);
            }
            out.push(FactorizedPairingCase {
                plus: (*pa).clone(),
                minus: (*ma).clone(),
                lhs: lhs.to_exact_string(),
                rhs: rhs.to_exact_string(),
                ok: lhs == rhs,
            });
        }
        Ok(out)
    }
}
