//! Slope conditions and the graded pieces `B_{m|n}` of slope subalgebras.

use crate::error::{Error, Result};
use crate::field::{accumulate, Field, Rational};
use crate::laurent::{offsets, Exps, SymLaurent};
use crate::linalg::{self, SparseRow};
use crate::quiver::{edge_form, sub_vectors, to_signed, DimVec, Quiver};
use crate::shuffle::{Element, PowCache, ShuffleAlgebra, Side, WheelRowKey};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

/// Default ceiling on the number of candidate monomials per graded piece.
pub const DEFAULT_CEILING: usize = 5_000_000;

/// Rational vector indexed by vertices.
pub type SlopeVector = Vec<BigRational>;

pub fn slope_from_ints(v: &[i64]) -> SlopeVector {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// `m . n` as an exact rational.
pub fn slope_dot(m: &[BigRational], n: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (a, &b) in m.iter().zip(n) {
        acc += a * BigRational::from_integer(BigInt::from(b));
    }
    acc
}

fn floor_i64(x: &BigRational) -> i64 {
    x.floor().to_integer().to_i64().expect("small")
}

/// `vdeg <= m . hdeg` on the plus side, `vdeg >= m . hdeg` on the minus side
/// (with `hdeg = -n` there).
pub fn naive_slope_leq<F: Field>(f: &Element<F>, m: &[BigRational]) -> Result<bool> {
    let b = f
        .bidegree()
        .ok_or_else(|| Error::InvalidInput("naive slope of a non-homogeneous element".into()))?;
    let md = slope_dot(m, &b.hdeg);
    let v = BigRational::from_integer(BigInt::from(b.vdeg));
    Ok(match f.side {
        Side::Plus => v <= md,
        Side::Minus => v >= md,
    })
}

/// Slope bound for the sub-block `k`: the largest allowed top-`k` degree on the
/// plus side, the smallest allowed bottom-`k` degree on the minus side.
pub fn slope_bound(q: &Quiver, m: &[BigRational], n: &[usize], k: &[usize], side: Side) -> BigRational {
    let ks = to_signed(k);
    let rest: Vec<i64> = n.iter().zip(k).map(|(&a, &b)| (a - b) as i64).collect();
    let mk = slope_dot(m, &ks);
    match side {
        Side::Plus => mk + BigRational::from_integer(BigInt::from(edge_form(q, &ks, &rest))),
        Side::Minus => -mk - BigRational::from_integer(BigInt::from(edge_form(q, &rest, &ks))),
    }
}

/// Monomial-wise slope test. Scaling a subset of variables by `xi` sends distinct
/// monomials to distinct monomials, so the limit is finite iff every monomial obeys
/// the bound.
pub fn has_slope_leq<F: Field>(q: &Quiver, f: &Element<F>, m: &[BigRational]) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::InvalidInput("slope of the zero element".into()));
    }
    let n = f.shape().to_vec();
    for k in sub_vectors(&n) {
        let bound = slope_bound(q, m, &n, &k, f.side);
        let ok = match f.side {
            Side::Plus => BigRational::from_integer(BigInt::from(f.poly.degree_profile(&k)?)) <= bound,
            Side::Minus => BigRational::from_integer(BigInt::from(f.poly.min_degree_profile(&k)?)) >= bound,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `F` lies in `B_{m|n}`: homogeneous of naive slope exactly `m`, slope `<= m`.
pub fn in_slope_piece<F: Field>(alg: &ShuffleAlgebra<F>, f: &Element<F>, m: &[BigRational]) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let Some(b) = f.bidegree() else { return Ok(false) };
    let md = slope_dot(m, &b.hdeg);
    if BigRational::from_integer(BigInt::from(b.vdeg)) != md {
        return Ok(false);
    }
    if !has_slope_leq(alg.quiver(), f, m)? {
        return Ok(false);
    }
    Ok(alg.wheel_check(f).passed)
}

/// Column order for elimination. Pivoting on the most balanced monomials first
/// keeps the echelon form much sparser.
fn elimination_order(cols: &mut [Exps], side: Side) {
    if side == Side::Minus {
        cols.reverse();
    }
}

/// Sorted canonical exponent tables (per-block non-increasing) of shape `n` with total
/// degree `m.n` (plus) or `-m.n` (minus) satisfying every slope inequality.
pub fn slope_monomials(q: &Quiver, m: &[BigRational], n: &[usize], side: Side, ceiling: usize) -> Result<Vec<Exps>> {
    let ns = to_signed(n);
    let md = slope_dot(m, &ns);
    if !md.is_integer() {
        return Ok(vec![]);
    }
    let nv: usize = n.iter().sum();
    if nv == 0 {
        return Ok(vec![SmallVec::new()]);
    }
    // Work on the plus side; the minus side is the mirror image e -> -e.
    let total = md.to_integer().to_i64().expect("small");
    let subs = sub_vectors(n);
    // bounds[k] for the top-k sums of the (possibly negated) exponents
    let bounds: Vec<(DimVec, i64)> = subs
        .iter()
        .map(|k| {
            let b = slope_bound(q, m, n, k, side);
            let b = if side == Side::Plus { floor_i64(&b) } else { floor_i64(&(-b)) };
            (k.clone(), b)
        })
        .collect();
    let nverts = n.len();
    let mut hi = vec![0i64; nverts];
    let mut lo = vec![0i64; nverts];
    for i in 0..nverts {
        if n[i] == 0 {
            continue;
        }
        let mut e = vec![0usize; nverts];
        e[i] = 1;
        hi[i] = bounds.iter().find(|(k, _)| *k == e).expect("present").1;
        let mut r = n.to_vec();
        r[i] -= 1;
        // total - top(n - e_i) <= smallest entry in block i
        lo[i] = total - bounds.iter().find(|(k, _)| *k == r).expect("present").1;
    }
    let off = offsets(n);
    let mut out: Vec<Exps> = Vec::new();
    let mut cur: Exps = SmallVec::from_elem(0, nv);
    // single-vertex prefix bounds for pruning inside a block
    let block_bound = |i: usize, len: usize| -> i64 {
        let mut k = vec![0usize; nverts];
        k[i] = len;
        bounds.iter().find(|(kk, _)| *kk == k).expect("present").1
    };
    let prefix_bounds: Vec<Vec<i64>> =
        (0..nverts).map(|i| (0..=n[i]).map(|l| block_bound(i, l)).collect()).collect();
    let mut count = 0usize;
    let mut ctx = EnumCtx {
        n,
        off: &off,
        hi: &hi,
        lo: &lo,
        prefix: &prefix_bounds,
        bounds: &bounds,
        total,
        ceiling,
        count: &mut count,
        out: &mut out,
    };
    enumerate_block(&mut ctx, 0, 0, 0, &mut cur)?;
    if side == Side::Minus {
        for e in out.iter_mut() {
            for x in e.iter_mut() {
                *x = -*x;
            }
            crate::laurent::canonicalize_in_place(e, n);
        }
    }
    out.sort();
    Ok(out)
}

struct EnumCtx<'a> {
    n: &'a [usize],
    off: &'a [usize],
    hi: &'a [i64],
    lo: &'a [i64],
    prefix: &'a [Vec<i64>],
    bounds: &'a [(DimVec, i64)],
    total: i64,
    ceiling: usize,
    count: &'a mut usize,
    out: &'a mut Vec<Exps>,
}

fn enumerate_block(ctx: &mut EnumCtx, vertex: usize, pos: usize, sum: i64, cur: &mut Exps) -> Result<()> {
    let nverts = ctx.n.len();
    if vertex == nverts {
        if sum != ctx.total {
            return Ok(());
        }
        // check every k
        for (k, b) in ctx.bounds {
            let mut s = 0i64;
            for i in 0..nverts {
                for a in 0..k[i] {
                    s += cur[ctx.off[i] + a] as i64;
                }
            }
            if s > *b {
                return Ok(());
            }
        }
        *ctx.count += 1;
        if *ctx.count > ctx.ceiling {
            return Err(Error::ResourceLimit(format!(
                "more than {} candidate monomials in shape {:?}",
                ctx.ceiling, ctx.n
            )));
        }
        ctx.out.push(cur.clone());
        return Ok(());
    }
    let ni = ctx.n[vertex];
    if pos == ni {
        return enumerate_block(ctx, vertex + 1, 0, sum, cur);
    }
    // remaining capacity to reach the total
    let mut rem_hi = 0i64;
    let mut rem_lo = 0i64;
    for j in vertex + 1..nverts {
        rem_hi += ctx.hi[j] * ctx.n[j] as i64;
        rem_lo += ctx.lo[j] * ctx.n[j] as i64;
    }
    let idx = ctx.off[vertex] + pos;
    let top = if pos == 0 { ctx.hi[vertex] } else { (cur[idx - 1] as i64).min(ctx.hi[vertex]) };
    let left_in_block = (ni - pos - 1) as i64;
    let mut prefix_sum = 0i64;
    for a in 0..pos {
        prefix_sum += cur[ctx.off[vertex] + a] as i64;
    }
    let mut v = top;
    while v >= ctx.lo[vertex] {
        // prefix (top-k within this block) bound
        if prefix_sum + v > ctx.prefix[vertex][pos + 1] {
            v -= 1;
            continue;
        }
        let s = sum + v;
        // the rest of this block lies in [lo, v]
        let max_rest = s + left_in_block * v + rem_hi;
        let min_rest = s + left_in_block * ctx.lo[vertex] + rem_lo;
        if max_rest < ctx.total {
            break;
        }
        if min_rest <= ctx.total {
            cur[idx] = v as i32;
            enumerate_block(ctx, vertex, pos + 1, s, cur)?;
        }
        v -= 1;
    }
    Ok(())
}

/// Assembles the wheel system on a list of columns: one sparse row per row key.
pub fn wheel_system<F: Field>(alg: &ShuffleAlgebra<F>, shape: &[usize], cols: &[Exps]) -> Vec<SparseRow<F>> {
    let mut index: FxHashMap<WheelRowKey, usize> = FxHashMap::default();
    let mut rows: Vec<FxHashMap<u32, F>> = Vec::new();
    let mut pows = PowCache::default();
    for (c, key) in cols.iter().enumerate() {
        for (rk, v) in alg.wheel_rows(shape, key, &mut pows) {
            let next = index.len();
            let r = *index.entry(rk).or_insert(next);
            if r == rows.len() {
                rows.push(FxHashMap::default());
            }
            accumulate(&mut rows[r], c as u32, &v);
        }
    }
    rows.into_iter()
        .map(|m| {
            let mut v: Vec<(u32, F)> = m.into_iter().collect();
            v.sort_by_key(|x| x.0);
            v
        })
        .filter(|v| !v.is_empty())
        .collect()
}

/// Explicit basis of a graded piece `B_{m|n}`.
#[derive(Clone, Debug)]
pub struct SlopeBasis<F: Field> {
    pub m: SlopeVector,
    pub n: DimVec,
    pub side: Side,
    pub basis: Vec<Element<F>>,
}

impl<F: Field> SlopeBasis<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Dimension of `B_{m|n}` (rank computed over the field of `alg`).
pub fn slope_dim<F: Field>(alg: &ShuffleAlgebra<F>, m: &[BigRational], n: &[usize], ceiling: usize) -> Result<usize> {
    if n.iter().all(|&x| x == 0) {
        return Ok(1);
    }
    let cols = slope_monomials(alg.quiver(), m, n, Side::Plus, ceiling)?;
    if cols.is_empty() {
        return Ok(0);
    }
    let rows = wheel_system(alg, n, &cols);
    let rank = linalg::sparse_rank(rows, cols.len());
    Ok(cols.len() - rank)
}

/// A basis of `B_{m|n}` in reduced echelon form.
pub fn slope_basis<F: Field>(alg: &ShuffleAlgebra<F>, m: &[BigRational], n: &[usize], side: Side, ceiling: usize) -> Result<SlopeBasis<F>> {
    let mk = |basis| SlopeBasis { m: m.to_vec(), n: n.to_vec(), side, basis };
    if n.iter().all(|&x| x == 0) {
        return Ok(mk(vec![Element::new(side, SymLaurent::one(n.to_vec()))]));
    }
    let mut cols = slope_monomials(alg.quiver(), m, n, side, ceiling)?;
    if cols.is_empty() {
        return Ok(mk(vec![]));
    }
    elimination_order(&mut cols, side);
    let rows = wheel_system(alg, n, &cols);
    let kernel = linalg::sparse_kernel(rows, cols.len());
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut p = SymLaurent::zero(n.to_vec());
            for (c, x) in v {
                p.add_orbit(&cols[c as usize], &x);
            }
            Element::new(side, p)
        })
        .collect();
    Ok(mk(basis))
}

/// Truncated graded character: `dim B_{m|n}` for every `0 <= n <= n_max`.
pub fn graded_character<F: Field>(
    alg: &ShuffleAlgebra<F>,
    m: &[BigRational],
    n_max: &[usize],
    ceiling: usize,
) -> Result<Vec<(DimVec, usize)>> {
    let mut out = Vec::new();
    for n in sub_vectors(n_max) {
        let d = slope_dim(alg, m, &n, ceiling)?;
        out.push((n, d));
    }
    Ok(out)
}

/// Parses a comma separated list of rationals such as `"0,1/2"`.
pub fn parse_slope(s: &str) -> Result<SlopeVector> {
    s.split(',')
        .enumerate()
        .map(|(pos, part)| {
            Rational::parse(part).map(|r| r.0).ok_or_else(|| {
                Error::Parse(format!("entry {} ({:?}) is not a rational number", pos + 1, part.trim()))
            })
        })
        .collect()
}

/// gcd helper used by reporting code.
pub fn lcm_denominators(m: &[BigRational]) -> BigInt {
    m.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()))
}
