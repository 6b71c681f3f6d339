//! The pairing between the plus and minus halves, computed on words by
//! iterated constant-term extraction, and the search for word expressions.

use super::series::{bounded_sums, for_each_composition, vertex_orderings, SeriesBank};
use super::{CartanWord, GeneratorWord, Hopf, WordCombination};
use crate::error::{Error, Result};
use crate::field::{accumulate, Field};
use crate::laurent::{offsets, Exps, SymLaurent};
use crate::linalg::{solve_in_span, SparseRow};
use crate::shuffle::{Element, Side};
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

/// Constant term of `prod z_a^{d_a} P(z) / prod_{a<b} zeta_{i_a i_b}(z_a / z_b)`
/// in the region `|z_1| << ... << |z_n|`, where letter `a` is plugged into a
/// variable of vertex `i_a` of `P`.
pub(crate) fn ordered_constant_term<F: Field>(
    bank: &mut SeriesBank<'_, F>,
    poly: &SymLaurent<F>,
    letters: &[(usize, i32)],
) -> F {
    let n = letters.len();
    let shape = poly.shape();
    let off = offsets(shape);
    let mut next = off.clone();
    let pos: Vec<usize> = letters
        .iter()
        .map(|&(i, _)| {
            next[i] += 1;
            next[i] - 1
        })
        .collect();
    if n == 0 {
        return poly.coeff(&[]);
    }
    // valuations of the pair expansions
    let mut val = vec![vec![0i32; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            val[a][b] = bank.inv_zeta_at_zero(letters[a].0, letters[b].0).val;
        }
    }
    let mut state: FxHashMap<Exps, F> = FxHashMap::default();
    for (e, c) in poly.to_raw().terms {
        let x: Exps = (0..n).map(|a| e[pos[a]] + letters[a].1).collect();
        accumulate(&mut state, x, &c);
    }
    for a in 0..n {
        let mut out: FxHashMap<Exps, F> = FxHashMap::default();
        let later = n - a - 1;
        let shift: i64 = (a + 1..n).map(|b| val[a][b] as i64).sum();
        for (e, c) in &state {
            let budget = -(e[a] as i64) - shift;
            if budget < 0 {
                continue;
            }
            let mut coeffs: Vec<Vec<F>> = Vec::with_capacity(later);
            for b in a + 1..n {
                let s = bank.inv_zeta_at_zero(letters[a].0, letters[b].0);
                coeffs.push((0..=budget as usize).map(|k| s.coeff(k)).collect());
            }
            for_each_composition(budget as usize, later, &mut |t| {
                let mut v = c.clone();
                let mut ne = e.clone();
                ne[a] = 0;
                for (idx, &tb) in t.iter().enumerate() {
                    let b = a + 1 + idx;
                    v.mul_assign(&coeffs[idx][tb]);
                    ne[b] -= val[a][b] + tb as i32;
                }
                if !v.is_zero() {
                    accumulate(&mut out, ne, &v);
                }
            });
        }
        state = out;
    }
    let mut total = F::zero();
    for (_, c) in state {
        total.add_assign(&c);
    }
    total
}

impl<F: Field> Hopf<F> {
    fn word_matches(&self, shape: &[usize], w: &GeneratorWord) -> bool {
        w.shape(self.alg.vertex_count()) == shape
    }

    /// `<F, f_{i_1,d_1} * ... * f_{i_n,d_n}>` for a plus-side element `F`.
    pub fn pairing_word(&self, f: &Element<F>, w: &GeneratorWord) -> Result<F> {
        if f.side != Side::Plus || w.side != Side::Minus {
            return Err(Error::InvalidInput("pairing_word takes a plus element and a minus word".into()));
        }
        self.check_word(w)?;
        if !self.word_matches(f.shape(), w) {
            return Ok(F::zero());
        }
        if let Some(d) = f.poly.vdeg() {
            if d + w.vdeg() != 0 {
                return Ok(F::zero());
            }
        }
        let mut bank = SeriesBank::new(&self.alg);
        let ct = ordered_constant_term(&mut bank, &f.poly, &w.letters);
        Ok(ct.mul(&self.gamma_of_word(w)))
    }

    /// `<e_{i_1,d_1} * ... * e_{i_n,d_n}, G>` for a minus-side element `G`.
    pub fn pairing_eword(&self, w: &GeneratorWord, g: &Element<F>) -> Result<F> {
        if g.side != Side::Minus || w.side != Side::Plus {
            return Err(Error::InvalidInput("pairing_eword takes a plus word and a minus element".into()));
        }
        self.check_word(w)?;
        if !self.word_matches(g.shape(), w) {
            return Ok(F::zero());
        }
        if let Some(d) = g.poly.vdeg() {
            if d + w.vdeg() != 0 {
                return Ok(F::zero());
            }
        }
        // the region |z_1| >> ... >> |z_n| is the ordered region of the reversed word
        let rev: Vec<(usize, i32)> = w.letters.iter().rev().cloned().collect();
        let mut bank = SeriesBank::new(&self.alg);
        let ct = ordered_constant_term(&mut bank, &g.poly, &rev);
        Ok(ct.mul(&self.gamma_of_word(w)))
    }

    /// `<F, sum c_w w>`.
    pub fn pairing_combination(&self, f: &Element<F>, c: &WordCombination<F>) -> Result<F> {
        let mut acc = F::zero();
        for (x, w) in c {
            if !x.is_zero() {
                acc.add_assign(&self.pairing_word(f, w)?.mul(x));
            }
        }
        Ok(acc)
    }

    /// `<F, G>` with `G` routed through its word expression.
    pub fn pair(&self, f: &Element<F>, g: &Element<F>) -> Result<F> {
        let words = self.express_in_words(g)?;
        self.pairing_combination(f, &words)
    }

    /// `<F, G>` with `F` routed through its word expression instead.
    pub fn pair_via_plus_words(&self, f: &Element<F>, g: &Element<F>) -> Result<F> {
        let words = self.express_in_words(f)?;
        let mut acc = F::zero();
        for (x, w) in &words {
            acc.add_assign(&self.pairing_eword(w, g)?.mul(x));
        }
        Ok(acc)
    }

    /// Pairing of a plus Cartan word with a minus Cartan word, both read as
    /// products of modes of `h^+` and `h^-`.
    pub fn cartan_pairing(&self, plus: &CartanWord, minus: &CartanWord) -> Result<F> {
        if plus.side != Side::Plus || minus.side != Side::Minus {
            return Err(Error::InvalidInput("cartan_pairing takes a plus and a minus Cartan word".into()));
        }
        let a = plus.letters()?;
        let b = minus.letters()?;
        let qa: u64 = a.iter().map(|x| x.1 as u64).sum();
        let qb: u64 = b.iter().map(|x| x.1 as u64).sum();
        if qa != qb {
            return Ok(F::zero());
        }
        let mut bank = SeriesBank::new(&self.alg);
        // s[x][y] distributes mode a_x over the minus letters
        let mut cap: Vec<u32> = b.iter().map(|x| x.1).collect();
        let mut total = F::zero();
        fn rec<F: Field>(
            x: usize,
            a: &[(usize, u32)],
            b: &[(usize, u32)],
            cap: &mut Vec<u32>,
            acc: F,
            bank: &mut SeriesBank<'_, F>,
            total: &mut F,
        ) {
            if x == a.len() {
                if cap.iter().all(|&c| c == 0) {
                    total.add_assign(&acc);
                }
                return;
            }
            // distribute a[x].1 among the columns
            fn dist<F: Field>(
                x: usize,
                y: usize,
                left: u32,
                a: &[(usize, u32)],
                b: &[(usize, u32)],
                cap: &mut Vec<u32>,
                acc: F,
                bank: &mut SeriesBank<'_, F>,
                total: &mut F,
            ) {
                if y == b.len() {
                    if left == 0 {
                        rec(x + 1, a, b, cap, acc, bank, total);
                    }
                    return;
                }
                for s in 0..=left.min(cap[y]) {
                    let c = bank.cartan(a[x].0, b[y].0).coeff(s as usize);
                    if c.is_zero() {
                        continue;
                    }
                    cap[y] -= s;
                    dist(x, y + 1, left - s, a, b, cap, acc.mul(&c), bank, total);
                    cap[y] += s;
                }
            }
            dist(x, 0, a[x].1, a, b, cap, acc, bank, total);
        }
        rec(0, &a, &b, &mut cap, F::one(), &mut bank, &mut total);
        Ok(total)
    }

    /// `<C L, w>` for a plus Cartan word `C`, a plus element `L` and a minus word.
    pub fn pairing_dressed(&self, c: &CartanWord, l: &Element<F>, w: &GeneratorWord) -> Result<F> {
        let q = c.mode_total();
        let mut acc = F::zero();
        let mut err = None;
        for_each_composition(q as usize, w.len(), &mut |p| {
            if err.is_some() {
                return;
            }
            let mut minus = CartanWord::one(Side::Minus, self.alg.vertex_count());
            let mut shifted = w.clone();
            for (a, &pa) in p.iter().enumerate() {
                let i = w.letters[a].0;
                minus.push(i, pa as u32);
                shifted.letters[a].1 += pa as i32;
            }
            let r = self.cartan_pairing(c, &minus).and_then(|x| {
                if x.is_zero() {
                    Ok(x)
                } else {
                    Ok(x.mul(&self.pairing_word(l, &shifted)?))
                }
            });
            match r {
                Ok(x) => acc.add_assign(&x),
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(acc),
        }
    }

    /// Expresses a homogeneous element as a combination of generator-word
    /// expansions, growing the window of letter degrees until solvable.
    pub fn express_in_words(&self, f: &Element<F>) -> Result<WordCombination<F>> {
        let shape = f.shape().to_vec();
        let side = f.side;
        if f.is_zero() {
            return Ok(Vec::new());
        }
        let d = f.poly.vdeg().ok_or_else(|| Error::InvalidInput("express_in_words needs a homogeneous element".into()))?;
        if shape.iter().all(|&x| x == 0) {
            return Ok(vec![(f.poly.coeff(&[]), GeneratorWord::empty(side))]);
        }
        let len: usize = shape.iter().sum();
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for e in f.poly.terms().keys() {
            for &x in e.iter() {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        let support = lo.abs().max(hi.abs());
        let max_radius = support + self.word_radius;
        let orders = vertex_orderings(&shape);
        let mut r = 0;
        loop {
            let (wl, wh) = (lo - r, hi + r);
            if wl.abs().max(wh.abs()) > max_radius {
                return Err(Error::Unsolvable(format!(
                    "no word expression with letter degrees in [{}, {}] (radius limit {max_radius})",
                    wl + 1,
                    wh - 1
                )));
            }
            let mut words = Vec::new();
            for degs in bounded_sums(len, wl, wh, d) {
                for o in &orders {
                    words.push(GeneratorWord::new(side, o.iter().cloned().zip(degs.iter().cloned()).collect()));
                }
            }
            if let Some(sol) = self.solve_in_words(f, &words)? {
                return Ok(sol);
            }
            r += 1;
        }
    }

    fn solve_in_words(&self, f: &Element<F>, words: &[GeneratorWord]) -> Result<Option<WordCombination<F>>> {
        let mut index: BTreeMap<Exps, u32> = BTreeMap::new();
        let key = |e: &Exps, index: &mut BTreeMap<Exps, u32>| -> u32 {
            let n = index.len() as u32;
            *index.entry(e.clone()).or_insert(n)
        };
        let mut cols: Vec<SparseRow<F>> = Vec::with_capacity(words.len());
        for w in words {
            let x = self.expand_word(w)?;
            cols.push(x.poly.terms().iter().map(|(e, c)| (key(e, &mut index), c.clone())).collect());
        }
        let b: SparseRow<F> = f.poly.terms().iter().map(|(e, c)| (key(e, &mut index), c.clone())).collect();
        let Some(x) = solve_in_span(&cols, &b, index.len()) else {
            return Ok(None);
        };
        let out: WordCombination<F> =
            x.into_iter().zip(words.iter().cloned()).filter(|(c, _)| !c.is_zero()).collect();
        let back = self.expand_combination(f.side, f.shape(), &out)?;
        if back != *f {
            return Err(Error::Internal("word expression does not re-expand to the input".into()));
        }
        Ok(Some(out))
    }
}
