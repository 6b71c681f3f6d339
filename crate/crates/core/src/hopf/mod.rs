//! Hopf structure: pairings, coproduct components, the slope coproducts, the
//! hinge-driven PBW decomposition and the factorization of the canonical tensor.
//!
//! Minus-side elements enter pairings through their expression in generator
//! words, which is the form in which the pairing is given.

mod coproduct;
mod pairing;
mod pbw;
mod rmatrix;
mod series;

pub use coproduct::{CartanWord, DeltaSummand, MixedTensor};
pub use pbw::{Hinge, HingeStep, PbwDecomposition, PbwFactor, PbwTerm};
pub use rmatrix::{
    DualBases, FactorizedPairingCase, RprimeReport, ShapeOneCheck, SlopeAssignment, WordContraction,
};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::DimVec;
use crate::shuffle::{Element, ShuffleAlgebra, Side};
use crate::slope::DEFAULT_CEILING;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::sync::Mutex;

/// A word in the generators `e_{i,d}` (plus side) or `f_{i,d}` (minus side).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneratorWord {
    pub side: Side,
    pub letters: Vec<(usize, i32)>,
}

impl GeneratorWord {
    pub fn new(side: Side, letters: Vec<(usize, i32)>) -> Self {
        GeneratorWord { side, letters }
    }

    pub fn empty(side: Side) -> Self {
        GeneratorWord { side, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Multiplicity of each vertex among the letters.
    pub fn shape(&self, vertices: usize) -> DimVec {
        let mut n = vec![0; vertices];
        for &(i, _) in &self.letters {
            n[i] += 1;
        }
        n
    }

    pub fn vdeg(&self) -> i64 {
        self.letters.iter().map(|&(_, d)| d as i64).sum()
    }

    /// Parses `"i:d,i:d,..."`; the empty string is the empty word.
    pub fn parse(side: Side, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        if s.trim().is_empty() {
            return Ok(GeneratorWord { side, letters });
        }
        let mut col = 1;
        for (pos, part) in s.split(',').enumerate() {
            let bad = || {
                Error::Parse(format!("letter {} ({:?}) at column {col}: expected vertex:degree", pos + 1, part.trim()))
            };
            let (i, d) = part.split_once(':').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let d: i32 = d.trim().parse().map_err(|_| bad())?;
            letters.push((i, d));
            col += part.len() + 1;
        }
        Ok(GeneratorWord { side, letters })
    }

    pub fn concat(&self, o: &GeneratorWord) -> GeneratorWord {
        assert_eq!(self.side, o.side);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&o.letters);
        GeneratorWord { side: self.side, letters }
    }
}

/// A finite linear combination of generator words.
pub type WordCombination<F> = Vec<(F, GeneratorWord)>;

/// Concatenation product of two word combinations.
pub fn combine_words<F: Field>(a: &WordCombination<F>, b: &WordCombination<F>) -> WordCombination<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (x, u) in a {
        for (y, v) in b {
            out.push((x.mul(y), u.concat(v)));
        }
    }
    out
}

/// Extra radius allowed beyond the support of an element when searching for
/// a word expression.
pub const DEFAULT_WORD_RADIUS: i32 = 8;

/// The shuffle algebra together with caches for word expansions.
pub struct Hopf<F: Field> {
    alg: ShuffleAlgebra<F>,
    ceiling: usize,
    word_radius: i32,
    expansions: Mutex<FxHashMap<GeneratorWord, Element<F>>>,
}

impl<F: Field> Hopf<F> {
    pub fn new(alg: ShuffleAlgebra<F>) -> Self {
        Hopf {
            alg,
            ceiling: DEFAULT_CEILING,
            word_radius: DEFAULT_WORD_RADIUS,
            expansions: Mutex::new(FxHashMap::default()),
        }
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn with_word_radius(mut self, r: i32) -> Self {
        self.word_radius = r;
        self
    }

    pub fn algebra(&self) -> &ShuffleAlgebra<F> {
        &self.alg
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    fn check_word(&self, w: &GeneratorWord) -> Result<()> {
        let nv = self.alg.vertex_count();
        if let Some(&(i, _)) = w.letters.iter().find(|(i, _)| *i >= nv) {
            return Err(Error::InvalidInput(format!("letter vertex {i} out of range (quiver has {nv})")));
        }
        Ok(())
    }

    /// Left-to-right product of the letters of a word.
    pub fn expand_word(&self, w: &GeneratorWord) -> Result<Element<F>> {
        self.check_word(w)?;
        if let Some(e) = self.expansions.lock().expect("cache").get(w) {
            return Ok(e.clone());
        }
        let out = match w.letters.split_last() {
            None => self.alg.unit(w.side),
            Some((&(i, d), rest)) => {
                let prefix = self.expand_word(&GeneratorWord::new(w.side, rest.to_vec()))?;
                self.alg.product(&prefix, &self.alg.generator(w.side, i, d))?
            }
        };
        self.expansions.lock().expect("cache").insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Expands a word combination into an element.
    pub fn expand_combination(&self, side: Side, shape: &[usize], c: &WordCombination<F>) -> Result<Element<F>> {
        let mut acc = Element::zero(side, shape.to_vec());
        for (x, w) in c {
            acc = acc.add(&self.expand_word(w)?.scale(x));
        }
        Ok(acc)
    }

    /// Product of `gamma_{i_a}` over the letters.
    pub(crate) fn gamma_of_word(&self, w: &GeneratorWord) -> F {
        let mut g = F::one();
        for &(i, _) in &w.letters {
            g.mul_assign(&self.alg.gamma(i));
        }
        g
    }
}
