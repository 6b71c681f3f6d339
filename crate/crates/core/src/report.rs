//! Serialization helpers shared by the JSON reports.

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::laurent::SymLaurent;
use crate::quiver::DimVec;
use crate::shuffle::{Element, Side};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

pub fn bigint_str<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn bigints_str<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn rational_str<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rationals_str<S: Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// `"1,2"` style key for a dimension vector.
pub fn dim_key(n: &[usize]) -> String {
    n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// JSON form of a shuffle algebra element: orbit representatives with exact
/// rational coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub side: Side,
    pub shape: DimVec,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub exps: Vec<i32>,
    pub coeff: String,
}

impl ElementFile {
    pub fn from_element<F: Field>(f: &Element<F>) -> Self {
        ElementFile {
            side: f.side,
            shape: f.shape().to_vec(),
            terms: f
                .poly
                .terms()
                .iter()
                .map(|(e, c)| TermFile { exps: e.to_vec(), coeff: c.to_exact_string() })
                .collect(),
        }
    }

    pub fn to_element(&self) -> Result<Element<Rational>> {
        let nv: usize = self.shape.iter().sum();
        let mut p = SymLaurent::zero(self.shape.clone());
        for (pos, t) in self.terms.iter().enumerate() {
            if t.exps.len() != nv {
                return Err(Error::Parse(format!(
                    "term {}: expected {nv} exponents, found {}",
                    pos + 1,
                    t.exps.len()
                )));
            }
            let c = Rational::parse(&t.coeff).ok_or_else(|| {
                Error::Parse(format!("term {}: coefficient {:?} is not a rational number", pos + 1, t.coeff))
            })?;
            p.add_orbit(&t.exps, &c);
        }
        Ok(Element::new(self.side, p))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("element file: {e}")))
    }
}

/// Parses `"3"` or `"1,2"` into a dimension vector.
pub fn parse_dims(s: &str) -> Result<DimVec> {
    s.split(',')
        .enumerate()
        .map(|(pos, part)| {
            part.trim().parse::<usize>().map_err(|_| {
                Error::Parse(format!("entry {} ({:?}) is not a nonnegative integer", pos + 1, part.trim()))
            })
        })
        .collect()
}
