//! Exact coefficient fields.
//!
//! Every algorithm in the crate is generic over [`Field`]. Three carriers are
//! provided: [`Rational`] (the seeded specialization of the parameters),
//! [`ModP`] (the same specialization reduced modulo a 61-bit prime, used for
//! large rank computations) and [`RatFunc`] (formal rational functions in the
//! parameters, the slow reference mode).

mod modp;
mod ratfunc;
mod rational;

pub use modp::ModP;
pub use ratfunc::{MPoly, RatFunc};
pub use rational::Rational;

use num_rational::BigRational;
use std::fmt::Debug;

pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Image of an exact rational; `None` if the denominator vanishes in the field.
    fn from_rational(v: &BigRational) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    /// Exact string form: `"p/q"` for rationals, a residue for `ModP`.
    fn to_exact_string(&self) -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn sub_assign(&mut self, other: &Self) {
        *self = self.sub(other);
    }

    fn mul_assign(&mut self, other: &Self) {
        *self = self.mul(other);
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Integer power; negative exponents need an invertible base.
    fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc.mul_assign(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }
}

/// Adds `coef` into the entry of `map` at `key`, dropping the entry if it cancels.
pub(crate) fn accumulate<K, F, S>(map: &mut std::collections::HashMap<K, F, S>, key: K, coef: &F)
where
    K: std::hash::Hash + Eq,
    F: Field,
    S: std::hash::BuildHasher,
{
    use std::collections::hash_map::Entry;
    if coef.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign(coef);
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(coef.clone());
        }
    }
}

/// Same as [`accumulate`] for ordered maps.
pub(crate) fn accumulate_btree<K: Ord, F: Field>(
    map: &mut std::collections::BTreeMap<K, F>,
    key: K,
    coef: &F,
) {
    use std::collections::btree_map::Entry;
    if coef.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut e) => {
            e.get_mut().add_assign(coef);
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(coef.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
        let n: i64 = rng.gen_range(-10_000..=10_000);
        let d: i64 = rng.gen_range(1..=10_000);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_inverses_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let a = Rational::from_rational(&random_rational(&mut rng)).unwrap();
            if a.is_zero() {
                continue;
            }
            assert!(a.mul(&a.inv().unwrap()).is_one());
            checked += 1;
        }
    }

    #[test]
    fn modp_inverses_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let a = ModP::from_rational(&random_rational(&mut rng)).unwrap();
            if a.is_zero() {
                continue;
            }
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let two = Rational::from_i64(2);
        assert_eq!(two.pow(-3).unwrap().to_exact_string(), "1/8");
        assert_eq!(two.pow(0).unwrap(), Rational::one());
        assert!(Rational::zero().pow(-1).is_none());
    }
}
