use super::Field;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt;

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1u64 << 61) - 1;

/// Residue modulo [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModP(pub u64);

#[inline]
fn reduce128(x: u128) -> u64 {
    // x mod 2^61-1 via folding.
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    let mut r = lo + (hi & MODULUS) + ((x >> 122) as u64);
    while r >= MODULUS {
        r -= MODULUS;
    }
    r
}

impl ModP {
    #[inline]
    pub fn new(v: u64) -> Self {
        ModP(v % MODULUS)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(MODULUS);
        let r = v.mod_floor(&m);
        ModP(r.to_u64().expect("residue fits"))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    fn pow_u(self, mut e: u64) -> Self {
        let mut acc = 1u64;
        let mut b = self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = reduce128(acc as u128 * b as u128);
            }
            b = reduce128(b as u128 * b as u128);
            e >>= 1;
        }
        ModP(acc)
    }

    #[inline]
    pub fn mul_add(self, a: ModP, b: ModP) -> ModP {
        // self + a*b
        let r = reduce128(a.0 as u128 * b.0 as u128) + self.0;
        ModP(if r >= MODULUS { r - MODULUS } else { r })
    }
}

impl fmt::Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for ModP {
    #[inline]
    fn zero() -> Self {
        ModP(0)
    }
    #[inline]
    fn one() -> Self {
        ModP(1)
    }
    fn from_i64(v: i64) -> Self {
        let m = MODULUS as i128;
        ModP((((v as i128) % m + m) % m) as u64)
    }
    fn from_rational(v: &BigRational) -> Option<Self> {
        let n = ModP::from_bigint(v.numer());
        let d = ModP::from_bigint(v.denom());
        d.inv().map(|i| n.mul(&i))
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        let r = self.0 + other.0;
        ModP(if r >= MODULUS { r - MODULUS } else { r })
    }
    #[inline]
    fn sub(&self, other: &Self) -> Self {
        if self.0 >= other.0 {
            ModP(self.0 - other.0)
        } else {
            ModP(self.0 + MODULUS - other.0)
        }
    }
    #[inline]
    fn mul(&self, other: &Self) -> Self {
        ModP(reduce128(self.0 as u128 * other.0 as u128))
    }
    #[inline]
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            ModP(MODULUS - self.0)
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow_u(MODULUS - 2))
        }
    }
    #[inline]
    fn add_assign(&mut self, other: &Self) {
        *self = Field::add(self, other);
    }
    #[inline]
    fn sub_assign(&mut self, other: &Self) {
        *self = Field::sub(self, other);
    }
    #[inline]
    fn mul_assign(&mut self, other: &Self) {
        *self = Field::mul(self, other);
    }
    fn to_exact_string(&self) -> String {
        self.0.to_string()
    }
}
