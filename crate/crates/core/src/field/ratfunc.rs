use super::Field;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial in the formal symbols; trailing zeros trimmed.
pub type MonoKey = SmallVec<[u16; 4]>;

fn trim(mut k: MonoKey) -> MonoKey {
    while k.last() == Some(&0) {
        k.pop();
    }
    k
}

fn mono_mul(a: &MonoKey, b: &MonoKey) -> MonoKey {
    let n = a.len().max(b.len());
    let mut out: MonoKey = SmallVec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0));
    }
    out
}

fn mono_div(a: &MonoKey, b: &MonoKey) -> Option<MonoKey> {
    if b.len() > a.len() {
        return None;
    }
    let mut out: MonoKey = SmallVec::with_capacity(a.len());
    for i in 0..a.len() {
        let bi = b.get(i).copied().unwrap_or(0);
        if a[i] < bi {
            return None;
        }
        out.push(a[i] - bi);
    }
    Some(trim(out))
}

/// Lexicographic comparison treating missing entries as zero.
fn lex_cmp(a: &MonoKey, b: &MonoKey) -> std::cmp::Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        if x != y {
            return x.cmp(&y);
        }
    }
    std::cmp::Ordering::Equal
}

/// Polynomial with integer coefficients in the symbols `q = x_0, t_e = x_{e+1}`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<MonoKey, BigInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(SmallVec::new(), c);
        }
        p
    }

    /// The symbol `x_k`.
    pub fn var(k: usize) -> Self {
        let mut key: MonoKey = SmallVec::from_elem(0, k + 1);
        key[k] = 1;
        let mut p = MPoly::zero();
        p.terms.insert(key, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: MonoKey, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let k = trim(k);
        let e = self.terms.entry(k.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                r.add_term(mono_mul(k1, k2), c1 * c2);
            }
        }
        r
    }

    fn leading(&self) -> Option<(&MonoKey, &BigInt)> {
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    /// Exact quotient `self / d` if `d` divides `self` over the integers.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        let (dk, dc) = d.leading().map(|(k, c)| (k.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        let mut steps = 0usize;
        while let Some((rk, rc)) = rem.leading().map(|(k, c)| (k.clone(), c.clone())) {
            let mk = mono_div(&rk, &dk)?;
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let mut t = MPoly::zero();
            t.terms.insert(mk, qc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
            steps += 1;
            if steps > 100_000 {
                return None;
            }
        }
        Some(quo)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms.
    fn min_mono(&self) -> MonoKey {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return SmallVec::new() };
        let mut m = first.clone();
        for k in it {
            let n = m.len();
            for i in 0..n {
                m[i] = m[i].min(k.get(i).copied().unwrap_or(0));
            }
        }
        trim(m)
    }

    fn scale_down(&self, c: &BigInt, mono: &MonoKey) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (mono_div(k, mono).expect("divisible"), v / c))
                .collect(),
        }
    }

    pub fn evaluate(&self, vals: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &e) in k.iter().enumerate() {
                if e > 0 {
                    let v = vals.get(i).cloned().unwrap_or_else(BigRational::zero);
                    t *= num_traits::pow(v, e as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if i == 0 { "q".to_string() } else { format!("t{}", i - 1) };
                if e == 1 {
                    write!(f, "*{}", name)?;
                } else {
                    write!(f, "*{}^{}", name, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Quotient of two [`MPoly`], kept in a lightly normalized form.
#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn q() -> Self {
        RatFunc { num: MPoly::var(0), den: MPoly::constant(BigInt::one()) }
    }

    /// The edge parameter `t_e`.
    pub fn t(edge: usize) -> Self {
        RatFunc { num: MPoly::var(edge + 1), den: MPoly::constant(BigInt::one()) }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    fn normalized(num: MPoly, den: MPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc { num, den: MPoly::constant(BigInt::one()) };
        }
        if let Some(qt) = num.exact_div(&den) {
            return RatFunc { num: qt, den: MPoly::constant(BigInt::one()) };
        }
        // strip the common monomial and integer content
        let mn = num.min_mono();
        let md = den.min_mono();
        let common: MonoKey = trim(
            (0..mn.len().min(md.len()))
                .map(|i| mn[i].min(md[i]))
                .collect(),
        );
        let g = num.content().gcd(&den.content());
        let mut g = if g.is_zero() { BigInt::one() } else { g };
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            g = -g;
        }
        let (num, den) = (num.scale_down(&g, &common), den.scale_down(&g, &common));
        if den.len() > 1 && num.len() > 1 {
            if let Some(qd) = den.exact_div(&num) {
                return RatFunc { num: MPoly::constant(BigInt::one()), den: qd };
            }
        }
        RatFunc { num, den }
    }

    /// Value at `q = vals[0], t_e = vals[e+1]`; `None` on a vanishing denominator.
    pub fn evaluate(&self, vals: &[BigRational]) -> Option<BigRational> {
        let d = self.den.evaluate(vals);
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(vals) / d)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc { num: MPoly::zero(), den: MPoly::constant(BigInt::one()) }
    }
    fn one() -> Self {
        Self::from_i64(1)
    }
    fn from_i64(v: i64) -> Self {
        RatFunc { num: MPoly::constant(BigInt::from(v)), den: MPoly::constant(BigInt::one()) }
    }
    fn from_rational(v: &BigRational) -> Option<Self> {
        Some(RatFunc::normalized(
            MPoly::constant(v.numer().clone()),
            MPoly::constant(v.denom().clone()),
        ))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::normalized(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::normalized(self.den.clone(), self.num.clone()))
        }
    }
    fn to_exact_string(&self) -> String {
        if self.den == MPoly::constant(BigInt::one()) {
            format!("{:?}", self.num)
        } else {
            format!("({:?})/({:?})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_division_recovers_factor() {
        let q = MPoly::var(0);
        let t = MPoly::var(1);
        let one = MPoly::constant(BigInt::one());
        let a = q.sub(&one);
        let b = q.add(&t).add(&one);
        let p = a.mul(&b);
        assert_eq!(p.exact_div(&a).unwrap(), b);
        assert!(p.exact_div(&q.add(&one).add(&one)).is_none());
    }

    #[test]
    fn cancellation_to_polynomial() {
        let q = RatFunc::q();
        let one = RatFunc::one();
        // (q^2 - 1)/(q - 1) = q + 1
        let x = q.mul(&q).sub(&one).div(&q.sub(&one)).unwrap();
        assert_eq!(x, q.add(&one));
        assert_eq!(x.denom(), &MPoly::constant(BigInt::one()));
    }

    #[test]
    fn evaluation_matches_arithmetic() {
        let q = RatFunc::q();
        let t = RatFunc::t(0);
        let one = RatFunc::one();
        let x = one.div(&t).unwrap().sub(&one).mul(&one.sub(&t.div(&q).unwrap()));
        let vals = [r(3, 2), r(-5, 7)];
        let want = (r(-7, 5) - r(1, 1)) * (r(1, 1) - r(-5, 7) / r(3, 2));
        assert_eq!(x.evaluate(&vals).unwrap(), want);
    }
}
