//! Exact values `Σ c_m √m` over squarefree `m` with rational `c_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::factor_int;

/// A finite sum `Σ c_m √m`. Keys are squarefree, coefficients nonzero, so
/// two values are equal exactly when their maps are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadicalValue {
    terms: BTreeMap<BigUint, BigRational>,
}

/// Split `n = s² · f` with `f` squarefree.
pub fn square_part(n: &BigUint) -> (BigUint, BigUint) {
    let f = factor_int(n).expect("caller passes a positive integer");
    let mut s = BigUint::one();
    let mut free = BigUint::one();
    for (p, e) in f.factors() {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    (s, free)
}

impl RadicalValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(c, BigUint::one())
    }

    fn monomial(c: BigRational, squarefree: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(squarefree, c);
        }
        RadicalValue { terms }
    }

    /// `c · √m` for any positive `m`.
    pub fn sqrt_term(c: BigRational, m: &BigUint) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::Zero);
        }
        let (s, f) = square_part(m);
        Ok(Self::monomial(c * BigRational::from_integer(s.into()), f))
    }

    /// `(√m)^k` for positive `m` and any integer `k`.
    pub fn sqrt_pow(m: &BigUint, k: i64) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::Zero);
        }
        let half = k.div_euclid(2);
        let base = BigRational::from_integer(BigInt::from(m.clone()));
        let exp = i32::try_from(half).map_err(|_| Error::parse(&k.to_string(), "exponent too large"))?;
        let rational = base.pow(exp);
        if k.rem_euclid(2) == 0 {
            Ok(Self::from_rational(rational))
        } else {
            Self::sqrt_term(rational, m)
        }
    }

    pub fn terms(&self) -> &BTreeMap<BigUint, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        Some(self.rational_part())
    }

    /// Coefficient of `√1`.
    pub fn rational_part(&self) -> BigRational {
        self.terms
            .get(&BigUint::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eq_rational(&self, q: &BigRational) -> bool {
        self.as_rational().is_some_and(|v| &v == q)
    }

    /// A sufficient test for `self ≥ q`: every irrational coefficient is
    /// nonnegative and the rational part alone already reaches `q`.
    pub fn dominates(&self, q: &BigRational) -> bool {
        self.terms.values().all(|c| !c.is_negative()) && &self.rational_part() >= q
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| ratio_to_f64(c) * m.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, m: BigUint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Map from decimal key to `"p/q"` coefficient strings.
    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .terms
            .iter()
            .map(|(m, c)| (m.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse(&v.to_string(), "expected an object of terms"))?;
        let mut out = Self::zero();
        for (k, c) in obj {
            let m: BigUint = k
                .parse()
                .map_err(|_| Error::parse(k, "term key is not a positive integer"))?;
            let c_str = c
                .as_str()
                .ok_or_else(|| Error::parse(&c.to_string(), "coefficient must be a string"))?;
            let c: BigRational = c_str
                .parse()
                .map_err(|_| Error::parse(c_str, "coefficient is not a rational"))?;
            out = &out + &Self::sqrt_term(c, &m)?;
        }
        Ok(out)
    }
}

pub(crate) fn ratio_to_f64(c: &BigRational) -> f64 {
    // scale so that both parts fit an f64 even for huge numerators/denominators
    let (n, d) = (c.numer(), c.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 1000).max(0) as usize;
    let nf = (n >> shift).to_f64().unwrap_or(0.0);
    let df = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
    nf / df
}

impl Add for &RadicalValue {
    type Output = RadicalValue;
    fn add(self, rhs: &RadicalValue) -> RadicalValue {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &RadicalValue {
    type Output = RadicalValue;
    fn neg(self) -> RadicalValue {
        RadicalValue {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &RadicalValue {
    type Output = RadicalValue;
    fn sub(self, rhs: &RadicalValue) -> RadicalValue {
        self + &(-rhs)
    }
}

impl Mul for &RadicalValue {
    type Output = RadicalValue;
    fn mul(self, rhs: &RadicalValue) -> RadicalValue {
        let mut out = RadicalValue::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                // √m1·√m2 = g·√(m1 m2 / g²), and m1/g, m2/g are coprime
                let g = m1.gcd(m2);
                let key = (m1 / &g) * (m2 / &g);
                let c = c1 * c2 * BigRational::from_integer(g.into());
                out.add_term(key, c);
            }
        }
        out
    }
}

impl fmt::Display for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({m})")?;
            } else {
                write!(f, "{mag}*sqrt({m})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sqrt(m: u64) -> RadicalValue {
        RadicalValue::sqrt_term(q(1, 1), &BigUint::from(m)).unwrap()
    }

    fn int(n: i64) -> RadicalValue {
        RadicalValue::from_rational(q(n, 1))
    }

    #[test]
    fn products() {
        let a = &int(1) + &sqrt(2);
        let b = &int(1) + &sqrt(3);
        let ab = &a * &b;
        assert_eq!(ab, &(&(&int(1) + &sqrt(2)) + &sqrt(3)) + &sqrt(6));
        assert_eq!(ab.to_string(), "1 + sqrt(2) + sqrt(3) + sqrt(6)");
        let conj = &int(1) - &sqrt(2);
        assert_eq!(&a * &conj, int(-1));
        assert_eq!(&sqrt(6) * &sqrt(10), RadicalValue::sqrt_term(q(2, 1), &BigUint::from(15u32)).unwrap());
    }

    #[test]
    fn rational_tests() {
        let a = &int(1) + &sqrt(2);
        assert!(!a.is_rational());
        for approx in [q(2414, 1000), q(24142136, 10000000), q(1, 1)] {
            assert!(!a.eq_rational(&approx));
        }
        assert!(int(3).eq_rational(&q(3, 1)));
        assert!(RadicalValue::zero().eq_rational(&q(0, 1)));
        assert_eq!(sqrt(12), RadicalValue::sqrt_term(q(2, 1), &BigUint::from(3u32)).unwrap());
        assert_eq!(sqrt(16), int(4));
    }

    #[test]
    fn sqrt_powers() {
        let m = BigUint::from(5u32);
        assert_eq!(RadicalValue::sqrt_pow(&m, 0).unwrap(), int(1));
        assert_eq!(RadicalValue::sqrt_pow(&m, 2).unwrap(), int(5));
        assert_eq!(RadicalValue::sqrt_pow(&m, 3).unwrap(), RadicalValue::sqrt_term(q(5, 1), &m).unwrap());
        assert_eq!(RadicalValue::sqrt_pow(&m, -1).unwrap(), RadicalValue::sqrt_term(q(1, 5), &m).unwrap());
        assert_eq!(RadicalValue::sqrt_pow(&m, -4).unwrap(), RadicalValue::from_rational(q(1, 25)));
        // (√9)^3 = 27
        assert_eq!(RadicalValue::sqrt_pow(&BigUint::from(9u32), 3).unwrap(), int(27));
    }

    #[test]
    fn display_and_json() {
        let v = &RadicalValue::from_rational(q(3, 2)) - &RadicalValue::sqrt_term(q(1, 4), &BigUint::from(2u32)).unwrap();
        assert_eq!(v.to_string(), "3/2 - 1/4*sqrt(2)");
        assert_eq!(v.to_json().to_string(), r#"{"1":"3/2","2":"-1/4"}"#);
        assert_eq!(RadicalValue::from_json(&v.to_json()).unwrap(), v);
        assert_eq!((-&sqrt(7)).to_string(), "-sqrt(7)");
        assert_eq!(RadicalValue::zero().to_string(), "0");
    }

    fn arb_value() -> impl Strategy<Value = RadicalValue> {
        prop::collection::vec((1u64..40, -9i64..10, 1i64..6), 0..4).prop_map(|ts| {
            ts.into_iter().fold(RadicalValue::zero(), |acc, (m, n, d)| {
                &acc + &RadicalValue::sqrt_term(q(n, d), &BigUint::from(m)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_value(), b in arb_value(), c in arb_value()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!(((&a * &b).to_f64() - a.to_f64() * b.to_f64()).abs() < 1e-6 * (1.0 + a.to_f64().abs() * b.to_f64().abs()));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
