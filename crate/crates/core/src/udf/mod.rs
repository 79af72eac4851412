//! Unitary divisors and the functions `δ*_n`, `I*_n` and the integer `σ*_k`.
//!
//! Both ring functions are evaluated by the product formula over the
//! factorization, `Π (1 + |π|^(±αn))`. The divisor sums are kept as
//! oracles for testing.

pub mod zeta;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::Result;
use crate::factor::{factor_element, factor_int, Factorization};
use crate::radical::RadicalValue;
use crate::ring::QInt;

pub use zeta::{zeta_bound_check, ZetaBound, ZetaReport};

/// The unitary divisors of an element, one canonical representative for
/// each subset of its prime powers.
#[derive(Clone, Debug)]
pub struct UnitaryDivisorSet {
    base: Factorization,
}

impl UnitaryDivisorSet {
    pub fn base(&self) -> &Factorization {
        &self.base
    }

    /// `2^r`
    pub fn count(&self) -> u128 {
        assert!(self.base.len() < 128, "too many prime factors to enumerate");
        1u128 << self.base.len()
    }

    /// Divisors in subset-bitmask order; bit `j` selects the `j`-th prime power.
    pub fn iter(&self) -> impl Iterator<Item = QInt> + '_ {
        let powers: Vec<QInt> = self.base.factors().iter().map(|(p, e)| p.pow(*e)).collect();
        let ring = self.base.ring();
        (0..self.count()).map(move |mask| {
            let x = powers
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .fold(QInt::one(ring), |acc, (_, pw)| &acc * pw);
            x.canonical().expect("products of primes are nonzero")
        })
    }
}

pub fn unitary_divisors(z: &QInt) -> Result<UnitaryDivisorSet> {
    Ok(unitary_divisors_of(factor_element(z)?))
}

pub fn unitary_divisors_of(base: Factorization) -> UnitaryDivisorSet {
    UnitaryDivisorSet { base }
}

/// `|π|^k` where `N(π) = norm`.
fn abs_pow(norm: &BigInt, k: i64) -> Result<RadicalValue> {
    RadicalValue::sqrt_pow(&norm.to_biguint().expect("norms are nonnegative"), k)
}


/// `Π (1 + |π|^(αn))` over a factorization.
pub fn delta_star_of(f: &Factorization, n: i64) -> Result<RadicalValue> {
    let mut acc = RadicalValue::one();
    for (pi, alpha) in f.factors() {
        let term = &RadicalValue::one() + &abs_pow(&pi.norm(), *alpha as i64 * n)?;
        acc = &acc * &term;
    }
    Ok(acc)
}

pub fn delta_star(z: &QInt, n: i64) -> Result<RadicalValue> {
    delta_star_of(&factor_element(z)?, n)
}

/// `I*_n(z) = Π (1 + |π|^(−αn))`.
pub fn i_star(z: &QInt, n: i64) -> Result<RadicalValue> {
    delta_star_of(&factor_element(z)?, -n)
}

pub fn i_star_of(f: &Factorization, n: i64) -> Result<RadicalValue> {
    delta_star_of(f, -n)
}

/// `Σ_{x ⋄ z} |x|^n`, summed literally over the divisor set.
pub fn delta_star_divisor_sum(z: &QInt, n: i64) -> Result<RadicalValue> {
    let set = unitary_divisors(z)?;
    let mut acc = RadicalValue::zero();
    for x in set.iter() {
        acc = &acc + &abs_pow(&x.norm(), n)?;
    }
    Ok(acc)
}

/// `δ*_n(z) / |z|^n`, again without the product formula.
pub fn i_star_divisor_sum(z: &QInt, n: i64) -> Result<RadicalValue> {
    Ok(&delta_star_divisor_sum(z, n)? * &abs_pow(&z.norm(), -n)?)
}

/// `σ*_k(n) = Π (1 + p^(ek))`.
pub fn sigma_star_int(n: &BigUint, k: u32) -> Result<BigUint> {
    let f = factor_int(n)?;
    Ok(f.factors()
        .iter()
        .map(|(p, e)| BigUint::one() + p.pow(e * k))
        .product())
}

/// `σ*_k` for every `m ≤ limit` at once, by a multiplicative sieve.
pub fn sigma_star_table(limit: usize, k: u32) -> Vec<u128> {
    let mut sigma = vec![1u128; limit + 1];
    let mut rest: Vec<usize> = (0..=limit).collect();
    for p in 2..=limit {
        // composites were already touched by a smaller prime factor
        if sigma[p] != 1 {
            continue;
        }
        let mut m = p;
        while m <= limit {
            let mut pe = 1u128;
            while rest[m].is_multiple_of(p) {
                rest[m] /= p;
                pe *= p as u128;
            }
            sigma[m] *= 1 + pe.pow(k);
            m += p;
        }
    }
    sigma[0] = 0;
    sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingId;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn ring(d: i64) -> RingId {
        RingId::new(d).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn thirty_is_two_perfect() {
        let z = QInt::from_int(ring(-1), 30);
        assert!(i_star(&z, 2).unwrap().eq_rational(&rat(2, 1)));
        assert!(delta_star(&z, 2).unwrap().eq_rational(&rat(1800, 1)));
        assert_eq!(unitary_divisors(&z).unwrap().count(), 16);
        assert_eq!(delta_star_divisor_sum(&z, 2).unwrap(), delta_star(&z, 2).unwrap());
    }

    #[test]
    fn small_examples() {
        let r1 = ring(-1);
        assert!(i_star(&QInt::from_int(r1, 3), 1).unwrap().eq_rational(&rat(4, 3)));
        assert!(i_star(&QInt::from_int(r1, 6), 1).unwrap().eq_rational(&rat(2, 1)));
        for r in RingId::all() {
            for (_, u) in r.units() {
                assert!(delta_star(&u, 3).unwrap().eq_rational(&rat(1, 1)));
            }
        }
        let s = QInt::new(ring(-2), 0, 1);
        let v = delta_star(&s, 1).unwrap();
        assert_eq!(v.to_string(), "1 + sqrt(2)");
    }

    #[test]
    fn divisor_sets() {
        let r1 = ring(-1);
        let sq = QInt::new(r1, 1, 1).pow(2);
        let divs: Vec<QInt> = unitary_divisors(&sq).unwrap().iter().collect();
        assert_eq!(divs, vec![QInt::one(r1), QInt::from_int(r1, 2)]);
        let unit = QInt::new(r1, 0, 1);
        let divs: Vec<QInt> = unitary_divisors(&unit).unwrap().iter().collect();
        assert_eq!(divs, vec![QInt::one(r1)]);
        let thirty = QInt::from_int(r1, 30);
        let divs: Vec<QInt> = unitary_divisors(&thirty).unwrap().iter().collect();
        assert!(divs.contains(&thirty));
        for x in &divs {
            assert!(x.in_sector().unwrap());
            let q = thirty.exact_div(x).unwrap();
            assert!(crate::factor::coprime(x, &q).unwrap());
        }
    }

    #[test]
    fn sigma_star_examples() {
        let s = |n: u64| sigma_star_int(&BigUint::from(n), 1).unwrap();
        assert_eq!(s(6), BigUint::from(12u32));
        assert_eq!(s(1), BigUint::one());
        assert_eq!(s(60), BigUint::from(120u32));
        assert_eq!(s(87360), BigUint::from(2 * 87360u32));
        assert_eq!(sigma_star_int(&BigUint::from(30u32), 0).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn sigma_table_matches_brute_force() {
        let table = sigma_star_table(3000, 1);
        for n in 1..=3000u128 {
            let brute: u128 = (1..=n)
                .filter(|c| n % c == 0 && num_integer::gcd(*c, n / c) == 1)
                .sum();
            assert_eq!(table[n as usize], brute, "n={n}");
        }
        let t2 = sigma_star_table(500, 2);
        for n in 1..=500u64 {
            assert_eq!(BigUint::from(t2[n as usize]), sigma_star_int(&BigUint::from(n), 2).unwrap());
        }
    }

    fn arb_elem() -> impl Strategy<Value = QInt> {
        (0usize..9, -60i64..60, -60i64..60)
            .prop_filter("nonzero", |(_, a, b)| *a != 0 || *b != 0)
            .prop_map(|(i, a, b)| QInt::new(RingId::all().nth(i).unwrap(), a, b))
    }

    proptest! {
        #[test]
        fn product_formula_matches_sum(z in arb_elem(), n in -4i64..=4) {
            prop_assert_eq!(delta_star(&z, n).unwrap(), delta_star_divisor_sum(&z, n).unwrap());
            prop_assert_eq!(i_star(&z, n).unwrap(), i_star_divisor_sum(&z, n).unwrap());
        }

        #[test]
        fn duality_and_range(z in arb_elem(), n in 1i64..=4) {
            let v = i_star(&z, n).unwrap();
            prop_assert_eq!(&v, &delta_star(&z, -n).unwrap());
            prop_assert!(v.dominates(&rat(1, 1)));
            prop_assert_eq!(v.eq_rational(&rat(1, 1)), z.is_unit());
        }

        #[test]
        fn rationality_criterion(z in arb_elem(), n in 1i64..=4) {
            let f = factor_element(&z).unwrap();
            let predicted = f.factors().iter().all(|(pi, alpha)| {
                let norm = pi.norm();
                let integral_abs = num_integer::Roots::sqrt(&norm).pow(2) == norm;
                integral_abs || (*alpha as i64 * n) % 2 == 0
            });
            prop_assert_eq!(i_star(&z, n).unwrap().is_rational(), predicted);
        }
    }
}
