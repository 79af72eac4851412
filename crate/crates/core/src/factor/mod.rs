//! Unique factorization of ring elements into canonical sector primes.
//!
//! An element is factored through the integer factorization of its norm:
//! an inert `q` contributes `q^(υ_q(N)/2)`, a ramified `p` contributes
//! `π^υ_p(N)`, and a split `p` distributes `υ_p(N)` between `π` and `π̄` by
//! trial division in the ring.

pub mod int;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{Error, Result};
use crate::primes::{is_prime, prime_above, PrimeClass, PrimeKind, PrimeWitness};
use crate::ring::{QInt, RingId, UnitIndex};

pub use int::{factor_int, factor_u64, IntFactorization};

/// Norms above `ceiling` are refused unless `allow_large` is set.
#[derive(Clone, Debug)]
pub struct FactorLimits {
    pub ceiling: BigUint,
    pub allow_large: bool,
}

impl Default for FactorLimits {
    fn default() -> Self {
        FactorLimits {
            ceiling: BigUint::one() << 64u32,
            allow_large: false,
        }
    }
}

impl FactorLimits {
    pub fn unlimited() -> Self {
        FactorLimits {
            allow_large: true,
            ..Default::default()
        }
    }
}

/// `z = unit · Π πᵉ`, primes canonical and ordered by (norm, coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    ring: RingId,
    unit: UnitIndex,
    factors: Vec<(QInt, u32)>,
}

impl Factorization {
    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn unit(&self) -> UnitIndex {
        self.unit
    }

    pub fn factors(&self) -> &[(QInt, u32)] {
        &self.factors
    }

    /// Number of distinct (non-associated) primes.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The set of sector primes dividing the element.
    pub fn primes(&self) -> impl Iterator<Item = &QInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Exponent of a canonical prime; 0 if absent.
    pub fn exponent_of(&self, canonical_pi: &QInt) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == canonical_pi)
            .map_or(0, |(_, e)| *e)
    }

    pub fn reassemble(&self) -> QInt {
        self.factors
            .iter()
            .fold(self.ring.unit(self.unit), |acc, (p, e)| &acc * &p.pow(*e))
    }
}

pub fn factor_element(z: &QInt) -> Result<Factorization> {
    factor_element_with(z, &FactorLimits::default())
}

pub fn factor_element_with(z: &QInt, limits: &FactorLimits) -> Result<Factorization> {
    if z.is_zero() {
        return Err(Error::Zero);
    }
    let ring = z.ring();
    let norm = z.norm().to_biguint().expect("norms are nonnegative");
    if !limits.allow_large && norm > limits.ceiling {
        return Err(Error::NormTooLarge {
            norm: norm.to_string(),
            ceiling: limits.ceiling.to_string(),
        });
    }
    let norm_factors = factor_int(&norm)?;
    let mut rest = z.clone();
    let mut factors = Vec::new();
    for (p, v) in norm_factors.factors() {
        let class = prime_above(p, ring)?;
        match &class.witness {
            PrimeWitness::Inert => {
                let q = QInt::from_int(ring, BigInt::from(p.clone()));
                let e = v / 2;
                rest = rest.exact_div(&q.pow(e))?;
                factors.push((q, e));
            }
            PrimeWitness::Ramified { pi } => {
                rest = rest.exact_div(&pi.pow(*v))?;
                factors.push((pi.clone(), *v));
            }
            PrimeWitness::Split { pi, pi_bar } => {
                let mut k = 0;
                while k < *v {
                    match rest.exact_div(pi) {
                        Ok(q) => {
                            rest = q;
                            k += 1;
                        }
                        Err(Error::NotDivisible) => break,
                        Err(e) => return Err(e),
                    }
                }
                let k_bar = v - k;
                if k_bar > 0 {
                    rest = rest.exact_div(&pi_bar.pow(k_bar)).map_err(|_| {
                        Error::Internal(format!("split exponents of {p} do not add up in {z}"))
                    })?;
                }
                if k > 0 {
                    factors.push((pi.clone(), k));
                }
                if k_bar > 0 {
                    factors.push((pi_bar.clone(), k_bar));
                }
            }
        }
    }
    let unit = rest
        .unit_index()
        .ok_or_else(|| Error::Internal(format!("cofactor {rest} of {z} is not a unit")))?;
    factors.sort_by(|x, y| x.0.cmp_norm_lex(&y.0));
    Ok(Factorization {
        ring,
        unit,
        factors,
    })
}

/// Check that `pi` is a prime of its ring; returns the class of the integer prime below it.
pub fn audit_prime(pi: &QInt) -> Result<PrimeClass> {
    let not_prime = || Error::NotRingPrime(pi.to_string());
    if pi.is_zero() {
        return Err(not_prime());
    }
    let norm = pi.norm().to_biguint().expect("nonnegative");
    if is_prime(&norm) {
        let class = prime_above(&norm, pi.ring())?;
        if class.kind() == PrimeKind::Inert {
            return Err(not_prime());
        }
        return Ok(class);
    }
    let q = num_integer::Roots::sqrt(&norm);
    if &q * &q == norm && is_prime(&q) {
        let class = prime_above(&q, pi.ring())?;
        if class.kind() == PrimeKind::Inert
            && pi.is_associate(&QInt::from_int(pi.ring(), BigInt::from(q)))
        {
            return Ok(class);
        }
    }
    Err(not_prime())
}

/// `ρ_π(z)`: the largest `k` with `π^k | z`.
pub fn rho(pi: &QInt, z: &QInt) -> Result<u32> {
    if pi.ring() != z.ring() {
        return Err(Error::MixedRings(pi.ring().d(), z.ring().d()));
    }
    audit_prime(pi)?;
    let f = factor_element(z)?;
    Ok(f.exponent_of(&pi.canonical()?))
}

/// No nonunit common divisor; decided by comparing canonical ring primes.
pub fn coprime(x: &QInt, y: &QInt) -> Result<bool> {
    if x.ring() != y.ring() {
        return Err(Error::MixedRings(x.ring().d(), y.ring().d()));
    }
    let fx = factor_element(x)?;
    let fy = factor_element(y)?;
    let disjoint = fx.primes().all(|p| fy.exponent_of(p) == 0);
    Ok(disjoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(d: i64) -> RingId {
        RingId::new(d).unwrap()
    }

    fn q(d: i64, a: i64, b: i64) -> QInt {
        QInt::new(ring(d), a, b)
    }

    #[test]
    fn thirty_in_gaussian_integers() {
        let z = QInt::from_int(ring(-1), 30);
        let f = factor_element(&z).unwrap();
        assert_eq!(
            f.factors(),
            &[
                (q(-1, 1, 1), 2),
                (q(-1, 1, 2), 1),
                (q(-1, 2, 1), 1),
                (q(-1, 3, 0), 1),
            ]
        );
        assert_eq!(f.reassemble(), z);
        // (1+i)^2 · 3 · (2+i)(1+2i) = -30
        assert_eq!(ring(-1).unit(f.unit()), q(-1, -1, 0));
    }

    #[test]
    fn units_and_d7_two() {
        for r in RingId::all() {
            for (idx, u) in r.units() {
                let f = factor_element(&u).unwrap();
                assert!(f.is_empty());
                assert_eq!(f.unit(), idx);
            }
        }
        let f = factor_element(&QInt::from_int(ring(-7), 2)).unwrap();
        assert_eq!(f.factors(), &[(q(-7, -1, 1), 1), (q(-7, 0, 1), 1)]);
        assert!(matches!(factor_element(&QInt::zero(ring(-7))), Err(Error::Zero)));
    }

    #[test]
    fn rho_examples() {
        let thirty = QInt::from_int(ring(-1), 30);
        assert_eq!(rho(&q(-1, 1, 1), &thirty).unwrap(), 2);
        assert_eq!(rho(&q(-1, 2, 1), &thirty).unwrap(), 1);
        assert_eq!(rho(&q(-1, 1, 2), &thirty).unwrap(), 1);
        // non-canonical associate of 1+2i
        assert_eq!(rho(&q(-1, 2, -1), &thirty).unwrap(), 1);
        assert_eq!(rho(&q(-1, 2, 1), &QInt::one(ring(-1))).unwrap(), 0);
        assert!(matches!(rho(&q(-1, 5, 0), &thirty), Err(Error::NotRingPrime(_))));
        assert!(matches!(rho(&q(-1, 2, 0), &thirty), Err(Error::NotRingPrime(_))));
    }

    #[test]
    fn coprime_examples() {
        assert!(coprime(&q(-1, 2, 1), &q(-1, 1, 2)).unwrap());
        assert!(coprime(&q(-43, 17, 3), &QInt::one(ring(-43))).unwrap());
        assert!(!coprime(&q(-1, 1, 1), &QInt::from_int(ring(-1), 30)).unwrap());
        assert!(coprime(&QInt::zero(ring(-1)), &q(-1, 1, 0)).is_err());
    }

    #[test]
    fn ceiling_guard() {
        let big = QInt::from_int(ring(-2), BigInt::one() << 40u32);
        assert!(matches!(factor_element(&big), Err(Error::NormTooLarge { .. })));
        let f = factor_element_with(&big, &FactorLimits::unlimited()).unwrap();
        assert_eq!(f.reassemble(), big);
    }

    #[test]
    fn audit() {
        assert!(audit_prime(&q(-1, 3, 0)).is_ok());
        assert!(audit_prime(&q(-1, 2, 1)).is_ok());
        assert!(audit_prime(&q(-1, 0, 3)).is_ok());
        assert!(audit_prime(&q(-1, 2, 0)).is_err());
        assert!(audit_prime(&q(-1, 1, 0)).is_err());
        assert!(audit_prime(&q(-3, 2, 0)).is_ok());
    }

    fn arb_elem() -> impl Strategy<Value = QInt> {
        (0usize..9, -300i64..300, -300i64..300)
            .prop_filter("nonzero", |(_, a, b)| *a != 0 || *b != 0)
            .prop_map(|(i, a, b)| QInt::new(RingId::all().nth(i).unwrap(), a, b))
    }

    proptest! {
        #[test]
        fn round_trip_and_norms(z in arb_elem()) {
            let f = factor_element(&z).unwrap();
            prop_assert_eq!(f.reassemble(), z.clone());
            let mut prod = BigInt::one();
            for (p, e) in f.factors() {
                prop_assert!(p.in_sector().unwrap());
                audit_prime(p).unwrap();
                prod *= p.norm().pow(*e);
            }
            prop_assert_eq!(prod, z.norm());
            for w in f.factors().windows(2) {
                prop_assert!(w[0].0.cmp_norm_lex(&w[1].0).is_lt());
            }
        }

        #[test]
        fn split_exponents_conserved(z in arb_elem()) {
            let f = factor_element(&z).unwrap();
            let n = z.norm().to_biguint().unwrap();
            for (p, v) in factor_int(&n).unwrap().factors() {
                let class = prime_above(p, z.ring()).unwrap();
                if let PrimeWitness::Split { pi, pi_bar } = &class.witness {
                    prop_assert_eq!(f.exponent_of(pi) + f.exponent_of(pi_bar), *v);
                }
            }
        }

        #[test]
        fn conjugate_factorization(z in arb_elem()) {
            let f = factor_element(&z).unwrap();
            let g = factor_element(&z.conj()).unwrap();
            prop_assert_eq!(f.len(), g.len());
            for (p, e) in f.factors() {
                prop_assert_eq!(g.exponent_of(&p.conj().canonical().unwrap()), *e);
            }
        }

        #[test]
        fn coprime_products_union(x in arb_elem(), b in -300i64..300, a in -300i64..300) {
            let y = QInt::new(x.ring(), a, b);
            prop_assume!(!y.is_zero());
            prop_assume!(coprime(&x, &y).unwrap());
            let fx = factor_element(&x).unwrap();
            let fy = factor_element(&y).unwrap();
            let fxy = factor_element(&(&x * &y)).unwrap();
            prop_assert_eq!(fxy.len(), fx.len() + fy.len());
            for (p, e) in fx.factors().iter().chain(fy.factors()) {
                prop_assert_eq!(fxy.exponent_of(p), *e);
            }
            prop_assert_eq!(fxy.unit(), fx.unit().mul(fy.unit(), x.ring()));
        }
    }
}
