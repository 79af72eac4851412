//! Behaviour of integer primes in each ring, and canonical primes above them.
//!
//! Witnesses for split and ramified primes come from Cornacchia's descent
//! on `x² + |d|y² = p` (integral basis) or `x² + |d|y² = 4p` (half-integral
//! basis). Four of the nine rings are not norm-Euclidean, so a ring gcd is
//! not available; the descent needs only integer arithmetic.

pub mod modular;
pub mod primality;

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{BasisKind, QInt, RingId, TwoBehavior};

pub use modular::{legendre, sqrt_mod};
pub use primality::{is_prime, is_prime_u64};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeKind {
    Inert,
    Ramified,
    Split,
}

impl PrimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimeKind::Inert => "inert",
            PrimeKind::Ramified => "ramified",
            PrimeKind::Split => "split",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeWitness {
    Inert,
    Ramified { pi: QInt },
    /// `pi` has the smaller argument of the two sector primes above `p`.
    Split { pi: QInt, pi_bar: QInt },
}

/// An integer prime together with the canonical ring primes above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: BigUint,
    pub ring: RingId,
    pub witness: PrimeWitness,
}

impl PrimeClass {
    pub fn kind(&self) -> PrimeKind {
        match self.witness {
            PrimeWitness::Inert => PrimeKind::Inert,
            PrimeWitness::Ramified { .. } => PrimeKind::Ramified,
            PrimeWitness::Split { .. } => PrimeKind::Split,
        }
    }

    /// The canonical ring primes above `p` (one, or two when split).
    pub fn ring_primes(&self) -> Vec<QInt> {
        match &self.witness {
            PrimeWitness::Inert => vec![QInt::from_int(self.ring, BigInt::from(self.p.clone()))],
            PrimeWitness::Ramified { pi } => vec![pi.clone()],
            PrimeWitness::Split { pi, pi_bar } => vec![pi.clone(), pi_bar.clone()],
        }
    }

    /// First ring prime above `p`: `p` itself when inert.
    pub fn pi(&self) -> QInt {
        self.ring_primes().swap_remove(0)
    }
}

/// Kind of an integer prime, without witnesses.
pub fn classify(p: &BigUint, ring: RingId) -> Result<PrimeKind> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(classify_unchecked(p, ring))
}

fn classify_unchecked(p: &BigUint, ring: RingId) -> PrimeKind {
    if let Some(p64) = p.to_u64() {
        return classify_u64(p64, ring);
    }
    // p > 2^64 cannot divide any d in K
    match legendre(&BigInt::from(ring.d()), p) {
        1 => PrimeKind::Split,
        _ => PrimeKind::Inert,
    }
}

/// Kind of a prime `p` known to be prime.
pub fn classify_u64(p: u64, ring: RingId) -> PrimeKind {
    if p == 2 {
        return match ring.two_behavior() {
            TwoBehavior::Ramified => PrimeKind::Ramified,
            TwoBehavior::Split => PrimeKind::Split,
            TwoBehavior::Inert => PrimeKind::Inert,
        };
    }
    let d = ring.d();
    if d % p as i64 == 0 {
        return PrimeKind::Ramified;
    }
    match modular::legendre_u64(d, p) {
        1 => PrimeKind::Split,
        _ => PrimeKind::Inert,
    }
}

static MEMO: LazyLock<RwLock<HashMap<(i64, BigUint), PrimeClass>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Full classification with canonical witnesses; memoized per `(p, d)`.
pub fn prime_above(p: &BigUint, ring: RingId) -> Result<PrimeClass> {
    let key = (ring.d(), p.clone());
    if let Some(hit) = MEMO.read().expect("prime memo poisoned").get(&key) {
        return Ok(hit.clone());
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let class = compute_prime_above(p, ring);
    MEMO.write()
        .expect("prime memo poisoned")
        .entry(key)
        .or_insert_with(|| class.clone());
    Ok(class)
}

pub fn prime_above_u64(p: u64, ring: RingId) -> Result<PrimeClass> {
    prime_above(&BigUint::from(p), ring)
}

fn compute_prime_above(p: &BigUint, ring: RingId) -> PrimeClass {
    let kind = classify_unchecked(p, ring);
    let witness = match kind {
        PrimeKind::Inert => PrimeWitness::Inert,
        PrimeKind::Ramified => {
            let pi = descend(p, ring).canonical().expect("nonzero");
            PrimeWitness::Ramified { pi }
        }
        PrimeKind::Split => {
            let raw = descend(p, ring);
            let first = raw.canonical().expect("nonzero");
            let second = raw.conj().canonical().expect("nonzero");
            let (pi, pi_bar) = if first.cmp_arg(&second).is_lt() {
                (first, second)
            } else {
                (second, first)
            };
            PrimeWitness::Split { pi, pi_bar }
        }
    };
    PrimeClass {
        p: p.clone(),
        ring,
        witness,
    }
}

/// An element of norm `p`, for `p` split or ramified.
fn descend(p: &BigUint, ring: RingId) -> QInt {
    if p == &BigUint::from(2u32) {
        // 1+i, √-2, and ε = (1+√-7)/2 = ω
        return match ring.d() {
            -1 => QInt::new(ring, 1, 1),
            -2 | -7 => QInt::omega(ring),
            d => unreachable!("2 is inert for d={d}"),
        };
    }
    let (x, y) = cornacchia(ring, p);
    let z = match ring.basis_kind() {
        BasisKind::Integral => QInt::new(ring, x, y),
        BasisKind::HalfIntegral => QInt::new(ring, (&x - &y) / 2, y),
    };
    assert_eq!(
        z.norm(),
        BigInt::from(p.clone()),
        "Cornacchia descent produced a wrong norm for p={p}, d={}",
        ring.d()
    );
    z
}

/// Solve `x² + |d|y² = p` (integral basis) or `x² + |d|y² = 4p` with
/// `x ≡ y (mod 2)` (half-integral basis) for an odd prime `p`.
fn cornacchia(ring: RingId, p: &BigUint) -> (BigInt, BigInt) {
    let m = BigInt::from(-ring.d());
    let p_int = BigInt::from(p.clone());
    let root = sqrt_mod(&BigInt::from(ring.d()), p)
        .unwrap_or_else(|| panic!("d={} has no square root mod {p}", ring.d()));
    let mut r0 = BigInt::from(root);
    let (modulus, target) = match ring.basis_kind() {
        BasisKind::Integral => {
            if &r0 * 2 < p_int {
                r0 = &p_int - &r0;
            }
            (p_int.clone(), p_int.clone())
        }
        BasisKind::HalfIntegral => {
            if r0.is_even() {
                r0 = &p_int - &r0;
            }
            (&p_int * 2, &p_int * 4)
        }
    };
    let (mut a, mut b) = (modulus, r0);
    while &b * &b >= target {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = &target - &b * &b;
    let (y2, rem) = rest.div_rem(&m);
    assert!(rem.is_zero(), "Cornacchia descent failed for p={p}, d={}", ring.d());
    let y = y2.sqrt();
    assert_eq!(&y * &y, y2, "Cornacchia descent failed for p={p}, d={}", ring.d());
    (b, y)
}

/// The unique sector prime of minimal even norm, for `d ≠ -7`.
pub fn xi(ring: RingId) -> Result<QInt> {
    match ring.d() {
        -7 => Err(Error::XiUndefined),
        -1 => Ok(QInt::new(ring, 1, 1)),
        -2 => Ok(QInt::omega(ring)),
        _ => Ok(QInt::from_int(ring, 2)),
    }
}

/// Residue `r` with `π | a + bω ⇔ a + b·r ≡ 0 (mod p)` for a degree-one prime
/// `π = x + yω` of norm `p`.
pub(crate) fn residue_of(pi: &QInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let x = pi.a().mod_floor(&pb).to_u64().expect("reduced");
    let y = pi.b().mod_floor(&pb).to_u64().expect("reduced");
    let y_inv = modular::inv_mod_u64(y, p).expect("y is a unit mod p for a prime of norm p");
    (p - modular::mul_mod_u64(x, y_inv, p)) % p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(d: i64) -> RingId {
        RingId::new(d).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&big(5), ring(-1)).unwrap(), PrimeKind::Split);
        assert_eq!(classify(&big(3), ring(-1)).unwrap(), PrimeKind::Inert);
        assert_eq!(classify(&big(2), ring(-7)).unwrap(), PrimeKind::Split);
        assert_eq!(classify(&big(3), ring(-3)).unwrap(), PrimeKind::Ramified);
        assert_eq!(classify(&big(2), ring(-1)).unwrap(), PrimeKind::Ramified);
        assert_eq!(classify(&big(2), ring(-163)).unwrap(), PrimeKind::Inert);
        assert!(matches!(classify(&big(9), ring(-1)), Err(Error::NotPrime(_))));
        assert!(classify(&big(1), ring(-1)).is_err());
    }

    #[test]
    fn prime_above_examples() {
        let c = prime_above(&big(5), ring(-1)).unwrap();
        assert_eq!(
            c.witness,
            PrimeWitness::Split {
                pi: QInt::new(ring(-1), 2, 1),
                pi_bar: QInt::new(ring(-1), 1, 2)
            }
        );
        let c = prime_above(&big(7), ring(-3)).unwrap();
        let PrimeWitness::Split { pi, pi_bar } = c.witness else {
            panic!("7 splits in Z[ω]")
        };
        assert_eq!(pi.norm(), BigInt::from(7));
        assert_eq!(pi_bar.norm(), BigInt::from(7));
        // (5+√-3)/2 = 2 + ω is in the sector and has the smaller argument
        assert_eq!(pi, QInt::new(ring(-3), 2, 1));

        let c = prime_above(&big(2), ring(-2)).unwrap();
        assert_eq!(c.witness, PrimeWitness::Ramified { pi: QInt::omega(ring(-2)) });

        let c = prime_above(&big(2), ring(-7)).unwrap();
        assert_eq!(
            c.witness,
            PrimeWitness::Split {
                pi: QInt::omega(ring(-7)),
                pi_bar: QInt::new(ring(-7), -1, 1)
            }
        );
        assert_eq!(prime_above(&big(11), ring(-11)).unwrap().pi().pretty(), "√-11");
    }

    #[test]
    fn xi_table() {
        assert_eq!(xi(ring(-1)).unwrap(), QInt::new(ring(-1), 1, 1));
        assert_eq!(xi(ring(-2)).unwrap().pretty(), "√-2");
        assert_eq!(xi(ring(-11)).unwrap(), QInt::from_int(ring(-11), 2));
        assert!(matches!(xi(ring(-7)), Err(Error::XiUndefined)));
        for r in RingId::all().filter(|r| r.d() != -7) {
            let x = xi(r).unwrap();
            assert!(x.in_sector().unwrap());
            assert!(x.norm().is_even());
        }
    }

    #[test]
    fn witnesses_consistent_up_to_10k() {
        for r in RingId::all() {
            let mut split = 0usize;
            let mut odd = 0usize;
            for p in 2..=10_000u64 {
                if !is_prime_u64(p) {
                    continue;
                }
                let c = prime_above_u64(p, r).unwrap();
                let p_int = BigInt::from(p);
                let p_elem = QInt::from_int(r, p);
                match &c.witness {
                    PrimeWitness::Inert => {
                        assert_eq!(p_elem.norm(), &p_int * &p_int);
                    }
                    PrimeWitness::Ramified { pi } => {
                        assert!(pi.in_sector().unwrap());
                        assert_eq!(pi.norm(), p_int);
                        assert!(pi.pow(2).is_associate(&p_elem));
                        assert!(pi.is_associate(&pi.conj()));
                    }
                    PrimeWitness::Split { pi, pi_bar } => {
                        assert!(pi.in_sector().unwrap() && pi_bar.in_sector().unwrap());
                        assert_eq!(pi.norm(), p_int);
                        assert_eq!(pi_bar.norm(), p_int);
                        assert!(!pi.is_associate(&pi.conj()));
                        assert!((pi * &pi.conj()).is_associate(&p_elem));
                        assert!(pi_bar.is_associate(&pi.conj()));
                        assert!(pi.cmp_arg(pi_bar).is_lt());
                    }
                }
                if p > 2 {
                    odd += 1;
                    if c.kind() == PrimeKind::Split {
                        split += 1;
                    }
                }
            }
            let density = split as f64 / odd as f64;
            assert!((density - 0.5).abs() < 0.05, "d={} density {density}", r.d());
        }
    }

    #[test]
    fn large_prime_witness() {
        // a prime above 2^64 exercises the bignum descent
        let p = BigUint::from(18446744073709551629u128);
        for r in RingId::all() {
            let c = prime_above(&p, r).unwrap();
            for pi in c.ring_primes() {
                let expected = match c.kind() {
                    PrimeKind::Inert => BigInt::from(p.clone()) * BigInt::from(p.clone()),
                    _ => BigInt::from(p.clone()),
                };
                assert_eq!(pi.norm(), expected);
            }
        }
    }

    #[test]
    fn residue_detects_divisibility() {
        let r = ring(-1);
        let c = prime_above_u64(13, r).unwrap();
        let pi = c.pi();
        let res = residue_of(&pi, 13);
        for a in -20i64..20 {
            for b in -20i64..20 {
                let z = QInt::new(r, a, b);
                if z.is_zero() {
                    continue;
                }
                let by_residue = (a + b * res as i64).rem_euclid(13) == 0;
                assert_eq!(pi.divides(&z).unwrap(), by_residue);
            }
        }
    }
}
