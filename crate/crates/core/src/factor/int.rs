//! Integer factorization at desk scale: trial division, then Pollard–Brent rho.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::modular::mul_mod_u64;
use crate::primes::{is_prime, is_prime_u64};

const TRIAL_LIMIT: u64 = 1000;

/// `n = Π pᵉ` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl IntFactorization {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// `υ_p(n)`
    pub fn valuation(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

pub fn factor_int(n: &BigUint) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    let factors = match n.to_u64() {
        Some(small) => factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect(),
        None => factor_big(n),
    };
    Ok(IntFactorization {
        n: n.clone(),
        factors,
    })
}

/// Factor a nonzero `u64`; `1` gives an empty list.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut out = Vec::new();
    let push = |out: &mut Vec<(u64, u32)>, p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut out, 2, &mut n);
    let mut p = 3;
    while p < TRIAL_LIMIT && p * p <= n {
        push(&mut out, p, &mut n);
        p += 2;
    }
    if n > 1 {
        if n < TRIAL_LIMIT * TRIAL_LIMIT {
            out.push((n, 1));
        } else {
            let mut primes = Vec::new();
            split_u64(n, &mut primes);
            primes.sort_unstable();
            for q in primes {
                match out.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => out.push((q, 1)),
                }
            }
        }
    }
    out
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = brent_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// A nontrivial divisor of an odd composite `n`.
fn brent_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let step = |x: u64, c: u64| ((mul_mod_u64(x, x, n) as u128 + c as u128) % n as u128) as u64;
    const BATCH: u64 = 128;
    for c in 1.. {
        let mut y = 2u64;
        let mut x;
        let mut ys = y;
        let mut g = 1u64;
        let mut q = 1u64;
        let mut r = 1u64;
        loop {
            x = y;
            for _ in 0..r {
                y = step(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y, c);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = step(ys, c);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_big(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let mut e = 0;
        while (&n % p).is_zero() {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let mut primes = Vec::new();
        split_big(n, &mut primes);
        primes.sort();
        for q in primes {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        for (p, e) in factor_u64(small) {
            out.extend(std::iter::repeat_n(BigUint::from(p), e as usize));
        }
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    // rho needs about p^(1/2) steps on p^k, so split exact powers first
    if let Some((root, k)) = perfect_power(&n) {
        let mut inner = Vec::new();
        split_big(root, &mut inner);
        for _ in 0..k {
            out.extend(inner.iter().cloned());
        }
        return;
    }
    let d = rho_big(&n);
    let rest = &n / &d;
    split_big(d, out);
    split_big(rest, out);
}

/// `n = root^k` with the largest such `k > 1`.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r.pow(k) == *n && r > BigUint::one()).then_some((r, k))
    })
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if !g.is_one() {
                return g;
            }
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(n: u64) -> Vec<(u64, u32)> {
        factor_u64(n)
    }

    #[test]
    fn examples() {
        assert_eq!(factors(900), vec![(2, 2), (3, 2), (5, 2)]);
        assert_eq!(factors(1), vec![]);
        assert_eq!(factors(87360), vec![(2, 6), (3, 1), (5, 1), (7, 1), (13, 1)]);
        assert_eq!(factors(2), vec![(2, 1)]);
        assert!(factor_int(&BigUint::zero()).is_err());
    }

    #[test]
    fn trial_division_oracle() {
        for n in 1..20_000u64 {
            let mut m = n;
            let mut expected = Vec::new();
            let mut p = 2;
            while p * p <= m {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                if e > 0 {
                    expected.push((p, e));
                }
                p += 1;
            }
            if m > 1 {
                expected.push((m, 1));
            }
            assert_eq!(factors(n), expected, "n={n}");
        }
    }

    #[test]
    fn rho_splits_semiprimes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        assert_eq!(factors(p * q), vec![(q, 1), (p, 1)]);
        assert_eq!(factors(1_000_003 * 1_000_003), vec![(1_000_003, 2)]);
        let n = 18446744073709551615u64; // 2^64 - 1
        assert_eq!(
            factors(n),
            vec![(3, 1), (5, 1), (17, 1), (257, 1), (641, 1), (65537, 1), (6700417, 1)]
        );
    }

    #[test]
    fn big_input() {
        let p = BigUint::from(18446744073709551629u128); // 2^64 + 13
        let q = BigUint::from(1_000_003u64);
        let n = &p * &p * &q * BigUint::from(12u32);
        let f = factor_int(&n).unwrap();
        assert_eq!(
            f.factors(),
            &[
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 1),
                (q.clone(), 1),
                (p.clone(), 2)
            ]
        );
        assert_eq!(f.valuation(&p), 2);
        assert_eq!(f.valuation(&BigUint::from(7u32)), 0);
    }
}
