//! Miller–Rabin with fixed witness sets.
//!
//! The first twelve primes are a deterministic witness set for all `n < 3.3·10^24`,
//! which covers every `u64`. Beyond that the larger fixed schedule is used; it is
//! reproducible but not a proof.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modular::{mul_mod_u64, pow_mod_u64};

const BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const BASES_BIG: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES_64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES_64 {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &BASES_BIG {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n > 1");
    let d = &nm1 >> s;
    'witness: for &a in &BASES_BIG {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    debug_assert!(n.is_odd());
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(n: usize) -> Vec<bool> {
        let mut is = vec![true; n + 1];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i <= n {
            if is[i] {
                let mut j = i * i;
                while j <= n {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn agrees_with_sieve() {
        let table = sieve(100_000);
        for (n, &p) in table.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), p, "n={n}");
        }
    }

    #[test]
    fn strong_pseudoprimes() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(18446744073709551615));
    }

    #[test]
    fn big_values() {
        let m127: BigUint = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        let composite = &m127 * BigUint::from(3u32);
        assert!(!is_prime(&composite));
        let m89: BigUint = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 * &m89)));
    }
}
