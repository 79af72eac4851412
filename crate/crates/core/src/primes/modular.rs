use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let p_int = BigInt::from(p.clone());
    let a = a.mod_floor(&p_int).to_biguint().expect("nonnegative after mod_floor");
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

pub fn legendre_u64(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod_u64(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
///
/// Returns the smaller of the two roots, or `None` when `a` is a nonresidue.
pub fn sqrt_mod(a: &BigInt, p: &BigUint) -> Option<BigUint> {
    if let Some(p64) = p.to_u64() {
        let p_int = BigInt::from(p64);
        let a64 = a.mod_floor(&p_int).to_u64().expect("reduced below p");
        return sqrt_mod_u64(a64, p64).map(BigUint::from);
    }
    let p_int = BigInt::from(p.clone());
    let a = a.mod_floor(&p_int).to_biguint().expect("nonnegative after mod_floor");
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    if legendre(&BigInt::from(a.clone()), p) != 1 {
        return None;
    }
    let one = BigUint::one();
    let pm1 = p - &one;
    let s = pm1.trailing_zeros().expect("p > 1") as u32;
    let q = &pm1 >> s;
    let mut z = BigUint::from(2u32);
    while legendre(&BigInt::from(z.clone()), p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    let other = p - &r;
    Some(r.min(other))
}

pub fn sqrt_mod_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        pow_mod_u64(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2u64;
        while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod_u64(z, q, p);
        let mut t = pow_mod_u64(a, q, p);
        let mut r = pow_mod_u64(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod_u64(t2, t2, p);
                i += 1;
            }
            let b = pow_mod_u64(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod_u64(b, b, p);
            t = mul_mod_u64(t, c, p);
            r = mul_mod_u64(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_examples() {
        let r = sqrt_mod(&BigInt::from(-1), &BigUint::from(5u32)).unwrap();
        assert!(r == BigUint::from(2u32) || r == BigUint::from(3u32));
        assert_eq!(sqrt_mod(&BigInt::from(0), &BigUint::from(13u32)), Some(BigUint::zero()));
        // residues mod 5 are {0, 1, 4}
        assert_eq!(sqrt_mod(&BigInt::from(2), &BigUint::from(5u32)), None);
        assert_eq!(sqrt_mod_u64(3, 5), None);
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 73, 97, 193, 257, 7681, 65537] {
            for a in 0..p.min(300) {
                let squares: Vec<u64> = (0..p).filter(|x| x * x % p == a).collect();
                match sqrt_mod_u64(a, p) {
                    Some(r) => {
                        assert!(squares.contains(&r), "p={p} a={a}");
                        assert_eq!(r, squares[0]);
                    }
                    None => assert!(squares.is_empty(), "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn sqrt_big_modulus() {
        // 2^127 - 1 is prime and ≡ 3 (mod 4)
        let p: BigUint = (BigUint::one() << 127u32) - 1u32;
        let a = BigInt::from(123456789u64) * BigInt::from(123456789u64);
        let r = sqrt_mod(&a, &p).unwrap();
        let a_mod = a.to_biguint().unwrap() % &p;
        assert_eq!(&r * &r % &p, a_mod);
    }

    #[test]
    fn sqrt_big_tonelli_branch() {
        // 2^64 + 13 is prime and ≡ 1 (mod 4), so the full Tonelli–Shanks loop runs
        let p = BigUint::from(18446744073709551629u128);
        assert!(crate::primes::is_prime(&p));
        for x in [2u64, 3, 12345, 987654321] {
            let a = BigInt::from(x) * BigInt::from(x);
            let r = sqrt_mod(&a, &p).unwrap();
            assert_eq!(&r * &r % &p, BigUint::from(x) * BigUint::from(x) % &p);
        }
    }

    #[test]
    fn legendre_matches_u64() {
        for p in [3u64, 7, 11, 19, 43, 67, 163, 1009] {
            for a in -50i64..50 {
                assert_eq!(legendre(&BigInt::from(a), &BigUint::from(p)), legendre_u64(a, p));
            }
        }
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod_u64(3, 7), Some(5));
        assert_eq!(inv_mod_u64(4, 8), None);
    }
}
