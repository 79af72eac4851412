//! Factorization shapes: `I*_n` depends only on which integer primes divide
//! `z`, how they behave, and with what exponents.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::factor::{factor_u64, Factorization};
use crate::primes::{classify_u64, prime_above_u64, residue_of, PrimeKind, PrimeWitness};
use crate::radical::RadicalValue;
use crate::ring::{QInt, RingId};

/// How one integer prime enters an element.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotShape {
    Inert(u32),
    Ramified(u32),
    /// Only one of `π`, `π̄` divides.
    SplitOne(u32),
    /// Both divide, with exponents `(α₁, α₂)`, `α₁ ≥ α₂`.
    SplitBoth(u32, u32),
}

impl SlotShape {
    pub fn kind(self) -> PrimeKind {
        match self {
            SlotShape::Inert(_) => PrimeKind::Inert,
            SlotShape::Ramified(_) => PrimeKind::Ramified,
            SlotShape::SplitOne(_) | SlotShape::SplitBoth(..) => PrimeKind::Split,
        }
    }

    /// Exponents of `p` in the norms of the prime-power factors.
    fn norm_exponents(self) -> impl Iterator<Item = u32> {
        let (x, y) = match self {
            SlotShape::Inert(a) => (2 * a, 0),
            SlotShape::Ramified(a) | SlotShape::SplitOne(a) => (a, 0),
            SlotShape::SplitBoth(a, b) => (a, b),
        };
        [x, y].into_iter().filter(|&e| e > 0)
    }
}

/// A realizable shape: distinct integer primes in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature {
    entries: Vec<(u64, SlotShape)>,
}

impl Signature {
    pub fn new(mut entries: Vec<(u64, SlotShape)>, ring: RingId) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Signature(format!("prime {} listed twice", w[0].0)));
            }
        }
        for (p, s) in &mut entries {
            let kind = prime_kind(*p, ring)?;
            if kind != s.kind() {
                return Err(Error::Signature(format!(
                    "{p} is {} in d={}, not {}",
                    kind.as_str(),
                    ring.d(),
                    s.kind().as_str()
                )));
            }
            let valid = match *s {
                SlotShape::Inert(a) | SlotShape::Ramified(a) | SlotShape::SplitOne(a) => a > 0,
                SlotShape::SplitBoth(a, b) => a > 0 && b > 0,
            };
            if !valid {
                return Err(Error::Signature(format!("zero exponent at {p}")));
            }
            if let SlotShape::SplitBoth(a, b) = *s {
                *s = SlotShape::SplitBoth(a.max(b), a.min(b));
            }
        }
        Ok(Signature { entries })
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<(u64, SlotShape)>) -> Self {
        Signature { entries }
    }

    pub fn entries(&self) -> &[(u64, SlotShape)] {
        &self.entries
    }

    /// The shape of a factored element; `None` if a prime exceeds `u64`.
    pub fn of_factorization(f: &Factorization) -> Option<Self> {
        let mut map: HashMap<u64, SlotShape> = HashMap::new();
        for (pi, e) in f.factors() {
            let norm = pi.norm().to_u64()?;
            let (p, kind) = match num_integer::Roots::sqrt(&norm) {
                q if q * q == norm && classify_u64(q, f.ring()) == PrimeKind::Inert => {
                    (q, PrimeKind::Inert)
                }
                _ => (norm, classify_u64(norm, f.ring())),
            };
            let shape = match (kind, map.get(&p)) {
                (PrimeKind::Inert, _) => SlotShape::Inert(*e),
                (PrimeKind::Ramified, _) => SlotShape::Ramified(*e),
                (PrimeKind::Split, None) => SlotShape::SplitOne(*e),
                (PrimeKind::Split, Some(SlotShape::SplitOne(a))) => {
                    SlotShape::SplitBoth((*a).max(*e), (*a).min(*e))
                }
                (PrimeKind::Split, Some(_)) => unreachable!("at most two primes above p"),
            };
            map.insert(p, shape);
        }
        let mut entries: Vec<_> = map.into_iter().collect();
        entries.sort_by_key(|e| e.0);
        Some(Signature { entries })
    }

    /// `(p, f)` with `p^f` the norm of each prime-power factor.
    pub fn components(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.entries
            .iter()
            .flat_map(|(p, s)| s.norm_exponents().map(move |f| (*p, f)))
    }

    pub fn norm(&self) -> BigUint {
        self.components()
            .map(|(p, f)| BigUint::from(p).pow(f))
            .product()
    }

    pub fn i_star(&self, n: i64) -> RadicalValue {
        self.components().fold(RadicalValue::one(), |acc, (p, f)| {
            let term = RadicalValue::sqrt_pow(&BigUint::from(p), -(f as i64) * n)
                .expect("p is positive");
            &acc * &(&RadicalValue::one() + &term)
        })
    }

    /// One witness, with every split exponent placed on `π` first.
    pub fn materialize(&self, ring: RingId) -> Result<QInt> {
        let mut z = QInt::one(ring);
        for (p, s) in &self.entries {
            let class = prime_above_u64(*p, ring)?;
            let factor = match (s, &class.witness) {
                (SlotShape::Inert(a), PrimeWitness::Inert) => {
                    QInt::from_int(ring, BigInt::from(*p)).pow(*a)
                }
                (SlotShape::Ramified(a), PrimeWitness::Ramified { pi }) => pi.pow(*a),
                (SlotShape::SplitOne(a), PrimeWitness::Split { pi, .. }) => pi.pow(*a),
                (SlotShape::SplitBoth(a, b), PrimeWitness::Split { pi, pi_bar }) => {
                    &pi.pow(*a) * &pi_bar.pow(*b)
                }
                _ => return Err(Error::Signature(format!("signature does not match {p} in d={}", ring.d()))),
            };
            z = &z * &factor;
        }
        z.canonical()
    }

    /// Every sector element with this shape.
    pub fn materialize_all(&self, ring: RingId) -> Result<Vec<QInt>> {
        let mut out = vec![QInt::one(ring)];
        for (p, s) in &self.entries {
            let class = prime_above_u64(*p, ring)?;
            let options: Vec<QInt> = match (s, &class.witness) {
                (SlotShape::Inert(a), PrimeWitness::Inert) => {
                    vec![QInt::from_int(ring, BigInt::from(*p)).pow(*a)]
                }
                (SlotShape::Ramified(a), PrimeWitness::Ramified { pi }) => vec![pi.pow(*a)],
                (SlotShape::SplitOne(a), PrimeWitness::Split { pi, pi_bar }) => {
                    vec![pi.pow(*a), pi_bar.pow(*a)]
                }
                (SlotShape::SplitBoth(a, b), PrimeWitness::Split { pi, pi_bar }) => {
                    let mut v = vec![&pi.pow(*a) * &pi_bar.pow(*b)];
                    if a != b {
                        v.push(&pi.pow(*b) * &pi_bar.pow(*a));
                    }
                    v
                }
                _ => return Err(Error::Signature(format!("signature does not match {p} in d={}", ring.d()))),
            };
            out = out
                .iter()
                .flat_map(|z| options.iter().map(move |o| z * o))
                .collect();
        }
        let mut out = out
            .into_iter()
            .map(|z| z.canonical())
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|x, y| x.cmp_norm_lex(y));
        Ok(out)
    }
}

fn prime_kind(p: u64, ring: RingId) -> Result<PrimeKind> {
    if !crate::primes::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(classify_u64(p, ring))
}

impl fmt::Display for SlotShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotShape::Inert(a) => write!(f, "i^{a}"),
            SlotShape::Ramified(a) => write!(f, "r^{a}"),
            SlotShape::SplitOne(a) => write!(f, "s^{a}"),
            SlotShape::SplitBoth(a, b) => write!(f, "s^({a},{b})"),
        }
    }
}

/// `2r^2 * 3i^1 * 5s^(1,1)`; the empty signature prints as `1`.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, s)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Parses the display form without ring checks; see [`Signature::new`].
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::parse(s, why);
        if s.trim() == "1" {
            return Ok(Signature::default());
        }
        let mut entries = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let split = part
                .find(|c: char| !c.is_ascii_digit())
                .ok_or_else(|| bad("missing class letter"))?;
            let p: u64 = part[..split].parse().map_err(|_| bad("bad prime"))?;
            let rest = &part[split..];
            let (letter, exp) = rest.split_once('^').ok_or_else(|| bad("missing '^'"))?;
            let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad("bad exponent"));
            let shape = match (letter, exp.strip_prefix('(').and_then(|e| e.strip_suffix(')'))) {
                ("s", Some(pair)) => {
                    let (a, b) = pair.split_once(',').ok_or_else(|| bad("bad exponent pair"))?;
                    SlotShape::SplitBoth(num(a)?, num(b)?)
                }
                ("i", None) => SlotShape::Inert(num(exp)?),
                ("r", None) => SlotShape::Ramified(num(exp)?),
                ("s", None) => SlotShape::SplitOne(num(exp)?),
                _ => return Err(bad("unknown class")),
            };
            entries.push((p, shape));
        }
        Ok(Signature { entries })
    }
}

/// Exact test of `Π (1 + M⁻¹) = t` with `M = p^(f·n/2)` per component.
/// Components with `f·n` odd make the value irrational, so never a hit.
pub fn components_hit(components: &[(u64, u32)], n: u32, t: &BigRational) -> bool {
    if components.iter().any(|(_, f)| f * n % 2 == 1) {
        return false;
    }
    let (tn, td) = (t.numer().to_u128(), t.denom().to_u128());
    if let (Some(tn), Some(td)) = (tn, td) {
        if let Some(hit) = hit_u128(components, n, tn, td) {
            return hit;
        }
    }
    let mut lhs = BigUint::one();
    let mut rhs = BigUint::one();
    for (p, f) in components {
        let m = BigUint::from(*p).pow(f * n / 2);
        lhs *= &m + 1u32;
        rhs *= m;
    }
    BigInt::from(lhs) * t.denom() == BigInt::from(rhs) * t.numer()
}

fn hit_u128(components: &[(u64, u32)], n: u32, tn: u128, td: u128) -> Option<bool> {
    let mut lhs = td;
    let mut rhs = tn;
    for (p, f) in components {
        let m = (*p as u128).checked_pow(f * n / 2)?;
        lhs = lhs.checked_mul(m.checked_add(1)?)?;
        rhs = rhs.checked_mul(m)?;
    }
    Some(lhs == rhs)
}

/// Smallest prime factor for every integer below a bound.
pub(crate) struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub(crate) const MAX: u64 = 1 << 23;

    pub(crate) fn new(limit: u64) -> Self {
        let limit = limit.min(Self::MAX) as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub(crate) fn factor(&self, mut n: u64, out: &mut Vec<(u64, u32)>) {
        out.clear();
        if n as usize >= self.spf.len() {
            out.extend(factor_u64(n));
            return;
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
}

pub(crate) fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Per-worker cache of prime behaviour and, for split primes, the residue
/// `r` with `π | a + bω ⇔ a + b·r ≡ 0 (mod p)`.
pub(crate) struct PrimeTable {
    ring: RingId,
    cache: HashMap<u64, (PrimeKind, u64)>,
}

impl PrimeTable {
    pub(crate) fn new(ring: RingId) -> Self {
        PrimeTable {
            ring,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, p: u64) -> (PrimeKind, u64) {
        let ring = self.ring;
        *self.cache.entry(p).or_insert_with(|| {
            let class = prime_above_u64(p, ring).expect("sieve output is prime");
            match &class.witness {
                PrimeWitness::Split { pi, .. } => (PrimeKind::Split, residue_of(pi, p)),
                _ => (class.kind(), 0),
            }
        })
    }
}

fn valuation(mut x: i64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let p = p as i64;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// The `(p, f)` components of `a + bω`, from the factorization of its norm.
pub(crate) fn element_components(
    a: i64,
    b: i64,
    norm_factors: &[(u64, u32)],
    table: &mut PrimeTable,
    out: &mut Vec<(u64, u32)>,
) {
    out.clear();
    for &(p, v) in norm_factors {
        match table.get(p) {
            (PrimeKind::Split, r) => {
                let (on_pi, on_bar) = split_exponents(a, b, p, v, r);
                out.extend([(p, on_pi), (p, on_bar)].into_iter().filter(|c| c.1 > 0));
            }
            _ => out.push((p, v)),
        }
    }
}

/// The signature of `a + bω`, from the factorization of its norm.
pub(crate) fn element_signature(
    a: i64,
    b: i64,
    norm_factors: &[(u64, u32)],
    table: &mut PrimeTable,
) -> Signature {
    let mut entries = Vec::with_capacity(norm_factors.len());
    for &(p, v) in norm_factors {
        let (kind, r) = table.get(p);
        let shape = match kind {
            PrimeKind::Inert => SlotShape::Inert(v / 2),
            PrimeKind::Ramified => SlotShape::Ramified(v),
            PrimeKind::Split => {
                let (on_pi, on_bar) = split_exponents(a, b, p, v, r);
                match (on_pi, on_bar) {
                    (x, 0) | (0, x) => SlotShape::SplitOne(x),
                    (x, y) => SlotShape::SplitBoth(x.max(y), x.min(y)),
                }
            }
        };
        entries.push((p, shape));
    }
    Signature::from_entries_unchecked(entries)
}

/// Exponents of `(π, π̄)` in `a + bω` given `υ_p(N) = v`.
pub(crate) fn split_exponents(a: i64, b: i64, p: u64, v: u32, r: u64) -> (u32, u32) {
    // p^c divides z in Z, so π and π̄ both carry c; the rest of v sits on
    // exactly one of them, since p = ππ̄ no longer divides z / p^c
    let c = valuation(a, p).min(valuation(b, p)).min(v / 2);
    let rest = v - 2 * c;
    if rest == 0 {
        return (c, c);
    }
    let scale = (p as i64).pow(c);
    let (a1, b1) = (a / scale, b / scale);
    let pm = p as i128;
    let test = (a1 as i128 + b1 as i128 * r as i128).rem_euclid(pm);
    if test == 0 {
        (c + rest, c)
    } else {
        (c, c + rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_element;

    fn ring(d: i64) -> RingId {
        RingId::new(d).unwrap()
    }

    #[test]
    fn thirty_signature() {
        let r = ring(-1);
        let f = factor_element(&QInt::from_int(r, 30)).unwrap();
        let s = Signature::of_factorization(&f).unwrap();
        assert_eq!(s.to_string(), "2r^2 * 3i^1 * 5s^(1,1)");
        assert_eq!(s.to_string().parse::<Signature>().unwrap(), s);
        assert_eq!(s.norm(), BigUint::from(900u32));
        let two = BigRational::from_integer(2.into());
        assert!(s.i_star(2).eq_rational(&two));
        let comps: Vec<_> = s.components().collect();
        assert!(components_hit(&comps, 2, &two));
        assert!(!components_hit(&comps, 1, &two));
        assert_eq!(s.materialize(r).unwrap(), QInt::from_int(r, 30));
        assert_eq!(s.materialize_all(r).unwrap(), vec![QInt::from_int(r, 30)]);
    }

    #[test]
    fn signature_validation() {
        let r = ring(-1);
        assert!(Signature::new(vec![(3, SlotShape::SplitOne(1))], r).is_err());
        assert!(Signature::new(vec![(4, SlotShape::Inert(1))], r).is_err());
        assert!(Signature::new(vec![(5, SlotShape::SplitOne(1)), (5, SlotShape::SplitOne(1))], r).is_err());
        let s = Signature::new(vec![(5, SlotShape::SplitBoth(1, 3))], r).unwrap();
        assert_eq!(s.entries(), &[(5, SlotShape::SplitBoth(3, 1))]);
        assert_eq!(s.materialize_all(r).unwrap().len(), 2);
        assert_eq!("1".parse::<Signature>().unwrap(), Signature::default());
        for bad in ["", "5", "5x^1", "5s^(1)", "5i^a", "ab^1"] {
            assert!(bad.parse::<Signature>().is_err(), "{bad}");
        }
    }

    #[test]
    fn element_shapes_match_factorization() {
        for r in RingId::all() {
            let mut table = PrimeTable::new(r);
            let sieve = SpfSieve::new(100_000);
            let mut nf = Vec::new();
            for a in -40i64..40 {
                for b in -40i64..40 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let z = QInt::new(r, a, b);
                    let norm = z.norm().to_u64().unwrap();
                    sieve.factor(norm, &mut nf);
                    let fast = element_signature(a, b, &nf, &mut table);
                    let slow = Signature::of_factorization(&factor_element(&z).unwrap()).unwrap();
                    assert_eq!(fast, slow, "d={} z={z}", r.d());
                    let mut comps = Vec::new();
                    element_components(a, b, &nf, &mut table, &mut comps);
                    let mut expect: Vec<_> = slow.components().collect();
                    comps.sort_unstable();
                    expect.sort_unstable();
                    assert_eq!(comps, expect);
                }
            }
        }
    }

    #[test]
    fn split_orientation_matches_ring_division() {
        let r = ring(-1);
        let mut table = PrimeTable::new(r);
        let class = prime_above_u64(5, r).unwrap();
        let PrimeWitness::Split { pi, .. } = class.witness else { panic!() };
        let (_, res) = table.get(5);
        for (a, b) in [(2i64, 1i64), (1, 2), (3, 4), (4, 3), (-7, 24), (10, 5)] {
            let z = QInt::new(r, a, b);
            let v = crate::factor::factor_int(&z.norm().to_biguint().unwrap()).unwrap().valuation(&BigUint::from(5u32));
            let (on_pi, _) = split_exponents(a, b, 5, v, res);
            assert_eq!(on_pi, crate::factor::rho(&pi, &z).unwrap(), "{a}+{b}i");
        }
    }

    #[test]
    fn exact_hit_uses_big_fallback() {
        let comps = vec![(1_000_003u64, 40u32)];
        let t = BigRational::new(2.into(), 1.into());
        assert!(!components_hit(&comps, 2, &t));
        let m = BigUint::from(1_000_003u32).pow(40);
        let exact = BigRational::new(BigInt::from(&m + 1u32), BigInt::from(m));
        assert!(components_hit(&comps, 2, &exact));
    }

    #[test]
    fn sieves() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        let s = SpfSieve::new(1000);
        let mut out = Vec::new();
        for n in 1..2000u64 {
            s.factor(n, &mut out);
            assert_eq!(out, factor_u64(n));
        }
    }
}
