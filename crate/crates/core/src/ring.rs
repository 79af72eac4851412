//! The nine imaginary quadratic rings of integers with unique factorization.
//!
//! Elements are stored as `a + b·ω` with integer coordinates, where
//! `ω = √d` when `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`.
//! Nothing in this module touches floating point: sector membership and
//! argument comparisons are decided by integer sign tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Every negative `d` for which the ring of integers of `Q(√d)` is a UFD.
pub const DISCRIMINANTS: [i64; 9] = [-163, -67, -43, -19, -11, -7, -3, -2, -1];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `ω = √d`
    Integral,
    /// `ω = (1 + √d)/2`
    HalfIntegral,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoBehavior {
    Ramified,
    Split,
    Inert,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId {
    d: i64,
}

impl RingId {
    pub fn new(d: i64) -> Result<Self> {
        if DISCRIMINANTS.contains(&d) {
            Ok(RingId { d })
        } else {
            Err(Error::UnknownRing(d))
        }
    }

    pub fn all() -> impl Iterator<Item = RingId> {
        DISCRIMINANTS.iter().map(|&d| RingId { d })
    }

    pub fn d(self) -> i64 {
        self.d
    }

    pub fn basis_kind(self) -> BasisKind {
        if self.d.rem_euclid(4) == 1 {
            BasisKind::HalfIntegral
        } else {
            BasisKind::Integral
        }
    }

    pub fn unit_count(self) -> usize {
        match self.d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    pub fn two_behavior(self) -> TwoBehavior {
        match self.d {
            -1 | -2 => TwoBehavior::Ramified,
            -7 => TwoBehavior::Split,
            _ => TwoBehavior::Inert,
        }
    }

    /// `(c, e)` such that `ω² = c + e·ω`.
    pub(crate) fn omega_square(self) -> (i64, i64) {
        match self.basis_kind() {
            BasisKind::Integral => (self.d, 0),
            BasisKind::HalfIntegral => ((self.d - 1) / 4, 1),
        }
    }

    /// Coefficient `k` with `N(a + bω) = a² + e·ab + k·b²`.
    pub(crate) fn norm_form(self) -> (i64, i64) {
        let (c, e) = self.omega_square();
        (e, -c)
    }

    pub fn unit(self, idx: UnitIndex) -> QInt {
        let (a, b) = unit_coords(self.d)[idx.0 as usize];
        QInt::new(self, a, b)
    }

    pub fn units(self) -> impl Iterator<Item = (UnitIndex, QInt)> {
        (0..self.unit_count()).map(move |i| {
            let idx = UnitIndex(i as u8);
            (idx, self.unit(idx))
        })
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

impl FromStr for RingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let d: i64 = s.trim().parse().map_err(|_| Error::parse(s, "ring must be an integer d"))?;
        RingId::new(d)
    }
}

/// Unit order, as `(a, b)` coordinates in the ring's basis:
/// `1, -1` everywhere; then `i, -i` for d = -1;
/// then `ω, -ω, ω̄, -ω̄` with `ω = (1+√-3)/2` for d = -3.
fn unit_coords(d: i64) -> &'static [(i64, i64)] {
    match d {
        -1 => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        -3 => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)],
        _ => &[(1, 0), (-1, 0)],
    }
}

/// Position of a unit in its ring's fixed unit order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitIndex(pub u8);

impl UnitIndex {
    pub const ONE: UnitIndex = UnitIndex(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn mul(self, other: UnitIndex, ring: RingId) -> UnitIndex {
        let prod = &ring.unit(self) * &ring.unit(other);
        prod.unit_index().expect("units are closed under multiplication")
    }

    pub fn inverse(self, ring: RingId) -> UnitIndex {
        ring.unit(self)
            .conj()
            .unit_index()
            .expect("the conjugate of a unit is a unit")
    }
}

/// An element `a + b·ω` of one of the nine rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QInt {
    ring: RingId,
    a: BigInt,
    b: BigInt,
}

impl QInt {
    pub fn new(ring: RingId, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QInt {
            ring,
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(ring: RingId, n: impl Into<BigInt>) -> Self {
        QInt::new(ring, n, 0)
    }

    pub fn zero(ring: RingId) -> Self {
        QInt::new(ring, 0, 0)
    }

    pub fn one(ring: RingId) -> Self {
        QInt::new(ring, 1, 0)
    }

    pub fn omega(ring: RingId) -> Self {
        QInt::new(ring, 0, 1)
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn same_ring(&self, other: &QInt) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::MixedRings(self.ring.d, other.ring.d))
        }
    }

    pub fn try_add(&self, other: &QInt) -> Result<QInt> {
        self.same_ring(other)?;
        Ok(self.add_raw(other))
    }

    pub fn try_sub(&self, other: &QInt) -> Result<QInt> {
        self.same_ring(other)?;
        Ok(self.add_raw(&-other))
    }

    pub fn try_mul(&self, other: &QInt) -> Result<QInt> {
        self.same_ring(other)?;
        Ok(self.mul_raw(other))
    }

    fn add_raw(&self, other: &QInt) -> QInt {
        QInt::new(self.ring, &self.a + &other.a, &self.b + &other.b)
    }

    fn mul_raw(&self, other: &QInt) -> QInt {
        let (c, e) = self.ring.omega_square();
        let bf = &self.b * &other.b;
        let a = &self.a * &other.a + &bf * c;
        let b = &self.a * &other.b + &self.b * &other.a + bf * e;
        QInt::new(self.ring, a, b)
    }

    pub fn conj(&self) -> QInt {
        match self.ring.basis_kind() {
            BasisKind::Integral => QInt::new(self.ring, self.a.clone(), -&self.b),
            // conj(ω) = 1 - ω
            BasisKind::HalfIntegral => QInt::new(self.ring, &self.a + &self.b, -&self.b),
        }
    }

    pub fn norm(&self) -> BigInt {
        let (e, k) = self.ring.norm_form();
        &self.a * &self.a + &self.a * &self.b * e + &self.b * &self.b * k
    }

    pub fn pow(&self, mut k: u32) -> QInt {
        let mut base = self.clone();
        let mut acc = QInt::one(self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_raw(&base);
            }
        }
        acc
    }

    /// The quotient `self / y`, computed as `self·conj(y) / N(y)`.
    pub fn exact_div(&self, y: &QInt) -> Result<QInt> {
        self.same_ring(y)?;
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = y.norm();
        let num = self.mul_raw(&y.conj());
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Ok(QInt::new(self.ring, qa, qb))
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// `self | x`
    pub fn divides(&self, x: &QInt) -> Result<bool> {
        match x.exact_div(self) {
            Ok(_) => Ok(true),
            Err(Error::NotDivisible) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `(2x, 2y)` where `self = x + y√d`.
    pub(crate) fn doubled_parts(&self) -> (BigInt, BigInt) {
        match self.ring.basis_kind() {
            BasisKind::Integral => (&self.a * 2, &self.b * 2),
            BasisKind::HalfIntegral => (&self.a * 2 + &self.b, self.b.clone()),
        }
    }

    /// Membership in the fundamental sector `A(d)`.
    ///
    /// With `z = x + y√d`: for d = -1 the sector is `x > 0, y ≥ 0`; for
    /// d = -3 it is `x > 0, 0 ≤ y < x`, which in basis coordinates is again
    /// `a > 0, b ≥ 0`; otherwise it is the upper half plane with the positive
    /// real axis, `y > 0 or (y = 0 and x > 0)`.
    pub fn in_sector(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        Ok(match self.ring.d {
            -1 | -3 => self.a.is_positive() && !self.b.is_negative(),
            _ => self.b.is_positive() || (self.b.is_zero() && self.a.is_positive()),
        })
    }

    /// The unique associate `w ∈ A(d)` and the unit `u` with `self = u·w`.
    pub fn canonical_associate(&self) -> Result<(QInt, UnitIndex)> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        for (idx, u) in self.ring.units() {
            let w = u.mul_raw(self);
            if w.in_sector()? {
                return Ok((w, idx.inverse(self.ring)));
            }
        }
        unreachable!("every nonzero element has an associate in the sector")
    }

    pub fn canonical(&self) -> Result<QInt> {
        self.canonical_associate().map(|(w, _)| w)
    }

    pub fn is_associate(&self, other: &QInt) -> bool {
        if self.ring != other.ring {
            return false;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (false, false) => {
                self.canonical().ok() == other.canonical().ok()
            }
            _ => false,
        }
    }

    /// Index of `self` in the unit order, if it is a unit.
    pub fn unit_index(&self) -> Option<UnitIndex> {
        self.ring.units().find(|(_, u)| u == self).map(|(i, _)| i)
    }

    /// Compare arguments of two nonzero elements whose arguments lie in `[0, π)`
    /// (true of every sector element in all nine rings).
    pub fn cmp_arg(&self, other: &QInt) -> Ordering {
        let (x1, y1) = self.doubled_parts();
        let (x2, y2) = other.doubled_parts();
        let cross = x1 * y2 - y1 * x2;
        match cross.sign() {
            num_bigint::Sign::Plus => Ordering::Less,
            num_bigint::Sign::Minus => Ordering::Greater,
            num_bigint::Sign::NoSign => Ordering::Equal,
        }
    }

    /// Order by norm, then basis coordinates.
    pub fn cmp_norm_lex(&self, other: &QInt) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
    }
}

impl Add for &QInt {
    type Output = QInt;
    fn add(self, rhs: &QInt) -> QInt {
        self.try_add(rhs).expect("mixed-ring addition")
    }
}

impl Sub for &QInt {
    type Output = QInt;
    fn sub(self, rhs: &QInt) -> QInt {
        self.try_sub(rhs).expect("mixed-ring subtraction")
    }
}

impl Mul for &QInt {
    type Output = QInt;
    fn mul(self, rhs: &QInt) -> QInt {
        self.try_mul(rhs).expect("mixed-ring multiplication")
    }
}

impl Neg for &QInt {
    type Output = QInt;
    fn neg(self) -> QInt {
        QInt::new(self.ring, -&self.a, -&self.b)
    }
}
