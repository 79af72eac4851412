//! Enclosures for the four zeta-ratio constants bounding `I*_n` for `n ≥ 3`.
//!
//! `ζ(s)` is enclosed by `S_N + [(N+1)^(1−s), N^(1−s)]/(s−1)` where `S_N` is
//! the partial sum, from the integral test. The partial sum is accumulated
//! smallest term first and the enclosure is widened by a generous bound on
//! the accumulated rounding error.

use serde::Serialize;

const TERMS: u32 = 1_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn mul(self, o: Interval) -> Interval {
        debug_assert!(self.lo > 0.0 && o.lo > 0.0);
        Interval {
            lo: self.lo * o.lo,
            hi: self.hi * o.hi,
        }
    }

    fn div(self, o: Interval) -> Interval {
        debug_assert!(self.lo > 0.0 && o.lo > 0.0);
        Interval {
            lo: self.lo / o.hi,
            hi: self.hi / o.lo,
        }
    }

    fn scale(self, c: f64) -> Interval {
        Interval {
            lo: self.lo * c,
            hi: self.hi * c,
        }
    }

    fn widen(self, rel: f64) -> Interval {
        Interval {
            lo: self.lo * (1.0 - rel),
            hi: self.hi * (1.0 + rel),
        }
    }
}

pub fn zeta_interval(s: f64, terms: u32) -> Interval {
    assert!(s > 1.0);
    let sum: f64 = (1..=terms).rev().map(|k| (k as f64).powf(-s)).sum();
    let n = terms as f64;
    let tail_lo = (n + 1.0).powf(1.0 - s) / (s - 1.0);
    let tail_hi = n.powf(1.0 - s) / (s - 1.0);
    // each term carries a few ulps from powf and each addition one more
    let err = 4.0 * n * f64::EPSILON * sum;
    Interval {
        lo: sum + tail_lo - err,
        hi: sum + tail_hi + err,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaBound {
    pub label: &'static str,
    pub enclosure: Interval,
    pub limit: f64,
}

impl ZetaBound {
    pub fn passes(&self) -> bool {
        self.enclosure.hi < self.limit
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub terms: u32,
    pub bounds: Vec<ZetaBound>,
}

impl ZetaReport {
    pub fn passes(&self) -> bool {
        self.bounds.iter().all(ZetaBound::passes)
    }

    pub fn max_width(&self) -> f64 {
        self.bounds.iter().map(|b| b.enclosure.width()).fold(0.0, f64::max)
    }
}

pub fn zeta_bound_check() -> ZetaReport {
    let z = |s| zeta_interval(s, TERMS);
    let squared = |r: Interval| r.mul(r);
    // the scalars 4/5 and 41/50 are rounded once; one ulp of slack covers it
    let ratio_2_4 = squared(z(2.0).div(z(4.0)));
    let bounds = vec![
        ZetaBound {
            label: "(zeta(5/2)/zeta(5))^2",
            enclosure: squared(z(2.5).div(z(5.0))),
            limit: 2.0,
        },
        ZetaBound {
            label: "4/5 (zeta(2)/zeta(4))^2",
            enclosure: ratio_2_4.scale(0.8).widen(f64::EPSILON),
            limit: 2.0,
        },
        ZetaBound {
            label: "41/50 (zeta(2)/zeta(4))^2",
            enclosure: ratio_2_4.scale(0.82).widen(f64::EPSILON),
            limit: 2.0,
        },
        ZetaBound {
            label: "(zeta(3)/zeta(6))^2",
            enclosure: squared(z(3.0).div(z(6.0))),
            limit: 2.0,
        },
    ];
    ZetaReport {
        terms: TERMS,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms_inside_enclosures() {
        let z2 = zeta_interval(2.0, TERMS);
        assert!(z2.lo <= PI * PI / 6.0 && PI * PI / 6.0 <= z2.hi);
        let z4 = zeta_interval(4.0, TERMS);
        let exact = PI.powi(4) / 90.0;
        assert!(z4.lo <= exact && exact <= z4.hi);
        let z6 = zeta_interval(6.0, TERMS);
        let exact = PI.powi(6) / 945.0;
        assert!(z6.lo <= exact && exact <= z6.hi);
    }

    #[test]
    fn all_constants_below_two() {
        let r = zeta_bound_check();
        assert!(r.passes());
        assert!(r.max_width() < 1e-3);
        let mids: Vec<f64> = r.bounds.iter().map(|b| (b.enclosure.lo + b.enclosure.hi) / 2.0).collect();
        for (m, expected) in mids.iter().zip([1.6737, 1.8479, 1.8941, 1.3961]) {
            assert!((m - expected).abs() < 1e-3, "{m} vs {expected}");
        }
    }

    #[test]
    fn enclosures_at_different_depths_overlap() {
        for s in [2.0, 2.5, 3.0] {
            let coarse = zeta_interval(s, 1000);
            let fine = zeta_interval(s, TERMS);
            assert!(coarse.lo <= fine.hi && fine.lo <= coarse.hi);
        }
    }
}
