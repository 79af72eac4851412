//! Exhaustive scan of sector elements by norm.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ring::{BasisKind, QInt, RingId};
use crate::search::checkpoint::TaskResult;
use crate::search::config::SearchConfig;
use crate::search::record::SearchRecord;
use crate::search::shape::{components_hit, element_components, element_signature, PrimeTable, Signature, SpfSieve};
use crate::udf::{i_star, i_star_divisor_sum};

/// Number of norm intervals covering `[2, max_norm]`.
pub(crate) fn task_count(cfg: &SearchConfig) -> usize {
    (cfg.max_norm - 1).div_ceil(cfg.chunk) as usize
}

/// Inclusive norm range of task `k`.
pub(crate) fn task_range(cfg: &SearchConfig, k: usize) -> (u64, u64) {
    let lo = 2 + k as u64 * cfg.chunk;
    let hi = (lo + cfg.chunk - 1).min(cfg.max_norm);
    (lo, hi)
}

/// Sector test on `i64` coordinates; agrees with [`QInt::in_sector`].
pub(crate) fn in_sector_i64(d: i64, a: i64, b: i64) -> bool {
    match d {
        -1 | -3 => a > 0 && b >= 0,
        _ => b > 0 || (b == 0 && a > 0),
    }
}

fn ceil_sqrt(x: u64) -> u64 {
    let r = x.sqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// All sector elements `(norm, a, b)` with `lo ≤ norm ≤ hi`, sorted.
pub fn sector_elements(ring: RingId, lo: u64, hi: u64) -> Vec<(u64, i64, i64)> {
    let d = ring.d();
    let m = d.unsigned_abs();
    let mut out = Vec::new();
    // Every sector element has b ≥ 0. Integral basis: N = a² + m b².
    // Half-integral basis: 4N = u² + m b² with u = 2a + b ≡ b (mod 2).
    let (scale, half) = match ring.basis_kind() {
        BasisKind::Integral => (1u64, false),
        BasisKind::HalfIntegral => (4u64, true),
    };
    let (lo_s, hi_s) = (lo * scale, hi * scale);
    let mut b = 0u64;
    while m * b * b <= hi_s {
        let used = m * b * b;
        let u_min = ceil_sqrt(lo_s.saturating_sub(used));
        let u_max = (hi_s - used).sqrt();
        for u in u_min..=u_max {
            if half && (u + b) % 2 == 1 {
                continue;
            }
            for sign in [1i64, -1] {
                if u == 0 && sign < 0 {
                    continue;
                }
                let u = sign * u as i64;
                let bi = b as i64;
                let a = if half { (u - bi) / 2 } else { u };
                if in_sector_i64(d, a, bi) {
                    let norm = (used + (u * u) as u64) / scale;
                    out.push((norm, a, bi));
                }
            }
        }
        b += 1;
    }
    out.sort_unstable();
    out
}

pub(crate) fn run_task(cfg: &SearchConfig, k: usize, sieve: &SpfSieve) -> Result<TaskResult> {
    let (lo, hi) = task_range(cfg, k);
    let elems = sector_elements(cfg.ring, lo, hi);
    let mut table = PrimeTable::new(cfg.ring);
    let mut nf = Vec::new();
    let mut comps = Vec::new();
    let mut records = Vec::new();
    for &(norm, a, b) in &elems {
        sieve.factor(norm, &mut nf);
        element_components(a, b, &nf, &mut table, &mut comps);
        let hit = components_hit(&comps, cfg.n, &cfg.t);
        if hit || cfg.verbose {
            let sig = element_signature(a, b, &nf, &mut table);
            records.push(make_record(cfg, QInt::new(cfg.ring, a, b), norm, hit, sig)?);
        }
    }
    Ok(TaskResult {
        task: k,
        visited: elems.len() as u64,
        records,
    })
}

fn make_record(cfg: &SearchConfig, z: QInt, norm: u64, hit: bool, sig: Signature) -> Result<SearchRecord> {
    let n = cfg.n as i64;
    let value = i_star(&z, n)?;
    if value.eq_rational(&cfg.t) != hit || value != sig.i_star(n) {
        return Err(Error::Internal(format!("shape test and product formula disagree at {z}")));
    }
    if hit && i_star_divisor_sum(&z, n)? != value {
        return Err(Error::Internal(format!("divisor-sum oracle rejects hit {z}")));
    }
    debug_assert_eq!(z.norm().to_u64(), Some(norm));
    Ok(SearchRecord {
        z,
        norm: BigUint::from(norm),
        value,
        hit,
        signature: Some(sig),
    })
}
