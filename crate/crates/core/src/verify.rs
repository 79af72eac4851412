//! Executable checks of structural results about unitarily perfect elements.
//!
//! Each check returns a [`CheckReport`]. Checks over hit lists take the
//! records as input, so they can run on saved search output; the `run_*`
//! helpers produce that output with a fresh search first.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factor::{factor_element, factor_int, Factorization};
use crate::primes::{prime_above_u64, xi, PrimeWitness};
use crate::ring::{QInt, RingId};
use crate::search::{run_search, sector_elements, SearchConfig, SearchMode, SearchRecord};
use crate::udf::{i_star, sigma_star_int, sigma_star_table, zeta_bound_check};

/// Keep this many conforming cases as illustrations.
const MAX_WITNESSES: usize = 8;

/// Largest sweep bound accepted for the `U(b)` enumeration.
pub const MAX_U_BOUND: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportStatus {
    /// No case met the hypotheses, so nothing was asserted.
    Vacuous,
    Checked,
    Failed,
}

impl ReportStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Vacuous => "vacuous",
            ReportStatus::Checked => "checked",
            ReportStatus::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub theorem: String,
    pub population: Value,
    /// Cases that met the hypotheses and were checked.
    pub checked: usize,
    /// Cases outside the hypotheses (e.g. `3 | N(z)`), not checked.
    pub skipped: usize,
    pub violations: Vec<Value>,
    pub witnesses: Vec<Value>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(theorem: &str, population: Value) -> Self {
        CheckReport {
            theorem: theorem.into(),
            population,
            checked: 0,
            skipped: 0,
            violations: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn witness(&mut self, v: Value) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(v);
        }
    }

    pub fn status(&self) -> ReportStatus {
        if !self.violations.is_empty() {
            ReportStatus::Failed
        } else if self.checked == 0 {
            ReportStatus::Vacuous
        } else {
            ReportStatus::Checked
        }
    }

    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem,
            "status": self.status().as_str(),
            "population": self.population,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "witnesses": self.witnesses,
            "notes": self.notes,
        })
    }
}

fn norm_u(z: &QInt) -> BigUint {
    z.norm().to_biguint().expect("norms are nonnegative")
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Confirms `I*_n(z) = t`; a record that claims a hit without being one is
/// reported instead of checked.
fn premise(z: &QInt, n: i64, t: &BigRational) -> Result<bool> {
    Ok(i_star(z, n)?.eq_rational(t))
}

/// Hits for one `(ring, n, t)` up to `max_norm`.
pub fn collect_hits(
    ring: RingId,
    n: u32,
    t: BigRational,
    max_norm: u64,
    mode: SearchMode,
    jobs: usize,
) -> Result<Vec<SearchRecord>> {
    let mut cfg = SearchConfig::new(ring, n, t, max_norm, mode)?;
    cfg.jobs = jobs;
    Ok(run_search(&cfg)?.records.into_iter().filter(|r| r.hit).collect())
}

/// Every hit has even norm.
pub fn check_even_norm(population: Value, hits: &[SearchRecord]) -> CheckReport {
    let mut rep = CheckReport::new("thm2.2", population);
    for r in hits.iter().filter(|r| r.hit) {
        rep.checked += 1;
        let entry = json!({"z": r.z.to_string(), "d": r.z.ring().d(), "norm": r.norm.to_string()});
        if r.norm.is_even() {
            rep.witness(entry);
        } else {
            rep.violations.push(entry);
        }
    }
    rep
}

/// Searches `n ∈ ns`, `t ∈ ts` in each ring and checks the norms of all hits.
pub fn run_even_norm(rings: &[RingId], ns: &[u32], ts: &[i64], max_norm: u64, jobs: usize) -> Result<CheckReport> {
    let mut hits = Vec::new();
    for &ring in rings {
        for &n in ns {
            for &t in ts {
                hits.extend(collect_hits(ring, n, int(t), max_norm, SearchMode::Elements, jobs)?);
            }
        }
    }
    let population = json!({
        "rings": rings.iter().map(|r| r.d()).collect::<Vec<_>>(),
        "powers": ns,
        "targets": ts,
        "max_norm": max_norm,
    });
    Ok(check_even_norm(population, &hits))
}

/// `z = (1+i)^γ x` with `N(x)` odd, for `z` in `Z[i]`.
pub fn gaussian_split(z: &QInt) -> Result<(u32, QInt, Factorization)> {
    if z.ring().d() != -1 {
        return Err(Error::Config("the (1+i)-adic split needs d = -1".into()));
    }
    let one_plus_i = QInt::new(z.ring(), 1, 1);
    let gamma = factor_element(z)?.exponent_of(&one_plus_i);
    let x = z.exact_div(&one_plus_i.pow(gamma))?;
    let fx = factor_element(&x)?;
    Ok((gamma, x, fx))
}

/// Violations of "x has γ + υ₂(t) nonassociated prime divisors".
pub fn gaussian_count_violations(gamma: u32, x: &Factorization, t: &BigInt) -> Vec<String> {
    let mut out = Vec::new();
    let nx = x.reassemble().norm();
    if nx.is_even() {
        out.push(format!("N(x) = {nx} is even"));
    }
    let v2 = t.trailing_zeros().unwrap_or(0);
    let expected = gamma as u64 + v2;
    if x.len() as u64 != expected {
        out.push(format!("x has {} prime divisors, expected γ + υ₂(t) = {expected}", x.len()));
    }
    out
}

/// Prime-count identity for 2-powerfully unitarily `t`-perfect hits in `Z[i]`.
pub fn check_gaussian_count(t: &BigInt, hits: &[SearchRecord]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("thm2.3", json!({"d": -1, "power": 2, "target": t.to_string()}));
    rep.notes.push(
        "gamma is the exponent of 1+i in z; mu_half = gamma/2 is the exponent of 2 when gamma is even".into(),
    );
    let tq = BigRational::from_integer(t.clone());
    for r in hits.iter().filter(|r| r.hit) {
        let z = &r.z;
        if z.ring().d() != -1 || !premise(z, 2, &tq)? {
            rep.violations.push(json!({"z": z.to_string(), "reason": "not a 2-powerfully unitarily t-perfect element of Z[i]"}));
            continue;
        }
        rep.checked += 1;
        let (gamma, x, fx) = gaussian_split(z)?;
        let bad = gaussian_count_violations(gamma, &fx, t);
        let entry = json!({
            "z": z.to_string(),
            "gamma": gamma,
            "mu_half": (gamma % 2 == 0).then_some(gamma / 2),
            "x": x.to_string(),
            "prime_divisors_of_x": fx.len(),
            "v2_t": t.trailing_zeros().unwrap_or(0),
        });
        if bad.is_empty() {
            rep.witness(entry);
        } else {
            rep.violations.push(json!({"case": entry, "reasons": bad}));
        }
    }
    Ok(rep)
}

pub fn run_gaussian_count(t: i64, max_norm: u64, jobs: usize) -> Result<CheckReport> {
    let ring = RingId::new(-1)?;
    let hits = collect_hits(ring, 2, int(t), max_norm, SearchMode::Elements, jobs)?;
    let mut rep = check_gaussian_count(&BigInt::from(t), &hits)?;
    rep.population["max_norm"] = json!(max_norm);
    Ok(rep)
}

/// `I*_2` over `A(-3)` never has a numerator divisible by 3.
pub fn check_eisenstein_numerators(max_norm: u64, jobs: usize) -> Result<CheckReport> {
    let ring = RingId::new(-3)?;
    let mut rep = CheckReport::new("thm2.4", json!({"d": -3, "power": 2, "max_norm": max_norm}));
    let mut elems = vec![(1, 1, 0)];
    elems.extend(sector_elements(ring, 2, max_norm));
    let work = || {
        elems
            .par_iter()
            .map(|&(_, a, b)| -> Result<(QInt, Option<BigRational>)> {
                let z = QInt::new(ring, a, b);
                let v = i_star(&z, 2)?;
                Ok((z, v.as_rational()))
            })
            .collect::<Result<Vec<_>>>()
    };
    let values = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?
        .install(work)?;
    let three = BigInt::from(3);
    for (z, v) in values {
        rep.checked += 1;
        match v {
            None => rep.violations.push(json!({"z": z.to_string(), "reason": "irrational value"})),
            Some(q) if q.numer().is_multiple_of(&three) => {
                rep.violations.push(json!({"z": z.to_string(), "value": q.to_string()}))
            }
            Some(q) => rep.witness(json!({"z": z.to_string(), "value": q.to_string()})),
        }
    }
    Ok(rep)
}

/// The part of `z` above 2 and the odd cofactor, as used in the mod-6
/// conditions: `gammas = [γ]` with `z = 2^γ x`, or `[γ₁, γ₂]` with
/// `z = ε^γ₁ ε̄^γ₂ x` when `d = -7`.
pub fn two_split(z: &QInt) -> Result<(Vec<u32>, QInt, Factorization)> {
    let ring = z.ring();
    let f = factor_element(z)?;
    let (gammas, two_part) = match ring.d() {
        -7 => {
            let class = prime_above_u64(2, ring)?;
            let PrimeWitness::Split { pi, pi_bar } = class.witness else {
                return Err(Error::Internal("2 must split for d = -7".into()));
            };
            // ε = ω = (1+√-7)/2; its conjugate's canonical associate is the other prime
            let omega = QInt::omega(ring);
            let (eps, eps_bar) = if pi == omega { (pi, pi_bar) } else { (pi_bar, pi) };
            let (g1, g2) = (f.exponent_of(&eps), f.exponent_of(&eps_bar));
            (vec![g1, g2], &eps.pow(g1) * &eps_bar.pow(g2))
        }
        d => {
            let x = xi(ring)?;
            let mu = f.exponent_of(&x);
            let gamma = if d == -1 || d == -2 { mu / 2 } else { mu };
            if (d == -1 || d == -2) && mu % 2 == 1 {
                return Err(Error::Config(format!("exponent of {x} in {z} is odd")));
            }
            (vec![gamma], QInt::from_int(ring, 2).pow(gamma))
        }
    };
    let x = z.exact_div(&two_part)?;
    let fx = factor_element(&x)?;
    Ok((gammas, x, fx))
}

/// Violations of the mod-6 conditions for a decomposition of a
/// 2-powerfully unitarily perfect `z` with `3 ∤ N(z)`.
pub fn mod6_violations(ring: RingId, gammas: &[u32], x: &Factorization) -> Vec<String> {
    let mut out = Vec::new();
    let nx = x.reassemble().norm();
    if nx.is_even() {
        out.push(format!("N(x) = {nx} is even"));
    }
    let both = match gammas {
        [g] => {
            if *g == 0 {
                out.push("γ = 0".into());
            }
            false
        }
        [g1, g2] => {
            if g1 % 2 == 1 || g2 % 2 == 1 {
                out.push(format!("γ₁ = {g1}, γ₂ = {g2} not both even"));
            }
            if *g1 == 0 && *g2 == 0 {
                out.push("γ₁ = γ₂ = 0".into());
            }
            *g1 != 0 && *g2 != 0
        }
        _ => {
            out.push(format!("unexpected exponent list {gammas:?}"));
            false
        }
    };
    let six = BigInt::from(6);
    let mut has_five = false;
    for (pi, rho) in x.factors() {
        let np = pi.norm();
        if np.pow(*rho).mod_floor(&six) != BigInt::one() {
            out.push(format!("N({pi})^{rho} ≢ 1 (mod 6)"));
        }
        has_five |= np.mod_floor(&six) == BigInt::from(5);
    }
    if !has_five {
        out.push("no prime divisor of x has norm ≡ 5 (mod 6)".into());
    }
    let odd_expected = ring.d() == -7 && both;
    if (x.len() % 2 == 1) != odd_expected {
        let want = if odd_expected { "odd" } else { "even" };
        out.push(format!("x has {} nonassociated prime divisors, expected an {want} count", x.len()));
    }
    out
}

/// Mod-6 conditions on 2-powerfully unitarily perfect hits with `3 ∤ N(z)`.
pub fn check_mod6(ring: RingId, hits: &[SearchRecord]) -> Result<CheckReport> {
    let id = if ring.d() == -7 { "thm2.5-d7" } else { "thm2.5" };
    let mut rep = CheckReport::new(id, json!({"d": ring.d(), "power": 2, "target": "2"}));
    rep.notes.push("hypothesis read as 2-powerfully unitarily perfect (n = 2, t = 2) with 3 not dividing N(z)".into());
    let two = int(2);
    for r in hits.iter().filter(|r| r.hit) {
        let z = &r.z;
        if z.ring() != ring || !premise(z, 2, &two)? {
            rep.violations.push(json!({"z": z.to_string(), "reason": "not 2-powerfully unitarily perfect in this ring"}));
            continue;
        }
        if norm_u(z).is_multiple_of(&BigUint::from(3u32)) {
            rep.skipped += 1;
            continue;
        }
        rep.checked += 1;
        let entry = |gammas: &[u32], x: &QInt| json!({"z": z.to_string(), "gammas": gammas, "x": x.to_string()});
        match two_split(z) {
            Ok((gammas, x, fx)) => {
                // 4^γ + 1 ≡ 5 (mod 6) for γ ≥ 1
                debug_assert!(gammas.iter().all(|&g| g == 0 || (BigUint::from(4u32).pow(g) + 1u32) % 6u32 == BigUint::from(5u32)));
                let bad = mod6_violations(ring, &gammas, &fx);
                if bad.is_empty() {
                    rep.witness(entry(&gammas, &x));
                } else {
                    rep.violations.push(json!({"case": entry(&gammas, &x), "reasons": bad}));
                }
            }
            Err(Error::Config(why)) => rep.violations.push(json!({"z": z.to_string(), "reasons": [why]})),
            Err(e) => return Err(e),
        }
    }
    Ok(rep)
}

pub fn run_mod6(ring: RingId, max_norm: u64, jobs: usize) -> Result<CheckReport> {
    let hits = collect_hits(ring, 2, int(2), max_norm, SearchMode::Elements, jobs)?;
    let mut rep = check_mod6(ring, &hits)?;
    rep.population["max_norm"] = json!(max_norm);
    Ok(rep)
}

/// Multiplicative lift of `n` into `A(d)`: `p ↦ p` unless `p = ππ̄` splits,
/// then `p ↦` the sector associate of `π²`. Satisfies `|g(n)| = n`.
pub fn g_map(n: u64, ring: RingId) -> Result<QInt> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let f = factor_int(&BigUint::from(n))?;
    let mut z = QInt::one(ring);
    for (p, e) in f.factors() {
        let p = p.to_u64().expect("factor of a u64");
        let class = prime_above_u64(p, ring)?;
        let gp = match class.witness {
            PrimeWitness::Split { pi, .. } => pi.pow(2),
            _ => QInt::from_int(ring, p),
        };
        z = &z * &gp.pow(*e);
    }
    z.canonical()
}

/// `U(b) = {m ≤ bound : σ*(m) = b·m}` by a sieve, each member rechecked
/// from its factorization.
pub fn unitary_b_perfect(b: &BigRational, bound: u64) -> Result<Vec<u64>> {
    if bound > MAX_U_BOUND {
        return Err(Error::Config(format!("bound {bound} exceeds {MAX_U_BOUND}")));
    }
    let (num, den) = (b.numer(), b.denom());
    let (Some(num), Some(den)) = (num.to_u128(), den.to_u128()) else {
        return Ok(Vec::new());
    };
    let table = sigma_star_table(bound as usize, 1);
    let mut out = Vec::new();
    for (m, &s) in table.iter().enumerate().skip(1) {
        let m128 = m as u128;
        if s.checked_mul(den) == num.checked_mul(m128) && s.checked_mul(den).is_some() {
            let exact = sigma_star_int(&BigUint::from(m), 1)?;
            if BigRational::new(exact.into(), BigInt::from(m)) != *b {
                return Err(Error::Internal(format!("σ* sieve disagrees at {m}")));
            }
            out.push(m as u64);
        }
    }
    Ok(out)
}

/// `g` maps `U(b)` injectively into `{z ∈ A(d) : I*_1(z) = b}` in each ring.
pub fn check_lift(b: &BigRational, bound: u64, rings: &[RingId]) -> Result<CheckReport> {
    let mut rep = CheckReport::new(
        "thm2.6",
        json!({"b": b.to_string(), "bound": bound, "rings": rings.iter().map(|r| r.d()).collect::<Vec<_>>()}),
    );
    if *b <= BigRational::one() {
        return Err(Error::Config("b must exceed 1".into()));
    }
    let u = unitary_b_perfect(b, bound)?;
    rep.notes.push(format!("U(b) below the bound: {u:?}"));
    for &ring in rings {
        let mut images = BTreeSet::new();
        for &m in &u {
            rep.checked += 1;
            let z = g_map(m, ring)?;
            let value = i_star(&z, 1)?;
            let entry = json!({"d": ring.d(), "n": m, "g": z.to_string(), "istar": value.to_json()});
            let mut bad = Vec::new();
            if !value.eq_rational(b) {
                bad.push(format!("I*_1(g({m})) = {value}"));
            }
            if norm_u(&z) != BigUint::from(m).pow(2) {
                bad.push(format!("|g({m})| ≠ {m}"));
            }
            if !images.insert((z.a().clone(), z.b().clone())) {
                bad.push(format!("g({m}) repeats an earlier image"));
            }
            if bad.is_empty() {
                rep.witness(entry);
            } else {
                rep.violations.push(json!({"case": entry, "reasons": bad}));
            }
        }
    }
    Ok(rep)
}

/// Certified enclosures of the four zeta-quotient constants.
pub fn check_zeta() -> CheckReport {
    let z = zeta_bound_check();
    let mut rep = CheckReport::new("zeta", json!({"terms": z.terms}));
    for b in &z.bounds {
        rep.checked += 1;
        let entry = json!({"label": b.label, "lo": b.enclosure.lo, "hi": b.enclosure.hi, "limit": b.limit, "width": b.enclosure.width()});
        if b.passes() {
            rep.witness(entry);
        } else {
            rep.violations.push(entry);
        }
    }
    rep.notes.push(format!("max width {:e}", z.max_width()));
    rep
}

/// Build a fake record for negative tests and hand-written inputs.
pub fn pseudo_hit(z: QInt) -> SearchRecord {
    SearchRecord {
        norm: norm_u(&z),
        value: crate::radical::RadicalValue::zero(),
        hit: true,
        signature: None,
        z,
    }
}
