//! Depth-first search over factorization shapes with branch-and-bound.
//!
//! A slot is an integer prime together with the cheapest norm it can add:
//! `p` for ramified and split primes, `p²` for inert primes, and `p²` for
//! every prime when `n` is odd, since a prime of absolute value `√p` must
//! then appear to an even power for `I*_n` to be rational. Slots are visited
//! in increasing cost, which keeps every suffix of slots sorted too.
//!
//! Pruning, with `v` the running value of `Π (1 + |π|^(−αn))`:
//! - `v > t`: adding factors only increases `v`;
//! - `v · B < t`, where `B` is the largest gain any affordable set of later
//!   slots could give. Gains and costs are both monotone in slot order, so
//!   `B` is the product over the longest affordable run of cheapest items.
//!
//! Floating point only decides pruning, with a safety margin; hits are
//! decided by the exact test in [`components_hit`].

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::primes::{classify_u64, PrimeKind};
use crate::search::checkpoint::TaskResult;
use crate::search::config::SearchConfig;
use crate::search::record::SearchRecord;
use crate::search::shape::{components_hit, primes_up_to, Signature, SlotShape};
use crate::udf::{i_star, i_star_divisor_sum};

const MARGIN: f64 = 1e-9;

/// Number of leading slots that get a task each; later ones are grouped.
const SINGLE_TASKS: usize = 32;

#[derive(Clone, Debug)]
struct Slot {
    p: u64,
    kind: PrimeKind,
    /// Exponent step: 2 for `√p` primes when `n` is odd.
    step: u32,
    cost: u64,
}

pub(crate) struct Plan {
    n: u32,
    max_norm: u64,
    ln_t: f64,
    slots: Vec<Slot>,
    /// `item_start[j]`: index of slot `j`'s first item in the prefix arrays.
    item_start: Vec<usize>,
    cum_ln_cost: Vec<f64>,
    cum_ln_gain: Vec<f64>,
    /// Slot ranges, one per task.
    tasks: Vec<(usize, usize)>,
}

impl Plan {
    pub(crate) fn new(cfg: &SearchConfig) -> Self {
        let n = cfg.n;
        let odd = n % 2 == 1;
        let limit = if odd { cfg.max_norm.isqrt() } else { cfg.max_norm };
        let mut slots: Vec<Slot> = primes_up_to(limit)
            .into_iter()
            .filter_map(|p| {
                let kind = classify_u64(p, cfg.ring);
                let (step, cost) = match kind {
                    PrimeKind::Inert => (1, p.checked_mul(p)?),
                    _ if odd => (2, p.checked_mul(p)?),
                    _ => (1, p),
                };
                (cost <= cfg.max_norm).then_some(Slot { p, kind, step, cost })
            })
            .collect();
        slots.sort_by_key(|s| (s.cost, s.p));

        let mut item_start = Vec::with_capacity(slots.len() + 1);
        let mut cum_ln_cost = vec![0.0];
        let mut cum_ln_gain = vec![0.0];
        for s in &slots {
            item_start.push(cum_ln_cost.len() - 1);
            let copies = if s.kind == PrimeKind::Split { 2 } else { 1 };
            let ln_cost = (s.cost as f64).ln();
            let ln_gain = (-(n as f64) / 2.0 * ln_cost).exp().ln_1p();
            for _ in 0..copies {
                cum_ln_cost.push(cum_ln_cost.last().unwrap() + ln_cost);
                cum_ln_gain.push(cum_ln_gain.last().unwrap() + ln_gain);
            }
        }
        item_start.push(cum_ln_cost.len() - 1);

        let mut tasks = Vec::new();
        let mut start = 0;
        let mut width = 1;
        while start < slots.len() {
            let end = (start + width).min(slots.len());
            tasks.push((start, end));
            start = end;
            if tasks.len() >= SINGLE_TASKS {
                width *= 2;
            }
        }
        Plan {
            n,
            max_norm: cfg.max_norm,
            ln_t: crate::radical::ratio_to_f64(&cfg.t).ln(),
            slots,
            item_start,
            cum_ln_cost,
            cum_ln_gain,
            tasks,
        }
    }

    pub(crate) fn task_count(&self) -> usize {
        self.tasks.len()
    }

    /// Largest log-gain from slots `from..` within a norm budget.
    fn bound(&self, from: usize, budget: u64) -> f64 {
        let s = self.item_start[from];
        let total = self.cum_ln_cost.len() - 1;
        let ln_budget = (budget as f64).ln() + MARGIN;
        // largest k with cum_cost[s + k] - cum_cost[s] ≤ ln_budget
        let (mut lo, mut hi) = (0usize, total - s);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.cum_ln_cost[s + mid] - self.cum_ln_cost[s] <= ln_budget {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        self.cum_ln_gain[s + lo] - self.cum_ln_gain[s]
    }

    /// Choices for one slot within `budget`, in a fixed order.
    fn configs(&self, slot: &Slot, budget: u64) -> Vec<(SlotShape, u64, f64)> {
        let p = slot.p;
        let n = self.n as f64;
        let ln_p = (p as f64).ln();
        // ln(1 + |π|^(−αn)) for a factor of norm p^f
        let gain = |f: u32| (-(n / 2.0) * f as f64 * ln_p).exp().ln_1p();
        let pow = |e: u32| (p as u128).checked_pow(e).filter(|&c| c <= budget as u128).map(|c| c as u64);
        let mut out = Vec::new();
        let step = slot.step;
        match slot.kind {
            PrimeKind::Inert => {
                let mut a = 1;
                while let Some(c) = pow(2 * a) {
                    out.push((SlotShape::Inert(a), c, gain(2 * a)));
                    a += 1;
                }
            }
            PrimeKind::Ramified => {
                let mut a = step;
                while let Some(c) = pow(a) {
                    out.push((SlotShape::Ramified(a), c, gain(a)));
                    a += step;
                }
            }
            PrimeKind::Split => {
                let mut a = step;
                while let Some(c) = pow(a) {
                    out.push((SlotShape::SplitOne(a), c, gain(a)));
                    let mut b = step;
                    while b <= a {
                        match pow(a + b) {
                            Some(c2) => out.push((SlotShape::SplitBoth(a, b), c2, gain(a) + gain(b))),
                            None => break,
                        }
                        b += step;
                    }
                    a += step;
                }
            }
        }
        out
    }
}

struct Walker<'a> {
    plan: &'a Plan,
    cfg: &'a SearchConfig,
    path: Vec<(u64, SlotShape)>,
    visited: u64,
    /// Signatures to report, in DFS order, with their hit flag.
    emitted: Vec<(Signature, bool)>,
}

impl Walker<'_> {
    /// Children of the current node, taking slots from `next` on.
    fn visit(&mut self, norm: u64, ln_v: f64, next: usize, end: usize) {
        let plan = self.plan;
        let budget = plan.max_norm / norm;
        for j in next..end {
            let slot = &plan.slots[j];
            // both tests only get stronger as j grows
            if slot.cost > budget || ln_v + plan.bound(j, budget) < plan.ln_t - MARGIN {
                break;
            }
            for (shape, cost, ln_gain) in plan.configs(slot, budget) {
                self.step(norm * cost, ln_v + ln_gain, slot.p, shape, j + 1);
            }
        }
    }

    fn step(&mut self, norm: u64, ln_v: f64, p: u64, shape: SlotShape, next: usize) {
        self.visited += 1;
        self.path.push((p, shape));
        let near = (ln_v - self.plan.ln_t).abs() < MARGIN;
        if near || self.cfg.verbose {
            let mut entries = self.path.clone();
            entries.sort_by_key(|e| e.0);
            let sig = Signature::from_entries_unchecked(entries);
            let comps: Vec<_> = sig.components().collect();
            let hit = near && components_hit(&comps, self.cfg.n, &self.cfg.t);
            if hit || self.cfg.verbose {
                self.emitted.push((sig, hit));
            }
        }
        if ln_v <= self.plan.ln_t + MARGIN {
            self.visit(norm, ln_v, next, self.plan.slots.len());
        }
        self.path.pop();
    }
}

pub(crate) fn run_task(cfg: &SearchConfig, plan: &Plan, k: usize) -> Result<TaskResult> {
    let (start, end) = plan.tasks[k];
    let mut w = Walker {
        plan,
        cfg,
        path: Vec::new(),
        visited: 0,
        emitted: Vec::new(),
    };
    w.visit(1, 0.0, start, end);
    let mut records = Vec::new();
    for (sig, hit) in w.emitted {
        records.extend(make_records(cfg, sig, hit)?);
    }
    Ok(TaskResult {
        task: k,
        visited: w.visited,
        records,
    })
}

/// Every sector element of a hit signature, or one witness for a non-hit.
fn make_records(cfg: &SearchConfig, sig: Signature, hit: bool) -> Result<Vec<SearchRecord>> {
    let n = cfg.n as i64;
    let expected = sig.i_star(n);
    let witnesses = if hit { sig.materialize_all(cfg.ring)? } else { vec![sig.materialize(cfg.ring)?] };
    let mut out = Vec::with_capacity(witnesses.len());
    for z in witnesses {
        let value = i_star(&z, n)?;
        if value != expected || value.eq_rational(&cfg.t) != hit {
            return Err(Error::Internal(format!("witness {z} does not realize [{sig}]")));
        }
        if hit && i_star_divisor_sum(&z, n)? != value {
            return Err(Error::Internal(format!("divisor-sum oracle rejects hit {z}")));
        }
        let norm = z.norm().to_biguint().expect("nonnegative");
        debug_assert_eq!(norm, sig.norm());
        debug_assert!(norm.to_u64().is_some_and(|v| v <= cfg.max_norm));
        out.push(SearchRecord {
            z,
            norm,
            value,
            hit,
            signature: Some(sig.clone()),
        });
    }
    Ok(out)
}
