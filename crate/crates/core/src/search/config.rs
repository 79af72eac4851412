use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ring::RingId;

/// Largest accepted `max_norm`; the signature engine sieves up to it.
pub const MAX_NORM_CAP: u64 = 100_000_000;

pub const DEFAULT_CHUNK: u64 = 1 << 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Elements,
    Signatures,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Elements => "elements",
            SearchMode::Signatures => "signatures",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elements" => Ok(SearchMode::Elements),
            "signatures" => Ok(SearchMode::Signatures),
            _ => Err(Error::parse(s, "expected 'elements' or 'signatures'")),
        }
    }
}

/// Search for `z ∈ A(d)` with `2 ≤ N(z) ≤ max_norm` and `I*_n(z) = t`.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub ring: RingId,
    pub n: u32,
    pub t: BigRational,
    pub max_norm: u64,
    pub mode: SearchMode,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// Norms per task in elements mode.
    pub chunk: u64,
    /// Emit non-hit records as well.
    pub verbose: bool,
    /// Stop after this many newly completed tasks, leaving the checkpoint
    /// for a later resume.
    pub stop_after_tasks: Option<usize>,
}

impl SearchConfig {
    pub fn new(ring: RingId, n: u32, t: BigRational, max_norm: u64, mode: SearchMode) -> Result<Self> {
        let cfg = SearchConfig {
            ring,
            n,
            t,
            max_norm,
            mode,
            jobs: 1,
            checkpoint: None,
            chunk: DEFAULT_CHUNK,
            verbose: false,
            stop_after_tasks: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("power must be at least 1".into()));
        }
        if self.t <= BigRational::one() {
            return Err(Error::Config(format!(
                "target must exceed 1 (got {}); only units have I* = 1",
                self.t
            )));
        }
        if self.max_norm < 2 {
            return Err(Error::Config("max norm must be at least 2".into()));
        }
        if self.max_norm > MAX_NORM_CAP {
            return Err(Error::Config(format!("max norm is capped at {MAX_NORM_CAP}")));
        }
        if self.chunk == 0 || self.jobs == 0 {
            return Err(Error::Config("chunk and jobs must be positive".into()));
        }
        Ok(())
    }
}
