use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::radical::RadicalValue;
use crate::ring::{QInt, RingId};
use crate::search::shape::Signature;

/// One visited candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRecord {
    pub z: QInt,
    pub norm: BigUint,
    /// `I*_n(z)`
    pub value: RadicalValue,
    pub hit: bool,
    /// Factorization shape of `z`.
    pub signature: Option<Signature>,
}

impl SearchRecord {
    /// `{"z", "norm", "istar", "hit"}` plus `"signature"` when known.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "z": self.z.to_string(),
            "norm": norm_json(&self.norm),
            "istar": self.value.to_json(),
            "hit": self.hit,
        });
        if let Some(s) = &self.signature {
            v["signature"] = Value::String(s.to_string());
        }
        v
    }

    pub fn from_json(ring: RingId, v: &Value) -> Result<Self> {
        let bad = |why: &str| Error::parse(&v.to_string(), why);
        let z = QInt::parse(ring, v["z"].as_str().ok_or_else(|| bad("missing z"))?)?;
        let norm: BigUint = match &v["norm"] {
            Value::Number(n) => n.to_string().parse().map_err(|_| bad("bad norm"))?,
            Value::String(s) => s.parse().map_err(|_| bad("bad norm"))?,
            _ => return Err(bad("missing norm")),
        };
        let value = RadicalValue::from_json(&v["istar"])?;
        let hit = v["hit"].as_bool().ok_or_else(|| bad("missing hit"))?;
        let signature = match v.get("signature") {
            Some(Value::String(s)) => Some(s.parse()?),
            None => None,
            _ => return Err(bad("bad signature")),
        };
        Ok(SearchRecord { z, norm, value, hit, signature })
    }

    pub fn csv_header() -> [&'static str; 5] {
        ["z", "norm", "istar", "hit", "signature"]
    }

    pub fn csv_fields(&self) -> [String; 5] {
        [
            self.z.to_string(),
            self.norm.to_string(),
            self.value.to_string(),
            self.hit.to_string(),
            self.signature.as_ref().map(|s| s.to_string()).unwrap_or_default(),
        ]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{}  N={}  I*={}{}",
            self.z.pretty(),
            self.norm,
            self.value,
            if self.hit { "  hit" } else { "" }
        );
        if let Some(sig) = &self.signature {
            s.push_str(&format!("  [{sig}]"));
        }
        s
    }
}

/// Norms that fit a `u64` are JSON numbers, larger ones strings.
pub(crate) fn norm_json(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}
