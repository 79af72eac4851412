//! Resumable progress files, one JSON object per line:
//!
//! ```text
//! {"checkpoint_version":1,"mode":...,"ring":...,...,"total_tasks":N}
//! {"task":k,"visited":v,"records":[...]}        one per finished task
//! {"footer":{"tasks":m}}                         m = number of task lines
//! ```
//!
//! The file is rewritten through a temporary file and a rename, so a reader
//! sees either the old or the new contents. A missing or inconsistent footer
//! means the file was damaged outside this program.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::RingId;
use crate::search::record::SearchRecord;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub checkpoint_version: u32,
    pub mode: String,
    pub ring: i64,
    pub power: u32,
    pub target: String,
    pub max_norm: u64,
    pub chunk: u64,
    pub verbose: bool,
    pub total_tasks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskResult {
    pub task: usize,
    pub visited: u64,
    pub records: Vec<SearchRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub done: BTreeMap<usize, TaskResult>,
}

impl Checkpoint {
    pub fn new(header: CheckpointHeader) -> Self {
        Checkpoint {
            header,
            done: BTreeMap::new(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        serde_json::to_writer(&mut buf, &self.header).map_err(|e| Error::Internal(e.to_string()))?;
        buf.push(b'\n');
        for r in self.done.values() {
            let line = json!({
                "task": r.task,
                "visited": r.visited,
                "records": r.records.iter().map(SearchRecord::to_json).collect::<Vec<_>>(),
            });
            serde_json::to_writer(&mut buf, &line).map_err(|e| Error::Internal(e.to_string()))?;
            buf.push(b'\n');
        }
        writeln!(buf, "{}", json!({"footer": {"tasks": self.done.len()}}))?;
        let tmp = tmp_path(path);
        fs::write(&tmp, &buf)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `Ok(None)` when no file exists yet.
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |why: String| Error::CheckpointCorrupt(format!("{}: {why}", path.display()));
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
        let head: Value = serde_json::from_str(first).map_err(|e| corrupt(e.to_string()))?;
        match head.get("checkpoint_version").and_then(Value::as_u64) {
            Some(v) if v == CHECKPOINT_VERSION as u64 => {}
            Some(v) => {
                return Err(Error::CheckpointVersion {
                    found: v,
                    expected: CHECKPOINT_VERSION as u64,
                })
            }
            None => return Err(corrupt("missing checkpoint_version".into())),
        }
        let header: CheckpointHeader = serde_json::from_value(head).map_err(|e| corrupt(e.to_string()))?;
        let ring = RingId::new(header.ring).map_err(|e| corrupt(e.to_string()))?;
        let mut done = BTreeMap::new();
        let mut footer = None;
        for line in lines {
            if footer.is_some() {
                return Err(corrupt("content after footer".into()));
            }
            let v: Value = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
            if let Some(f) = v.get("footer") {
                footer = Some(f["tasks"].as_u64().ok_or_else(|| corrupt("bad footer".into()))?);
                continue;
            }
            let task = v["task"].as_u64().ok_or_else(|| corrupt("task line without index".into()))? as usize;
            if task >= header.total_tasks || done.contains_key(&task) {
                return Err(corrupt(format!("unexpected task index {task}")));
            }
            let visited = v["visited"].as_u64().ok_or_else(|| corrupt("missing visited".into()))?;
            let records = v["records"]
                .as_array()
                .ok_or_else(|| corrupt("missing records".into()))?
                .iter()
                .map(|r| SearchRecord::from_json(ring, r))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| corrupt(e.to_string()))?;
            done.insert(task, TaskResult { task, visited, records });
        }
        match footer {
            Some(n) if n as usize == done.len() => Ok(Some(Checkpoint { header, done })),
            Some(n) => Err(corrupt(format!("footer counts {n} tasks, found {}", done.len()))),
            None => Err(corrupt("missing footer (truncated?)".into())),
        }
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical::RadicalValue;
    use crate::ring::QInt;
    use num_bigint::BigUint;

    fn sample() -> Checkpoint {
        let header = CheckpointHeader {
            checkpoint_version: CHECKPOINT_VERSION,
            mode: "elements".into(),
            ring: -1,
            power: 2,
            target: "2".into(),
            max_norm: 1000,
            chunk: 100,
            verbose: false,
            total_tasks: 10,
        };
        let mut c = Checkpoint::new(header);
        let r = RingId::new(-1).unwrap();
        let rec = SearchRecord {
            z: QInt::from_int(r, 30),
            norm: BigUint::from(900u32),
            value: RadicalValue::from_rational(num_rational::BigRational::from_integer(2.into())),
            hit: true,
            signature: None,
        };
        c.done.insert(9, TaskResult { task: 9, visited: 77, records: vec![rec] });
        c.done.insert(0, TaskResult { task: 0, visited: 12, records: vec![] });
        c
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        assert_eq!(Checkpoint::load(&path).unwrap(), None);
        let c = sample();
        c.save(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap(), Some(c));
        assert!(!tmp_path(&path).exists());
    }

    #[test]
    fn truncation_and_version_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        sample().save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        for cut in [text.len() - 5, text.rfind("{\"footer").unwrap(), 10, 0] {
            fs::write(&path, &text[..cut]).unwrap();
            assert!(
                matches!(Checkpoint::load(&path), Err(Error::CheckpointCorrupt(_))),
                "cut at {cut}"
            );
        }
        fs::write(&path, text.replace("\"checkpoint_version\":1", "\"checkpoint_version\":7")).unwrap();
        assert!(matches!(
            Checkpoint::load(&path),
            Err(Error::CheckpointVersion { found: 7, expected: 1 })
        ));
    }
}
