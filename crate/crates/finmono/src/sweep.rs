//! Checkpointed sweeps.
//!
//! The checkpoint is JSON lines: a header carrying the sha256 of the
//! canonical config, then one record per finished `(p, D)` in completion
//! order. Resuming re-reads it, drops a torn last line, refuses a header
//! whose digest differs, and runs only the missing pairs. The final result
//! file is sorted by `(p, D)` and holds no timing, so it is byte-identical
//! however the run was split or parallelized.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use finmono_core::digit_criterion::{kubert_classify, DepthScanner};
use finmono_core::search::{sweep_record, SweepConfig, SweepRecord, SweepResult};

use crate::metadata::sha256_hex;
use crate::parallel::with_jobs;
use crate::report::{kubert_tag, RecordOut};
use crate::{Error, Result};

const CHECKPOINT_KIND: &str = "finmono-sweep-checkpoint";
const RESULT_KIND: &str = "finmono-sweep-result";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConfigOut {
    pub primes: Vec<u64>,
    pub d_max: u64,
    pub depth: u32,
}

impl From<&SweepConfig> for ConfigOut {
    fn from(c: &SweepConfig) -> Self {
        let mut primes = c.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        ConfigOut {
            primes,
            d_max: c.d_max,
            depth: c.depth,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    kind: String,
    digest: String,
    config: ConfigOut,
}

pub fn config_digest(config: &SweepConfig) -> String {
    let canonical = serde_json::to_string(&ConfigOut::from(config)).expect("config serializes");
    sha256_hex(canonical.as_bytes())
}

#[derive(Clone, Debug, Default)]
pub struct SweepJob {
    pub checkpoint: Option<PathBuf>,
    pub jobs: Option<usize>,
    /// Stop after this many new pairs, leaving the rest to a resume.
    pub max_items: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum SweepOutcome {
    Complete(SweepResult),
    Partial { done: usize, total: usize },
}

fn checkpoint_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Checkpoint {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Reads finished records and returns the file opened for appending.
fn open_checkpoint(
    path: &Path,
    config: &SweepConfig,
    done: &mut BTreeMap<(u64, u64), SweepRecord>,
) -> Result<File> {
    let digest = config_digest(config);
    let text = match std::fs::read(path) {
        Ok(bytes) => String::from_utf8(bytes).map_err(|_| checkpoint_error(path, "not UTF-8"))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(Error::io(path, e)),
    };
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let mut lines = complete.lines();
    let header_ok = match lines.next() {
        None => false,
        Some(first) => {
            let header: Header = serde_json::from_str(first)
                .map_err(|e| checkpoint_error(path, format!("bad header: {e}")))?;
            if header.kind != CHECKPOINT_KIND {
                return Err(checkpoint_error(path, format!("not a sweep checkpoint ({})", header.kind)));
            }
            if header.digest != digest {
                return Err(checkpoint_error(
                    path,
                    format!(
                        "config mismatch: checkpoint was written for {} (digest {}), this run is {} (digest {digest}); refusing to resume",
                        serde_json::to_string(&header.config).unwrap_or_default(),
                        header.digest,
                        serde_json::to_string(&ConfigOut::from(config)).unwrap_or_default(),
                    ),
                ));
            }
            true
        }
    };
    let wanted: std::collections::BTreeSet<_> = config.work_items().into_iter().collect();
    for (i, line) in lines.enumerate() {
        let rec: RecordOut = serde_json::from_str(line)
            .map_err(|e| checkpoint_error(path, format!("line {}: {e}", i + 2)))?;
        let kubert = kubert_classify(rec.p, rec.d);
        if !wanted.contains(&(rec.p, rec.d)) || kubert_tag(kubert) != rec.kubert {
            return Err(checkpoint_error(path, format!("line {}: unexpected record", i + 2)));
        }
        done.insert(
            (rec.p, rec.d),
            SweepRecord {
                p: rec.p,
                d: rec.d,
                kubert,
                survived_depth: rec.survived_depth,
                failing_depth: rec.failing_depth,
                witness: rec.witness,
            },
        );
    }
    let file = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let keep = if header_ok { complete.len() } else { 0 };
    file.set_len(keep as u64).map_err(|e| Error::io(path, e))?;
    drop(file);
    let mut file = OpenOptions::new().append(true).open(path).map_err(|e| Error::io(path, e))?;
    if !header_ok {
        let header = Header {
            kind: CHECKPOINT_KIND.into(),
            digest,
            config: config.into(),
        };
        let line = serde_json::to_string(&header).expect("header serializes");
        writeln!(file, "{line}").map_err(|e| Error::io(path, e))?;
    }
    Ok(file)
}

/// Runs (or resumes) a sweep.
pub fn run_sweep(config: &SweepConfig, job: &SweepJob) -> Result<SweepOutcome> {
    config.validate()?;
    let items = config.work_items();
    let mut done = BTreeMap::new();
    let writer = match &job.checkpoint {
        Some(path) => Some((Mutex::new(open_checkpoint(path, config, &mut done)?), path.as_path())),
        None => None,
    };
    let remaining: Vec<_> = items.iter().copied().filter(|k| !done.contains_key(k)).collect();
    let take = job.max_items.map_or(remaining.len(), |m| m.min(remaining.len()));
    let depth = config.depth;
    let fresh = with_jobs(job.jobs, || {
        remaining[..take]
            .par_iter()
            .map(|&(p, d)| {
                let rec = sweep_record(p, d, depth, DepthScanner::scan)?;
                if let Some((file, path)) = &writer {
                    let line = serde_json::to_string(&RecordOut::from(&rec)).expect("record serializes");
                    let mut f = file.lock().expect("checkpoint lock");
                    writeln!(f, "{line}").and_then(|_| f.flush()).map_err(|e| Error::io(path, e))?;
                }
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    for rec in fresh {
        done.insert((rec.p, rec.d), rec);
    }
    if done.len() < items.len() {
        return Ok(SweepOutcome::Partial {
            done: done.len(),
            total: items.len(),
        });
    }
    let result = SweepResult::from_records(config.clone(), done.into_values().collect())?;
    Ok(SweepOutcome::Complete(result))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrimeSummary {
    pub p: u64,
    pub pairs: usize,
    pub non_kubert_survivors: Vec<u64>,
    pub kubert_survivors: Vec<u64>,
    pub failed_kubert: Vec<u64>,
}

pub fn summarize(result: &SweepResult) -> Vec<PrimeSummary> {
    ConfigOut::from(&result.config)
        .primes
        .into_iter()
        .map(|p| PrimeSummary {
            p,
            pairs: result.records.iter().filter(|r| r.p == p).count(),
            non_kubert_survivors: result.non_kubert_survivors(p),
            kubert_survivors: result.kubert_survivors(p),
            failed_kubert: result
                .failed_kubert()
                .into_iter()
                .filter(|&(q, _)| q == p)
                .map(|(_, d)| d)
                .collect(),
        })
        .collect()
}

#[derive(Serialize)]
struct ResultHeader {
    kind: &'static str,
    digest: String,
    config: ConfigOut,
    note: String,
    summary: Vec<PrimeSummary>,
}

/// The result file: a summary line, then one line per `(p, D)` in order.
pub fn result_jsonl(result: &SweepResult) -> String {
    let header = ResultHeader {
        kind: RESULT_KIND,
        digest: config_digest(&result.config),
        config: (&result.config).into(),
        note: format!(
            "criterion checked at depths 1..={}; survival is depth-bounded evidence",
            result.config.depth
        ),
        summary: summarize(result),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for rec in &result.records {
        out.push_str(&serde_json::to_string(&RecordOut::from(rec)).expect("record serializes"));
        out.push('\n');
    }
    out
}
