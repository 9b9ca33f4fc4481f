//! Tree survey: eigenvalue screens, strong-cospectrality structure, and
//! transfer sweeps over every free tree in a vertex range, persisted as
//! resumable JSONL.
//!
//! Structural expectations are recorded as violations in the output rather
//! than enforced by assertion: a nonempty violation list would falsify the
//! engine and has to surface as data, not a crash.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{rat_int, Rational};
use crate::graphs::{generate_trees, Bipartition, FreeTree};
use crate::spectra::{cospectral_classes, graph_spectrum, sc_classify, ScOutcome, SpectraError};
use crate::transfer::{pst_from_classification, PstOutcome};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("input graph is not a tree")]
    NotATree,
    #[error("the survey covers trees on at least two vertices; got {0}")]
    OrderTooSmall(usize),
    #[error("invalid range: need 2 <= n_min <= n_max, got {n_min}..={n_max}")]
    InvalidRange { n_min: usize, n_max: usize },
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error(
        "{} holds {len} bytes of unfinished records after the last aggregate; \
         pass the truncate flag to drop them and resume", path.display()
    )]
    TrailingData { path: PathBuf, len: u64 },
    #[error("{} line {line} is not census JSONL: {reason}", path.display())]
    Corrupt {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// One strongly cospectral pair, `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScPairRecord {
    pub a: usize,
    pub b: usize,
    pub same_class: bool,
    pub s_plus_size: usize,
    pub s_minus_size: usize,
    pub twin_leaves: bool,
    pub pst: bool,
    /// Reduced `c` with transfer time `c*pi`; absent without transfer.
    pub tau_pi_coeff: Option<String>,
}

/// A structural expectation that failed, kept as data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub idx: usize,
    pub a: usize,
    pub b: usize,
    pub rule: String,
}

/// Survey result for one tree; one JSONL line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub n: usize,
    pub idx: usize,
    pub levelseq: Vec<usize>,
    /// Rational eigenvalues of form 2/k, k odd >= 3, ascending.
    pub screened: Vec<String>,
    pub sc_pairs: Vec<ScPairRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationRecord>,
}

impl TreeRecord {
    /// Pairs admitting perfect state transfer.
    pub fn pst_pairs(&self) -> Vec<(usize, usize)> {
        self.sc_pairs
            .iter()
            .filter(|p| p.pst)
            .map(|p| (p.a, p.b))
            .collect()
    }
}

/// Per-n totals; one JSONL line, written after the n's records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NAggregate {
    pub n: usize,
    pub trees: usize,
    pub screened_trees: usize,
    pub sc_pair_total: usize,
    pub pst_pair_total: usize,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub aggregates: Vec<NAggregate>,
}

/// Eigenvalues of the screened form among the rational roots: reduced
/// numerator 2 with denominator at least 3. Reducedness forces the
/// denominator odd, which is the form in question.
fn screened_roots(roots: &BTreeMap<Rational, usize>) -> Vec<String> {
    roots
        .keys()
        .filter(|r| {
            *r.numer() == 2.into() && *r.denom() >= 3.into() && {
                debug_assert!(r.denom() % 2 == 1.into());
                true
            }
        })
        .map(|r| r.to_string())
        .collect()
}

fn twin_leaves(g: &crate::graphs::Graph, a: usize, b: usize) -> bool {
    g.degree(a) == 1 && g.degree(b) == 1 && g.neighbors(a)[0] == g.neighbors(b)[0]
}

/// Expectation checks for one strongly cospectral pair. `s_minus_two` says
/// S⁻ is exactly {2}.
fn pair_violations(
    n: usize,
    idx: usize,
    pair: &ScPairRecord,
    s_minus_two: bool,
) -> Vec<ViolationRecord> {
    let mut out = Vec::new();
    let mut push = |rule: &str| {
        out.push(ViolationRecord {
            idx,
            a: pair.a,
            b: pair.b,
            rule: rule.to_string(),
        })
    };
    if n >= 3 && (pair.s_plus_size < 2 || pair.s_minus_size < 1) {
        push("support_size");
    }
    if pair.same_class && pair.s_minus_size == 1 && !pair.twin_leaves {
        push("same_class_twin_leaves");
    }
    if pair.same_class && pair.pst && pair.s_minus_size != 1 {
        push("same_class_pst_s_minus");
    }
    if n > 2 && pair.pst && !pair.same_class && s_minus_two {
        push("different_class_pst_two");
    }
    out
}

/// Full survey of one tree: rational-spectrum screen, strongly cospectral
/// pairs with their signed supports, transfer verdicts, expectation checks.
pub fn screen_tree(tree: &FreeTree, idx: usize) -> Result<TreeRecord, CensusError> {
    let g = &tree.graph;
    let n = g.n();
    if n < 2 {
        return Err(CensusError::OrderTooSmall(n));
    }
    if !g.is_tree() {
        return Err(CensusError::NotATree);
    }
    let (roots, _) = graph_spectrum(g)?;
    let screened = screened_roots(&roots);

    let classes = match g.bipartition() {
        Bipartition::Classes(c) => c,
        Bipartition::OddCycle(_) => unreachable!("trees are bipartite"),
    };
    let two: BTreeSet<Rational> = [rat_int(2)].into();

    let mut sc_pairs = Vec::new();
    let mut violations = Vec::new();
    for class in cospectral_classes(g) {
        for (i, &a) in class.iter().enumerate() {
            for &b in &class[i + 1..] {
                let cls = match sc_classify(g, a, b)? {
                    ScOutcome::Classified(cls) => cls,
                    ScOutcome::DegreeMismatch { .. } | ScOutcome::SharedFactor(_) => continue,
                };
                let s_minus_two = cls.s_minus.is_rational() && cls.s_minus.rational == two;
                let (s_plus_size, s_minus_size) = (cls.s_plus.size(), cls.s_minus.size());
                let (pst, tau_pi_coeff) = match pst_from_classification(cls) {
                    PstOutcome::Pst(cert) => (true, Some(cert.tau_pi.to_string())),
                    PstOutcome::NoPst { .. } => (false, None),
                };
                let pair = ScPairRecord {
                    a,
                    b,
                    same_class: classes[a] == classes[b],
                    s_plus_size,
                    s_minus_size,
                    twin_leaves: twin_leaves(g, a, b),
                    pst,
                    tau_pi_coeff,
                };
                violations.extend(pair_violations(n, idx, &pair, s_minus_two));
                sc_pairs.push(pair);
            }
        }
    }
    sc_pairs.sort_by_key(|p| (p.a, p.b));
    Ok(TreeRecord {
        n,
        idx,
        levelseq: tree.levelseq.clone(),
        screened,
        sc_pairs,
        violations,
    })
}

fn aggregate_of(n: usize, records: &[TreeRecord]) -> NAggregate {
    NAggregate {
        n,
        trees: records.len(),
        screened_trees: records.iter().filter(|r| !r.screened.is_empty()).count(),
        sc_pair_total: records.iter().map(|r| r.sc_pairs.len()).sum(),
        pst_pair_total: records
            .iter()
            .map(|r| r.sc_pairs.iter().filter(|p| p.pst).count())
            .sum(),
        violations: records.iter().flat_map(|r| r.violations.clone()).collect(),
    }
}

#[cfg(feature = "parallel")]
fn screen_level(
    trees: &[FreeTree],
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<TreeRecord>, CensusError> {
    use rayon::prelude::*;
    let work = || {
        trees
            .par_iter()
            .enumerate()
            .map(|(idx, t)| screen_tree(t, idx))
            .collect()
    };
    match pool {
        Some(p) => p.install(work),
        None => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn screen_level(trees: &[FreeTree], _pool: Option<&()>) -> Result<Vec<TreeRecord>, CensusError> {
    trees
        .iter()
        .enumerate()
        .map(|(idx, t)| screen_tree(t, idx))
        .collect()
}

/// Positions already present in a JSONL file: finished aggregates and the
/// byte offset right after the last one.
struct ResumeState {
    completed: BTreeMap<usize, NAggregate>,
    offset: u64,
}

fn scan_existing(path: &Path) -> Result<ResumeState, CensusError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            return Ok(ResumeState {
                completed: BTreeMap::new(),
                offset: 0,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut completed = BTreeMap::new();
    let mut offset = 0u64;
    let mut consumed = 0u64;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        consumed += line.len() as u64;
        if !line.ends_with('\n') {
            break; // partial tail; anything past `offset` is reported below
        }
        let value: serde_json::Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(_) if consumed > offset => break, // unreadable tail, same treatment
            Err(e) => {
                return Err(CensusError::Corrupt {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    reason: e.to_string(),
                })
            }
        };
        if value.get("trees").is_some() {
            let agg: NAggregate =
                serde_json::from_value(value).map_err(|e| CensusError::Corrupt {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    reason: e.to_string(),
                })?;
            completed.insert(agg.n, agg);
            offset = consumed;
        } else if value.get("idx").is_none() {
            return Err(CensusError::Corrupt {
                path: path.to_path_buf(),
                line: lineno + 1,
                reason: "neither a tree record nor an aggregate".to_string(),
            });
        }
    }
    Ok(ResumeState { completed, offset })
}

/// Runs the survey for every n in `n_min..=n_max`, appending JSONL to
/// `output_path`: one line per tree in generator order, then the n's
/// aggregate line. Restart-safe: n values whose aggregate line is already
/// present are skipped and their stored aggregates reused; records of an
/// interrupted n (anything after the last aggregate) block the resume
/// unless `truncate` discards them. Output bytes are identical across runs
/// and worker counts.
pub fn run_census(
    n_min: usize,
    n_max: usize,
    output_path: &Path,
    workers: Option<usize>,
    truncate: bool,
) -> Result<CensusReport, CensusError> {
    if n_min < 2 || n_min > n_max {
        return Err(CensusError::InvalidRange { n_min, n_max });
    }
    if workers == Some(0) {
        return Err(CensusError::NoWorkers);
    }

    let state = scan_existing(output_path)?;
    let existing_len = std::fs::metadata(output_path).map(|m| m.len()).unwrap_or(0);
    if existing_len > state.offset {
        if !truncate {
            return Err(CensusError::TrailingData {
                path: output_path.to_path_buf(),
                len: existing_len - state.offset,
            });
        }
        OpenOptions::new()
            .write(true)
            .open(output_path)?
            .set_len(state.offset)?;
    }

    #[cfg(feature = "parallel")]
    let pool = match workers {
        Some(w) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| io::Error::other(e.to_string()))?,
        ),
        None => None,
    };
    #[cfg(not(feature = "parallel"))]
    let pool: Option<()> = None;

    let mut out = BufWriter::new(if state.offset > 0 || existing_len > 0 {
        OpenOptions::new().append(true).open(output_path)?
    } else {
        File::create(output_path)?
    });

    let mut aggregates = Vec::with_capacity(n_max - n_min + 1);
    for n in n_min..=n_max {
        if let Some(agg) = state.completed.get(&n) {
            aggregates.push(agg.clone());
            continue;
        }
        let trees: Vec<FreeTree> = generate_trees(n).collect();
        let records = screen_level(&trees, pool.as_ref())?;
        for record in &records {
            writeln!(
                out,
                "{}",
                serde_json::to_string(record).expect("plain data")
            )?;
        }
        let agg = aggregate_of(n, &records);
        writeln!(out, "{}", serde_json::to_string(&agg).expect("plain data"))?;
        out.flush()?;
        aggregates.push(agg);
    }
    Ok(CensusReport { aggregates })
}
