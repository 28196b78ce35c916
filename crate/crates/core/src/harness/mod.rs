//! Verification suites, corpora, brute-force oracles and golden tables.
//!
//! Each suite is a list of named checks. Checks run in parallel and the
//! report lists them sorted by id, so a report depends only on the suite
//! name and the seed.

pub mod corpus;
pub mod goldens;
pub mod oracles;
mod suites;

use crate::error::{Error, Result};
use crate::evaluation::Family;
use crate::homology::flatness_test_poly;
use crate::schur::hasse_schur;
use rayon::prelude::*;
use serde::Serialize;

pub use goldens::{regenerate_goldens, GoldenRecord, Source};

/// One named check. `Ok(())` is a pass; an `Invariant` error carries the diff.
pub struct Check {
    pub id: String,
    run: Box<dyn Fn() -> Result<()> + Send + Sync>,
}

impl Check {
    pub fn new(id: impl Into<String>, run: impl Fn() -> Result<()> + Send + Sync + 'static) -> Self {
        Self { id: id.into(), run: Box::new(run) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A time or memory guard stopped the check before it finished.
    Resource,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<EntryReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn resource_limited(&self) -> bool {
        self.entries.iter().any(|e| e.status == Status::Resource)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("suite {} (seed {}): {} passed, {} failed\n", self.suite, self.seed, self.passed, self.failed);
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "ok  ",
                Status::Fail => "FAIL",
                Status::Resource => "LIM ",
            };
            s.push_str(&format!("  {tag} {}\n", e.id));
            if let Some(d) = &e.diff {
                s.push_str(&format!("       {d}\n"));
            }
        }
        s
    }
}

pub fn suite_names() -> &'static [&'static str] {
    suites::NAMES
}

/// Runs a registered suite with seed 0.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    run_suite_seeded(name, 0)
}

pub fn run_suite_seeded(name: &str, seed: u64) -> Result<SuiteReport> {
    let checks = suites::build(name, seed)?;
    Ok(run_checks(name, seed, checks))
}

pub fn run_checks(name: &str, seed: u64, checks: Vec<Check>) -> SuiteReport {
    let mut entries: Vec<EntryReport> = checks
        .par_iter()
        .map(|c| {
            let (status, diff) = match crate::limits::check().and_then(|()| (c.run)()) {
                Ok(()) => (Status::Pass, None),
                Err(e @ Error::ResourceLimit(_)) => (Status::Resource, Some(e.to_string())),
                Err(e) => (Status::Fail, Some(e.to_string())),
            };
            EntryReport { id: c.id.clone(), status, diff }
        })
        .collect();
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = entries.iter().filter(|e| e.status == Status::Pass).count();
    SuiteReport { suite: name.to_string(), seed, passed, failed: entries.len() - passed, entries }
}

/// `Ok(())` when equal, otherwise an `Invariant` error showing both sides.
pub fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, expected: &T, got: &T) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{what}: expected {expected:?}, got {got:?}")))
    }
}

pub fn expect(what: &str, cond: bool) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{what} does not hold")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SShiftExperiment {
    pub m_max: u32,
    pub n_set: Vec<usize>,
    pub j_max: u32,
    /// (m, flat at every n)
    pub steps: Vec<(u32, bool)>,
    /// Smallest m with Sh_m(M) flat at every n.
    pub flat_m: Option<u32>,
    pub flat_m_per_n: Vec<(usize, Option<u32>)>,
}

impl SShiftExperiment {
    pub fn consistent(&self) -> bool {
        self.flat_m_per_n.iter().all(|&(_, m)| m == self.flat_m)
    }
}

/// Smallest m ≤ m_max with Sh_m(M) flat over S, flatness read off Tor₁ in
/// degrees ≤ j_max. Running out of m is reported as `Exhausted`.
pub fn s_shift_experiment(fam: &Family, m_max: u32, n_set: &[usize], j_max: u32) -> Result<SShiftExperiment> {
    if fam.ring() != crate::evaluation::Ring::Poly {
        return Err(Error::Domain("the S-shift experiment needs a family over S".into()));
    }
    if n_set.is_empty() {
        return Err(Error::Domain("the S-shift experiment needs at least one n".into()));
    }
    let mut steps = Vec::new();
    let mut per_n: Vec<(usize, Option<u32>)> = n_set.iter().map(|&n| (n, None)).collect();
    let mut flat_m = None;
    for m in 0..=m_max {
        crate::limits::check()?;
        let report = flatness_test_poly(hasse_schur(fam, m).as_ref(), n_set, j_max)?;
        for (slot, &(_, _, ok)) in per_n.iter_mut().zip(&report.per_n) {
            if ok && slot.1.is_none() {
                slot.1 = Some(m);
            }
        }
        steps.push((m, report.flat));
        if report.flat {
            flat_m = Some(m);
            break;
        }
    }
    if flat_m.is_none() {
        return Err(Error::Exhausted(format!("Sh_m not flat for any m ≤ {m_max}")));
    }
    Ok(SShiftExperiment { m_max, n_set: n_set.to_vec(), j_max, steps, flat_m, flat_m_per_n: per_n })
}
