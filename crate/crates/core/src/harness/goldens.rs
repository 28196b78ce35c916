//! Golden records: expected outputs with a note on where each one comes from.
//!
//! Reference records hold published values and are never recomputed.
//! Oracle records are recomputed by [`regenerate_goldens`]; any difference
//! from the stored file is an error.

use super::corpus::{self, ctx};
use super::oracles::{member_brute, radical_brute};
use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::evaluation::Ring;
use crate::glideals::{GLIdeal, Radical};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const GOLDENS_JSON: &str = include_str!("../../goldens.json");
pub const GOLDENS_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/goldens.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    /// A published value; `location` says where it is stated.
    Reference { location: String },
    /// Follows directly from the definitions.
    Immediate { reason: String },
    /// Recomputed by the named oracle.
    Oracle { name: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub suite: String,
    pub id: String,
    pub input: String,
    pub expected: Value,
    pub source: Source,
}

#[derive(Serialize, Deserialize)]
struct GoldenFile {
    records: Vec<GoldenRecord>,
}

/// The records compiled into the library.
pub fn stored() -> Vec<GoldenRecord> {
    serde_json::from_str::<GoldenFile>(GOLDENS_JSON).expect("goldens.json is well formed").records
}

pub fn lookup(suite: &str, id: &str) -> Result<GoldenRecord> {
    stored()
        .into_iter()
        .find(|r| r.suite == suite && r.id == id)
        .ok_or_else(|| Error::Invariant(format!("no golden record {suite}/{id}")))
}

fn record(suite: &str, id: &str, input: &str, expected: Value, source: Source) -> GoldenRecord {
    GoldenRecord { suite: suite.into(), id: id.into(), input: input.into(), expected, source }
}

fn oracle(name: &str) -> Source {
    Source::Oracle { name: name.into() }
}

pub fn radical_label(r: Radical) -> String {
    match r {
        Radical::Zero => "0".into(),
        Radical::Unit => "1".into(),
        Radical::Frobenius(s) => format!("m[p^{s}]"),
    }
}

fn partition_label(p: &Partition) -> String {
    p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Ideals whose membership tables are stored: (p, expression).
pub const MEMBERSHIP_IDEALS: [(u32, &str); 8] = [
    (2, "m * m[p^1]"),
    (2, "m^2 * m[p^1]"),
    (2, "m[p^1]^2 + m^3"),
    (2, "m[p^1] * m[p^2]"),
    (3, "m * m[p^1]"),
    (3, "m^4 + m[p^1]^2 * m"),
    (3, "m[p^1]^2"),
    (5, "m^3 * m[p^1]"),
];

pub const MEMBERSHIP_MAX_DEGREE: u32 = 10;

/// Every partition of size ≤ 10 lying in the ideal, as "a,b,c" labels.
pub fn membership_table(ideal: &GLIdeal, member: impl Fn(&[u32], &GLIdeal) -> bool) -> Vec<String> {
    (0..=MEMBERSHIP_MAX_DEGREE)
        .flat_map(Partition::all_of_size)
        .filter(|l| member(l.parts(), ideal))
        .map(|l| partition_label(&l))
        .collect()
}

/// (p, q, descriptor, flat step l) for families whose answer is forced:
/// free modules are flat before any shift.
pub const IMMEDIATE_SHIFT: [(u32, u32, &str); 2] = [(2, 2, "S"), (2, 4, "free:1")];

pub const SHIFT_N_SET: [usize; 3] = [4, 5, 6];
pub const SHIFT_L_MAX: u32 = 12;
pub const S_SHIFT_M_MAX: u32 = 12;

/// j cutoff for the S-shift flatness test of a family over prime p.
pub fn s_shift_j_max(p: u32) -> u32 {
    2 * p + 4
}

pub fn shift_id(p: u32, q: u32, desc: &str) -> String {
    format!("p{p}-q{q}:{desc}")
}

pub fn s_shift_id(p: u32, desc: &str) -> String {
    format!("p{p}:{desc}")
}

pub fn shift_step(p: u32, q: u32, desc: &str) -> Result<Option<u32>> {
    let fam = corpus::family(p, Ring::Frob { q }, desc)?;
    let r = crate::schur::shift_until_flat(&fam, q, SHIFT_L_MAX, &SHIFT_N_SET)?;
    if !r.consistent() {
        return Err(Error::Invariant(format!("{desc}: flat step differs across n: {:?}", r.flat_step_per_n)));
    }
    Ok(r.flat_step)
}

pub fn s_shift_step(p: u32, desc: &str) -> Result<Option<u32>> {
    let fam = corpus::family(p, Ring::Poly, desc)?;
    let r = super::s_shift_experiment(&fam, S_SHIFT_M_MAX, &SHIFT_N_SET, s_shift_j_max(p))?;
    if !r.consistent() {
        return Err(Error::Invariant(format!("{desc}: flat m differs across n: {:?}", r.flat_m_per_n)));
    }
    Ok(r.flat_m)
}

fn reference_records() -> Vec<GoldenRecord> {
    let left: Vec<Value> = (0..=3u32).zip([1u64, 9, 36, 84]).map(|(i, b)| json!([i, 3 * i, b])).collect();
    let mut right: Vec<Value> = (0..=5u32).map(|i| json!([i, i + 3])).collect();
    right.push(json!([2, 6]));
    right.push(json!([3, 8]));
    right.sort_by_key(|v| (v[0].as_u64(), v[1].as_u64()));
    vec![
        record(
            "betti-figure",
            "left",
            "S/m[p^1], p=3, n=9, j<=9",
            Value::Array(left),
            Source::Reference { location: "Betti table figure, left panel: S/m^[3] with p = 3".into() },
        ),
        record(
            "betti-figure",
            "right",
            "ideal:m[p^1]*m, p=2, n=8, j<=8",
            Value::Array(right),
            Source::Reference { location: "Betti table figure, right panel: m^[2]·m with p = 2".into() },
        ),
        record(
            "doty",
            "list",
            "degree-10 GL-ideals of S in characteristic 2",
            json!(corpus::DEGREE_TEN_EXPRS),
            Source::Reference { location: "remark listing GL-ideals generated in degree 10 for p = 2".into() },
        ),
        record(
            "spectrum",
            "primes",
            "(0) and m[p^r], r <= 5, p in {2,3,5}",
            json!(true),
            Source::Reference { location: "classification of the GL-prime ideals of S".into() },
        ),
    ]
}

fn immediate_records() -> Vec<GoldenRecord> {
    let mut out: Vec<GoldenRecord> = IMMEDIATE_SHIFT
        .iter()
        .map(|&(p, q, d)| {
            record(
                "shift-theorem",
                &shift_id(p, q, d),
                d,
                json!(0),
                Source::Immediate { reason: "free modules are flat".into() },
            )
        })
        .collect();
    out.push(record(
        "s-shift",
        &s_shift_id(2, "S"),
        "S",
        json!(0),
        Source::Immediate { reason: "free modules are flat".into() },
    ));
    out
}

/// Recomputes every oracle record.
fn oracle_records() -> Result<Vec<GoldenRecord>> {
    let mut jobs: Vec<Box<dyn Fn() -> Result<GoldenRecord> + Send + Sync>> = Vec::new();
    for (p, e) in MEMBERSHIP_IDEALS {
        jobs.push(Box::new(move || {
            let i = GLIdeal::parse(e, ctx(p))?;
            Ok(record(
                "membership",
                &format!("p{p}:{e}"),
                e,
                json!(membership_table(&i, member_brute)),
                oracle("exhaustive factor assignment"),
            ))
        }));
    }
    for (id, i) in corpus::nonprime_ideals() {
        jobs.push(Box::new(move || {
            Ok(record("radical", &id, &i.render(), json!(radical_label(radical_brute(&i))), oracle("power containment")))
        }));
    }
    for e in corpus::DEGREE_TEN_EXPRS {
        jobs.push(Box::new(move || {
            let i = GLIdeal::parse(e, ctx(2))?;
            let dim = super::oracles::ideal_piece_brute(&i, 10, 10).len();
            Ok(record("doty", &format!("dim:{e}"), e, json!(dim), oracle("monomial enumeration at n = 10")))
        }));
    }
    for (p, q, d) in corpus::SHIFT_CORPUS {
        jobs.push(Box::new(move || {
            Ok(record(
                "shift-theorem",
                &shift_id(p, q, d),
                d,
                json!(shift_step(p, q, d)?),
                oracle("shift iteration, agreeing at n = 4, 5, 6"),
            ))
        }));
    }
    for (p, d) in corpus::S_SHIFT_CORPUS {
        jobs.push(Box::new(move || {
            Ok(record(
                "s-shift",
                &s_shift_id(p, d),
                d,
                json!(s_shift_step(p, d)?),
                oracle("Hasse-Schur slices over S, agreeing at n = 4, 5, 6"),
            ))
        }));
    }
    jobs.par_iter().map(|j| j()).collect()
}

fn sort(records: &mut [GoldenRecord]) {
    records.sort_by(|a, b| (&a.suite, &a.id).cmp(&(&b.suite, &b.id)));
}

/// Every record computed from scratch, reference values included. Used to
/// create the goldens file; compare with [`regenerate_goldens`].
pub fn fresh_goldens() -> Result<Vec<GoldenRecord>> {
    let mut all = reference_records();
    all.extend(immediate_records());
    all.extend(oracle_records()?);
    sort(&mut all);
    Ok(all)
}

/// Recomputes the oracle records and checks them against the stored file.
/// Stored reference and immediate records are passed through untouched.
pub fn regenerate_goldens() -> Result<Vec<GoldenRecord>> {
    let stored = stored();
    let fresh = oracle_records()?;
    let mut drift = Vec::new();
    for r in &fresh {
        match stored.iter().find(|s| s.suite == r.suite && s.id == r.id) {
            None => drift.push(format!("{}/{} missing from the stored file", r.suite, r.id)),
            Some(s) if s.expected != r.expected || s.source != r.source => {
                drift.push(format!("{}/{}: stored {}, regenerated {}", r.suite, r.id, s.expected, r.expected))
            }
            Some(_) => {}
        }
    }
    for s in stored.iter().filter(|s| matches!(s.source, Source::Oracle { .. })) {
        if !fresh.iter().any(|r| r.suite == s.suite && r.id == s.id) {
            drift.push(format!("{}/{} has no oracle", s.suite, s.id));
        }
    }
    if !drift.is_empty() {
        return Err(Error::Invariant(format!("golden drift: {}", drift.join("; "))));
    }
    let mut out: Vec<GoldenRecord> =
        stored.into_iter().filter(|s| !matches!(s.source, Source::Oracle { .. })).chain(fresh).collect();
    sort(&mut out);
    Ok(out)
}

pub fn to_json(records: &[GoldenRecord]) -> String {
    let mut s = serde_json::to_string_pretty(&GoldenFile { records: records.to_vec() }).expect("records serialize");
    s.push('\n');
    s
}
