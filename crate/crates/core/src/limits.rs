//! Process-wide resource guards.
//!
//! The engines call [`check`] at coarse checkpoints (per weight, per level).
//! Limits are opt-in; with nothing configured every check is a no-op.

use crate::error::{Error, Result};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

static START: OnceLock<Instant> = OnceLock::new();
static TIME_LIMIT_MS: AtomicU64 = AtomicU64::new(0);
static CELL_LIMIT: AtomicU64 = AtomicU64::new(0);

/// Wall-clock budget measured from the first call to this function.
pub fn set_time_limit(limit: Option<Duration>) {
    START.get_or_init(Instant::now);
    TIME_LIMIT_MS.store(limit.map_or(0, |d| d.as_millis().max(1) as u64), Ordering::Relaxed);
}

/// Memory budget in bytes. Enforced as a cap on the size of any single
/// dense matrix the engines allocate (four bytes per cell).
pub fn set_memory_limit(bytes: Option<u64>) {
    CELL_LIMIT.store(bytes.map_or(0, |b| (b / 4).max(1)), Ordering::Relaxed);
}

pub fn check() -> Result<()> {
    let limit = TIME_LIMIT_MS.load(Ordering::Relaxed);
    if limit > 0 {
        let start = START.get_or_init(Instant::now);
        if start.elapsed().as_millis() as u64 > limit {
            return Err(Error::ResourceLimit(format!("time limit of {limit} ms reached")));
        }
    }
    Ok(())
}

pub fn check_cells(rows: usize, cols: usize) -> Result<()> {
    let limit = CELL_LIMIT.load(Ordering::Relaxed);
    if limit > 0 && (rows as u64).saturating_mul(cols as u64) > limit {
        return Err(Error::ResourceLimit(format!(
            "a {rows}x{cols} matrix exceeds the memory limit"
        )));
    }
    check()
}
