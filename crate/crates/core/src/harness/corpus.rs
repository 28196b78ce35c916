//! Named inputs shared by the suites, the goldens and the acceptance tests.

use crate::combinatorics::PrimeContext;
use crate::error::Result;
use crate::evaluation::{Family, MonomialFamily, MonomialMap, Piece, Ring};
use crate::glideals::GLIdeal;
use crate::schur::ShortExact;

pub fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).expect("corpus primes are prime")
}

/// Ideal expressions whose canonical generators all have digit weight ≥ 2.
pub const NONPRIME_EXPRS: [&str; 10] = [
    "m^2",
    "m^3",
    "m * m[p^1]",
    "m[p^1]^2",
    "m[p^1] * m[p^2]",
    "m^2 * m[p^1]",
    "m[p^2] * m + m[p^1]^3",
    "m[p^1] * m[p^1] * m",
    "m^4 + m[p^2] * m",
    "m[p^3]^2 + m[p^2]^3",
];

/// The 30 non-prime ideals: every expression at p = 2, 3, 5.
pub fn nonprime_ideals() -> Vec<(String, GLIdeal)> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for e in NONPRIME_EXPRS {
            out.push((format!("p{p}:{e}"), GLIdeal::parse(e, ctx(p)).expect("corpus expression parses")));
        }
    }
    out
}

/// The five degree-10 ideals in characteristic 2.
pub const DEGREE_TEN_EXPRS: [&str; 5] =
    ["m[p^3] * m[p^1]", "m[p^2]^2 * m[p^1]", "m[p^3] * m^2", "m[p^2]^2 * m^2", "m^10"];

/// Modules over S for the line-support property: (p, descriptor).
pub const LINE_CORPUS: [(u32, &str); 12] = [
    (2, "S/m[p^1]"),
    (2, "S/m^2"),
    (2, "ideal:m[p^1]*m"),
    (2, "ideal:m^2"),
    (2, "S/m*m[p^1]"),
    (2, "ideal:m[p^1]^2"),
    (3, "S/m[p^1]"),
    (3, "S/m^2"),
    (3, "ideal:m[p^1]*m"),
    (3, "ideal:m^2"),
    (3, "S/m*m[p^1]"),
    (3, "S/m^3"),
];

/// Modules over S/m^[q] for the shift experiment: (p, q, descriptor).
pub const SHIFT_CORPUS: [(u32, u32, &str); 17] = [
    (2, 2, "free:2"),
    (2, 2, "k"),
    (2, 2, "ideal:m"),
    (2, 2, "free:1"),
    (2, 2, "sum(k, ideal:m)"),
    (2, 4, "S"),
    (2, 4, "k"),
    (2, 4, "ideal:m"),
    (2, 4, "S/m[p^1]"),
    (2, 4, "ideal:m^2"),
    (2, 4, "ideal:m[p^1]"),
    (2, 4, "S/m^3"),
    (2, 4, "sum(k, S/m[p^1])"),
    (3, 3, "k"),
    (3, 3, "ideal:m"),
    (3, 3, "ideal:m^2"),
    (3, 3, "S/m^2"),
];

/// Modules over S/m^[q] for the slope audit: (p, q, descriptor, n).
pub const CI_CORPUS: [(u32, u32, &str, usize); 6] = [
    (2, 2, "S", 3),
    (2, 2, "free:1", 3),
    (2, 2, "k", 3),
    (2, 4, "ideal:m", 2),
    (3, 3, "k", 2),
    (2, 4, "S/m[p^1]", 2),
];

/// Families over S for the S-shift experiment: (p, descriptor).
pub const S_SHIFT_CORPUS: [(u32, &str); 4] = [(2, "S/m[p^1]"), (3, "S/m[p^1]"), (2, "ideal:m*m[p^1]"), (3, "ideal:m*m[p^1]")];

pub fn family(p: u32, ring: Ring, desc: &str) -> Result<Family> {
    crate::descriptor::parse_descriptor(desc, ctx(p), ring)
}

fn sub(c: PrimeContext, upper: &str, lower: &str) -> Piece {
    Piece::Sub { upper: GLIdeal::parse(upper, c).unwrap(), lower: GLIdeal::parse(lower, c).unwrap() }
}

/// 0 → mid/lower → upper/lower → upper/mid → 0.
fn chain(name: &str, p: u32, q: u32, upper: &str, mid: &str, lower: &str) -> Result<ShortExact> {
    let c = ctx(p);
    let ring = Ring::Frob { q };
    let l = MonomialFamily::new(c, ring, vec![sub(c, mid, lower)])?;
    let m = MonomialFamily::new(c, ring, vec![sub(c, upper, lower)])?;
    let n = MonomialFamily::new(c, ring, vec![sub(c, upper, mid)])?;
    ShortExact::new(name, MonomialMap::new(l, m.clone(), vec![(0, 0, 1)])?, MonomialMap::new(m, n, vec![(0, 0, 1)])?)
}

/// 0 → A → A ⊕ B → B → 0 for single-piece A and B.
fn split(name: &str, p: u32, q: u32, a: Piece, b: Piece) -> Result<ShortExact> {
    let c = ctx(p);
    let ring = Ring::Frob { q };
    let fa = MonomialFamily::new(c, ring, vec![a.clone()])?;
    let fb = MonomialFamily::new(c, ring, vec![b.clone()])?;
    let ab = MonomialFamily::new(c, ring, vec![a, b])?;
    ShortExact::new(name, MonomialMap::new(fa, ab.clone(), vec![(0, 0, 1)])?, MonomialMap::new(ab, fb, vec![(1, 0, 1)])?)
}

/// Five short exact sequences over S/m^[q], with the q to use.
pub fn short_exact_corpus() -> Result<Vec<(u32, ShortExact)>> {
    let c2 = ctx(2);
    let free_v = Piece::Free { gen: crate::evaluation::FreeGen::standard(c2) };
    Ok(vec![
        (2, chain("m -> S -> k, q=2", 2, 2, "1", "m", "0")?),
        (4, chain("m[2] -> S -> S/m[2], q=4", 2, 4, "1", "m[p^1]", "0")?),
        (4, chain("m^2 -> m -> m/m^2, q=4", 2, 4, "m", "m^2", "0")?),
        (2, split("k -> k+S -> S, q=2", 2, 2, sub(c2, "1", "m"), sub(c2, "1", "0"))?),
        (2, split("S -> S+SV -> SV, q=2", 2, 2, sub(c2, "1", "0"), free_v)?),
    ])
}
