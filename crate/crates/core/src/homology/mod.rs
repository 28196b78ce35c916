//! Tor computations: Koszul homology over S, minimal resolutions over
//! S/m^[q], Betti tables and their statistics.

mod koszul;
mod resolution;
mod table;

pub use koszul::{koszul_at_weight, koszul_tor};
pub use resolution::{minimal_resolution, verify_certificate, Generator, ResolutionCertificate};
pub use table::{detect_lines, slope, t_sequence, BettiTable, Line, LineCover};

use crate::combinatorics::orbit_size;
use crate::error::{invariant, Error, Result};
use crate::evaluation::{
    degree_dims, dominant_support, generators_at, support, GradedModule, ModuleFamily, Ring,
};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Betti table by whichever engine fits the ring.
pub fn betti_table(m: &dyn GradedModule, i_max: u32, j_max: Option<u32>) -> Result<BettiTable> {
    match m.ring() {
        Ring::Poly => koszul_tor(m, i_max, j_max),
        Ring::Frob { .. } => minimal_resolution(m, i_max, j_max).map(|(_, t)| t),
    }
}

#[derive(Clone, Debug)]
pub struct FamilyBetti {
    pub tables: Vec<BettiTable>,
    /// Number of (i, λ) multiplicities compared across truncations.
    pub compared: usize,
}

/// Tables for every n in `n_set`, with the stable parts checked against each other.
///
/// Total β_{i,j} depend on n even in the stable range (β_{i,i} of k is C(n, i)),
/// so agreement is tested on the multiplicities β_{i,λ} of dominant weights λ
/// with at most min(n, n') parts, which do not depend on n.
pub fn betti_of_family(fam: &dyn ModuleFamily, n_set: &[usize], i_max: u32, j_max: Option<u32>) -> Result<FamilyBetti> {
    let tables: Vec<Result<BettiTable>> =
        n_set.par_iter().map(|&n| betti_table(fam.eval(n).as_ref(), i_max, j_max)).collect();
    let tables: Vec<BettiTable> = tables.into_iter().collect::<Result<_>>()?;
    let mut compared = 0;
    for a in 0..tables.len() {
        for b in (a + 1)..tables.len() {
            compared += compare_stable(&tables[a], &tables[b])?;
        }
    }
    Ok(FamilyBetti { tables, compared })
}

fn compare_stable(a: &BettiTable, b: &BettiTable) -> Result<usize> {
    let len = a.n.min(b.n);
    let j_top = a.j_max.min(b.j_max);
    let i_top = a.i_max.min(b.i_max);
    let keys = a.weights.keys().chain(b.weights.keys());
    let mut seen = std::collections::BTreeSet::new();
    for (i, lam) in keys {
        let j: u32 = lam.iter().sum();
        if lam.len() > len || j > j_top || *i > i_top || !seen.insert((*i, lam.clone())) {
            continue;
        }
        let x = a.weights.get(&(*i, lam.clone())).copied().unwrap_or(0);
        let y = b.weights.get(&(*i, lam.clone())).copied().unwrap_or(0);
        if x != y {
            return invariant(format!(
                "stable Betti multiplicity at i={i}, λ={lam:?} differs: {x} at n={} vs {y} at n={}",
                a.n, b.n
            ));
        }
    }
    Ok(seen.len())
}

/// Number of minimal generators at each dominant weight, cached by sorted weight.
fn generator_counts(m: &dyn GradedModule) -> HashMap<Vec<u32>, usize> {
    let mut out = HashMap::new();
    let top = m.degree_bound().unwrap_or(0);
    for d in 0..=top {
        let ws = if m.symmetric() { dominant_support(m, d) } else { support(m, d) };
        for w in ws {
            let g = generators_at(m, &w);
            if g > 0 {
                out.insert(w, g);
            }
        }
    }
    out
}

/// Whether an evaluation over S/m^[q] is free.
///
/// F₀ → M is onto, so M is free exactly when dim M = (#generators)·qⁿ, which is
/// the same as Tor₁(M, k) = 0.
pub fn is_free_over_frobenius(m: &dyn GradedModule) -> Result<bool> {
    let Ring::Frob { q } = m.ring() else {
        return Err(Error::Domain("freeness over S/m^[q] asked of an S-module".into()));
    };
    let Some(top) = m.degree_bound() else {
        return Err(Error::Domain("module over S/m^[q] without a degree bound".into()));
    };
    let n = m.n() as u32;
    let gens = generator_counts(m);
    let mult = |w: &Vec<u32>| if m.symmetric() { orbit_size(w) as u128 } else { 1 };
    let count: u128 = gens.iter().map(|(w, &g)| g as u128 * mult(w)).sum();
    let dim: u128 = degree_dims(m, top).iter().map(|&x| x as u128).sum();
    Ok(dim == count * (q as u128).pow(n))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub flat: bool,
    /// (n, total β₀, verdict at n)
    pub per_n: Vec<(usize, u64, bool)>,
}

/// Flatness over S/m^[q]: the evaluation is free at every n in `n_set`.
pub fn flatness_test(fam: &dyn ModuleFamily, n_set: &[usize]) -> Result<FlatnessReport> {
    let per_n: Vec<Result<(usize, u64, bool)>> = n_set
        .par_iter()
        .map(|&n| {
            let m = fam.eval(n);
            let free = is_free_over_frobenius(m.as_ref())?;
            let gens = generator_counts(m.as_ref());
            let total: u64 = gens
                .iter()
                .map(|(w, &g)| g as u64 * if m.symmetric() { orbit_size(w) as u64 } else { 1 })
                .sum();
            Ok((n, total, free))
        })
        .collect();
    let per_n: Vec<(usize, u64, bool)> = per_n.into_iter().collect::<Result<_>>()?;
    Ok(FlatnessReport { flat: per_n.iter().all(|x| x.2), per_n })
}

/// Flatness over S: β₁ vanishes in degrees ≤ j_max at every n in `n_set`.
pub fn flatness_test_poly(fam: &dyn ModuleFamily, n_set: &[usize], j_max: u32) -> Result<FlatnessReport> {
    let per_n: Vec<Result<(usize, u64, bool)>> = n_set
        .par_iter()
        .map(|&n| {
            let t = koszul_tor(fam.eval(n).as_ref(), 1, Some(j_max))?;
            Ok((n, t.totals()[0], t.totals().get(1).copied().unwrap_or(0) == 0))
        })
        .collect();
    let per_n: Vec<(usize, u64, bool)> = per_n.into_iter().collect::<Result<_>>()?;
    Ok(FlatnessReport { flat: per_n.iter().all(|x| x.2), per_n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CiVerdict {
    /// Linear bound with slope below q/2: the module is free.
    Flat,
    /// Not free; t_{2i} − qi settles at this constant along the computed tail.
    Pattern { constant: i64 },
    Inconclusive(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CiAudit {
    pub q: u32,
    pub t: Vec<i64>,
    /// Growth estimate (t_{i_max} − t_{i_max−2})/2; zero when the resolution stops.
    pub b_estimate: Ratio<i64>,
    pub free: bool,
    pub verdict: CiVerdict,
}

/// Growth audit of t_i over k[x₁..xₙ]/m^[q], a complete intersection of n forms of degree q.
///
/// Resolutions there grow with slope at least q/2 unless M is free. The audit
/// estimates the slope from the last two even steps; an estimate below q/2 must
/// come with a free module, otherwise the constant t_{2i} − qi is reported.
pub fn ci_slope_audit(m: &dyn GradedModule, i_max: u32) -> Result<CiAudit> {
    let Ring::Frob { q } = m.ring() else {
        return Err(Error::Domain("the CI audit needs a module over S/m^[q]".into()));
    };
    if i_max < 4 {
        return Err(Error::Domain("the CI audit needs i_max ≥ 4".into()));
    }
    let (_, table) = minimal_resolution(m, i_max, None)?;
    let t = t_sequence(&table);
    let free = is_free_over_frobenius(m)?;
    let im = i_max as usize;
    let b = if t[im] < 0 { Ratio::from_integer(0) } else { Ratio::new(t[im] - t[im - 2], 2) };
    let half_q = Ratio::new(q as i64, 2);
    let verdict = if b < half_q {
        if !free {
            return invariant(format!("t-growth {b} < q/2 but the module is not free"));
        }
        CiVerdict::Flat
    } else {
        let evens: Vec<i64> = (1..=im / 2).map(|i| t[2 * i] - q as i64 * i as i64).collect();
        let tail = &evens[evens.len().saturating_sub(2)..];
        if t[im] >= 0 && tail.windows(2).all(|x| x[0] == x[1]) {
            CiVerdict::Pattern { constant: tail[0] }
        } else {
            CiVerdict::Inconclusive(format!("t_{{2i}} − qi = {evens:?} has not settled by i_max = {i_max}"))
        }
    };
    Ok(CiAudit { q, t, b_estimate: b, free, verdict })
}

/// Over S: Σ_i (−1)^i β_{i,j} = [t^j] HS_M(t)(1 − t)ⁿ for j ≤ j_max. Needs i_max ≥ n.
pub fn euler_check_poly(m: &dyn GradedModule, table: &BettiTable) -> Result<()> {
    let n = m.n();
    if (table.i_max as usize) < n {
        return Err(Error::Domain("the Euler check over S needs i_max ≥ n".into()));
    }
    let hs = degree_dims(m, table.j_max);
    let mut binom = vec![1i128; n + 1];
    for k in 1..=n {
        binom[k] = binom[k - 1] * (n - k + 1) as i128 / k as i128;
    }
    for j in 0..=table.j_max as usize {
        let rhs: i128 = (0..=n.min(j)).map(|k| if k % 2 == 0 { 1 } else { -1 } * binom[k] * hs[j - k] as i128).sum();
        let lhs: i128 = (0..=table.i_max).map(|i| if i % 2 == 0 { 1 } else { -1 } * table.get(i, j as u32) as i128).sum();
        if lhs != rhs {
            return invariant(format!("Euler characteristic mismatch in degree {j}: {lhs} vs {rhs}"));
        }
    }
    Ok(())
}

/// Over S/m^[q]: Σ_i (−1)^i HS(F_i) ≡ HS_M mod t^{D+1}, with D = min(j_max, i_max)
/// because F_i lives in degrees ≥ i.
pub fn euler_check_frobenius(m: &dyn GradedModule, table: &BettiTable) -> Result<()> {
    let Ring::Frob { q } = m.ring() else {
        return Err(Error::Domain("expected a module over S/m^[q]".into()));
    };
    let n = m.n();
    let top = table.j_max.min(table.i_max) as usize;
    // HS of the ring: ((1 − t^q)/(1 − t))ⁿ.
    let mut ring = vec![0i128; top + 1];
    ring[0] = 1;
    for _ in 0..n {
        let mut next = vec![0i128; top + 1];
        for (d, &c) in ring.iter().enumerate() {
            for e in 0..q as usize {
                if d + e <= top {
                    next[d + e] += c;
                }
            }
        }
        ring = next;
    }
    let hs = degree_dims(m, top as u32);
    for j in 0..=top {
        let mut lhs = 0i128;
        for (&(i, g), &b) in &table.entries {
            let g = g as usize;
            if g <= j {
                let s = if i % 2 == 0 { 1 } else { -1 };
                lhs += s * b as i128 * ring[j - g];
            }
        }
        if lhs != hs[j] as i128 {
            return invariant(format!("Euler characteristic mismatch in degree {j}: {lhs} vs {}", hs[j]));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::PrimeContext;
    use crate::evaluation::{free_family, quotient_family, residue_field, FreeGen};
    use crate::glideals::GLIdeal;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn residue_field_koszul() {
        let k = residue_field(Ring::Poly, ctx(2));
        let t = koszul_tor(k.eval(2).as_ref(), 3, Some(4)).unwrap();
        assert_eq!(t.entries.iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]);
    }

    #[test]
    fn frobenius_quotient_koszul() {
        let c = ctx(3);
        let fam = quotient_family(Ring::Poly, &GLIdeal::frobenius_power(1, c));
        let m = fam.eval(3);
        let t = koszul_tor(m.as_ref(), 3, None).unwrap();
        for (&(i, j), &d) in &t.entries {
            assert_eq!(j, 3 * i);
            assert_eq!(d, binom(3, i as u64));
        }
        euler_check_poly(m.as_ref(), &t).unwrap();
    }

    #[test]
    fn hypersurface_periodicity() {
        let c = ctx(2);
        let k = residue_field(Ring::Frob { q: 4 }, c);
        let m = k.eval(1);
        let (cert, t) = minimal_resolution(m.as_ref(), 6, None).unwrap();
        verify_certificate(m.as_ref(), &cert).unwrap();
        assert_eq!(t_sequence(&t), vec![0, 1, 4, 5, 8, 9, 12]);
        euler_check_frobenius(m.as_ref(), &t).unwrap();
    }

    #[test]
    fn residue_field_low_syzygies() {
        for (p, q) in [(2, 2), (2, 4), (3, 3)] {
            let k = residue_field(Ring::Frob { q }, ctx(p));
            let m = k.eval(2);
            let (cert, t) = minimal_resolution(m.as_ref(), 2, None).unwrap();
            verify_certificate(m.as_ref(), &cert).unwrap();
            let ts = t_sequence(&t);
            assert_eq!(ts[1], 1);
            assert_eq!(ts[2], 2.max(q as i64));
        }
    }

    #[test]
    fn free_module_flat() {
        let c = ctx(2);
        let fam = free_family(Ring::Frob { q: 2 }, vec![FreeGen::frobenius(1, c), FreeGen::trivial(c)], c);
        assert!(flatness_test(fam.as_ref(), &[2, 3]).unwrap().flat);
        let k = residue_field(Ring::Frob { q: 2 }, c);
        assert!(!flatness_test(k.as_ref(), &[2, 3]).unwrap().flat);
        let (_, t) = minimal_resolution(fam.eval(2).as_ref(), 2, None).unwrap();
        assert_eq!(t.totals(), vec![3, 0, 0]);
    }

    #[test]
    fn ci_audit_residue_field() {
        let c = ctx(2);
        let k = residue_field(Ring::Frob { q: 2 }, c);
        let a = ci_slope_audit(k.eval(2).as_ref(), 8).unwrap();
        assert!(!a.free);
        assert!(matches!(a.verdict, CiVerdict::Pattern { .. }));
        let f = free_family(Ring::Frob { q: 2 }, vec![FreeGen::trivial(c)], c);
        assert_eq!(ci_slope_audit(f.eval(2).as_ref(), 6).unwrap().verdict, CiVerdict::Flat);
    }
}
