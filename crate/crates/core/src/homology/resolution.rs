//! Minimal graded free resolutions over R = k[x₁..xₙ]/m^[q].
//!
//! Everything is computed one torus weight at a time. A generator h of F_i
//! has a weight wt(h) and an image in (F_{i−1})_{wt(h)}; the weight-w part of
//! F_i has basis {h : w − wt(h) ∈ [0, q)ⁿ}, the element x^{w − wt(h)}·h.
//! Weights are visited in degree order, and at each weight the new
//! generators of F_i extend the image of the old ones to ker(F_{i−1} → F_{i−2}).

use super::table::BettiTable;
use crate::error::{invariant, Error, Result};
use crate::evaluation::{act_monomial, GradedModule, Ring};
use crate::glideals::compositions;
use crate::limits;
use crate::linalg::{Echelon, Mat};
use serde::Serialize;
use std::collections::HashMap;

/// A generator of some F_i: weight and image. For i = 0 the image is a
/// dense vector in M_wt; otherwise sparse (generator index in F_{i−1}, coefficient).
#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    pub weight: Vec<u32>,
    pub image: Vec<(usize, u32)>,
}

/// Output of [`minimal_resolution`]: the generators of each F_i with their
/// images, which determine every boundary map.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionCertificate {
    pub q: u32,
    pub n: usize,
    pub levels: Vec<Vec<Generator>>,
    /// Largest degree processed; above it no F_i with i ≤ i_max has generators.
    pub degree_reached: u32,
    /// True when the search stopped at j_max rather than at the proven bound.
    pub truncated: bool,
    pub minimal: bool,
}

impl ResolutionCertificate {
    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Degrees of the generators of F_i.
    pub fn shifts(&self, i: usize) -> Vec<u32> {
        self.levels[i].iter().map(|g| g.weight.iter().sum()).collect()
    }
}

struct Engine<'a> {
    m: &'a dyn GradedModule,
    q: u32,
    p: u32,
    levels: Vec<Vec<Generator>>,
    /// Per level and weight, the generator indices forming the basis of (F_i)_w.
    basis: Vec<HashMap<Vec<u32>, Vec<usize>>>,
    /// D₀ at each weight: columns indexed like `basis[0][w]`.
    d0: HashMap<Vec<u32>, Mat>,
}

impl<'a> Engine<'a> {
    fn basis_at(&mut self, i: usize, w: &[u32]) -> Vec<usize> {
        if let Some(b) = self.basis[i].get(w) {
            return b.clone();
        }
        let q = self.q;
        let b: Vec<usize> = self.levels[i]
            .iter()
            .enumerate()
            .filter(|(_, g)| g.weight.iter().zip(w).all(|(&a, &b)| a <= b && b - a < q))
            .map(|(k, _)| k)
            .collect();
        b
    }

    /// Boundary F_i → F_{i−1} at weight w for i ≥ 1, columns over `cols`.
    fn boundary(&mut self, i: usize, w: &[u32], cols: &[usize]) -> (Mat, Vec<usize>) {
        let rows = self.basis_at(i - 1, w);
        let index: HashMap<usize, usize> = rows.iter().enumerate().map(|(r, &g)| (g, r)).collect();
        let mut d = Mat::zeros(rows.len(), cols.len(), self.p);
        for (c, &h) in cols.iter().enumerate() {
            for &(g, coeff) in &self.levels[i][h].image {
                if let Some(&r) = index.get(&g) {
                    d.add_to(r, c, coeff);
                }
            }
        }
        (d, rows)
    }

    /// D₀ : F₀ → M at weight w, columns over `cols`.
    fn boundary0(&mut self, w: &[u32], cols: &[usize]) -> Mat {
        let dim = self.m.dim(w);
        let mut out = Mat::zeros(dim, cols.len(), self.p);
        for (c, &h) in cols.iter().enumerate() {
            let g = &self.levels[0][h];
            let col: Vec<u32> = if g.weight == w {
                let mut v = vec![0u32; dim];
                for &(k, x) in &g.image {
                    v[k] = x;
                }
                v
            } else {
                // x^{w − wt} h = x_k · (x^{w − wt − e_k} h), reusing the stored lower weight.
                let k = (0..w.len()).find(|&k| w[k] > g.weight[k]).unwrap();
                let mut lower = w.to_vec();
                lower[k] -= 1;
                let lower_cols = self.basis_at(0, &lower);
                let pos = lower_cols.iter().position(|&x| x == h).expect("generator lies in lower weight");
                let prev = self.d0.get(&lower).expect("lower weight processed").col(pos);
                self.m.act(k, &lower).apply(&prev)
            };
            for (r, &x) in col.iter().enumerate() {
                out.set(r, c, x);
            }
        }
        out
    }

    fn process_weight(&mut self, w: &[u32], i_max: usize) -> Result<()> {
        limits::check()?;
        // Level 0.
        let dim = self.m.dim(w);
        let old0 = self.basis_at(0, w);
        let d_old = self.boundary0(w, &old0);
        let mut ech = Echelon::new(dim, self.p);
        for c in 0..d_old.cols() {
            ech.insert(&d_old.col(c));
        }
        let mut new0 = Vec::new();
        for k in 0..dim {
            let mut e = vec![0u32; dim];
            e[k] = 1;
            if ech.insert(&e) {
                new0.push(Generator { weight: w.to_vec(), image: vec![(k, 1)] });
            }
        }
        let start = self.levels[0].len();
        self.levels[0].extend(new0);
        let mut cols0 = old0;
        cols0.extend(start..self.levels[0].len());
        let full0 = if cols0.len() == d_old.cols() { d_old } else { self.boundary0(w, &cols0) };
        self.basis[0].insert(w.to_vec(), cols0.clone());
        self.d0.insert(w.to_vec(), full0.clone());
        if full0.rank() != dim {
            return invariant(format!("F₀ → M not surjective at {w:?}"));
        }

        // prev_d = D_{i−1} at w; its kernel is covered by F_i.
        let mut prev_d = full0;
        let mut prev_cols = cols0;
        for i in 1..=i_max {
            let kernel = prev_d.kernel();
            let old = self.basis_at(i, w);
            let (d_old, rows) = self.boundary(i, w, &old);
            debug_assert_eq!(rows, prev_cols);
            let mut ech = Echelon::new(rows.len(), self.p);
            for c in 0..d_old.cols() {
                ech.insert(&d_old.col(c));
            }
            let mut fresh = Vec::new();
            for c in 0..kernel.cols() {
                let v = kernel.col(c);
                if ech.insert(&v) {
                    for (r, &g) in rows.iter().enumerate() {
                        if v[r] != 0 && self.levels[i - 1][g].weight == w {
                            return invariant(format!("non-minimal syzygy at level {i}, weight {w:?}"));
                        }
                    }
                    let image = rows.iter().zip(&v).filter(|(_, &x)| x != 0).map(|(&g, &x)| (g, x)).collect();
                    fresh.push(Generator { weight: w.to_vec(), image });
                }
            }
            let start = self.levels[i].len();
            self.levels[i].extend(fresh);
            let mut cols = old;
            cols.extend(start..self.levels[i].len());
            let (d_full, _) = self.boundary(i, w, &cols);
            if !prev_d.mul(&d_full).is_zero() {
                return invariant(format!("d² ≠ 0 at level {i}, weight {w:?}"));
            }
            if d_full.rank() != kernel.cols() {
                return invariant(format!("not exact at level {}, weight {w:?}", i - 1));
            }
            self.basis[i].insert(w.to_vec(), cols.clone());
            prev_d = d_full;
            prev_cols = cols;
        }
        Ok(())
    }
}

/// Minimal free resolution of M over k[x₁..xₙ]/m^[q] through F_{i_max}.
///
/// Without `j_max`, degrees are processed until none of F₀..F_{i_max} can
/// acquire further generators: F_i is generated in degrees at most
/// t_{i−1} + n(q−1), the top degree of F_{i−1}.
pub fn minimal_resolution(m: &dyn GradedModule, i_max: u32, j_max: Option<u32>) -> Result<(ResolutionCertificate, BettiTable)> {
    let Ring::Frob { q } = m.ring() else {
        return Err(Error::Domain(format!("minimal_resolution needs S/m^[q], got {}", m.ring())));
    };
    if let (Some(v), Some(j)) = (m.valid_through(), j_max) {
        if j > v {
            return Err(Error::CutoffOverflow(format!("j_max = {j} exceeds the faithful range ≤ {v}")));
        }
    }
    let n = m.n();
    let p = m.ctx().p();
    let i_max = i_max as usize;
    let top_m = crate::evaluation::maxdeg(m)?;
    let spread = n as i64 * (q as i64 - 1);
    let mut eng = Engine {
        m,
        q,
        p,
        levels: vec![Vec::new(); i_max + 1],
        basis: vec![HashMap::new(); i_max + 1],
        d0: HashMap::new(),
    };
    let mut d = 0u32;
    let mut truncated = false;
    loop {
        // Bound on generator degrees of each level given what is known so far.
        let mut bound = top_m;
        for i in 1..=i_max {
            let t = eng.levels[i - 1].iter().map(|g| g.weight.iter().sum::<u32>() as i64).max().unwrap_or(-1);
            let b = if t < 0 { -1 } else { t + spread };
            bound = bound.max(b);
        }
        if d as i64 > bound {
            break;
        }
        if j_max.is_some_and(|j| d > j) {
            truncated = true;
            break;
        }
        for w in compositions(d, n, d) {
            eng.process_weight(&w, i_max)?;
        }
        d += 1;
    }
    let degree_reached = d.saturating_sub(1);
    let mut table = BettiTable::new(m.ring(), p, n, i_max as u32, j_max.unwrap_or(degree_reached));
    for (i, level) in eng.levels.iter().enumerate() {
        for g in level {
            table.add(i as u32, g.weight.iter().sum(), 1);
            if g.weight.windows(2).all(|x| x[0] >= x[1]) {
                table.add_weight(i as u32, &g.weight, 1);
            }
        }
    }
    let cert = ResolutionCertificate { q, n, levels: eng.levels, degree_reached, truncated, minimal: true };
    Ok((cert, table))
}

/// Recomputes d² = 0 and exactness from a certificate, independently of the engine's own checks.
pub fn verify_certificate(m: &dyn GradedModule, cert: &ResolutionCertificate) -> Result<()> {
    let q = cert.q;
    let p = m.ctx().p();
    let in_box = |g: &Generator, w: &[u32]| g.weight.iter().zip(w).all(|(&a, &b)| a <= b && b - a < q);
    for d in 0..=cert.degree_reached {
        for w in compositions(d, cert.n, d) {
            let bases: Vec<Vec<usize>> = cert
                .levels
                .iter()
                .map(|lvl| (0..lvl.len()).filter(|&k| in_box(&lvl[k], &w)).collect())
                .collect();
            // D₀ columns from scratch via act_monomial.
            let dim = m.dim(&w);
            let mut d0 = Mat::zeros(dim, bases[0].len(), p);
            for (c, &h) in bases[0].iter().enumerate() {
                let g = &cert.levels[0][h];
                let mut v = vec![0u32; m.dim(&g.weight)];
                for &(k, x) in &g.image {
                    v[k] = x;
                }
                let shift: Vec<u32> = w.iter().zip(&g.weight).map(|(a, b)| a - b).collect();
                let col = act_monomial(m, &g.weight, &shift).apply(&v);
                for (r, &x) in col.iter().enumerate() {
                    d0.set(r, c, x);
                }
            }
            if d0.rank() != dim {
                return invariant(format!("F₀ → M not surjective at {w:?}"));
            }
            let mut prev = d0;
            for i in 1..cert.levels.len() {
                let index: HashMap<usize, usize> = bases[i - 1].iter().enumerate().map(|(r, &g)| (g, r)).collect();
                let mut di = Mat::zeros(bases[i - 1].len(), bases[i].len(), p);
                for (c, &h) in bases[i].iter().enumerate() {
                    for &(g, x) in &cert.levels[i][h].image {
                        if let Some(&r) = index.get(&g) {
                            di.add_to(r, c, x);
                        }
                    }
                }
                if prev.cols() > 0 && di.cols() > 0 && !prev.mul(&di).is_zero() {
                    return invariant(format!("d² ≠ 0 at level {i}, weight {w:?}"));
                }
                let ker = prev.cols() - prev.rank();
                if di.rank() != ker {
                    return invariant(format!("not exact at level {}, weight {w:?}", i - 1));
                }
                for &h in &bases[i] {
                    let g = &cert.levels[i][h];
                    if g.weight == w && g.image.iter().any(|&(k, _)| cert.levels[i - 1][k].weight == w) {
                        return invariant(format!("unit entry in boundary at level {i}, weight {w:?}"));
                    }
                }
                prev = di;
            }
        }
    }
    Ok(())
}
