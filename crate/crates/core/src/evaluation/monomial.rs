//! Families with monomial bases: quotients S/I, subquotients I/J and free
//! modules A ⊗ W with W spanned by monomials.

use super::{EvalCache, GradedModule, Module, ModuleFamily, Ring, WeightCache};
use crate::combinatorics::PrimeContext;
use crate::error::{domain, Result};
use crate::glideals::{ideal_contains, ideal_member, GLIdeal};
use crate::linalg::Mat;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Generator space of a free piece: the degree-`degree` component of `ideal`,
/// a polynomial representation with a monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeGen {
    pub ideal: GLIdeal,
    pub degree: u32,
}

impl FreeGen {
    /// The trivial representation in degree 0.
    pub fn trivial(ctx: PrimeContext) -> Self {
        Self { ideal: GLIdeal::unit(ctx), degree: 0 }
    }

    /// The standard representation V, spanned by the variables.
    pub fn standard(ctx: PrimeContext) -> Self {
        Self { ideal: GLIdeal::unit(ctx), degree: 1 }
    }

    /// V^(r), spanned by the p^r-th powers of the variables.
    pub fn frobenius(r: u32, ctx: PrimeContext) -> Self {
        Self { ideal: GLIdeal::frobenius_power(r, ctx), degree: ctx.pow(r) as u32 }
    }

    /// All monomials of degree d.
    pub fn sym(d: u32, ctx: PrimeContext) -> Self {
        Self { ideal: GLIdeal::unit(ctx), degree: d }
    }

    fn is_trivial(&self) -> bool {
        self.degree == 0 && self.ideal.is_unit()
    }
}

impl fmt::Display for FreeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.ideal, self.degree)
    }
}

/// One summand of a monomial family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    /// upper / lower with lower ⊆ upper; basis: monomials in upper but not in lower.
    Sub { upper: GLIdeal, lower: GLIdeal },
    /// Free module on a monomial generator space.
    Free { gen: FreeGen },
}

impl Piece {
    fn describe(&self, ring: Ring) -> String {
        match self {
            Piece::Sub { upper, lower } if upper.is_unit() && lower.is_zero() => ring.to_string(),
            Piece::Sub { upper, lower } if upper.is_unit() => format!("{ring}/({lower})"),
            Piece::Sub { upper, lower } if lower.is_zero() => format!("({upper}){ring}"),
            Piece::Sub { upper, lower } => format!("({upper})/({lower}) over {ring}"),
            Piece::Free { gen } => format!("{ring}⊗{gen}"),
        }
    }
}

struct Shared {
    ctx: PrimeContext,
    ring: Ring,
    pieces: Vec<Piece>,
    /// (piece, sorted weight) → whether the monomial is a basis vector.
    members: Mutex<HashMap<(usize, Vec<u32>), bool>>,
    bounds: Vec<(Option<u32>, Option<u32>)>,
}

impl Shared {
    fn sub_member(&self, piece: usize, w: &[u32]) -> bool {
        let Piece::Sub { upper, lower } = &self.pieces[piece] else { unreachable!() };
        if !self.ring.in_box(w) {
            return false;
        }
        let mut key: Vec<u32> = w.iter().copied().filter(|&x| x > 0).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(&b) = self.members.lock().unwrap().get(&(piece, key.clone())) {
            return b;
        }
        let b = ideal_member(&key, upper) && !ideal_member(&key, lower);
        self.members.lock().unwrap().insert((piece, key), b);
        b
    }
}

/// Largest r ≤ 40 with m^[p^r] not contained in `lower`, giving an exponent cap.
fn coordinate_cap(lower: &GLIdeal) -> Option<u32> {
    let ctx = lower.ctx();
    if lower.is_zero() {
        return None;
    }
    for r in 0..40u32 {
        let q = ctx.pow(r);
        if q > u32::MAX as u64 / 2 {
            break;
        }
        if ideal_contains(lower, &GLIdeal::frobenius_power(r, ctx)) {
            return Some(q as u32 - 1);
        }
    }
    None
}

/// Smallest D ≤ 64 with m^D ⊆ `lower`, giving a degree cap of D − 1.
fn degree_cap(lower: &GLIdeal) -> Option<u32> {
    if lower.is_zero() {
        return None;
    }
    // m^D is generated by the orbit of x₁⋯x_D.
    (0..=64u32).find(|&d| ideal_member(&vec![1; d as usize], lower)).map(|d| d.saturating_sub(1))
}

/// A family whose evaluations have monomial bases.
pub struct MonomialFamily {
    shared: Arc<Shared>,
    cache: EvalCache,
}

impl MonomialFamily {
    pub fn new(ctx: PrimeContext, ring: Ring, pieces: Vec<Piece>) -> Result<Arc<Self>> {
        let mut norm = Vec::with_capacity(pieces.len());
        for piece in pieces {
            match piece {
                Piece::Sub { upper, lower } => {
                    if !ideal_contains(&upper, &lower) {
                        return domain(format!("({lower}) is not contained in ({upper})"));
                    }
                    norm.push(Piece::Sub { upper, lower });
                }
                Piece::Free { gen } if gen.is_trivial() => {
                    norm.push(Piece::Sub { upper: GLIdeal::unit(ctx), lower: GLIdeal::zero(ctx) })
                }
                other => norm.push(other),
            }
        }
        let bounds = norm
            .iter()
            .map(|piece| match piece {
                Piece::Sub { upper, lower } => {
                    if upper == lower {
                        return (Some(0), Some(0));
                    }
                    let c = match (coordinate_cap(lower), ring.box_bound()) {
                        (Some(a), Some(b)) => Some(a.min(b)),
                        (a, b) => a.or(b),
                    };
                    (c, degree_cap(lower))
                }
                Piece::Free { gen } => (ring.box_bound().map(|b| b + gen.degree), None),
            })
            .collect();
        let shared = Shared { ctx, ring, pieces: norm, members: Mutex::new(HashMap::new()), bounds };
        Ok(Arc::new(Self { shared: Arc::new(shared), cache: EvalCache::default() }))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.shared.pieces
    }

    pub fn monomial_module(&self, n: usize) -> MonomialModule {
        MonomialModule { n, shared: self.shared.clone(), free: WeightCache::default() }
    }

    /// Direct sum of two monomial families over the same ring.
    pub fn sum(a: &MonomialFamily, b: &MonomialFamily) -> Result<Arc<Self>> {
        if a.shared.ring != b.shared.ring {
            return domain("summands live over different rings");
        }
        let mut pieces = a.pieces().to_vec();
        pieces.extend_from_slice(b.pieces());
        Self::new(a.shared.ctx, a.shared.ring, pieces)
    }
}

impl ModuleFamily for MonomialFamily {
    fn ctx(&self) -> PrimeContext {
        self.shared.ctx
    }
    fn ring(&self) -> Ring {
        self.shared.ring
    }
    fn eval(&self, n: usize) -> Module {
        self.cache.get_or_insert(n, || Arc::new(self.monomial_module(n)))
    }
    fn describe(&self) -> String {
        if self.shared.pieces.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.shared.pieces.iter().map(|pc| pc.describe(self.shared.ring)).collect();
        parts.join(" ⊕ ")
    }
}

/// Evaluation of a [`MonomialFamily`] in n variables.
pub struct MonomialModule {
    n: usize,
    shared: Arc<Shared>,
    /// Per weight, the generator monomials g of each free piece with x^g | x^w.
    free: WeightCache<Vec<Vec<Vec<u32>>>>,
}

/// Sub-vectors g ≤ w with |g| = d, in lexicographically increasing order.
fn bounded_compositions(w: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, rem: u32, w: &[u32], suffix: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if suffix[i] < rem {
            return;
        }
        for a in 0..=w[i].min(rem) {
            cur.push(a);
            rec(i + 1, rem - a, w, suffix, cur, out);
            cur.pop();
        }
    }
    let mut suffix = vec![0u32; w.len() + 1];
    for i in (0..w.len()).rev() {
        suffix[i] = suffix[i + 1] + w[i];
    }
    let mut out = Vec::new();
    rec(0, d, w, &suffix, &mut Vec::new(), &mut out);
    out
}

impl MonomialModule {
    fn free_basis(&self, w: &[u32]) -> Arc<Vec<Vec<Vec<u32>>>> {
        self.free.get_or_insert(w, || {
            self.shared
                .pieces
                .iter()
                .map(|piece| match piece {
                    Piece::Sub { .. } => Vec::new(),
                    Piece::Free { gen } => bounded_compositions(w, gen.degree)
                        .into_iter()
                        .filter(|g| {
                            let v: Vec<u32> = w.iter().zip(g).map(|(a, b)| a - b).collect();
                            self.shared.ring.in_box(&v) && ideal_member(g, &gen.ideal)
                        })
                        .collect(),
                })
                .collect()
        })
    }

    fn piece_dims(&self, w: &[u32]) -> Vec<usize> {
        let free = self.has_free().then(|| self.free_basis(w));
        self.shared
            .pieces
            .iter()
            .enumerate()
            .map(|(k, piece)| match piece {
                Piece::Sub { .. } => self.shared.sub_member(k, w) as usize,
                Piece::Free { .. } => free.as_ref().unwrap()[k].len(),
            })
            .collect()
    }

    fn has_free(&self) -> bool {
        self.shared.pieces.iter().any(|pc| matches!(pc, Piece::Free { .. }))
    }

    /// Basis labels at w: (piece, generator monomial), the latter empty for subquotient pieces.
    pub fn basis_labels(&self, w: &[u32]) -> Vec<(usize, Vec<u32>)> {
        let free = self.has_free().then(|| self.free_basis(w));
        let mut out = Vec::new();
        for (k, piece) in self.shared.pieces.iter().enumerate() {
            match piece {
                Piece::Sub { .. } => {
                    if self.shared.sub_member(k, w) {
                        out.push((k, Vec::new()));
                    }
                }
                Piece::Free { .. } => {
                    for g in &free.as_ref().unwrap()[k] {
                        out.push((k, g.clone()));
                    }
                }
            }
        }
        out
    }
}

impl GradedModule for MonomialModule {
    fn n(&self) -> usize {
        self.n
    }
    fn ctx(&self) -> PrimeContext {
        self.shared.ctx
    }
    fn ring(&self) -> Ring {
        self.shared.ring
    }
    fn dim(&self, w: &[u32]) -> usize {
        debug_assert_eq!(w.len(), self.n);
        self.piece_dims(w).iter().sum()
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        let p = self.shared.ctx.p();
        let src = self.basis_labels(w);
        let t = super::add_unit(w, i);
        let tgt = self.basis_labels(&t);
        let mut m = Mat::zeros(tgt.len(), src.len(), p);
        for (c, label) in src.iter().enumerate() {
            // Labels are sorted by (piece, generator), so a binary search finds the image.
            if let Ok(r) = tgt.binary_search(label) {
                m.set(r, c, 1);
            }
        }
        m
    }
    fn coord_bound(&self) -> Option<u32> {
        self.shared.bounds.iter().try_fold(0, |acc, (c, _)| c.map(|c| acc.max(c)))
    }
    fn degree_bound(&self) -> Option<u32> {
        let n = self.n as u32;
        self.shared.bounds.iter().zip(&self.shared.pieces).try_fold(0, |acc, ((c, d), piece)| {
            let by_coord = match piece {
                Piece::Free { gen } => c.map(|c| (c - gen.degree) * n + gen.degree),
                Piece::Sub { .. } => c.map(|c| c * n),
            };
            let b = match (by_coord, *d) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }?;
            Some(acc.max(b))
        })
    }
    fn symmetric(&self) -> bool {
        true
    }
    fn describe(&self) -> String {
        let parts: Vec<String> = self.shared.pieces.iter().map(|pc| pc.describe(self.shared.ring)).collect();
        format!("({}){{k^{}}}", parts.join(" ⊕ "), self.n)
    }
}

/// A map of monomial families sending each basis monomial of a source piece
/// to a multiple of the same monomial in a target piece.
pub struct MonomialMap {
    source: Arc<MonomialFamily>,
    target: Arc<MonomialFamily>,
    entries: Vec<(usize, usize, u32)>,
}

impl MonomialMap {
    /// `entries` lists (source piece, target piece, coefficient).
    pub fn new(source: Arc<MonomialFamily>, target: Arc<MonomialFamily>, entries: Vec<(usize, usize, u32)>) -> Result<Self> {
        if source.ring() != target.ring() {
            return domain("map between families over different rings");
        }
        for &(s, t, _) in &entries {
            let (Some(sp), Some(tp)) = (source.pieces().get(s), target.pieces().get(t)) else {
                return domain(format!("piece index out of range in map entry ({s}, {t})"));
            };
            match (sp, tp) {
                (Piece::Sub { upper: u1, lower: l1 }, Piece::Sub { upper: u2, lower: l2 }) => {
                    if !ideal_contains(u2, u1) || !ideal_contains(l2, l1) {
                        return domain(format!("x^w ↦ x^w is not well defined from piece {s} to piece {t}"));
                    }
                }
                (Piece::Free { gen: g1 }, Piece::Free { gen: g2 }) if g1 == g2 => {}
                _ => return domain(format!("unsupported map from piece {s} to piece {t}")),
            }
        }
        Ok(Self { source, target, entries })
    }

    pub fn source(&self) -> Arc<MonomialFamily> {
        self.source.clone()
    }

    pub fn target(&self) -> Arc<MonomialFamily> {
        self.target.clone()
    }

    /// The map eval(n)_w of the source → eval(n)_w of the target.
    pub fn matrix(&self, n: usize, w: &[u32]) -> Mat {
        let p = self.source.ctx().p();
        let src = self.source.monomial_module(n).basis_labels(w);
        let tgt = self.target.monomial_module(n).basis_labels(w);
        let mut m = Mat::zeros(tgt.len(), src.len(), p);
        for (c, (sp, g)) in src.iter().enumerate() {
            for &(s, t, coeff) in &self.entries {
                if s != *sp {
                    continue;
                }
                if let Ok(r) = tgt.binary_search(&(t, g.clone())) {
                    m.add_to(r, c, coeff);
                }
            }
        }
        m
    }
}

/// A ⊗ (W₁ ⊕ … ⊕ W_k) for the listed generator spaces; empty list gives 0.
pub fn free_family(ring: Ring, gens: Vec<FreeGen>, ctx: PrimeContext) -> Arc<MonomialFamily> {
    let pieces = gens.into_iter().map(|gen| Piece::Free { gen }).collect();
    MonomialFamily::new(ctx, ring, pieces).expect("free pieces are always valid")
}

/// A/I.
pub fn quotient_family(ring: Ring, ideal: &GLIdeal) -> Arc<MonomialFamily> {
    let ctx = ideal.ctx();
    MonomialFamily::new(ctx, ring, vec![Piece::Sub { upper: GLIdeal::unit(ctx), lower: ideal.clone() }])
        .expect("every ideal lies in the unit ideal")
}

/// I/J as an A-module; J ⊆ I is required.
pub fn ideal_family(ring: Ring, upper: &GLIdeal, lower: &GLIdeal) -> Result<Arc<MonomialFamily>> {
    MonomialFamily::new(upper.ctx(), ring, vec![Piece::Sub { upper: upper.clone(), lower: lower.clone() }])
}

/// The residue field k = A/m.
pub fn residue_field(ring: Ring, ctx: PrimeContext) -> Arc<MonomialFamily> {
    quotient_family(ring, &GLIdeal::frobenius_power(0, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{check_module, check_tower, degree_dims, generation_degrees, maxdeg};

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn quotient_by_frobenius_square() {
        let c = ctx(2);
        let fam = quotient_family(Ring::Poly, &GLIdeal::frobenius_power(1, c));
        let m = fam.eval(2);
        assert_eq!(degree_dims(m.as_ref(), 4), vec![1, 2, 1, 0, 0]);
        check_module(m.as_ref(), 3).unwrap();
        check_tower(fam.as_ref(), 2, 4).unwrap();
    }

    #[test]
    fn frobenius_ring_top_degree() {
        for (p, q) in [(2, 2), (3, 3), (2, 4), (3, 9)] {
            let fam = free_family(Ring::Frob { q }, vec![FreeGen::trivial(ctx(p))], ctx(p));
            for n in 1..=4 {
                assert_eq!(maxdeg(fam.eval(n).as_ref()).unwrap(), ((q - 1) * n as u32) as i64);
            }
        }
    }

    #[test]
    fn free_on_frobenius_twist() {
        let c = ctx(2);
        let fam = free_family(Ring::Frob { q: 2 }, vec![FreeGen::frobenius(1, c)], c);
        let m = fam.eval(3);
        check_module(m.as_ref(), 6).unwrap();
        check_tower(fam.as_ref(), 2, 5).unwrap();
        assert_eq!(generation_degrees(fam.as_ref(), 3, 6).into_iter().collect::<Vec<_>>(), vec![(2, 3)]);
        // total dimension = 3 generators · 2^3
        assert_eq!(degree_dims(m.as_ref(), 6).iter().sum::<u64>(), 24);
    }

    #[test]
    fn ideal_generation_degree() {
        let c = ctx(2);
        let i = GLIdeal::parse("m[p^1]*m", c).unwrap();
        let fam = ideal_family(Ring::Poly, &i, &GLIdeal::zero(c)).unwrap();
        let gens = generation_degrees(fam.as_ref(), 4, 6);
        assert_eq!(gens.keys().copied().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn containment_is_enforced() {
        let c = ctx(2);
        let m = GLIdeal::frobenius_power(0, c);
        let m2 = GLIdeal::frobenius_power(1, c);
        assert!(ideal_family(Ring::Poly, &m2, &m).is_err());
        assert!(ideal_family(Ring::Poly, &m, &m2).is_ok());
    }

    #[test]
    fn unit_quotient_is_zero() {
        let c = ctx(3);
        let fam = quotient_family(Ring::Poly, &GLIdeal::unit(c));
        assert_eq!(maxdeg(fam.eval(3).as_ref()).unwrap(), -1);
    }

    #[test]
    fn monomial_map_projection() {
        let c = ctx(2);
        let ring = Ring::Frob { q: 2 };
        let sm = quotient_family(ring, &GLIdeal::zero(c));
        let k = residue_field(ring, c);
        let proj = MonomialMap::new(sm, k, vec![(0, 0, 1)]).unwrap();
        assert_eq!(proj.matrix(2, &[0, 0]).rank(), 1);
        assert_eq!(proj.matrix(2, &[1, 0]).rows(), 0);
    }
}
