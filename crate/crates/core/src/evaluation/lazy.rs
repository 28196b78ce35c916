//! Modules computed weight by weight from a parent module.

use super::{add_unit, degree, GradedModule, Module, Ring, WeightCache};
use crate::combinatorics::PrimeContext;
use crate::linalg::Mat;

pub(crate) fn block_diagonal(blocks: &[Mat], p: u32) -> Mat {
    let rows: usize = blocks.iter().map(Mat::rows).sum();
    let cols: usize = blocks.iter().map(Mat::cols).sum();
    let mut out = Mat::zeros(rows, cols, p);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let v = b.get(i, j);
                if v != 0 {
                    out.set(r0 + i, c0 + j, v);
                }
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// The weight-m slice of a module in n+1 variables along its last variable,
/// viewed as a module in the first n variables (degrees drop by m).
pub struct SliceModule {
    parent: Module,
    m: u32,
}

impl SliceModule {
    pub fn new(parent: Module, m: u32) -> Self {
        assert!(parent.n() >= 1, "slicing needs at least one variable");
        Self { parent, m }
    }

    fn lift(&self, w: &[u32]) -> Vec<u32> {
        let mut v = w.to_vec();
        v.push(self.m);
        v
    }
}

impl GradedModule for SliceModule {
    fn n(&self) -> usize {
        self.parent.n() - 1
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        if self.parent.coord_bound().is_some_and(|c| self.m > c) {
            return 0;
        }
        self.parent.dim(&self.lift(w))
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        if self.parent.coord_bound().is_some_and(|c| self.m > c) {
            return Mat::zeros(0, 0, self.ctx().p());
        }
        self.parent.act(i, &self.lift(w))
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parent.coord_bound()
    }
    fn degree_bound(&self) -> Option<u32> {
        let c = self.parent.coord_bound();
        let by_coord = c.map(|c| c.saturating_mul(self.n() as u32));
        let by_degree = self.parent.degree_bound().map(|b| b.saturating_sub(self.m));
        match (by_coord, by_degree) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
    fn valid_through(&self) -> Option<u32> {
        self.parent.valid_through().map(|v| v.saturating_sub(self.m))
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("slice({}, {})", self.m, self.parent.describe())
    }
}

pub type BasisFn = Box<dyn Fn(&[u32]) -> Mat + Send + Sync>;

struct SubData {
    basis: Mat,
    left_inv: Mat,
}

/// Submodule given by a basis of each weight space (columns in parent coordinates).
pub struct SubModule {
    parent: Module,
    basis_fn: BasisFn,
    cache: WeightCache<SubData>,
    label: &'static str,
}

impl SubModule {
    /// `basis_fn(w)` may return dependent columns; an independent subset is kept.
    pub fn new(parent: Module, basis_fn: BasisFn, label: &'static str) -> Self {
        Self { parent, basis_fn, cache: WeightCache::default(), label }
    }

    fn data(&self, w: &[u32]) -> std::sync::Arc<SubData> {
        self.cache.get_or_insert(w, || {
            let p = self.ctx().p();
            let d = self.parent.dim(w);
            let raw = if d == 0 { Mat::zeros(0, 0, p) } else { (self.basis_fn)(w) };
            let basis = if raw.cols() == 0 { Mat::zeros(d, 0, p) } else { raw.column_basis() };
            let left_inv = basis.left_inverse().expect("column basis has full rank");
            SubData { basis, left_inv }
        })
    }

    /// Columns spanning the submodule at w, in parent coordinates.
    pub fn basis(&self, w: &[u32]) -> Mat {
        self.data(w).basis.clone()
    }

    pub fn parent(&self) -> &Module {
        &self.parent
    }
}

impl GradedModule for SubModule {
    fn n(&self) -> usize {
        self.parent.n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        if self.parent.dim(w) == 0 {
            return 0;
        }
        self.data(w).basis.cols()
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        let src = self.data(w);
        let tgt = self.data(&add_unit(w, i));
        if src.basis.cols() == 0 || tgt.basis.cols() == 0 {
            return Mat::zeros(tgt.basis.cols(), src.basis.cols(), self.ctx().p());
        }
        tgt.left_inv.mul(&self.parent.act(i, w).mul(&src.basis))
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parent.coord_bound()
    }
    fn degree_bound(&self) -> Option<u32> {
        self.parent.degree_bound()
    }
    fn valid_through(&self) -> Option<u32> {
        self.parent.valid_through()
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("{}({})", self.label, self.parent.describe())
    }
}

struct QuotData {
    proj: Mat,
    sect: Mat,
}

/// Quotient of the parent by the subspaces spanned by `sub_fn(w)`.
pub struct QuotientModule {
    parent: Module,
    sub_fn: BasisFn,
    cache: WeightCache<QuotData>,
    label: &'static str,
}

impl QuotientModule {
    pub fn new(parent: Module, sub_fn: BasisFn, label: &'static str) -> Self {
        Self { parent, sub_fn, cache: WeightCache::default(), label }
    }

    fn data(&self, w: &[u32]) -> std::sync::Arc<QuotData> {
        self.cache.get_or_insert(w, || {
            let p = self.ctx().p();
            let d = self.parent.dim(w);
            let u = if d == 0 { Mat::zeros(0, 0, p) } else { (self.sub_fn)(w) };
            // Rows of rref(Uᵀ) have pivots P; the complement coordinates C index the quotient.
            let (r, pivots) = if u.cols() == 0 { (Mat::zeros(0, d, p), Vec::new()) } else { u.transpose().rref() };
            let comp: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
            let mut proj = Mat::zeros(comp.len(), d, p);
            let mut sect = Mat::zeros(d, comp.len(), p);
            for (k, &c) in comp.iter().enumerate() {
                proj.set(k, c, 1);
                sect.set(c, k, 1);
            }
            for (row, &pc) in pivots.iter().enumerate() {
                for (k, &c) in comp.iter().enumerate() {
                    let v = r.get(row, c);
                    if v != 0 {
                        proj.set(k, pc, p - v);
                    }
                }
            }
            QuotData { proj, sect }
        })
    }

    /// Projection from parent coordinates at w onto the quotient.
    pub fn projection(&self, w: &[u32]) -> Mat {
        self.data(w).proj.clone()
    }

    /// A section of the projection.
    pub fn section(&self, w: &[u32]) -> Mat {
        self.data(w).sect.clone()
    }

    pub fn parent(&self) -> &Module {
        &self.parent
    }
}

impl GradedModule for QuotientModule {
    fn n(&self) -> usize {
        self.parent.n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        if self.parent.dim(w) == 0 {
            return 0;
        }
        self.data(w).proj.rows()
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        let src = self.data(w);
        let tgt = self.data(&add_unit(w, i));
        if src.sect.cols() == 0 || tgt.proj.rows() == 0 {
            return Mat::zeros(tgt.proj.rows(), src.sect.cols(), self.ctx().p());
        }
        tgt.proj.mul(&self.parent.act(i, w).mul(&src.sect))
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parent.coord_bound()
    }
    fn degree_bound(&self) -> Option<u32> {
        self.parent.degree_bound()
    }
    fn valid_through(&self) -> Option<u32> {
        self.parent.valid_through()
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("{}({})", self.label, self.parent.describe())
    }
}

/// The submodule generated by all components of degree < d.
pub struct GeneratedSubModule {
    parent: Module,
    d: u32,
    cache: WeightCache<Mat>,
}

impl GeneratedSubModule {
    pub fn new(parent: Module, d: u32) -> Self {
        Self { parent, d, cache: WeightCache::default() }
    }

    /// Independent columns spanning M^{<d} at w.
    pub fn basis(&self, w: &[u32]) -> Mat {
        let p = self.parent.ctx().p();
        let dim = self.parent.dim(w);
        if dim == 0 {
            return Mat::zeros(0, 0, p);
        }
        if degree(w) < self.d {
            return Mat::identity(dim, p);
        }
        (*self.cache.get_or_insert(w, || {
            let mut cols: Vec<Vec<u32>> = Vec::new();
            for k in 0..w.len() {
                if w[k] == 0 {
                    continue;
                }
                let mut src = w.to_vec();
                src[k] -= 1;
                let b = self.basis(&src);
                if b.cols() == 0 {
                    continue;
                }
                let img = self.parent.act(k, &src).mul(&b);
                for c in 0..img.cols() {
                    cols.push(img.col(c));
                }
            }
            if cols.is_empty() {
                Mat::zeros(dim, 0, p)
            } else {
                Mat::from_cols(p, dim, &cols).column_basis()
            }
        }))
        .clone()
    }

    fn left_inv(&self, w: &[u32]) -> Mat {
        self.basis(w).left_inverse().expect("column basis has full rank")
    }
}

impl GradedModule for GeneratedSubModule {
    fn n(&self) -> usize {
        self.parent.n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        self.basis(w).cols()
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        let src = self.basis(w);
        let t = add_unit(w, i);
        let tgt = self.basis(&t);
        if src.cols() == 0 || tgt.cols() == 0 {
            return Mat::zeros(tgt.cols(), src.cols(), self.ctx().p());
        }
        self.left_inv(&t).mul(&self.parent.act(i, w).mul(&src))
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parent.coord_bound()
    }
    fn degree_bound(&self) -> Option<u32> {
        self.parent.degree_bound()
    }
    fn valid_through(&self) -> Option<u32> {
        self.parent.valid_through()
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("sub-below({}, {})", self.d, self.parent.describe())
    }
}

/// Direct sum; bases are concatenated in summand order.
pub struct DirectSumModule {
    parts: Vec<Module>,
}

impl DirectSumModule {
    pub fn new(parts: Vec<Module>) -> Self {
        assert!(!parts.is_empty());
        Self { parts }
    }
}

impl GradedModule for DirectSumModule {
    fn n(&self) -> usize {
        self.parts[0].n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parts[0].ctx()
    }
    fn ring(&self) -> Ring {
        self.parts[0].ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        self.parts.iter().map(|m| m.dim(w)).sum()
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        let blocks: Vec<Mat> = self.parts.iter().map(|m| m.act(i, w)).collect();
        block_diagonal(&blocks, self.ctx().p())
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parts.iter().map(|m| m.coord_bound()).try_fold(0, |acc, c| c.map(|c| acc.max(c)))
    }
    fn degree_bound(&self) -> Option<u32> {
        self.parts.iter().map(|m| m.degree_bound()).try_fold(0, |acc, c| c.map(|c| acc.max(c)))
    }
    fn valid_through(&self) -> Option<u32> {
        self.parts.iter().filter_map(|m| m.valid_through()).min()
    }
    fn symmetric(&self) -> bool {
        self.parts.iter().all(|m| m.symmetric())
    }
    fn describe(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|m| m.describe()).collect();
        format!("sum({})", inner.join(", "))
    }
}

/// The quotient M / M_{> top}: components above `top` are discarded.
pub struct TruncatedModule {
    parent: Module,
    top: u32,
}

impl TruncatedModule {
    pub fn new(parent: Module, top: u32) -> Self {
        Self { parent, top }
    }
}

impl GradedModule for TruncatedModule {
    fn n(&self) -> usize {
        self.parent.n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn dim(&self, w: &[u32]) -> usize {
        if degree(w) > self.top {
            0
        } else {
            self.parent.dim(w)
        }
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        if degree(w) >= self.top {
            return Mat::zeros(0, self.dim(w), self.ctx().p());
        }
        self.parent.act(i, w)
    }
    fn coord_bound(&self) -> Option<u32> {
        Some(self.parent.coord_bound().map_or(self.top, |c| c.min(self.top)))
    }
    fn degree_bound(&self) -> Option<u32> {
        Some(self.parent.degree_bound().map_or(self.top, |b| b.min(self.top)))
    }
    fn valid_through(&self) -> Option<u32> {
        Some(self.parent.valid_through().map_or(self.top, |v| v.min(self.top)))
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("trunc({}, {})", self.top, self.parent.describe())
    }
}

/// The same data regarded as a module over a different ring. Used to view a
/// module killed by m^[q] as a module over S/m^[q].
pub struct RingView {
    parent: Module,
    ring: Ring,
}

impl RingView {
    pub fn new(parent: Module, ring: Ring) -> Self {
        Self { parent, ring }
    }
}

impl GradedModule for RingView {
    fn n(&self) -> usize {
        self.parent.n()
    }
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.ring
    }
    fn dim(&self, w: &[u32]) -> usize {
        self.parent.dim(w)
    }
    fn act(&self, i: usize, w: &[u32]) -> Mat {
        self.parent.act(i, w)
    }
    fn coord_bound(&self) -> Option<u32> {
        self.parent.coord_bound()
    }
    fn degree_bound(&self) -> Option<u32> {
        self.parent.degree_bound()
    }
    fn valid_through(&self) -> Option<u32> {
        self.parent.valid_through()
    }
    fn symmetric(&self) -> bool {
        self.parent.symmetric()
    }
    fn describe(&self) -> String {
        format!("{} over {}", self.parent.describe(), self.ring)
    }
}
