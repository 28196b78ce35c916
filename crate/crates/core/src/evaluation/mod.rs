//! Finite truncations of GL-modules.
//!
//! A [`GradedModule`] is the evaluation M{kⁿ} of a GL-module, stored by torus
//! weight: every weight space is a small F_p-vector space and each variable
//! acts by a matrix between neighbouring weight spaces. A [`ModuleFamily`]
//! produces the evaluation for every n; the evaluations are compatible, with
//! eval(n) identified with the weights of eval(n+1) whose last entry is zero.

mod lazy;
mod monomial;

pub use lazy::{DirectSumModule, GeneratedSubModule, QuotientModule, RingView, SliceModule, SubModule, TruncatedModule};
pub use monomial::{
    free_family, ideal_family, quotient_family, residue_field, FreeGen, MonomialFamily, MonomialMap, Piece,
};

use crate::combinatorics::PrimeContext;
use crate::error::{domain, invariant, Result};
use crate::glideals::compositions;
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

pub type Wt = Vec<u32>;

/// The coefficient ring of a family: S itself or the artinian quotient S/m^[q].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Poly,
    Frob { q: u32 },
}

impl Ring {
    /// Largest exponent of a single variable that survives in the ring.
    pub fn box_bound(&self) -> Option<u32> {
        match self {
            Ring::Poly => None,
            Ring::Frob { q } => Some(q - 1),
        }
    }

    pub fn q(&self) -> Option<u32> {
        match self {
            Ring::Poly => None,
            Ring::Frob { q } => Some(*q),
        }
    }

    pub fn in_box(&self, w: &[u32]) -> bool {
        match self {
            Ring::Poly => true,
            Ring::Frob { q } => w.iter().all(|&x| x < *q),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Poly => write!(f, "S"),
            Ring::Frob { q } => write!(f, "S/m^[{q}]"),
        }
    }
}

/// Builds the ring descriptor for `S/m^[q]`, checking that q is a positive power of p.
pub fn frobenius_quotient(q: u32, ctx: PrimeContext) -> Result<Ring> {
    match ctx.log(q as u64) {
        Some(r) if r >= 1 => Ok(Ring::Frob { q }),
        _ => domain(format!("q = {q} is not a positive power of p = {}", ctx.p())),
    }
}

/// A weight-graded module over k[x₁..xₙ] or its quotient by m^[q].
pub trait GradedModule: Send + Sync {
    fn n(&self) -> usize;
    fn ctx(&self) -> PrimeContext;
    fn ring(&self) -> Ring;
    fn dim(&self, w: &[u32]) -> usize;
    /// Multiplication by x_i from weight w; a `dim(w + e_i) × dim(w)` matrix.
    fn act(&self, i: usize, w: &[u32]) -> Mat;
    /// Upper bound on any coordinate of a weight with a nonzero component.
    fn coord_bound(&self) -> Option<u32>;
    /// Upper bound on the degree of a nonzero component.
    fn degree_bound(&self) -> Option<u32> {
        self.coord_bound().map(|c| c.saturating_mul(self.n() as u32))
    }
    /// Degrees above this value are not faithfully represented.
    fn valid_through(&self) -> Option<u32> {
        None
    }
    /// True when the module is the evaluation of a GL-module, so weight
    /// spaces related by a permutation have the same dimension and homology.
    fn symmetric(&self) -> bool {
        false
    }
    fn describe(&self) -> String;
}

pub type Module = Arc<dyn GradedModule>;

/// Rule n ↦ M{kⁿ}. The inclusion eval(n) → eval(n+1) is the identity on
/// weight spaces w ↔ (w, 0) for monomial families; derived families carry
/// explicit matrices.
pub trait ModuleFamily: Send + Sync {
    fn ctx(&self) -> PrimeContext;
    fn ring(&self) -> Ring;
    fn eval(&self, n: usize) -> Module;
    fn describe(&self) -> String;

    /// Matrix of the map eval(n)_w → eval(n+1)_{w'} induced by the coordinate
    /// embedding that inserts a new variable at position k (0 ≤ k ≤ n), where
    /// w' is w with a zero inserted at k.
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        let _ = k;
        let d = self.eval(n).dim(w);
        Mat::identity(d, self.ctx().p())
    }

    /// Matrix of the inclusion eval(n)_w → eval(n+1)_{(w,0)}.
    fn incl(&self, n: usize, w: &[u32]) -> Mat {
        self.insert(n, n, w)
    }
}

/// w with a zero inserted at position k.
pub fn insert_zero(w: &[u32], k: usize) -> Wt {
    let mut v = Vec::with_capacity(w.len() + 1);
    v.extend_from_slice(&w[..k]);
    v.push(0);
    v.extend_from_slice(&w[k..]);
    v
}

pub type Family = Arc<dyn ModuleFamily>;

/// Memo of evaluations, shared by all family implementations.
pub struct EvalCache<T: ?Sized = dyn GradedModule> {
    map: Mutex<HashMap<usize, Arc<T>>>,
}

impl<T: ?Sized> Default for EvalCache<T> {
    fn default() -> Self {
        Self { map: Mutex::new(HashMap::new()) }
    }
}

impl<T: ?Sized> EvalCache<T> {
    pub fn get_or_insert(&self, n: usize, make: impl FnOnce() -> Arc<T>) -> Arc<T> {
        if let Some(m) = self.map.lock().unwrap().get(&n) {
            return m.clone();
        }
        let m = make();
        self.map.lock().unwrap().entry(n).or_insert(m).clone()
    }
}

/// Per-weight memo used by the lazily computed modules.
pub(crate) struct WeightCache<T> {
    map: Mutex<HashMap<Wt, Arc<T>>>,
}

impl<T> Default for WeightCache<T> {
    fn default() -> Self {
        Self { map: Mutex::new(HashMap::new()) }
    }
}

impl<T> WeightCache<T> {
    pub fn get_or_insert(&self, w: &[u32], make: impl FnOnce() -> T) -> Arc<T> {
        if let Some(v) = self.map.lock().unwrap().get(w) {
            return v.clone();
        }
        let v = Arc::new(make());
        self.map.lock().unwrap().entry(w.to_vec()).or_insert(v).clone()
    }
}

pub fn add_unit(w: &[u32], i: usize) -> Wt {
    let mut v = w.to_vec();
    v[i] += 1;
    v
}

pub fn degree(w: &[u32]) -> u32 {
    w.iter().sum()
}

fn enumeration_cap(m: &dyn GradedModule, d: u32) -> u32 {
    m.coord_bound().map_or(d, |c| c.min(d))
}

/// Weights of degree d with a nonzero component.
pub fn support(m: &dyn GradedModule, d: u32) -> Vec<Wt> {
    if m.degree_bound().is_some_and(|b| d > b) {
        return Vec::new();
    }
    compositions(d, m.n(), enumeration_cap(m, d))
        .into_iter()
        .filter(|w| m.dim(w) > 0)
        .collect()
}

/// Weakly decreasing weights of degree d with a nonzero component.
pub fn dominant_support(m: &dyn GradedModule, d: u32) -> Vec<Wt> {
    if m.degree_bound().is_some_and(|b| d > b) {
        return Vec::new();
    }
    let n = m.n();
    let cap = enumeration_cap(m, d);
    crate::combinatorics::Partition::all_of_size(d)
        .into_iter()
        .filter(|l| l.len() <= n && l.parts().first().map_or(true, |&x| x <= cap))
        .map(|l| {
            let mut w = l.parts().to_vec();
            w.resize(n, 0);
            w
        })
        .filter(|w| m.dim(w) > 0)
        .collect()
}

/// dim M_d for d = 0..=d_max.
pub fn degree_dims(m: &dyn GradedModule, d_max: u32) -> Vec<u64> {
    (0..=d_max)
        .map(|d| {
            if m.symmetric() {
                dominant_support(m, d)
                    .iter()
                    .map(|w| m.dim(w) as u64 * crate::combinatorics::orbit_size(w) as u64)
                    .sum()
            } else {
                support(m, d).iter().map(|w| m.dim(w) as u64).sum()
            }
        })
        .collect()
}

/// Multiplication by x^v from weight w.
pub fn act_monomial(m: &dyn GradedModule, w: &[u32], v: &[u32]) -> Mat {
    let p = m.ctx().p();
    let mut cur = w.to_vec();
    let mut mat = Mat::identity(m.dim(w), p);
    for (k, &e) in v.iter().enumerate() {
        for _ in 0..e {
            if mat.rows() == 0 {
                let target: Wt = w.iter().zip(v).map(|(a, b)| a + b).collect();
                return Mat::zeros(m.dim(&target), mat.cols(), p);
            }
            mat = m.act(k, &cur).mul(&mat);
            cur[k] += 1;
        }
    }
    mat
}

/// Largest degree with a nonzero component; −1 for the zero module.
pub fn maxdeg(m: &dyn GradedModule) -> Result<i64> {
    let Some(bound) = m.degree_bound() else {
        return domain("maxdeg needs a module with bounded degrees");
    };
    for d in (0..=bound).rev() {
        let found = if m.symmetric() {
            !dominant_support(m, d).is_empty()
        } else {
            !support(m, d).is_empty()
        };
        if found {
            return Ok(d as i64);
        }
    }
    Ok(-1)
}

/// Dimension of M/(m·M) at weight w: the number of minimal generators there.
pub fn generators_at(m: &dyn GradedModule, w: &[u32]) -> usize {
    let d = m.dim(w);
    if d == 0 {
        return 0;
    }
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for k in 0..w.len() {
        if w[k] == 0 {
            continue;
        }
        let mut src = w.to_vec();
        src[k] -= 1;
        if m.dim(&src) == 0 {
            continue;
        }
        let a = m.act(k, &src);
        for c in 0..a.cols() {
            cols.push(a.col(c));
        }
    }
    if cols.is_empty() {
        return d;
    }
    d - Mat::from_cols(m.ctx().p(), d, &cols).rank()
}

/// Degrees of a minimal generating set of eval(n), with multiplicities.
pub fn generation_degrees(fam: &dyn ModuleFamily, n: usize, d_max: u32) -> BTreeMap<u32, u64> {
    let m = fam.eval(n);
    module_generation_degrees(m.as_ref(), d_max)
}

pub fn module_generation_degrees(m: &dyn GradedModule, d_max: u32) -> BTreeMap<u32, u64> {
    let top = m.degree_bound().map_or(d_max, |b| b.min(d_max));
    let mut out = BTreeMap::new();
    for d in 0..=top {
        let count: u64 = if m.symmetric() {
            dominant_support(m, d)
                .iter()
                .map(|w| generators_at(m, w) as u64 * crate::combinatorics::orbit_size(w) as u64)
                .sum()
        } else {
            support(m, d).iter().map(|w| generators_at(m, w) as u64).sum()
        };
        if count > 0 {
            out.insert(d, count);
        }
    }
    out
}

/// Checks commuting actions and, over S/m^[q], that x_i^q acts by zero.
pub fn check_module(m: &dyn GradedModule, d_max: u32) -> Result<()> {
    let n = m.n();
    for d in 0..=d_max {
        for w in support(m, d) {
            for i in 0..n {
                for j in (i + 1)..n {
                    let a = m.act(j, &add_unit(&w, i)).mul(&m.act(i, &w));
                    let b = m.act(i, &add_unit(&w, j)).mul(&m.act(j, &w));
                    if a != b {
                        return invariant(format!("x{} and x{} do not commute at {w:?}", i + 1, j + 1));
                    }
                }
                if let Ring::Frob { q } = m.ring() {
                    let mut v = vec![0; n];
                    v[i] = q;
                    if !act_monomial(m, &w, &v).is_zero() {
                        return invariant(format!("x{}^{q} acts nontrivially at {w:?}", i + 1));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks that eval(n) sits inside eval(n+1) as the weights with last entry zero.
pub fn check_tower(fam: &dyn ModuleFamily, n: usize, d_max: u32) -> Result<()> {
    let small = fam.eval(n);
    let big = fam.eval(n + 1);
    for d in 0..=d_max {
        for w in support(small.as_ref(), d) {
            let mut wz = w.clone();
            wz.push(0);
            if big.dim(&wz) != small.dim(&w) {
                return invariant(format!("dimension jump at {w:?} between n={n} and n={}", n + 1));
            }
            let inc = fam.incl(n, &w);
            if inc.rank() != small.dim(&w) {
                return invariant(format!("inclusion not injective at {w:?}"));
            }
            for i in 0..n {
                let lhs = big.act(i, &wz).mul(&inc);
                let rhs = fam.incl(n, &add_unit(&w, i)).mul(&small.act(i, &w));
                if lhs != rhs {
                    return invariant(format!("inclusion does not commute with x{} at {w:?}", i + 1));
                }
            }
        }
        // Weights of eval(n+1) supported in the first n positions come from eval(n).
        for w in support(big.as_ref(), d) {
            if w[n] == 0 && small.dim(&w[..n]) != big.dim(&w) {
                return invariant(format!("image of inclusion misses weight {w:?}"));
            }
        }
    }
    Ok(())
}

/// Debug dump: basis weights and action matrices up to degree `d_max`.
pub fn dump_json(m: &dyn GradedModule, d_max: u32) -> serde_json::Value {
    let mut weights = Vec::new();
    let mut actions = Vec::new();
    for d in 0..=d_max {
        for w in support(m, d) {
            weights.push(serde_json::json!({ "w": w, "dim": m.dim(&w) }));
            for i in 0..m.n() {
                let a = m.act(i, &w);
                if a.rows() == 0 {
                    continue;
                }
                let rows: Vec<Vec<u32>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
                actions.push(serde_json::json!({ "i": i, "w": w, "matrix": rows }));
            }
        }
    }
    serde_json::json!({
        "n": m.n(),
        "p": m.ctx().p(),
        "ring": m.ring().to_string(),
        "weights": weights,
        "actions": actions,
    })
}

/// Multiplication by (y₁⋯y_N)^e on N fresh variables: eval(n)_w → eval(n+N)_{(w,e,…,e)}.
pub fn fresh_variable_map(fam: &dyn ModuleFamily, n: usize, w: &[u32], e: u32, count: usize) -> Mat {
    let mut inc = Mat::identity(fam.eval(n).dim(w), fam.ctx().p());
    let mut cur = w.to_vec();
    for k in 0..count {
        inc = fam.incl(n + k, &cur).mul(&inc);
        cur.push(0);
    }
    let big = fam.eval(n + count);
    let mut v = vec![0u32; n];
    v.extend(std::iter::repeat(e).take(count));
    act_monomial(big.as_ref(), &cur, &v).mul(&inc)
}

/// Torsion submodule of eval(n) over S/m^[q].
///
/// An element is torsion exactly when some product (y₁⋯y_N)^{q/p} of fresh
/// variables kills it, so the torsion at weight w is the union of the
/// kernels of [`fresh_variable_map`]. The chain of kernels is increasing; it
/// is followed until it is unchanged for two consecutive steps, with a hard
/// cap of [`TORSION_STEP_CAP`] fresh variables.
pub fn torsion_submodule(fam: &Family, n: usize, q: u32) -> Result<Module> {
    Ok(torsion_sub(fam, n, q)?)
}

fn torsion_sub(fam: &Family, n: usize, q: u32) -> Result<Arc<SubModule>> {
    let ring = fam.ring();
    if ring != (Ring::Frob { q }) {
        return domain(format!("torsion_submodule expects a family over S/m^[{q}], got {ring}"));
    }
    let e = q / fam.ctx().p();
    let parent = fam.eval(n);
    let f = fam.clone();
    Ok(Arc::new(SubModule::new(
        parent,
        Box::new(move |w: &[u32]| torsion_basis(f.as_ref(), n, w, e)),
        "torsion",
    )))
}

pub const TORSION_STEP_CAP: usize = 24;

pub(crate) fn torsion_basis(fam: &dyn ModuleFamily, n: usize, w: &[u32], e: u32) -> Mat {
    let d = fam.eval(n).dim(w);
    let p = fam.ctx().p();
    if d == 0 {
        return Mat::zeros(0, 0, p);
    }
    let mut prev = usize::MAX;
    let mut stable = 0;
    let mut kernel = Mat::zeros(d, 0, p);
    for count in 1..=TORSION_STEP_CAP {
        kernel = fresh_variable_map(fam, n, w, e, count).kernel();
        if kernel.cols() == d {
            break;
        }
        if kernel.cols() == prev {
            stable += 1;
            if stable == 2 {
                break;
            }
        } else {
            stable = 0;
        }
        prev = kernel.cols();
    }
    kernel
}

/// Insertion map of a family of submodules, given the parent's.
pub(crate) fn sub_insert(parent: &dyn ModuleFamily, small: &SubModule, big: &SubModule, n: usize, k: usize, w: &[u32]) -> Mat {
    let p = parent.ctx().p();
    let wz = insert_zero(w, k);
    let (src, tgt) = (small.dim(w), big.dim(&wz));
    if src == 0 || tgt == 0 {
        return Mat::zeros(tgt, src, p);
    }
    let inv = big.basis(&wz).left_inverse().expect("column basis has full rank");
    inv.mul(&parent.insert(n, k, w).mul(&small.basis(w)))
}

/// Insertion map of a family of quotients, given the parent's.
pub(crate) fn quotient_insert(
    parent: &dyn ModuleFamily,
    small: &QuotientModule,
    big: &QuotientModule,
    n: usize,
    k: usize,
    w: &[u32],
) -> Mat {
    let p = parent.ctx().p();
    let wz = insert_zero(w, k);
    let (src, tgt) = (small.dim(w), big.dim(&wz));
    if src == 0 || tgt == 0 {
        return Mat::zeros(tgt, src, p);
    }
    big.projection(&wz).mul(&parent.insert(n, k, w).mul(&small.section(w)))
}

/// Family of torsion submodules.
pub struct TorsionFamily {
    parent: Family,
    q: u32,
    cache: EvalCache<SubModule>,
}

impl TorsionFamily {
    pub fn new(parent: Family, q: u32) -> Result<Family> {
        if parent.ring() != (Ring::Frob { q }) {
            return domain(format!("torsion needs a family over S/m^[{q}]"));
        }
        Ok(Arc::new(Self { parent, q, cache: EvalCache::default() }))
    }

    fn sub(&self, n: usize) -> Arc<SubModule> {
        self.cache
            .get_or_insert(n, || torsion_sub(&self.parent, n, self.q).expect("ring checked at construction"))
    }
}

impl ModuleFamily for TorsionFamily {
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn eval(&self, n: usize) -> Module {
        self.sub(n)
    }
    fn describe(&self) -> String {
        format!("tors({}, {})", self.q, self.parent.describe())
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        sub_insert(self.parent.as_ref(), &self.sub(n), &self.sub(n + 1), n, k, w)
    }
}

/// M^{<d}, the submodule generated in degrees below d, or the quotient M/M^{<d}.
pub struct TruncateBelow {
    parent: Family,
    d: u32,
    quotient: bool,
    subs: EvalCache<GeneratedSubModule>,
    quots: EvalCache<QuotientModule>,
}

/// Returns (M^{<d}, M/M^{<d}).
pub fn truncate_below(fam: &Family, d: u32) -> (Family, Family) {
    let make = |quotient| TruncateBelow {
        parent: fam.clone(),
        d,
        quotient,
        subs: EvalCache::default(),
        quots: EvalCache::default(),
    };
    (Arc::new(make(false)), Arc::new(make(true)))
}

impl TruncateBelow {
    fn sub(&self, n: usize) -> Arc<GeneratedSubModule> {
        self.subs.get_or_insert(n, || Arc::new(GeneratedSubModule::new(self.parent.eval(n), self.d)))
    }

    fn quot(&self, n: usize) -> Arc<QuotientModule> {
        self.quots.get_or_insert(n, || {
            let s = self.sub(n);
            Arc::new(QuotientModule::new(self.parent.eval(n), Box::new(move |w: &[u32]| s.basis(w)), "quot-below"))
        })
    }
}

impl ModuleFamily for TruncateBelow {
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn eval(&self, n: usize) -> Module {
        if self.quotient {
            self.quot(n)
        } else {
            self.sub(n)
        }
    }
    fn describe(&self) -> String {
        let kind = if self.quotient { "quot-below" } else { "sub-below" };
        format!("{kind}({}, {})", self.d, self.parent.describe())
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        if self.quotient {
            return quotient_insert(self.parent.as_ref(), &self.quot(n), &self.quot(n + 1), n, k, w);
        }
        let (small, big) = (self.sub(n), self.sub(n + 1));
        let p = self.ctx().p();
        let wz = insert_zero(w, k);
        let (src, tgt) = (small.dim(w), big.dim(&wz));
        if src == 0 || tgt == 0 {
            return Mat::zeros(tgt, src, p);
        }
        let inv = big.basis(&wz).left_inverse().expect("column basis has full rank");
        inv.mul(&self.parent.insert(n, k, w).mul(&small.basis(w)))
    }
}

/// Direct sum of families over a common ring.
pub struct SumFamily {
    parts: Vec<Family>,
    cache: EvalCache,
}

impl SumFamily {
    pub fn new(parts: Vec<Family>) -> Result<Family> {
        let Some(first) = parts.first() else {
            return domain("a direct sum needs at least one summand");
        };
        if parts.iter().any(|f| f.ring() != first.ring() || f.ctx() != first.ctx()) {
            return domain("direct summands must share the ring and the prime");
        }
        Ok(Arc::new(Self { parts, cache: EvalCache::default() }))
    }
}

impl ModuleFamily for SumFamily {
    fn ctx(&self) -> PrimeContext {
        self.parts[0].ctx()
    }
    fn ring(&self) -> Ring {
        self.parts[0].ring()
    }
    fn eval(&self, n: usize) -> Module {
        self.cache.get_or_insert(n, || {
            Arc::new(DirectSumModule::new(self.parts.iter().map(|f| f.eval(n)).collect()))
        })
    }
    fn describe(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|f| f.describe()).collect();
        format!("sum({})", inner.join(", "))
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        let blocks: Vec<Mat> = self.parts.iter().map(|f| f.insert(n, k, w)).collect();
        lazy::block_diagonal(&blocks, self.ctx().p())
    }
}
