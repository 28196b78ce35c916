//! Hasse–Schur derivatives, the shift functor over S/m^[q] and the functors
//! built from its natural map.
//!
//! Sh_m(M)(n) is the slice of M(n+1) where the last (adjoined) variable has
//! weight m. Over S/m^[q] the shift is Sh = Sh_{q/p}, and i_M : M → Sh(M)
//! multiplies by y^{q/p}, y the adjoined variable. Δ = coker i_M, K = ker i_M.

use crate::combinatorics::{orbit_size, Partition, PrimeContext};
use crate::error::{domain, invariant, Result};
use crate::evaluation::{
    act_monomial, degree_dims, ideal_family, insert_zero, module_generation_degrees, quotient_insert, sub_insert,
    torsion_basis, EvalCache, Family, GradedModule, Module, ModuleFamily, MonomialFamily, MonomialMap,
    QuotientModule, Ring, SliceModule, SubModule, TorsionFamily, Wt,
};
use crate::glideals::{compositions, GLIdeal};
use crate::homology::{betti_table, flatness_test, slope, t_sequence};
use crate::linalg::Mat;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShiftMode {
    GenericSlice,
    SmShift,
    BlockShift(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftDescriptor {
    pub m: u32,
    pub q: Option<u32>,
    pub mode: ShiftMode,
}

impl ShiftDescriptor {
    pub fn slice(m: u32) -> Self {
        Self { m, q: None, mode: ShiftMode::GenericSlice }
    }

    pub fn sm_shift(q: u32, ctx: PrimeContext) -> Result<Self> {
        match ctx.log(q as u64) {
            Some(r) if r >= 1 => Ok(Self { m: q / ctx.p(), q: Some(q), mode: ShiftMode::SmShift }),
            _ => domain(format!("q = {q} is not a positive power of p = {}", ctx.p())),
        }
    }

    pub fn block(a: usize) -> Self {
        Self { m: 0, q: None, mode: ShiftMode::BlockShift(a) }
    }
}

fn exponent(q: u32, ctx: PrimeContext) -> Result<u32> {
    Ok(ShiftDescriptor::sm_shift(q, ctx)?.m)
}

fn with_last(w: &[u32], m: u32) -> Wt {
    let mut v = w.to_vec();
    v.push(m);
    v
}

/// Sh_m of a family.
pub struct ShiftFamily {
    parent: Family,
    m: u32,
    cache: EvalCache,
}

pub fn hasse_schur(fam: &Family, m: u32) -> Family {
    Arc::new(ShiftFamily { parent: fam.clone(), m, cache: EvalCache::default() })
}

/// Sh_{q/p} for a family over S/m^[q].
pub fn sm_shift(fam: &Family, q: u32) -> Result<Family> {
    check_ring(fam.as_ref(), q)?;
    Ok(hasse_schur(fam, exponent(q, fam.ctx())?))
}

impl ModuleFamily for ShiftFamily {
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn eval(&self, n: usize) -> Module {
        self.cache.get_or_insert(n, || Arc::new(SliceModule::new(self.parent.eval(n + 1), self.m)))
    }
    fn describe(&self) -> String {
        format!("sh({}, {})", self.m, self.parent.describe())
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        self.parent.insert(n + 1, k, &with_last(w, self.m))
    }
}

fn check_ring(fam: &dyn ModuleFamily, q: u32) -> Result<()> {
    if fam.ring() != (Ring::Frob { q }) {
        return domain(format!("the shift needs a family over S/m^[{q}], got {}", fam.ring()));
    }
    Ok(())
}

/// Matrix of i_M at weight w: M(n)_w → Sh(M)(n)_w = M(n+1)_{(w, e)}.
pub fn natural_map_at(fam: &dyn ModuleFamily, n: usize, w: &[u32], e: u32) -> Mat {
    let inc = fam.incl(n, w);
    let big = fam.eval(n + 1);
    let mut v = vec![0u32; n];
    v.push(e);
    act_monomial(big.as_ref(), &insert_zero(w, n), &v).mul(&inc)
}

pub struct NaturalMapWeight {
    pub weight: Wt,
    pub matrix: Mat,
    /// Columns in M(n)_w coordinates.
    pub kernel: Mat,
    pub cokernel_dim: usize,
}

pub struct NaturalMapData {
    pub q: u32,
    pub n: usize,
    pub weights: Vec<NaturalMapWeight>,
}

impl NaturalMapData {
    pub fn is_injective(&self) -> bool {
        self.weights.iter().all(|x| x.kernel.cols() == 0)
    }

    pub fn kernel_dim(&self) -> u64 {
        self.weights.iter().map(|x| x.kernel.cols() as u64 * orbit_size(&x.weight) as u64).sum()
    }

    pub fn cokernel_dim(&self) -> u64 {
        self.weights.iter().map(|x| x.cokernel_dim as u64 * orbit_size(&x.weight) as u64).sum()
    }
}

/// Dominant weights in the box [0, q−1]ⁿ: every weight where M or Sh(M) can live.
pub fn box_weights(n: usize, q: u32) -> Vec<Wt> {
    let mut out = Vec::new();
    for d in 0..=(n as u32 * (q - 1)) {
        for l in Partition::all_of_size(d) {
            if l.len() <= n && l.parts().first().map_or(true, |&x| x < q) {
                let mut w = l.parts().to_vec();
                w.resize(n, 0);
                out.push(w);
            }
        }
    }
    out
}

fn require_symmetric(m: &dyn GradedModule) -> Result<()> {
    if !m.symmetric() {
        return domain(format!("{} is not known to be GL-symmetric", m.describe()));
    }
    Ok(())
}

/// i_M at every dominant weight, with kernel ⊆ torsion asserted.
pub fn natural_map(fam: &Family, q: u32, n: usize) -> Result<NaturalMapData> {
    check_ring(fam.as_ref(), q)?;
    let e = exponent(q, fam.ctx())?;
    let m = fam.eval(n);
    require_symmetric(m.as_ref())?;
    let weights: Vec<Result<NaturalMapWeight>> = box_weights(n, q)
        .into_par_iter()
        .map(|w| {
            let matrix = natural_map_at(fam.as_ref(), n, &w, e);
            let kernel = matrix.kernel();
            let rank = matrix.cols() - kernel.cols();
            if kernel.cols() > 0 {
                let tors = torsion_basis(fam.as_ref(), n, &w, e);
                if tors.hcat(&kernel).rank() != tors.rank() {
                    return invariant(format!("ker i_M ⊄ torsion at weight {w:?}, n = {n}"));
                }
            }
            Ok(NaturalMapWeight { cokernel_dim: matrix.rows() - rank, weight: w, matrix, kernel })
        })
        .collect();
    Ok(NaturalMapData { q, n, weights: weights.into_iter().collect::<Result<_>>()? })
}

/// Δ(M) = coker i_M.
pub struct DeltaFamily {
    parent: Family,
    sh: Family,
    e: u32,
    q: u32,
    cache: EvalCache<QuotientModule>,
}

pub fn delta(fam: &Family, q: u32) -> Result<Family> {
    Ok(Arc::new(delta_family(fam, q)?))
}

fn delta_family(fam: &Family, q: u32) -> Result<DeltaFamily> {
    let sh = sm_shift(fam, q)?;
    let e = exponent(q, fam.ctx())?;
    Ok(DeltaFamily { parent: fam.clone(), sh, e, q, cache: EvalCache::default() })
}

impl DeltaFamily {
    fn quot(&self, n: usize) -> Arc<QuotientModule> {
        self.cache.get_or_insert(n, || {
            let (f, e) = (self.parent.clone(), self.e);
            Arc::new(QuotientModule::new(
                self.sh.eval(n),
                Box::new(move |w: &[u32]| natural_map_at(f.as_ref(), n, w, e)),
                "delta",
            ))
        })
    }
}

impl ModuleFamily for DeltaFamily {
    fn ctx(&self) -> PrimeContext {
        self.parent.ctx()
    }
    fn ring(&self) -> Ring {
        self.parent.ring()
    }
    fn eval(&self, n: usize) -> Module {
        self.quot(n)
    }
    fn describe(&self) -> String {
        format!("delta({}, {})", self.q, self.parent.describe())
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        quotient_insert(self.sh.as_ref(), &self.quot(n), &self.quot(n + 1), n, k, w)
    }
}

/// K(M) = ker i_M.
pub struct KernelFamily {
    parent: Family,
    e: u32,
    q: u32,
    cache: EvalCache<SubModule>,
}

pub fn kq(fam: &Family, q: u32) -> Result<Family> {
    check_ring(fam.as_ref(), q)?;
    let e = exponent(q, fam.ctx())?;
    Ok(Arc::new(KernelFamily { parent: fam.clone(), e, q, cache: EvalCache::default() }))
}

impl KernelFamily {
    fn sub(&self, n: usize) -> Arc<SubModule> {
        self.cache.get_or_insert(n, || {
            let (f, e) = (self.parent.clone(), self.e);
            Arc::new(SubModule::new(
                self.parent.eval(n),
                Box::new(move |w: &[u32]| natural_map_at(f.as_ref(), n, w, e).kernel()),
                "kq",
            ))
        })
    }
}

impl ModuleFamily for KernelFamily {
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
        format!("kq({}, {})", self.q, self.parent.describe())
    }
    fn insert(&self, n: usize, k: usize, w: &[u32]) -> Mat {
        sub_insert(self.parent.as_ref(), &self.sub(n), &self.sub(n + 1), n, k, w)
    }
}

/// V^(r) as an S-module concentrated in degree p^r: m^[p^r] / m·m^[p^r].
pub fn frobenius_twist_span(r: u32, ctx: PrimeContext) -> Family {
    let upper = GLIdeal::frobenius_power(r, ctx);
    let lower = upper.product(&GLIdeal::frobenius_power(0, ctx));
    ideal_family(Ring::Poly, &upper, &lower).expect("m·I ⊆ I")
}

fn top_generation_degree(m: &dyn GradedModule, d_max: u32) -> Option<u32> {
    module_generation_degrees(m, d_max).keys().next_back().copied()
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaDegreeReport {
    pub n: usize,
    pub t0_module: Option<u32>,
    pub t0_delta: Option<u32>,
}

/// Δ(M) is generated in degrees ≤ t₀(M) − 1.
pub fn delta_degree_check(fam: &Family, q: u32, n: usize) -> Result<DeltaDegreeReport> {
    let d = delta(fam, q)?;
    let bound = n as u32 * (q - 1);
    let t0_module = top_generation_degree(fam.eval(n).as_ref(), bound);
    let t0_delta = top_generation_degree(d.eval(n).as_ref(), bound);
    let ok = match (t0_module, t0_delta) {
        (_, None) => true,
        (Some(a), Some(b)) => b < a,
        (None, Some(_)) => false,
    };
    if !ok {
        return invariant(format!("Δ generated in degree {t0_delta:?} but t₀(M) = {t0_module:?} at n = {n}"));
    }
    Ok(DeltaDegreeReport { n, t0_module, t0_delta })
}

#[derive(Clone, Debug, Serialize)]
pub struct LeibnizReport {
    pub m: u32,
    pub n: usize,
    pub d_max: u32,
    /// dim Sh_m(F ⊗ G)_d by weight convolution.
    pub lhs: Vec<u64>,
    /// Σ_{i+j=m} dim (Sh_i F ⊗ Sh_j G)_d.
    pub rhs: Vec<u64>,
    /// (i, j, total dimension through d_max) for each split with a nonzero part.
    pub contributions: Vec<(u32, u32, u64)>,
}

fn dominated(t: &[u32]) -> Vec<Wt> {
    let mut out = vec![Vec::new()];
    for &x in t {
        out = out
            .into_iter()
            .flat_map(|v: Wt| {
                (0..=x).map(move |a| {
                    let mut v = v.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Dimension form of Sh_m(F ⊗ G) ≅ ⊕_{i+j=m} Sh_i F ⊗ Sh_j G at n, degrees ≤ d_max.
pub fn leibniz_check(f: &Family, g: &Family, m: u32, n: usize, d_max: u32) -> Result<LeibnizReport> {
    if f.ctx() != g.ctx() {
        return domain("Leibniz check needs families over the same prime");
    }
    let (fb, gb) = (f.eval(n + 1), g.eval(n + 1));
    let lhs: Vec<u64> = (0..=d_max)
        .into_par_iter()
        .map(|d| {
            let mut total = 0u64;
            for w in compositions(d, n, d) {
                let t = with_last(&w, m);
                for u in dominated(&t) {
                    let a = fb.dim(&u);
                    if a == 0 {
                        continue;
                    }
                    let v: Wt = t.iter().zip(&u).map(|(x, y)| x - y).collect();
                    total += (a * gb.dim(&v)) as u64;
                }
            }
            total
        })
        .collect();
    let mut rhs = vec![0u64; d_max as usize + 1];
    let mut contributions = Vec::new();
    for i in 0..=m {
        let a = degree_dims(hasse_schur(f, i).eval(n).as_ref(), d_max);
        let b = degree_dims(hasse_schur(g, m - i).eval(n).as_ref(), d_max);
        let mut part = 0;
        for d in 0..=d_max as usize {
            let c: u64 = (0..=d).map(|e| a[e] * b[d - e]).sum();
            rhs[d] += c;
            part += c;
        }
        if part > 0 {
            contributions.push((i, m - i, part));
        }
    }
    if lhs != rhs {
        return invariant(format!("Leibniz identity fails for m = {m}, n = {n}: {lhs:?} ≠ {rhs:?}"));
    }
    Ok(LeibnizReport { m, n, d_max, lhs, rhs, contributions })
}

/// A short exact sequence 0 → L → M → N → 0 of monomial families.
pub struct ShortExact {
    pub name: String,
    pub f: MonomialMap,
    pub g: MonomialMap,
}

impl ShortExact {
    pub fn new(name: impl Into<String>, f: MonomialMap, g: MonomialMap) -> Result<Self> {
        if f.target().pieces() != g.source().pieces() {
            return domain("the middle terms of the sequence differ");
        }
        Ok(Self { name: name.into(), f, g })
    }

    pub fn families(&self) -> [Arc<MonomialFamily>; 3] {
        [self.f.source(), self.f.target(), self.g.target()]
    }

    /// Exactness at (n, w): f injective, g surjective, g∘f = 0, dims add up.
    pub fn check_at(&self, n: usize, w: &[u32]) -> Result<()> {
        let (f, g) = (self.f.matrix(n, w), self.g.matrix(n, w));
        let ok = f.rank() == f.cols() && g.rank() == g.rows() && g.mul(&f).is_zero() && f.rows() == f.cols() + g.rows();
        if !ok {
            return domain(format!("{}: not short exact at n = {n}, weight {w:?}", self.name));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SixTermReport {
    pub name: String,
    pub q: u32,
    pub n: usize,
    pub weights_checked: usize,
    /// dim K(L), K(M), K(N)
    pub k_dims: [u64; 3],
    /// dim Δ(L), Δ(M), Δ(N)
    pub delta_dims: [u64; 3],
    pub connecting_rank: u64,
    pub quotient_torsion_free: bool,
    /// 0 → Δ(L) → Δ(M) → Δ(N) → 0 is exact; checked when N is torsion-free.
    pub three_term_exact: Option<bool>,
}

fn right_inverse(a: &Mat) -> Mat {
    a.transpose().left_inverse().expect("surjective map").transpose()
}

fn rank_mod(sub: &Mat, extra: &Mat) -> usize {
    sub.hcat(extra).rank() - sub.rank()
}

/// Exactness of 0→K(L)→K(M)→K(N)→Δ(L)→Δ(M)→Δ(N)→0 by rank bookkeeping at
/// every dominant weight; the connecting map is the snake-lemma map.
pub fn six_term_check(seq: &ShortExact, q: u32, n: usize) -> Result<SixTermReport> {
    let [l, m, nn] = seq.families();
    let ctx = l.ctx();
    let e = exponent(q, ctx)?;
    for fam in [&l, &m, &nn] {
        check_ring(fam.as_ref(), q)?;
    }
    let weights = box_weights(n, q);
    for w in &weights {
        seq.check_at(n, w)?;
        seq.check_at(n + 1, &with_last(w, e))?;
    }
    let per: Vec<Result<([u64; 3], [u64; 3], u64, bool)>> = weights
        .par_iter()
        .map(|w| {
            let fail = |what: &str| invariant(format!("{}: six-term sequence not exact at {what}, weight {w:?}", seq.name));
            let we = with_last(w, e);
            let (il, im, in_) = (
                natural_map_at(l.as_ref(), n, w, e),
                natural_map_at(m.as_ref(), n, w, e),
                natural_map_at(nn.as_ref(), n, w, e),
            );
            let (f0, g0) = (seq.f.matrix(n, w), seq.g.matrix(n, w));
            let (f1, g1) = (seq.f.matrix(n + 1, &we), seq.g.matrix(n + 1, &we));
            let (kl, km, kn) = (il.kernel(), im.kernel(), in_.kernel());
            // K(L) → K(M) → K(N)
            if f0.mul(&kl).rank() != kl.cols() {
                return fail("K(L)");
            }
            if f0.mul(&kl).rank() != km.cols() - g0.mul(&km).rank() {
                return fail("K(M)");
            }
            // Snake map K(N) → Δ(L): lift through g, apply i_M, pull back through f.
            let f1_inv = f1.left_inverse().expect("f injective");
            let conn = if kn.cols() == 0 || g0.rows() == 0 {
                Mat::zeros(f1.cols(), kn.cols(), ctx.p())
            } else {
                f1_inv.mul(&im.mul(&right_inverse(&g0).mul(&kn)))
            };
            if rank_mod(&im, &f1.mul(&conn)) != 0 {
                return fail("Δ(L)");
            }
            let conn_rank = rank_mod(&il, &conn);
            if kn.cols() - conn_rank != g0.mul(&km).rank() {
                return fail("K(N)");
            }
            let ker_dl = f1.cols() - rank_mod(&im, &f1) - il.rank();
            if ker_dl != conn_rank {
                return fail("Δ(L)");
            }
            let ker_dm = g1.cols() - rank_mod(&in_, &g1) - im.rank();
            if ker_dm != rank_mod(&im, &f1) {
                return fail("Δ(M)");
            }
            if in_.hcat(&g1).rank() != g1.rows() {
                return fail("Δ(N)");
            }
            let mult = orbit_size(w) as u64;
            let k = [kl.cols(), km.cols(), kn.cols()].map(|x| x as u64 * mult);
            let d = [il.rows() - il.rank(), im.rows() - im.rank(), in_.rows() - in_.rank()].map(|x| x as u64 * mult);
            Ok((k, d, conn_rank as u64 * mult, ker_dl == 0))
        })
        .collect();
    let mut report = SixTermReport {
        name: seq.name.clone(),
        q,
        n,
        weights_checked: weights.len(),
        quotient_torsion_free: true,
        ..Default::default()
    };
    let mut injective = true;
    for r in per {
        let (k, d, c, inj) = r?;
        for i in 0..3 {
            report.k_dims[i] += k[i];
            report.delta_dims[i] += d[i];
        }
        report.connecting_rank += c;
        injective &= inj;
    }
    report.quotient_torsion_free = report.k_dims[2] == 0;
    if report.quotient_torsion_free {
        if !injective {
            return invariant(format!("{}: Δ(L) → Δ(M) not injective although N is torsion-free", seq.name));
        }
        report.three_term_exact = Some(true);
    }
    Ok(report)
}

/// Sh_m(M) = Sh_m(L) + Sh_m(N) in every degree ≤ d_max.
pub fn shift_exactness_check(seq: &ShortExact, m: u32, n: usize, d_max: u32) -> Result<()> {
    let [l, mid, nn] = seq.families().map(|f| -> Family { f });
    let dims = |f: &Family| degree_dims(hasse_schur(f, m).eval(n).as_ref(), d_max);
    let (a, b, c) = (dims(&l), dims(&mid), dims(&nn));
    if (0..a.len()).any(|d| a[d] + c[d] != b[d]) {
        return invariant(format!("{}: Sh_{m} not additive at n = {n}", seq.name));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CommuteReport {
    pub q: u32,
    pub n: usize,
    pub shift_delta: Vec<u64>,
    pub delta_shift: Vec<u64>,
    pub shift_torsion: Vec<u64>,
    pub torsion_shift: Vec<u64>,
}

/// Sh∘Δ vs Δ∘Sh and Sh∘Γ vs Γ∘Sh in graded dimensions at n.
pub fn shift_commute_check(fam: &Family, q: u32, n: usize) -> Result<CommuteReport> {
    let sh = sm_shift(fam, q)?;
    let top = n as u32 * (q - 1);
    let dims = |f: Family| degree_dims(f.eval(n).as_ref(), top);
    let shift_delta = dims(sm_shift(&delta(fam, q)?, q)?);
    let delta_shift = dims(delta(&sh, q)?);
    let shift_torsion = dims(sm_shift(&TorsionFamily::new(fam.clone(), q)?, q)?);
    let torsion_shift = dims(TorsionFamily::new(sh, q)?);
    if shift_delta != delta_shift {
        return invariant(format!("Sh∘Δ ≠ Δ∘Sh at n = {n}: {shift_delta:?} vs {delta_shift:?}"));
    }
    if shift_torsion != torsion_shift {
        return invariant(format!("Sh∘Γ ≠ Γ∘Sh at n = {n}: {shift_torsion:?} vs {torsion_shift:?}"));
    }
    Ok(CommuteReport { q, n, shift_delta, delta_shift, shift_torsion, torsion_shift })
}

/// The two maps Sh → Sh², i_{Sh M} and Sh(i_M), have the same rank at every
/// weight (they differ by swapping the two adjoined variables).
pub fn double_shift_check(fam: &Family, q: u32, n: usize) -> Result<(u64, u64)> {
    let sh = sm_shift(fam, q)?;
    let e = exponent(q, fam.ctx())?;
    let (mut ra, mut rb) = (0u64, 0u64);
    for w in box_weights(n, q) {
        let a = natural_map_at(sh.as_ref(), n, &w, e);
        let b = natural_map_at(fam.as_ref(), n + 1, &with_last(&w, e), e);
        let mult = orbit_size(&w) as u64;
        ra += a.rank() as u64 * mult;
        rb += b.rank() as u64 * mult;
        if a.rank() != b.rank() {
            return invariant(format!("i_Sh and Sh(i) differ in rank at weight {w:?}"));
        }
    }
    Ok((ra, rb))
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftStep {
    pub l: u32,
    pub zero: bool,
    pub t0: i64,
    pub t1: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub slope: Option<Ratio<i64>>,
    pub flat: Vec<(usize, bool)>,
    pub torsion_free: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Option<Ratio<i64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftExperiment {
    pub q: u32,
    pub l_max: u32,
    pub n_set: Vec<usize>,
    pub steps: Vec<ShiftStep>,
    /// Smallest l flat at every n, if reached.
    pub flat_step: Option<u32>,
    /// Per n, the smallest flat l.
    pub flat_step_per_n: Vec<(usize, Option<u32>)>,
    /// Smallest l with i injective at every n.
    pub torsion_free_step: Option<u32>,
}

impl ShiftExperiment {
    pub fn consistent(&self) -> bool {
        self.flat_step_per_n.iter().all(|&(_, l)| l == self.flat_step)
    }
}

/// Iterates Sh until the module is flat at every n in `n_set`, up to l_max.
pub fn shift_until_flat(fam: &Family, q: u32, l_max: u32, n_set: &[usize]) -> Result<ShiftExperiment> {
    check_ring(fam.as_ref(), q)?;
    if n_set.is_empty() {
        return domain("shift experiment needs at least one n");
    }
    let e = exponent(q, fam.ctx())?;
    let n_min = *n_set.iter().min().unwrap();
    let mut cur = fam.clone();
    let mut steps = Vec::new();
    let mut per_n: Vec<(usize, Option<u32>)> = n_set.iter().map(|&n| (n, None)).collect();
    let (mut flat_step, mut torsion_free_step) = (None, None);
    for l in 0..=l_max {
        crate::limits::check()?;
        let report = flatness_test(cur.as_ref(), n_set)?;
        let torsion_free = n_set
            .par_iter()
            .all(|&n| box_weights(n, q).iter().all(|w| natural_map_at(cur.as_ref(), n, w, e).kernel().cols() == 0));
        let m = cur.eval(n_min);
        let table = betti_table(m.as_ref(), 2, None)?;
        let t = t_sequence(&table);
        let zero = table.is_zero();
        let step = ShiftStep {
            l,
            zero,
            t0: t[0],
            t1: t[1],
            slope: if zero { None } else { Some(slope(&table)?) },
            flat: report.per_n.iter().map(|x| (x.0, x.2)).collect(),
            torsion_free,
        };
        for (slot, &(_, _, ok)) in per_n.iter_mut().zip(&report.per_n) {
            if ok && slot.1.is_none() {
                slot.1 = Some(l);
            }
        }
        if torsion_free && torsion_free_step.is_none() {
            torsion_free_step = Some(l);
        }
        steps.push(step);
        if report.flat {
            flat_step = Some(l);
            break;
        }
        cur = sm_shift(&cur, q)?;
    }
    Ok(ShiftExperiment {
        q,
        l_max,
        n_set: n_set.to_vec(),
        steps,
        flat_step,
        flat_step_per_n: per_n,
        torsion_free_step,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockShiftReport {
    pub a: usize,
    pub n: usize,
    /// pieces[s][d]: dimension of the part with degree s in the adjoined
    /// block and degree d in the original variables.
    pub pieces: Vec<Vec<u64>>,
    /// Graded dimensions of fam.eval(n).
    pub original: Vec<u64>,
}

impl BlockShiftReport {
    /// Largest original-variable degree appearing in the piece of block degree s.
    pub fn top_degree(&self, s: usize) -> Option<usize> {
        self.pieces.get(s)?.iter().rposition(|&x| x > 0)
    }
}

/// fam.eval(n + a) regraded by the degree in the last a variables.
pub fn block_shift(fam: &Family, a: usize, n: usize, d_max: u32) -> Result<BlockShiftReport> {
    let big = fam.eval(n + a);
    let cap = big.coord_bound();
    let mut pieces = vec![vec![0u64; d_max as usize + 1]; d_max as usize + 1];
    for total in 0..=d_max {
        crate::limits::check()?;
        for w in compositions(total, n + a, cap.map_or(total, |c| c.min(total))) {
            let dim = big.dim(&w) as u64;
            if dim == 0 {
                continue;
            }
            let s: u32 = w[n..].iter().sum();
            pieces[s as usize][(total - s) as usize] += dim;
        }
    }
    let original = degree_dims(fam.eval(n).as_ref(), d_max);
    if pieces[0] != original {
        return invariant(format!("block shift: block-degree-0 piece {:?} ≠ original {original:?}", pieces[0]));
    }
    while pieces.last().is_some_and(|v| v.iter().all(|&x| x == 0)) && pieces.len() > 1 {
        pieces.pop();
    }
    Ok(BlockShiftReport { a, n, pieces, original })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{free_family, quotient_family, residue_field, FreeGen, Piece};

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn sm(q: u32, p: u32) -> Family {
        quotient_family(Ring::Frob { q }, &GLIdeal::zero(ctx(p)))
    }

    #[test]
    fn sh_zero_is_identity() {
        let f: Family = quotient_family(Ring::Frob { q: 4 }, &GLIdeal::parse("m^2", ctx(2)).unwrap());
        for n in 1..=4 {
            let a = degree_dims(hasse_schur(&f, 0).eval(n).as_ref(), 8);
            let b = degree_dims(f.eval(n).as_ref(), 8);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sh_kills_twists_below_p_power() {
        for (p, r) in [(2, 1), (2, 2), (3, 1)] {
            let v = frobenius_twist_span(r, ctx(p));
            for m in 1..ctx(p).pow(r) as u32 {
                let d = degree_dims(hasse_schur(&v, m).eval(3).as_ref(), 12);
                assert!(d.iter().all(|&x| x == 0), "p={p} r={r} m={m}");
            }
            let top = ctx(p).pow(r) as u32;
            assert!(degree_dims(hasse_schur(&v, top).eval(3).as_ref(), 1)[0] > 0);
        }
    }

    #[test]
    fn slices_of_sm_are_sm() {
        let s = sm(4, 2);
        for i in 0..4 {
            assert_eq!(degree_dims(hasse_schur(&s, i).eval(3).as_ref(), 9), degree_dims(s.eval(3).as_ref(), 9));
        }
    }

    #[test]
    fn leibniz_twist_and_standard() {
        let f = frobenius_twist_span(1, ctx(2));
        let g = frobenius_twist_span(0, ctx(2));
        let r = leibniz_check(&f, &g, 2, 3, 4).unwrap();
        let splits: Vec<(u32, u32)> = r.contributions.iter().map(|c| (c.0, c.1)).collect();
        assert!(splits.iter().all(|s| [(0, 2), (2, 0)].contains(s)));
        assert!(splits.contains(&(2, 0)));
        let s = sm(2, 2);
        leibniz_check(&s, &s, 1, 3, 6).unwrap();
    }

    #[test]
    fn natural_map_on_free_and_torsion() {
        let free: Family = free_family(Ring::Frob { q: 2 }, vec![FreeGen::standard(ctx(2))], ctx(2));
        assert!(natural_map(&free, 2, 3).unwrap().is_injective());
        let k: Family = residue_field(Ring::Frob { q: 2 }, ctx(2));
        let d = natural_map(&k, 2, 3).unwrap();
        assert_eq!(d.kernel_dim(), 1);
    }

    #[test]
    fn delta_of_induced() {
        let c = ctx(2);
        for r in 1..=2 {
            let f: Family = free_family(Ring::Frob { q: 2 }, vec![FreeGen::frobenius(r, c)], c);
            let d = delta(&f, 2).unwrap();
            assert!(degree_dims(d.eval(3).as_ref(), 12).iter().all(|&x| x == 0));
        }
        let d = delta(&sm(4, 2), 4).unwrap();
        assert!(degree_dims(d.eval(3).as_ref(), 9).iter().all(|&x| x == 0));
        // Δ(Sm ⊗ V) = Sm ⊗ Sh_1(V) = Sm, q = 2.
        let f: Family = free_family(Ring::Frob { q: 2 }, vec![FreeGen::standard(c)], c);
        let d = delta(&f, 2).unwrap();
        assert_eq!(degree_dims(d.eval(3).as_ref(), 3), degree_dims(sm(2, 2).eval(3).as_ref(), 3));
    }

    fn chain(q: u32, p: u32, upper: &str, mid: &str, lower: &str) -> ShortExact {
        let c = ctx(p);
        let ring = Ring::Frob { q };
        let i = |s: &str| GLIdeal::parse(s, c).unwrap();
        let l = MonomialFamily::new(c, ring, vec![Piece::Sub { upper: i(mid), lower: i(lower) }]).unwrap();
        let m = MonomialFamily::new(c, ring, vec![Piece::Sub { upper: i(upper), lower: i(lower) }]).unwrap();
        let n = MonomialFamily::new(c, ring, vec![Piece::Sub { upper: i(upper), lower: i(mid) }]).unwrap();
        ShortExact::new(
            "chain",
            MonomialMap::new(l, m.clone(), vec![(0, 0, 1)]).unwrap(),
            MonomialMap::new(m, n, vec![(0, 0, 1)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn six_term_max_ideal() {
        let seq = chain(2, 2, "1", "m", "0");
        let r = six_term_check(&seq, 2, 4).unwrap();
        assert!(!r.quotient_torsion_free);
        assert!(r.connecting_rank > 0);
        shift_exactness_check(&seq, 1, 3, 4).unwrap();
    }

    #[test]
    fn commute_and_double_shift() {
        let f: Family = ideal_family(Ring::Frob { q: 2 }, &GLIdeal::frobenius_power(0, ctx(2)), &GLIdeal::zero(ctx(2)))
            .unwrap();
        for n in 1..=3 {
            shift_commute_check(&f, 2, n).unwrap();
            double_shift_check(&f, 2, n).unwrap();
            delta_degree_check(&f, 2, n).unwrap();
        }
    }

    #[test]
    fn free_is_flat_at_once() {
        let s = sm(2, 2);
        let r = shift_until_flat(&s, 2, 3, &[2, 3]).unwrap();
        assert_eq!(r.flat_step, Some(0));
        let k: Family = residue_field(Ring::Frob { q: 2 }, ctx(2));
        let r = shift_until_flat(&k, 2, 4, &[2, 3]).unwrap();
        assert_eq!(r.flat_step, Some(1));
        assert!(r.steps.last().unwrap().zero);
    }

    #[test]
    fn block_shift_of_sym() {
        let c = ctx(2);
        let f: Family = ideal_family(Ring::Poly, &GLIdeal::parse("m^2", c).unwrap(), &GLIdeal::parse("m^3", c).unwrap())
            .unwrap();
        let r = block_shift(&f, 2, 2, 3).unwrap();
        assert_eq!(r.top_degree(0), Some(2));
        assert_eq!(r.top_degree(1), Some(1));
        assert_eq!(r.top_degree(2), Some(0));
    }
}
