//! Divided-power operators e_{i,j}^{(l)} and binom(h_i, l) acting on
//! polynomials over F_p, and the GL_n-submodule closure they generate.
//!
//! Variables are 0-indexed. On a monomial, e_{i,j}^{(l)} moves l units of
//! exponent from x_j to x_i with coefficient binom(a_j, l); binom(h_i, l)
//! scales x^a by binom(a_i, l).

use crate::combinatorics::{lucas_binom, PrimeContext};
use crate::error::{domain, invariant, Error, Result};
use crate::linalg::inv_mod;
use rand::Rng;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

/// Sparse polynomial in n variables over F_p; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyFp {
    ctx: PrimeContext,
    n: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl PolyFp {
    pub fn zero(n: usize, ctx: PrimeContext) -> Self {
        Self { ctx, n, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Vec<u32>, coeff: u32, ctx: PrimeContext) -> Self {
        let mut f = Self::zero(exp.len(), ctx);
        f.add_term(exp, coeff);
        f
    }

    pub fn from_terms(n: usize, ctx: PrimeContext, terms: impl IntoIterator<Item = (Vec<u32>, u32)>) -> Result<Self> {
        let mut f = Self::zero(n, ctx);
        for (e, c) in terms {
            if e.len() != n {
                return domain(format!("exponent {e:?} has the wrong number of variables (n = {n})"));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// Random polynomial with up to `terms` monomials, homogeneous of degree d.
    pub fn random_homogeneous(n: usize, d: u32, terms: usize, ctx: PrimeContext, rng: &mut impl Rng) -> Self {
        let mut f = Self::zero(n, ctx);
        for _ in 0..terms {
            let mut e = vec![0u32; n];
            for _ in 0..d {
                e[rng.gen_range(0..n)] += 1;
            }
            f.add_term(e, rng.gen_range(1..ctx.p()));
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: &[u32]) -> u32 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    /// Common degree of all terms; None for zero or inhomogeneous polynomials.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    fn leading(&self) -> Option<(&Vec<u32>, u32)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    fn add_term(&mut self, exp: Vec<u32>, coeff: u32) {
        let p = self.ctx.p();
        let c = coeff % p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        for (e, a) in self.terms() {
            out.add_term(e.clone(), (a as u64 * c as u64 % self.ctx.p() as u64) as u32);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.ctx.p() - 1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.ctx.p() as u64;
        let mut out = Self::zero(self.n, self.ctx);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, (ca as u64 * cb as u64 % p) as u32);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::monomial(vec![0; self.n], 1, self.ctx);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// f^p, computed termwise (Frobenius is additive in characteristic p).
    pub fn frobenius(&self) -> Self {
        let p = self.ctx.p();
        let mut out = Self::zero(self.n, self.ctx);
        for (e, c) in self.terms() {
            let c_p = (0..p - 1).fold(c as u64, |acc, _| acc * c as u64 % p as u64) as u32;
            out.add_term(e.iter().map(|x| x * p).collect(), c_p);
        }
        out
    }

    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        let mut out = Self::zero(self.n, self.ctx);
        for (e, c) in self.terms() {
            let mut e = e.clone();
            e.swap(a, b);
            out.add_term(e, c);
        }
        out
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
                    .collect();
                match (mono.is_empty(), *c) {
                    (true, c) => c.to_string(),
                    (false, 1) => mono.join("*"),
                    (false, c) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DividedOp {
    /// e_{i,j}^{(l)}, i ≠ j.
    E { i: usize, j: usize, l: u32 },
    /// binom(h_i, l).
    H { i: usize, l: u32 },
}

impl DividedOp {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            DividedOp::E { i, j, l } if i < n && j < n && i != j && l >= 1 => Ok(()),
            DividedOp::H { i, l } if i < n && l >= 1 => Ok(()),
            op => domain(format!("{op:?} is not an operator on {n} variables")),
        }
    }
}

pub fn apply_e(i: usize, j: usize, l: u32, f: &PolyFp) -> PolyFp {
    let ctx = f.ctx;
    let mut out = PolyFp::zero(f.n, ctx);
    for (e, c) in f.terms() {
        if e[j] < l {
            continue;
        }
        let b = lucas_binom(e[j] as u64, l as u64, ctx);
        if b == 0 {
            continue;
        }
        let mut t = e.clone();
        t[j] -= l;
        t[i] += l;
        out.add_term(t, (b as u64 * c as u64 % ctx.p() as u64) as u32);
    }
    out
}

pub fn apply_h(i: usize, l: u32, f: &PolyFp) -> PolyFp {
    let ctx = f.ctx;
    let mut out = PolyFp::zero(f.n, ctx);
    for (e, c) in f.terms() {
        let b = lucas_binom(e[i] as u64, l as u64, ctx);
        out.add_term(e.clone(), (b as u64 * c as u64 % ctx.p() as u64) as u32);
    }
    out
}

pub fn apply(op: DividedOp, f: &PolyFp) -> Result<PolyFp> {
    op.validate(f.n)?;
    Ok(match op {
        DividedOp::E { i, j, l } => apply_e(i, j, l, f),
        DividedOp::H { i, l } => apply_h(i, l, f),
    })
}

/// e^{(l)}(fg) = Σ_s e^{(s)}(f)·e^{(l−s)}(g).
pub fn divided_leibniz_check(i: usize, j: usize, l: u32, f: &PolyFp, g: &PolyFp) -> Result<PolyFp> {
    let e = |k: u32, h: &PolyFp| if k == 0 { h.clone() } else { apply_e(i, j, k, h) };
    let lhs = e(l, &f.mul(g));
    let mut rhs = PolyFp::zero(f.n, f.ctx);
    for s in 0..=l {
        rhs = rhs.add(&e(s, f).mul(&e(l - s, g)));
    }
    if lhs != rhs {
        return invariant(format!("divided Leibniz rule fails for e_({i},{j})^({l}): {lhs} ≠ {rhs}"));
    }
    Ok(lhs)
}

/// e^{(l)} e^{(s)} = binom(l+s, l) e^{(l+s)} on f.
pub fn composition_check(i: usize, j: usize, l: u32, s: u32, f: &PolyFp) -> Result<()> {
    let lhs = apply_e(i, j, l, &apply_e(i, j, s, f));
    let rhs = apply_e(i, j, l + s, f).scale(lucas_binom((l + s) as u64, l as u64, f.ctx));
    if lhs != rhs {
        return invariant(format!("composition identity fails for l = {l}, s = {s} on {f}"));
    }
    Ok(())
}

/// e^{(l)}(f^p) vanishes for p ∤ l and equals (e^{(l/p)} f)^p otherwise.
pub fn frobenius_commutation_check(i: usize, j: usize, l: u32, f: &PolyFp) -> Result<()> {
    let p = f.ctx.p();
    let lhs = apply_e(i, j, l, &f.frobenius());
    let rhs = if l % p == 0 { apply_e(i, j, l / p, f).frobenius() } else { PolyFp::zero(f.n, f.ctx) };
    if lhs != rhs {
        return invariant(format!("e^({l}) does not commute with Frobenius on {f}"));
    }
    Ok(())
}

/// Echelon basis of a space of polynomials, one vector per leading monomial.
#[derive(Clone, Debug)]
pub struct PolySpace {
    rows: BTreeMap<Vec<u32>, PolyFp>,
}

impl PolySpace {
    pub fn new() -> Self {
        Self { rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &PolyFp> {
        self.rows.values()
    }

    fn reduce(&self, f: &PolyFp) -> PolyFp {
        let mut f = f.clone();
        let mut bound: Option<Vec<u32>> = None;
        loop {
            // Leading term strictly below the previous one, so this terminates.
            let next = match &bound {
                None => f.terms.iter().next_back(),
                Some(b) => f.terms.range(..b.clone()).next_back(),
            };
            let Some((e, c)) = next.map(|(e, &c)| (e.clone(), c)) else { return f };
            if let Some(row) = self.rows.get(&e) {
                let (_, lc) = row.leading().expect("stored rows are nonzero");
                let factor = (c as u64 * inv_mod(lc, f.ctx.p()) as u64 % f.ctx.p() as u64) as u32;
                f = f.sub(&row.scale(factor));
            }
            bound = Some(e);
        }
    }

    pub fn contains(&self, f: &PolyFp) -> bool {
        self.reduce(f).is_zero()
    }

    /// Adds f; returns the reduced vector when it enlarged the space.
    pub fn insert(&mut self, f: &PolyFp) -> Option<PolyFp> {
        let r = self.reduce(f);
        let lead = r.leading()?.0.clone();
        self.rows.insert(lead, r.clone());
        Some(r)
    }

    /// The monomials of the space, when it is spanned by monomials.
    pub fn monomials(&self) -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for f in self.rows.values() {
            if f.terms.len() != 1 {
                return None;
            }
            out.push(f.terms.keys().next().unwrap().clone());
        }
        out.sort();
        Some(out)
    }
}

impl Default for PolySpace {
    fn default() -> Self {
        Self::new()
    }
}

/// Operators e_{i,j}^{(p^t)} with p^t ≤ d.
fn generating_ops(n: usize, d: u32, ctx: PrimeContext) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    let mut l = 1u32;
    while l <= d.max(1) {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push((i, j, l));
                }
            }
        }
        l *= ctx.p();
    }
    out
}

/// Smallest space of degree-d polynomials in n variables containing the seeds
/// and closed under e_{i,j}^{(p^t)}, p^t ≤ d, and permutations of variables.
pub fn gln_submodule_closure(seeds: &[PolyFp], d: u32, n: usize, dim_cap: usize) -> Result<PolySpace> {
    let Some(first) = seeds.first() else { return Ok(PolySpace::new()) };
    let ctx = first.ctx;
    for s in seeds {
        if s.n != n || (!s.is_zero() && s.degree() != Some(d)) {
            return domain(format!("seed {s} is not homogeneous of degree {d} in {n} variables"));
        }
    }
    let ops = generating_ops(n, d, ctx);
    let mut space = PolySpace::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if let Some(r) = space.insert(s) {
            queue.push_back(r);
        }
    }
    while let Some(f) = queue.pop_front() {
        crate::limits::check()?;
        let images = ops
            .iter()
            .map(|&(i, j, l)| apply_e(i, j, l, &f))
            .chain((0..n.saturating_sub(1)).map(|a| f.swap_vars(a, a + 1)));
        for g in images {
            if g.is_zero() {
                continue;
            }
            if let Some(r) = space.insert(&g) {
                if space.dim() > dim_cap {
                    return Err(Error::ResourceLimit(format!("closure exceeds {dim_cap} dimensions")));
                }
                queue.push_back(r);
            }
        }
    }
    Ok(space)
}

/// Whether the span of a set of degree-d monomials is a GL_n-submodule.
///
/// Permutation closure is checked directly; the divided powers then only
/// need to be applied to weakly decreasing exponent vectors.
pub fn verify_gl_stability(monomials: &[Vec<u32>], d: u32, n: usize, ctx: PrimeContext) -> bool {
    let set: HashSet<&Vec<u32>> = monomials.iter().collect();
    if monomials.iter().any(|e| e.len() != n || e.iter().sum::<u32>() != d) {
        return false;
    }
    for e in monomials {
        for a in 0..n.saturating_sub(1) {
            let mut s = e.clone();
            s.swap(a, a + 1);
            if !set.contains(&s) {
                return false;
            }
        }
    }
    let ops = generating_ops(n, d, ctx);
    for e in monomials.iter().filter(|e| e.windows(2).all(|w| w[0] >= w[1])) {
        for &(i, j, l) in &ops {
            if e[j] < l || lucas_binom(e[j] as u64, l as u64, ctx) == 0 {
                continue;
            }
            let mut t = e.clone();
            t[j] -= l;
            t[i] += l;
            if !set.contains(&t) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn x(e: &[u32], p: u32) -> PolyFp {
        PolyFp::monomial(e.to_vec(), 1, ctx(p))
    }

    #[test]
    fn basic_actions() {
        assert_eq!(apply_e(0, 1, 2, &x(&[0, 2], 2)), x(&[2, 0], 2));
        assert_eq!(apply_h(0, 1, &x(&[1, 1], 3)), x(&[1, 1], 3));
        assert!(apply_h(0, 2, &x(&[0, 3], 3)).is_zero());
        assert!(apply(DividedOp::E { i: 0, j: 0, l: 1 }, &x(&[1, 0], 2)).is_err());
    }

    #[test]
    fn leibniz_small() {
        let f = x(&[0, 1], 2);
        assert_eq!(divided_leibniz_check(0, 1, 2, &f, &f).unwrap(), x(&[2, 0], 2));
        divided_leibniz_check(0, 1, 0, &f, &f).unwrap();
    }

    #[test]
    fn identities_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            for _ in 0..20 {
                let f = PolyFp::random_homogeneous(3, 4, 4, ctx(p), &mut rng);
                let g = PolyFp::random_homogeneous(3, 3, 3, ctx(p), &mut rng);
                divided_leibniz_check(1, 2, 3, &f, &g).unwrap();
                composition_check(0, 2, 2, 1, &f).unwrap();
                frobenius_commutation_check(2, 0, p, &f).unwrap();
            }
        }
    }

    #[test]
    fn closure_examples() {
        let s = gln_submodule_closure(&[x(&[2, 0, 0], 2)], 2, 3, 100).unwrap();
        assert_eq!(s.monomials().unwrap(), vec![vec![0, 0, 2], vec![0, 2, 0], vec![2, 0, 0]]);
        let s = gln_submodule_closure(&[x(&[2, 0, 0], 3)], 2, 3, 100).unwrap();
        assert_eq!(s.dim(), 6);
        let again = gln_submodule_closure(&s.basis().cloned().collect::<Vec<_>>(), 2, 3, 100).unwrap();
        assert_eq!(again.dim(), 6);
    }

    #[test]
    fn stability_examples() {
        let c = ctx(2);
        let orbit: Vec<Vec<u32>> = vec![vec![3, 1], vec![1, 3]];
        assert!(!verify_gl_stability(&orbit, 4, 2, c));
        let all: Vec<Vec<u32>> = (0..=4).map(|a| vec![a, 4 - a]).collect();
        assert!(verify_gl_stability(&all, 4, 2, c));
    }
}
