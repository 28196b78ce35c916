//! GL-stable monomial ideals of S = k[x₁, x₂, …] in digit-vector form.
//!
//! A digit vector `b = (b₀, …, b_j)` stands for the product
//! `m^{b₀} (m^[p])^{b₁} ⋯ (m^[p^j])^{b_j}`. A [`GLIdeal`] is a finite sum of
//! such products kept as a containment antichain, so equal ideals have equal
//! representations.

mod parse;

pub use parse::parse_ideal;

use crate::combinatorics::{digit, Partition, PrimeContext};
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Orbit representatives of monomials are just partitions.
pub type MonomialExponent = Partition;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DigitVector {
    b: Vec<u32>,
}

impl DigitVector {
    pub fn new(b: impl IntoIterator<Item = u32>) -> Self {
        let mut b: Vec<u32> = b.into_iter().collect();
        while b.last() == Some(&0) {
            b.pop();
        }
        Self { b }
    }

    /// The all-zero vector, i.e. the unit ideal.
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn is_unit(&self) -> bool {
        self.b.is_empty()
    }

    pub fn digits(&self) -> &[u32] {
        &self.b
    }

    pub fn get(&self, m: usize) -> u32 {
        self.b.get(m).copied().unwrap_or(0)
    }

    /// Highest level carrying a nonzero digit.
    pub fn level(&self) -> Option<usize> {
        self.b.len().checked_sub(1)
    }

    pub fn degree(&self, ctx: PrimeContext) -> u64 {
        self.b
            .iter()
            .enumerate()
            .map(|(m, &x)| x as u64 * ctx.pow(m as u32))
            .sum()
    }

    /// Σ b_m, the number of Frobenius-power factors.
    pub fn weight(&self) -> u64 {
        self.b.iter().map(|&x| x as u64).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.b.len().max(other.b.len());
        Self::new((0..len).map(|m| self.get(m) + other.get(m)))
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        let len = self.b.len().max(other.b.len());
        let mut out = Vec::with_capacity(len);
        for m in 0..len {
            out.push(self.get(m).checked_sub(other.get(m))?);
        }
        Some(Self::new(out))
    }

    pub fn scale(&self, k: u32) -> Self {
        Self::new(self.b.iter().map(|&x| x * k))
    }

    /// `e` copies of level `m`, the vector of `(m^[p^m])^e`.
    pub fn single(m: usize, e: u32) -> Self {
        let mut b = vec![0; m + 1];
        b[m] = e;
        Self::new(b)
    }

    /// Renders as a product such as `m^2 * m[p^1]`.
    pub fn render(&self) -> String {
        if self.is_unit() {
            return "1".into();
        }
        let mut factors = Vec::new();
        for (m, &e) in self.b.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let atom = if m == 0 { "m".to_string() } else { format!("m[p^{m}]") };
            factors.push(if e == 1 { atom } else { format!("{atom}^{e}") });
        }
        factors.join(" * ")
    }
}

/// b_m = Σᵢ (m-th base-p digit of λᵢ). The empty monomial gives the unit token.
pub fn orbit_ideal(lambda: &[u32], ctx: PrimeContext) -> DigitVector {
    let mut b: Vec<u32> = Vec::new();
    for &x in lambda {
        let mut m = 0;
        let mut v = x as u64;
        while v > 0 {
            let d = (v % ctx.p() as u64) as u32;
            if b.len() <= m {
                b.resize(m + 1, 0);
            }
            b[m] += d;
            v /= ctx.p() as u64;
            m += 1;
        }
    }
    DigitVector::new(b)
}

/// The variable-disjoint monomial with b_m variables raised to p^m.
pub fn canonical_generator(b: &DigitVector, ctx: PrimeContext) -> MonomialExponent {
    let mut parts = Vec::new();
    for (m, &e) in b.b.iter().enumerate() {
        parts.extend(std::iter::repeat(ctx.pow(m as u32) as u32).take(e as usize));
    }
    Partition::new(parts)
}

/// Membership of x^λ in Π_m (m^[p^m])^{c_m}.
///
/// Dynamic programming over the variables; the state is the vector of
/// Frobenius factors still to be placed. Only maximal placements per
/// variable and minimal states are kept.
pub fn monomial_in_product(lambda: &[u32], c: &DigitVector, ctx: PrimeContext) -> bool {
    if c.is_unit() {
        return true;
    }
    let levels = c.b.len();
    let pows: Vec<u64> = (0..levels).map(|m| ctx.pow(m as u32)).collect();
    let mut exps: Vec<u64> = lambda.iter().filter(|&&x| x > 0).map(|&x| x as u64).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));

    let need: u64 = c.degree(ctx);
    let total: u64 = exps.iter().sum();
    if total < need {
        return false;
    }
    // Suffix sums bound what the remaining variables can still absorb.
    let mut suffix = vec![0u64; exps.len() + 1];
    for i in (0..exps.len()).rev() {
        suffix[i] = suffix[i + 1] + exps[i];
    }

    let mut states: Vec<Vec<u32>> = vec![c.b.clone()];
    for (i, &e) in exps.iter().enumerate() {
        let mut next: HashSet<Vec<u32>> = HashSet::new();
        for s in &states {
            let mut choice = vec![0u32; levels];
            place(s, e, levels, &pows, &mut choice, &mut next);
        }
        let mut cand: Vec<Vec<u32>> = next
            .into_iter()
            .filter(|s| {
                let deg: u64 = s.iter().zip(&pows).map(|(&x, &q)| x as u64 * q).sum();
                deg <= suffix[i + 1]
            })
            .collect();
        if cand.iter().any(|s| s.iter().all(|&x| x == 0)) {
            return true;
        }
        cand.sort();
        states = minimal_states(cand);
        if states.is_empty() {
            return false;
        }
    }
    false
}

/// Enumerates maximal placements of Frobenius factors into one exponent `e`,
/// highest level first, and records the residual states.
fn place(
    state: &[u32],
    e: u64,
    levels: usize,
    pows: &[u64],
    choice: &mut Vec<u32>,
    out: &mut HashSet<Vec<u32>>,
) {
    fn rec(
        m: isize,
        room: u64,
        state: &[u32],
        pows: &[u64],
        choice: &mut Vec<u32>,
        out: &mut HashSet<Vec<u32>>,
    ) {
        if m < 0 {
            // Maximal: no level can take one more factor.
            let maximal = (0..state.len()).all(|k| choice[k] == state[k] || pows[k] > room);
            if maximal {
                out.insert(state.iter().zip(choice.iter()).map(|(&s, &a)| s - a).collect());
            }
            return;
        }
        let mu = m as usize;
        let max_here = (room / pows[mu]).min(state[mu] as u64) as u32;
        for a in (0..=max_here).rev() {
            choice[mu] = a;
            rec(m - 1, room - a as u64 * pows[mu], state, pows, choice, out);
        }
        choice[mu] = 0;
    }
    rec(levels as isize - 1, e, state, pows, choice, out);
}

fn minimal_states(sorted: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut keep: Vec<Vec<u32>> = Vec::new();
    for s in sorted {
        if keep.iter().any(|k| k.iter().zip(&s).all(|(a, b)| a <= b)) {
            continue;
        }
        keep.retain(|k| !s.iter().zip(k).all(|(a, b)| a <= b));
        keep.push(s);
    }
    keep
}

/// A finitely generated GL-stable ideal of S.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GLIdeal {
    ctx: PrimeContext,
    gens: BTreeSet<DigitVector>,
}

impl GLIdeal {
    pub fn zero(ctx: PrimeContext) -> Self {
        Self { ctx, gens: BTreeSet::new() }
    }

    pub fn unit(ctx: PrimeContext) -> Self {
        Self::from_digit_vectors([DigitVector::unit()], ctx)
    }

    /// m^[p^k]; k = 0 gives m.
    pub fn frobenius_power(k: u32, ctx: PrimeContext) -> Self {
        Self::from_digit_vectors([DigitVector::single(k as usize, 1)], ctx)
    }

    pub fn product_ideal(b: DigitVector, ctx: PrimeContext) -> Self {
        Self::from_digit_vectors([b], ctx)
    }

    /// The GL-ideal generated by the orbit of x^λ.
    pub fn from_monomial(lambda: &[u32], ctx: PrimeContext) -> Self {
        Self::product_ideal(orbit_ideal(lambda, ctx), ctx)
    }

    pub fn from_digit_vectors(gens: impl IntoIterator<Item = DigitVector>, ctx: PrimeContext) -> Self {
        let mut ideal = Self { ctx, gens: gens.into_iter().collect() };
        ideal.canonicalize();
        ideal
    }

    pub fn parse(src: &str, ctx: PrimeContext) -> Result<Self> {
        parse_ideal(src, ctx)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn generators(&self) -> impl Iterator<Item = &DigitVector> {
        self.gens.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(DigitVector::is_unit)
    }

    /// Smallest and largest generator degrees.
    pub fn degree_range(&self) -> Option<(u64, u64)> {
        let degs = self.gens.iter().map(|b| b.degree(self.ctx));
        let min = degs.clone().min()?;
        Some((min, degs.max()?))
    }

    fn canonicalize(&mut self) {
        if self.is_unit() {
            self.gens = [DigitVector::unit()].into_iter().collect();
            return;
        }
        let all: Vec<DigitVector> = self.gens.iter().cloned().collect();
        let ctx = self.ctx;
        let keep: BTreeSet<DigitVector> = all
            .iter()
            .filter(|b| {
                let g = canonical_generator(b, ctx);
                !all.iter().any(|c| {
                    c != *b && monomial_in_product(g.parts(), c, ctx) && {
                        // Ties between equal ideals keep the smaller vector.
                        let back = canonical_generator(c, ctx);
                        !monomial_in_product(back.parts(), b, ctx) || c < *b
                    }
                })
            })
            .cloned()
            .collect();
        self.gens = keep;
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "ideals over different primes");
        Self::from_digit_vectors(self.gens.iter().chain(&other.gens).cloned(), self.ctx)
    }

    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "ideals over different primes");
        let mut gens = Vec::new();
        for b in &self.gens {
            for c in &other.gens {
                gens.push(b.add(c));
            }
        }
        Self::from_digit_vectors(gens, self.ctx)
    }

    pub fn power(&self, e: u32) -> Self {
        let mut acc = Self::unit(self.ctx);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    pub fn contains_monomial(&self, lambda: &[u32]) -> bool {
        ideal_member(lambda, self)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.gens.iter().map(DigitVector::render).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for GLIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn ideal_member(lambda: &[u32], ideal: &GLIdeal) -> bool {
    ideal
        .gens
        .iter()
        .any(|c| monomial_in_product(lambda, c, ideal.ctx))
}

/// I ⊇ J, tested on the canonical generators of J.
pub fn ideal_contains(i: &GLIdeal, j: &GLIdeal) -> bool {
    j.gens
        .iter()
        .all(|c| ideal_member(canonical_generator(c, j.ctx).parts(), i))
}

pub fn ideal_sum(i: &GLIdeal, j: &GLIdeal) -> GLIdeal {
    i.sum(j)
}

pub fn ideal_product(i: &GLIdeal, j: &GLIdeal) -> GLIdeal {
    i.product(j)
}

/// The GL-radical of a GL-ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Radical {
    /// The radical of the zero ideal is (0).
    Zero,
    Unit,
    /// m^[p^r].
    Frobenius(u32),
}

impl Radical {
    pub fn to_ideal(self, ctx: PrimeContext) -> GLIdeal {
        match self {
            Radical::Zero => GLIdeal::zero(ctx),
            Radical::Unit => GLIdeal::unit(ctx),
            Radical::Frobenius(r) => GLIdeal::frobenius_power(r, ctx),
        }
    }
}

/// m^[p^r] with r the least top level among the generators.
pub fn gl_radical(ideal: &GLIdeal) -> Radical {
    if ideal.is_zero() {
        return Radical::Zero;
    }
    if ideal.is_unit() {
        return Radical::Unit;
    }
    let r = ideal
        .gens
        .iter()
        .filter_map(DigitVector::level)
        .min()
        .expect("nonzero proper ideal has a generator");
    Radical::Frobenius(r as u32)
}

/// (0) and the Frobenius powers m^[p^r] are the GL-primes.
pub fn is_gl_prime(ideal: &GLIdeal) -> bool {
    if ideal.is_zero() {
        return true;
    }
    if ideal.gens.len() != 1 {
        return false;
    }
    let b = ideal.gens.iter().next().unwrap();
    b.weight() == 1
}

/// Every nonzero digit vector of degree at most `max_degree`.
pub fn digit_vectors_up_to(max_degree: u64, ctx: PrimeContext) -> Vec<DigitVector> {
    let mut top = 0usize;
    while ctx.pow(top as u32 + 1) <= max_degree {
        top += 1;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; top + 1];
    fn rec(m: isize, room: u64, ctx: PrimeContext, cur: &mut Vec<u32>, out: &mut Vec<DigitVector>) {
        if m < 0 {
            let b = DigitVector::new(cur.iter().copied());
            if !b.is_unit() {
                out.push(b);
            }
            return;
        }
        let q = ctx.pow(m as u32);
        for a in 0..=(room / q) {
            cur[m as usize] = a as u32;
            rec(m - 1, room - a * q, ctx, cur, out);
        }
        cur[m as usize] = 0;
    }
    rec(top as isize, max_degree, ctx, &mut cur, &mut out);
    out.sort_by_key(|b| (b.degree(ctx), b.clone()));
    out
}

/// Pair of monomials outside I whose variable-disjoint product lies in I.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub f: MonomialExponent,
    pub g: MonomialExponent,
}

impl Witness {
    /// f ⊔ g: the exponents of f followed by those of g on fresh variables.
    pub fn disjoint_product(&self) -> Vec<u32> {
        self.f.parts().iter().chain(self.g.parts()).copied().collect()
    }
}

/// Searches for a witness that I is not GL-prime.
///
/// Membership of a monomial only depends on its orbit ideal, so the search
/// runs over pairs of canonical generators whose degrees sum to at most the
/// largest generator degree of I. That bound is complete: splitting any
/// generator of digit weight ≥ 2 yields a witness. `Ok(None)` is returned
/// only when the search is exhausted and I is GL-prime; exhaustion on a
/// non-prime ideal is an error.
pub fn non_primality_witness(ideal: &GLIdeal) -> Result<Option<Witness>> {
    let ctx = ideal.ctx;
    if ideal.is_zero() || ideal.is_unit() {
        return domain("non_primality_witness needs a proper nonzero ideal");
    }
    let (_, bound) = ideal.degree_range().unwrap();
    let vecs = digit_vectors_up_to(bound, ctx);
    for (a, bf) in vecs.iter().enumerate() {
        let f = canonical_generator(bf, ctx);
        if ideal_member(f.parts(), ideal) {
            continue;
        }
        let df = bf.degree(ctx);
        for bg in &vecs[a..] {
            if df + bg.degree(ctx) > bound {
                break;
            }
            let g = canonical_generator(bg, ctx);
            if ideal_member(g.parts(), ideal) {
                continue;
            }
            let w = Witness { f: f.clone(), g };
            if ideal_member(&w.disjoint_product(), ideal) {
                return Ok(Some(w));
            }
        }
    }
    if is_gl_prime(ideal) {
        Ok(None)
    } else {
        Err(Error::Exhausted(format!(
            "no witness up to degree {bound} for non-prime ideal {ideal}"
        )))
    }
}

/// All exponent vectors of total degree `d` in `n` variables, each entry at most `cap`.
pub fn compositions(d: u32, n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    fn rec(i: usize, rem: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i == n - 1 {
            if rem <= cap {
                cur[i] = rem;
                out.push(cur.clone());
            }
            return;
        }
        if rem as u64 > cap as u64 * (n - i) as u64 {
            return;
        }
        for a in (0..=rem.min(cap)).rev() {
            cur[i] = a;
            rec(i + 1, rem - a, cap, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, cap, &mut cur, &mut out);
    out
}

/// Minimal monomial generators of I{k^n} in degrees ≤ d_max.
pub fn evaluate_ideal(ideal: &GLIdeal, n: usize, d_max: u32) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return domain("evaluate_ideal needs n >= 1");
    }
    let mut out = Vec::new();
    for d in 0..=d_max {
        for w in compositions(d, n, d) {
            if !ideal_member(&w, ideal) {
                continue;
            }
            let minimal = (0..n).all(|i| {
                if w[i] == 0 {
                    return true;
                }
                let mut v = w.clone();
                v[i] -= 1;
                !ideal_member(&v, ideal)
            });
            if minimal {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// dim (S/I){k^n} in degree d.
pub fn hilbert_function(ideal: &GLIdeal, n: usize, d: u32) -> Result<u64> {
    if n == 0 {
        return domain("hilbert_function needs n >= 1");
    }
    let mut count = 0u64;
    for lambda in Partition::all_of_size(d) {
        if lambda.len() > n {
            continue;
        }
        if !ideal_member(lambda.parts(), ideal) {
            let mut padded = lambda.parts().to_vec();
            padded.resize(n, 0);
            count += crate::combinatorics::orbit_size(&padded) as u64;
        }
    }
    Ok(count)
}

/// Digit check used by tests and the membership oracle alike.
pub fn digit_sum_at_level(lambda: &[u32], m: usize, ctx: PrimeContext) -> u64 {
    lambda.iter().map(|&x| digit(x as u64, m, ctx) as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn ideal(s: &str, p: u32) -> GLIdeal {
        GLIdeal::parse(s, ctx(p)).unwrap()
    }

    #[test]
    fn orbit_ideal_examples() {
        assert_eq!(orbit_ideal(&[10], ctx(2)), DigitVector::new([0, 1, 0, 1]));
        assert_eq!(orbit_ideal(&[1], ctx(5)), DigitVector::new([1]));
        assert_eq!(orbit_ideal(&[3, 2], ctx(2)), DigitVector::new([1, 2]));
        assert!(orbit_ideal(&[], ctx(2)).is_unit());
    }

    #[test]
    fn canonical_generator_examples() {
        let c2 = ctx(2);
        assert_eq!(canonical_generator(&DigitVector::new([0, 1, 0, 1]), c2).parts(), &[8, 2]);
        assert_eq!(canonical_generator(&DigitVector::new([2]), ctx(3)).parts(), &[1, 1]);
        assert_eq!(canonical_generator(&DigitVector::new([1, 1]), ctx(3)).parts(), &[3, 1]);
    }

    #[test]
    fn membership_examples() {
        let c2 = ctx(2);
        assert!(monomial_in_product(&[2], &DigitVector::new([2]), c2));
        assert!(!monomial_in_product(&[1; 9], &DigitVector::new([0, 1]), c2));
        assert!(monomial_in_product(&[4, 2], &DigitVector::new([0, 3]), c2));
        assert!(!ideal_member(&[1], &ideal("m[p^1]", 2)));
        assert!(ideal_member(&[2], &ideal("m^2 + m[p^2]", 2)));
    }

    #[test]
    fn containment_examples() {
        let p = 3;
        assert!(ideal_contains(&ideal("m", p), &ideal("m[p^1]", p)));
        assert!(!ideal_contains(&ideal("m[p^1]", p), &ideal("m", p)));
        assert!(ideal_contains(&ideal("m^2", 2), &ideal("m[p^1]", 2)));
    }

    #[test]
    fn arithmetic_examples() {
        let c2 = ctx(2);
        assert_eq!(
            ideal("m[p^1] * m[p^3]", 2),
            GLIdeal::product_ideal(DigitVector::new([0, 1, 0, 1]), c2)
        );
        let i = ideal("m^2 * m[p^1]", 2);
        assert_eq!(i.product(&GLIdeal::unit(c2)), i);
        assert_eq!(ideal("m + m[p^1]", 2), ideal("m", 2));
        assert_eq!(ideal("m + m[p^1]", 2).render(), "m");
    }

    #[test]
    fn radical_examples() {
        assert_eq!(gl_radical(&ideal("m[p^1]", 3)), Radical::Frobenius(1));
        assert_eq!(gl_radical(&ideal("m * m[p^1]", 3)), Radical::Frobenius(1));
        assert_eq!(gl_radical(&ideal("m^2", 2)), Radical::Frobenius(0));
        assert_eq!(gl_radical(&GLIdeal::zero(ctx(2))), Radical::Zero);
    }

    #[test]
    fn primality_examples() {
        assert!(is_gl_prime(&ideal("m[p^2]", 2)));
        assert!(!is_gl_prime(&ideal("m * m[p^1]", 2)));
        assert!(!is_gl_prime(&ideal("m^2", 2)));
        assert!(is_gl_prime(&GLIdeal::zero(ctx(2))));
        assert!(!is_gl_prime(&GLIdeal::unit(ctx(2))));

        let w = non_primality_witness(&ideal("m^2", 2)).unwrap().unwrap();
        assert_eq!((w.f.parts(), w.g.parts()), (&[1][..], &[1][..]));
        assert_eq!(non_primality_witness(&ideal("m[p^1]", 3)).unwrap(), None);
        let w = non_primality_witness(&ideal("m * m[p^1]", 2)).unwrap().unwrap();
        let i = ideal("m * m[p^1]", 2);
        assert!(!ideal_member(w.f.parts(), &i));
        assert!(!ideal_member(w.g.parts(), &i));
        assert!(ideal_member(&w.disjoint_product(), &i));
    }

    #[test]
    fn evaluation_examples() {
        let gens = evaluate_ideal(&ideal("m[p^1]", 2), 2, 4).unwrap();
        assert_eq!(gens, vec![vec![2, 0], vec![0, 2]]);
        let gens = evaluate_ideal(&ideal("m * m[p^1]", 2), 2, 5).unwrap();
        assert_eq!(gens, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert!(evaluate_ideal(&GLIdeal::zero(ctx(2)), 3, 4).unwrap().is_empty());
    }

    #[test]
    fn hilbert_examples() {
        let i = ideal("m[p^1]", 2);
        let dims: Vec<u64> = (0..4).map(|d| hilbert_function(&i, 2, d).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 1, 0]);
        assert_eq!(hilbert_function(&GLIdeal::zero(ctx(2)), 2, 5).unwrap(), 6);
        assert_eq!(hilbert_function(&ideal("m[p^1]", 3), 3, 6).unwrap(), 1);
    }

    #[test]
    fn parser_errors_carry_positions() {
        let c = ctx(2);
        match GLIdeal::parse("m^2 * ", c) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(GLIdeal::parse("m[p^0]", c).is_err());
        assert!(GLIdeal::parse("m^0", c).is_err());
        assert!(GLIdeal::parse("(m + m[p^1])^2", c).is_ok());
    }

    #[test]
    fn digit_vector_enumeration() {
        let c = ctx(2);
        let v = digit_vectors_up_to(3, c);
        // degree 1: (1); degree 2: (2), (0,1); degree 3: (3), (1,1)
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|b| b.degree(c) <= 3));
    }
}
