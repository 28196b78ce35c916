//! Base-p arithmetic, partitions, weights and the flat-weight order.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// The characteristic. Construction checks primality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeContext {
    p: u32,
}

/// Largest supported prime; products of two residues must fit in a `u32`.
pub const MAX_PRIME: u32 = 65521;

impl PrimeContext {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return domain(format!("p = {p} is not a supported prime"));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn pow(&self, r: u32) -> u64 {
        (self.p as u64).pow(r)
    }

    /// Returns `r` when `q = p^r`.
    pub fn log(&self, q: u64) -> Option<u32> {
        if q == 0 {
            return None;
        }
        let mut r = 0;
        let mut x = q;
        while x % self.p as u64 == 0 {
            x /= self.p as u64;
            r += 1;
        }
        (x == 1).then_some(r)
    }

    pub fn is_power(&self, q: u64) -> bool {
        self.log(q).is_some()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Base-p digits of `n`, least significant first, no trailing zeros.
pub fn digits(n: u64, ctx: PrimeContext) -> Vec<u32> {
    let p = ctx.p as u64;
    let mut out = Vec::new();
    let mut x = n;
    while x > 0 {
        out.push((x % p) as u32);
        x /= p;
    }
    out
}

pub fn from_digits(d: &[u32], ctx: PrimeContext) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * ctx.p as u64 + x as u64)
}

/// The m-th base-p digit of `n`.
pub fn digit(n: u64, m: usize, ctx: PrimeContext) -> u32 {
    let p = ctx.p as u64;
    let mut x = n;
    for _ in 0..m {
        x /= p;
        if x == 0 {
            return 0;
        }
    }
    (x % p) as u32
}

/// C(a, b) mod p by Lucas's theorem.
pub fn lucas_binom(a: u64, b: u64, ctx: PrimeContext) -> u32 {
    if b > a {
        return 0;
    }
    let p = ctx.p as u64;
    let (mut a, mut b) = (a, b);
    let mut acc = 1u64;
    while b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom_mod(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    acc as u32
}

/// C(a, b) mod p for a < p, via the multiplicative formula and Fermat inverses.
fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 0..b {
        num = num * ((a - k) % p) % p;
        den = den * ((k + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// The largest power of p dividing `s`.
pub fn largest_p_power_dividing(s: u64, ctx: PrimeContext) -> Result<u64> {
    if s == 0 {
        return domain("largest_p_power_dividing needs s >= 1");
    }
    let p = ctx.p as u64;
    let mut q = 1u64;
    let mut x = s;
    while x % p == 0 {
        x /= p;
        q *= p;
    }
    Ok(q)
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts and drops zeros, so any exponent vector gives its orbit representative.
    pub fn new(parts: impl IntoIterator<Item = u32>) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&x| x > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&x| x as u64).sum()
    }

    /// Successive differences (including the last part against 0) are below p.
    pub fn is_p_restricted(&self, ctx: PrimeContext) -> bool {
        let mut padded = self.parts.clone();
        padded.push(0);
        padded.windows(2).all(|w| w[0] - w[1] < ctx.p)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=max.min(rem)).rev() {
                cur.push(k);
                rec(rem - k, k, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }
}

/// A finitely supported exponent vector indexed by variable position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    entries: Vec<u32>,
}

impl Weight {
    pub fn new(entries: impl IntoIterator<Item = u32>) -> Self {
        let mut entries: Vec<u32> = entries.into_iter().collect();
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Self { entries }
    }

    /// Weights here are polynomial, so negative entries are rejected.
    pub fn from_signed(entries: &[i64]) -> Result<Self> {
        if let Some(x) = entries.iter().find(|&&x| x < 0) {
            return domain(format!("negative weight entry {x}"));
        }
        Ok(Self::new(entries.iter().map(|&x| x as u32)))
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn size(&self) -> u64 {
        self.entries.iter().map(|&x| x as u64).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.entries.len()).filter(|&i| self.entries[i] > 0).collect()
    }
}

/// Counts (n_0, n_1, ...) of parts equal to p^0, p^1, ...
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PMagnitude {
    counts: Vec<u64>,
}

impl PMagnitude {
    pub fn new(counts: impl IntoIterator<Item = u64>) -> Self {
        let mut counts: Vec<u64> = counts.into_iter().collect();
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Σ n_i p^i.
    pub fn total_degree(&self, ctx: PrimeContext) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c * ctx.pow(i as u32))
            .sum()
    }

    /// Lexicographic comparison, padding the shorter sequence with zeros.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let len = self.counts.len().max(other.counts.len());
        for i in 0..len {
            let a = self.counts.get(i).copied().unwrap_or(0);
            let b = other.counts.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

pub fn is_flat(w: &Weight, ctx: PrimeContext) -> bool {
    w.entries
        .iter()
        .all(|&x| x == 0 || ctx.is_power(x as u64))
}

pub fn pmag(w: &Weight, ctx: PrimeContext) -> Result<PMagnitude> {
    let mut counts: Vec<u64> = Vec::new();
    for &x in &w.entries {
        if x == 0 {
            continue;
        }
        let Some(r) = ctx.log(x as u64) else {
            return domain(format!("weight entry {x} is not a power of {}", ctx.p));
        };
        let r = r as usize;
        if counts.len() <= r {
            counts.resize(r + 1, 0);
        }
        counts[r] += 1;
    }
    Ok(PMagnitude::new(counts))
}

/// λ < μ in the flat order iff pmag(λ) is lexicographically larger.
pub fn flat_order_less(lambda: &Weight, mu: &Weight, ctx: PrimeContext) -> Result<bool> {
    let a = pmag(lambda, ctx)?;
    let b = pmag(mu, ctx)?;
    Ok(a.lex_cmp(&b) == Ordering::Greater)
}

/// Unique expansion μ = μ⁰ + p μ¹ + p² μ² + … with every μⁱ p-restricted.
pub fn p_restricted_decomposition(mu: &Partition, ctx: PrimeContext) -> Vec<Partition> {
    let p = ctx.p;
    let mut out = Vec::new();
    let mut cur: Vec<u32> = mu.parts.clone();
    while cur.iter().any(|&x| x > 0) {
        // μ⁰_j = Σ_{t ≥ j} ((μ_t − μ_{t+1}) mod p)
        let len = cur.len();
        let mut piece = vec![0u32; len];
        let mut acc = 0u32;
        for j in (0..len).rev() {
            let next = if j + 1 < len { cur[j + 1] } else { 0 };
            acc += (cur[j] - next) % p;
            piece[j] = acc;
        }
        for j in 0..len {
            cur[j] = (cur[j] - piece[j]) / p;
        }
        out.push(Partition::new(piece));
    }
    let total: u64 = out
        .iter()
        .enumerate()
        .map(|(i, part)| part.size() * ctx.pow(i as u32))
        .sum();
    debug_assert_eq!(total, mu.size());
    out
}

/// (|μ⁰|, |μ¹|, …) from the p-restricted expansion.
pub fn min_flat_pmag(mu: &Partition, ctx: PrimeContext) -> PMagnitude {
    PMagnitude::new(
        p_restricted_decomposition(mu, ctx)
            .iter()
            .map(|part| part.size()),
    )
}

pub fn weights_disjoint(a: &Weight, b: &Weight) -> bool {
    a.entries
        .iter()
        .zip(&b.entries)
        .all(|(&x, &y)| x == 0 || y == 0)
}

/// Multinomial count of distinct permutations of `w`.
pub fn orbit_size(w: &[u32]) -> u128 {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let mut acc: u128 = 1;
    let mut placed: u128 = 0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        for k in 0..(j - i) as u128 {
            placed += 1;
            acc = acc * placed / (k + 1);
        }
        i = j;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digits(10, ctx(2)), vec![0, 1, 0, 1]);
        assert!(digits(0, ctx(3)).is_empty());
        assert_eq!(digits(9, ctx(3)), vec![0, 0, 1]);
        assert_eq!(digit(10, 3, ctx(2)), 1);
        assert_eq!(digit(10, 7, ctx(2)), 0);
    }

    #[test]
    fn rejects_composites() {
        assert!(PrimeContext::new(4).is_err());
        assert!(PrimeContext::new(1).is_err());
        assert!(PrimeContext::new(7).is_ok());
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(4, 2, ctx(2)), 0);
        assert_eq!(lucas_binom(27, 27, ctx(3)), 1);
        assert_eq!(lucas_binom(5, 2, ctx(3)), 1);
        assert_eq!(lucas_binom(2, 5, ctx(3)), 0);
    }

    #[test]
    fn p_power_examples() {
        assert_eq!(largest_p_power_dividing(12, ctx(2)).unwrap(), 4);
        assert_eq!(largest_p_power_dividing(5, ctx(2)).unwrap(), 1);
        assert_eq!(largest_p_power_dividing(18, ctx(3)).unwrap(), 9);
        assert_ne!(lucas_binom(18, 9, ctx(3)), 0);
        assert!(largest_p_power_dividing(0, ctx(3)).is_err());
    }

    #[test]
    fn flatness_and_pmag() {
        let c = ctx(3);
        assert!(is_flat(&Weight::new([3, 1, 1, 1]), c));
        assert!(!is_flat(&Weight::new([6]), ctx(2)));
        assert!(is_flat(&Weight::new([]), c));
        assert_eq!(pmag(&Weight::new([1, 1, 1]), c).unwrap().counts(), &[3]);
        assert_eq!(pmag(&Weight::new([3]), c).unwrap().counts(), &[0, 1]);
        assert_eq!(
            pmag(&Weight::new([4, 2, 1, 1]), ctx(2)).unwrap().counts(),
            &[2, 1, 1]
        );
        assert!(pmag(&Weight::new([6]), ctx(2)).is_err());
    }

    #[test]
    fn flat_order_examples() {
        let c = ctx(3);
        let ones = Weight::new([1, 1, 1]);
        let top = Weight::new([3]);
        assert!(flat_order_less(&ones, &top, c).unwrap());
        assert!(!flat_order_less(&top, &top, c).unwrap());
        let c2 = ctx(2);
        assert!(flat_order_less(&Weight::new([2, 1]), &Weight::new([4]), c2).unwrap());
    }

    #[test]
    fn restricted_examples() {
        let c = ctx(3);
        assert_eq!(
            p_restricted_decomposition(&Partition::new([3]), c),
            vec![Partition::empty(), Partition::new([1])]
        );
        assert_eq!(
            p_restricted_decomposition(&Partition::new([2, 1]), c),
            vec![Partition::new([2, 1])]
        );
        assert_eq!(
            p_restricted_decomposition(&Partition::new([6, 3]), c),
            vec![Partition::empty(), Partition::new([2, 1])]
        );
        assert_eq!(min_flat_pmag(&Partition::new([3]), c).counts(), &[0, 1]);
        assert_eq!(min_flat_pmag(&Partition::new([2, 1]), c).counts(), &[3]);
        assert!(min_flat_pmag(&Partition::empty(), c).counts().is_empty());
    }

    #[test]
    fn disjointness() {
        assert!(weights_disjoint(&Weight::new([1, 0, 2]), &Weight::new([0, 3, 0])));
        assert!(!weights_disjoint(&Weight::new([1]), &Weight::new([1])));
        assert!(weights_disjoint(&Weight::new([5, 5]), &Weight::new([])));
        assert!(Weight::from_signed(&[1, -1]).is_err());
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(orbit_size(&[1, 0, 0]), 3);
        assert_eq!(orbit_size(&[2, 1, 0]), 6);
        assert_eq!(orbit_size(&[1, 1, 1, 0, 0, 0, 0, 0, 0]), 84);
        assert_eq!(orbit_size(&[]), 1);
    }

    #[test]
    fn partitions_enumerated() {
        assert_eq!(Partition::all_of_size(5).len(), 7);
        assert_eq!(Partition::all_of_size(0), vec![Partition::empty()]);
    }
}
