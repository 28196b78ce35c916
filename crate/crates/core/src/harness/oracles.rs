//! Brute-force reference computations. Nothing here calls the membership
//! dynamic program, the radical formula or the Tor engines.

use crate::combinatorics::PrimeContext;
use crate::glideals::{GLIdeal, Radical};
use std::collections::HashSet;

/// Factor sizes p^m of a product ideal, largest first.
fn factor_sizes(digits: &[u32], ctx: PrimeContext) -> Vec<u64> {
    let mut out = Vec::new();
    for (m, &b) in digits.iter().enumerate().rev() {
        out.extend(std::iter::repeat(ctx.pow(m as u32)).take(b as usize));
    }
    out
}

/// Whether x^λ is divisible by a product of one p^m-th power of a variable per factor.
fn fits(room: &mut Vec<u64>, sizes: &[u64], seen: &mut HashSet<(usize, Vec<u64>)>) -> bool {
    let Some((&s, rest)) = sizes.split_first() else { return true };
    let mut key = room.clone();
    key.sort_unstable();
    if !seen.insert((sizes.len(), key)) {
        return false;
    }
    for i in 0..room.len() {
        if room[i] >= s && (i == 0 || room[i] != room[i - 1]) {
            room[i] -= s;
            let ok = fits(room, rest, seen);
            room[i] += s;
            if ok {
                return true;
            }
        }
    }
    false
}

/// x^λ ∈ I by exhaustive decomposition: some generator's factors can be
/// assigned to variables without exceeding the exponents.
pub fn member_brute(lambda: &[u32], ideal: &GLIdeal) -> bool {
    let ctx = ideal.ctx();
    ideal.generators().any(|b| {
        let sizes = factor_sizes(b.digits(), ctx);
        let mut room: Vec<u64> = lambda.iter().map(|&x| x as u64).collect();
        room.sort_unstable();
        fits(&mut room, &sizes, &mut HashSet::new())
    })
}

/// J ⊆ I by testing every minimal generator of J in enough variables.
pub fn contains_brute(i: &GLIdeal, j: &GLIdeal) -> bool {
    let ctx = j.ctx();
    j.generators().all(|b| {
        let lambda: Vec<u32> = factor_sizes(b.digits(), ctx).iter().map(|&x| x as u32).collect();
        member_brute(&lambda, i)
    })
}

/// GL-radical by power containment: the smallest s with (m^[p^s])^N ⊆ I for some N.
pub fn radical_brute(ideal: &GLIdeal) -> Radical {
    let ctx = ideal.ctx();
    if ideal.generators().next().is_none() {
        return Radical::Zero;
    }
    if member_brute(&[], ideal) {
        return Radical::Unit;
    }
    let n_bound = ideal.generators().map(|b| b.weight()).max().unwrap_or(1) as usize + 1;
    let s_bound = ideal.generators().map(|b| b.digits().len()).max().unwrap_or(1) as u32 + 1;
    for s in 0..=s_bound {
        let q = ctx.pow(s) as u32;
        if (1..=n_bound).any(|n| member_brute(&vec![q; n], ideal)) {
            return Radical::Frobenius(s);
        }
    }
    Radical::Zero
}

/// Every exponent vector of degree d in n variables, by plain enumeration.
pub fn all_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=d {
            cur.push(a);
            rec(n, d - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// dim (S/I){kⁿ}_d by counting monomials outside I.
pub fn hilbert_brute(ideal: &GLIdeal, n: usize, d: u32) -> u64 {
    all_monomials(n, d).iter().filter(|l| !member_brute(l, ideal)).count() as u64
}

/// Monomials of degree d in n variables lying in I, sorted.
pub fn ideal_piece_brute(ideal: &GLIdeal, n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = all_monomials(n, d).into_iter().filter(|l| member_brute(l, ideal)).collect();
    v.sort();
    v
}

/// dim Sh_i(W){kⁿ} by degree, W the span of the degree-`deg` monomials of I:
/// monomials of I in n+1 variables with last exponent i, graded by the rest.
pub fn slice_dims_brute(ideal: &GLIdeal, deg: u32, n: usize, i: u32) -> Vec<u64> {
    let mut out = vec![0u64; deg as usize + 1];
    if i > deg {
        return out;
    }
    for mut mono in all_monomials(n, deg - i) {
        mono.push(i);
        if member_brute(&mono, ideal) {
            out[(deg - i) as usize] += 1;
        }
    }
    out
}

/// dim (S/m^[q]){kⁿ}_d: monomials with every exponent below q.
pub fn truncated_dims_brute(n: usize, q: u32, d_max: u32) -> Vec<u64> {
    (0..=d_max).map(|d| all_monomials(n, d).iter().filter(|m| m.iter().all(|&x| x < q)).count() as u64).collect()
}

/// Degree-wise product of two Hilbert functions.
pub fn convolve(a: &[u64], b: &[u64], d_max: usize) -> Vec<u64> {
    (0..=d_max)
        .map(|d| (0..=d).map(|e| a.get(e).copied().unwrap_or(0) * b.get(d - e).copied().unwrap_or(0)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let c = PrimeContext::new(2).unwrap();
        let i = GLIdeal::parse("m * m[p^1]", c).unwrap();
        assert!(member_brute(&[2, 1], &i));
        assert!(!member_brute(&[1, 1, 1], &i));
        assert!(!member_brute(&[1], &i));
        assert_eq!(radical_brute(&i), Radical::Frobenius(1));
        assert_eq!(hilbert_brute(&GLIdeal::parse("m^2", c).unwrap(), 3, 1), 3);
    }
}
