//! Tor over the polynomial ring via the Koszul complex, one weight at a time.
//!
//! At weight w the complex M ⊗ Λ•V has i-th term ⊕_{S ⊆ supp w, |S| = i} M_{w − e_S};
//! the differential sends the S-component through x_k into the S∖{k}-component
//! with sign (−1)^{#{l ∈ S : l < k}}.

use super::table::BettiTable;
use crate::combinatorics::{orbit_size, Partition};
use crate::error::{Error, Result};
use crate::evaluation::{GradedModule, Ring};
use crate::glideals::compositions;
use crate::limits;
use crate::linalg::Mat;
use rayon::prelude::*;

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < k - cur.len() {
                break;
            }
            cur.push(items[idx]);
            rec(items, k, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

fn minus_set(w: &[u32], s: &[usize]) -> Vec<u32> {
    let mut v = w.to_vec();
    for &k in s {
        v[k] -= 1;
    }
    v
}

/// dim Tor_i(M, k)_w for i = 0..=i_max.
pub fn koszul_at_weight(m: &dyn GradedModule, w: &[u32], i_max: u32) -> Result<Vec<u64>> {
    let p = m.ctx().p();
    let supp: Vec<usize> = (0..w.len()).filter(|&k| w[k] > 0).collect();
    let top = (i_max as usize + 1).min(supp.len());
    // terms[i] = list of (S, dim M_{w−e_S}, offset)
    let mut terms: Vec<Vec<(Vec<usize>, usize, usize)>> = Vec::with_capacity(top + 1);
    let mut sizes = Vec::with_capacity(top + 1);
    for i in 0..=top {
        let mut off = 0;
        let mut list = Vec::new();
        for s in subsets_of_size(&supp, i) {
            let d = m.dim(&minus_set(w, &s));
            if d > 0 {
                list.push((s, d, off));
                off += d;
            }
        }
        terms.push(list);
        sizes.push(off);
    }
    // ranks[i] = rank of d_i : C_i → C_{i−1}, for 1 ≤ i ≤ top.
    let mut ranks = vec![0usize; top + 2];
    for i in 1..=top {
        if sizes[i] == 0 || sizes[i - 1] == 0 {
            continue;
        }
        limits::check_cells(sizes[i - 1], sizes[i])?;
        let mut d = Mat::zeros(sizes[i - 1], sizes[i], p);
        for (s, dim, col_off) in &terms[i] {
            let src = minus_set(w, s);
            for (pos, &k) in s.iter().enumerate() {
                let t: Vec<usize> = s.iter().copied().filter(|&l| l != k).collect();
                let Ok(ti) = terms[i - 1].binary_search_by(|(x, _, _)| x.cmp(&t)) else {
                    continue;
                };
                let (_, tdim, row_off) = &terms[i - 1][ti];
                let a = m.act(k, &src);
                debug_assert_eq!((a.rows(), a.cols()), (*tdim, *dim));
                let neg = pos % 2 == 1;
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        let v = a.get(r, c);
                        if v != 0 {
                            d.set(row_off + r, col_off + c, if neg { p - v } else { v });
                        }
                    }
                }
            }
        }
        ranks[i] = d.rank();
    }
    Ok((0..=i_max as usize)
        .map(|i| if i > top { 0 } else { (sizes[i] - ranks[i] - ranks[i + 1]) as u64 })
        .collect())
}

/// Betti table of a module over k[x₁..xₙ], for i ≤ i_max and j ≤ j_max.
///
/// Without `j_max` the module must have bounded degrees; Tor then vanishes
/// above degree_bound + n. Asking for degrees the module does not represent
/// faithfully is a cutoff overflow.
pub fn koszul_tor(m: &dyn GradedModule, i_max: u32, j_max: Option<u32>) -> Result<BettiTable> {
    if m.ring() != Ring::Poly {
        return Err(Error::Domain(format!("Koszul Tor needs the polynomial ring, got {}", m.ring())));
    }
    let n = m.n();
    let j_max = match (j_max, m.degree_bound()) {
        (Some(j), _) => j,
        (None, Some(b)) => b + n as u32,
        (None, None) => return Err(Error::Domain("unbounded module needs an explicit j_max".into())),
    };
    if let Some(v) = m.valid_through() {
        if j_max > v {
            return Err(Error::CutoffOverflow(format!("j_max = {j_max} exceeds the faithful range ≤ {v}")));
        }
    }
    let cap = m.coord_bound().map(|c| c + 1);
    let symmetric = m.symmetric();
    let mut weights: Vec<Vec<u32>> = Vec::new();
    for j in 0..=j_max {
        let c = cap.map_or(j, |c| c.min(j));
        if symmetric {
            for l in Partition::all_of_size(j) {
                if l.len() <= n && l.parts().first().map_or(true, |&x| x <= c) {
                    let mut w = l.parts().to_vec();
                    w.resize(n, 0);
                    weights.push(w);
                }
            }
        } else {
            weights.extend(compositions(j, n, c));
        }
    }
    let results: Vec<Result<Vec<u64>>> = weights.par_iter().map(|w| koszul_at_weight(m, w, i_max)).collect();
    let mut table = BettiTable::new(Ring::Poly, m.ctx().p(), n, i_max, j_max);
    for (w, res) in weights.iter().zip(results) {
        let betti = res?;
        let mult = if symmetric { orbit_size(w) as u64 } else { 1 };
        let j: u32 = w.iter().sum();
        for (i, &b) in betti.iter().enumerate() {
            table.add(i as u32, j, b * mult);
            if w.windows(2).all(|x| x[0] >= x[1]) {
                table.add_weight(i as u32, w, b);
            }
        }
    }
    Ok(table)
}
