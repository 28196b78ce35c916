//! Betti tables and the statistics read off them.

use crate::error::{domain, Result};
use crate::evaluation::Ring;
use num_rational::Ratio;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// β_{i,j} = dim Tor_i(M, k)_j at one truncation n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub ring: Ring,
    pub p: u32,
    pub n: usize,
    pub i_max: u32,
    pub j_max: u32,
    /// Nonzero entries only.
    pub entries: BTreeMap<(u32, u32), u64>,
    /// β_{i,λ} for dominant weights λ (trailing zeros trimmed), nonzero only.
    pub weights: BTreeMap<(u32, Vec<u32>), u64>,
}

#[derive(Serialize)]
struct JsonEntry {
    i: u32,
    j: u32,
    dim: u64,
    stable: bool,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    ring: String,
    p: u32,
    q: Option<u32>,
    n: usize,
    entries: &'a [JsonEntry],
}

impl BettiTable {
    pub fn new(ring: Ring, p: u32, n: usize, i_max: u32, j_max: u32) -> Self {
        Self { ring, p, n, i_max, j_max, entries: BTreeMap::new(), weights: BTreeMap::new() }
    }

    pub fn get(&self, i: u32, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Entries with j ≤ n do not change when more variables are added.
    pub fn is_stable(&self, j: u32) -> bool {
        j as usize <= self.n
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn add(&mut self, i: u32, j: u32, dim: u64) {
        if dim > 0 {
            *self.entries.entry((i, j)).or_insert(0) += dim;
        }
    }

    pub(crate) fn add_weight(&mut self, i: u32, w: &[u32], dim: u64) {
        if dim > 0 {
            let mut key = w.to_vec();
            while key.last() == Some(&0) {
                key.pop();
            }
            *self.weights.entry((i, key)).or_insert(0) += dim;
        }
    }

    /// Total dimension per homological degree.
    pub fn totals(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.i_max as usize + 1];
        for (&(i, _), &d) in &self.entries {
            t[i as usize] += d;
        }
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<JsonEntry> = self
            .entries
            .iter()
            .map(|(&(i, j), &dim)| JsonEntry { i, j, dim, stable: self.is_stable(j) })
            .collect();
        let t = JsonTable { ring: self.ring.to_string(), p: self.p, q: self.ring.q(), n: self.n, entries: &entries };
        serde_json::to_value(t).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,dim,stable\n");
        for (&(i, j), &d) in &self.entries {
            let _ = writeln!(s, "{i},{j},{d},{}", self.is_stable(j));
        }
        s
    }

    /// Row-coordinate rendering: row r holds β_{i, i+r}; stable entries carry a `*`.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ring {}  p={}  n={}", self.ring, self.p, self.n);
        if self.entries.is_empty() {
            s.push_str("(zero table)\n");
            return s;
        }
        let cols = self.i_max as usize + 1;
        let rows: Vec<i64> = {
            let lo = self.entries.keys().map(|&(i, j)| j as i64 - i as i64).min().unwrap();
            let hi = self.entries.keys().map(|&(i, j)| j as i64 - i as i64).max().unwrap();
            (lo..=hi).collect()
        };
        let cell = |i: usize, r: i64| -> String {
            let j = i as i64 + r;
            if j < 0 {
                return ".".into();
            }
            match self.entries.get(&(i as u32, j as u32)) {
                Some(d) if self.is_stable(j as u32) => format!("{d}*"),
                Some(d) => d.to_string(),
                None => ".".into(),
            }
        };
        let totals = self.totals();
        let mut width = 2usize;
        for i in 0..cols {
            width = width.max(totals[i].to_string().len() + 1);
            for &r in &rows {
                width = width.max(cell(i, r).len() + 1);
            }
        }
        let label_w = rows.iter().map(|r| format!("{r}:").len()).max().unwrap().max(6) + 1;
        let _ = write!(s, "{:label_w$}", "");
        for i in 0..cols {
            let _ = write!(s, "{i:>width$}");
        }
        s.push('\n');
        let _ = write!(s, "{:label_w$}", "total:");
        for t in &totals {
            let _ = write!(s, "{t:>width$}");
        }
        s.push('\n');
        for &r in &rows {
            let _ = write!(s, "{:label_w$}", format!("{r}:"));
            for i in 0..cols {
                let _ = write!(s, "{:>width$}", cell(i, r));
            }
            s.push('\n');
        }
        s
    }
}

/// t_i = largest j with β_{i,j} ≠ 0, or −1.
pub fn t_sequence(table: &BettiTable) -> Vec<i64> {
    let mut t = vec![-1i64; table.i_max as usize + 1];
    for &(i, j) in table.entries.keys() {
        t[i as usize] = t[i as usize].max(j as i64);
    }
    t
}

/// The slope max_{1 ≤ i ≤ i_max} (t_i − t₀)/i in (i, j) coordinates; 0 when
/// only β₀ is nonzero. Subtract 1 for the slope in row coordinates.
pub fn slope(table: &BettiTable) -> Result<Ratio<i64>> {
    if table.is_zero() {
        return domain("the slope of the zero table is undefined");
    }
    let t = t_sequence(table);
    let t0 = t[0];
    let best = (1..t.len())
        .filter(|&i| t[i] >= 0)
        .map(|i| Ratio::new(t[i] - t0, i as i64))
        .max();
    Ok(best.unwrap_or_else(|| Ratio::from_integer(0)))
}

/// A line r = s·i + c in row coordinates (r = j − i).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line {
    #[serde(serialize_with = "ratio_str")]
    pub slope: Ratio<i64>,
    #[serde(serialize_with = "ratio_str")]
    pub intercept: Ratio<i64>,
}

fn ratio_str<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Line {
    pub fn contains(&self, i: u32, j: u32) -> bool {
        let r = j as i64 - i as i64;
        self.slope * Ratio::from_integer(i as i64) + self.intercept == Ratio::from_integer(r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCover {
    pub lines: Vec<Line>,
    pub residual: Vec<(u32, u32)>,
}

/// Minimum number of lines covering the support, found by exact branch and bound.
pub fn detect_lines(table: &BettiTable) -> LineCover {
    let pts: Vec<(i64, i64)> = table.entries.keys().map(|&(i, j)| (i as i64, j as i64 - i as i64)).collect();
    let npts = pts.len();
    if npts == 0 {
        return LineCover { lines: Vec::new(), residual: Vec::new() };
    }
    let mut cand: BTreeSet<Line> = BTreeSet::new();
    for (a, &(ia, ra)) in pts.iter().enumerate() {
        cand.insert(Line { slope: Ratio::from_integer(0), intercept: Ratio::from_integer(ra) });
        for &(ib, rb) in &pts[a + 1..] {
            if ib == ia {
                continue;
            }
            let s = Ratio::new(rb - ra, ib - ia);
            if s < Ratio::from_integer(0) {
                continue;
            }
            cand.insert(Line { slope: s, intercept: Ratio::from_integer(ra) - s * Ratio::from_integer(ia) });
        }
    }
    let lines: Vec<(Line, Vec<bool>)> = cand
        .into_iter()
        .map(|l| {
            let cov: Vec<bool> = pts.iter().map(|&(i, r)| l.contains(i as u32, (i + r) as u32)).collect();
            (l, cov)
        })
        .collect();

    struct Search<'a> {
        lines: &'a [(Line, Vec<bool>)],
        best: Option<Vec<usize>>,
    }
    impl Search<'_> {
        fn run(&mut self, covered: &mut Vec<u32>, chosen: &mut Vec<usize>) {
            // Pick the uncovered point with the fewest candidate lines.
            let mut pick: Option<(usize, usize)> = None;
            for pt in 0..covered.len() {
                if covered[pt] > 0 {
                    continue;
                }
                let k = self.lines.iter().filter(|(_, c)| c[pt]).count();
                if pick.map_or(true, |(_, best)| k < best) {
                    pick = Some((pt, k));
                }
            }
            let Some((pt, _)) = pick else {
                if self.best.as_ref().map_or(true, |b| chosen.len() < b.len()) {
                    self.best = Some(chosen.clone());
                }
                return;
            };
            if let Some(b) = &self.best {
                if chosen.len() + 1 >= b.len() {
                    return;
                }
            }
            for (li, (_, cov)) in self.lines.iter().enumerate() {
                if !cov[pt] {
                    continue;
                }
                for (k, &c) in cov.iter().enumerate() {
                    covered[k] += c as u32;
                }
                chosen.push(li);
                self.run(covered, chosen);
                chosen.pop();
                for (k, &c) in cov.iter().enumerate() {
                    covered[k] -= c as u32;
                }
            }
        }
    }
    let mut search = Search { lines: &lines, best: None };
    search.run(&mut vec![0; npts], &mut Vec::new());
    let mut chosen: Vec<Line> = search.best.unwrap_or_default().into_iter().map(|k| lines[k].0.clone()).collect();
    chosen.sort();
    LineCover { lines: chosen, residual: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[(u32, u32, u64)], n: usize) -> BettiTable {
        let mut t = BettiTable::new(Ring::Poly, 2, n, entries.iter().map(|e| e.0).max().unwrap_or(0), 20);
        for &(i, j, d) in entries {
            t.add(i, j, d);
        }
        t
    }

    #[test]
    fn figure_right_support_needs_two_lines() {
        let mut e: Vec<(u32, u32, u64)> = (0..=5).map(|i| (i, i + 3, 1)).collect();
        e.push((2, 6, 1));
        e.push((3, 8, 1));
        let cover = detect_lines(&table(&e, 8));
        assert_eq!(cover.lines.len(), 2);
        assert_eq!(cover.lines[0].slope, Ratio::from_integer(0));
        assert_eq!(cover.lines[0].intercept, Ratio::from_integer(3));
        assert_eq!(cover.lines[1].slope, Ratio::from_integer(1));
    }

    #[test]
    fn koszul_line_slope() {
        let e: Vec<(u32, u32, u64)> = (0..=3).map(|i| (i, 3 * i, 1)).collect();
        let t = table(&e, 9);
        assert_eq!(slope(&t).unwrap(), Ratio::from_integer(3));
        let cover = detect_lines(&t);
        assert_eq!(cover.lines, vec![Line { slope: Ratio::from_integer(2), intercept: Ratio::from_integer(0) }]);
    }

    #[test]
    fn free_slope_is_zero() {
        let t = table(&[(0, 0, 1), (0, 2, 3)], 3);
        assert_eq!(slope(&t).unwrap(), Ratio::from_integer(0));
        assert_eq!(t_sequence(&t), vec![2]);
        assert_eq!(detect_lines(&t).lines.len(), 2);
    }

    #[test]
    fn renderings_agree() {
        let t = table(&[(0, 0, 1), (1, 2, 3), (2, 4, 3), (3, 6, 1)], 4);
        let json = t.to_json();
        assert_eq!(json["entries"].as_array().unwrap().len(), 4);
        assert_eq!(json["q"], serde_json::Value::Null);
        assert!(t.to_csv().contains("3,6,1,false"));
        let text = t.render_text();
        assert!(text.contains("3*"));
        assert!(text.contains("total:"));
    }
}
