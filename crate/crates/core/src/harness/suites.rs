//! The registered suites. Each builder returns the checks of one suite.

use super::corpus::{self, ctx};
use super::goldens::{self, lookup, radical_label, shift_id, s_shift_id};
use super::oracles;
use super::{expect, expect_eq, Check};
use crate::combinatorics::Partition;
use crate::dist::{
    apply_e, composition_check, divided_leibniz_check, frobenius_commutation_check, gln_submodule_closure,
    verify_gl_stability, PolyFp,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    degree_dims, module_generation_degrees, torsion_submodule, Family, Module, ModuleFamily, Ring,
    RingView,
};
use crate::glideals::{
    compositions, gl_radical, ideal_contains, ideal_member, is_gl_prime, non_primality_witness, orbit_ideal,
    DigitVector, GLIdeal,
};
use crate::homology::{
    betti_table, ci_slope_audit, detect_lines, euler_check_frobenius, euler_check_poly, koszul_tor,
    minimal_resolution, BettiTable, CiVerdict,
};
use crate::schur::{
    delta, delta_degree_check, double_shift_check, frobenius_twist_span, hasse_schur, leibniz_check, natural_map,
    shift_commute_check, shift_exactness_check, six_term_check, sm_shift,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::sync::Arc;

pub const NAMES: &[&str] = &[
    "empty",
    "spectrum",
    "membership",
    "radical",
    "doty",
    "betti-figure",
    "lines",
    "leibniz",
    "shift",
    "shift-theorem",
    "s-shift",
    "dist",
    "oracles",
    "ci",
    "goldens",
];

pub fn build(name: &str, seed: u64) -> Result<Vec<Check>> {
    Ok(match name {
        "empty" => Vec::new(),
        "spectrum" => spectrum(),
        "membership" => membership(),
        "radical" => radical(),
        "doty" => doty(),
        "betti-figure" => betti_figure(),
        "lines" => lines(),
        "leibniz" => leibniz(),
        "shift" => shift(),
        "shift-theorem" => shift_theorem(),
        "s-shift" => s_shift(),
        "dist" => dist(seed),
        "oracles" => oracle_equivalences(seed),
        "ci" => ci(),
        "goldens" => vec![Check::new("regenerate", || goldens::regenerate_goldens().map(|_| ()))],
        _ => {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("unknown suite '{name}'; known suites: {}", NAMES.join(", ")),
            })
        }
    })
}

fn ideal(p: u32, e: &str) -> Result<GLIdeal> {
    GLIdeal::parse(e, ctx(p))
}

// ---------------------------------------------------------------- spectrum

fn spectrum() -> Vec<Check> {
    let mut out = vec![Check::new("primes", || {
        let expected = lookup("spectrum", "primes")?.expected;
        for p in [2, 3, 5] {
            let c = ctx(p);
            let mut verdicts = vec![is_gl_prime(&GLIdeal::zero(c))];
            verdicts.extend((0..=5).map(|r| is_gl_prime(&GLIdeal::frobenius_power(r, c))));
            expect_eq(&format!("prime verdicts at p = {p}"), &expected, &json!(verdicts.iter().all(|&v| v)))?;
        }
        Ok(())
    })];
    for (id, i) in corpus::nonprime_ideals() {
        out.push(Check::new(format!("nonprime/{id}"), move || {
            expect("every generator has digit weight ≥ 2", i.generators().all(|b| b.weight() >= 2))?;
            expect("not GL-prime", !is_gl_prime(&i))?;
            let w = non_primality_witness(&i)?.ok_or_else(|| Error::Invariant("no witness found".into()))?;
            expect("f ∉ I (brute force)", !oracles::member_brute(w.f.parts(), &i))?;
            expect("g ∉ I (brute force)", !oracles::member_brute(w.g.parts(), &i))?;
            expect("f ⊔ g ∈ I (brute force)", oracles::member_brute(&w.disjoint_product(), &i))
        }));
    }
    out
}

// ---------------------------------------------------------------- membership and radicals

fn membership() -> Vec<Check> {
    let mut out: Vec<Check> = goldens::MEMBERSHIP_IDEALS
        .iter()
        .map(|&(p, e)| {
            Check::new(format!("table/p{p}:{e}"), move || {
                let i = ideal(p, e)?;
                let expected = lookup("membership", &format!("p{p}:{e}"))?.expected;
                let got = json!(goldens::membership_table(&i, ideal_member));
                expect_eq("members of size ≤ 10", &expected, &got)
            })
        })
        .collect();
    out.push(Check::new("containment", || {
        for p in [2, 3] {
            let ideals: Vec<GLIdeal> = corpus::NONPRIME_EXPRS.iter().map(|e| ideal(p, e)).collect::<Result<_>>()?;
            for a in &ideals {
                for b in &ideals {
                    expect_eq(
                        &format!("{a} ⊇ {b}"),
                        &oracles::contains_brute(a, b),
                        &ideal_contains(a, b),
                    )?;
                }
            }
        }
        Ok(())
    }));
    out
}

fn radical() -> Vec<Check> {
    let mut out: Vec<Check> = corpus::nonprime_ideals()
        .into_iter()
        .map(|(id, i)| {
            Check::new(format!("corpus/{id}"), move || {
                let expected = lookup("radical", &id)?.expected;
                expect_eq("GL-radical", &expected, &json!(radical_label(gl_radical(&i))))
            })
        })
        .collect();
    out.push(Check::new("frobenius-powers", || {
        for p in [2, 3, 5] {
            for r in 0..=4 {
                let i = GLIdeal::frobenius_power(r, ctx(p));
                expect_eq("radical of a prime", &radical_label(oracles::radical_brute(&i)), &radical_label(gl_radical(&i)))?;
                let sq = i.power(3);
                expect_eq("radical of a power", &radical_label(gl_radical(&i)), &radical_label(gl_radical(&sq)))?;
            }
        }
        Ok(())
    }));
    out
}

// ---------------------------------------------------------------- degree-10 ideals

fn degree_ten_piece(i: &GLIdeal) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = compositions(10, 10, 10).into_iter().filter(|w| ideal_member(w, i)).collect();
    v.sort();
    v
}

fn doty() -> Vec<Check> {
    let mut out = vec![Check::new("distinct", || {
        let expected = lookup("doty", "list")?.expected;
        expect_eq("listed ideals", &expected, &json!(corpus::DEGREE_TEN_EXPRS))?;
        let ideals: Vec<GLIdeal> = corpus::DEGREE_TEN_EXPRS.iter().map(|e| ideal(2, e)).collect::<Result<_>>()?;
        let pieces: Vec<Vec<Vec<u32>>> = ideals.iter().map(degree_ten_piece).collect();
        for a in 0..ideals.len() {
            expect("generated in degree 10", ideals[a].degree_range() == Some((10, 10)))?;
            for b in a + 1..ideals.len() {
                expect(&format!("ideals {a} and {b} differ"), ideals[a] != ideals[b])?;
                expect(&format!("degree-10 pieces {a} and {b} differ"), pieces[a] != pieces[b])?;
            }
        }
        Ok(())
    })];
    for e in corpus::DEGREE_TEN_EXPRS {
        out.push(Check::new(format!("piece/{e}"), move || {
            let i = ideal(2, e)?;
            let piece = degree_ten_piece(&i);
            let expected = lookup("doty", &format!("dim:{e}"))?.expected;
            expect_eq("dimension at n = 10", &expected, &json!(piece.len()))?;
            expect_eq("monomials at n = 10", &oracles::ideal_piece_brute(&i, 10, 10), &piece)?;
            expect("GL_10-stable", verify_gl_stability(&piece, 10, 10, ctx(2)))
        }));
    }
    out
}

// ---------------------------------------------------------------- Betti tables

fn support(t: &BettiTable) -> Vec<(u32, u32)> {
    t.entries.keys().copied().collect()
}

fn betti_figure() -> Vec<Check> {
    vec![
        Check::new("left", || {
            let fam = corpus::family(3, Ring::Poly, "S/m[p^1]")?;
            let m = fam.eval(9);
            let t = koszul_tor(m.as_ref(), 9, Some(9))?;
            euler_check_poly(m.as_ref(), &t)?;
            let got: Vec<Value> = t.entries.iter().map(|(&(i, j), &b)| json!([i, j, b])).collect();
            expect_eq("nonzero entries", &lookup("betti-figure", "left")?.expected, &Value::Array(got))
        }),
        Check::new("right", || {
            let fam = corpus::family(2, Ring::Poly, "ideal:m[p^1]*m")?;
            let m = fam.eval(8);
            let t = koszul_tor(m.as_ref(), 8, Some(8))?;
            euler_check_poly(m.as_ref(), &t)?;
            let got: Vec<Value> = support(&t).iter().map(|&(i, j)| json!([i, j])).collect();
            expect_eq("support", &lookup("betti-figure", "right")?.expected, &Value::Array(got))?;
            let cover = detect_lines(&t);
            let slopes: BTreeSet<Ratio<i64>> = cover.lines.iter().map(|l| l.slope).collect();
            expect_eq("line count", &2, &cover.lines.len())?;
            expect_eq("slopes", &BTreeSet::from([Ratio::from_integer(0), Ratio::from_integer(1)]), &slopes)?;
            expect("empty residual", cover.residual.is_empty())
        }),
    ]
}

pub const LINES_N: usize = 10;
pub const LINES_I_MAX: u32 = 8;
pub const LINES_MAX_LINES: usize = 4;

fn lines() -> Vec<Check> {
    corpus::LINE_CORPUS
        .iter()
        .map(|&(p, d)| {
            Check::new(format!("p{p}:{d}"), move || {
                let fam = corpus::family(p, Ring::Poly, d)?;
                let t = koszul_tor(fam.eval(LINES_N).as_ref(), LINES_I_MAX, Some(LINES_N as u32))?;
                let cover = detect_lines(&t);
                expect_eq("residual", &Vec::<(u32, u32)>::new(), &cover.residual)?;
                expect(&format!("{} lines ≤ {LINES_MAX_LINES}", cover.lines.len()), cover.lines.len() <= LINES_MAX_LINES)
            })
        })
        .collect()
}

// ---------------------------------------------------------------- Hasse-Schur derivatives

fn dims(f: &Family, n: usize, d: u32) -> Vec<u64> {
    degree_dims(f.eval(n).as_ref(), d)
}

/// Pairs of families for the Leibniz identity: (p, ring, F, G, m).
const LEIBNIZ_PAIRS: [(u32, Option<u32>, &str, &str, u32); 12] = [
    (2, None, "frob:1", "free:1", 2),
    (2, None, "frob:1", "free:1", 1),
    (2, None, "S/m^2", "S/m[p^1]", 2),
    (2, None, "ideal:m^2/m^3", "free:1", 1),
    (2, None, "free:2", "free:1", 2),
    (2, None, "S/m*m[p^1]", "k", 3),
    (3, None, "frob:1", "free:2", 3),
    (3, None, "S/m[p^1]", "S/m^2", 2),
    (3, None, "ideal:m[p^1]/m*m[p^1]", "free:1", 3),
    (2, Some(2), "S", "S", 1),
    (2, Some(4), "k", "S", 3),
    (3, Some(3), "ideal:m", "S", 2),
];

fn ring_of(q: Option<u32>) -> Ring {
    q.map_or(Ring::Poly, |q| Ring::Frob { q })
}

fn leibniz() -> Vec<Check> {
    let mut out = vec![Check::new("sh0-identity", || {
        for (p, q, d) in [(2, None, "S/m*m[p^1]"), (3, None, "ideal:m^2"), (2, Some(4), "S/m^2"), (3, Some(3), "free:1")] {
            let f = corpus::family(p, ring_of(q), d)?;
            for n in 1..=5 {
                expect_eq(&format!("Sh_0 of {d} at n = {n}"), &dims(&f, n, 6), &dims(&hasse_schur(&f, 0), n, 6))?;
            }
        }
        Ok(())
    })];
    for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
        out.push(Check::new(format!("twist-vanishing/p{p}-r{r}"), move || {
            let c = ctx(p);
            let v = frobenius_twist_span(r, c);
            let top = c.pow(r) as u32;
            for m in 1..top {
                expect(&format!("Sh_{m}(V^({r})) = 0"), dims(&hasse_schur(&v, m), 3, top).iter().all(|&x| x == 0))?;
            }
            expect("Sh_{p^r}(V^(r)) ≠ 0", dims(&hasse_schur(&v, top), 3, 0)[0] > 0)
        }));
    }
    for (k, &(p, q, a, b, m)) in LEIBNIZ_PAIRS.iter().enumerate() {
        out.push(Check::new(format!("leibniz/{k:02}:p{p}:{a}*{b}:m{m}"), move || {
            let f = corpus::family(p, ring_of(q), a)?;
            let g = corpus::family(p, ring_of(q), b)?;
            leibniz_check(&f, &g, m, 3, 6).map(|_| ())
        }));
    }
    for (p, q, r) in [(2, 2, 1), (2, 2, 2), (2, 4, 2), (2, 4, 3), (3, 3, 1), (3, 3, 2)] {
        out.push(Check::new(format!("delta-twist/p{p}-q{q}-r{r}"), move || {
            let f = corpus::family(p, Ring::Frob { q }, &format!("frob:{r}"))?;
            let d = delta(&f, q)?;
            for n in 1..=4 {
                let top = n as u32 * (q - 1) + ctx(p).pow(r) as u32;
                expect(&format!("Δ(Sm ⊗ V^({r})) = 0 at n = {n}"), dims(&d, n, top).iter().all(|&x| x == 0))?;
            }
            Ok(())
        }));
    }
    for (p, q, deg) in [(2, 2, 1), (2, 2, 3), (2, 4, 2), (2, 4, 3), (3, 3, 2), (3, 9, 4)] {
        out.push(Check::new(format!("induced/p{p}-q{q}-sym{deg}"), move || induced_formula(p, q, deg)));
    }
    out
}

/// Δ(Sm ⊗ Sym^d) = ⊕_{i=1}^{q/p} Sm ⊗ Sh_i(Sym^d) and Sh(Sm ⊗ Sym^d) = ⊕_{i=0}^{q/p},
/// with Sh_i(Sym^d){kⁿ} = Sym^{d−i}(kⁿ) in degree d − i.
fn induced_formula(p: u32, q: u32, deg: u32) -> Result<()> {
    let f = corpus::family(p, Ring::Frob { q }, &format!("free:{deg}"))?;
    let e = q / p;
    for n in 1..=3usize {
        let top = n as u32 * (q - 1) + deg;
        let ring = oracles::truncated_dims_brute(n, q, top);
        let slice = |i: u32| {
            let mut v = vec![0u64; top as usize + 1];
            if i <= deg {
                v[(deg - i) as usize] = oracles::all_monomials(n, deg - i).len() as u64;
            }
            oracles::convolve(&ring, &v, top as usize)
        };
        let sum = |from: u32| {
            (from..=e).map(slice).fold(vec![0u64; top as usize + 1], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
        };
        expect_eq(&format!("Δ dims at n = {n}"), &sum(1), &dims(&delta(&f, q)?, n, top))?;
        expect_eq(&format!("Sh dims at n = {n}"), &sum(0), &dims(&sm_shift(&f, q)?, n, top))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- shift functor structure

const STRUCTURE_CORPUS: [(u32, u32, &str); 8] = [
    (2, 2, "k"),
    (2, 2, "ideal:m"),
    (2, 2, "sum(k, free:1)"),
    (2, 4, "S/m[p^1]"),
    (2, 4, "ideal:m^2"),
    (2, 4, "ideal:m/m^3"),
    (3, 3, "ideal:m"),
    (3, 3, "S/m^2"),
];

fn is_zero_module(m: &Module) -> bool {
    let top = m.degree_bound().unwrap_or(0);
    degree_dims(m.as_ref(), top).iter().all(|&x| x == 0)
}

fn shift() -> Vec<Check> {
    let mut out = Vec::new();
    for (p, q, d) in STRUCTURE_CORPUS {
        out.push(Check::new(format!("structure/p{p}-q{q}:{d}"), move || {
            let f = corpus::family(p, Ring::Frob { q }, d)?;
            for n in 1..=3 {
                // natural_map checks ker(i_M) ⊆ Γ(M) itself.
                let nm = natural_map(&f, q, n)?;
                let torsion_free = is_zero_module(&torsion_submodule(&f, n, q)?);
                expect_eq(&format!("injective ⇔ torsion-free at n = {n}"), &torsion_free, &nm.is_injective())?;
                delta_degree_check(&f, q, n)?;
                shift_commute_check(&f, q, n)?;
                double_shift_check(&f, q, n)?;
            }
            Ok(())
        }));
    }
    match corpus::short_exact_corpus() {
        Ok(seqs) => {
            for (q, seq) in seqs {
                let seq = Arc::new(seq);
                out.push(Check::new(format!("six-term/{}", seq.name), move || {
                    for n in 1..=3 {
                        let r = six_term_check(&seq, q, n)?;
                        if r.quotient_torsion_free {
                            expect("Δ sequence exact for torsion-free N", r.three_term_exact == Some(true))?;
                        }
                        shift_exactness_check(&seq, q / seq.f.source().ctx().p(), n, 6)?;
                    }
                    Ok(())
                }));
            }
        }
        Err(e) => out.push(Check::new("six-term/corpus", move || Err(e.clone()))),
    }
    out
}

fn shift_theorem() -> Vec<Check> {
    corpus::SHIFT_CORPUS
        .iter()
        .copied()
        .chain(goldens::IMMEDIATE_SHIFT)
        .map(|(p, q, d)| {
            let id = shift_id(p, q, d);
            Check::new(id.clone(), move || {
                let expected = lookup("shift-theorem", &id)?.expected;
                let got = goldens::shift_step(p, q, d)?;
                expect(&format!("flat within l ≤ {}", goldens::SHIFT_L_MAX), got.is_some())?;
                expect_eq("minimal flat step", &expected, &json!(got))
            })
        })
        .collect()
}

fn s_shift() -> Vec<Check> {
    corpus::S_SHIFT_CORPUS
        .iter()
        .copied()
        .chain([(2, "S")])
        .map(|(p, d)| {
            let id = s_shift_id(p, d);
            Check::new(id.clone(), move || {
                let expected = lookup("s-shift", &id)?.expected;
                expect_eq("minimal flat m", &expected, &json!(goldens::s_shift_step(p, d)?))
            })
        })
        .collect()
}

// ---------------------------------------------------------------- divided powers

pub const CLOSURE_MAX_DEGREE: u32 = 12;
pub const CLOSURE_MAX_VARS: usize = 6;

fn dist(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (p, q) in [(2, 2), (2, 4), (2, 8), (3, 3), (3, 9)] {
        out.push(Check::new(format!("vanishing/q{q}"), move || {
            let c = ctx(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q as u64);
            let mut xs = vec![PolyFp::monomial(vec![0, 1, 0], 1, c)];
            for d in 1..=2 {
                xs.push(PolyFp::random_homogeneous(3, d, 3, c, &mut rng));
            }
            for x in xs {
                let xq = x.pow(q);
                for l in (1..=27).filter(|l| l % q != 0) {
                    for (i, j) in [(0, 1), (1, 0), (2, 1), (0, 2)] {
                        expect(&format!("e_({i},{j})^({l})(({x})^{q}) = 0"), apply_e(i, j, l, &xq).is_zero())?;
                    }
                }
            }
            Ok(())
        }));
    }
    out.push(Check::new("identities", move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for case in 0..200 {
            let p = [2, 3, 5][case % 3];
            let c = ctx(p);
            let f = PolyFp::random_homogeneous(3, rng.gen_range(1..=5), 4, c, &mut rng);
            let g = PolyFp::random_homogeneous(3, rng.gen_range(0..=4), 3, c, &mut rng);
            let (i, j) = [(0, 1), (1, 2), (2, 0), (1, 0)][rng.gen_range(0..4)];
            let (l, s) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            divided_leibniz_check(i, j, l, &f, &g)?;
            composition_check(i, j, l, s, &f)?;
            frobenius_commutation_check(i, j, rng.gen_range(1..=2 * p), &f)?;
        }
        Ok(())
    }));
    for p in [2, 3] {
        for d in 0..=CLOSURE_MAX_DEGREE {
            out.push(Check::new(format!("closure/p{p}-deg{d:02}"), move || closure_matches_ideal(p, d)));
        }
    }
    out
}

/// The GL_n-module generated by x^λ is the degree-|λ| piece of the GL-ideal
/// generated by x^λ, for every λ ⊢ d with at most six parts, n = ℓ(λ).
fn closure_matches_ideal(p: u32, d: u32) -> Result<()> {
    let c = ctx(p);
    for lambda in Partition::all_of_size(d) {
        if lambda.len() > CLOSURE_MAX_VARS {
            continue;
        }
        let n = lambda.len().max(1);
        let mut exp = lambda.parts().to_vec();
        exp.resize(n, 0);
        let i = GLIdeal::product_ideal(orbit_ideal(&exp, c), c);
        let piece: Vec<Vec<u32>> = compositions(d, n, d).into_iter().filter(|w| ideal_member(w, &i)).collect();
        let space = gln_submodule_closure(&[PolyFp::monomial(exp.clone(), 1, c)], d, n, 20_000)?;
        expect_eq(&format!("dimension for λ = {exp:?}"), &piece.len(), &space.dim())?;
        for w in &piece {
            expect(&format!("x^{w:?} in the closure of x^{exp:?}"), space.contains(&PolyFp::monomial(w.clone(), 1, c)))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- oracle equivalences

fn random_ideal(rng: &mut ChaCha8Rng, p: u32) -> GLIdeal {
    let c = ctx(p);
    let count = rng.gen_range(1..=3);
    let gens: Vec<DigitVector> = (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            let mut b: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=2)).collect();
            if b.iter().all(|&x| x == 0) {
                b[0] = 1;
            }
            while DigitVector::new(b.clone()).degree(c) > 12 {
                let k = b.iter().rposition(|&x| x > 0).unwrap();
                b[k] -= 1;
                if b.iter().all(|&x| x == 0) {
                    b[0] = 1;
                }
            }
            DigitVector::new(b)
        })
        .collect();
    GLIdeal::from_digit_vectors(gens, c)
}

/// Frobenius-ring modules for the Koszul/resolution comparison: (p, q, descriptor, n).
const OVERLAP_CORPUS: [(u32, u32, &str, usize); 6] = [
    (2, 2, "k", 3),
    (2, 2, "S", 3),
    (2, 4, "ideal:m", 2),
    (2, 4, "S/m[p^1]", 3),
    (3, 3, "k", 2),
    (3, 3, "ideal:m^2", 2),
];

/// Range where Tor over S and over S/m^[q] agree for a module generated from
/// degree d0: all of Tor₀, Tor₁ below d0 + q, and Tor_i (i ≥ 2) below d0 + i + q − 2.
pub fn overlap_range(i: u32, j: u32, d0: u32, q: u32) -> bool {
    match i {
        0 => true,
        1 => j < d0 + q,
        _ => j + 2 < d0 + i + q,
    }
}

fn oracle_equivalences(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for k in 0..12u64 {
        out.push(Check::new(format!("membership-random/{k:02}"), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003) ^ k);
            let p = [2, 3][k as usize % 2];
            let i = random_ideal(&mut rng, p);
            let j = random_ideal(&mut rng, p);
            expect_eq(
                &format!("members of {i}"),
                &goldens::membership_table(&i, oracles::member_brute),
                &goldens::membership_table(&i, ideal_member),
            )?;
            expect_eq(&format!("radical of {i}"), &radical_label(oracles::radical_brute(&i)), &radical_label(gl_radical(&i)))?;
            expect_eq(&format!("{i} ⊇ {j}"), &oracles::contains_brute(&i, &j), &ideal_contains(&i, &j))?;
            let s = i.sum(&j);
            let prod = i.product(&j);
            for d in 0..=8 {
                expect_eq(
                    &format!("Hilbert function of S/({s}) in degree {d}"),
                    &oracles::hilbert_brute(&s, 3, d),
                    &crate::glideals::hilbert_function(&s, 3, d)?,
                )?;
                expect_eq(
                    &format!("Hilbert function of S/({prod}) in degree {d}"),
                    &oracles::hilbert_brute(&prod, 3, d),
                    &crate::glideals::hilbert_function(&prod, 3, d)?,
                )?;
            }
            Ok(())
        }));
    }
    for (p, q, d, n) in OVERLAP_CORPUS {
        out.push(Check::new(format!("koszul-vs-resolution/p{p}-q{q}:{d}"), move || {
            let f = corpus::family(p, Ring::Frob { q }, d)?;
            let m = f.eval(n);
            let j_max = n as u32 * (q - 1) + 2;
            let (_, res) = minimal_resolution(m.as_ref(), n as u32 + 1, Some(j_max))?;
            euler_check_frobenius(m.as_ref(), &res)?;
            let as_s: Module = Arc::new(RingView::new(m.clone(), Ring::Poly));
            let kos = koszul_tor(as_s.as_ref(), n as u32, Some(j_max))?;
            euler_check_poly(as_s.as_ref(), &kos)?;
            let d0 = module_generation_degrees(m.as_ref(), j_max).keys().next().copied().unwrap_or(0);
            let mut compared = 0;
            for i in 0..=n as u32 {
                for j in 0..=j_max {
                    if overlap_range(i, j, d0, q) {
                        expect_eq(&format!("β_{{{i},{j}}}"), &kos.get(i, j), &res.get(i, j))?;
                        compared += 1;
                    }
                }
            }
            expect("some entries compared", compared > 0)
        }));
    }
    for (p, d) in [(2, "S/m^2"), (2, "ideal:m[p^1]"), (3, "S/m*m[p^1]"), (2, "sum(k, free:1)")] {
        out.push(Check::new(format!("euler-poly/p{p}:{d}"), move || {
            let f = corpus::family(p, Ring::Poly, d)?;
            for n in 1..=4 {
                let m = f.eval(n);
                let t = koszul_tor(m.as_ref(), n as u32, Some(8))?;
                euler_check_poly(m.as_ref(), &t)?;
            }
            Ok(())
        }));
    }
    out
}

// ---------------------------------------------------------------- complete-intersection audit

pub const CI_I_MAX: u32 = 6;

fn ci() -> Vec<Check> {
    let mut out: Vec<Check> = corpus::CI_CORPUS
        .iter()
        .map(|&(p, q, d, n)| {
            Check::new(format!("audit/p{p}-q{q}:{d}@n{n}"), move || {
                let m = corpus::family(p, Ring::Frob { q }, d)?.eval(n);
                let a = ci_slope_audit(m.as_ref(), CI_I_MAX)?;
                if a.b_estimate < Ratio::new(q as i64, 2) {
                    expect("linear growth below q/2 forces freeness", a.free)?;
                }
                expect("not inconclusive", !matches!(a.verdict, CiVerdict::Inconclusive(_)))
            })
        })
        .collect();
    for (p, q) in [(2, 2), (2, 4), (3, 3), (3, 9), (5, 5)] {
        out.push(Check::new(format!("residue-field/q{q}"), move || {
            let m = corpus::family(p, Ring::Frob { q }, "k")?.eval(1);
            let t = betti_table(m.as_ref(), 16, None)?;
            let ts = crate::homology::t_sequence(&t);
            let evens: Vec<i64> = (1..=8).map(|i| ts[2 * i] - q as i64 * i as i64).collect();
            expect_eq("t_{2i} − qi for i ≤ 8", &vec![0i64; 8], &evens)
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        for name in NAMES {
            assert!(build(name, 0).is_ok(), "{name}");
        }
        assert!(matches!(build("nosuchsuite", 0), Err(Error::Parse { .. })));
    }
}
