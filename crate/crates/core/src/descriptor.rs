//! Module descriptors: short strings naming a family.
//!
//! ```text
//! desc := 'S' | 'k' | 'S/' ideal | 'ideal:' ideal ('/' ideal)?
//!       | 'free:' int | 'frob:' int
//!       | 'sum(' desc (',' desc)* ')'
//!       | 'delta(' q ',' desc ')' | 'shift(' q ',' desc ')' | 'kq(' q ',' desc ')'
//!       | 'tors(' q ',' desc ')' | 'sh(' m ',' desc ')'
//! ```
//!
//! The coefficient ring is S unless a q is supplied; `delta`, `shift`, `kq`
//! and `tors` build their argument over S/m^[q] with their own q.
//! `free:d` is A ⊗ Sym^d, `frob:r` is A ⊗ V^(r).

use crate::combinatorics::PrimeContext;
use crate::error::{Error, Result};
use crate::evaluation::{
    free_family, ideal_family, quotient_family, residue_field, Family, FreeGen, Ring, SumFamily, TorsionFamily,
};
use crate::glideals::GLIdeal;
use crate::schur::{delta, hasse_schur, kq, sm_shift};

pub fn parse_descriptor(src: &str, ctx: PrimeContext, ring: Ring) -> Result<Family> {
    parse_at(src, 0, ctx, ring)
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn shift_ideal_error(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
        other => other,
    }
}

fn ideal_at(src: &str, offset: usize, ctx: PrimeContext) -> Result<GLIdeal> {
    GLIdeal::parse(src, ctx).map_err(|e| shift_ideal_error(e, offset))
}

fn int_at(src: &str, offset: usize) -> Result<u32> {
    let t = src.trim();
    t.parse().map_err(|_| err(offset, format!("expected an integer, found '{t}'")))
}

/// Splits on commas outside parentheses, keeping each piece's offset.
fn split_args(src: &str, offset: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in src.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((&src[start..i], offset + start));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((&src[start..], offset + start));
    out
}

fn parse_at(src: &str, offset: usize, ctx: PrimeContext, ring: Ring) -> Result<Family> {
    let lead = src.len() - src.trim_start().len();
    let s = src.trim();
    let offset = offset + lead;
    if s.is_empty() {
        return Err(err(offset, "empty module descriptor"));
    }
    if s == "S" {
        return Ok(quotient_family(ring, &GLIdeal::zero(ctx)));
    }
    if s == "k" {
        return Ok(residue_field(ring, ctx));
    }
    if let Some(rest) = s.strip_prefix("S/") {
        return Ok(quotient_family(ring, &ideal_at(rest, offset + 2, ctx)?));
    }
    if let Some(rest) = s.strip_prefix("ideal:") {
        let base = offset + 6;
        let (upper, lower) = match rest.find('/') {
            Some(k) => (ideal_at(&rest[..k], base, ctx)?, ideal_at(&rest[k + 1..], base + k + 1, ctx)?),
            None => (ideal_at(rest, base, ctx)?, GLIdeal::zero(ctx)),
        };
        return ideal_family(ring, &upper, &lower).map(|f| -> Family { f }).map_err(|e| match e {
            Error::Domain(m) => Error::Domain(format!("{m} (the lower ideal must lie in the upper one)")),
            other => other,
        });
    }
    if let Some(rest) = s.strip_prefix("free:") {
        let d = int_at(rest, offset + 5)?;
        return Ok(free_family(ring, vec![FreeGen::sym(d, ctx)], ctx));
    }
    if let Some(rest) = s.strip_prefix("frob:") {
        let r = int_at(rest, offset + 5)?;
        if ctx.pow(r) > u32::MAX as u64 / 4 {
            return Err(Error::Domain(format!("frob:{r} is too large")));
        }
        return Ok(free_family(ring, vec![FreeGen::frobenius(r, ctx)], ctx));
    }
    let Some(open) = s.find('(') else {
        return Err(err(offset, format!("unknown module descriptor '{s}'")));
    };
    if !s.ends_with(')') {
        return Err(err(offset + s.len(), "expected ')'"));
    }
    let name = &s[..open];
    let inner = &s[open + 1..s.len() - 1];
    let args = split_args(inner, offset + open + 1);
    match name {
        "sum" => {
            let parts = args.iter().map(|&(a, o)| parse_at(a, o, ctx, ring)).collect::<Result<Vec<_>>>()?;
            SumFamily::new(parts)
        }
        "delta" | "shift" | "kq" | "tors" | "sh" => {
            let [(a, ao), (b, bo)] = args[..] else {
                return Err(err(offset + open, format!("{name} takes two arguments")));
            };
            let k = int_at(a, ao)?;
            if name == "sh" {
                return Ok(hasse_schur(&parse_at(b, bo, ctx, ring)?, k));
            }
            if !ctx.log(k as u64).is_some_and(|r| r >= 1) {
                return Err(Error::Domain(format!("q = {k} is not a positive power of p = {}", ctx.p())));
            }
            let x = parse_at(b, bo, ctx, Ring::Frob { q: k })?;
            match name {
                "delta" => delta(&x, k),
                "shift" => sm_shift(&x, k),
                "kq" => kq(&x, k),
                _ => TorsionFamily::new(x, k),
            }
        }
        _ => Err(err(offset, format!("unknown constructor '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::degree_dims;

    fn c2() -> PrimeContext {
        PrimeContext::new(2).unwrap()
    }

    #[test]
    fn parses_basic_forms() {
        let f = parse_descriptor("S/m[p^1]", c2(), Ring::Poly).unwrap();
        assert_eq!(degree_dims(f.eval(2).as_ref(), 3), vec![1, 2, 1, 0]);
        let f = parse_descriptor("ideal:m[p^1]*m", c2(), Ring::Poly).unwrap();
        assert_eq!(degree_dims(f.eval(2).as_ref(), 3), vec![0, 0, 0, 4]);
        let f = parse_descriptor("free:0", c2(), Ring::Poly).unwrap();
        assert_eq!(degree_dims(f.eval(3).as_ref(), 0), vec![1]);
        let f = parse_descriptor("sum(k, ideal:m/m^2)", c2(), Ring::Frob { q: 2 }).unwrap();
        assert_eq!(degree_dims(f.eval(3).as_ref(), 2), vec![1, 3, 0]);
        let f = parse_descriptor("delta(2, frob:1)", c2(), Ring::Poly).unwrap();
        assert!(degree_dims(f.eval(3).as_ref(), 6).iter().all(|&x| x == 0));
    }

    #[test]
    fn reports_positions() {
        match parse_descriptor("sum(k, S/m[p^x])", c2(), Ring::Poly) {
            Err(Error::Parse { pos, .. }) => assert!(pos >= 7, "pos = {pos}"),
            other => panic!("{:?}", other.map(|f| f.describe())),
        }
        assert!(matches!(parse_descriptor("bogus", c2(), Ring::Poly), Err(Error::Parse { .. })));
        assert!(matches!(parse_descriptor("delta(3, k)", c2(), Ring::Poly), Err(Error::Domain(_))));
    }
}
