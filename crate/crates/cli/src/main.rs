//! `frobgl`: command-line front end for the frobgl library.
//!
//! Exit codes: 0 success, 1 invariant violation or failed suite, 2 parse or
//! usage error, 3 domain error, 4 cutoff overflow, 5 search exhausted,
//! 6 resource limit.

mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobgl::combinatorics::PrimeContext;
use frobgl::descriptor::parse_descriptor;
use frobgl::dist::{gln_submodule_closure, PolyFp};
use frobgl::evaluation::{frobenius_quotient, Family, Ring};
use frobgl::glideals::{
    canonical_generator, compositions, evaluate_ideal, gl_radical, hilbert_function, ideal_contains, ideal_member,
    is_gl_prime, non_primality_witness, orbit_ideal, GLIdeal,
};
use frobgl::harness::{self, goldens};
use frobgl::homology::{betti_of_family, detect_lines, slope, t_sequence};
use frobgl::schur::shift_until_flat;
use frobgl::{Error, Result};
use render::Output;
use serde_json::json;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "frobgl", version, about = "GL-equivariant commutative algebra in characteristic p")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Characteristic.
    #[arg(long, global = true, env = "FROBGL_P", default_value_t = 2)]
    p: u32,
    /// Work over S/m^[q] instead of S.
    #[arg(long, global = true, env = "FROBGL_Q")]
    q: Option<u32>,
    /// Number of variables.
    #[arg(long, global = true, env = "FROBGL_N", conflicts_with = "n_range")]
    n: Option<usize>,
    /// Range of variable counts, `a..b` inclusive.
    #[arg(long, global = true, env = "FROBGL_N_RANGE")]
    n_range: Option<String>,
    /// Largest homological degree.
    #[arg(long, global = true, env = "FROBGL_IMAX")]
    imax: Option<u32>,
    /// Largest internal degree.
    #[arg(long, global = true, env = "FROBGL_JMAX")]
    jmax: Option<u32>,
    /// Largest shift step.
    #[arg(long, global = true, env = "FROBGL_LMAX", default_value_t = 12)]
    lmax: u32,
    #[arg(long, global = true, env = "FROBGL_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, env = "FROBGL_SEED", default_value_t = 0)]
    seed: u64,
    /// Memory budget, e.g. `512M` or `2G`.
    #[arg(long, global = true, env = "FROBGL_LIMIT_MEM")]
    limit_mem: Option<String>,
    /// Time budget, e.g. `90`, `90s` or `5m`.
    #[arg(long, global = true, env = "FROBGL_LIMIT_TIME")]
    limit_time: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// GL-ideal calculus on an expression such as `m^2 * m[p^1] + m[p^3]`.
    Ideal {
        expr: String,
        #[command(subcommand)]
        op: IdealOp,
    },
    /// Betti tables of a module descriptor, one per n.
    Betti { module: String },
    /// Line covers of the Betti table support.
    Lines { module: String },
    /// Iterate the shift functor over S/m^[q] until the module is flat.
    ShiftExperiment {
        module: String,
        /// Variable counts to test flatness at.
        #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
        n_set: Vec<usize>,
    },
    /// Smallest m with Sh_m(M) flat over S.
    SShift {
        module: String,
        #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
        n_set: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        mmax: u32,
    },
    /// The GL_n-module generated by a monomial under divided powers.
    Orbit { monomial: String },
    /// Run a verification suite.
    Verify { suite: String },
    /// Regenerate oracle goldens and check them against the stored file.
    Goldens {
        /// Write the records to this path.
        #[arg(long)]
        write: Option<String>,
        /// Recompute every record, reference values included.
        #[arg(long)]
        fresh: bool,
    },
}

#[derive(Subcommand)]
enum IdealOp {
    /// Canonical form and its generators.
    Canon,
    Radical,
    Prime,
    /// Membership of a monomial such as `x1^3*x2` or `3,1`.
    Member { monomial: String },
    /// Whether the ideal contains another one.
    Contains { other: String },
    /// Minimal monomial generators at n variables up to degree dmax.
    Eval { n: usize, dmax: u32 },
    /// dim (S/I)_d at n variables.
    Hilbert { n: usize, d: u32 },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) => 1,
        Error::Parse { .. } => 2,
        Error::Domain(_) => 3,
        Error::CutoffOverflow(_) => 4,
        Error::Exhausted(_) => 5,
        Error::ResourceLimit(_) => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{}", out.render(cli.cfg.format));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("frobgl: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse { pos: 0, msg: msg.into() }
}

fn parse_size(s: &str) -> Result<u64> {
    let t = s.trim();
    let (num, mult) = match t.chars().last() {
        Some('K' | 'k') => (&t[..t.len() - 1], 1u64 << 10),
        Some('M' | 'm') => (&t[..t.len() - 1], 1 << 20),
        Some('G' | 'g') => (&t[..t.len() - 1], 1 << 30),
        _ => (t, 1),
    };
    num.parse::<u64>().map(|v| v * mult).map_err(|_| usage(format!("bad memory size '{s}'")))
}

fn parse_duration(s: &str) -> Result<Duration> {
    let t = s.trim();
    let (num, mult) = match t.chars().last() {
        Some('s') => (&t[..t.len() - 1], 1),
        Some('m') => (&t[..t.len() - 1], 60),
        Some('h') => (&t[..t.len() - 1], 3600),
        _ => (t, 1),
    };
    num.parse::<u64>().map(|v| Duration::from_secs(v * mult)).map_err(|_| usage(format!("bad duration '{s}'")))
}

impl Config {
    fn ctx(&self) -> Result<PrimeContext> {
        PrimeContext::new(self.p)
    }

    fn ring(&self) -> Result<Ring> {
        match self.q {
            None => Ok(Ring::Poly),
            Some(q) => frobenius_quotient(q, self.ctx()?),
        }
    }

    fn n_list(&self, default: usize) -> Result<Vec<usize>> {
        if let Some(r) = &self.n_range {
            let (a, b) = r.split_once("..").ok_or_else(|| usage(format!("expected a..b, found '{r}'")))?;
            let a: usize = a.trim().parse().map_err(|_| usage(format!("bad range start in '{r}'")))?;
            let b: usize = b.trim().parse().map_err(|_| usage(format!("bad range end in '{r}'")))?;
            if a == 0 || a > b {
                return Err(Error::Domain(format!("empty or zero-based n range {a}..{b}")));
            }
            return Ok((a..=b).collect());
        }
        let n = self.n.unwrap_or(default);
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        Ok(vec![n])
    }

    fn apply_limits(&self) -> Result<()> {
        if let Some(m) = &self.limit_mem {
            frobgl::limits::set_memory_limit(Some(parse_size(m)?));
        }
        if let Some(t) = &self.limit_time {
            frobgl::limits::set_time_limit(Some(parse_duration(t)?));
        }
        Ok(())
    }
}

/// `x1^3*x2`, `x1^3 x2`, `3,1` or `1` (the empty monomial).
fn parse_monomial(s: &str) -> Result<Vec<u32>> {
    let t = s.trim();
    if t == "1" || t.is_empty() {
        return Ok(Vec::new());
    }
    if !t.contains('x') {
        return t
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse { pos: 0, msg: format!("bad exponent list '{t}'") }))
            .collect();
    }
    let mut exp: Vec<u32> = Vec::new();
    let mut offset = 0;
    for factor in t.split(['*', ' ']) {
        let pos = offset;
        offset += factor.len() + 1;
        if factor.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse { pos, msg: format!("{msg} in '{factor}'") };
        let body = factor.strip_prefix('x').ok_or_else(|| err("expected x<i>"))?;
        let (var, e) = body.split_once('^').unwrap_or((body, "1"));
        let var: usize = var.parse().map_err(|_| err("bad variable index"))?;
        let e: u32 = e.parse().map_err(|_| err("bad exponent"))?;
        if var == 0 {
            return Err(err("variables are numbered from 1"));
        }
        if exp.len() < var {
            exp.resize(var, 0);
        }
        exp[var - 1] += e;
    }
    Ok(exp)
}

fn run(cli: &Cli) -> Result<(Output, u8)> {
    let cfg = &cli.cfg;
    cfg.apply_limits()?;
    match &cli.cmd {
        Command::Ideal { expr, op } => cmd_ideal(cfg, expr, op).map(|o| (o, 0)),
        Command::Betti { module } => cmd_betti(cfg, module, false).map(|o| (o, 0)),
        Command::Lines { module } => cmd_betti(cfg, module, true).map(|o| (o, 0)),
        Command::ShiftExperiment { module, n_set } => cmd_shift(cfg, module, n_set),
        Command::SShift { module, n_set, mmax } => cmd_s_shift(cfg, module, n_set, *mmax).map(|o| (o, 0)),
        Command::Orbit { monomial } => cmd_orbit(cfg, monomial).map(|o| (o, 0)),
        Command::Verify { suite } => {
            let r = harness::run_suite_seeded(suite, cfg.seed)?;
            let code = if r.failed == 0 {
                0
            } else if r.entries.iter().all(|e| e.status != harness::Status::Fail) {
                6
            } else {
                1
            };
            Ok((Output::report(&r), code))
        }
        Command::Goldens { write, fresh } => {
            let records = if *fresh { goldens::fresh_goldens()? } else { goldens::regenerate_goldens()? };
            if let Some(path) = write {
                std::fs::write(path, goldens::to_json(&records))
                    .map_err(|e| Error::Domain(format!("cannot write {path}: {e}")))?;
            }
            Ok((Output::goldens(&records), 0))
        }
    }
}

fn cmd_ideal(cfg: &Config, expr: &str, op: &IdealOp) -> Result<Output> {
    let ctx = cfg.ctx()?;
    let ideal = GLIdeal::parse(expr, ctx)?;
    Ok(match op {
        IdealOp::Canon => {
            let gens: Vec<String> = ideal
                .generators()
                .map(|b| format!("{}  (x^{:?})", b.render(), canonical_generator(b, ctx).parts()))
                .collect();
            Output::new(format!("{}\n{}\n", ideal.render(), gens.join("\n")), json!({"ideal": ideal.render(), "generators": gens}))
        }
        IdealOp::Radical => {
            let r = gl_radical(&ideal).to_ideal(ctx).render();
            Output::new(format!("{r}\n"), json!({"radical": r}))
        }
        IdealOp::Prime => {
            let prime = is_gl_prime(&ideal);
            let mut text = format!("GL-prime: {prime}\n");
            let mut witness = serde_json::Value::Null;
            if !prime && !ideal.is_unit() {
                if let Some(w) = non_primality_witness(&ideal)? {
                    text.push_str(&format!("witness: x^{:?} * x^{:?} on disjoint variables\n", w.f.parts(), w.g.parts()));
                    witness = json!({"f": w.f.parts(), "g": w.g.parts()});
                }
            }
            Output::new(text, json!({"prime": prime, "witness": witness}))
        }
        IdealOp::Member { monomial } => {
            let m = parse_monomial(monomial)?;
            let v = ideal_member(&m, &ideal);
            Output::new(format!("{v}\n"), json!({"member": v, "monomial": m}))
        }
        IdealOp::Contains { other } => {
            let j = GLIdeal::parse(other, ctx)?;
            let v = ideal_contains(&ideal, &j);
            Output::new(format!("{v}\n"), json!({"contains": v}))
        }
        IdealOp::Eval { n, dmax } => {
            let gens = evaluate_ideal(&ideal, *n, *dmax)?;
            let text: String = gens.iter().map(|g| format!("{g:?}\n")).collect();
            Output::new(text, json!({"n": n, "d_max": dmax, "generators": gens}))
        }
        IdealOp::Hilbert { n, d } => {
            let h = hilbert_function(&ideal, *n, *d)?;
            Output::new(format!("{h}\n"), json!({"n": n, "d": d, "dim": h}))
        }
    })
}

fn family(cfg: &Config, module: &str) -> Result<Family> {
    parse_descriptor(module, cfg.ctx()?, cfg.ring()?)
}

fn cmd_betti(cfg: &Config, module: &str, lines_only: bool) -> Result<Output> {
    let fam = family(cfg, module)?;
    let ns = cfg.n_list(4)?;
    let n_top = *ns.iter().max().unwrap();
    let (i_max, j_max) = match fam.ring() {
        Ring::Poly => (cfg.imax.unwrap_or(n_top as u32), Some(cfg.jmax.unwrap_or(n_top as u32))),
        Ring::Frob { .. } => (cfg.imax.unwrap_or(4), cfg.jmax),
    };
    let fb = betti_of_family(fam.as_ref(), &ns, i_max, j_max)?;
    let mut text = String::new();
    let mut csv = String::from("n,i,j,dim,stable\n");
    let mut items = Vec::new();
    for t in &fb.tables {
        let cover = detect_lines(t);
        let ts = t_sequence(t);
        let sl = if t.is_zero() { None } else { Some(slope(t)?.to_string()) };
        if !lines_only {
            text.push_str(&t.render_text());
            let j_cut = j_max.map_or_else(|| "none".to_string(), |j| j.to_string());
            text.push_str(&format!("cutoffs: i <= {i_max}, j <= {j_cut}\n"));
            text.push_str(&format!("t: {ts:?}\nslope: {}\n", sl.as_deref().unwrap_or("none")));
            for line in t.to_csv().lines().skip(1) {
                csv.push_str(&format!("{},{line}\n", t.n));
            }
        } else {
            text.push_str(&format!("n={}\n", t.n));
            for (&(i, j), _) in &t.entries {
                csv.push_str(&format!("{},{i},{j},,\n", t.n));
            }
        }
        text.push_str(&format!("lines (r = j − i): {}\n", render::lines(&cover)));
        if !cover.residual.is_empty() {
            text.push_str(&format!("uncovered: {:?}\n", cover.residual));
        }
        items.push(json!({"n": t.n, "table": t.to_json(), "t": ts, "slope": sl, "lines": cover}));
    }
    Ok(Output::new(text, json!(items)).with_csv(csv))
}

fn cmd_shift(cfg: &Config, module: &str, n_set: &[usize]) -> Result<(Output, u8)> {
    let q = cfg.q.ok_or_else(|| Error::Domain("shift-experiment needs --q".into()))?;
    let fam = family(cfg, module)?;
    let r = shift_until_flat(&fam, q, cfg.lmax, n_set)?;
    let mut text = String::new();
    let mut csv = String::from("l,zero,t0,t1,slope,flat,torsion_free\n");
    for s in &r.steps {
        let flat = s.flat.iter().all(|x| x.1);
        let sl = s.slope.map(|x| x.to_string()).unwrap_or_else(|| "none".into());
        text.push_str(&format!(
            "l={}  zero={}  t0={}  t1={}  slope={}  flat={}  torsion-free={}\n",
            s.l, s.zero, s.t0, s.t1, sl, flat, s.torsion_free
        ));
        csv.push_str(&format!("{},{},{},{},{},{},{}\n", s.l, s.zero, s.t0, s.t1, sl, flat, s.torsion_free));
    }
    let code = match r.flat_step {
        Some(l) => {
            text.push_str(&format!("flat at l = {l}\n"));
            if !r.consistent() {
                text.push_str(&format!("per n: {:?}\n", r.flat_step_per_n));
            }
            0
        }
        None => {
            text.push_str(&format!("inconclusive at lmax = {}\n", cfg.lmax));
            5
        }
    };
    Ok((Output::new(text, serde_json::to_value(&r).expect("report serializes")).with_csv(csv), code))
}

fn cmd_s_shift(cfg: &Config, module: &str, n_set: &[usize], m_max: u32) -> Result<Output> {
    let fam = family(cfg, module)?;
    let j_max = cfg.jmax.unwrap_or_else(|| goldens::s_shift_j_max(cfg.p));
    let r = harness::s_shift_experiment(&fam, m_max, n_set, j_max)?;
    let text: String = r
        .steps
        .iter()
        .map(|&(m, f)| format!("m={m}  flat={f}\n"))
        .chain(r.flat_m.map(|m| format!("flat at m = {m}\n")))
        .collect();
    Ok(Output::new(text, serde_json::to_value(&r).expect("report serializes")))
}

fn cmd_orbit(cfg: &Config, monomial: &str) -> Result<Output> {
    let ctx = cfg.ctx()?;
    let mut exp = parse_monomial(monomial)?;
    let n = cfg.n.unwrap_or(exp.len().max(1));
    if exp.len() > n {
        return Err(Error::Domain(format!("the monomial needs at least {} variables", exp.len())));
    }
    exp.resize(n, 0);
    let d: u32 = exp.iter().sum();
    let space = gln_submodule_closure(&[PolyFp::monomial(exp.clone(), 1, ctx)], d, n, 200_000)?;
    let ideal = GLIdeal::product_ideal(orbit_ideal(&exp, ctx), ctx);
    let piece = compositions(d, n, d).into_iter().filter(|w| ideal_member(w, &ideal)).count();
    let text = format!(
        "GL_{n}-module generated by x^{exp:?}: dimension {}\nGL-ideal generated: {}\ndegree-{d} piece of that ideal: dimension {piece}\n",
        space.dim(),
        ideal.render()
    );
    Ok(Output::new(text, json!({"n": n, "monomial": exp, "dim": space.dim(), "ideal": ideal.render(), "ideal_piece_dim": piece})))
}
