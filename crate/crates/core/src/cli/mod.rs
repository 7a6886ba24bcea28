//! The `qheine` command line: `eval`, `transform`, `orbit`, `verify`, `sweep`.
//!
//! Values are printed as JSON objects (one per line); sweeps can also emit
//! CSV and orbits a plain table. Exit status is 0 on success, 1 when an
//! identity check fails, and 2 on usage, configuration, or domain errors.

pub mod config;
pub mod literal;
pub mod sweep;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::QError;
use crate::exact::{self, ExactRational};
use crate::heine::{self, GroupElement};
use crate::identities::{self, IdentityName, VerificationReport, DEFAULT_DEPTH};
use crate::qnum::{self, CertifiedValue, EvalConfig, HeineState, QBase};
use config::{OutputFormat, SweepConfig, SweepOverrides};
use literal::{format_complex, ComplexLiteral};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest termination order tried when `eval phi` looks for an exact sum.
const EXACT_EVAL_MAX_M: u32 = 64;

#[derive(Parser, Debug)]
#[command(name = "qheine", version, about = "Basic hypergeometric series, the Heine group, and q-series identity checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate phi, a q-Pochhammer symbol, a cocycle value, or a radial limit.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
    /// Apply a group element to a state.
    Transform(TransformArgs),
    /// List the twelve images of a state with cocycle values and convergence.
    Orbit(OrbitArgs),
    /// Check one identity at given parameters.
    Verify(VerifyArgs),
    /// Check identities on seeded random samples.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct StateArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: ComplexLiteral,
    #[arg(long, allow_hyphen_values = true)]
    b: ComplexLiteral,
    #[arg(long, allow_hyphen_values = true)]
    c: ComplexLiteral,
    #[arg(long, allow_hyphen_values = true)]
    z: ComplexLiteral,
}

impl StateArgs {
    fn state(&self) -> Result<HeineState<Complex64>, QError> {
        HeineState::new(self.a.value, self.b.value, self.c.value, self.z.value)
    }

    fn exact(&self) -> Option<HeineState<ExactRational>> {
        Some(HeineState::from_parts(
            self.a.exact_real()?.clone(),
            self.b.exact_real()?.clone(),
            self.c.exact_real()?.clone(),
            self.z.exact_real()?.clone(),
        ))
    }
}

#[derive(Args, Debug, Clone)]
struct EvalOptions {
    /// Truncation target for the error bound.
    #[arg(long, default_value_t = qnum::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = qnum::DEFAULT_MAX_TERMS)]
    max_terms: usize,
    /// Compensated summation of series terms.
    #[arg(long)]
    compensated: bool,
}

impl EvalOptions {
    fn config(&self) -> EvalConfig {
        EvalConfig {
            tol: self.tol,
            max_terms: self.max_terms,
            compensated: self.compensated,
            ..EvalConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum EvalTarget {
    /// phi(a, b; c; z) for |z| < 1.
    Phi {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexLiteral,
        #[command(flatten)]
        opts: EvalOptions,
    },
    /// (x; q)_n, or (x; q)_inf with --inf.
    Qpoch {
        #[arg(long, allow_hyphen_values = true)]
        x: ComplexLiteral,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexLiteral,
        #[arg(long, conflicts_with = "inf", required_unless_present = "inf")]
        n: Option<usize>,
        #[arg(long)]
        inf: bool,
        #[command(flatten)]
        opts: EvalOptions,
    },
    /// The cocycle h_g(s) with phi(g s) = h_g(s) phi(s).
    Cocycle {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexLiteral,
        #[arg(long, default_value = "H")]
        element: GroupElement,
        #[command(flatten)]
        opts: EvalOptions,
    },
    /// lim_{z -> 1} (z; q)_inf phi(a, b; c; z) by extrapolation.
    Abel {
        #[arg(long, allow_hyphen_values = true)]
        a: ComplexLiteral,
        #[arg(long, allow_hyphen_values = true)]
        b: ComplexLiteral,
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexLiteral,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexLiteral,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[command(flatten)]
        opts: EvalOptions,
    },
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long, default_value = "H")]
    element: GroupElement,
    #[command(flatten)]
    state: StateArgs,
    /// Also report the cocycle h_g(s) at this base.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<ComplexLiteral>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrbitFormat {
    Table,
    Jsonl,
    Csv,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, allow_hyphen_values = true)]
    q: ComplexLiteral,
    /// Show only this element's row.
    #[arg(long)]
    element: Option<GroupElement>,
    #[arg(long, value_enum, default_value_t = OrbitFormat::Table)]
    format: OrbitFormat,
    #[arg(long, default_value_t = identities::CHECK_EVAL_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// q-binomial, heine, heine-squared, q-euler, q-gauss, abel,
    /// gauss-limit, gauss-exact, or binomial-exact.
    identity: IdentityName,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<ComplexLiteral>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<ComplexLiteral>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<ComplexLiteral>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<ComplexLiteral>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<ComplexLiteral>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<ComplexLiteral>,
    /// Termination order of the exact checks.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    /// Pass tolerance on the relative residual.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Flat TOML file with the same keys as these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `all` or a comma-separated list of identities.
    #[arg(long, value_delimiter = ',')]
    identity: Option<Vec<String>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated list of fixed bases.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    q: Option<Vec<String>>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (default: Q_HEINE_JOBS, then all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    real_only: bool,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    max_m: Option<u32>,
}

/// Why a command stopped early.
#[derive(Debug)]
enum Stop {
    Usage(String),
    Io(std::io::Error),
}

impl From<QError> for Stop {
    fn from(e: QError) -> Self {
        Stop::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Stop {
    fn from(e: std::io::Error) -> Self {
        Stop::Io(e)
    }
}

type CmdResult = Result<i32, Stop>;

/// Parse `args` (including the program name) and run the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Eval { target } => cmd_eval(target, out),
        Command::Transform(args) => cmd_transform(args, out),
        Command::Orbit(args) => cmd_orbit(args, out),
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Sweep(args) => cmd_sweep(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Stop::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Stop::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Stop::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn base(q: &ComplexLiteral) -> Result<QBase, Stop> {
    Ok(QBase::new(q.value)?)
}

fn c_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn certified_json(v: &CertifiedValue) -> Value {
    json!({
        "value": c_json(v.value),
        "error_bound": v.error_bound,
        "terms_used": v.terms_used,
    })
}

fn state_json(s: &HeineState<Complex64>) -> Value {
    json!({ "a": c_json(s.a), "b": c_json(s.b), "c": c_json(s.c), "z": c_json(s.z) })
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), Stop> {
    writeln!(out, "{value}")?;
    Ok(())
}

fn eval_record(quantity: &str, v: &CertifiedValue, exact: Option<&ExactRational>) -> Value {
    let mut rec = certified_json(v);
    rec["quantity"] = json!(quantity);
    rec["exact"] = json!(exact.map(ToString::to_string));
    rec
}

fn cmd_eval(target: EvalTarget, out: &mut dyn Write) -> CmdResult {
    let record = match target {
        EvalTarget::Phi { state, q, opts } => {
            let qb = base(&q)?;
            let s = state.state()?;
            if let (Some(es), Some(eq)) = (state.exact(), q.exact_real()) {
                if let Some(v) = exact::exact_phi(&es.a, &es.b, &es.c, &es.z, eq, EXACT_EVAL_MAX_M) {
                    let v = v?;
                    let value = CertifiedValue::from_ball(exact::to_ball(&v), 0)?;
                    return emit(out, &eval_record("phi", &value, Some(&v))).map(|_| EXIT_OK);
                }
            }
            let v = qnum::phi_with(&s, &qb, &opts.config())?;
            eval_record("phi", &v, None)
        }
        EvalTarget::Qpoch { x, q, n, inf, opts } => {
            let qb = base(&q)?;
            if inf {
                let v = qnum::qpoch_infinite_with(x.value, &qb, &opts.config())?;
                let exact = v.error_bound == 0.0 && v.value.im == 0.0;
                let ev = exact.then(|| ExactRational::from_float(v.value.re)).flatten();
                eval_record("qpoch", &v, ev.as_ref())
            } else {
                let n = n.expect("clap enforces --n or --inf");
                let ev = match (x.exact_real(), q.exact_real()) {
                    (Some(ex), Some(eq)) => Some(exact::exact_qpoch(ex, eq, n)),
                    _ => None,
                };
                let v = match &ev {
                    Some(e) => CertifiedValue::from_ball(exact::to_ball(e), n)?,
                    None => qnum::qpoch_finite_certified(x.value, &qb, n),
                };
                eval_record("qpoch", &v, ev.as_ref())
            }
        }
        EvalTarget::Cocycle { state, q, element, opts } => {
            let qb = base(&q)?;
            let v = heine::cocycle_for(element, &state.state()?, &qb, opts.tol)?;
            let mut rec = eval_record("cocycle", &v, None);
            rec["element"] = json!(element.name());
            rec
        }
        EvalTarget::Abel { a, b, c, q, depth, opts } => {
            let qb = base(&q)?;
            check_depth(depth)?;
            let v = identities::abel_limit_with(a.value, b.value, c.value, &qb, depth, &opts.config())?;
            eval_record("abel-limit", &v, None)
        }
    };
    emit(out, &record)?;
    Ok(EXIT_OK)
}

fn check_depth(depth: u32) -> Result<(), Stop> {
    if !(2..=48).contains(&depth) {
        return Err(Stop::Usage(format!("depth must lie in 2..=48, got {depth}")));
    }
    Ok(())
}

fn cmd_transform(args: TransformArgs, out: &mut dyn Write) -> CmdResult {
    let s = args.state.state()?;
    let g = args.element;
    let image = heine::apply(g, &s);
    // entries are nonzero, so the rational images are well defined
    let exact = args.state.exact().map(|es| {
        let e = heine::apply(g, &es);
        json!({
            "a": e.a.to_string(), "b": e.b.to_string(),
            "c": e.c.to_string(), "z": e.z.to_string(),
        })
    });
    let mut rec = json!({
        "element": g.name(),
        "state": state_json(&image),
        "exact": exact,
    });
    if let Some(q) = &args.q {
        let qb = base(q)?;
        rec["cocycle"] = match heine::cocycle_for(g, &s, &qb, identities::CHECK_EVAL_TOL) {
            Ok(v) => certified_json(&v),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    emit(out, &rec)?;
    Ok(EXIT_OK)
}

fn cmd_orbit(args: OrbitArgs, out: &mut dyn Write) -> CmdResult {
    let qb = base(&args.q)?;
    let s = args.state.state()?;
    let orbit = heine::orbit(&s, &qb);
    let entries: Vec<_> = match args.element {
        Some(g) => vec![orbit.get(g).clone()],
        None => orbit.entries.clone(),
    };
    let cocycles: Vec<Option<CertifiedValue>> = entries
        .iter()
        .map(|e| heine::cocycle_for(e.element, &s, &qb, args.tol).ok())
        .collect();

    match args.format {
        OrbitFormat::Jsonl => {
            for (e, h) in entries.iter().zip(&cocycles) {
                emit(
                    out,
                    &json!({
                        "element": e.element.name(),
                        "state": state_json(&e.state),
                        "cocycle": h.as_ref().map(certified_json),
                        "convergent": e.convergent,
                        "duplicate_of": e.duplicate_of.map(|g| g.name()),
                    }),
                )?;
            }
        }
        OrbitFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["element", "a", "b", "c", "z", "cocycle", "cocycle_error", "convergent", "duplicate_of"])
                .map_err(std::io::Error::other)?;
            for (e, h) in entries.iter().zip(&cocycles) {
                let st = &e.state;
                w.write_record([
                    e.element.name(),
                    format_complex(st.a, None),
                    format_complex(st.b, None),
                    format_complex(st.c, None),
                    format_complex(st.z, None),
                    h.as_ref().map(|v| format_complex(v.value, None)).unwrap_or_default(),
                    h.as_ref().map(|v| v.error_bound.to_string()).unwrap_or_default(),
                    e.convergent.to_string(),
                    e.duplicate_of.map(|g| g.name()).unwrap_or_default(),
                ])
                .map_err(std::io::Error::other)?;
            }
            w.flush()?;
        }
        OrbitFormat::Table => {
            let cell = |z: Complex64| format_complex(z, Some(6));
            let mut rows = vec![[
                "element".to_string(),
                "a".into(),
                "b".into(),
                "c".into(),
                "z".into(),
                "cocycle".into(),
                "convergent".into(),
                "duplicate".into(),
            ]];
            for (e, h) in entries.iter().zip(&cocycles) {
                let st = &e.state;
                rows.push([
                    e.element.name(),
                    cell(st.a),
                    cell(st.b),
                    cell(st.c),
                    cell(st.z),
                    h.as_ref().map(|v| cell(v.value)).unwrap_or_else(|| "-".into()),
                    if e.convergent { "yes" } else { "no" }.into(),
                    e.duplicate_of.map(|g| format!("= {g}")).unwrap_or_default(),
                ]);
            }
            let widths: Vec<usize> = (0..8)
                .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            for r in &rows {
                let mut line = String::new();
                for (j, field) in r.iter().enumerate() {
                    let _ = write!(line, "{field:<w$}  ", w = widths[j]);
                }
                writeln!(out, "{}", line.trim_end())?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn need<'a>(value: &'a Option<ComplexLiteral>, name: &str, identity: IdentityName) -> Result<&'a ComplexLiteral, Stop> {
    value
        .as_ref()
        .ok_or_else(|| Stop::Usage(format!("{identity} needs --{name}")))
}

fn need_rational<'a>(
    value: &'a Option<ComplexLiteral>,
    name: &str,
    identity: IdentityName,
) -> Result<&'a ExactRational, Stop> {
    need(value, name, identity)?
        .exact_real()
        .ok_or_else(|| Stop::Usage(format!("{identity} needs a real rational --{name}")))
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let id = args.identity;
    let tol = args.tol.unwrap_or_else(|| id.default_tolerance());
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Stop::Usage(format!("tol must be finite and non-negative, got {tol}")));
    }
    check_depth(args.depth)?;
    let numeric_base = || -> Result<QBase, Stop> { base(need(&args.q, "q", id)?) };
    let state = || -> Result<HeineState<Complex64>, Stop> {
        Ok(HeineState::new(
            need(&args.a, "a", id)?.value,
            need(&args.b, "b", id)?.value,
            need(&args.c, "c", id)?.value,
            need(&args.z, "z", id)?.value,
        )?)
    };
    let abc = || -> Result<(Complex64, Complex64, Complex64), Stop> {
        Ok((
            need(&args.a, "a", id)?.value,
            need(&args.b, "b", id)?.value,
            need(&args.c, "c", id)?.value,
        ))
    };
    let order = || args.m.ok_or_else(|| Stop::Usage(format!("{id} needs --m")));

    let report: VerificationReport = match id {
        IdentityName::QBinomial => identities::verify_q_binomial(
            need(&args.u, "u", id)?.value,
            need(&args.z, "z", id)?.value,
            &numeric_base()?,
            tol,
        )?,
        IdentityName::Heine => identities::verify_heine(&state()?, &numeric_base()?, tol)?,
        IdentityName::HeineSquared => identities::verify_heine_squared(&state()?, &numeric_base()?, tol)?,
        IdentityName::QEuler => identities::verify_q_euler(&state()?, &numeric_base()?, tol)?,
        IdentityName::QGauss => {
            let (a, b, c) = abc()?;
            identities::verify_q_gauss(a, b, c, &numeric_base()?, tol)?
        }
        IdentityName::Abel => {
            let (a, b, c) = abc()?;
            identities::verify_abel(a, b, c, &numeric_base()?, args.depth, tol)?
        }
        IdentityName::GaussLimit => {
            let (a, b, c) = abc()?;
            identities::verify_gauss_via_limit_with(a, b, c, &numeric_base()?, args.depth, tol)?
        }
        IdentityName::GaussExact => identities::verify_gauss_exact(
            order()?,
            need_rational(&args.q, "q", id)?,
            need_rational(&args.b, "b", id)?,
            need_rational(&args.c, "c", id)?,
        )?,
        IdentityName::BinomialExact => identities::verify_binomial_exact(
            order()?,
            need_rational(&args.z, "z", id)?,
            need_rational(&args.q, "q", id)?,
        )?,
    };
    writeln!(out, "{}", report.to_json())?;
    if report.skipped {
        let reason = report.skip_reason.as_deref().unwrap_or("precondition violated");
        writeln!(err, "error: {id}: {reason}")?;
        return Ok(EXIT_USAGE);
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let flags = SweepOverrides {
        identity: args.identity,
        samples: args.samples,
        seed: args.seed,
        q: args.q,
        tol: args.tol,
        format: args.format,
        jobs: args.jobs,
        real_only: args.real_only,
        depth: args.depth,
        max_m: args.max_m,
    };
    let cfg = SweepConfig::load(args.config.as_deref(), flags).map_err(Stop::Usage)?;
    let (reports, summary) = sweep::run_reports(&cfg).map_err(Stop::Usage)?;
    sweep::write_reports(&reports, cfg.format, out)?;
    out.flush()?;
    writeln!(
        err,
        "sweep: {} reports, {} pass, {} fail, {} skipped, {} filtered",
        summary.reports, summary.pass, summary.fail, summary.skipped, summary.filtered
    )?;
    Ok(summary.exit_code())
}
