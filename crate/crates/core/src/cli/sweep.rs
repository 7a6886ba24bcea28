//! Seeded parameter sweeps over the identity checks.
//!
//! Samples are drawn sequentially, one ChaCha8 stream per (identity, base)
//! pair, so the sample set depends only on the seed and the config. Reports
//! are computed on a worker pool and written in sample order.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{OutputFormat, SweepConfig};
use super::literal::format_complex;
use crate::identities::sampling::{Region, Sample, Sampler};
use crate::identities::{self, IdentityName, ReportInputs, VerificationReport};

/// Counts reported after a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub reports: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    /// Draws discarded because they violated a precondition.
    pub filtered: usize,
}

impl SweepSummary {
    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            1
        } else {
            0
        }
    }
}

/// Sample inputs in output order, plus the number of filtered draws.
pub fn plan(cfg: &SweepConfig) -> (Vec<(IdentityName, Sample)>, usize) {
    let mut tasks = Vec::new();
    let mut filtered = 0;
    let bases: Vec<_> = if cfg.q.is_empty() {
        vec![None]
    } else {
        cfg.q.iter().map(Some).collect()
    };
    for &identity in &cfg.identities {
        let slot = IdentityName::ALL
            .iter()
            .position(|&i| i == identity)
            .expect("listed identity") as u64;
        for (qi, base) in bases.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream((slot << 32) | qi as u64);
            let region = Region {
                real_only: cfg.real_only,
                q: base.map(|b| b.value),
                exact_q: base.and_then(|b| b.exact_real().cloned()),
                max_m: cfg.max_m,
            };
            let mut sampler = Sampler::new(&mut rng, region);
            for _ in 0..cfg.samples {
                match sampler.sample(identity) {
                    Some(s) => tasks.push((identity, s)),
                    None => filtered += 1,
                }
            }
            filtered += sampler.rejected;
        }
    }
    (tasks, filtered)
}

fn sample_inputs(s: &Sample) -> ReportInputs {
    match s {
        Sample::Binomial { u, z, q } => ReportInputs {
            u: Some(*u),
            z: Some(*z),
            q: Some(q.value()),
            ..Default::default()
        },
        Sample::State { state, q } => ReportInputs::state(state, q),
        Sample::Upper { a, b, c, q } => ReportInputs::upper_lower(*a, *b, *c, q),
        Sample::GaussExact { m, .. } | Sample::BinomialExact { m, .. } => ReportInputs {
            m: Some(*m),
            ..Default::default()
        },
    }
}

/// Run one check; an evaluation error inside the sampled region is a failure.
pub fn evaluate(identity: IdentityName, sample: &Sample, tol: Option<f64>, depth: u32) -> VerificationReport {
    let tol = tol.unwrap_or_else(|| identity.default_tolerance());
    let result = match (identity, sample) {
        (IdentityName::QBinomial, Sample::Binomial { u, z, q }) => {
            identities::verify_q_binomial(*u, *z, q, tol)
        }
        (IdentityName::Heine, Sample::State { state, q }) => identities::verify_heine(state, q, tol),
        (IdentityName::HeineSquared, Sample::State { state, q }) => {
            identities::verify_heine_squared(state, q, tol)
        }
        (IdentityName::QEuler, Sample::State { state, q }) => identities::verify_q_euler(state, q, tol),
        (IdentityName::QGauss, Sample::Upper { a, b, c, q }) => {
            identities::verify_q_gauss(*a, *b, *c, q, tol)
        }
        (IdentityName::Abel, Sample::Upper { a, b, c, q }) => {
            identities::verify_abel(*a, *b, *c, q, depth, tol)
        }
        (IdentityName::GaussLimit, Sample::Upper { a, b, c, q }) => {
            identities::verify_gauss_via_limit_with(*a, *b, *c, q, depth, tol)
        }
        (IdentityName::GaussExact, Sample::GaussExact { m, q, b, c }) => {
            identities::verify_gauss_exact(*m, q, b, c)
        }
        (IdentityName::BinomialExact, Sample::BinomialExact { m, z, q }) => {
            identities::verify_binomial_exact(*m, z, q)
        }
        _ => unreachable!("sampler returns the sample kind of its identity"),
    };
    result.unwrap_or_else(|e| VerificationReport::failed(identity, sample_inputs(sample), &e))
}

/// All reports of a sweep, in plan order.
pub fn run_reports(cfg: &SweepConfig) -> Result<(Vec<VerificationReport>, SweepSummary), String> {
    let (tasks, filtered) = plan(cfg);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| format!("cannot start worker pool: {e}"))?;
    let reports: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(id, s)| evaluate(*id, s, cfg.tol, cfg.depth))
            .collect()
    });
    let mut summary = SweepSummary {
        reports: reports.len(),
        filtered,
        ..Default::default()
    };
    for r in &reports {
        debug_assert!(!(r.pass && r.skipped));
        if r.skipped {
            summary.skipped += 1;
        } else if r.pass {
            summary.pass += 1;
        } else {
            summary.fail += 1;
        }
    }
    Ok((reports, summary))
}

/// Flat CSV view of a report.
#[derive(Serialize)]
struct CsvRow {
    identity: IdentityName,
    a: String,
    b: String,
    c: String,
    z: String,
    u: String,
    q: String,
    m: Option<u32>,
    depth: Option<u32>,
    lhs: String,
    lhs_error: Option<f64>,
    rhs: String,
    rhs_error: Option<f64>,
    reference: String,
    exact_lhs: Option<String>,
    exact_rhs: Option<String>,
    residual: Option<f64>,
    threshold: f64,
    pass: bool,
    skipped: bool,
    skip_reason: Option<String>,
}

fn opt_complex(z: Option<Complex64>) -> String {
    z.map(|z| format_complex(z, None)).unwrap_or_default()
}

impl From<&VerificationReport> for CsvRow {
    fn from(r: &VerificationReport) -> Self {
        let i = &r.inputs;
        CsvRow {
            identity: r.identity,
            a: opt_complex(i.a),
            b: opt_complex(i.b),
            c: opt_complex(i.c),
            z: opt_complex(i.z),
            u: opt_complex(i.u),
            q: match &r.exact {
                Some(e) => e.q.clone(),
                None => opt_complex(i.q),
            },
            m: i.m,
            depth: i.depth,
            lhs: opt_complex(r.lhs.as_ref().map(|v| v.value)),
            lhs_error: r.lhs.as_ref().map(|v| v.error_bound),
            rhs: opt_complex(r.rhs.as_ref().map(|v| v.value)),
            rhs_error: r.rhs.as_ref().map(|v| v.error_bound),
            reference: opt_complex(r.reference.as_ref().map(|v| v.value)),
            exact_lhs: r.exact.as_ref().map(|e| e.lhs.clone()),
            exact_rhs: r.exact.as_ref().map(|e| e.rhs.clone()),
            residual: r.residual,
            threshold: r.threshold,
            pass: r.pass,
            skipped: r.skipped,
            skip_reason: r.skip_reason.clone(),
        }
    }
}

pub fn write_reports(
    reports: &[VerificationReport],
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Jsonl => {
            for r in reports {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                w.serialize(CsvRow::from(r)).map_err(std::io::Error::other)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
