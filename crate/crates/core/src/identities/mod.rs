//! Verification of the classical ₂φ₁ identities with certified residuals.
//!
//! Every check evaluates both sides independently in ball arithmetic and
//! reports the symmetric relative residual `|l - r| / (|l| + |r|)`. A report
//! passes when the residual is at most `max(tol, 10 × propagated bound)`,
//! where the propagated bound is the same ratio formed from the two error
//! bounds. Checks whose preconditions fail are reported as skipped.

mod abel;
pub mod sampling;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::ball::Ball;
use crate::error::{QError, Result};
use crate::exact::{self, ExactRational};
use crate::heine::{apply, apply_h, GroupElement};
use crate::qnum::{
    check_lower_parameter, phi_balls, qbinomial_sum, qpoch_infinite_with, CertifiedValue,
    EvalConfig, HeineState, QBase, DEFAULT_LOWER_EPS,
};

pub use abel::{abel_function, abel_limit, abel_limit_with, richardson, verify_abel, verify_gauss_via_limit, verify_gauss_via_limit_with, DEFAULT_DEPTH};

/// Truncation target used for each side of a numerical check.
pub const CHECK_EVAL_TOL: f64 = 1e-14;
/// Default pass tolerance for series identities.
pub const DEFAULT_SERIES_TOL: f64 = 1e-10;
/// Default pass tolerance for the radial-limit checks.
pub const DEFAULT_LIMIT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityName {
    QBinomial,
    Heine,
    HeineSquared,
    QEuler,
    QGauss,
    Abel,
    GaussLimit,
    GaussExact,
    BinomialExact,
}

impl IdentityName {
    pub const ALL: [IdentityName; 9] = [
        IdentityName::QBinomial,
        IdentityName::Heine,
        IdentityName::HeineSquared,
        IdentityName::QEuler,
        IdentityName::QGauss,
        IdentityName::Abel,
        IdentityName::GaussLimit,
        IdentityName::GaussExact,
        IdentityName::BinomialExact,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityName::QBinomial => "q-binomial",
            IdentityName::Heine => "heine",
            IdentityName::HeineSquared => "heine-squared",
            IdentityName::QEuler => "q-euler",
            IdentityName::QGauss => "q-gauss",
            IdentityName::Abel => "abel",
            IdentityName::GaussLimit => "gauss-limit",
            IdentityName::GaussExact => "gauss-exact",
            IdentityName::BinomialExact => "binomial-exact",
        }
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            IdentityName::Abel | IdentityName::GaussLimit => DEFAULT_LIMIT_TOL,
            IdentityName::GaussExact | IdentityName::BinomialExact => 0.0,
            _ => DEFAULT_SERIES_TOL,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, IdentityName::GaussExact | IdentityName::BinomialExact)
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        let name = match s.trim() {
            "q-binomial" | "binomial" => IdentityName::QBinomial,
            "heine" => IdentityName::Heine,
            "heine-squared" | "heine2" => IdentityName::HeineSquared,
            "q-euler" | "euler" => IdentityName::QEuler,
            "q-gauss" | "gauss" => IdentityName::QGauss,
            "abel" => IdentityName::Abel,
            "gauss-limit" | "gauss-via-limit" => IdentityName::GaussLimit,
            "gauss-exact" => IdentityName::GaussExact,
            "binomial-exact" | "q-binomial-exact" => IdentityName::BinomialExact,
            other => {
                return Err(QError::InvalidArgument(format!("unknown identity `{other}`")))
            }
        };
        Ok(name)
    }
}

/// Inputs echoed in a report. Unused slots are `null` in JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportInputs {
    #[serde(with = "crate::serde_complex::option")]
    pub a: Option<Complex64>,
    #[serde(with = "crate::serde_complex::option")]
    pub b: Option<Complex64>,
    #[serde(with = "crate::serde_complex::option")]
    pub c: Option<Complex64>,
    #[serde(with = "crate::serde_complex::option")]
    pub z: Option<Complex64>,
    #[serde(with = "crate::serde_complex::option")]
    pub u: Option<Complex64>,
    #[serde(with = "crate::serde_complex::option")]
    pub q: Option<Complex64>,
    pub m: Option<u32>,
    pub depth: Option<u32>,
}

impl ReportInputs {
    pub fn state(s: &HeineState<Complex64>, q: &QBase) -> Self {
        ReportInputs {
            a: Some(s.a),
            b: Some(s.b),
            c: Some(s.c),
            z: Some(s.z),
            q: Some(q.value()),
            ..Default::default()
        }
    }

    pub fn upper_lower(a: Complex64, b: Complex64, c: Complex64, q: &QBase) -> Self {
        ReportInputs {
            a: Some(a),
            b: Some(b),
            c: Some(c),
            q: Some(q.value()),
            ..Default::default()
        }
    }
}

/// Both sides of an exact check, as reduced fractions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactSides {
    pub q: String,
    pub b: Option<String>,
    pub c: Option<String>,
    pub z: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: IdentityName,
    pub inputs: ReportInputs,
    pub lhs: Option<CertifiedValue>,
    pub rhs: Option<CertifiedValue>,
    /// Closed-form value both sides are also compared against, when there is one.
    pub reference: Option<CertifiedValue>,
    pub exact: Option<ExactSides>,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub skipped: bool,
    pub skip_reason: Option<String>,
}

/// Symmetric relative residual of two balls, with the same ratio for their radii.
pub fn relative_residual(lhs: &Ball, rhs: &Ball) -> (f64, f64) {
    let scale = lhs.mid.norm() + rhs.mid.norm();
    if scale == 0.0 {
        let bound = lhs.rad + rhs.rad;
        return (0.0, if bound == 0.0 { 0.0 } else { f64::INFINITY });
    }
    (
        (lhs.mid - rhs.mid).norm() / scale,
        (lhs.rad + rhs.rad) / scale,
    )
}

impl VerificationReport {
    pub fn evaluated(
        identity: IdentityName,
        inputs: ReportInputs,
        lhs: CertifiedValue,
        rhs: CertifiedValue,
        reference: Option<CertifiedValue>,
        tol: f64,
    ) -> Self {
        let mut sides = vec![lhs.ball(), rhs.ball()];
        sides.extend(reference.iter().map(CertifiedValue::ball));
        let (mut residual, mut propagated) = (0.0f64, 0.0f64);
        for i in 0..sides.len() {
            for j in i + 1..sides.len() {
                let (r, p) = relative_residual(&sides[i], &sides[j]);
                residual = residual.max(r);
                propagated = propagated.max(p);
            }
        }
        let threshold = tol.max(10.0 * propagated);
        VerificationReport {
            identity,
            inputs,
            lhs: Some(lhs),
            rhs: Some(rhs),
            reference,
            exact: None,
            residual: Some(residual),
            threshold,
            pass: residual <= threshold,
            skipped: false,
            skip_reason: None,
        }
    }

    pub fn skipped(identity: IdentityName, inputs: ReportInputs, reason: impl Into<String>) -> Self {
        VerificationReport {
            identity,
            inputs,
            lhs: None,
            rhs: None,
            reference: None,
            exact: None,
            residual: None,
            threshold: identity.default_tolerance(),
            pass: false,
            skipped: true,
            skip_reason: Some(reason.into()),
        }
    }

    /// Report for an evaluation that raised an error inside its declared domain.
    pub fn failed(identity: IdentityName, inputs: ReportInputs, err: &QError) -> Self {
        VerificationReport {
            skipped: false,
            ..Self::skipped(identity, inputs, err.to_string())
        }
    }

    pub fn failed_check(&self) -> bool {
        !self.pass && !self.skipped
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

fn check_cfg() -> EvalConfig {
    EvalConfig::with_tol(CHECK_EVAL_TOL)
}

fn qpoch_ball(x: Ball, q: &QBase, cfg: &EvalConfig) -> Result<Ball> {
    Ok(qpoch_infinite_with(x, q, cfg)?.ball())
}

fn certified(ball: Ball, terms: usize) -> Result<CertifiedValue> {
    if !ball.is_finite() {
        return Err(QError::DivisionByZero(
            "closed form has a vanishing denominator".into(),
        ));
    }
    Ok(CertifiedValue {
        value: ball.mid,
        error_bound: ball.rad,
        terms_used: terms,
    })
}

fn lower_ok(c: Complex64, q: &QBase) -> bool {
    check_lower_parameter(c, q, DEFAULT_LOWER_EPS)
}

/// Preconditions shared by the numerical checks: `Ok` or a reason to skip.
pub type Precondition = std::result::Result<(), String>;

fn require(ok: bool, reason: impl FnOnce() -> String) -> Precondition {
    if ok {
        Ok(())
    } else {
        Err(reason())
    }
}

pub fn heine_preconditions(s: &HeineState<Complex64>, q: &QBase) -> Precondition {
    require(s.b.norm() < 1.0, || format!("|b| = {} is not below 1", s.b.norm()))?;
    require(s.z.norm() < 1.0, || format!("|z| = {} is not below 1", s.z.norm()))?;
    require(lower_ok(s.c, q), || "c q^N = 1 for some N".into())?;
    require(lower_ok(s.a * s.z, q), || "az q^N = 1 for some N".into())
}

pub fn heine_squared_preconditions(s: &HeineState<Complex64>, q: &QBase) -> Precondition {
    let cb = s.c / s.b;
    require(cb.norm() < 1.0, || format!("|c/b| = {} is not below 1", cb.norm()))?;
    require(s.z.norm() < 1.0, || format!("|z| = {} is not below 1", s.z.norm()))?;
    require(lower_ok(s.c, q), || "c q^N = 1 for some N".into())?;
    require(lower_ok(s.b * s.z, q), || "bz q^N = 1 for some N".into())
}

pub fn q_euler_preconditions(s: &HeineState<Complex64>, q: &QBase) -> Precondition {
    let w = s.a * s.b * s.z / s.c;
    require(s.z.norm() < 1.0, || format!("|z| = {} is not below 1", s.z.norm()))?;
    require(w.norm() < 1.0, || format!("|abz/c| = {} is not below 1", w.norm()))?;
    require(lower_ok(s.c, q), || "c q^N = 1 for some N".into())
}

pub fn q_gauss_preconditions(a: Complex64, b: Complex64, c: Complex64, q: &QBase) -> Precondition {
    require(c.norm() < (a * b).norm(), || {
        format!("|c| = {} is not below |ab| = {}", c.norm(), (a * b).norm())
    })?;
    require(lower_ok(c, q), || "c q^N = 1 for some N".into())
}

/// `Σ (u;q)_n z^n / (q;q)_n` against `(uz;q)_∞ / (z;q)_∞`.
pub fn verify_q_binomial(u: Complex64, z: Complex64, q: &QBase, tol: f64) -> Result<VerificationReport> {
    let inputs = ReportInputs {
        u: Some(u),
        z: Some(z),
        q: Some(q.value()),
        ..Default::default()
    };
    if !(z.norm() < 1.0) {
        return Err(QError::DomainError(format!(
            "q-binomial series requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let cfg = check_cfg();
    let lhs = qbinomial_sum(u, z, q, &cfg)?;
    let (u, z) = (Ball::exact(u), Ball::exact(z));
    let rhs = qpoch_ball(u * z, q, &cfg)? / qpoch_ball(z, q, &cfg)?;
    Ok(VerificationReport::evaluated(
        IdentityName::QBinomial,
        inputs,
        lhs,
        certified(rhs, 2)?,
        None,
        tol,
    ))
}

/// `φ(s)` against `(b;q)_∞ (az;q)_∞ / ((c;q)_∞ (z;q)_∞) · φ(H s)`.
pub fn verify_heine(s: &HeineState<Complex64>, q: &QBase, tol: f64) -> Result<VerificationReport> {
    let inputs = ReportInputs::state(s, q);
    if let Err(reason) = heine_preconditions(s, q) {
        return Ok(VerificationReport::skipped(IdentityName::Heine, inputs, reason));
    }
    let cfg = check_cfg();
    let sb = s.to_balls();
    let lhs = phi_balls(&sb, q, &cfg)?;
    let transformed = phi_balls(&apply_h(&sb), q, &cfg)?;
    let prefactor = (qpoch_ball(sb.b, q, &cfg)? * qpoch_ball(sb.a * sb.z, q, &cfg)?)
        / (qpoch_ball(sb.c, q, &cfg)? * qpoch_ball(sb.z, q, &cfg)?);
    let rhs = certified(prefactor * transformed.ball(), transformed.terms_used)?;
    Ok(VerificationReport::evaluated(IdentityName::Heine, inputs, lhs, rhs, None, tol))
}

/// `φ(H² s)` against `(c;q)_∞ (z;q)_∞ / ((c/b;q)_∞ (bz;q)_∞) · φ(s)`.
pub fn verify_heine_squared(
    s: &HeineState<Complex64>,
    q: &QBase,
    tol: f64,
) -> Result<VerificationReport> {
    let inputs = ReportInputs::state(s, q);
    if let Err(reason) = heine_squared_preconditions(s, q) {
        return Ok(VerificationReport::skipped(IdentityName::HeineSquared, inputs, reason));
    }
    let cfg = check_cfg();
    let sb = s.to_balls();
    let squared = apply(GroupElement::new(false, 2), &sb);
    let lhs = phi_balls(&squared, q, &cfg)?;
    let base = phi_balls(&sb, q, &cfg)?;
    let prefactor = (qpoch_ball(sb.c, q, &cfg)? * qpoch_ball(sb.z, q, &cfg)?)
        / (qpoch_ball(sb.c / sb.b, q, &cfg)? * qpoch_ball(sb.b * sb.z, q, &cfg)?);
    let rhs = certified(prefactor * base.ball(), base.terms_used)?;
    Ok(VerificationReport::evaluated(
        IdentityName::HeineSquared,
        inputs,
        lhs,
        rhs,
        None,
        tol,
    ))
}

/// `(z;q)_∞ φ(a, b; c; z)` against `(abz/c;q)_∞ φ(c/b, c/a; c; abz/c)`.
pub fn verify_q_euler(s: &HeineState<Complex64>, q: &QBase, tol: f64) -> Result<VerificationReport> {
    let inputs = ReportInputs::state(s, q);
    if let Err(reason) = q_euler_preconditions(s, q) {
        return Ok(VerificationReport::skipped(IdentityName::QEuler, inputs, reason));
    }
    let cfg = check_cfg();
    let sb = s.to_balls();
    let cubed = apply(GroupElement::H3, &sb);
    let lhs = qpoch_ball(sb.z, q, &cfg)? * phi_balls(&sb, q, &cfg)?.ball();
    let right_series = phi_balls(&cubed, q, &cfg)?;
    let rhs = qpoch_ball(cubed.z, q, &cfg)? * right_series.ball();
    Ok(VerificationReport::evaluated(
        IdentityName::QEuler,
        inputs,
        certified(lhs, 0)?,
        certified(rhs, right_series.terms_used)?,
        None,
        tol,
    ))
}

/// `φ(a, b; c; c/ab)` against `(c/a;q)_∞ (c/b;q)_∞ / ((c;q)_∞ (c/ab;q)_∞)`.
pub fn verify_q_gauss(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    tol: f64,
) -> Result<VerificationReport> {
    let inputs = ReportInputs::upper_lower(a, b, c, q);
    HeineState::new(a, b, c, Complex64::new(1.0, 0.0))?;
    if !(c.norm() < (a * b).norm()) {
        return Err(QError::DomainError(format!(
            "q-Gauss summation requires |c| < |ab|, got |c| = {} and |ab| = {}",
            c.norm(),
            (a * b).norm()
        )));
    }
    let cfg = check_cfg();
    let (a, b, c) = (Ball::exact(a), Ball::exact(b), Ball::exact(c));
    let z = c / (a * b);
    let lhs = phi_balls(&HeineState::from_parts(a, b, c, z), q, &cfg)?;
    let rhs = (qpoch_ball(c / a, q, &cfg)? * qpoch_ball(c / b, q, &cfg)?)
        / (qpoch_ball(c, q, &cfg)? * qpoch_ball(z, q, &cfg)?);
    Ok(VerificationReport::evaluated(
        IdentityName::QGauss,
        inputs,
        lhs,
        certified(rhs, 4)?,
        None,
        tol,
    ))
}

/// The q-Gauss value reached along the three classical routes.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRoutes {
    /// Closed product `(c/a)(c/b) / ((c)(c/ab))`.
    pub closed: CertifiedValue,
    /// Heine transformation at `z = c/ab`, then the q-binomial series (needs `|b| < 1`).
    pub binomial_route: Option<CertifiedValue>,
    /// Squared Heine transformation at `z = c/ab`, where `φ(b, 1; c/a; c/b) = 1` (needs `|c/b| < 1`).
    pub square_route: Option<CertifiedValue>,
    /// q-Euler transformation followed by the radial limit `z ↑ 1`.
    pub limit_route: CertifiedValue,
}

pub fn q_gauss_routes(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
) -> Result<GaussRoutes> {
    q_gauss_preconditions(a, b, c, q).map_err(QError::DomainError)?;
    let cfg = check_cfg();
    let (ab, bb, cb) = (Ball::exact(a), Ball::exact(b), Ball::exact(c));
    let z = cb / (ab * bb);
    let (pc, pz) = (qpoch_ball(cb, q, &cfg)?, qpoch_ball(z, q, &cfg)?);
    let closed = certified(
        (qpoch_ball(cb / ab, q, &cfg)? * qpoch_ball(cb / bb, q, &cfg)?) / (pc * pz),
        4,
    )?;

    let binomial_route = if b.norm() < 1.0 {
        // φ(c/ab, c/b; c/b; b) is the q-binomial series with u = c/ab
        let series = qbinomial_sum(z, bb, q, &cfg)?;
        let prefactor = (qpoch_ball(bb, q, &cfg)? * qpoch_ball(cb / bb, q, &cfg)?) / (pc * pz);
        Some(certified(prefactor * series.ball(), series.terms_used)?)
    } else {
        None
    };

    let square_route = if (c / b).norm() < 1.0 && lower_ok(c / a, q) {
        let s = HeineState::from_parts(ab, bb, cb, z);
        let squared = apply(GroupElement::new(false, 2), &s);
        let series = phi_balls(&squared, q, &cfg)?;
        let prefactor = (qpoch_ball(cb / bb, q, &cfg)? * qpoch_ball(bb * z, q, &cfg)?) / (pc * pz);
        Some(certified(prefactor * series.ball(), series.terms_used)?)
    } else {
        None
    };

    let via_limit = verify_gauss_via_limit(a, b, c, q, depth)?;
    let limit_route = via_limit.rhs.expect("evaluated report carries both sides");
    Ok(GaussRoutes {
        closed,
        binomial_route,
        square_route,
        limit_route,
    })
}

fn exact_report(
    identity: IdentityName,
    m: u32,
    q: &ExactRational,
    b: Option<&ExactRational>,
    c: Option<&ExactRational>,
    z: Option<&ExactRational>,
    check: exact::TerminatingCheck,
) -> VerificationReport {
    let f = |x: &ExactRational| exact::to_ball(x).mid;
    let inputs = ReportInputs {
        b: b.map(f),
        c: c.map(f),
        z: z.map(f),
        q: Some(f(q)),
        m: Some(m),
        ..Default::default()
    };
    VerificationReport {
        identity,
        inputs,
        lhs: None,
        rhs: None,
        reference: None,
        exact: Some(ExactSides {
            q: q.to_string(),
            b: b.map(ToString::to_string),
            c: c.map(ToString::to_string),
            z: z.map(ToString::to_string),
            lhs: check.lhs.to_string(),
            rhs: check.rhs.to_string(),
        }),
        residual: Some(if check.equal { 0.0 } else { 1.0 }),
        threshold: 0.0,
        pass: check.equal,
        skipped: false,
        skip_reason: None,
    }
}

/// Exact terminating q-Gauss check, as a report.
pub fn verify_gauss_exact(
    m: u32,
    q: &ExactRational,
    b: &ExactRational,
    c: &ExactRational,
) -> Result<VerificationReport> {
    let check = exact::verify_terminating_qgauss(m, q, b, c)?;
    Ok(exact_report(IdentityName::GaussExact, m, q, Some(b), Some(c), None, check))
}

/// Exact terminating q-binomial check, as a report.
pub fn verify_binomial_exact(
    m: u32,
    z: &ExactRational,
    q: &ExactRational,
) -> Result<VerificationReport> {
    let check = exact::verify_terminating_qbinomial(m, z, q)?;
    Ok(exact_report(IdentityName::BinomialExact, m, q, None, None, Some(z), check))
}
