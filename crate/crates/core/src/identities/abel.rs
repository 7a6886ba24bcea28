//! Radial limits as `z ↑ 1`.
//!
//! `F(z) = (z;q)_∞ φ(a, b; c; z)` is evaluated in the summed-by-parts form
//! `(zq;q)_∞ · (1 - z) Σ T_n z^n = (zq;q)_∞ · [1 + Σ_{n≥1} (T_n - T_{n-1}) z^n]`
//! with `T_n = (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n)`. The differences decay like
//! `|q|^n` uniformly in `|z| ≤ 1`, so the nodes close to 1 cost no more than
//! those far away. The limit itself is taken by Richardson extrapolation in
//! `h = 1 - z` over the nodes `h_k = 2^{-k}`.

use num_complex::Complex64;

use super::{
    certified, check_cfg, lower_ok, q_gauss_preconditions, qpoch_ball, ReportInputs,
    IdentityName, VerificationReport, DEFAULT_LIMIT_TOL,
};
use crate::ball::{inflate, Ball, UNIT_ROUNDOFF};
use crate::error::{QError, Result};
use crate::qnum::{phi_balls, CertifiedValue, EvalConfig, HeineState, QBase};

pub const DEFAULT_DEPTH: u32 = 20;
const MAX_DEPTH: u32 = 48;

/// `(z;q)_∞ φ(a, b; c; z)` for `|z| ≤ 1`, certified.
pub fn abel_function(
    a: impl Into<Ball>,
    b: impl Into<Ball>,
    c: impl Into<Ball>,
    z: impl Into<Ball>,
    q: &QBase,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    let (a, b, c, z) = (a.into(), b.into(), c.into(), z.into());
    if z.abs_upper() > 1.0 {
        return Err(QError::DomainError(format!(
            "radial evaluation requires |z| <= 1, got |z| = {}",
            z.mid.norm()
        )));
    }
    if !lower_ok(c.mid, q) {
        return Err(QError::DomainError(
            "lower parameter c satisfies c q^N = 1 for some N".into(),
        ));
    }
    if a.is_exact_one() || b.is_exact_one() {
        let v = qpoch_ball(z, q, cfg)?;
        return certified(v, 0);
    }

    let qb = Ball::exact(q.value());
    let q_abs = qb.abs_upper();
    let (a_abs, b_abs, c_abs) = (a.abs_upper(), b.abs_upper(), c.abs_upper());
    // (ρ_n - 1) = p [α0 + β0 p] / ((1 - cp)(1 - qp)), p = q^{n-1}
    let alpha0 = c + qb - a - b;
    let beta0 = a * b - c * qb;
    let (alpha, beta) = (alpha0.abs_upper(), beta0.abs_upper());
    let one_minus_q = (1.0 - q_abs) * (1.0 - 4.0 * UNIT_ROUNDOFF);

    let mut sum = Ball::ONE;
    let mut t = Ball::ONE; // T_{n-1}
    let mut p = Ball::ONE; // q^{n-1}
    let mut zn = Ball::ONE;
    let mut terms = 1;
    loop {
        // tail after the terms up to n - 1, with Q = |q|^{n-1}
        let big_q = p.abs_upper();
        let cq = c_abs * big_q;
        if cq < 1.0 {
            let d_c = (1.0 - cq) * (1.0 - 4.0 * UNIT_ROUNDOFF);
            let d_q = (1.0 - q_abs * big_q) * (1.0 - 4.0 * UNIT_ROUNDOFF);
            let growth = big_q / one_minus_q * (a_abs + b_abs + c_abs / d_c + q_abs / d_q);
            if growth < 700.0 {
                let tail = inflate(
                    t.abs_upper() * inflate(growth.exp()) * (alpha + beta * big_q) / (d_c * d_q)
                        * big_q
                        / one_minus_q,
                );
                if tail <= 0.5 * cfg.tol {
                    let series = sum.with_extra_radius(tail);
                    let prefactor = qpoch_ball(z * qb, q, cfg)?;
                    return certified(prefactor * series, terms);
                }
            }
        }
        if terms >= cfg.max_terms {
            return Err(QError::NonConvergentTolerance {
                tol: cfg.tol,
                limit: cfg.max_terms,
            });
        }
        let rho_minus_one = p * (alpha0 + beta0 * p) / ((Ball::ONE - c * p) * (Ball::ONE - qb * p));
        let delta = t * rho_minus_one;
        zn = zn * z;
        sum = sum + delta * zn;
        t = t + delta;
        p = p * qb;
        terms += 1;
        if !t.is_finite() {
            return Err(QError::DivisionByZero(
                "term ratio has an unbounded enclosure".into(),
            ));
        }
    }
}

/// Richardson extrapolation to `h = 0` of samples taken at `h_k = 2^{-k}`,
/// `k = 1, 2, …`, assuming an expansion in integer powers of `h`.
///
/// Returns the final diagonal entry and the distance between the last two
/// diagonal entries.
pub fn richardson(values: &[Ball]) -> (Ball, f64) {
    assert!(!values.is_empty(), "richardson needs at least one sample");
    let mut prev: Vec<Ball> = Vec::new();
    let mut diagonal = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        let mut row = Vec::with_capacity(k + 1);
        row.push(v);
        for j in 1..=k {
            let factor = Ball::real(((1u64 << j) - 1) as f64);
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / factor;
            row.push(next);
        }
        diagonal.push(row[k]);
        prev = row;
    }
    let last = diagonal[diagonal.len() - 1];
    let estimate = if diagonal.len() >= 2 {
        (last.mid - diagonal[diagonal.len() - 2].mid).norm()
    } else {
        f64::INFINITY
    };
    (last, estimate)
}

fn nodes(depth: u32) -> Result<Vec<Ball>> {
    if !(2..=MAX_DEPTH).contains(&depth) {
        return Err(QError::InvalidArgument(format!(
            "extrapolation depth must lie in 2..={MAX_DEPTH}, got {depth}"
        )));
    }
    Ok((1..=depth)
        .map(|k| Ball::real(1.0 - (-(k as f64)).exp2()))
        .collect())
}

fn extrapolate(samples: Vec<CertifiedValue>) -> CertifiedValue {
    let terms = samples.iter().map(|s| s.terms_used).sum();
    let balls: Vec<Ball> = samples.iter().map(CertifiedValue::ball).collect();
    let (limit, estimate) = richardson(&balls);
    CertifiedValue {
        value: limit.mid,
        error_bound: inflate(limit.rad + estimate),
        terms_used: terms,
    }
}

pub(crate) fn abel_limit_balls(
    a: Ball,
    b: Ball,
    c: Ball,
    q: &QBase,
    depth: u32,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    let samples = nodes(depth)?
        .into_iter()
        .map(|z| abel_function(a, b, c, z, q, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(extrapolate(samples))
}

/// `lim_{z↑1} (z;q)_∞ φ(a, b; c; z)` by extrapolation from `z_k = 1 - 2^{-k}`,
/// `k = 1..=depth`.
///
/// The error bound adds the enclosure of the extrapolated value to the gap
/// between the last two diagonal entries of the table; the latter is an
/// estimate, not a certificate.
pub fn abel_limit(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
) -> Result<CertifiedValue> {
    abel_limit_with(a, b, c, q, depth, &check_cfg())
}

pub fn abel_limit_with(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    abel_limit_balls(a.into(), b.into(), c.into(), q, depth, cfg)
}

/// The radial limit against `(a;q)_∞ (b;q)_∞ / (c;q)_∞`.
pub fn verify_abel(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
    tol: f64,
) -> Result<VerificationReport> {
    let inputs = ReportInputs {
        depth: Some(depth),
        ..ReportInputs::upper_lower(a, b, c, q)
    };
    let cfg = check_cfg();
    let lhs = abel_limit_with(a, b, c, q, depth, &cfg)?;
    let (a, b, c) = (Ball::exact(a), Ball::exact(b), Ball::exact(c));
    let target = qpoch_ball(a, q, &cfg)? * qpoch_ball(b, q, &cfg)? / qpoch_ball(c, q, &cfg)?;
    Ok(VerificationReport::evaluated(
        IdentityName::Abel,
        inputs,
        lhs,
        certified(target, 3)?,
        None,
        tol,
    ))
}

/// q-Gauss through the q-Euler transformation and the radial limit.
///
/// `lhs` extrapolates `(cz/ab;q)_∞ φ(a, b; c; cz/ab)` as `z ↑ 1`, `rhs` is the
/// radial limit of `(z;q)_∞ φ(c/b, c/a; c; z)`, and `reference` is the closed
/// q-Gauss product. The two limits are divided by `(c/ab;q)_∞` so all three
/// values are values of `φ(a, b; c; c/ab)`.
pub fn verify_gauss_via_limit(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
) -> Result<VerificationReport> {
    verify_gauss_via_limit_with(a, b, c, q, depth, DEFAULT_LIMIT_TOL)
}

pub fn verify_gauss_via_limit_with(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: &QBase,
    depth: u32,
    tol: f64,
) -> Result<VerificationReport> {
    let inputs = ReportInputs {
        depth: Some(depth),
        ..ReportInputs::upper_lower(a, b, c, q)
    };
    HeineState::new(a, b, c, Complex64::new(1.0, 0.0))?;
    q_gauss_preconditions(a, b, c, q).map_err(QError::DomainError)?;
    let cfg = check_cfg();
    let (a, b, c) = (Ball::exact(a), Ball::exact(b), Ball::exact(c));
    let ratio = c / (a * b);

    let left = nodes(depth)?
        .into_iter()
        .map(|z| {
            let w = ratio * z;
            let series = phi_balls(&HeineState::from_parts(a, b, c, w), q, &cfg)?;
            certified(qpoch_ball(w, q, &cfg)? * series.ball(), series.terms_used)
        })
        .collect::<Result<Vec<_>>>()?;
    let left = extrapolate(left);
    let right = abel_limit_balls(c / b, c / a, c, q, depth, &cfg)?;

    let norm = qpoch_ball(ratio, q, &cfg)?;
    let reference = (qpoch_ball(c / a, q, &cfg)? * qpoch_ball(c / b, q, &cfg)?)
        / (qpoch_ball(c, q, &cfg)? * norm);
    let lhs = certified(left.ball() / norm, left.terms_used)?;
    let rhs = certified(right.ball() / norm, right.terms_used)?;
    Ok(VerificationReport::evaluated(
        IdentityName::GaussLimit,
        inputs,
        lhs,
        rhs,
        Some(certified(reference, 4)?),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{phi, qpoch_infinite};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn summed_by_parts_form_matches_direct_product() {
        let q = QBase::new(Complex64::new(0.5, 0.1)).unwrap();
        let (a, b, cc) = (Complex64::new(0.3, 0.2), c(-0.4), Complex64::new(0.6, -0.1));
        for z in [0.2, 0.5, 0.9] {
            let f = abel_function(a, b, cc, c(z), &q, &EvalConfig::with_tol(1e-14)).unwrap();
            let s = HeineState::new(a, b, cc, c(z)).unwrap();
            let direct = phi(&s, &q, 1e-14).unwrap().ball()
                * qpoch_infinite(c(z), &q, 1e-14).unwrap().ball();
            assert!(f.ball().overlaps(&direct), "z = {z}: {f:?} vs {direct}");
        }
    }

    #[test]
    fn richardson_is_exact_on_polynomials() {
        let poly = |h: f64| 3.0 - 2.0 * h + 0.5 * h * h - h * h * h;
        let vals: Vec<Ball> = (1..=6).map(|k| Ball::real(poly((-(k as f64)).exp2()))).collect();
        let (limit, est) = richardson(&vals);
        assert!((limit.mid.re - 3.0).abs() < 1e-14);
        assert!(est < 1e-13);
    }

    #[test]
    fn limit_with_a_equal_c_is_b_product() {
        let q = QBase::real(0.5).unwrap();
        let v = abel_limit(c(0.3), c(0.3), c(0.3), &q, DEFAULT_DEPTH).unwrap();
        let target = qpoch_infinite(c(0.3), &q, 1e-15).unwrap();
        assert!((v.value - target.value).norm() <= 1e-10);
    }

    #[test]
    fn limit_vanishes_when_upper_parameter_is_one() {
        let q = QBase::real(0.5).unwrap();
        let v = abel_limit(c(1.0), c(0.4), c(0.6), &q, DEFAULT_DEPTH).unwrap();
        assert!(v.value.norm() < 1e-12);
    }

    #[test]
    fn limit_matches_product_target() {
        let q = QBase::real(0.5).unwrap();
        let r = verify_abel(c(0.3), c(0.4), c(0.6), &q, DEFAULT_DEPTH, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residual.unwrap() <= 1e-6);
    }

    #[test]
    fn depth_is_validated() {
        let q = QBase::real(0.5).unwrap();
        assert!(matches!(
            abel_limit(c(0.3), c(0.4), c(0.6), &q, 1),
            Err(QError::InvalidArgument(_))
        ));
    }

    #[test]
    fn forbidden_lower_parameter_is_domain_error() {
        let q = QBase::real(0.5).unwrap();
        assert!(matches!(
            abel_limit(c(0.3), c(0.4), c(2.0), &q, 10),
            Err(QError::DomainError(_))
        ));
    }

    #[test]
    fn gauss_via_limit_three_way() {
        let q = QBase::real(0.5).unwrap();
        let r = verify_gauss_via_limit(c(0.3), c(0.4), c(0.1), &q, DEFAULT_DEPTH).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residual.unwrap() <= 1e-6);
    }
}
