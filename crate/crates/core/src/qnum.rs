//! q-Pochhammer symbols and the series ₂φ₁ with certified truncation bounds.
//!
//! All certified routines run in [`Ball`] arithmetic, so the returned
//! `error_bound` covers both the truncated tail and every rounding error
//! committed along the way. Point inputs (`Complex64`, `f64`) are treated as
//! exact; ball inputs carry their own uncertainty through the evaluation.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::ball::{inflate, Ball, UNIT_ROUNDOFF};
use crate::error::{QError, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
pub const DEFAULT_BASE_MARGIN: f64 = 1e-12;
pub const DEFAULT_LOWER_EPS: f64 = 1e-9;

/// The base `q`, validated to lie strictly inside the unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase {
    q: Complex64,
}

impl QBase {
    pub fn new(q: Complex64) -> Result<Self> {
        Self::with_margin(q, DEFAULT_BASE_MARGIN)
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    pub fn with_margin(q: Complex64, margin: f64) -> Result<Self> {
        let modulus = q.norm();
        if !(modulus < 1.0 - margin) {
            return Err(QError::InvalidBase { modulus, margin });
        }
        Ok(QBase { q })
    }

    pub fn value(&self) -> Complex64 {
        self.q
    }

    pub fn modulus(&self) -> f64 {
        self.q.norm()
    }

    fn ball(&self) -> Ball {
        Ball::exact(self.q)
    }
}

/// A point `(a, b; c; z)` of the parameter-variable space: four nonzero entries.
///
/// The scalar type is generic so the same state maps can run over complex
/// floats, complex balls, or exact rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeineState<T = Complex64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub z: T,
}

impl<T: Zero> HeineState<T> {
    pub fn new(a: T, b: T, c: T, z: T) -> Result<Self> {
        for (slot, v) in [("a", &a), ("b", &b), ("c", &c), ("z", &z)] {
            if v.is_zero() {
                return Err(QError::ZeroEntry { slot });
            }
        }
        Ok(HeineState { a, b, c, z })
    }
}

impl<T> HeineState<T> {
    /// Build a state without the nonzero check. Used by the group action,
    /// whose maps send nonzero entries to nonzero entries.
    pub(crate) fn from_parts(a: T, b: T, c: T, z: T) -> Self {
        HeineState { a, b, c, z }
    }

    pub fn map<S>(&self, mut f: impl FnMut(&T) -> S) -> HeineState<S> {
        HeineState {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            z: f(&self.z),
        }
    }
}

impl HeineState<Complex64> {
    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Result<Self> {
        let r = |x| Complex64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(z))
    }
}

impl<T: Copy + Into<Ball>> HeineState<T> {
    pub fn to_balls(&self) -> HeineState<Ball> {
        self.map(|&v| v.into())
    }
}

impl HeineState<Ball> {
    pub fn midpoints(&self) -> HeineState<Complex64> {
        self.map(|v| v.mid)
    }
}

/// A value together with a rigorous absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertifiedValue {
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    pub error_bound: f64,
    pub terms_used: usize,
}

impl CertifiedValue {
    pub fn exact(value: Complex64) -> Self {
        CertifiedValue {
            value,
            error_bound: 0.0,
            terms_used: 0,
        }
    }

    pub(crate) fn from_ball(ball: Ball, terms_used: usize) -> Result<Self> {
        if !ball.is_finite() {
            return Err(QError::DivisionByZero(
                "evaluation produced an unbounded enclosure".into(),
            ));
        }
        Ok(CertifiedValue {
            value: ball.mid,
            error_bound: ball.rad,
            terms_used,
        })
    }

    pub fn ball(&self) -> Ball {
        Ball::new(self.value, self.error_bound)
    }

    /// Whether `w` lies within the certified enclosure.
    pub fn encloses(&self, w: Complex64) -> bool {
        self.ball().contains(w)
    }
}

/// Knobs shared by the certified evaluators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    /// Target for the truncation part of the error bound.
    pub tol: f64,
    pub max_terms: usize,
    /// Compensated (Neumaier) summation of series terms.
    pub compensated: bool,
    /// Absolute tolerance of the lower-parameter check.
    pub lower_eps: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
            compensated: false,
            lower_eps: DEFAULT_LOWER_EPS,
        }
    }
}

impl EvalConfig {
    pub fn with_tol(tol: f64) -> Self {
        EvalConfig {
            tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(QError::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// `(x; q)_n`, the plain floating-point product.
pub fn qpoch_finite(x: Complex64, q: &QBase, n: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        prod *= Complex64::new(1.0, 0.0) - x * qk;
        qk *= q.value();
    }
    prod
}

/// `(x; q)_n` in ball arithmetic.
pub fn qpoch_finite_certified(x: impl Into<Ball>, q: &QBase, n: usize) -> CertifiedValue {
    let x = x.into();
    let qb = q.ball();
    let mut prod = Ball::ONE;
    let mut qk = Ball::ONE;
    for _ in 0..n {
        prod = prod * (Ball::ONE - x * qk);
        qk = qk * qb;
    }
    CertifiedValue {
        value: prod.mid,
        error_bound: prod.rad,
        terms_used: n,
    }
}

/// `(x; q)_∞` with truncation error below `tol`.
pub fn qpoch_infinite(x: impl Into<Ball>, q: &QBase, tol: f64) -> Result<CertifiedValue> {
    qpoch_infinite_with(x, q, &EvalConfig::with_tol(tol))
}

pub fn qpoch_infinite_with(
    x: impl Into<Ball>,
    q: &QBase,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    cfg.validate()?;
    let x = x.into();
    let qb = q.ball();
    let one_minus_q = (1.0 - q.modulus()) * (1.0 - 4.0 * UNIT_ROUNDOFF);
    let x_abs = x.abs_upper();

    let mut prod = Ball::ONE;
    let mut qk = Ball::ONE;
    for k in 0..=cfg.max_terms {
        if prod.is_exact_zero() {
            return CertifiedValue::from_ball(prod, k);
        }
        // after K factors the tail satisfies |T - 1| <= exp(2t) - 1 once
        // t = |x||q|^K / (1 - |q|) <= 1/2
        let t = inflate(x_abs * qk.abs_upper() / one_minus_q);
        if t <= 0.5 {
            let trunc = inflate(prod.abs_upper() * inflate((2.0 * t).exp_m1()));
            if trunc <= 0.5 * cfg.tol {
                return CertifiedValue::from_ball(prod.with_extra_radius(trunc), k);
            }
        }
        if k == cfg.max_terms {
            break;
        }
        prod = prod * (Ball::ONE - x * qk);
        qk = qk * qb;
    }
    Err(QError::NonConvergentTolerance {
        tol: cfg.tol,
        limit: cfg.max_terms,
    })
}

/// `false` iff `c q^N` is within `eps` of 1 for some `N >= 0`.
///
/// Only indices with `|c||q|^N >= 1 - eps` can come close, and there are
/// finitely many of them.
pub fn check_lower_parameter(c: Complex64, q: &QBase, eps: f64) -> bool {
    let c_abs = c.norm();
    let mut qn = Complex64::new(1.0, 0.0);
    loop {
        if c_abs * qn.norm() < 1.0 - eps {
            return true;
        }
        if (c * qn - 1.0).norm() <= eps {
            return false;
        }
        qn *= q.value();
    }
}

fn require_lower_parameter(c: Complex64, q: &QBase, eps: f64) -> Result<()> {
    if check_lower_parameter(c, q, eps) {
        Ok(())
    } else {
        Err(QError::ForbiddenLowerParameter { re: c.re, im: c.im })
    }
}

/// Running sum of ball terms, optionally compensated.
struct SeriesAccumulator {
    compensated: bool,
    sum: Ball,
    // compensated mode: plain float sum, exact error accumulator, term radii
    s: Complex64,
    comp: Complex64,
    comp_abs: f64,
    rad: f64,
    count: usize,
}

impl SeriesAccumulator {
    fn new(compensated: bool) -> Self {
        SeriesAccumulator {
            compensated,
            sum: Ball::ZERO,
            s: Complex64::new(0.0, 0.0),
            comp: Complex64::new(0.0, 0.0),
            comp_abs: 0.0,
            rad: 0.0,
            count: 0,
        }
    }

    fn push(&mut self, term: Ball) {
        self.count += 1;
        if !self.compensated {
            self.sum = self.sum + term;
            return;
        }
        let (re, e_re) = two_sum(self.s.re, term.mid.re);
        let (im, e_im) = two_sum(self.s.im, term.mid.im);
        self.s = Complex64::new(re, im);
        self.comp += Complex64::new(e_re, e_im);
        self.comp_abs += e_re.abs() + e_im.abs();
        self.rad += term.rad;
    }

    fn finish(&self) -> Ball {
        if !self.compensated {
            return self.sum;
        }
        // accumulating the exact errors in floating point costs at most
        // gamma_n * sum|e_i|; the final addition is recovered exactly
        let n = self.count as f64;
        let gamma = n * UNIT_ROUNDOFF / (1.0 - n * UNIT_ROUNDOFF);
        let comp_err = gamma * self.comp_abs;
        let (re, e_re) = two_sum(self.s.re, self.comp.re);
        let (im, e_im) = two_sum(self.s.im, self.comp.im);
        Ball::new(
            Complex64::new(re, im),
            inflate(self.rad + comp_err + e_re.abs() + e_im.abs()),
        )
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    ((s), (a - (s - bb)) + (b - bb))
}

/// Sum `Σ t_n` where `t_0 = 1` and `t_{n+1} = t_n · ratio(q^n)`.
///
/// `ratio_bound(Q)` must return an upper bound on `|t_{m+1}/t_m|` valid for
/// every `m >= n` whenever `Q >= |q|^n`, or `None` if no bound is available
/// yet. Summation stops once `|t_n| r / (1 - r) <= tol / 2` with `r < 1`.
fn sum_ratio_series(
    q: &QBase,
    cfg: &EvalConfig,
    mut ratio: impl FnMut(Ball) -> Ball,
    ratio_bound: impl Fn(f64) -> Option<f64>,
) -> Result<CertifiedValue> {
    let qb = q.ball();
    let mut acc = SeriesAccumulator::new(cfg.compensated);
    let mut term = Ball::ONE;
    let mut qn = Ball::ONE;
    for n in 0..cfg.max_terms {
        acc.push(term);
        if term.is_exact_zero() {
            // every later term is a multiple of this one
            return CertifiedValue::from_ball(acc.finish(), n + 1);
        }
        if !term.is_finite() {
            return Err(QError::DivisionByZero(format!(
                "series term {n} has an unbounded enclosure"
            )));
        }
        if let Some(r) = ratio_bound(qn.abs_upper()) {
            if r < 1.0 {
                let tail = inflate(term.abs_upper() * r / ((1.0 - r) * (1.0 - 2.0 * UNIT_ROUNDOFF)));
                if tail <= 0.5 * cfg.tol {
                    return CertifiedValue::from_ball(acc.finish().with_extra_radius(tail), n + 1);
                }
            }
        }
        term = term * ratio(qn);
        qn = qn * qb;
    }
    Err(QError::NonConvergentTolerance {
        tol: cfg.tol,
        limit: cfg.max_terms,
    })
}

/// The series ₂φ₁(a, b; c; q, z).
pub fn phi<T: Copy + Into<Ball>>(s: &HeineState<T>, q: &QBase, tol: f64) -> Result<CertifiedValue> {
    phi_with(s, q, &EvalConfig::with_tol(tol))
}

pub fn phi_with<T: Copy + Into<Ball>>(
    s: &HeineState<T>,
    q: &QBase,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    phi_balls(&s.to_balls(), q, cfg)
}

/// `φ` at raw ball parameters. Unlike [`phi`] this accepts `z = 0` (the series is 1).
pub(crate) fn phi_balls(s: &HeineState<Ball>, q: &QBase, cfg: &EvalConfig) -> Result<CertifiedValue> {
    cfg.validate()?;
    let HeineState { a, b, c, z } = *s;
    let z_abs = z.abs_upper();
    if !(z_abs < 1.0) {
        return Err(QError::DomainError(format!(
            "series variable must satisfy |z| < 1, got |z| = {}",
            z.mid.norm()
        )));
    }
    require_lower_parameter(c.mid, q, cfg.lower_eps)?;
    if a.is_exact_one() || b.is_exact_one() || z.is_exact_zero() {
        return Ok(CertifiedValue {
            value: Complex64::new(1.0, 0.0),
            error_bound: 0.0,
            terms_used: 1,
        });
    }

    let qb = q.ball();
    let (a_abs, b_abs, c_abs) = (a.abs_upper(), b.abs_upper(), c.abs_upper());
    let q_abs = qb.abs_upper();
    sum_ratio_series(
        q,
        cfg,
        |qn| {
            let num = (Ball::ONE - a * qn) * (Ball::ONE - b * qn) * z;
            let den = (Ball::ONE - c * qn) * (Ball::ONE - qn * qb);
            num / den
        },
        |qn_abs| {
            let cq = c_abs * qn_abs;
            if cq >= 1.0 {
                return None;
            }
            // grouped so that swapping a and b gives the same bits
            let num = z_abs * ((1.0 + a_abs * qn_abs) * (1.0 + b_abs * qn_abs));
            let den = (1.0 - cq) * (1.0 - q_abs * qn_abs);
            Some(inflate(inflate(num) / (den * (1.0 - 8.0 * UNIT_ROUNDOFF))))
        },
    )
}

/// The q-binomial series `Σ (u;q)_n z^n / (q;q)_n`.
pub fn qbinomial_sum(
    u: impl Into<Ball>,
    z: impl Into<Ball>,
    q: &QBase,
    cfg: &EvalConfig,
) -> Result<CertifiedValue> {
    cfg.validate()?;
    let (u, z) = (u.into(), z.into());
    let z_abs = z.abs_upper();
    if !(z_abs < 1.0) {
        return Err(QError::DomainError(format!(
            "q-binomial series requires |z| < 1, got |z| = {}",
            z.mid.norm()
        )));
    }
    let qb = q.ball();
    let (u_abs, q_abs) = (u.abs_upper(), qb.abs_upper());
    sum_ratio_series(
        q,
        cfg,
        |qn| (Ball::ONE - u * qn) * z / (Ball::ONE - qn * qb),
        |qn_abs| {
            let num = z_abs * (1.0 + u_abs * qn_abs);
            let den = 1.0 - q_abs * qn_abs;
            Some(inflate(inflate(num) / (den * (1.0 - 8.0 * UNIT_ROUNDOFF))))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn half() -> QBase {
        QBase::real(0.5).unwrap()
    }

    #[test]
    fn base_must_lie_in_unit_disc() {
        assert!(QBase::real(0.999).is_ok());
        assert!(matches!(QBase::real(1.0), Err(QError::InvalidBase { .. })));
        assert!(QBase::new(Complex64::new(0.0, -1.0)).is_err());
        assert!(QBase::real(1.0 - 1e-13).is_err());
    }

    #[test]
    fn state_rejects_zero_entries() {
        assert_eq!(
            HeineState::real(0.3, 0.0, 0.5, 0.2),
            Err(QError::ZeroEntry { slot: "b" })
        );
        assert!(HeineState::real(0.3, 0.4, 0.5, 0.2).is_ok());
    }

    #[test]
    fn finite_product_examples() {
        let q = half();
        assert_eq!(qpoch_finite(c(123.0), &q, 0), c(1.0));
        assert_eq!(qpoch_finite(c(1.0), &q, 1), c(0.0));
        assert_eq!(qpoch_finite(c(1.0), &q, 7), c(0.0));
        assert_eq!(qpoch_finite(c(0.5), &q, 2), c(0.375));
    }

    #[test]
    fn infinite_product_of_zero_and_one() {
        let q = half();
        let one = qpoch_infinite(c(0.0), &q, 1e-12).unwrap();
        assert_eq!(one.value, c(1.0));
        assert_eq!(one.error_bound, 0.0);
        let zero = qpoch_infinite(c(1.0), &q, 1e-12).unwrap();
        assert_eq!(zero.value, c(0.0));
        assert_eq!(zero.error_bound, 0.0);
    }

    #[test]
    fn infinite_product_at_one_half() {
        // 200-factor direct product; remaining tail is below 2^-190
        let direct = qpoch_finite(c(0.5), &half(), 200);
        let v = qpoch_infinite(c(0.5), &half(), 1e-12).unwrap();
        assert!(v.error_bound <= 1e-12);
        assert!((v.value - direct).norm() <= v.error_bound + 1e-15);
        assert!((v.value.re - 0.288_788_095_086_602_4).abs() < 1e-12);
    }

    #[test]
    fn infinite_product_respects_max_terms() {
        let cfg = EvalConfig {
            max_terms: 5,
            ..EvalConfig::default()
        };
        let q = QBase::real(0.9).unwrap();
        assert!(matches!(
            qpoch_infinite_with(c(0.5), &q, &cfg),
            Err(QError::NonConvergentTolerance { limit: 5, .. })
        ));
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        assert!(matches!(
            qpoch_infinite(c(0.5), &half(), 0.0),
            Err(QError::InvalidArgument(_))
        ));
    }

    #[test]
    fn lower_parameter_examples() {
        let q = half();
        assert!(!check_lower_parameter(c(2.0), &q, 1e-9));
        assert!(check_lower_parameter(c(0.3), &q, 1e-9));
        assert!(!check_lower_parameter(c(1.0), &q, 1e-9));
        assert!(!check_lower_parameter(c(8.0), &q, 1e-9));
        assert!(check_lower_parameter(c(3.0), &q, 1e-9));
        assert!(check_lower_parameter(c(2.0), &QBase::real(0.0).unwrap(), 1e-9));
    }

    #[test]
    fn phi_collapses_when_upper_parameter_is_one() {
        let s = HeineState::real(1.0, 0.7, 0.3, 0.5).unwrap();
        let v = phi(&s, &half(), 1e-12).unwrap();
        assert_eq!(v.value, c(1.0));
        assert_eq!(v.error_bound, 0.0);
    }

    #[test]
    fn phi_rejects_outside_disc_and_forbidden_c() {
        let q = half();
        let s = HeineState::real(0.3, 0.4, 0.5, 1.0).unwrap();
        assert!(matches!(phi(&s, &q, 1e-12), Err(QError::DomainError(_))));
        let s = HeineState::real(0.3, 0.4, 4.0, 0.5).unwrap();
        assert!(matches!(
            phi(&s, &q, 1e-12),
            Err(QError::ForbiddenLowerParameter { .. })
        ));
    }

    #[test]
    fn phi_with_a_equal_c_is_q_binomial() {
        let q = half();
        let s = HeineState::real(0.3, 0.4, 0.3, 0.5).unwrap();
        let v = phi(&s, &q, 1e-13).unwrap();
        let num = qpoch_infinite(c(0.2), &q, 1e-14).unwrap();
        let den = qpoch_infinite(c(0.5), &q, 1e-14).unwrap();
        let expected = num.ball() / den.ball();
        assert!(v.ball().overlaps(&expected));
        assert!((v.value - expected.mid).norm() < 1e-13);
    }

    #[test]
    fn terminating_series_stops_exactly() {
        // a = q^{-1}: every term past n = 1 vanishes in exact float arithmetic
        let q = half();
        let s = HeineState::real(2.0, 1.0 / 3.0, 0.2, 0.3).unwrap();
        let v = phi(&s, &q, 1e-12).unwrap();
        assert_eq!(v.terms_used, 3);
        assert!((v.value.re - 0.5).abs() <= v.error_bound + 1e-16);
    }

    #[test]
    fn compensated_summation_agrees() {
        let q = QBase::new(Complex64::new(0.6, 0.2)).unwrap();
        let s = HeineState::new(
            Complex64::new(0.7, -0.1),
            Complex64::new(-0.4, 0.5),
            Complex64::new(0.2, 0.3),
            Complex64::new(0.9, 0.05),
        )
        .unwrap();
        let plain = phi(&s, &q, 1e-13).unwrap();
        let comp = phi_with(
            &s,
            &q,
            &EvalConfig {
                tol: 1e-13,
                compensated: true,
                ..EvalConfig::default()
            },
        )
        .unwrap();
        assert!(plain.ball().overlaps(&comp.ball()));
        assert!(comp.error_bound <= plain.error_bound);
    }

    #[test]
    fn q_binomial_terminates_at_u_equal_inverse_q() {
        let q = half();
        let v = qbinomial_sum(c(2.0), c(0.25), &q, &EvalConfig::default()).unwrap();
        assert_eq!(v.value, c(0.5));
    }
}
