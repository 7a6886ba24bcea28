//! Exact rational oracle for terminating specializations.
//!
//! With an upper parameter `q^{-m}` the series stop after `m + 1` terms and
//! the infinite products of the closed forms telescope to finite ratios, so
//! both sides of the q-Gauss summation and of the q-binomial series can be
//! computed in exact rational arithmetic and compared for equality.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{inflate, Ball};
use crate::error::{QError, Result};

pub type ExactRational = BigRational;

/// Default cap on the termination order used by sweeps.
pub const DEFAULT_MAX_M: u32 = 15;

pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// Parse `p/q`, an integer, or a decimal literal (optionally with exponent) exactly.
pub fn parse_rational(text: &str) -> Result<ExactRational> {
    let bad = || QError::InvalidArgument(format!("not a rational literal: `{text}`"));
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(QError::DivisionByZero(format!("zero denominator in `{text}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Nearest `f64` together with a ball enclosing the exact value.
pub fn to_ball(x: &ExactRational) -> Ball {
    let f = x.to_f64().unwrap_or(f64::NAN);
    let err = BigRational::from_float(f)
        .map(|fr| (fr - x).abs().to_f64().unwrap_or(f64::INFINITY))
        .unwrap_or(f64::INFINITY);
    Ball::new(Complex64::new(f, 0.0), inflate(err))
}

fn qpow(q: &ExactRational, k: i64) -> ExactRational {
    if k >= 0 {
        num_traits::pow(q.clone(), k as usize)
    } else {
        num_traits::pow(q.recip(), (-k) as usize)
    }
}

/// `(x; q)_n = ∏_{k<n} (1 - x q^k)`, exactly.
pub fn exact_qpoch(x: &ExactRational, q: &ExactRational, n: usize) -> ExactRational {
    let mut prod = BigRational::one();
    let mut qk = BigRational::one();
    for _ in 0..n {
        prod *= BigRational::one() - x * &qk;
        qk *= q;
    }
    prod
}

/// Smallest `m ≤ max_m` with `x q^m = 1`, i.e. `x = q^{-m}`.
pub fn terminating_order(x: &ExactRational, q: &ExactRational, max_m: u32) -> Option<u32> {
    let mut xq = x.clone();
    for m in 0..=max_m {
        if xq.is_one() {
            return Some(m);
        }
        xq *= q;
    }
    None
}

/// `₂φ₁(a, b; c; z)` as an exact finite sum when `a` or `b` is `q^{-m}`
/// with `m ≤ max_m`, or `z = 0`; `None` when the series does not terminate.
pub fn exact_phi(
    a: &ExactRational,
    b: &ExactRational,
    c: &ExactRational,
    z: &ExactRational,
    q: &ExactRational,
    max_m: u32,
) -> Option<Result<ExactRational>> {
    if let Err(e) = require_base(q) {
        return Some(Err(e));
    }
    let m = if z.is_zero() {
        0
    } else {
        match (terminating_order(a, q, max_m), terminating_order(b, q, max_m)) {
            (Some(i), Some(j)) => i.min(j),
            (Some(i), None) | (None, Some(i)) => i,
            (None, None) => return None,
        }
    };
    Some(
        terminating_sum(a, b, c, z, q, m as usize).map_err(|_| QError::ForbiddenLowerParameter {
            re: c.to_f64().unwrap_or(f64::NAN),
            im: 0.0,
        }),
    )
}

/// Outcome of an exact two-sided check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminatingCheck {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub equal: bool,
}

impl TerminatingCheck {
    fn new(lhs: ExactRational, rhs: ExactRational) -> Self {
        let equal = lhs == rhs;
        TerminatingCheck { lhs, rhs, equal }
    }
}

/// `Σ_{n≤m} (a;q)_n (b;q)_n z^n / ((c;q)_n (q;q)_n)`, updating each term
/// from the previous one.
fn terminating_sum(
    a: &ExactRational,
    b: &ExactRational,
    c: &ExactRational,
    z: &ExactRational,
    q: &ExactRational,
    m: usize,
) -> Result<ExactRational> {
    let one = BigRational::one();
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut qn = one.clone();
    for n in 0..m {
        let den = (&one - c * &qn) * (&one - &qn * q);
        let den = nonzero(den, || format!("(c;q)_{} (q;q)_{} vanishes", n + 1, n + 1))?;
        term = term * (&one - a * &qn) * (&one - b * &qn) * z / den;
        sum += &term;
        qn *= q;
    }
    Ok(sum)
}

fn require_base(q: &ExactRational) -> Result<()> {
    if q.is_zero() || q.abs() >= BigRational::one() {
        return Err(QError::InvalidBase {
            modulus: q.abs().to_f64().unwrap_or(f64::NAN),
            margin: 0.0,
        });
    }
    Ok(())
}

fn nonzero(x: ExactRational, what: impl FnOnce() -> String) -> Result<ExactRational> {
    if x.is_zero() {
        Err(QError::DivisionByZero(what()))
    } else {
        Ok(x)
    }
}

/// Terminating q-Gauss summation at `a = q^{-m}`, `z = c q^m / b`:
/// `Σ_{n≤m} (q^{-m};q)_n (b;q)_n / ((c;q)_n (q;q)_n) z^n = (c/b;q)_m / (c;q)_m`.
pub fn verify_terminating_qgauss(
    m: u32,
    q: &ExactRational,
    b: &ExactRational,
    c: &ExactRational,
) -> Result<TerminatingCheck> {
    require_base(q)?;
    if b.is_zero() {
        return Err(QError::ZeroEntry { slot: "b" });
    }
    let m = m as i64;
    let a = qpow(q, -m);
    let z = c * qpow(q, m) / b;

    let lhs = terminating_sum(&a, b, c, &z, q, m as usize)?;
    let cm = nonzero(exact_qpoch(c, q, m as usize), || {
        format!("(c;q)_{m} vanishes")
    })?;
    let rhs = exact_qpoch(&(c / b), q, m as usize) / cm;
    Ok(TerminatingCheck::new(lhs, rhs))
}

/// Terminating q-binomial series at `u = q^{-m}`:
/// `Σ_{n≤m} (q^{-m};q)_n z^n / (q;q)_n = ∏_{k=1}^{m} (1 - z q^{-k})`.
pub fn verify_terminating_qbinomial(
    m: u32,
    z: &ExactRational,
    q: &ExactRational,
) -> Result<TerminatingCheck> {
    require_base(q)?;
    let m = m as i64;
    let u = qpow(q, -m);
    // (q;q)_n in the denominator cancels the lower parameter c = q
    let lhs = terminating_sum(&u, q, q, z, q, m as usize)?;
    let mut rhs = BigRational::one();
    for k in 1..=m {
        rhs *= BigRational::one() - z * qpow(q, -k);
    }
    Ok(TerminatingCheck::new(lhs, rhs))
}
