//! Midpoint-radius complex balls.
//!
//! A [`Ball`] stands for every complex number within `rad` of `mid`. Each
//! arithmetic operation returns a ball that contains every possible result
//! of applying the operation to members of the input balls, including the
//! rounding committed while computing the new midpoint. Rounding errors of
//! additions and multiplications are recovered exactly with error-free
//! transformations, so exact floating-point results keep a zero radius.
//!
//! Underflow and overflow are not tracked; inputs are assumed to stay well
//! inside the normal range of `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Unit roundoff for round-to-nearest binary64.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Inflate a nonnegative bound to absorb rounding in its own computation.
#[inline]
pub(crate) fn inflate(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r * (1.0 + 8.0 * UNIT_ROUNDOFF)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub mid: Complex64,
    pub rad: f64,
}

impl Ball {
    pub const ZERO: Ball = Ball {
        mid: Complex64::new(0.0, 0.0),
        rad: 0.0,
    };
    pub const ONE: Ball = Ball {
        mid: Complex64::new(1.0, 0.0),
        rad: 0.0,
    };

    pub fn new(mid: Complex64, rad: f64) -> Self {
        debug_assert!(rad >= 0.0 || rad.is_nan());
        Ball { mid, rad }
    }

    pub fn exact(mid: Complex64) -> Self {
        Ball { mid, rad: 0.0 }
    }

    pub fn real(x: f64) -> Self {
        Ball::exact(Complex64::new(x, 0.0))
    }

    pub fn is_exact(&self) -> bool {
        self.rad == 0.0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.rad == 0.0 && self.mid.re == 0.0 && self.mid.im == 0.0
    }

    pub fn is_exact_one(&self) -> bool {
        self.rad == 0.0 && self.mid.re == 1.0 && self.mid.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mid.re.is_finite() && self.mid.im.is_finite() && self.rad.is_finite()
    }

    /// Upper bound on `|w|` over the ball.
    pub fn abs_upper(&self) -> f64 {
        inflate(self.mid.norm() + self.rad)
    }

    /// Lower bound on `|w|` over the ball; zero when the ball straddles the origin.
    pub fn abs_lower(&self) -> f64 {
        let lo = self.mid.norm() * (1.0 - 4.0 * UNIT_ROUNDOFF) - inflate(self.rad);
        lo.max(0.0)
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower() == 0.0
    }

    /// Whether `w` lies inside the ball (with the radius read as closed).
    pub fn contains(&self, w: Complex64) -> bool {
        (self.mid - w).norm() <= inflate(self.rad)
    }

    /// Whether two balls may share a point.
    pub fn overlaps(&self, other: &Ball) -> bool {
        (self.mid - other.mid).norm() <= inflate(self.rad + other.rad)
    }

    pub fn with_extra_radius(self, extra: f64) -> Self {
        Ball {
            mid: self.mid,
            rad: inflate(self.rad + extra),
        }
    }

    /// `1 / self`.
    pub fn recip(self) -> Self {
        Ball::ONE / self
    }
}

impl From<Complex64> for Ball {
    fn from(z: Complex64) -> Self {
        Ball::exact(z)
    }
}

impl From<f64> for Ball {
    fn from(x: f64) -> Self {
        Ball::real(x)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ± {:e})", self.mid, self.rad)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            mid: -self.mid,
            rad: self.rad,
        }
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, rhs: Ball) -> Ball {
        let (re, e_re) = two_sum(self.mid.re, rhs.mid.re);
        let (im, e_im) = two_sum(self.mid.im, rhs.mid.im);
        Ball {
            mid: Complex64::new(re, im),
            rad: inflate(self.rad + rhs.rad + (e_re.abs() + e_im.abs())),
        }
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, rhs: Ball) -> Ball {
        self + (-rhs)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, rhs: Ball) -> Ball {
        if self.is_exact_one() {
            return rhs;
        }
        if rhs.is_exact_one() {
            return self;
        }
        let (x, y) = (self.mid, rhs.mid);
        let (p1, e1) = two_prod(x.re, y.re);
        let (p2, e2) = two_prod(x.im, y.im);
        let (re, e3) = two_sum(p1, -p2);
        let (p3, e4) = two_prod(x.re, y.im);
        let (p4, e5) = two_prod(x.im, y.re);
        let (im, e6) = two_sum(p3, p4);
        let rounding = (e1.abs() + e2.abs() + e3.abs()) + ((e4.abs() + e5.abs()) + e6.abs());
        // symmetric in the two operands so that products commute bitwise
        let spread = (x.norm() * rhs.rad + self.rad * y.norm()) + self.rad * rhs.rad;
        Ball {
            mid: Complex64::new(re, im),
            rad: inflate(spread + rounding),
        }
    }
}

impl Div for Ball {
    type Output = Ball;
    fn div(self, rhs: Ball) -> Ball {
        if rhs.is_exact_one() {
            return self;
        }
        let den_lo = rhs.abs_lower();
        if den_lo == 0.0 {
            return Ball {
                mid: Complex64::new(f64::NAN, f64::NAN),
                rad: f64::INFINITY,
            };
        }
        let (x, y) = (self.mid, rhs.mid);
        let (mid, rounding) = if rhs.rad == 0.0 && y.im == 0.0 {
            // real divisor: remainders of both component quotients are exact
            let qr = x.re / y.re;
            let qi = x.im / y.re;
            let rr = qr.mul_add(y.re, -x.re);
            let ri = qi.mul_add(y.re, -x.im);
            (Complex64::new(qr, qi), (rr.abs() + ri.abs()) / y.re.abs())
        } else {
            let m = x / y;
            (m, 16.0 * UNIT_ROUNDOFF * m.norm())
        };
        // |(x+dx)/(y+dy) - x/y| <= (|dx||y| + |x||dy|) / (|y|(|y|-|dy|))
        let y_abs = y.norm();
        let spread = if self.rad == 0.0 && rhs.rad == 0.0 {
            0.0
        } else {
            (self.rad * y_abs + x.norm() * rhs.rad) / (y_abs * den_lo)
        };
        Ball {
            mid,
            rad: inflate(spread + rounding),
        }
    }
}

impl Zero for Ball {
    fn zero() -> Self {
        Ball::ZERO
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
}

impl One for Ball {
    fn one() -> Self {
        Ball::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_operations_keep_zero_radius() {
        let two = Ball::real(2.0);
        let half = Ball::real(0.5);
        let prod = two * half;
        assert!(prod.is_exact_one());
        assert!((Ball::ONE - prod).is_exact_zero());
        assert!((Ball::real(3.0) / Ball::real(4.0)).is_exact());
    }

    #[test]
    fn inexact_division_gets_radius() {
        let third = Ball::ONE / Ball::real(3.0);
        assert!(third.rad > 0.0);
        assert!(third.rad < 1e-16);
    }

    #[test]
    fn product_contains_perturbed_products() {
        let x = Ball::new(c(0.3, -0.7), 1e-6);
        let y = Ball::new(c(-1.2, 0.4), 2e-6);
        let p = x * y;
        for dx in [c(1e-6, 0.0), c(0.0, -1e-6), c(-7e-7, 7e-7)] {
            for dy in [c(2e-6, 0.0), c(0.0, 2e-6), c(-1.4e-6, -1.4e-6)] {
                assert!(p.contains((x.mid + dx) * (y.mid + dy)));
            }
        }
    }

    #[test]
    fn quotient_contains_perturbed_quotients() {
        let x = Ball::new(c(0.3, -0.7), 1e-6);
        let y = Ball::new(c(-1.2, 0.4), 2e-6);
        let r = x / y;
        for dx in [c(1e-6, 0.0), c(0.0, -1e-6)] {
            for dy in [c(2e-6, 0.0), c(0.0, 2e-6), c(-1.4e-6, -1.4e-6)] {
                assert!(r.contains((x.mid + dx) / (y.mid + dy)));
            }
        }
    }

    #[test]
    fn division_by_ball_around_zero_is_unbounded() {
        let r = Ball::ONE / Ball::new(c(1e-9, 0.0), 1e-8);
        assert!(!r.is_finite());
    }

    #[test]
    fn multiplication_commutes_bitwise() {
        let x = Ball::new(c(0.123456789, -0.987654321), 3e-17);
        let y = Ball::new(c(-0.31415926, 0.27182818), 0.0);
        let (p, q) = (x * y, y * x);
        assert_eq!(p.mid.re.to_bits(), q.mid.re.to_bits());
        assert_eq!(p.mid.im.to_bits(), q.mid.im.to_bits());
        assert_eq!(p.rad.to_bits(), q.rad.to_bits());
    }
}
