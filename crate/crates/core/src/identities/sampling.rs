//! Random inputs from the safe region used by sweeps and property checks:
//! `|q| ≤ 0.8`, parameters with `0.05 ≤ |·| ≤ 0.95`, each identity's
//! preconditions enforced by rejection.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;

use super::{
    heine_preconditions, heine_squared_preconditions, q_euler_preconditions,
    q_gauss_preconditions, IdentityName,
};
use crate::exact::ExactRational;
use crate::qnum::{check_lower_parameter, HeineState, QBase, DEFAULT_LOWER_EPS};

pub const PARAM_MIN: f64 = 0.05;
pub const PARAM_MAX: f64 = 0.95;
pub const Q_MIN: f64 = 0.05;
pub const Q_MAX: f64 = 0.8;
/// Upper bound on `|b|` and `|z|` for the Heine transformation samples.
pub const HEINE_MAX: f64 = 0.9;
/// Derived series variables (`c/b`, `abz/c`, `c/ab`) are kept at or below this modulus.
pub const DERIVED_MAX: f64 = 0.95;
pub const MAX_ATTEMPTS: usize = 10_000;

/// A sampled input for one identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Sample {
    Binomial { u: Complex64, z: Complex64, q: QBase },
    State { state: HeineState<Complex64>, q: QBase },
    Upper { a: Complex64, b: Complex64, c: Complex64, q: QBase },
    GaussExact { m: u32, q: ExactRational, b: ExactRational, c: ExactRational },
    BinomialExact { m: u32, z: ExactRational, q: ExactRational },
}

/// Where sampled values come from.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub real_only: bool,
    /// Fixed base; sampled from the safe annulus when `None`.
    pub q: Option<Complex64>,
    /// Exact value of a fixed real base, for the rational checks.
    pub exact_q: Option<ExactRational>,
    pub max_m: u32,
}

impl Default for Region {
    fn default() -> Self {
        Region {
            real_only: false,
            q: None,
            exact_q: None,
            max_m: crate::exact::DEFAULT_MAX_M,
        }
    }
}

pub struct Sampler<'a, R: Rng> {
    pub rng: &'a mut R,
    pub region: Region,
    /// Draws rejected for failing a precondition.
    pub rejected: usize,
}

impl<'a, R: Rng> Sampler<'a, R> {
    pub fn new(rng: &'a mut R, region: Region) -> Self {
        Sampler {
            rng,
            region,
            rejected: 0,
        }
    }

    fn scalar(&mut self, lo: f64, hi: f64) -> Complex64 {
        let r = self.rng.gen_range(lo..=hi);
        if self.region.real_only {
            if self.rng.gen_bool(0.5) {
                Complex64::new(r, 0.0)
            } else {
                Complex64::new(-r, 0.0)
            }
        } else {
            Complex64::from_polar(r, self.rng.gen_range(0.0..TAU))
        }
    }

    fn param(&mut self) -> Complex64 {
        self.scalar(PARAM_MIN, PARAM_MAX)
    }

    fn base(&mut self) -> QBase {
        let q = match self.region.q {
            Some(q) => q,
            None => self.scalar(Q_MIN, Q_MAX),
        };
        QBase::new(q).expect("sampled base lies in the safe disc")
    }

    fn retry<T>(&mut self, mut draw: impl FnMut(&mut Self) -> Option<T>) -> Option<T> {
        for _ in 0..MAX_ATTEMPTS {
            if let Some(v) = draw(self) {
                return Some(v);
            }
            self.rejected += 1;
        }
        None
    }

    pub fn heine_state(&mut self) -> Option<(HeineState<Complex64>, QBase)> {
        self.retry(|s| {
            let q = s.base();
            let (a, c) = (s.param(), s.param());
            let (b, z) = (s.scalar(PARAM_MIN, HEINE_MAX), s.scalar(PARAM_MIN, HEINE_MAX));
            let state = HeineState::new(a, b, c, z).ok()?;
            heine_preconditions(&state, &q).ok()?;
            Some((state, q))
        })
    }

    pub fn heine_squared_state(&mut self) -> Option<(HeineState<Complex64>, QBase)> {
        self.retry(|s| {
            let q = s.base();
            let state = HeineState::new(s.param(), s.param(), s.param(), s.param()).ok()?;
            if (state.c / state.b).norm() > DERIVED_MAX {
                return None;
            }
            heine_squared_preconditions(&state, &q).ok()?;
            Some((state, q))
        })
    }

    pub fn q_euler_state(&mut self) -> Option<(HeineState<Complex64>, QBase)> {
        self.retry(|s| {
            let q = s.base();
            let state = HeineState::new(s.param(), s.param(), s.param(), s.param()).ok()?;
            if (state.a * state.b * state.z / state.c).norm() > DERIVED_MAX {
                return None;
            }
            q_euler_preconditions(&state, &q).ok()?;
            Some((state, q))
        })
    }

    /// `(state, q)` where every orbit image that converges is usable; no filter.
    pub fn any_state(&mut self) -> (HeineState<Complex64>, QBase) {
        let q = self.base();
        let state = HeineState::new(self.param(), self.param(), self.param(), self.param())
            .expect("safe-region entries are nonzero");
        (state, q)
    }

    pub fn gauss_parameters(&mut self) -> Option<(Complex64, Complex64, Complex64, QBase)> {
        self.retry(|s| {
            let q = s.base();
            let (a, b, c) = (s.param(), s.param(), s.param());
            if (c / (a * b)).norm() > DERIVED_MAX {
                return None;
            }
            q_gauss_preconditions(a, b, c, &q).ok()?;
            Some((a, b, c, q))
        })
    }

    pub fn abel_parameters(&mut self) -> Option<(Complex64, Complex64, Complex64, QBase)> {
        self.retry(|s| {
            let q = s.base();
            let (a, b, c) = (s.param(), s.param(), s.param());
            check_lower_parameter(c, &q, DEFAULT_LOWER_EPS).then_some((a, b, c, q))
        })
    }

    pub fn binomial_parameters(&mut self) -> (Complex64, Complex64, QBase) {
        let q = self.base();
        (self.param(), self.param(), q)
    }

    /// A nonzero rational `p/d` with `|p/d| <= num_max/den_max`-ish, `d ≤ 12`.
    fn small_rational(&mut self, max_abs: f64) -> ExactRational {
        loop {
            let d: i64 = self.rng.gen_range(2..=12);
            let bound = (max_abs * d as f64).floor() as i64;
            if bound < 1 {
                continue;
            }
            let mut p: i64 = self.rng.gen_range(1..=bound);
            if self.rng.gen_bool(0.5) {
                p = -p;
            }
            return BigRational::new(p.into(), d.into());
        }
    }

    fn exact_base(&mut self) -> Option<ExactRational> {
        if let Some(q) = &self.region.exact_q {
            return Some(q.clone());
        }
        match self.region.q {
            Some(q) if q.im == 0.0 => BigRational::from_float(q.re),
            Some(_) => None,
            None => Some(self.small_rational(0.75)),
        }
    }

    pub fn gauss_exact(&mut self) -> Option<(u32, ExactRational, ExactRational, ExactRational)> {
        let q = self.exact_base()?;
        let m = self.rng.gen_range(0..=self.region.max_m);
        let b = self.small_rational(0.95);
        let c = self.small_rational(0.95);
        Some((m, q, b, c))
    }

    pub fn binomial_exact(&mut self) -> Option<(u32, ExactRational, ExactRational)> {
        let q = self.exact_base()?;
        let m = self.rng.gen_range(0..=self.region.max_m);
        let z = self.small_rational(0.95);
        Some((m, z, q))
    }

    /// One input for `identity`, or `None` when the region admits none.
    pub fn sample(&mut self, identity: IdentityName) -> Option<Sample> {
        match identity {
            IdentityName::QBinomial => {
                let (u, z, q) = self.binomial_parameters();
                Some(Sample::Binomial { u, z, q })
            }
            IdentityName::Heine => self.heine_state().map(|(state, q)| Sample::State { state, q }),
            IdentityName::HeineSquared => self
                .heine_squared_state()
                .map(|(state, q)| Sample::State { state, q }),
            IdentityName::QEuler => self.q_euler_state().map(|(state, q)| Sample::State { state, q }),
            IdentityName::QGauss | IdentityName::GaussLimit => self
                .gauss_parameters()
                .map(|(a, b, c, q)| Sample::Upper { a, b, c, q }),
            IdentityName::Abel => self
                .abel_parameters()
                .map(|(a, b, c, q)| Sample::Upper { a, b, c, q }),
            IdentityName::GaussExact => self
                .gauss_exact()
                .map(|(m, q, b, c)| Sample::GaussExact { m, q, b, c }),
            IdentityName::BinomialExact => self
                .binomial_exact()
                .map(|(m, z, q)| Sample::BinomialExact { m, z, q }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = Sampler::new(&mut rng, Region::default());
        for _ in 0..50 {
            let (state, q) = s.heine_state().unwrap();
            assert!(state.b.norm() <= HEINE_MAX && state.z.norm() <= HEINE_MAX);
            assert!(q.modulus() <= Q_MAX);
            let (a, b, c, _) = s.gauss_parameters().unwrap();
            assert!(c.norm() < (a * b).norm());
        }
    }

    #[test]
    fn real_only_region_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let region = Region {
            real_only: true,
            ..Region::default()
        };
        let mut s = Sampler::new(&mut rng, region);
        let (state, q) = s.any_state();
        assert_eq!((state.a.im, state.b.im, state.c.im, state.z.im, q.value().im), (0.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn exact_samples_need_real_rational_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let region = Region {
            q: Some(Complex64::new(0.3, 0.1)),
            ..Region::default()
        };
        let mut s = Sampler::new(&mut rng, region);
        assert!(s.gauss_exact().is_none());
    }
}
