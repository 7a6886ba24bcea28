//! The Heine group: the dihedral group of order twelve generated by the
//! upper-parameter swap `U` and the Heine operator `H`, acting on states
//! `(a, b; c; z)`, together with its automorphy cocycle.
//!
//! Elements are kept in the normal form `U^u H^i` (`u ∈ {0, 1}`, `i ∈ 0..6`),
//! using the relation `H U = U H^{-1}`. Under this action
//! `φ(g·s) = h_g(s) φ(s)` wherever both series converge, where `h_g` is built
//! from the automorphy factor `h` by the chain rule
//! `h_{g1 g2}(s) = h_{g1}(g2·s) h_{g2}(s)` and `h_U = 1`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_complex::Complex64;

use crate::ball::Ball;
use crate::error::{QError, Result};
use crate::qnum::{
    check_lower_parameter, qpoch_infinite_with, CertifiedValue, EvalConfig, HeineState, QBase,
    DEFAULT_LOWER_EPS,
};

/// Scalars the state maps can run over: anything closed under `*` and `/`.
pub trait StateScalar: Clone + Mul<Output = Self> + Div<Output = Self> {}

impl<T: Clone + Mul<Output = T> + Div<Output = T>> StateScalar for T {}

/// `(a, b; c; z) ↦ (b, a; c; z)`.
pub fn apply_u<T: Clone>(s: &HeineState<T>) -> HeineState<T> {
    HeineState::from_parts(s.b.clone(), s.a.clone(), s.c.clone(), s.z.clone())
}

/// `(a, b; c; z) ↦ (z, c/b; a z; b)`.
pub fn apply_h<T: StateScalar>(s: &HeineState<T>) -> HeineState<T> {
    HeineState::from_parts(
        s.z.clone(),
        s.c.clone() / s.b.clone(),
        s.a.clone() * s.z.clone(),
        s.b.clone(),
    )
}

/// An element `U^u H^i` of the order-12 group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    reflected: bool,
    rotation: u8,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        reflected: false,
        rotation: 0,
    };
    pub const H: GroupElement = GroupElement {
        reflected: false,
        rotation: 1,
    };
    pub const U: GroupElement = GroupElement {
        reflected: true,
        rotation: 0,
    };
    /// `H^3`, the q-Euler transformation; generates the centre.
    pub const H3: GroupElement = GroupElement {
        reflected: false,
        rotation: 3,
    };
    /// `U H`, the customary presentation of the Heine transformation.
    pub const UH: GroupElement = GroupElement {
        reflected: true,
        rotation: 1,
    };

    pub fn new(reflected: bool, rotation: i64) -> Self {
        GroupElement {
            reflected,
            rotation: rotation.rem_euclid(6) as u8,
        }
    }

    pub fn rotation(&self) -> u8 {
        self.rotation
    }

    pub fn is_reflection(&self) -> bool {
        self.reflected
    }

    /// All twelve elements: `e, H, …, H^5, U, UH, …, UH^5`.
    pub fn all() -> [GroupElement; 12] {
        let mut out = [GroupElement::IDENTITY; 12];
        for (k, g) in out.iter_mut().enumerate() {
            *g = GroupElement::new(k >= 6, (k % 6) as i64);
        }
        out
    }

    /// Position in the order of [`GroupElement::all`].
    pub fn index(&self) -> usize {
        self.reflected as usize * 6 + self.rotation as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: GroupElement) -> GroupElement {
        // U^a H^i U^b H^j = U^(a+b) H^(j + (-1)^b i)
        let i = self.rotation as i64;
        let j = other.rotation as i64;
        let rot = if other.reflected { j - i } else { j + i };
        GroupElement::new(self.reflected ^ other.reflected, rot)
    }

    pub fn inverse(self) -> GroupElement {
        if self.reflected {
            self
        } else {
            GroupElement::new(false, -(self.rotation as i64))
        }
    }

    pub fn pow(self, n: u32) -> GroupElement {
        (0..n).fold(GroupElement::IDENTITY, |acc, _| acc.compose(self))
    }

    /// Smallest `n >= 1` with `self^n = e`.
    pub fn order(self) -> u32 {
        (1..=12)
            .find(|&n| self.pow(n) == GroupElement::IDENTITY)
            .expect("every element has order dividing 12")
    }

    pub fn name(&self) -> String {
        let mut s = String::new();
        if self.reflected {
            s.push('U');
        }
        match self.rotation {
            0 if !self.reflected => s.push('e'),
            0 => {}
            1 => s.push('H'),
            r => {
                s.push('H');
                s.push_str(&r.to_string());
            }
        }
        s
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GroupElement {
    type Err = QError;

    /// Accepts `e`, `H`, `H3`, `H^3`, `U`, `UH2`, `UH^5`, ...
    fn from_str(s: &str) -> Result<Self> {
        let bad = || QError::InvalidArgument(format!("unknown group element `{s}`"));
        let t = s.trim();
        if t == "e" || t == "1" {
            return Ok(GroupElement::IDENTITY);
        }
        let (reflected, rest) = match t.strip_prefix('U') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let rotation = if rest.is_empty() {
            0
        } else {
            let exp = rest.strip_prefix('H').ok_or_else(bad)?;
            let exp = exp.strip_prefix('^').unwrap_or(exp);
            if exp.is_empty() {
                1
            } else {
                exp.parse::<i64>().map_err(|_| bad())?
            }
        };
        Ok(GroupElement::new(reflected, rotation))
    }
}

/// Closure of a generating set under composition.
pub fn generate_group(generators: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = vec![GroupElement::IDENTITY];
    let mut queue = VecDeque::from([GroupElement::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for &gen in generators {
            let next = gen.compose(g);
            if !seen.contains(&next) {
                seen.push(next);
                queue.push_back(next);
            }
        }
    }
    seen.sort_by_key(GroupElement::index);
    seen
}

/// `g·s`, applying `H` `i` times and then `U` if `g = U H^i`.
pub fn apply<T: StateScalar>(g: GroupElement, s: &HeineState<T>) -> HeineState<T> {
    let mut out = s.clone();
    for _ in 0..g.rotation {
        out = apply_h(&out);
    }
    if g.reflected {
        out = apply_u(&out);
    }
    out
}

fn nonvanishing(value: CertifiedValue, what: &str, tol: f64) -> Result<Ball> {
    let ball = value.ball();
    if ball.contains_zero() || ball.abs_upper() <= tol {
        return Err(QError::DivisionByZero(format!(
            "{what} vanishes within tolerance"
        )));
    }
    Ok(ball)
}

pub(crate) fn cocycle_h_ball(s: &HeineState<Ball>, q: &QBase, cfg: &EvalConfig) -> Result<Ball> {
    let c = qpoch_infinite_with(s.c, q, cfg)?.ball();
    let z = qpoch_infinite_with(s.z, q, cfg)?.ball();
    let b = nonvanishing(qpoch_infinite_with(s.b, q, cfg)?, "(b; q)_inf", cfg.tol)?;
    let az = nonvanishing(qpoch_infinite_with(s.a * s.z, q, cfg)?, "(az; q)_inf", cfg.tol)?;
    Ok((c * z) / (b * az))
}

pub(crate) fn cocycle_for_ball(
    g: GroupElement,
    s: &HeineState<Ball>,
    q: &QBase,
    cfg: &EvalConfig,
) -> Result<Ball> {
    // h_{U H^i}(s) = h_U(H^i s) h_{H^i}(s) = prod_{k<i} h(H^k s)
    let mut acc = Ball::ONE;
    let mut state = *s;
    for _ in 0..g.rotation {
        acc = acc * cocycle_h_ball(&state, q, cfg)?;
        state = apply_h(&state);
    }
    Ok(acc)
}

/// The automorphy factor `h(s) = (c;q)_∞ (z;q)_∞ / ((b;q)_∞ (az;q)_∞)`.
pub fn cocycle_h<T: Copy + Into<Ball>>(
    s: &HeineState<T>,
    q: &QBase,
    tol: f64,
) -> Result<CertifiedValue> {
    let cfg = EvalConfig::with_tol(tol);
    let ball = cocycle_h_ball(&s.to_balls(), q, &cfg)?;
    CertifiedValue::from_ball(ball, 4)
}

/// The cocycle `h_g(s)` with `φ(g·s) = h_g(s) φ(s)`.
pub fn cocycle_for<T: Copy + Into<Ball>>(
    g: GroupElement,
    s: &HeineState<T>,
    q: &QBase,
    tol: f64,
) -> Result<CertifiedValue> {
    let cfg = EvalConfig::with_tol(tol);
    let ball = cocycle_for_ball(g, &s.to_balls(), q, &cfg)?;
    CertifiedValue::from_ball(ball, 4 * g.rotation as usize)
}

/// Whether `φ` can be evaluated at `s`: `|z| < 1` and `c q^N ≠ 1`.
pub fn series_converges(s: &HeineState<Complex64>, q: &QBase) -> bool {
    s.z.norm() < 1.0 && check_lower_parameter(s.c, q, DEFAULT_LOWER_EPS)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitEntry {
    pub element: GroupElement,
    pub state: HeineState<Complex64>,
    /// Whether the series converges at this state.
    pub convergent: bool,
    /// Earlier element of the listing mapping the seed to the same state.
    pub duplicate_of: Option<GroupElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub seed: HeineState<Complex64>,
    pub entries: Vec<OrbitEntry>,
}

impl Orbit {
    pub fn distinct_states(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.duplicate_of.is_none())
            .count()
    }

    pub fn get(&self, g: GroupElement) -> &OrbitEntry {
        &self.entries[g.index()]
    }
}

fn states_close(x: &HeineState<Complex64>, y: &HeineState<Complex64>) -> bool {
    let close = |u: Complex64, v: Complex64| (u - v).norm() <= 1e-12 * (u.norm() + v.norm());
    close(x.a, y.a) && close(x.b, y.b) && close(x.c, y.c) && close(x.z, y.z)
}

/// All twelve `(g, g·s)` pairs in canonical element order.
pub fn orbit(s: &HeineState<Complex64>, q: &QBase) -> Orbit {
    let mut entries: Vec<OrbitEntry> = Vec::with_capacity(12);
    for g in GroupElement::all() {
        let state = apply(g, s);
        let duplicate_of = entries
            .iter()
            .find(|e| e.duplicate_of.is_none() && states_close(&e.state, &state))
            .map(|e| e.element);
        entries.push(OrbitEntry {
            element: g,
            convergent: series_converges(&state, q),
            state,
            duplicate_of,
        });
    }
    Orbit {
        seed: *s,
        entries,
    }
}
