//! Number literals on the command line: `R`, `Ii`, `R+Ii`, `R-Ii`, where each
//! component is a decimal (`0.25`, `-1.5e-3`) or a fraction (`1/3`).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{QError, Result};
use crate::exact::{parse_rational, ExactRational};

/// A parsed literal, keeping the exact value of each component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLiteral {
    pub re: ExactRational,
    pub im: ExactRational,
    pub value: Complex64,
    text: String,
}

impl ComplexLiteral {
    /// The exact real value, when the imaginary part is zero.
    pub fn exact_real(&self) -> Option<&ExactRational> {
        self.im.is_zero().then_some(&self.re)
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Index of the sign separating real and imaginary parts, if any.
fn split_point(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
}

impl FromStr for ComplexLiteral {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || QError::InvalidArgument(format!("not a number literal: `{text}`"));
        let (re, im) = match text.strip_suffix('i') {
            None => (parse_rational(text)?, ExactRational::zero()),
            Some(body) => match split_point(body) {
                Some(pos) => {
                    let im = match &body[pos..] {
                        "+" => ExactRational::from_integer(1.into()),
                        "-" => ExactRational::from_integer((-1).into()),
                        part => parse_rational(part.strip_prefix('+').unwrap_or(part))?,
                    };
                    (parse_rational(&body[..pos]).map_err(|_| bad())?, im)
                }
                None => {
                    let im = match body {
                        "" | "+" => ExactRational::from_integer(1.into()),
                        "-" => ExactRational::from_integer((-1).into()),
                        part => parse_rational(part).map_err(|_| bad())?,
                    };
                    (ExactRational::zero(), im)
                }
            },
        };
        let value = Complex64::new(
            re.to_f64().ok_or_else(bad)?,
            im.to_f64().ok_or_else(bad)?,
        );
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(bad());
        }
        Ok(ComplexLiteral {
            re,
            im,
            value,
            text: text.to_string(),
        })
    }
}

impl fmt::Display for ComplexLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn format_real(x: f64, digits: Option<usize>) -> String {
    let a = x.abs();
    let plain = x == 0.0 || (1e-4..1e16).contains(&a);
    match (digits, plain) {
        (None, true) => format!("{x}"),
        (None, false) => format!("{x:e}"),
        (Some(d), true) => format!("{x:.d$}"),
        (Some(d), false) => format!("{x:.d$e}"),
    }
}

/// Render in the literal grammar, so output can be fed back as input.
pub fn format_complex(z: Complex64, digits: Option<usize>) -> String {
    if z.im == 0.0 {
        return format_real(z.re, digits);
    }
    let im = format_real(z.im.abs(), digits);
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{im}i", format_real(z.re, digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn lit(s: &str) -> ComplexLiteral {
        s.parse().unwrap()
    }

    #[test]
    fn grammar() {
        assert_eq!(lit("0.5").value, Complex64::new(0.5, 0.0));
        assert_eq!(lit("1/3").exact_real(), Some(&rational(1, 3)));
        assert_eq!(lit("0.3+0.1i").value, Complex64::new(0.3, 0.1));
        assert_eq!(lit("-0.3-1/4i").value, Complex64::new(-0.3, -0.25));
        assert_eq!(lit("2.5e-1-1e-2i").value, Complex64::new(0.25, -0.01));
        assert_eq!(lit("0.5i").value, Complex64::new(0.0, 0.5));
        assert_eq!(lit("-i").value, Complex64::new(0.0, -1.0));
        assert_eq!(lit("1+i").value, Complex64::new(1.0, 1.0));
        assert!(lit("0.1+0.2i").exact_real().is_none());
        assert!(lit("0.1+0i").exact_real().is_some());
        for bad in ["", "abc", "1+", "0.5j", "1/0", "1..2", "1e400"] {
            assert!(bad.parse::<ComplexLiteral>().is_err(), "{bad}");
        }
    }

    #[test]
    fn rendering_round_trips() {
        for z in [
            Complex64::new(0.3, 0.0),
            Complex64::new(-0.25, 1e-7),
            Complex64::new(1e-300, -0.5),
            Complex64::new(0.0, 0.0),
        ] {
            assert_eq!(format_complex(z, None).parse::<ComplexLiteral>().unwrap().value, z);
        }
        assert_eq!(format_complex(Complex64::new(0.5, -0.25), Some(3)), "0.500-0.250i");
    }
}
