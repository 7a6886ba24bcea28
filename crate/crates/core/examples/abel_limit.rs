//! The radial limit lim_{z↑1} (z; q)_∞ φ(a, b; c; z) by Richardson extrapolation.
//!
//!     cargo run --example abel_limit

use qheine::identities::{abel_function, abel_limit, richardson, verify_abel};
use qheine::qnum::qpoch_infinite;
use qheine::{Ball, Complex64, EvalConfig, QBase};

fn main() -> qheine::Result<()> {
    let q = QBase::real(0.5)?;
    let (a, b, c) = (Complex64::new(0.3, 0.0), Complex64::new(0.6, 0.0), Complex64::new(0.4, 0.0));
    let cfg = EvalConfig::with_tol(1e-14);

    println!("{:>4} {:>14} {:>20}", "k", "z = 1 - 2^-k", "(z;q)_inf phi");
    let mut samples = Vec::new();
    for k in 1..=8 {
        let z = 1.0 - 0.5f64.powi(k);
        let v = abel_function(a, b, c, Ball::real(z), &q, &cfg)?;
        println!("{k:>4} {z:>14.10} {:>20.15}", v.value.re);
        samples.push(v.ball());
        let (est, gap) = richardson(&samples);
        println!("{:>4} {:>14} {:>20.15}  (gap {gap:.1e})", "", "extrapolated", est.mid.re);
    }

    let limit = abel_limit(a, b, c, &q, 20)?;
    let target = qpoch_infinite(a, &q, 1e-15)?.value * qpoch_infinite(b, &q, 1e-15)?.value
        / qpoch_infinite(c, &q, 1e-15)?.value;
    println!("\ndepth 20 limit   {:.15} ± {:.1e}", limit.value.re, limit.error_bound);
    println!("(a)(b)/(c)       {:.15}", target.re);

    let r = verify_abel(c, b, c, &q, 20, 1e-10)?;
    println!("a = c collapse to (b;q)_inf: residual {:.2e}", r.residual.unwrap_or(f64::NAN));
    Ok(())
}
