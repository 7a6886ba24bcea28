//! Certified values of (x; q)_∞ and ₂φ₁, real and complex.
//!
//!     cargo run --example evaluate_phi

use qheine::qnum::{phi, phi_with, qpoch_finite, qpoch_infinite};
use qheine::{Complex64, EvalConfig, HeineState, QBase};

fn main() -> qheine::Result<()> {
    let q = QBase::real(0.5)?;

    let euler = qpoch_infinite(0.5, &q, 1e-15)?;
    println!("(1/2; 1/2)_inf = {} ± {:.1e} ({} factors)", euler.value.re, euler.error_bound, euler.terms_used);
    println!("(1/2; 1/2)_4   = {}", qpoch_finite(Complex64::new(0.5, 0.0), &q, 4).re);

    let s = HeineState::real(0.3, 0.4, 0.6, 0.5)?;
    let v = phi(&s, &q, 1e-12)?;
    println!("phi(0.3, 0.4; 0.6; 0.5) = {} ± {:.1e} ({} terms)", v.value.re, v.error_bound, v.terms_used);

    // a = 1 stops the series after its first term
    let delta = phi(&HeineState::real(1.0, 0.7, 0.3, 0.5)?, &q, 1e-12)?;
    println!("phi(1, 0.7; 0.3; 0.5)   = {} (error bound {})", delta.value.re, delta.error_bound);

    let qc = QBase::new(Complex64::new(0.3, 0.4))?;
    let s = HeineState::new(
        Complex64::new(0.2, 0.3),
        Complex64::new(-0.5, 0.1),
        Complex64::new(0.4, -0.2),
        Complex64::new(0.7, -0.1),
    )?;
    let cfg = EvalConfig {
        compensated: true,
        ..EvalConfig::with_tol(1e-14)
    };
    let v = phi_with(&s, &qc, &cfg)?;
    println!("complex phi = {} ± {:.1e}", v.value, v.error_bound);

    match phi(&HeineState::real(0.3, 0.4, 2.0, 0.5)?, &q, 1e-12) {
        Err(e) => println!("c = q^-1 is rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
