//! Verification reports for the series identities at one parameter point each.
//!
//!     cargo run --example identity_checks

use qheine::identities::{verify_heine, verify_heine_squared, verify_q_binomial, verify_q_euler, verify_q_gauss};
use qheine::{Complex64, HeineState, QBase, VerificationReport};

fn show(r: &VerificationReport) {
    match (r.skipped, r.residual) {
        (true, _) => println!("{:<14} skipped: {}", r.identity, r.skip_reason.as_deref().unwrap_or("")),
        (false, Some(res)) => println!(
            "{:<14} residual {:.2e} (threshold {:.1e}) {}",
            r.identity,
            res,
            r.threshold,
            if r.pass { "pass" } else { "FAIL" }
        ),
        (false, None) => println!("{:<14} no residual", r.identity),
    }
}

fn main() -> qheine::Result<()> {
    let q = QBase::new(Complex64::new(0.4, 0.3))?;
    let c = |re, im| Complex64::new(re, im);
    let s = HeineState::new(c(0.3, 0.1), c(0.5, -0.2), c(0.6, 0.3), c(0.4, 0.2))?;
    let tol = 1e-10;

    show(&verify_q_binomial(c(0.7, -0.2), c(0.5, 0.1), &q, tol)?);
    show(&verify_heine(&s, &q, tol)?);
    show(&verify_heine_squared(&s, &q, tol)?);
    show(&verify_q_euler(&s, &q, tol)?);
    show(&verify_q_gauss(c(0.8, 0.1), c(0.7, -0.3), c(0.2, 0.1), &q, tol)?);

    // outside the region where the transformed series converges
    let far = HeineState::new(c(0.3, 0.0), c(1.4, 0.0), c(0.6, 0.0), c(0.5, 0.0))?;
    show(&verify_heine(&far, &q, tol)?);

    println!("\n{}", verify_heine(&s, &q, tol)?.to_json());
    Ok(())
}
