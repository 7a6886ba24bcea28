//! The q-Gauss sum φ(a, b; c; c/ab) reached three ways: through the Heine
//! transformation and the q-binomial theorem, through the squared Heine
//! transformation, and through the q-Euler transformation plus the radial limit.
//!
//!     cargo run --example gauss_three_routes

use qheine::identities::{q_gauss_routes, verify_gauss_via_limit, DEFAULT_DEPTH};
use qheine::{Complex64, QBase};

fn main() -> qheine::Result<()> {
    let q = QBase::real(0.5)?;
    let (a, b, c) = (Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.0), Complex64::new(0.1, 0.0));
    let routes = q_gauss_routes(a, b, c, &q, DEFAULT_DEPTH)?;

    println!("closed product    {:.15} ± {:.1e}", routes.closed.value.re, routes.closed.error_bound);
    if let Some(v) = &routes.binomial_route {
        println!("Heine + binomial  {:.15} ± {:.1e}", v.value.re, v.error_bound);
    }
    if let Some(v) = &routes.square_route {
        println!("Heine squared     {:.15} ± {:.1e}", v.value.re, v.error_bound);
    }
    println!("q-Euler + limit   {:.15} ± {:.1e}", routes.limit_route.value.re, routes.limit_route.error_bound);

    let report = verify_gauss_via_limit(a, b, c, &q, DEFAULT_DEPTH)?;
    println!("\nlimit route residual {:.2e}, pass = {}", report.residual.unwrap_or(f64::NAN), report.pass);
    Ok(())
}
