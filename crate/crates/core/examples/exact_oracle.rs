//! Exact rational checks of the terminating q-Gauss and q-binomial sums.
//!
//!     cargo run --example exact_oracle

use qheine::exact::{exact_phi, parse_rational, rational, verify_terminating_qbinomial, verify_terminating_qgauss};

fn main() -> qheine::Result<()> {
    let (q, b, c) = (parse_rational("1/2")?, parse_rational("1/3")?, parse_rational("0.2")?);
    let out = verify_terminating_qgauss(1, &q, &b, &c)?;
    println!("m = 1, q = {q}, b = {b}, c = {c}: {} = {} ({})", out.lhs, out.rhs, out.equal);

    let (q, b, c) = (rational(-2, 7), rational(5, 9), rational(-3, 11));
    for m in [3, 8, 15] {
        let out = verify_terminating_qgauss(m, &q, &b, &c)?;
        let digits = out.lhs.denom().to_string().len();
        println!("m = {m:>2}: equal = {}, denominator has {digits} digits", out.equal);
    }

    let z = rational(3, 4);
    let out = verify_terminating_qbinomial(6, &z, &rational(2, 5))?;
    println!("q-binomial m = 6: {} = {}", out.lhs, out.rhs);

    // phi(q^-2, b; c; z) as a finite sum
    let q = rational(1, 3);
    let v = exact_phi(&rational(9, 1), &rational(1, 2), &rational(1, 4), &rational(1, 5), &q, 64)
        .expect("terminates")?;
    println!("phi(9, 1/2; 1/4; 1/5) at q = 1/3: {v}");
    Ok(())
}
