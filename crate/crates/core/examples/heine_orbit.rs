//! The order-12 Heine group: relations, the orbit of a state, and the
//! automorphy relation φ(g·s) = h_g(s) φ(s).
//!
//!     cargo run --example heine_orbit

use qheine::heine::{apply, cocycle_for, generate_group, orbit};
use qheine::qnum::phi;
use qheine::{GroupElement, HeineState, QBase};

fn main() -> qheine::Result<()> {
    let group = generate_group(&[GroupElement::U, GroupElement::H]);
    let names: Vec<_> = group.iter().map(|g| g.name()).collect();
    println!("group of order {}: {}", group.len(), names.join(" "));
    for g in &group {
        print!("{g}:{} ", g.order());
    }
    println!("\ncentre generator H3 commutes with everything: {}",
        group.iter().all(|&g| g.compose(GroupElement::H3) == GroupElement::H3.compose(g)));

    let q = QBase::real(0.45)?;
    let s = HeineState::real(0.3, 0.4, 0.6, 0.5)?;
    let o = orbit(&s, &q);
    println!("\n{:<4} {:>9} {:>9} {:>9} {:>9}  conv", "g", "a", "b", "c", "z");
    for e in &o.entries {
        let st = &e.state;
        println!("{:<4} {:>9.5} {:>9.5} {:>9.5} {:>9.5}  {}", e.element.name(), st.a.re, st.b.re, st.c.re, st.z.re, e.convergent);
    }

    let base = phi(&s, &q, 1e-13)?;
    for g in GroupElement::all() {
        let image = apply(g, &s);
        if !o.get(g).convergent {
            continue;
        }
        let lhs = phi(&image, &q, 1e-13)?;
        match cocycle_for(g, &s, &q, 1e-14) {
            Ok(h) => {
                let rhs = h.value * base.value;
                println!("{:<4} phi(g s) = {:.15}   h_g(s) phi(s) = {:.15}", g.name(), lhs.value.re, rhs.re);
            }
            // an intermediate image has b or az at a zero of (x; q)_inf
            Err(e) => println!("{:<4} phi(g s) = {:.15}   cocycle: {e}", g.name(), lhs.value.re),
        }
    }

    let fixed = orbit(&HeineState::real(0.3, 0.3, 0.6, 0.5)?, &q);
    println!("\na = b: {} distinct images", fixed.distinct_states());
    Ok(())
}
