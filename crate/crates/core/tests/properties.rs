use std::f64::consts::TAU;

use proptest::prelude::*;
use qheine::exact::{exact_phi, rational, to_ball};
use qheine::heine::{apply, cocycle_for};
use qheine::identities::{verify_q_euler, q_euler_preconditions};
use qheine::qnum::{phi, qpoch_finite_certified, qpoch_infinite};
use qheine::{Ball, Complex64, GroupElement, HeineState, QBase};

fn polar(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn param() -> impl Strategy<Value = Complex64> {
    polar(0.05, 0.95)
}

fn base() -> impl Strategy<Value = QBase> {
    polar(0.05, 0.8).prop_map(|q| QBase::new(q).unwrap())
}

fn element() -> impl Strategy<Value = GroupElement> {
    (any::<bool>(), 0i64..6).prop_map(|(u, i)| GroupElement::new(u, i))
}

fn state() -> impl Strategy<Value = HeineState<Complex64>> {
    (param(), param(), param(), param()).prop_map(|(a, b, c, z)| HeineState::new(a, b, c, z).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn infinite_product_recurrence(x in polar(0.0, 3.0), q in base()) {
        let tol = 1e-13;
        let lhs = qpoch_infinite(x, &q, tol).unwrap().ball();
        let shifted = qpoch_infinite(Ball::exact(x) * Ball::exact(q.value()), &q, tol).unwrap().ball();
        let rhs = (Ball::ONE - Ball::exact(x)) * shifted;
        prop_assert!(lhs.overlaps(&rhs), "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn infinite_product_splits(x in polar(0.0, 3.0), q in base(), n in 0usize..30) {
        let tol = 1e-13;
        let whole = qpoch_infinite(x, &q, tol).unwrap().ball();
        let head = qpoch_finite_certified(x, &q, n).ball();
        let mut xqn = Ball::exact(x);
        for _ in 0..n {
            xqn = xqn * Ball::exact(q.value());
        }
        let tail = qpoch_infinite(xqn, &q, tol).unwrap().ball();
        prop_assert!(whole.overlaps(&(head * tail)));
    }

    #[test]
    fn phi_is_bitwise_symmetric_in_upper_parameters(s in state(), q in base()) {
        let left = phi(&s, &q, 1e-12).unwrap();
        let right = phi(&apply(GroupElement::U, &s), &q, 1e-12).unwrap();
        prop_assert_eq!(left.value.re.to_bits(), right.value.re.to_bits());
        prop_assert_eq!(left.value.im.to_bits(), right.value.im.to_bits());
        prop_assert_eq!(left.error_bound.to_bits(), right.error_bound.to_bits());
    }

    #[test]
    fn group_composition_matches_action(g in element(), h in element(), s in state()) {
        let balls = s.to_balls();
        let direct = apply(g.compose(h), &balls);
        let stepwise = apply(g, &apply(h, &balls));
        for (x, y) in [(direct.a, stepwise.a), (direct.b, stepwise.b), (direct.c, stepwise.c), (direct.z, stepwise.z)] {
            prop_assert!(x.overlaps(&y));
        }
        prop_assert_eq!(g.compose(g.inverse()), GroupElement::IDENTITY);
    }

    #[test]
    fn cocycle_law(g1 in element(), g2 in element(), s in state(), q in base()) {
        let tol = 1e-14;
        let balls = s.to_balls();
        let whole = cocycle_for(g1.compose(g2), &balls, &q, tol);
        let inner = cocycle_for(g1, &apply(g2, &balls), &q, tol);
        let outer = cocycle_for(g2, &balls, &q, tol);
        if let (Ok(w), Ok(i), Ok(o)) = (whole, inner, outer) {
            prop_assert!(w.ball().overlaps(&(i.ball() * o.ball())));
        }
    }

    #[test]
    fn cocycle_of_full_rotation_is_one(s in state(), q in base()) {
        if let Ok(h) = cocycle_for(GroupElement::H.pow(6), &s.to_balls(), &q, 1e-14) {
            prop_assert!(h.encloses(Complex64::new(1.0, 0.0)) || (h.value - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn automorphy(g in element(), s in state(), q in base()) {
        let balls = s.to_balls();
        let image = apply(g, &balls);
        prop_assume!(image.z.abs_upper() < 0.95);
        let tol = 1e-13;
        let (left, right, h) = match (phi(&image, &q, tol), phi(&s, &q, tol), cocycle_for(g, &balls, &q, tol)) {
            (Ok(l), Ok(r), Ok(h)) => (l.ball(), r.ball(), h.ball()),
            _ => return Ok(()),
        };
        let rhs = h * right;
        let scale = left.mid.norm() + rhs.mid.norm();
        // wide balls from near-singular prefactors still have to agree
        prop_assert!(left.overlaps(&rhs) || (left.mid - rhs.mid).norm() <= 1e-9 * scale,
            "{g}: {left:?} vs {rhs:?}");
    }

    #[test]
    fn q_euler_right_side_symmetric(s in state(), q in base()) {
        prop_assume!(q_euler_preconditions(&s, &q).is_ok());
        let r1 = verify_q_euler(&s, &q, 1e-10).unwrap();
        let r2 = verify_q_euler(&apply(GroupElement::U, &s), &q, 1e-10).unwrap();
        prop_assert!(r1.pass && r2.pass);
        prop_assert!(r1.rhs.unwrap().ball().overlaps(&r2.rhs.unwrap().ball()));
    }

    #[test]
    fn numeric_phi_encloses_exact_terminating_value(
        m in 0u32..8,
        qn in prop::sample::select(vec![-5i64, -3, -1, 1, 2, 3, 5, 6]),
        (bn, cn, zn) in (-9i64..10, -9i64..10, -9i64..10),
    ) {
        prop_assume!(bn != 0 && cn != 0 && zn != 0);
        // dyadic bases are exact as f64, so the float base equals the rational one
        let q = rational(qn, 8);
        let a = num_traits::pow(q.recip(), m as usize);
        let (b, c, z) = (rational(bn, 10), rational(cn, 10), rational(zn, 10));
        let exact = exact_phi(&a, &b, &c, &z, &q, 64).unwrap().unwrap();
        let s = HeineState::new(to_ball(&a), to_ball(&b), to_ball(&c), to_ball(&z)).unwrap();
        let qb = QBase::real(to_ball(&q).mid.re).unwrap();
        let numeric = phi(&s, &qb, 1e-12).unwrap();
        prop_assert!(numeric.ball().overlaps(&to_ball(&exact)), "{numeric:?} vs {exact}");
    }
}
