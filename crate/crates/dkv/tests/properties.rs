//! Property-based checks of the cubic level condition: every admissible
//! parameter draw must yield three real roots in the proven configuration
//! (leftmost negative, middle inside the window, rightmost past the window),
//! and the selected root must reproduce its own inputs.

use dkv::spectrum::{
    self, coupling_from_energy, existence_interval, root_certificate, select_physical_root,
    CubicTriple,
};
use dkv::DkvParams;
use proptest::prelude::*;

/// Draws (n, b) with the window (n + 1/2, sqrt(b)) open by a fixed margin,
/// then a strength A strictly inside the existence interval of level n.
fn admissible_instance() -> impl Strategy<Value = (usize, f64, f64)> {
    (0usize..=6)
        .prop_flat_map(|n| {
            let lo = n as f64 + 0.55;
            (Just(n), lo..25.0, 1e-6..(1.0 - 1e-6))
        })
        .prop_map(|(n, beta, frac)| {
            let b = beta * beta;
            let probe = DkvParams::new(1.0, 2.0 * b).unwrap();
            let (lo, hi) = existence_interval(&probe, n);
            (n, b, lo + frac * (hi - lo))
        })
}

proptest! {
    #[test]
    fn middle_root_sits_in_window_and_extremes_violate_it(
        (n, b, a_strength) in admissible_instance()
    ) {
        let p = DkvParams::new(a_strength, 2.0 * b).unwrap();
        let triple = CubicTriple::build(&p, n);
        let cert = root_certificate(&triple).expect("three real roots");
        prop_assert!(cert.leftmost_negative, "leftmost root not negative: {:?}", cert.scaled);
        prop_assert!(cert.middle_in_window, "middle root escaped the window: {:?}", cert.scaled);
        prop_assert!(cert.rightmost_above_one, "rightmost root inside window: {:?}", cert.scaled);
        prop_assert!(select_physical_root(&triple).is_some());
    }

    #[test]
    fn scaled_roots_lie_on_the_level_curve(
        (n, b, a_strength) in admissible_instance()
    ) {
        let p = DkvParams::new(a_strength, 2.0 * b).unwrap();
        let triple = CubicTriple::build(&p, n);
        let cert = root_certificate(&triple).expect("three real roots");
        let scale = triple.tau.abs().max(1.0);
        for d in cert.curve_defects {
            prop_assert!(d < 1e-9 * scale, "curve defect {d:e} at tau = {}", triple.tau);
        }
        prop_assert!(cert.rightmost_closed_form_defect < 1e-8 * scale);
    }

    #[test]
    fn selected_root_reproduces_the_strength(
        (n, b, a_strength) in admissible_instance()
    ) {
        let p = DkvParams::new(a_strength, 2.0 * b).unwrap();
        let state = spectrum::level(&p, n).expect("level exists by construction");
        let back = coupling_from_energy(n, state.a - 0.5, p.half_b());
        prop_assert!(
            (back - p.a).abs() < 1e-9 * p.a.abs().max(1.0),
            "strength reproduction defect {:e}", back - p.a
        );
        prop_assert!(state.alpha > 0.0 && state.beta < 0.0);
        prop_assert!(state.edge_margin(&p) > 0.0);
    }

    #[test]
    fn level_existence_is_downward_closed(
        (n, b, a_strength) in admissible_instance()
    ) {
        // If level n exists, every lower level exists too.
        let p = DkvParams::new(a_strength, 2.0 * b).unwrap();
        prop_assert!(select_physical_root(&CubicTriple::build(&p, n)).is_some());
        for m in 0..n {
            prop_assert!(
                select_physical_root(&CubicTriple::build(&p, m)).is_some(),
                "level {n} exists but level {m} is missing"
            );
        }
    }
}
