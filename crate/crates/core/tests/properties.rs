//! Randomized invariants of the variational solution.

use std::f64::consts::{FRAC_PI_2, PI};

use dicke::model::{GaugeKind, ModelParams};
use dicke::testing;
use dicke::variational::{
    self, Branch, Phase, RotationSign, VariationalSolution,
};
use proptest::prelude::*;

fn params(eta: f64, g: f64, n: u32, phi: f64) -> ModelParams {
    ModelParams::new(eta, g, n, phi).expect("strategy stays inside the valid domain")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn solutions_close(a: &VariationalSolution, b: &VariationalSolution, tol: f64) -> bool {
    a.phase == b.phase
        && close(a.gamma_c, b.gamma_c, tol)
        && close(a.n_p, b.n_p, tol)
        && (a.energy - b.energy).norm() <= tol * a.energy.norm().max(1.0)
        && close(a.delta_na, b.delta_na, tol)
        && close(a.berry_per_atom, b.berry_per_atom, tol)
        && close(a.stability, b.stability, tol)
}

fn eta_strategy() -> impl Strategy<Value = f64> {
    0.2f64..2.0
}

fn g_strategy() -> impl Strategy<Value = f64> {
    0.0f64..2.0
}

fn n_strategy() -> impl Strategy<Value = u32> {
    1u32..=32
}

fn phi_strategy() -> impl Strategy<Value = f64> {
    0.0f64..PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// At field phase 0 the unified gauge carries only the electric-type
    /// coupling, so every observable matches the Coulomb gauge.
    #[test]
    fn unified_reduces_to_coulomb_at_zero_phase(
        eta in eta_strategy(),
        g in g_strategy(),
        n in n_strategy(),
    ) {
        let p = params(eta, g, n, 0.0);
        let unified = variational::solve_ground_state(GaugeKind::Unified, &p);
        let coulomb = variational::solve_ground_state(GaugeKind::Coulomb, &p);
        prop_assert!(solutions_close(&unified, &coulomb, 1e-12));
    }

    /// At field phase pi/2 only the magnetic-type coupling survives, which
    /// is the dipole gauge.
    #[test]
    fn unified_reduces_to_dipole_at_quarter_turn(
        eta in eta_strategy(),
        g in g_strategy(),
        n in n_strategy(),
    ) {
        let p = params(eta, g, n, FRAC_PI_2);
        let unified = variational::solve_ground_state(GaugeKind::Unified, &p);
        let dipole = variational::solve_ground_state(GaugeKind::Dipole, &p);
        prop_assert!(solutions_close(&unified, &dipole, 1e-12));
    }

    /// On resonance the phase weight is 1 for every field phase, so the
    /// three Hermitian gauges coincide.
    #[test]
    fn hermitian_gauges_agree_on_resonance(
        g in g_strategy(),
        n in n_strategy(),
        phi in phi_strategy(),
    ) {
        let p = params(1.0, g, n, phi);
        let unified = variational::solve_ground_state(GaugeKind::Unified, &p);
        let coulomb = variational::solve_ground_state(GaugeKind::Coulomb, &p);
        let dipole = variational::solve_ground_state(GaugeKind::Dipole, &p);
        prop_assert!(solutions_close(&unified, &coulomb, 1e-12));
        prop_assert!(solutions_close(&unified, &dipole, 1e-12));
    }

    /// The closed-form condensate amplitude is a root of the energy
    /// derivative; find that root independently by bisection.
    #[test]
    fn closed_form_amplitude_is_a_derivative_root(
        eta in eta_strategy(),
        g in 0.55f64..2.0,
        n in n_strategy(),
        phi in phi_strategy(),
        gauge in prop::sample::select(GaugeKind::HERMITIAN.to_vec()),
    ) {
        let p = params(eta, g, n, phi);
        prop_assume!(p.g > variational::critical_coupling(gauge, &p) * (1.0 + 1e-6));
        let gamma_c = variational::superradiant_gamma(gauge, &p)
            .expect("above the critical coupling");
        let slope = |x: f64| {
            testing::central_derivative(
                |t| variational::energy(gauge, &p, t, Branch::Minus).unwrap().re,
                x,
                1e-4,
            )
        };
        let hi = 10.0 * p.spin().sqrt() * p.g.max(1.0);
        let root = testing::bisect_sign_change(slope, 1e-9, hi, 200)
            .expect("derivative changes sign across the minimum");
        prop_assert!(close(root, gamma_c, 1e-8), "root {root} vs closed form {gamma_c}");
    }

    /// The reported ground state sits at a true minimum and the reversed
    /// pair, when present, at a true maximum.
    #[test]
    fn stability_certificates_have_the_right_sign(
        eta in eta_strategy(),
        g in g_strategy(),
        n in n_strategy(),
        phi in phi_strategy(),
        gauge in prop::sample::select(GaugeKind::ALL.to_vec()),
    ) {
        let p = params(eta, g, n, phi);
        let ground = variational::solve_ground_state(gauge, &p);
        prop_assert!(ground.stability >= 0.0);
        if ground.phase == Phase::Superradiant {
            prop_assert!(ground.stability > 0.0);
        }
        if let Some(unstable) = variational::unstable_superradiant(gauge, &p) {
            prop_assert_eq!(unstable.phase, Phase::UnstableSuperradiant);
            prop_assert!(unstable.stability < 0.0);
            prop_assert_eq!(unstable.energy.im, 0.0);
        }
    }

    /// The geometric phase per atom is `2 pi n_p` with no extra rounding.
    #[test]
    fn geometric_phase_is_exactly_proportional_to_occupation(
        eta in eta_strategy(),
        g in g_strategy(),
        n in n_strategy(),
        phi in phi_strategy(),
        gauge in prop::sample::select(GaugeKind::ALL.to_vec()),
    ) {
        let p = params(eta, g, n, phi);
        let ground = variational::solve_ground_state(gauge, &p);
        prop_assert_eq!(
            ground.berry_per_atom.to_bits(),
            (2.0 * PI * ground.n_p).to_bits()
        );
    }

    /// The rotation that diagonalizes the spin sector leaves off-diagonal
    /// residuals at rounding level, for both rotation signs.
    #[test]
    fn rotated_offdiagonals_vanish(
        eta in eta_strategy(),
        g in 0.0f64..2.0,
        n in n_strategy(),
        phi in phi_strategy(),
        gamma in 0.0f64..3.0,
        gauge in prop::sample::select(GaugeKind::ALL.to_vec()),
    ) {
        let p = params(eta, g, n, phi);
        if gauge == GaugeKind::NonHermitianUnified {
            // The similarity transformation only exists below the
            // exceptional point.
            let x = 8.0 * g * g * gamma * gamma * p.phase_factor() / p.spin();
            prop_assume!(x < 0.98);
        }
        for sign in [RotationSign::Lower, RotationSign::Upper] {
            let res = variational::offdiag_residuals_signed(gauge, &p, gamma, sign).unwrap();
            prop_assert!(res.abs_b < 1e-12, "B residual {} ({gauge}, {sign:?})", res.abs_b);
            prop_assert!(res.abs_c < 1e-12, "C residual {} ({gauge}, {sign:?})", res.abs_c);
        }
    }

    /// Below the exceptional point both branches are real with imaginary
    /// part exactly zero; beyond it they form a conjugate pair with equal
    /// real parts and the minus branch decaying.
    #[test]
    fn branch_structure_across_the_exceptional_point(
        eta in eta_strategy(),
        g in 0.05f64..2.0,
        n in n_strategy(),
        phi in phi_strategy(),
        gamma in 0.01f64..3.0,
    ) {
        let gauge = GaugeKind::NonHermitianUnified;
        let p = params(eta, g, n, phi);
        let minus = variational::energy(gauge, &p, gamma, Branch::Minus).unwrap();
        let plus = variational::energy(gauge, &p, gamma, Branch::Plus).unwrap();
        let g_ep = variational::exceptional_point(&p, gamma).unwrap();
        if g < g_ep {
            prop_assert_eq!(minus.im, 0.0);
            prop_assert_eq!(plus.im, 0.0);
            prop_assert!(minus.re <= plus.re);
        } else if g > g_ep {
            prop_assert_eq!(minus.re, plus.re);
            prop_assert!(minus.im < 0.0);
            prop_assert_eq!(minus, plus.conj());
        }
    }

    /// The exceptional-point coupling formula agrees with a sign scan of
    /// the radicand it annihilates.
    #[test]
    fn exceptional_point_is_the_radicand_root(
        eta in eta_strategy(),
        n in n_strategy(),
        phi in phi_strategy(),
        gamma in 0.05f64..3.0,
    ) {
        let p = params(eta, 1.0, n, phi);
        let g_ep = variational::exceptional_point(&p, gamma).unwrap();
        let radicand = |g: f64| {
            1.0 - 8.0 * g * g * gamma * gamma * p.phase_factor() / p.spin()
        };
        let root = testing::bisect_sign_change(radicand, 1e-9, 50.0, 220)
            .expect("radicand changes sign at the exceptional point");
        prop_assert!(close(root, g_ep, 1e-10), "scan {root} vs formula {g_ep}");
    }
}
