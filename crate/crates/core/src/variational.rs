//! Coherent-state variational ground state and phase structure.
//!
//! The trial state is a boson coherent state with real amplitude `gamma`
//! paired with the lowest level of a rotated collective spin. Minimizing the
//! per-atom energy
//!
//! ```text
//! eps_pm(gamma) = omega gamma^2 / N +- Omega sqrt(1 + 8 G^2 gamma^2 Phi_g / N)
//! ```
//!
//! over `gamma` yields a normal phase (NP, `gamma = 0`) for weak coupling and
//! a superradiant phase (SP, `gamma = gamma_c > 0`) beyond a critical
//! coupling `G_c = (1/2) sqrt(eta / Phi_g)`. `Phi_g` is the gauge weight:
//! 1 (Coulomb), `eta^2` (dipole), `Phi(eta, phi)` (unified).
//!
//! The non-Hermitian variant flips the sign under the square root. Its
//! landscape is real only below an exceptional point (EP); beyond it the two
//! branches form a complex-conjugate pair and the superradiant minimum is
//! gone. The NP remains the stable ground state at every coupling, while a
//! reversed-sign stationary pair survives at `0 < G < G_c` as an unstable
//! local extremum of the upper branch.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::model::{DomainError, GaugeKind, ModelParams};

/// Which sign of the square root in `eps_pm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

/// Which of the two equivalent spin rotations that cancel the off-diagonal
/// couplings. `Lower` makes the rotated splitting positive so the lowest
/// spin level carries the `Minus` branch energy; `Upper` is the companion
/// solution (`theta + pi` for Hermitian gauges, `(-theta, chi + pi)` for the
/// non-Hermitian one).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationSign {
    Lower,
    Upper,
}

/// Ground-state phase classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Normal,
    Superradiant,
    UnstableSuperradiant,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Normal => "NP",
            Phase::Superradiant => "SP",
            Phase::UnstableSuperradiant => "unstable-SP",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A stationary point of the variational landscape with its observables.
///
/// All quantities are per atom: `n_p = gamma_c^2 / N` is the photon number,
/// `energy` the variational energy, `delta_na` the atomic population shift
/// `d eps / d Omega`, and `berry_per_atom` the geometric phase accumulated
/// over one field cycle, `2 pi n_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalSolution {
    pub phase: Phase,
    /// Stationary field amplitude (0 in the normal phase).
    pub gamma_c: f64,
    /// Photon number per atom at the stationary point.
    pub n_p: f64,
    /// Variational energy per atom. Imaginary part is exactly zero wherever
    /// the landscape is real.
    pub energy: Complex64,
    /// Atomic population shift relative to the decoupled ground level.
    pub delta_na: f64,
    /// Geometric phase per atom over one field cycle.
    pub berry_per_atom: f64,
    /// Landscape curvature `d^2 eps / d gamma^2` at the stationary point.
    /// Positive certifies a minimum, negative an unstable extremum.
    pub stability: f64,
}

/// Gauge weight `Phi_g` entering the coupling term.
pub fn gauge_phase_factor(gauge: GaugeKind, p: &ModelParams) -> f64 {
    match gauge {
        GaugeKind::Coulomb => 1.0,
        GaugeKind::Dipole => p.eta * p.eta,
        GaugeKind::Unified | GaugeKind::NonHermitianUnified => p.phase_factor(),
    }
}

/// Critical coupling `G_c = (1/2) sqrt(eta / Phi_g)`.
///
/// For Hermitian gauges this separates NP from SP. For the non-Hermitian
/// gauge no SP exists; the same value bounds the region hosting the unstable
/// reversed-sign pair.
pub fn critical_coupling(gauge: GaugeKind, p: &ModelParams) -> f64 {
    0.5 * (p.eta / gauge_phase_factor(gauge, p)).sqrt()
}

/// Variational energy per atom at field amplitude `gamma`.
///
/// Hermitian gauges always return a real value (imaginary part exactly 0).
/// The non-Hermitian gauge returns a real value below the exceptional point
/// and a complex one beyond it, with the `Minus` branch carrying the
/// negative imaginary part; the two branches are complex conjugates with
/// equal real parts there.
pub fn energy(
    gauge: GaugeKind,
    p: &ModelParams,
    gamma: f64,
    branch: Branch,
) -> Result<Complex64, DomainError> {
    if !gamma.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma", value: gamma });
    }
    let n = p.spin();
    let c = 8.0 * p.g * p.g * gauge_phase_factor(gauge, p) / n;
    let quad = p.omega * gamma * gamma / n;
    let radicand = if gauge.is_hermitian() {
        1.0 + c * gamma * gamma
    } else {
        1.0 - c * gamma * gamma
    };
    let root = if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    };
    let signed = match branch {
        Branch::Minus => -root,
        Branch::Plus => root,
    };
    let e = quad + p.splitting * signed;
    // Negating the real root leaves a -0.0 imaginary part; normalize so the
    // real-landscape case carries a positive zero.
    Ok(Complex64::new(e.re, if e.im == 0.0 { 0.0 } else { e.im }))
}

/// Analytic landscape curvature `d^2 eps_pm / d gamma^2`.
///
/// Hermitian gauges: `2 omega / N +- Omega c / (1 + c gamma^2)^{3/2}` with
/// `c = 8 G^2 Phi_g / N`. Non-Hermitian: `2 omega / N -+ Omega c / r^{3/2}`
/// with `r = 1 - c gamma^2`; fails where `r <= 0` because the landscape is
/// complex there and has no real curvature.
pub fn second_derivative(
    gauge: GaugeKind,
    p: &ModelParams,
    gamma: f64,
    branch: Branch,
) -> Result<f64, DomainError> {
    if !gamma.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma", value: gamma });
    }
    let n = p.spin();
    let c = 8.0 * p.g * p.g * gauge_phase_factor(gauge, p) / n;
    let base = 2.0 * p.omega / n;
    if gauge.is_hermitian() {
        let r = 1.0 + c * gamma * gamma;
        let term = p.splitting * c / r.powf(1.5);
        Ok(match branch {
            Branch::Minus => base - term,
            Branch::Plus => base + term,
        })
    } else {
        let r = 1.0 - c * gamma * gamma;
        if r <= 0.0 {
            return Err(DomainError::ComplexLandscape { radicand: r });
        }
        let term = p.splitting * c / r.powf(1.5);
        Ok(match branch {
            Branch::Minus => base + term,
            Branch::Plus => base - term,
        })
    }
}

/// Superradiant stationary amplitude `gamma_c`, when one exists.
///
/// Only Hermitian gauges strictly above `G_c` have one; at `G = G_c` the
/// minimum still sits at `gamma = 0`.
pub fn superradiant_gamma(gauge: GaugeKind, p: &ModelParams) -> Option<f64> {
    if !gauge.is_hermitian() || p.g <= critical_coupling(gauge, p) {
        return None;
    }
    Some((p.spin() * superradiant_np(gauge, p)).sqrt())
}

/// Closed-form SP photon number per atom,
/// `n_p = 2 G^2 Phi_g / eta^2 - 1 / (8 G^2 Phi_g)`.
fn superradiant_np(gauge: GaugeKind, p: &ModelParams) -> f64 {
    let phi_g = gauge_phase_factor(gauge, p);
    let g2 = p.g * p.g;
    2.0 * g2 * phi_g / (p.eta * p.eta) - 1.0 / (8.0 * g2 * phi_g)
}

/// Variational ground state for the given gauge.
///
/// Hermitian gauges return SP above `G_c` and NP otherwise; the
/// non-Hermitian gauge always returns NP, which stays a stable minimum at
/// every coupling. NP observables are exact constants by construction.
pub fn solve_ground_state(gauge: GaugeKind, p: &ModelParams) -> VariationalSolution {
    if let Some(gamma_c) = superradiant_gamma(gauge, p) {
        let phi_g = gauge_phase_factor(gauge, p);
        let n_p = superradiant_np(gauge, p);
        let energy = energy(gauge, p, gamma_c, Branch::Minus)
            .expect("hermitian landscape is defined everywhere");
        let delta_na = -1.0 / (1.0 + 8.0 * p.g * p.g * n_p * phi_g).sqrt();
        let stability = second_derivative(gauge, p, gamma_c, Branch::Minus)
            .expect("hermitian curvature is defined everywhere");
        return VariationalSolution {
            phase: Phase::Superradiant,
            gamma_c,
            n_p,
            energy,
            delta_na,
            berry_per_atom: 2.0 * PI * n_p,
            stability,
        };
    }
    let stability = second_derivative(gauge, p, 0.0, Branch::Minus)
        .expect("landscape is real at gamma = 0");
    VariationalSolution {
        phase: Phase::Normal,
        gamma_c: 0.0,
        n_p: 0.0,
        energy: Complex64::new(-p.splitting, 0.0),
        delta_na: -1.0,
        berry_per_atom: 0.0,
        stability,
    }
}

/// Reversed-sign stationary pair of the non-Hermitian upper branch.
///
/// Exists only for `0 < G < G_c` (strictly). Its photon number is
/// `n_p = (1 - 16 G^4 Phi^2 / eta^2) / (8 G^2 Phi)`, its energy is real
/// (the radicand is a perfect square there), and its curvature is negative,
/// so it never competes with the NP ground state.
pub fn unstable_superradiant(gauge: GaugeKind, p: &ModelParams) -> Option<VariationalSolution> {
    if gauge.is_hermitian() || p.g <= 0.0 || p.g >= critical_coupling(gauge, p) {
        return None;
    }
    let phi_f = p.phase_factor();
    let g2 = p.g * p.g;
    let ratio = 4.0 * g2 * phi_f / p.eta;
    let n_p = (1.0 - ratio * ratio) / (8.0 * g2 * phi_f);
    let gamma_c = (p.spin() * n_p).sqrt();
    let energy = energy(gauge, p, gamma_c, Branch::Plus)
        .expect("below the exceptional point the landscape is real");
    let stability = second_derivative(gauge, p, gamma_c, Branch::Plus)
        .expect("below the exceptional point the curvature is defined");
    // Biorthogonal population shift; positive because the pair sits on the
    // upper branch.
    let delta_na = 1.0 / (1.0 - 8.0 * g2 * n_p * phi_f).sqrt();
    Some(VariationalSolution {
        phase: Phase::UnstableSuperradiant,
        gamma_c,
        n_p,
        energy,
        delta_na,
        berry_per_atom: 2.0 * PI * n_p,
        stability,
    })
}

/// Exceptional-point coupling `G_ep = sqrt(N / (8 gamma^2 Phi))` where the
/// non-Hermitian branches merge at field amplitude `gamma`.
pub fn exceptional_point(p: &ModelParams, gamma: f64) -> Result<f64, DomainError> {
    if !gamma.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma", value: gamma });
    }
    if gamma == 0.0 {
        return Err(DomainError::ZeroGamma);
    }
    exceptional_point_scaled(p.eta, p.phi, gamma * gamma / p.spin())
}

/// Exceptional-point coupling in the N-free form `1 / sqrt(8 y Phi)` with
/// `y = gamma^2 / N`.
pub fn exceptional_point_scaled(eta: f64, phi: f64, gamma_sq_per_n: f64) -> Result<f64, DomainError> {
    if !gamma_sq_per_n.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma_sq_per_n", value: gamma_sq_per_n });
    }
    if gamma_sq_per_n < 0.0 {
        return Err(DomainError::Negative { name: "gamma_sq_per_n", value: gamma_sq_per_n });
    }
    if gamma_sq_per_n == 0.0 {
        return Err(DomainError::ZeroGamma);
    }
    let phi_f = crate::model::phase_factor(eta, phi)?;
    Ok(1.0 / (8.0 * gamma_sq_per_n * phi_f).sqrt())
}

/// Non-Hermitian branch energy in the same N-free form, `y = gamma^2 / N`.
///
/// Matches `energy` at `gamma = sqrt(y N)` but works in `y` directly, so a
/// `y` that makes the radicand exactly zero lands exactly on the branch
/// merge instead of picking up rounding from the square-root round trip.
pub fn branch_energy_scaled(
    eta: f64,
    phi: f64,
    g: f64,
    gamma_sq_per_n: f64,
    branch: Branch,
) -> Result<Complex64, DomainError> {
    if !g.is_finite() {
        return Err(DomainError::NonFinite { name: "g", value: g });
    }
    if g < 0.0 {
        return Err(DomainError::Negative { name: "g", value: g });
    }
    if !gamma_sq_per_n.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma_sq_per_n", value: gamma_sq_per_n });
    }
    if gamma_sq_per_n < 0.0 {
        return Err(DomainError::Negative { name: "gamma_sq_per_n", value: gamma_sq_per_n });
    }
    let phi_f = crate::model::phase_factor(eta, phi)?;
    let radicand = 1.0 - 8.0 * g * g * gamma_sq_per_n * phi_f;
    let root = if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    };
    let signed = match branch {
        Branch::Minus => -root,
        Branch::Plus => root,
    };
    let e = eta * gamma_sq_per_n + signed;
    Ok(Complex64::new(e.re, if e.im == 0.0 { 0.0 } else { e.im }))
}

/// Off-diagonal couplings of the rotated spin Hamiltonian.
///
/// `abs_b` and `abs_c` are the magnitudes of the two raising/lowering
/// coefficients after the rotation `(theta, chi)`; both vanish (to rounding)
/// at the solved angles, which is what makes `eps_pm` exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagResidual {
    pub abs_b: f64,
    pub abs_c: f64,
    /// Rotation angle used (hyperbolic for the non-Hermitian gauge).
    pub theta: f64,
    /// Frame phase used. For Coulomb and dipole the model field phase drops
    /// out and the solved frame phase (0 and pi/2) is reported instead.
    pub chi: f64,
}

/// Residual off-diagonal couplings at the `Lower` rotation.
pub fn offdiag_residuals(
    gauge: GaugeKind,
    p: &ModelParams,
    gamma: f64,
) -> Result<OffDiagResidual, DomainError> {
    offdiag_residuals_signed(gauge, p, gamma, RotationSign::Lower)
}

/// Residual off-diagonal couplings at either rotation solution.
///
/// The non-Hermitian gauge requires `8 G^2 gamma^2 Phi / N < 1`; at or
/// beyond that the hyperbolic rotation (a similarity transformation, not a
/// unitary) stops existing.
pub fn offdiag_residuals_signed(
    gauge: GaugeKind,
    p: &ModelParams,
    gamma: f64,
    sign: RotationSign,
) -> Result<OffDiagResidual, DomainError> {
    if !gamma.is_finite() {
        return Err(DomainError::NonFinite { name: "gamma", value: gamma });
    }
    let n = p.spin();
    let omg = p.splitting;
    let om = p.omega;
    match gauge {
        GaugeKind::Coulomb => {
            let k = 2.0 * SQRT_2 * p.g * gamma / n.sqrt();
            let mut theta = (-k).atan2(1.0);
            if sign == RotationSign::Upper {
                theta = wrap_angle(theta + PI);
            }
            let (b, c) = coulomb_bc(omg, p.g, n, gamma, 0.0, theta);
            Ok(OffDiagResidual { abs_b: b.norm(), abs_c: c.norm(), theta, chi: 0.0 })
        }
        GaugeKind::Dipole => {
            let k = 2.0 * SQRT_2 * p.g * gamma / n.sqrt();
            let mut theta = (k * p.eta).atan2(1.0);
            if sign == RotationSign::Upper {
                theta = wrap_angle(theta + PI);
            }
            let (b, c) = dipole_bc(omg, om, p.g, n, gamma, FRAC_PI_2, theta);
            Ok(OffDiagResidual { abs_b: b.norm(), abs_c: c.norm(), theta, chi: FRAC_PI_2 })
        }
        GaugeKind::Unified => {
            let phi_f = p.phase_factor();
            let k = 2.0 * SQRT_2 * p.g * gamma * (phi_f / n).sqrt();
            let mut theta = (-k).atan2(1.0);
            if sign == RotationSign::Upper {
                theta = wrap_angle(theta + PI);
            }
            let chi = (-p.eta * p.phi.sin()).atan2(p.phi.cos());
            let (b, c) = unified_bc(omg, om, p.g, n, gamma, p.phi, theta, chi);
            Ok(OffDiagResidual { abs_b: b.norm(), abs_c: c.norm(), theta, chi })
        }
        GaugeKind::NonHermitianUnified => {
            let phi_f = p.phase_factor();
            let x = 8.0 * p.g * p.g * gamma * gamma * phi_f / n;
            if x >= 1.0 {
                return Err(DomainError::NoSimilarityTransform { x });
            }
            let t = 2.0 * SQRT_2 * p.g * gamma * (phi_f / n).sqrt();
            let mut theta = t.atanh();
            let mut chi = (-p.phi.cos()).atan2(p.eta * p.phi.sin());
            if sign == RotationSign::Upper {
                theta = -theta;
                chi = wrap_angle(chi + PI);
            }
            let (b, c) = nh_bc(omg, om, p.g, n, gamma, p.phi, theta, chi);
            Ok(OffDiagResidual { abs_b: b.norm(), abs_c: c.norm(), theta, chi })
        }
    }
}

/// Wrap an angle into `(-pi, pi]`.
fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn unified_bc(
    omg: f64,
    om: f64,
    g: f64,
    n: f64,
    gamma: f64,
    varphi: f64,
    theta: f64,
    chi: f64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let c2 = (theta / 2.0).cos().powi(2);
    let s2 = (theta / 2.0).sin().powi(2);
    let e_m2 = Complex64::from_polar(1.0, -2.0 * chi);
    let e_p2 = Complex64::from_polar(1.0, 2.0 * chi);
    let pref = g * (2.0 / n).sqrt() * gamma;
    let b = pref
        * (omg * varphi.cos() * (c2 - e_m2 * s2) + i * om * varphi.sin() * (c2 + e_m2 * s2))
        + 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, -chi);
    let c = pref
        * (omg * varphi.cos() * (c2 - e_p2 * s2) - i * om * varphi.sin() * (e_p2 * s2 + c2))
        + 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, chi);
    (b, c)
}

fn coulomb_bc(
    omg: f64,
    g: f64,
    n: f64,
    gamma: f64,
    varphi: f64,
    theta: f64,
) -> (Complex64, Complex64) {
    let c2 = (theta / 2.0).cos().powi(2);
    let s2 = (theta / 2.0).sin().powi(2);
    let coup = SQRT_2 * g * omg / n.sqrt() * gamma * varphi.cos();
    let b = 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, -varphi)
        + coup * (c2 - Complex64::from_polar(1.0, -2.0 * varphi) * s2);
    let c = 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, varphi)
        + coup * (c2 - Complex64::from_polar(1.0, 2.0 * varphi) * s2);
    (b, c)
}

fn dipole_bc(
    omg: f64,
    om: f64,
    g: f64,
    n: f64,
    gamma: f64,
    varphi: f64,
    theta: f64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let c2 = (theta / 2.0).cos().powi(2);
    let s2 = (theta / 2.0).sin().powi(2);
    let coup = SQRT_2 * g * om / n.sqrt() * gamma * varphi.sin();
    let b = 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, -varphi)
        + i * coup * (c2 + Complex64::from_polar(1.0, -2.0 * varphi) * s2);
    let c = 0.5 * omg * theta.sin() * Complex64::from_polar(1.0, varphi)
        - i * coup * (Complex64::from_polar(1.0, 2.0 * varphi) * s2 + c2);
    (b, c)
}

fn nh_bc(
    omg: f64,
    om: f64,
    g: f64,
    n: f64,
    gamma: f64,
    varphi: f64,
    theta: f64,
    chi: f64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let c2 = (theta / 2.0).cosh().powi(2);
    let s2 = (theta / 2.0).sinh().powi(2);
    let e_p2 = Complex64::from_polar(1.0, 2.0 * chi);
    let e_m2 = Complex64::from_polar(1.0, -2.0 * chi);
    let pref = SQRT_2 * g * gamma / n.sqrt();
    let b = pref
        * (i * omg * varphi.cos() * (c2 - e_p2 * s2) - om * varphi.sin() * (c2 + e_p2 * s2))
        + 0.5 * omg * theta.sinh() * Complex64::from_polar(1.0, chi);
    let c = pref
        * (i * omg * varphi.cos() * (c2 - e_m2 * s2) + om * varphi.sin() * (c2 + e_m2 * s2))
        - 0.5 * omg * theta.sinh() * Complex64::from_polar(1.0, -chi);
    (b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing;
    use std::f64::consts::FRAC_PI_3;

    fn params(eta: f64, g: f64, n: u32, phi: f64) -> ModelParams {
        ModelParams::new(eta, g, n, phi).unwrap()
    }

    #[test]
    fn coulomb_superradiant_anchor() {
        // eta = 1, G = 1, N = 16: n_p = 2 - 1/8, gamma_c = sqrt(30),
        // eps = 1.875 - 4, delta_na = -1/4.
        let p = params(1.0, 1.0, 16, 0.0);
        let sol = solve_ground_state(GaugeKind::Coulomb, &p);
        assert_eq!(sol.phase, Phase::Superradiant);
        assert!((sol.n_p - 1.875).abs() < 1e-15);
        assert!((sol.gamma_c - 5.477225575051661).abs() < 1e-12);
        assert!((sol.energy.re - (-2.125)).abs() < 1e-12);
        assert_eq!(sol.energy.im, 0.0);
        assert!((sol.delta_na - (-0.25)).abs() < 1e-14);
        assert_eq!(sol.berry_per_atom.to_bits(), (2.0 * PI * sol.n_p).to_bits());
        assert!(sol.stability > 0.0);
    }

    #[test]
    fn critical_coupling_closed_forms() {
        let p = params(0.5, 0.1, 4, 0.0);
        assert!((critical_coupling(GaugeKind::Coulomb, &p) - 0.35355339059327373).abs() < 1e-15);
        let p = params(1.5, 0.1, 4, FRAC_PI_2);
        assert!((critical_coupling(GaugeKind::Unified, &p) - 0.408248290463863).abs() < 1e-13);
        // Dipole is phase independent.
        let p = params(0.5, 0.1, 4, 1.1);
        assert!(
            (critical_coupling(GaugeKind::Dipole, &p) - std::f64::consts::FRAC_1_SQRT_2).abs()
                < 1e-15
        );
    }

    #[test]
    fn critical_coupling_matches_curvature_sign_change() {
        // Independent check: G_c is where the boundary curvature of the
        // minus branch at gamma = 0 changes sign.
        for (gauge, eta, phi) in [
            (GaugeKind::Coulomb, 0.5, 0.0),
            (GaugeKind::Dipole, 1.3, 0.0),
            (GaugeKind::Unified, 0.8, FRAC_PI_3),
        ] {
            let curv = |g: f64| {
                let p = params(eta, g, 8, phi);
                testing::boundary_curvature_fd(
                    |x| energy(gauge, &p, x, Branch::Minus).unwrap().re,
                    0.0,
                    1e-2,
                )
            };
            let root = testing::bisect_sign_change(curv, 1e-3, 3.0, 200).unwrap();
            let p = params(eta, 1.0, 8, phi);
            let g_c = critical_coupling(gauge, &p);
            assert!(
                (root - g_c).abs() <= 1e-8 * g_c,
                "gauge {gauge:?}: curvature root {root} vs closed form {g_c}"
            );
        }
    }

    #[test]
    fn normal_phase_is_exact() {
        let p = params(1.2, 0.3, 7, 0.4);
        for gauge in GaugeKind::ALL {
            let sol = solve_ground_state(gauge, &p);
            if gauge.is_hermitian() {
                assert!(p.g < critical_coupling(gauge, &p));
            }
            assert_eq!(sol.phase, Phase::Normal);
            assert_eq!(sol.gamma_c, 0.0);
            assert_eq!(sol.n_p, 0.0);
            assert_eq!(sol.energy, Complex64::new(-1.0, 0.0));
            assert_eq!(sol.delta_na, -1.0);
            assert_eq!(sol.berry_per_atom, 0.0);
            assert!(sol.stability > 0.0);
        }
    }

    #[test]
    fn at_critical_coupling_ground_is_normal() {
        let p = params(1.0, 0.5, 4, 0.0);
        assert_eq!(critical_coupling(GaugeKind::Coulomb, &p), 0.5);
        assert!(superradiant_gamma(GaugeKind::Coulomb, &p).is_none());
        assert_eq!(solve_ground_state(GaugeKind::Coulomb, &p).phase, Phase::Normal);
    }

    #[test]
    fn transition_is_continuous() {
        let eps = 1e-6;
        for (gauge, eta, phi) in [
            (GaugeKind::Coulomb, 1.0, 0.0),
            (GaugeKind::Dipole, 0.7, 0.0),
            (GaugeKind::Unified, 1.4, FRAC_PI_3),
        ] {
            let g_c = critical_coupling(gauge, &params(eta, 0.1, 4, phi));
            let below = solve_ground_state(gauge, &params(eta, g_c - eps, 4, phi));
            let above = solve_ground_state(gauge, &params(eta, g_c + eps, 4, phi));
            assert_eq!(below.phase, Phase::Normal);
            assert_eq!(above.phase, Phase::Superradiant);
            assert!(above.n_p < 1e-4, "n_p jump {}", above.n_p);
            assert!((above.energy.re + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn superradiant_amplitude_matches_derivative_root() {
        // Independent locator: bisect the analytic gamma derivative of the
        // minus branch.
        for (gauge, eta, g, phi) in [
            (GaugeKind::Coulomb, 1.0, 1.0, 0.0),
            (GaugeKind::Dipole, 0.8, 0.9, 0.0),
            (GaugeKind::Unified, 1.2, 0.7, FRAC_PI_3),
        ] {
            let p = params(eta, g, 16, phi);
            let gamma_c = superradiant_gamma(gauge, &p).unwrap();
            let n = p.spin();
            let c = 8.0 * g * g * gauge_phase_factor(gauge, &p) / n;
            let deriv = |x: f64| {
                2.0 * p.omega * x / n - p.splitting * c * x / (1.0 + c * x * x).sqrt()
            };
            let hi = 10.0 * n.sqrt() * g.max(1.0);
            let root = testing::bisect_sign_change(deriv, 1e-9, hi, 200).unwrap();
            assert!(
                (root - gamma_c).abs() <= 1e-10 * gamma_c,
                "{gauge:?}: {root} vs {gamma_c}"
            );
        }
    }

    #[test]
    fn superradiant_minimum_agrees_with_golden_section() {
        let p = params(1.0, 1.0, 16, 0.0);
        let f = |x: f64| energy(GaugeKind::Coulomb, &p, x, Branch::Minus).unwrap().re;
        let hi = 10.0 * p.spin().sqrt() * p.g.max(1.0);
        let (x_min, f_min) = testing::golden_section_min(f, 0.0, hi, 1e-12);
        // Golden section locates the minimum to about sqrt(eps) in x but the
        // value itself to full precision.
        assert!((x_min - 5.477225575051661).abs() < 1e-4);
        assert!((f_min - (-2.125)).abs() < 1e-9);
    }

    #[test]
    fn curvature_at_zero_coupling_is_bare() {
        let p = params(1.3, 0.0, 5, 0.7);
        for gauge in GaugeKind::ALL {
            for branch in [Branch::Minus, Branch::Plus] {
                let d2 = second_derivative(gauge, &p, 0.9, branch).unwrap();
                assert_eq!(d2, 2.0 * p.omega / p.spin());
            }
        }
    }

    #[test]
    fn curvature_matches_finite_differences() {
        let p = params(1.3, 0.8, 9, std::f64::consts::FRAC_PI_6);
        for gauge in GaugeKind::HERMITIAN {
            for branch in [Branch::Minus, Branch::Plus] {
                let f = |x: f64| energy(gauge, &p, x, branch).unwrap().re;
                let analytic = second_derivative(gauge, &p, 1.7, branch).unwrap();
                let fd = testing::second_derivative_fd(f, 1.7, 1e-3);
                assert!(
                    (fd - analytic).abs() <= 1e-6 * analytic.abs().max(1.0),
                    "{gauge:?} {branch:?}: fd {fd} vs analytic {analytic}"
                );
            }
        }
        // Non-Hermitian below the EP.
        let p = params(1.0, 0.2, 9, FRAC_PI_3);
        for branch in [Branch::Minus, Branch::Plus] {
            let f = |x: f64| energy(GaugeKind::NonHermitianUnified, &p, x, branch).unwrap().re;
            let analytic =
                second_derivative(GaugeKind::NonHermitianUnified, &p, 0.5, branch).unwrap();
            let fd = testing::second_derivative_fd(f, 0.5, 1e-3);
            assert!((fd - analytic).abs() <= 1e-6 * analytic.abs().max(1.0));
        }
    }

    #[test]
    fn curvature_rejects_complex_landscape() {
        let p = params(1.0, 1.0, 4, 0.0);
        // 8 G^2 gamma^2 Phi / N = 2 at gamma = 1, well past the EP.
        let err =
            second_derivative(GaugeKind::NonHermitianUnified, &p, 1.0, Branch::Minus).unwrap_err();
        assert!(err.to_string().contains("curvature undefined for complex landscape"));
    }

    #[test]
    fn nonhermitian_unstable_pair_anchor() {
        // eta = 1, phi = pi/3, G = 0.4: Phi = 1, n_p = (1 - 0.4096)/1.28.
        let p = params(1.0, 0.4, 10, FRAC_PI_3);
        let sol = unstable_superradiant(GaugeKind::NonHermitianUnified, &p).unwrap();
        assert_eq!(sol.phase, Phase::UnstableSuperradiant);
        assert!((sol.n_p - 0.46125).abs() < 1e-15);
        assert!((sol.energy.re - 1.10125).abs() < 1e-12);
        assert_eq!(sol.energy.im, 0.0);
        assert!((sol.delta_na - 1.5625).abs() < 1e-12);
        assert!(sol.stability < 0.0);
    }

    #[test]
    fn unstable_pair_region_is_strict() {
        let p = |g| params(1.0, g, 6, FRAC_PI_3);
        let gauge = GaugeKind::NonHermitianUnified;
        assert!(unstable_superradiant(gauge, &p(0.0)).is_none());
        assert!(unstable_superradiant(gauge, &p(0.5)).is_none());
        assert!(unstable_superradiant(gauge, &p(0.7)).is_none());
        assert!(unstable_superradiant(gauge, &p(0.3)).is_some());
        for gauge in GaugeKind::HERMITIAN {
            assert!(unstable_superradiant(gauge, &p(0.3)).is_none());
        }
    }

    #[test]
    fn exceptional_point_anchors() {
        // gamma^2 / N = 1 with Phi = 1: G_ep = 1 / (2 sqrt(2)).
        let p = params(1.0, 0.1, 4, FRAC_PI_3);
        let g_ep = exceptional_point(&p, 2.0).unwrap();
        assert!((g_ep - 0.35355339059327373).abs() < 1e-15);
        // gamma^2 / N = 2: G_ep = 1/4.
        let p = params(1.0, 0.1, 2, FRAC_PI_3);
        let g_ep = exceptional_point(&p, 2.0).unwrap();
        assert!((g_ep - 0.25).abs() < 1e-15);
        assert!(matches!(exceptional_point(&p, 0.0), Err(DomainError::ZeroGamma)));
    }

    #[test]
    fn exceptional_point_matches_radicand_sign_scan() {
        let p = params(1.4, 0.1, 5, 0.9);
        let gamma = 1.3;
        let g_ep = exceptional_point(&p, gamma).unwrap();
        let radicand = |g: f64| {
            let q = params(p.eta, g, p.n_atoms, p.phi);
            1.0 - 8.0 * g * g * gamma * gamma * q.phase_factor() / q.spin()
        };
        let root = testing::bisect_sign_change(radicand, 1e-6, 10.0, 200).unwrap();
        assert!((root - g_ep).abs() <= 1e-10 * g_ep);
    }

    #[test]
    fn scaled_branch_energy_matches_full_form() {
        let gauge = GaugeKind::NonHermitianUnified;
        for &(eta, g, n, phi, gamma) in
            &[(1.0, 0.4, 6, 0.7, 0.9), (0.6, 1.1, 3, 2.0, 1.7), (1.8, 0.2, 10, 0.0, 2.4)]
        {
            let p = params(eta, g, n, phi);
            let y = gamma * gamma / p.spin();
            for branch in [Branch::Minus, Branch::Plus] {
                let full = energy(gauge, &p, gamma, branch).unwrap();
                let scaled = branch_energy_scaled(eta, p.phi, g, y, branch).unwrap();
                assert!((full - scaled).norm() <= 1e-14 * full.norm().max(1.0));
            }
        }
        // An exact radicand zero stays exact in the scaled form.
        let merged = branch_energy_scaled(1.0, 0.0, 0.5, 0.5, Branch::Minus).unwrap();
        assert_eq!(merged, Complex64::new(0.5, 0.0));
    }

    #[test]
    fn branches_conjugate_beyond_exceptional_point() {
        let p = params(1.0, 1.0, 4, 0.0);
        let gauge = GaugeKind::NonHermitianUnified;
        let minus = energy(gauge, &p, 1.5, Branch::Minus).unwrap();
        let plus = energy(gauge, &p, 1.5, Branch::Plus).unwrap();
        assert!(minus.im < 0.0);
        assert_eq!(minus, plus.conj());
        assert_eq!(minus.re, plus.re);
        // Below the EP both are exactly real.
        let below = energy(gauge, &p, 0.1, Branch::Minus).unwrap();
        assert_eq!(below.im, 0.0);
    }

    #[test]
    fn offdiag_vanishes_at_solved_rotation() {
        let cases = [
            (GaugeKind::Coulomb, params(1.0, 0.8, 12, 0.0), 2.5),
            (GaugeKind::Dipole, params(0.7, 1.1, 9, 0.0), 1.8),
            (GaugeKind::Unified, params(1.4, 0.9, 25, FRAC_PI_3), 3.2),
            (GaugeKind::NonHermitianUnified, params(1.2, 0.3, 100, FRAC_PI_3), 5.0),
        ];
        for (gauge, p, gamma) in cases {
            for sign in [RotationSign::Lower, RotationSign::Upper] {
                let r = offdiag_residuals_signed(gauge, &p, gamma, sign).unwrap();
                assert!(
                    r.abs_b < 1e-12 && r.abs_c < 1e-12,
                    "{gauge:?} {sign:?}: |B| = {}, |C| = {}",
                    r.abs_b,
                    r.abs_c
                );
            }
        }
    }

    #[test]
    fn offdiag_at_zero_amplitude_is_identity_rotation() {
        let p = params(1.1, 0.9, 5, FRAC_PI_3);
        for gauge in GaugeKind::ALL {
            let r = offdiag_residuals(gauge, &p, 0.0).unwrap();
            assert_eq!(r.theta, 0.0);
            assert_eq!(r.abs_b, 0.0);
            assert_eq!(r.abs_c, 0.0);
        }
    }

    #[test]
    fn offdiag_rejects_rotation_beyond_exceptional_point() {
        let p = params(1.0, 1.0, 4, 0.0);
        let err = offdiag_residuals(GaugeKind::NonHermitianUnified, &p, 1.0).unwrap_err();
        assert!(err.to_string().contains("similarity transformation does not exist"));
    }

    #[test]
    fn phase_labels() {
        assert_eq!(Phase::Normal.label(), "NP");
        assert_eq!(Phase::Superradiant.label(), "SP");
        assert_eq!(Phase::UnstableSuperradiant.label(), "unstable-SP");
    }
}
