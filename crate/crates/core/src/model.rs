//! Model parameters, gauge kinds, and validation.
//!
//! Conventions fixed here and relied on everywhere else:
//! - the atomic splitting `Omega` is the energy unit (default 1),
//! - `eta = omega / Omega` is the detuning ratio,
//! - the collective spin of N three-level ladder atoms is `s = N`,
//! - the coherent-field phase `phi` is reduced to `[0, pi)`; every formula
//!   depends on it only through `cos^2`/`sin^2`, which are pi-periodic.

use std::fmt;
use std::str::FromStr;

/// Tolerance for cross-checking a redundantly supplied `eta` against
/// `omega / Omega`.
pub const ETA_CONSISTENCY_TOL: f64 = 1e-12;

/// Which form of the light-matter coupling enters the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeKind {
    /// `A.p` coupling only; the field phase drops out of the physics.
    Coulomb,
    /// `d.E` coupling only; the field phase drops out of the physics.
    Dipole,
    /// Both couplings; the field phase enters through `Phi(eta, phi)`.
    Unified,
    /// Unified coupling multiplied by `i`; the landscape turns complex
    /// beyond an exceptional point and the superradiant phase is lost.
    NonHermitianUnified,
}

impl GaugeKind {
    pub const ALL: [GaugeKind; 4] = [
        GaugeKind::Coulomb,
        GaugeKind::Dipole,
        GaugeKind::Unified,
        GaugeKind::NonHermitianUnified,
    ];

    pub const HERMITIAN: [GaugeKind; 3] =
        [GaugeKind::Coulomb, GaugeKind::Dipole, GaugeKind::Unified];

    pub fn is_hermitian(self) -> bool {
        !matches!(self, GaugeKind::NonHermitianUnified)
    }

    pub fn label(self) -> &'static str {
        match self {
            GaugeKind::Coulomb => "coulomb",
            GaugeKind::Dipole => "dipole",
            GaugeKind::Unified => "unified",
            GaugeKind::NonHermitianUnified => "non-hermitian-unified",
        }
    }
}

impl fmt::Display for GaugeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GaugeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "coulomb" => Ok(GaugeKind::Coulomb),
            "dipole" => Ok(GaugeKind::Dipole),
            "unified" => Ok(GaugeKind::Unified),
            "non-hermitian-unified" | "nonhermitian" | "non-hermitian" => {
                Ok(GaugeKind::NonHermitianUnified)
            }
            other => Err(format!(
                "unknown gauge '{other}' (expected coulomb, dipole, unified, non-hermitian-unified)"
            )),
        }
    }
}

/// A single invalid input field and why it was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIssue {
    pub field: &'static str,
    pub message: String,
}

/// Validation failure listing every offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub issues: Vec<FieldIssue>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid parameters: ")?;
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", issue.field, issue.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

/// Domain error for standalone evaluations outside validated parameters.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("{name} must be finite (got {value})")]
    NonFinite { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative (got {value})")]
    Negative { name: &'static str, value: f64 },
    #[error("exceptional point is undefined at gamma = 0")]
    ZeroGamma,
    #[error("curvature undefined for complex landscape (radicand {radicand:.6e} at or beyond the exceptional point)")]
    ComplexLandscape { radicand: f64 },
    #[error("similarity transformation does not exist at or beyond the exceptional point (8 G^2 gamma^2 Phi / N = {x:.6})")]
    NoSimilarityTransform { x: f64 },
}

/// Raw, possibly redundant user inputs prior to validation.
///
/// Frequencies may be given as `eta`, as `omega` (with `splitting` defaulting
/// to 1), or both; when both are present they must agree to
/// [`ETA_CONSISTENCY_TOL`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RawParams {
    /// Cavity frequency `omega`.
    pub omega: Option<f64>,
    /// Atomic splitting `Omega`; defaults to 1 (the energy unit).
    pub splitting: Option<f64>,
    /// Detuning ratio `eta = omega / Omega`.
    pub eta: Option<f64>,
    /// Collective coupling strength `G`.
    pub g: f64,
    /// Atom count `N`; the collective spin is `s = N`.
    pub n_atoms: u32,
    /// Coherent-field phase, radians; reduced to `[0, pi)`.
    pub phi: f64,
}

/// Validated model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub splitting: f64,
    pub eta: f64,
    pub g: f64,
    pub n_atoms: u32,
    /// Reduced to `[0, pi)`.
    pub phi: f64,
}

/// Validate raw inputs into [`ModelParams`], reporting every bad field.
pub fn validate_params(raw: RawParams) -> Result<ModelParams, ValidationError> {
    let mut issues = Vec::new();
    let mut reject = |field: &'static str, message: String| {
        issues.push(FieldIssue { field, message });
    };

    let splitting = raw.splitting.unwrap_or(1.0);
    if !splitting.is_finite() || splitting <= 0.0 {
        reject("splitting", format!("must be a positive finite number (got {splitting})"));
    }

    let (omega, eta) = match (raw.omega, raw.eta) {
        (None, None) => {
            reject("eta", "either eta or omega must be supplied".to_string());
            (f64::NAN, f64::NAN)
        }
        (Some(omega), None) => (omega, omega / splitting),
        (None, Some(eta)) => (eta * splitting, eta),
        (Some(omega), Some(eta)) => {
            if splitting > 0.0 && (eta - omega / splitting).abs() > ETA_CONSISTENCY_TOL {
                reject(
                    "eta",
                    format!(
                        "inconsistent with omega/splitting: |{eta} - {}| > {ETA_CONSISTENCY_TOL:e}",
                        omega / splitting
                    ),
                );
            }
            (omega, eta)
        }
    };

    if omega.is_finite() && (!eta.is_finite() || eta <= 0.0 || omega <= 0.0) {
        if raw.omega.is_some() {
            reject("omega", format!("must be a positive finite number (got {omega})"));
        } else {
            reject("eta", format!("must be a positive finite number (got {eta})"));
        }
    } else if !omega.is_finite() && raw.omega.is_some() {
        reject("omega", format!("must be a positive finite number (got {omega})"));
    }

    if !raw.g.is_finite() || raw.g < 0.0 {
        reject("g", format!("must be a nonnegative finite number (got {})", raw.g));
    }

    if raw.n_atoms == 0 {
        reject("n", "atom count must be at least 1".to_string());
    }

    let phi = if raw.phi.is_finite() {
        reduce_phi(raw.phi)
    } else {
        reject("phi", format!("must be finite (got {})", raw.phi));
        f64::NAN
    };

    if issues.is_empty() {
        Ok(ModelParams { omega, splitting, eta, g: raw.g, n_atoms: raw.n_atoms, phi })
    } else {
        Err(ValidationError { issues })
    }
}

/// Reduce an angle to `[0, pi)`. `Phi` and every downstream observable are
/// invariant under this reduction.
fn reduce_phi(phi: f64) -> f64 {
    let r = phi.rem_euclid(std::f64::consts::PI);
    if r >= std::f64::consts::PI {
        0.0
    } else {
        r
    }
}

impl ModelParams {
    /// Parameters with `Omega = 1`, `omega = eta`.
    pub fn new(eta: f64, g: f64, n_atoms: u32, phi: f64) -> Result<Self, ValidationError> {
        validate_params(RawParams { eta: Some(eta), g, n_atoms, phi, ..RawParams::default() })
    }

    /// Resonant (`eta = 1`) parameters with zero field phase.
    ///
    /// # Panics
    /// Panics if `g` is negative/non-finite or `n_atoms` is 0.
    pub fn resonant(g: f64, n_atoms: u32) -> Self {
        Self::new(1.0, g, n_atoms, 0.0).expect("invalid resonant parameters")
    }

    /// Collective spin of the N-atom three-level ladder: `s = N`,
    /// so the symmetric subspace has `2N + 1` levels.
    pub fn spin(&self) -> f64 {
        f64::from(self.n_atoms)
    }

    /// Number of collective atomic levels, `2N + 1`.
    pub fn spin_dim(&self) -> usize {
        2 * self.n_atoms as usize + 1
    }

    /// `Phi(eta, phi)` for these (validated) parameters.
    pub fn phase_factor(&self) -> f64 {
        let (s, c) = self.phi.sin_cos();
        c * c + self.eta * self.eta * s * s
    }
}

/// Phase-structure function `Phi(eta, phi) = cos^2(phi) + eta^2 sin^2(phi)`.
///
/// Interpolates the gauge weight of the two coupling channels: 1 at `phi = 0`
/// (Coulomb-like), `eta^2` at `phi = pi/2` (dipole-like). Always positive,
/// pi-periodic and even in `phi`.
pub fn phase_factor(eta: f64, phi: f64) -> Result<f64, DomainError> {
    if !eta.is_finite() {
        return Err(DomainError::NonFinite { name: "eta", value: eta });
    }
    if !phi.is_finite() {
        return Err(DomainError::NonFinite { name: "phi", value: phi });
    }
    let (s, c) = phi.sin_cos();
    Ok(c * c + eta * eta * s * s)
}
