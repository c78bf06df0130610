//! Ground-state structure of N three-level atoms in a single-mode cavity.
//!
//! The atoms form a Xi-type ladder whose collective algebra is a spin s = N
//! (not N/2: the ladder spans 2N+1 symmetric levels). A boson coherent state
//! `alpha = gamma * exp(i*phi)` for the cavity mode together with a rotated
//! spin coherent state for the atoms turns the Hamiltonian into an effective
//! energy landscape `eps(gamma)` per atom, whose minima give the normal (NP)
//! and superradiant (SP) phases and the transition between them.
//!
//! Three Hermitian gauge choices of the light-matter coupling are covered
//! (Coulomb `A.p`, dipole `d.E`, and the unified form carrying both, where
//! the field phase becomes physical) plus a non-Hermitian variant of the
//! unified form whose landscape turns complex beyond an exceptional point.
//!
//! Modules:
//! - [`model`]: parameters, gauge kinds, validation, the phase-structure
//!   function `Phi(eta, phi)`.
//! - [`variational`]: closed-form landscape, critical couplings, ground-state
//!   solver, rotation/diagonalization residuals, exceptional points.
//! - [`ed`]: exact diagonalization on a truncated Fock space, used as an
//!   independent cross-check of the variational results.
//! - [`sweep`]: deterministic parameter sweeps (coupling curves, phase
//!   diagrams, exceptional-point scans, ED comparison tables).
//! - [`testing`]: numeric oracles (minimizers, bisection, finite differences)
//!   shared by the test suites.

pub mod ed;
pub mod model;
pub mod sweep;
pub mod testing;
pub mod variational;

pub use model::{GaugeKind, ModelParams, RawParams};
pub use variational::{solve_ground_state, VariationalSolution};
