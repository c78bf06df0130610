//! Parameter sweeps: coupling curves, phase diagrams, exceptional-point
//! scans, and variational-vs-exact comparisons.
//!
//! Cells are pure functions of their grid index, so parallel and serial
//! execution produce bitwise-identical results. Every entry point with a
//! plain name runs on the rayon pool when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; the `*_serial` variants always
//! run sequentially. Grids are laid out detuning-major: the coupling index
//! varies fastest.

use num_complex::Complex64;

use crate::ed::{self, EdError, EdLimits, EdResult};
use crate::model::{GaugeKind, ModelParams};
use crate::variational::{self, Branch, VariationalSolution};

/// Upper bound on sweep cells accepted by default.
pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;
/// Upper bound on exact-diagonalization convergence runs accepted by default.
pub const DEFAULT_ED_BUDGET: usize = 64;
/// Default resolution of one axis.
pub const DEFAULT_POINTS: usize = 201;

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("sweep would evaluate {cells} cells, over the budget of {budget}; coarsen the axes or raise the budget")]
    BudgetExceeded { cells: usize, budget: usize },
    #[error("comparison would run {solves} diagonalization runs, over the budget of {budget}")]
    EdBudgetExceeded { solves: usize, budget: usize },
}

/// A uniformly spaced closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, SweepError> {
        let axis = Axis { min, max, count };
        axis.check("axis")?;
        Ok(axis)
    }

    fn check(&self, field: &'static str) -> Result<(), SweepError> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(SweepError::Invalid {
                field,
                message: format!("endpoints must be finite (got {}..{})", self.min, self.max),
            });
        }
        if self.min >= self.max {
            return Err(SweepError::Invalid {
                field,
                message: format!("needs min < max (got {}..{})", self.min, self.max),
            });
        }
        if self.count < 2 {
            return Err(SweepError::Invalid {
                field,
                message: format!("needs at least 2 points (got {})", self.count),
            });
        }
        Ok(())
    }

    /// `i`-th grid value. Both endpoints are reproduced exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Ground-state observables along a coupling axis at fixed detuning.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSweep {
    pub gauge: GaugeKind,
    pub eta: f64,
    pub phi: f64,
    pub n_atoms: u32,
    pub g_axis: Axis,
}

impl CouplingSweep {
    /// Conventional curve: `G` from 0 to 2 at the default resolution.
    pub fn default_curve(gauge: GaugeKind, eta: f64, phi: f64, n_atoms: u32) -> Self {
        Self {
            gauge,
            eta,
            phi,
            n_atoms,
            g_axis: Axis { min: 0.0, max: 2.0, count: DEFAULT_POINTS },
        }
    }
}

/// Ground-state observables over a coupling x detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    pub gauge: GaugeKind,
    pub phi: f64,
    pub n_atoms: u32,
    pub g_axis: Axis,
    pub eta_axis: Axis,
}

impl PhaseDiagram {
    /// Conventional grid: `G` in `[0, 1.5]`, `eta` in `[0.2, 2]`.
    pub fn default_grid(gauge: GaugeKind, phi: f64, n_atoms: u32) -> Self {
        Self {
            gauge,
            phi,
            n_atoms,
            g_axis: Axis { min: 0.0, max: 1.5, count: DEFAULT_POINTS },
            eta_axis: Axis { min: 0.2, max: 2.0, count: DEFAULT_POINTS },
        }
    }
}

/// One evaluated sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    /// Row-major cell index (detuning-major on grids).
    pub cell: usize,
    pub eta: f64,
    pub phi: f64,
    pub g: f64,
    pub n_atoms: u32,
    /// Critical coupling at this cell's detuning.
    pub g_c: f64,
    pub ground: VariationalSolution,
    /// Reversed-sign stationary pair, present only in the non-Hermitian
    /// gauge below its critical coupling.
    pub unstable: Option<VariationalSolution>,
}

/// Non-Hermitian branch energies along a coupling or field-parameter axis.
///
/// Energies depend on the field amplitude only through `y = gamma^2 / N`, so
/// the scan is atom-count free.
#[derive(Debug, Clone, PartialEq)]
pub struct EpScan {
    pub eta: f64,
    pub phi: f64,
    pub axis: EpAxis,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EpAxis {
    /// Sweep the coupling at fixed `y = gamma^2 / N`.
    Coupling { gamma_sq_per_n: f64, g_axis: Axis },
    /// Sweep `y = gamma^2 / N` at fixed coupling.
    FieldParam { g: f64, y_axis: Axis },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpRecord {
    pub cell: usize,
    pub eta: f64,
    pub phi: f64,
    pub g: f64,
    pub gamma_sq_per_n: f64,
    /// Exceptional-point coupling for this cell's `y`; absent at `y = 0`
    /// where no exceptional point exists.
    pub g_ep: Option<f64>,
    pub eps_minus: Complex64,
    pub eps_plus: Complex64,
}

/// Variational-vs-exact comparison over a list of atom counts.
#[derive(Debug, Clone)]
pub struct EdCompare {
    pub gauge: GaugeKind,
    pub eta: f64,
    pub phi: f64,
    pub g: f64,
    pub n_values: Vec<u32>,
    /// Per-atom energy tolerance for the cutoff doubling.
    pub tol: f64,
    pub limits: EdLimits,
}

#[derive(Debug)]
pub struct EdCompareRow {
    pub n_atoms: u32,
    pub variational: VariationalSolution,
    pub outcome: EdRowOutcome,
}

#[derive(Debug)]
pub enum EdRowOutcome {
    Solved(EdResult),
    Failed { message: String },
}

fn check_common(
    eta: f64,
    phi: f64,
    n_atoms: u32,
) -> Result<(), SweepError> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(SweepError::Invalid {
            field: "eta",
            message: format!("must be a positive finite number (got {eta})"),
        });
    }
    if !phi.is_finite() {
        return Err(SweepError::Invalid {
            field: "phi",
            message: format!("must be finite (got {phi})"),
        });
    }
    if n_atoms == 0 {
        return Err(SweepError::Invalid {
            field: "n",
            message: "atom count must be at least 1".to_string(),
        });
    }
    Ok(())
}

fn check_g_axis(axis: &Axis, field: &'static str) -> Result<(), SweepError> {
    axis.check(field)?;
    if axis.min < 0.0 {
        return Err(SweepError::Invalid {
            field,
            message: format!("coupling must be nonnegative (axis starts at {})", axis.min),
        });
    }
    Ok(())
}

fn check_budget(cells: usize, budget: usize) -> Result<(), SweepError> {
    if cells > budget {
        return Err(SweepError::BudgetExceeded { cells, budget });
    }
    Ok(())
}

fn map_cells_serial<T>(count: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(f).collect()
}

#[cfg(feature = "parallel")]
fn map_cells<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_cells<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    map_cells_serial(count, f)
}

fn sweep_cell(
    gauge: GaugeKind,
    eta: f64,
    phi: f64,
    g: f64,
    n_atoms: u32,
    cell: usize,
) -> SweepRecord {
    let p = ModelParams::new(eta, g, n_atoms, phi).expect("axes validated before mapping");
    SweepRecord {
        cell,
        eta,
        phi: p.phi,
        g,
        n_atoms,
        g_c: variational::critical_coupling(gauge, &p),
        ground: variational::solve_ground_state(gauge, &p),
        unstable: variational::unstable_superradiant(gauge, &p),
    }
}

fn coupling_sweep_checked(spec: &CouplingSweep, budget: usize) -> Result<usize, SweepError> {
    check_common(spec.eta, spec.phi, spec.n_atoms)?;
    check_g_axis(&spec.g_axis, "g_axis")?;
    check_budget(spec.g_axis.count, budget)?;
    Ok(spec.g_axis.count)
}

pub fn coupling_sweep(
    spec: &CouplingSweep,
    budget: usize,
) -> Result<Vec<SweepRecord>, SweepError> {
    let cells = coupling_sweep_checked(spec, budget)?;
    Ok(map_cells(cells, |i| {
        sweep_cell(spec.gauge, spec.eta, spec.phi, spec.g_axis.value(i), spec.n_atoms, i)
    }))
}

pub fn coupling_sweep_serial(
    spec: &CouplingSweep,
    budget: usize,
) -> Result<Vec<SweepRecord>, SweepError> {
    let cells = coupling_sweep_checked(spec, budget)?;
    Ok(map_cells_serial(cells, |i| {
        sweep_cell(spec.gauge, spec.eta, spec.phi, spec.g_axis.value(i), spec.n_atoms, i)
    }))
}

fn phase_diagram_checked(spec: &PhaseDiagram, budget: usize) -> Result<usize, SweepError> {
    check_common(1.0, spec.phi, spec.n_atoms)?;
    check_g_axis(&spec.g_axis, "g_axis")?;
    spec.eta_axis.check("eta_axis")?;
    if spec.eta_axis.min <= 0.0 {
        return Err(SweepError::Invalid {
            field: "eta_axis",
            message: format!("detuning must stay positive (axis starts at {})", spec.eta_axis.min),
        });
    }
    let cells = spec
        .eta_axis
        .count
        .checked_mul(spec.g_axis.count)
        .ok_or(SweepError::BudgetExceeded { cells: usize::MAX, budget })?;
    check_budget(cells, budget)?;
    Ok(cells)
}

fn diagram_cell(spec: &PhaseDiagram, i: usize) -> SweepRecord {
    let eta = spec.eta_axis.value(i / spec.g_axis.count);
    let g = spec.g_axis.value(i % spec.g_axis.count);
    sweep_cell(spec.gauge, eta, spec.phi, g, spec.n_atoms, i)
}

pub fn phase_diagram(
    spec: &PhaseDiagram,
    budget: usize,
) -> Result<Vec<SweepRecord>, SweepError> {
    let cells = phase_diagram_checked(spec, budget)?;
    Ok(map_cells(cells, |i| diagram_cell(spec, i)))
}

pub fn phase_diagram_serial(
    spec: &PhaseDiagram,
    budget: usize,
) -> Result<Vec<SweepRecord>, SweepError> {
    let cells = phase_diagram_checked(spec, budget)?;
    Ok(map_cells_serial(cells, |i| diagram_cell(spec, i)))
}

/// Critical-coupling boundary `(eta, G_c)` along a detuning axis.
pub fn boundary_curve(
    gauge: GaugeKind,
    phi: f64,
    eta_axis: &Axis,
) -> Result<Vec<(f64, f64)>, SweepError> {
    eta_axis.check("eta_axis")?;
    if eta_axis.min <= 0.0 {
        return Err(SweepError::Invalid {
            field: "eta_axis",
            message: format!("detuning must stay positive (axis starts at {})", eta_axis.min),
        });
    }
    check_common(1.0, phi, 1)?;
    Ok((0..eta_axis.count)
        .map(|i| {
            let eta = eta_axis.value(i);
            let p = ModelParams::new(eta, 0.0, 1, phi).expect("axis validated");
            (eta, variational::critical_coupling(gauge, &p))
        })
        .collect())
}

fn ep_scan_checked(spec: &EpScan, budget: usize) -> Result<usize, SweepError> {
    check_common(spec.eta, spec.phi, 1)?;
    let count = match &spec.axis {
        EpAxis::Coupling { gamma_sq_per_n, g_axis } => {
            if !gamma_sq_per_n.is_finite() || *gamma_sq_per_n <= 0.0 {
                return Err(SweepError::Invalid {
                    field: "gamma_sq_per_n",
                    message: format!("must be a positive finite number (got {gamma_sq_per_n})"),
                });
            }
            check_g_axis(g_axis, "g_axis")?;
            g_axis.count
        }
        EpAxis::FieldParam { g, y_axis } => {
            if !g.is_finite() || *g < 0.0 {
                return Err(SweepError::Invalid {
                    field: "g",
                    message: format!("must be a nonnegative finite number (got {g})"),
                });
            }
            y_axis.check("y_axis")?;
            if y_axis.min < 0.0 {
                return Err(SweepError::Invalid {
                    field: "y_axis",
                    message: format!(
                        "gamma^2/N must be nonnegative (axis starts at {})",
                        y_axis.min
                    ),
                });
            }
            y_axis.count
        }
    };
    check_budget(count, budget)?;
    Ok(count)
}

fn ep_cell(spec: &EpScan, i: usize) -> EpRecord {
    let (g, y) = match &spec.axis {
        EpAxis::Coupling { gamma_sq_per_n, g_axis } => (g_axis.value(i), *gamma_sq_per_n),
        EpAxis::FieldParam { g, y_axis } => (*g, y_axis.value(i)),
    };
    // N-free evaluation: energies depend on gamma only through y = gamma^2 / N.
    let phi = ModelParams::new(spec.eta, g, 1, spec.phi).expect("inputs validated").phi;
    let eps_minus = variational::branch_energy_scaled(spec.eta, phi, g, y, Branch::Minus)
        .expect("inputs validated");
    let eps_plus = variational::branch_energy_scaled(spec.eta, phi, g, y, Branch::Plus)
        .expect("inputs validated");
    let g_ep = variational::exceptional_point_scaled(spec.eta, phi, y).ok();
    EpRecord {
        cell: i,
        eta: spec.eta,
        phi,
        g,
        gamma_sq_per_n: y,
        g_ep,
        eps_minus,
        eps_plus,
    }
}

pub fn ep_scan(spec: &EpScan, budget: usize) -> Result<Vec<EpRecord>, SweepError> {
    let cells = ep_scan_checked(spec, budget)?;
    Ok(map_cells(cells, |i| ep_cell(spec, i)))
}

pub fn ep_scan_serial(spec: &EpScan, budget: usize) -> Result<Vec<EpRecord>, SweepError> {
    let cells = ep_scan_checked(spec, budget)?;
    Ok(map_cells_serial(cells, |i| ep_cell(spec, i)))
}

/// Run the variational-vs-exact comparison.
///
/// Sequential by design: each row's cutoff doubling already saturates the
/// eigensolver, and rows can be large enough that running several at once
/// would multiply peak memory. Budget and gauge problems are reported before
/// any diagonalization starts; a row that fails afterwards (for example by
/// hitting the dimension limit) is recorded in its outcome instead of
/// aborting the remaining rows.
pub fn ed_compare(
    spec: &EdCompare,
    ed_budget: usize,
) -> Result<Vec<EdCompareRow>, SweepError> {
    if !spec.gauge.is_hermitian() {
        return Err(SweepError::Invalid {
            field: "gauge",
            message: "comparison requires a hermitian gauge; the non-hermitian spectrum has no ground state to compare".to_string(),
        });
    }
    check_common(spec.eta, spec.phi, 1)?;
    if !spec.g.is_finite() || spec.g < 0.0 {
        return Err(SweepError::Invalid {
            field: "g",
            message: format!("must be a nonnegative finite number (got {})", spec.g),
        });
    }
    if spec.n_values.is_empty() {
        return Err(SweepError::Invalid {
            field: "n",
            message: "needs at least one atom count".to_string(),
        });
    }
    if let Some(&bad) = spec.n_values.iter().find(|&&n| n == 0) {
        return Err(SweepError::Invalid {
            field: "n",
            message: format!("atom count must be at least 1 (got {bad})"),
        });
    }
    if !(spec.tol.is_finite()) || spec.tol <= 0.0 {
        return Err(SweepError::Invalid {
            field: "tol",
            message: format!("must be a positive finite number (got {})", spec.tol),
        });
    }
    if spec.n_values.len() > ed_budget {
        return Err(SweepError::EdBudgetExceeded {
            solves: spec.n_values.len(),
            budget: ed_budget,
        });
    }
    let rows = spec
        .n_values
        .iter()
        .map(|&n_atoms| {
            let p = ModelParams::new(spec.eta, spec.g, n_atoms, spec.phi)
                .expect("inputs validated");
            let variational = variational::solve_ground_state(spec.gauge, &p);
            let outcome = match ed::cutoff_converge(spec.gauge, &p, spec.tol, &spec.limits) {
                Ok(result) => EdRowOutcome::Solved(result),
                Err(err @ EdError::Unconverged { best: Some(_), .. }) => {
                    EdRowOutcome::Failed { message: err.to_string() }
                }
                Err(err) => EdRowOutcome::Failed { message: err.to_string() },
            };
            EdCompareRow { n_atoms, variational, outcome }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::Phase;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn axis_values_hit_endpoints() {
        let ax = Axis::new(0.2, 2.0, 10).unwrap();
        assert_eq!(ax.value(0), 0.2);
        assert_eq!(ax.value(9), 2.0);
        assert!(Axis::new(1.0, 1.0, 5).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(0.0, f64::NAN, 5).is_err());
    }

    #[test]
    fn weak_coupling_plateau_is_all_normal() {
        let spec = CouplingSweep {
            gauge: GaugeKind::Coulomb,
            eta: 1.0,
            phi: 0.0,
            n_atoms: 4,
            g_axis: Axis::new(0.0, 0.5, 11).unwrap(),
        };
        let rows = coupling_sweep(&spec, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(rows.len(), 11);
        for row in &rows {
            assert_eq!(row.ground.phase, Phase::Normal);
            assert_eq!(row.ground.n_p, 0.0);
            assert_eq!(row.ground.energy, Complex64::new(-1.0, 0.0));
            assert!(row.unstable.is_none());
        }
    }

    #[test]
    fn critical_boundary_trends_by_gauge() {
        let ax = Axis::new(0.5, 1.5, 3).unwrap();
        let coulomb = boundary_curve(GaugeKind::Coulomb, 0.0, &ax).unwrap();
        let expect_c = [0.35355339059327373, 0.5, 0.6123724356957945];
        for ((eta, g_c), expect) in coulomb.iter().zip(expect_c) {
            assert!((g_c - expect).abs() < 1e-15, "coulomb eta {eta}: {g_c}");
        }
        assert!(coulomb[0].1 < coulomb[1].1 && coulomb[1].1 < coulomb[2].1);

        let dipole = boundary_curve(GaugeKind::Dipole, 0.0, &ax).unwrap();
        let expect_d = [std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.4082482904638630];
        for ((eta, g_c), expect) in dipole.iter().zip(expect_d) {
            assert!((g_c - expect).abs() < 1e-15, "dipole eta {eta}: {g_c}");
        }
        assert!(dipole[0].1 > dipole[1].1 && dipole[1].1 > dipole[2].1);
    }

    #[test]
    fn unified_at_zero_phase_reduces_to_coulomb() {
        let grid = |gauge| PhaseDiagram {
            gauge,
            phi: 0.0,
            n_atoms: 6,
            g_axis: Axis::new(0.0, 1.5, 5).unwrap(),
            eta_axis: Axis::new(0.4, 1.6, 5).unwrap(),
        };
        let unified = phase_diagram(&grid(GaugeKind::Unified), DEFAULT_CELL_BUDGET).unwrap();
        let coulomb = phase_diagram(&grid(GaugeKind::Coulomb), DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(unified.len(), coulomb.len());
        for (u, c) in unified.iter().zip(&coulomb) {
            assert_eq!(u.g_c.to_bits(), c.g_c.to_bits(), "cell {}", u.cell);
            assert_eq!(u.ground, c.ground, "cell {}", u.cell);
            assert_eq!(u.unstable, c.unstable);
        }
    }

    #[test]
    fn grid_order_is_detuning_major() {
        let spec = PhaseDiagram {
            gauge: GaugeKind::Coulomb,
            phi: 0.0,
            n_atoms: 2,
            g_axis: Axis::new(0.0, 1.0, 3).unwrap(),
            eta_axis: Axis::new(0.5, 1.5, 2).unwrap(),
        };
        let rows = phase_diagram(&spec, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(rows.len(), 6);
        let seq: Vec<(f64, f64)> = rows.iter().map(|r| (r.eta, r.g)).collect();
        assert_eq!(
            seq,
            vec![
                (0.5, 0.0),
                (0.5, 0.5),
                (0.5, 1.0),
                (1.5, 0.0),
                (1.5, 0.5),
                (1.5, 1.0)
            ]
        );
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.cell, i);
        }
    }

    #[test]
    fn nonhermitian_grid_has_no_superradiance() {
        let spec = PhaseDiagram {
            gauge: GaugeKind::NonHermitianUnified,
            phi: FRAC_PI_3,
            n_atoms: 4,
            g_axis: Axis::new(0.0, 1.0, 11).unwrap(),
            eta_axis: Axis::new(0.5, 1.5, 11).unwrap(),
        };
        let rows = phase_diagram(&spec, DEFAULT_CELL_BUDGET).unwrap();
        for row in &rows {
            assert_eq!(row.ground.phase, Phase::Normal);
            assert!(row.ground.stability > 0.0);
            let in_pair_region = row.g > 0.0 && row.g < row.g_c;
            assert_eq!(row.unstable.is_some(), in_pair_region, "cell {}", row.cell);
            if let Some(unstable) = &row.unstable {
                assert!(unstable.stability < 0.0);
                assert_eq!(unstable.energy.im, 0.0);
            }
        }
    }

    #[test]
    fn ep_scan_merges_branches_at_the_exceptional_point() {
        // With eta = 1 the phase weight is 1, so G = 0.5 meets its EP at
        // y = 0.5 exactly.
        let spec = EpScan {
            eta: 1.0,
            phi: FRAC_PI_3,
            axis: EpAxis::FieldParam { g: 0.5, y_axis: Axis::new(0.0, 1.0, 3).unwrap() },
        };
        let rows = ep_scan(&spec, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].g_ep, None);
        assert_eq!(rows[0].eps_minus, Complex64::new(-1.0, 0.0));
        assert_eq!(rows[0].eps_plus, Complex64::new(1.0, 0.0));
        let merge = &rows[1];
        assert_eq!(merge.g_ep, Some(0.5));
        assert_eq!(merge.eps_minus, merge.eps_plus);
        assert_eq!(merge.eps_minus, Complex64::new(0.5, 0.0));
        let beyond = &rows[2];
        assert_eq!(beyond.eps_minus.re, beyond.eps_plus.re);
        assert!(beyond.eps_minus.im < 0.0);
        assert_eq!(beyond.eps_minus, beyond.eps_plus.conj());
    }

    #[test]
    fn ep_scan_along_coupling_keeps_fixed_marker() {
        let spec = EpScan {
            eta: 1.0,
            phi: FRAC_PI_3,
            axis: EpAxis::Coupling {
                gamma_sq_per_n: 1.0,
                g_axis: Axis::new(0.0, 1.0, 5).unwrap(),
            },
        };
        let rows = ep_scan(&spec, DEFAULT_CELL_BUDGET).unwrap();
        let expect = 0.35355339059327373;
        for row in &rows {
            let g_ep = row.g_ep.unwrap();
            assert!((g_ep - expect).abs() < 1e-15);
            let below = row.g < g_ep;
            assert_eq!(row.eps_minus.im == 0.0, below, "G = {}", row.g);
        }
    }

    #[test]
    fn budgets_are_enforced_before_computing() {
        let spec = CouplingSweep {
            gauge: GaugeKind::Coulomb,
            eta: 1.0,
            phi: 0.0,
            n_atoms: 2,
            g_axis: Axis::new(0.0, 2.0, 201).unwrap(),
        };
        match coupling_sweep(&spec, 100) {
            Err(SweepError::BudgetExceeded { cells, budget }) => {
                assert_eq!(cells, 201);
                assert_eq!(budget, 100);
            }
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
        let grid = PhaseDiagram {
            gauge: GaugeKind::Coulomb,
            phi: 0.0,
            n_atoms: 2,
            g_axis: Axis::new(0.0, 2.0, 2000).unwrap(),
            eta_axis: Axis::new(0.2, 2.0, 2000).unwrap(),
        };
        assert!(matches!(
            phase_diagram(&grid, DEFAULT_CELL_BUDGET),
            Err(SweepError::BudgetExceeded { cells: 4_000_000, .. })
        ));
    }

    #[test]
    fn parallel_and_serial_agree_bitwise() {
        let spec = CouplingSweep {
            gauge: GaugeKind::Unified,
            eta: 1.3,
            phi: FRAC_PI_3,
            n_atoms: 9,
            g_axis: Axis::new(0.0, 2.0, 101).unwrap(),
        };
        let a = coupling_sweep(&spec, DEFAULT_CELL_BUDGET).unwrap();
        let b = coupling_sweep_serial(&spec, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(a, b);
        let grid = PhaseDiagram {
            gauge: GaugeKind::NonHermitianUnified,
            phi: FRAC_PI_3,
            n_atoms: 3,
            g_axis: Axis::new(0.0, 1.5, 21).unwrap(),
            eta_axis: Axis::new(0.2, 2.0, 21).unwrap(),
        };
        let a = phase_diagram(&grid, DEFAULT_CELL_BUDGET).unwrap();
        let b = phase_diagram_serial(&grid, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let spec = CouplingSweep {
            gauge: GaugeKind::Dipole,
            eta: 0.7,
            phi: 0.0,
            n_atoms: 5,
            g_axis: Axis::new(0.0, 2.0, 51).unwrap(),
        };
        let a = coupling_sweep(&spec, DEFAULT_CELL_BUDGET).unwrap();
        let b = coupling_sweep(&spec, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn phase_labels_agree_with_boundary_curve() {
        let spec = PhaseDiagram {
            gauge: GaugeKind::Coulomb,
            phi: 0.0,
            n_atoms: 8,
            g_axis: Axis::new(0.0, 1.5, 20).unwrap(),
            eta_axis: Axis::new(0.3, 1.9, 20).unwrap(),
        };
        let rows = phase_diagram(&spec, DEFAULT_CELL_BUDGET).unwrap();
        let boundary = boundary_curve(GaugeKind::Coulomb, 0.0, &spec.eta_axis).unwrap();
        for row in &rows {
            let (eta, g_c) = boundary[row.cell / spec.g_axis.count];
            assert_eq!(eta, row.eta);
            assert_eq!(g_c, row.g_c);
            let expect_sp = row.g > g_c;
            assert_eq!(row.ground.phase == Phase::Superradiant, expect_sp, "cell {}", row.cell);
        }
    }

    #[test]
    fn comparison_rejects_bad_specs_upfront() {
        let base = EdCompare {
            gauge: GaugeKind::Coulomb,
            eta: 1.0,
            phi: 0.0,
            g: 0.3,
            n_values: vec![1, 2],
            tol: 1e-8,
            limits: EdLimits::default(),
        };
        let nh = EdCompare { gauge: GaugeKind::NonHermitianUnified, ..base.clone() };
        assert!(matches!(ed_compare(&nh, 64), Err(SweepError::Invalid { field: "gauge", .. })));
        let over = EdCompare { n_values: (1..=65).collect(), ..base.clone() };
        assert!(matches!(
            ed_compare(&over, 64),
            Err(SweepError::EdBudgetExceeded { solves: 65, budget: 64 })
        ));
        let empty = EdCompare { n_values: vec![], ..base.clone() };
        assert!(matches!(ed_compare(&empty, 64), Err(SweepError::Invalid { field: "n", .. })));
    }

    #[test]
    fn comparison_rows_track_the_variational_bound() {
        let spec = EdCompare {
            gauge: GaugeKind::Coulomb,
            eta: 1.0,
            phi: 0.0,
            g: 1.0,
            n_values: vec![1, 2],
            tol: 1e-8,
            limits: EdLimits::default(),
        };
        let rows = ed_compare(&spec, DEFAULT_ED_BUDGET).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            match &row.outcome {
                EdRowOutcome::Solved(res) => {
                    assert!(res.converged);
                    assert!(res.ground_energy_per_atom <= row.variational.energy.re + 1e-9);
                    assert!(res.tail_population < 1e-10);
                }
                EdRowOutcome::Failed { message } => panic!("row N={} failed: {message}", row.n_atoms),
            }
        }
    }

    #[test]
    fn comparison_records_row_failures_without_aborting() {
        // Tiny dimension limit: the cutoff doubling cannot fit, so each row
        // fails but the run itself succeeds.
        let spec = EdCompare {
            gauge: GaugeKind::Coulomb,
            eta: 1.0,
            phi: 0.0,
            g: 1.0,
            n_values: vec![2, 3],
            tol: 1e-12,
            limits: EdLimits { max_dim: 300, dense_dim: 300 },
        };
        let rows = ed_compare(&spec, DEFAULT_ED_BUDGET).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            match &row.outcome {
                EdRowOutcome::Failed { message } => {
                    assert!(!message.is_empty());
                }
                EdRowOutcome::Solved(res) => {
                    panic!("expected failure under the tiny limit, got {res:?}")
                }
            }
        }
    }
}
