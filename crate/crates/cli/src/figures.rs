//! Named dataset recipes: one CSV per panel plus a JSON sidecar.
//!
//! Ids follow the layout the data is conventionally presented in: fig2/fig3
//! are observable-vs-coupling curves (Coulomb, dipole), fig4 the matching
//! phase diagrams, fig5/fig6 the field-phase-resolved unified-gauge
//! versions, fig7/fig8 the non-Hermitian branch scans across the
//! exceptional point, and fig9/fig10 the non-Hermitian curves and diagram
//! showing the unstable coexisting branch.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::fs;
use std::path::PathBuf;

use dicke::model::{phase_factor, GaugeKind, ModelParams};
use dicke::sweep::{
    boundary_curve, coupling_sweep, ep_scan, phase_diagram, Axis, CouplingSweep, EpAxis, EpRecord,
    EpScan, PhaseDiagram, SweepRecord,
};
use dicke::variational::{self, Branch};
use serde_json::json;

use crate::output::{self, fmt_float, write_sidecar, CsvFile};
use crate::CliError;

pub const FIGURE_IDS: [&str; 9] =
    ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

const CURVE_ETAS: [(f64, &str); 3] = [(0.5, "0.5"), (1.0, "1"), (1.5, "1.5")];
const PHI_PANELS: [(f64, &str, &str); 3] =
    [(FRAC_PI_6, "pi6", "pi/6"), (FRAC_PI_4, "pi4", "pi/4"), (FRAC_PI_3, "pi3", "pi/3")];

pub struct FigureRun {
    pub out_dir: PathBuf,
    pub points: usize,
    pub n_atoms: u32,
    pub budget: usize,
}

type Parts = (Vec<CsvFile>, serde_json::Value);

pub fn run_figure(id: &str, run: &FigureRun) -> Result<Vec<PathBuf>, CliError> {
    if run.points < 2 {
        return Err(CliError::Validation(format!(
            "--points: needs at least 2 points per axis (got {})",
            run.points
        )));
    }
    let (files, annotations) = match id {
        "fig2" => curves_by_eta("fig2", GaugeKind::Coulomb, run)?,
        "fig3" => curves_by_eta("fig3", GaugeKind::Dipole, run)?,
        "fig4" => hermitian_diagrams(run)?,
        "fig5" => unified_curves(run)?,
        "fig6" => unified_diagrams(run)?,
        "fig7" => ep_coupling_scans(run)?,
        "fig8" => ep_field_scans(run)?,
        "fig9" => nh_curves(run)?,
        "fig10" => nh_diagram(run)?,
        other => {
            return Err(CliError::Validation(format!(
                "unknown figure id '{other}' (valid ids: {})",
                FIGURE_IDS.join(", ")
            )))
        }
    };
    fs::create_dir_all(&run.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", run.out_dir.display())))?;
    let names: Vec<String> = files.iter().map(|f| f.name.clone()).collect();
    let mut written = Vec::with_capacity(files.len() + 1);
    for file in &files {
        written.push(file.write_to(&run.out_dir)?);
    }
    let sidecar = json!({
        "generated_at_unix": output::unix_now(),
        "figure": id,
        "effective": {
            "points": run.points,
            "n": run.n_atoms,
            "max_cells": run.budget,
        },
        "annotations": annotations,
        "files": names,
    });
    written.push(write_sidecar(&run.out_dir, &format!("{id}.json"), &sidecar)?);
    Ok(written)
}

fn axis_json(ax: &Axis) -> serde_json::Value {
    json!({"min": ax.min, "max": ax.max, "count": ax.count})
}

fn curve_axis(run: &FigureRun) -> Result<Axis, CliError> {
    Ok(Axis::new(0.0, 2.0, run.points)?)
}

fn diagram_axes(run: &FigureRun) -> Result<(Axis, Axis), CliError> {
    Ok((Axis::new(0.0, 1.5, run.points)?, Axis::new(0.2, 2.0, run.points)?))
}

fn curve_csv(name: &str, rows: &[SweepRecord], with_phi: bool) -> CsvFile {
    let columns: &[&str] = if with_phi {
        &["eta", "phi", "g", "phase", "eps_minus", "n_p", "delta_na", "berry"]
    } else {
        &["eta", "g", "phase", "eps_minus", "n_p", "delta_na", "berry"]
    };
    let mut csv = CsvFile::new(name, columns);
    for r in rows {
        let mut cells = vec![fmt_float(r.eta)];
        if with_phi {
            cells.push(fmt_float(r.phi));
        }
        cells.extend([
            fmt_float(r.g),
            r.ground.phase.label().to_string(),
            fmt_float(r.ground.energy.re),
            fmt_float(r.ground.n_p),
            fmt_float(r.ground.delta_na),
            fmt_float(r.ground.berry_per_atom),
        ]);
        csv.push_row(&cells);
    }
    csv
}

fn diagram_csv(name: &str, rows: &[SweepRecord]) -> CsvFile {
    let mut csv = CsvFile::new(name, &["eta", "g", "phase", "n_p"]);
    for r in rows {
        csv.push_row(&[
            fmt_float(r.eta),
            fmt_float(r.g),
            r.ground.phase.label().to_string(),
            fmt_float(r.ground.n_p),
        ]);
    }
    csv
}

fn boundary_csv(name: &str, points: &[(f64, f64)]) -> CsvFile {
    let mut csv = CsvFile::new(name, &["eta", "g_c"]);
    for &(eta, g_c) in points {
        csv.push_row(&[fmt_float(eta), fmt_float(g_c)]);
    }
    csv
}

fn ep_csv(name: &str, rows: &[EpRecord], swept_is_g: bool, imag: bool) -> CsvFile {
    let columns: &[&str] = match (swept_is_g, imag) {
        (true, false) => &["gamma_sq_per_n", "g", "eps_minus_re", "eps_plus_re"],
        (true, true) => &["gamma_sq_per_n", "g", "eps_minus_im", "eps_plus_im"],
        (false, false) => &["g", "gamma_sq_per_n", "eps_minus_re", "eps_plus_re"],
        (false, true) => &["g", "gamma_sq_per_n", "eps_minus_im", "eps_plus_im"],
    };
    let mut csv = CsvFile::new(name, columns);
    for r in rows {
        let (first, second) = if swept_is_g {
            (fmt_float(r.gamma_sq_per_n), fmt_float(r.g))
        } else {
            (fmt_float(r.g), fmt_float(r.gamma_sq_per_n))
        };
        let (a, b) = if imag {
            (fmt_float(r.eps_minus.im), fmt_float(r.eps_plus.im))
        } else {
            (fmt_float(r.eps_minus.re), fmt_float(r.eps_plus.re))
        };
        csv.push_row(&[first, second, a, b]);
    }
    csv
}

fn curves_by_eta(id: &str, gauge: GaugeKind, run: &FigureRun) -> Result<Parts, CliError> {
    let g_axis = curve_axis(run)?;
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (eta, tag) in CURVE_ETAS {
        let spec = CouplingSweep { gauge, eta, phi: 0.0, n_atoms: run.n_atoms, g_axis };
        let rows = coupling_sweep(&spec, run.budget)?;
        let name = format!("{id}_eta{tag}.csv");
        panels.push(json!({
            "file": name,
            "gauge": gauge.label(),
            "eta": eta,
            "phi": 0.0,
            "g_axis": axis_json(&g_axis),
            "g_c": rows[0].g_c,
        }));
        files.push(curve_csv(&name, &rows, false));
    }
    Ok((files, json!({ "panels": panels })))
}

fn unified_curves(run: &FigureRun) -> Result<Parts, CliError> {
    let g_axis = curve_axis(run)?;
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (eta, etag) in CURVE_ETAS {
        for (phi, ptag, literal) in PHI_PANELS {
            let spec = CouplingSweep {
                gauge: GaugeKind::Unified,
                eta,
                phi,
                n_atoms: run.n_atoms,
                g_axis,
            };
            let rows = coupling_sweep(&spec, run.budget)?;
            let name = format!("fig5_eta{etag}_phi{ptag}.csv");
            panels.push(json!({
                "file": name,
                "gauge": "unified",
                "eta": eta,
                "phi": phi,
                "phi_literal": literal,
                "g_axis": axis_json(&g_axis),
                "g_c": rows[0].g_c,
            }));
            files.push(curve_csv(&name, &rows, true));
        }
    }
    Ok((files, json!({ "panels": panels })))
}

fn hermitian_diagrams(run: &FigureRun) -> Result<Parts, CliError> {
    let (g_axis, eta_axis) = diagram_axes(run)?;
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (gauge, tag) in [(GaugeKind::Coulomb, "coulomb"), (GaugeKind::Dipole, "dipole")] {
        let spec =
            PhaseDiagram { gauge, phi: 0.0, n_atoms: run.n_atoms, g_axis, eta_axis };
        let rows = phase_diagram(&spec, run.budget)?;
        let grid_name = format!("fig4_{tag}.csv");
        let boundary_name = format!("fig4_{tag}_boundary.csv");
        files.push(diagram_csv(&grid_name, &rows));
        files.push(boundary_csv(&boundary_name, &boundary_curve(gauge, 0.0, &eta_axis)?));
        panels.push(json!({
            "files": [grid_name, boundary_name],
            "gauge": gauge.label(),
            "phi": 0.0,
            "g_axis": axis_json(&g_axis),
            "eta_axis": axis_json(&eta_axis),
        }));
    }
    Ok((files, json!({ "panels": panels })))
}

fn unified_diagrams(run: &FigureRun) -> Result<Parts, CliError> {
    let (g_axis, eta_axis) = diagram_axes(run)?;
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (phi, ptag, literal) in PHI_PANELS {
        let spec = PhaseDiagram {
            gauge: GaugeKind::Unified,
            phi,
            n_atoms: run.n_atoms,
            g_axis,
            eta_axis,
        };
        let rows = phase_diagram(&spec, run.budget)?;
        let grid_name = format!("fig6_phi{ptag}.csv");
        let boundary_name = format!("fig6_phi{ptag}_boundary.csv");
        files.push(diagram_csv(&grid_name, &rows));
        files.push(boundary_csv(
            &boundary_name,
            &boundary_curve(GaugeKind::Unified, phi, &eta_axis)?,
        ));
        panels.push(json!({
            "files": [grid_name, boundary_name],
            "gauge": "unified",
            "phi": phi,
            "phi_literal": literal,
            "g_axis": axis_json(&g_axis),
            "eta_axis": axis_json(&eta_axis),
        }));
    }
    Ok((files, json!({ "panels": panels })))
}

fn ep_coupling_scans(run: &FigureRun) -> Result<Parts, CliError> {
    let g_axis = Axis::new(0.0, 1.0, run.points)?;
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (y, tag) in [(1.0, "y1"), (2.0, "y2")] {
        let spec = EpScan {
            eta: 1.0,
            phi: FRAC_PI_3,
            axis: EpAxis::Coupling { gamma_sq_per_n: y, g_axis },
        };
        let rows = ep_scan(&spec, run.budget)?;
        let re_name = format!("fig7_{tag}_re.csv");
        let im_name = format!("fig7_{tag}_im.csv");
        panels.push(json!({
            "files": [re_name, im_name],
            "eta": 1.0,
            "phi": FRAC_PI_3,
            "gamma_sq_per_n": y,
            "g_axis": axis_json(&g_axis),
            "g_ep": rows[0].g_ep,
        }));
        files.push(ep_csv(&re_name, &rows, true, false));
        files.push(ep_csv(&im_name, &rows, true, true));
    }
    Ok((files, json!({ "panels": panels })))
}

fn ep_field_scans(run: &FigureRun) -> Result<Parts, CliError> {
    let y_axis = Axis::new(0.0, 2.0, run.points)?;
    let phi_f = phase_factor(1.0, FRAC_PI_3).expect("fixed angles are finite");
    let mut files = Vec::new();
    let mut panels = Vec::new();
    for (g, tag) in [(0.5, "g0.5"), (1.0, "g1")] {
        let spec = EpScan { eta: 1.0, phi: FRAC_PI_3, axis: EpAxis::FieldParam { g, y_axis } };
        let rows = ep_scan(&spec, run.budget)?;
        let re_name = format!("fig8_{tag}_re.csv");
        let im_name = format!("fig8_{tag}_im.csv");
        panels.push(json!({
            "files": [re_name, im_name],
            "eta": 1.0,
            "phi": FRAC_PI_3,
            "g": g,
            "y_axis": axis_json(&y_axis),
            "merge_gamma_sq_per_n": 1.0 / (8.0 * g * g * phi_f),
        }));
        files.push(ep_csv(&re_name, &rows, false, false));
        files.push(ep_csv(&im_name, &rows, false, true));
    }
    Ok((files, json!({ "panels": panels })))
}

fn nh_curves(run: &FigureRun) -> Result<Parts, CliError> {
    let g_axis = curve_axis(run)?;
    let spec = CouplingSweep {
        gauge: GaugeKind::NonHermitianUnified,
        eta: 1.0,
        phi: FRAC_PI_3,
        n_atoms: run.n_atoms,
        g_axis,
    };
    let rows = coupling_sweep(&spec, run.budget)?;
    let mut csv = CsvFile::new(
        "fig9.csv",
        &[
            "eta",
            "phi",
            "g",
            "normal_minus",
            "normal_plus",
            "normal_plus_stable",
            "unstable_eps",
            "unstable_n_p",
            "unstable_delta_na",
        ],
    );
    for r in &rows {
        let p = ModelParams::new(r.eta, r.g, run.n_atoms, r.phi).expect("swept cells are valid");
        // Zero field sits below every exceptional point, so the curvature of
        // the upper normal branch is always defined.
        let plus_curv =
            variational::second_derivative(GaugeKind::NonHermitianUnified, &p, 0.0, Branch::Plus)
                .expect("gamma = 0 is below the exceptional point");
        let (u_eps, u_np, u_dna) = match &r.unstable {
            Some(u) => (fmt_float(u.energy.re), fmt_float(u.n_p), fmt_float(u.delta_na)),
            None => (String::new(), String::new(), String::new()),
        };
        csv.push_row(&[
            fmt_float(r.eta),
            fmt_float(r.phi),
            fmt_float(r.g),
            fmt_float(-p.splitting),
            fmt_float(p.splitting),
            (plus_curv > 0.0).to_string(),
            u_eps,
            u_np,
            u_dna,
        ]);
    }
    let annotations = json!({
        "panels": [{
            "file": "fig9.csv",
            "gauge": "non-hermitian-unified",
            "eta": 1.0,
            "phi": FRAC_PI_3,
            "g_axis": axis_json(&g_axis),
            "g_c": rows[0].g_c,
        }]
    });
    Ok((vec![csv], annotations))
}

fn nh_diagram(run: &FigureRun) -> Result<Parts, CliError> {
    let (g_axis, eta_axis) = diagram_axes(run)?;
    let spec = PhaseDiagram {
        gauge: GaugeKind::NonHermitianUnified,
        phi: FRAC_PI_3,
        n_atoms: run.n_atoms,
        g_axis,
        eta_axis,
    };
    let rows = phase_diagram(&spec, run.budget)?;
    let mut csv = CsvFile::new("fig10.csv", &["eta", "g", "label", "unstable_n_p"]);
    for r in &rows {
        let (label, u_np) = match &r.unstable {
            Some(u) => ("NP_co", fmt_float(u.n_p)),
            None => ("NP", String::new()),
        };
        csv.push_row(&[fmt_float(r.eta), fmt_float(r.g), label.to_string(), u_np]);
    }
    let boundary = boundary_csv(
        "fig10_boundary.csv",
        &boundary_curve(GaugeKind::NonHermitianUnified, FRAC_PI_3, &eta_axis)?,
    );
    let annotations = json!({
        "panels": [{
            "files": ["fig10.csv", "fig10_boundary.csv"],
            "gauge": "non-hermitian-unified",
            "phi": FRAC_PI_3,
            "g_axis": axis_json(&g_axis),
            "eta_axis": axis_json(&eta_axis),
            "labels": {"NP": "normal", "NP_co": "normal coexisting with the unstable branch"},
        }]
    });
    Ok((vec![csv, boundary], annotations))
}
