//! `dicke ed`: variational-vs-exact comparison tables.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use dicke::ed::{self, EdLimits};
use dicke::model::{GaugeKind, ModelParams};
use dicke::sweep::{self, EdCompare, EdRowOutcome, SweepError};
use serde_json::json;

use crate::config::{self, ParamFlags, RunConfig};
use crate::output::{self, fmt_float, CsvFile};
use crate::CliError;

pub struct EdFlags {
    pub gauge: Option<GaugeKind>,
    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub splitting: Option<f64>,
    pub g: Option<f64>,
    pub phi: Option<f64>,
    pub n_values: Option<Vec<u32>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub dump_matrix: Option<PathBuf>,
}

const CSV_COLUMNS: [&str; 12] = [
    "n",
    "status",
    "n_max_used",
    "dim",
    "e0_per_atom",
    "eps_minus",
    "gap",
    "n_p_ed",
    "n_p_var",
    "delta_na_ed",
    "delta_na_var",
    "tail_population",
];

pub fn run(cfg: &RunConfig, flags: EdFlags) -> Result<(), CliError> {
    let eff = config::resolve_params(
        cfg,
        &ParamFlags {
            gauge: flags.gauge,
            eta: flags.eta,
            omega: flags.omega,
            splitting: flags.splitting,
            g: flags.g,
            n: None,
            phi: flags.phi,
        },
    )?;
    if eff.params.splitting != 1.0 {
        return Err(CliError::Validation(
            "--splitting: the comparison works in units of the atomic splitting; give the frequency ratio as --eta instead".to_string(),
        ));
    }
    let n_values = flags.n_values.or_else(|| cfg.ed.n.clone()).unwrap_or_else(|| vec![2, 4, 8]);
    let tol = flags.tol.or(cfg.ed.tol).unwrap_or(1e-8);
    let out =
        flags.out.or_else(|| cfg.ed.out.clone()).unwrap_or_else(|| PathBuf::from("ed_compare.csv"));
    let dump_dir = flags.dump_matrix.or_else(|| cfg.ed.dump_matrix.clone());
    let limits = limits_from_env()?;

    let spec = EdCompare {
        gauge: eff.gauge,
        eta: eff.params.eta,
        phi: eff.params.phi,
        g: eff.params.g,
        n_values: n_values.clone(),
        tol,
        limits,
    };
    let rows = sweep::ed_compare(&spec, sweep::DEFAULT_ED_BUDGET).map_err(|err| match err {
        // these field names all correspond to flags of this subcommand
        SweepError::Invalid { field, message } => {
            CliError::Validation(format!("--{field}: {message}"))
        }
        other => CliError::from(other),
    })?;

    let file_name = out
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Validation(format!("--out: not a file path: {}", out.display())))?
        .to_string();
    let out_dir = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };

    let mut csv = CsvFile::new(file_name.clone(), &CSV_COLUMNS);
    let mut row_meta = Vec::new();
    let mut first_failure = None;
    let mut n_failed = 0usize;
    for row in &rows {
        let var = &row.variational;
        match &row.outcome {
            EdRowOutcome::Solved(res) => {
                let gap = var.energy.re - res.ground_energy_per_atom;
                csv.push_row(&[
                    row.n_atoms.to_string(),
                    "converged".to_string(),
                    res.n_max_used.to_string(),
                    res.dim.to_string(),
                    fmt_float(res.ground_energy_per_atom),
                    fmt_float(var.energy.re),
                    fmt_float(gap),
                    fmt_float(res.n_p),
                    fmt_float(var.n_p),
                    fmt_float(res.delta_na),
                    fmt_float(var.delta_na),
                    fmt_float(res.tail_population),
                ]);
                println!(
                    "N={}: converged at n_max={} (dim {}), E0/N={:.12}, gap={:.3e}",
                    row.n_atoms, res.n_max_used, res.dim, res.ground_energy_per_atom, gap
                );
                row_meta.push(json!({
                    "n": row.n_atoms,
                    "status": "converged",
                    "n_max_used": res.n_max_used,
                    "dim": res.dim,
                    "tail_population": res.tail_population,
                }));
            }
            EdRowOutcome::Failed { message } => {
                n_failed += 1;
                if first_failure.is_none() {
                    first_failure = Some(message.clone());
                }
                let mut cells = vec![row.n_atoms.to_string(), "unconverged".to_string()];
                cells.resize(CSV_COLUMNS.len(), String::new());
                csv.push_row(&cells);
                eprintln!("warning: N={}: {message}", row.n_atoms);
                row_meta.push(json!({
                    "n": row.n_atoms,
                    "status": "unconverged",
                    "message": message,
                }));
            }
        }
    }

    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", out_dir.display())))?;
    let csv_path = csv.write_to(&out_dir)?;
    println!("wrote {}", csv_path.display());

    let mut files = vec![file_name.clone()];
    let mut dump_meta = Vec::new();
    if let Some(dir) = &dump_dir {
        dump_matrices(dir, &spec, &rows, &mut files, &mut dump_meta)?;
    }

    let sidecar_name = format!("{}.json", file_name.trim_end_matches(".csv"));
    let sidecar = json!({
        "generated_at_unix": output::unix_now(),
        "command": "ed",
        "effective": {
            "gauge": eff.gauge.label(),
            "eta": eff.params.eta,
            "phi": eff.params.phi,
            "g": eff.params.g,
            "n": n_values,
            "tol": tol,
            "limits": {"max_dim": limits.max_dim, "dense_dim": limits.dense_dim},
        },
        "rows": row_meta,
        "matrix_dumps": dump_meta,
        "files": files,
    });
    let sidecar_path = output::write_sidecar(&out_dir, &sidecar_name, &sidecar)?;
    println!("wrote {}", sidecar_path.display());

    if n_failed == rows.len() {
        return Err(CliError::AllRowsFailed(format!(
            "all {} comparison rows failed; first failure: {}",
            rows.len(),
            first_failure.unwrap_or_default()
        )));
    }
    Ok(())
}

fn dump_matrices(
    dir: &Path,
    spec: &EdCompare,
    rows: &[sweep::EdCompareRow],
    files: &mut Vec<String>,
    meta: &mut Vec<serde_json::Value>,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    for row in rows {
        let EdRowOutcome::Solved(res) = &row.outcome else { continue };
        let p = ModelParams::new(spec.eta, spec.g, row.n_atoms, spec.phi)
            .expect("comparison inputs already validated");
        let name = format!("{}_n{}_nmax{}.mtx", spec.gauge.label(), row.n_atoms, res.n_max_used);
        match ed::build_hamiltonian(spec.gauge, &p, res.n_max_used, &spec.limits) {
            Ok(h) => {
                let path = dir.join(&name);
                let file = fs::File::create(&path)
                    .map_err(|e| CliError::Io(format!("creating {}: {e}", path.display())))?;
                let mut w = BufWriter::new(file);
                ed::write_matrix_market(&mut w, &h)
                    .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
                files.push(name.clone());
                meta.push(json!({"n": row.n_atoms, "file": name}));
            }
            Err(err) => {
                // The converged cutoff can exceed the dense limit when the
                // solve went through the matrix-free path; note it and move on.
                eprintln!("warning: N={}: matrix dump skipped: {err}", row.n_atoms);
                meta.push(json!({"n": row.n_atoms, "skipped": err.to_string()}));
            }
        }
    }
    Ok(())
}

fn limits_from_env() -> Result<EdLimits, CliError> {
    let mut limits = EdLimits::default();
    if let Some(v) = env_usize("DICKE_ED_MAX_DIM")? {
        limits.max_dim = v;
    }
    if let Some(v) = env_usize("DICKE_ED_DENSE_DIM")? {
        limits.dense_dim = v;
    }
    Ok(limits)
}

fn env_usize(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("{name}: expected an integer (got '{s}')"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Validation(format!("{name}: {e}"))),
    }
}
