//! Run configuration: TOML file loading, flag merging, angle literals.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::path::{Path, PathBuf};

use dicke::model::{validate_params, GaugeKind, ModelParams, RawParams, ValidationError};
use serde::Deserialize;

use crate::CliError;

/// Contents of a `--config` TOML file. Every field is optional; flags
/// override whatever the file supplies.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub figure: FigureSection,
    #[serde(default)]
    pub ed: EdSection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub gauge: Option<String>,
    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub splitting: Option<f64>,
    pub g: Option<f64>,
    pub n: Option<u32>,
    pub phi: Option<AngleSpec>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSection {
    pub out_dir: Option<PathBuf>,
    pub points: Option<usize>,
    pub max_cells: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdSection {
    pub n: Option<Vec<u32>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub dump_matrix: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub samples: Option<u32>,
    pub seed: Option<u64>,
}

/// An angle given either as radians or as one of the exact literals.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Radians(f64),
    Literal(String),
}

impl AngleSpec {
    pub fn resolve(&self) -> Result<f64, String> {
        match self {
            AngleSpec::Radians(x) => Ok(*x),
            AngleSpec::Literal(s) => parse_angle(s),
        }
    }
}

/// Radians, or one of `pi/6`, `pi/4`, `pi/3`, `pi/2` parsed exactly.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    match s.trim() {
        "pi/6" => return Ok(FRAC_PI_6),
        "pi/4" => return Ok(FRAC_PI_4),
        "pi/3" => return Ok(FRAC_PI_3),
        "pi/2" => return Ok(FRAC_PI_2),
        other => other.parse::<f64>().map_err(|_| {
            format!("expected radians or one of pi/6, pi/4, pi/3, pi/2 (got '{other}')")
        }),
    }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Validation(format!("--config {}: {e}", path.display())))
}

/// Flag-level parameter overrides, all optional.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParamFlags {
    pub gauge: Option<GaugeKind>,
    pub eta: Option<f64>,
    pub omega: Option<f64>,
    pub splitting: Option<f64>,
    pub g: Option<f64>,
    pub n: Option<u32>,
    pub phi: Option<f64>,
}

/// Fully resolved inputs for one command invocation.
#[derive(Debug, Clone, Copy)]
pub struct Effective {
    pub gauge: GaugeKind,
    pub params: ModelParams,
}

/// Merge flags over the config file and validate.
///
/// Defaults when neither source supplies a value: coulomb gauge, resonance
/// (eta = 1), G = 0, N = 1, phi = 0.
pub fn resolve_params(cfg: &RunConfig, flags: &ParamFlags) -> Result<Effective, CliError> {
    let gauge = match (flags.gauge, cfg.params.gauge.as_deref()) {
        (Some(g), _) => g,
        (None, Some(s)) => s
            .parse::<GaugeKind>()
            .map_err(|e| CliError::Validation(format!("--gauge: {e}")))?,
        (None, None) => GaugeKind::Coulomb,
    };
    let phi_cfg = cfg
        .params
        .phi
        .as_ref()
        .map(|a| a.resolve())
        .transpose()
        .map_err(|e| CliError::Validation(format!("--phi: {e}")))?;
    let eta = flags.eta.or(cfg.params.eta);
    let omega = flags.omega.or(cfg.params.omega);
    let raw = RawParams {
        omega,
        splitting: flags.splitting.or(cfg.params.splitting),
        eta: if eta.is_none() && omega.is_none() { Some(1.0) } else { eta },
        g: flags.g.or(cfg.params.g).unwrap_or(0.0),
        n_atoms: flags.n.or(cfg.params.n).unwrap_or(1),
        phi: flags.phi.or(phi_cfg).unwrap_or(0.0),
    };
    let params = validate_params(raw).map_err(validation_to_cli)?;
    Ok(Effective { gauge, params })
}

/// Field-level validation issues rendered with their flag names.
pub fn validation_to_cli(err: ValidationError) -> CliError {
    let msgs: Vec<String> =
        err.issues.iter().map(|i| format!("--{}: {}", i.field, i.message)).collect();
    CliError::Validation(format!("invalid parameters: {}", msgs.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_literals_are_exact() {
        assert_eq!(parse_angle("pi/6").unwrap().to_bits(), FRAC_PI_6.to_bits());
        assert_eq!(parse_angle("pi/4").unwrap().to_bits(), FRAC_PI_4.to_bits());
        assert_eq!(parse_angle("pi/3").unwrap().to_bits(), FRAC_PI_3.to_bits());
        assert_eq!(parse_angle("pi/2").unwrap().to_bits(), FRAC_PI_2.to_bits());
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("-0.5").unwrap(), -0.5);
        assert!(parse_angle("pi/5").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let cfg: RunConfig = toml::from_str(
            "[params]\ngauge = \"dipole\"\neta = 1.3\ng = 0.7\nn = 4\nphi = \"pi/4\"\n",
        )
        .unwrap();
        let merged = resolve_params(&cfg, &ParamFlags::default()).unwrap();
        assert_eq!(merged.gauge, GaugeKind::Dipole);
        assert_eq!(merged.params.g, 0.7);
        assert_eq!(merged.params.phi, FRAC_PI_4);

        let flags = ParamFlags { g: Some(0.2), gauge: Some(GaugeKind::Unified), ..Default::default() };
        let merged = resolve_params(&cfg, &flags).unwrap();
        assert_eq!(merged.gauge, GaugeKind::Unified);
        assert_eq!(merged.params.g, 0.2);
        assert_eq!(merged.params.eta, 1.3);
    }

    #[test]
    fn missing_frequency_defaults_to_resonance() {
        let merged = resolve_params(&RunConfig::default(), &ParamFlags::default()).unwrap();
        assert_eq!(merged.params.eta, 1.0);
        assert_eq!(merged.gauge, GaugeKind::Coulomb);
        assert_eq!(merged.params.g, 0.0);
        assert_eq!(merged.params.n_atoms, 1);
    }

    #[test]
    fn validation_errors_name_the_flag() {
        let flags = ParamFlags { g: Some(-0.1), ..Default::default() };
        let err = resolve_params(&RunConfig::default(), &flags).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("--g"), "{msg}");
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let parsed: Result<RunConfig, _> = toml::from_str("[params]\ncoupling = 1.0\n");
        assert!(parsed.is_err());
    }
}
