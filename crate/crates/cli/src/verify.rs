//! Randomized invariant suites behind `dicke verify`.
//!
//! Sampling is seeded, so a reported failure replays with the same seed.
//! Each suite draws from its own RNG stream; running a single scope or
//! `all` makes no difference to the samples a suite sees.

use std::f64::consts::{FRAC_PI_2, PI};

use dicke::model::{GaugeKind, ModelParams};
use dicke::testing;
use dicke::variational::{self, Branch, RotationSign, VariationalSolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const DEFAULT_SAMPLES: u32 = 200;
pub const DEFAULT_SEED: u64 = 0x00d1_c4e5;

const SUITES: [&str; 5] = ["gauge-reduction", "resonance", "berry", "offdiag", "ep"];

#[derive(Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: u32,
    pub passed: u32,
    pub worst: f64,
    pub tolerance: f64,
    pub first_failure: Option<String>,
}

struct Sample {
    residual: f64,
    desc: String,
}

pub fn run_scope(scope: &str, samples: u32, seed: u64) -> Result<Vec<SuiteReport>, CliError> {
    let selected: Vec<&'static str> = match scope {
        "all" => SUITES.to_vec(),
        other => match SUITES.iter().find(|&&s| s == other) {
            Some(&s) => vec![s],
            None => {
                return Err(CliError::Validation(format!(
                    "unknown scope '{other}' (valid scopes: all, {})",
                    SUITES.join(", ")
                )))
            }
        },
    };
    Ok(selected.into_iter().map(|name| run_one(name, samples, seed)).collect())
}

fn run_one(name: &'static str, samples: u32, seed: u64) -> SuiteReport {
    match name {
        "gauge-reduction" => run_suite(name, samples, 1e-12, seed, 1, gauge_reduction_sample),
        "resonance" => run_suite(name, samples, 1e-12, seed, 2, resonance_sample),
        "berry" => run_suite(name, samples, 0.0, seed, 3, berry_sample),
        "offdiag" => run_suite(name, samples, 1e-12, seed, 4, offdiag_sample),
        "ep" => run_suite(name, samples, 1e-10, seed, 5, ep_sample),
        other => unreachable!("scope '{other}' filtered by run_scope"),
    }
}

fn run_suite(
    name: &'static str,
    samples: u32,
    tolerance: f64,
    seed: u64,
    stream: u64,
    sample: fn(&mut ChaCha8Rng) -> Sample,
) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut passed = 0;
    let mut worst = 0.0f64;
    let mut first_failure = None;
    for _ in 0..samples {
        let s = sample(&mut rng);
        if s.residual <= tolerance {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(format!("{} (residual {:.3e})", s.desc, s.residual));
        }
        if s.residual.is_finite() {
            worst = worst.max(s.residual);
        } else {
            worst = f64::INFINITY;
        }
    }
    SuiteReport { name, samples, passed, worst, tolerance, first_failure }
}

fn draw_params(rng: &mut ChaCha8Rng) -> (f64, f64, u32, f64) {
    (
        rng.gen_range(0.2..2.0),
        rng.gen_range(0.0..2.0),
        rng.gen_range(1..=32),
        rng.gen_range(0.0..PI),
    )
}

fn solution_residual(a: &VariationalSolution, b: &VariationalSolution) -> f64 {
    if a.phase != b.phase {
        return f64::INFINITY;
    }
    let mut r = (a.gamma_c - b.gamma_c).abs();
    r = r.max((a.n_p - b.n_p).abs());
    r = r.max((a.energy - b.energy).norm());
    r = r.max((a.delta_na - b.delta_na).abs());
    r = r.max((a.berry_per_atom - b.berry_per_atom).abs());
    r.max((a.stability - b.stability).abs())
}

fn gauge_reduction_sample(rng: &mut ChaCha8Rng) -> Sample {
    let (eta, g, n, _) = draw_params(rng);
    let at_zero = ModelParams::new(eta, g, n, 0.0).expect("sampled domain is valid");
    let coulomb = solution_residual(
        &variational::solve_ground_state(GaugeKind::Unified, &at_zero),
        &variational::solve_ground_state(GaugeKind::Coulomb, &at_zero),
    );
    let at_quarter = ModelParams::new(eta, g, n, FRAC_PI_2).expect("sampled domain is valid");
    let dipole = solution_residual(
        &variational::solve_ground_state(GaugeKind::Unified, &at_quarter),
        &variational::solve_ground_state(GaugeKind::Dipole, &at_quarter),
    );
    Sample { residual: coulomb.max(dipole), desc: format!("eta={eta} g={g} n={n}") }
}

fn resonance_sample(rng: &mut ChaCha8Rng) -> Sample {
    let (_, g, n, phi) = draw_params(rng);
    let p = ModelParams::new(1.0, g, n, phi).expect("sampled domain is valid");
    let unified = variational::solve_ground_state(GaugeKind::Unified, &p);
    let coulomb = variational::solve_ground_state(GaugeKind::Coulomb, &p);
    let dipole = variational::solve_ground_state(GaugeKind::Dipole, &p);
    let residual = solution_residual(&unified, &coulomb)
        .max(solution_residual(&unified, &dipole))
        .max(solution_residual(&coulomb, &dipole));
    Sample { residual, desc: format!("eta=1 g={g} n={n} phi={phi}") }
}

fn berry_sample(rng: &mut ChaCha8Rng) -> Sample {
    let (eta, g, n, phi) = draw_params(rng);
    let gauge = GaugeKind::ALL[rng.gen_range(0..GaugeKind::ALL.len())];
    let p = ModelParams::new(eta, g, n, phi).expect("sampled domain is valid");
    let mut residual = {
        let s = variational::solve_ground_state(gauge, &p);
        (s.berry_per_atom - 2.0 * PI * s.n_p).abs()
    };
    if let Some(u) = variational::unstable_superradiant(gauge, &p) {
        residual = residual.max((u.berry_per_atom - 2.0 * PI * u.n_p).abs());
    }
    Sample { residual, desc: format!("gauge={gauge} eta={eta} g={g} n={n} phi={phi}") }
}

fn offdiag_sample(rng: &mut ChaCha8Rng) -> Sample {
    let (eta, g, n, phi) = draw_params(rng);
    let gauge = GaugeKind::ALL[rng.gen_range(0..GaugeKind::ALL.len())];
    let p = ModelParams::new(eta, g, n, phi).expect("sampled domain is valid");
    // The hyperbolic rotation exists only below the exceptional point, so in
    // the non-Hermitian gauge the field amplitude is drawn inside it.
    let gamma = if gauge == GaugeKind::NonHermitianUnified && g > 0.0 {
        let fraction = rng.gen_range(0.0..0.95);
        (fraction * p.spin() / (8.0 * g * g * p.phase_factor())).sqrt()
    } else {
        rng.gen_range(0.0..3.0)
    };
    let mut residual = 0.0f64;
    for sign in [RotationSign::Lower, RotationSign::Upper] {
        match variational::offdiag_residuals_signed(gauge, &p, gamma, sign) {
            Ok(res) => residual = residual.max(res.abs_b).max(res.abs_c),
            Err(_) => residual = f64::INFINITY,
        }
    }
    Sample {
        residual,
        desc: format!("gauge={gauge} eta={eta} g={g} n={n} phi={phi} gamma={gamma}"),
    }
}

fn ep_sample(rng: &mut ChaCha8Rng) -> Sample {
    let (eta, _, n, phi) = draw_params(rng);
    let gamma = rng.gen_range(0.05..3.0);
    let p = ModelParams::new(eta, 1.0, n, phi).expect("sampled domain is valid");
    let desc = format!("eta={eta} n={n} phi={phi} gamma={gamma}");
    let g_ep = variational::exceptional_point(&p, gamma).expect("gamma > 0");
    let radicand =
        |g: f64| 1.0 - 8.0 * g * g * gamma * gamma * p.phase_factor() / p.spin();
    let Some(root) = testing::bisect_sign_change(radicand, 1e-6, 1e4, 260) else {
        return Sample { residual: f64::INFINITY, desc };
    };
    let gauge = GaugeKind::NonHermitianUnified;
    let branch_pair = |g: f64| {
        let q = ModelParams::new(eta, g, n, phi).expect("sampled domain is valid");
        (
            variational::energy(gauge, &q, gamma, Branch::Minus).expect("gamma finite"),
            variational::energy(gauge, &q, gamma, Branch::Plus).expect("gamma finite"),
        )
    };
    let (below_minus, below_plus) = branch_pair(0.9 * g_ep);
    let (above_minus, above_plus) = branch_pair(1.1 * g_ep);
    let structure_ok = below_minus.im == 0.0
        && below_plus.im == 0.0
        && above_minus.re == above_plus.re
        && above_minus.im < 0.0
        && above_minus == above_plus.conj();
    if !structure_ok {
        return Sample { residual: f64::INFINITY, desc };
    }
    Sample { residual: (root - g_ep).abs() / g_ep, desc }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_default_seed() {
        let reports = run_scope("all", 50, DEFAULT_SEED).unwrap();
        assert_eq!(reports.len(), 5);
        for rep in &reports {
            assert_eq!(rep.passed, rep.samples, "{} failed: {:?}", rep.name, rep.first_failure);
            assert!(rep.worst <= rep.tolerance, "{}: worst {}", rep.name, rep.worst);
        }
    }

    #[test]
    fn scope_selects_one_suite() {
        let reports = run_scope("berry", 10, DEFAULT_SEED).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].name, "berry");
        assert!(run_scope("bogus", 10, DEFAULT_SEED).is_err());
    }

    #[test]
    fn same_seed_reproduces_residuals() {
        let a = run_scope("offdiag", 25, 7).unwrap();
        let b = run_scope("offdiag", 25, 7).unwrap();
        assert_eq!(a[0].worst.to_bits(), b[0].worst.to_bits());
    }
}
