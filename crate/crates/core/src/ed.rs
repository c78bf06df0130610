//! Exact diagonalization on a truncated Fock x collective-spin basis.
//!
//! The full Hamiltonian on `(n_max + 1) * (2N + 1)` states is
//!
//! ```text
//! H = omega a^dag a + Omega S_z
//!   + (G Omega / sqrt(2N)) (a + a^dag)(S_+ + S_-)
//!   + (G omega / sqrt(2N)) (a - a^dag)(S_+ - S_-)
//! ```
//!
//! with the Coulomb gauge keeping only the first coupling, the dipole gauge
//! only the second, the unified gauge both, and the non-Hermitian gauge the
//! full bracket multiplied by `i` (a complex symmetric matrix whose spectrum
//! is closed under conjugation).
//!
//! Basis index: `i = n (2N + 1) + (m + N)` with Fock number `n` and spin
//! projection `m` ascending. Dense matrices are built by explicit Kronecker
//! products; an independent matrix-free neighbor walk backs the iterative
//! path for dimensions past the dense threshold.

use faer::{Mat, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{GaugeKind, ModelParams};
use crate::variational;

/// Collective spin operators for N three-level ladder atoms (`s = N`).
pub struct SpinOperatorSet {
    pub s: f64,
    pub dim: usize,
    pub sz: Mat<f64>,
    pub sp: Mat<f64>,
    pub sm: Mat<f64>,
}

/// Spin matrices in the ascending-projection basis `m = -s ..= s`.
pub fn spin_matrices(n_atoms: u32) -> SpinOperatorSet {
    let s = f64::from(n_atoms);
    let dim = 2 * n_atoms as usize + 1;
    let m_of = |j: usize| j as f64 - s;
    let sz = Mat::from_fn(dim, dim, |i, j| if i == j { m_of(i) } else { 0.0 });
    let sp = Mat::from_fn(dim, dim, |i, j| {
        if i == j + 1 {
            let m = m_of(j);
            (s * (s + 1.0) - m * (m + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let sm = Mat::from_fn(dim, dim, |i, j| sp[(j, i)]);
    SpinOperatorSet { s, dim, sz, sp, sm }
}

/// Truncated boson operators on Fock states `0 ..= n_max`.
pub struct BosonOperatorSet {
    pub n_max: usize,
    pub dim: usize,
    pub a: Mat<f64>,
    pub adag: Mat<f64>,
    pub number: Mat<f64>,
}

pub fn boson_matrices(n_max: usize) -> BosonOperatorSet {
    let dim = n_max + 1;
    let a = Mat::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 });
    let adag = Mat::from_fn(dim, dim, |i, j| a[(j, i)]);
    let number = Mat::from_fn(dim, dim, |i, j| if i == j { i as f64 } else { 0.0 });
    BosonOperatorSet { n_max, dim, a, adag, number }
}

/// Size guards for diagonalization.
#[derive(Debug, Clone, Copy)]
pub struct EdLimits {
    /// Hard ceiling on the Hilbert-space dimension, enforced before any
    /// allocation.
    pub max_dim: usize,
    /// Largest dimension solved densely; anything above goes through the
    /// matrix-free iterative path.
    pub dense_dim: usize,
}

impl Default for EdLimits {
    fn default() -> Self {
        Self { max_dim: 60_000, dense_dim: 4000 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EdError {
    #[error("hilbert space dimension {dim} exceeds the limit {limit}; lower n_max or the atom count, or raise the limit")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix is not hermitian (max deviation {dev:.3e}); use complex_spectrum for the non-hermitian gauge")]
    NotHermitian { dev: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("eigensolver failed: {0}")]
    Solver(String),
    #[error("iterative ground-state solve stalled after {iters} iterations (residual {residual:.3e})")]
    IterativeNoConverge { iters: usize, residual: f64 },
    #[error("cutoff doubling hit the dimension limit at n_max = {n_max} before the energy settled below {tol:.1e} per atom")]
    Unconverged { tol: f64, n_max: usize, best: Option<f64> },
}

/// Dense truncated Hamiltonian.
pub enum Hamiltonian {
    RealSymmetric { n_atoms: u32, n_max: usize, mat: Mat<f64> },
    ComplexGeneral { n_atoms: u32, n_max: usize, mat: Mat<Complex64> },
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        match self {
            Hamiltonian::RealSymmetric { mat, .. } => mat.nrows(),
            Hamiltonian::ComplexGeneral { mat, .. } => mat.nrows(),
        }
    }

    pub fn n_atoms(&self) -> u32 {
        match self {
            Hamiltonian::RealSymmetric { n_atoms, .. }
            | Hamiltonian::ComplexGeneral { n_atoms, .. } => *n_atoms,
        }
    }

    pub fn n_max(&self) -> usize {
        match self {
            Hamiltonian::RealSymmetric { n_max, .. }
            | Hamiltonian::ComplexGeneral { n_max, .. } => *n_max,
        }
    }
}

fn hilbert_dim(n_atoms: u32, n_max: usize) -> usize {
    (n_max + 1) * (2 * n_atoms as usize + 1)
}

/// Coupling prefactors `(g1, g2)` of the two quadrature channels.
fn channel_couplings(gauge: GaugeKind, p: &ModelParams) -> (f64, f64) {
    let scale = p.g / (2.0 * p.spin()).sqrt();
    match gauge {
        GaugeKind::Coulomb => (scale * p.splitting, 0.0),
        GaugeKind::Dipole => (0.0, scale * p.omega),
        GaugeKind::Unified | GaugeKind::NonHermitianUnified => {
            (scale * p.splitting, scale * p.omega)
        }
    }
}

/// Build the dense truncated Hamiltonian via explicit Kronecker products.
///
/// Refuses dimensions past `limits.dense_dim` before allocating.
pub fn build_hamiltonian(
    gauge: GaugeKind,
    p: &ModelParams,
    n_max: usize,
    limits: &EdLimits,
) -> Result<Hamiltonian, EdError> {
    let dim = hilbert_dim(p.n_atoms, n_max);
    if dim > limits.dense_dim {
        return Err(EdError::TooLarge { dim, limit: limits.dense_dim });
    }
    let spin = spin_matrices(p.n_atoms);
    let boson = boson_matrices(n_max);
    let sd = spin.dim;
    let (g1, g2) = channel_couplings(gauge, p);
    let xb = Mat::from_fn(boson.dim, boson.dim, |i, j| boson.a[(i, j)] + boson.adag[(i, j)]);
    let pb = Mat::from_fn(boson.dim, boson.dim, |i, j| boson.a[(i, j)] - boson.adag[(i, j)]);
    let xs = Mat::from_fn(sd, sd, |i, j| spin.sp[(i, j)] + spin.sm[(i, j)]);
    let ps = Mat::from_fn(sd, sd, |i, j| spin.sp[(i, j)] - spin.sm[(i, j)]);
    let coupling = |i: usize, j: usize| {
        g1 * xb[(i / sd, j / sd)] * xs[(i % sd, j % sd)]
            + g2 * pb[(i / sd, j / sd)] * ps[(i % sd, j % sd)]
    };
    let diagonal = |i: usize| {
        p.omega * (i / sd) as f64 + p.splitting * ((i % sd) as f64 - spin.s)
    };
    if gauge.is_hermitian() {
        let mat = Mat::from_fn(dim, dim, |i, j| {
            let mut v = coupling(i, j);
            if i == j {
                v += diagonal(i);
            }
            v
        });
        Ok(Hamiltonian::RealSymmetric { n_atoms: p.n_atoms, n_max, mat })
    } else {
        let mat = Mat::from_fn(dim, dim, |i, j| {
            Complex64::new(if i == j { diagonal(i) } else { 0.0 }, coupling(i, j))
        });
        Ok(Hamiltonian::ComplexGeneral { n_atoms: p.n_atoms, n_max, mat })
    }
}

/// Ground eigenpair of a dense Hermitian Hamiltonian.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: Vec<f64>,
}

/// Dense ground-state solve. Rejects the complex-symmetric variant, whose
/// eigenvalues come from [`complex_spectrum`] instead.
pub fn ground_state(h: &Hamiltonian) -> Result<GroundState, EdError> {
    let mat = match h {
        Hamiltonian::RealSymmetric { mat, .. } => mat,
        Hamiltonian::ComplexGeneral { mat, .. } => {
            let mut dev = 0.0f64;
            for i in 0..mat.nrows() {
                for j in 0..mat.ncols() {
                    dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
                }
            }
            return Err(EdError::NotHermitian { dev });
        }
    };
    let dim = mat.nrows();
    let mut dev = 0.0f64;
    for i in 0..dim {
        for j in (i + 1)..dim {
            dev = dev.max((mat[(i, j)] - mat[(j, i)]).abs());
        }
    }
    if dev > 1e-10 {
        return Err(EdError::NotHermitian { dev });
    }
    let evd = mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| EdError::Solver(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut k_min = 0usize;
    for k in 1..dim {
        if s[k] < s[k_min] {
            k_min = k;
        }
    }
    let vector = (0..dim).map(|i| u[(i, k_min)]).collect();
    Ok(GroundState { energy: s[k_min], vector })
}

/// The `k` lowest eigenvalues of a dense Hermitian Hamiltonian, ascending.
pub fn low_spectrum(h: &Hamiltonian, k: usize) -> Result<Vec<f64>, EdError> {
    let mat = match h {
        Hamiltonian::RealSymmetric { mat, .. } => mat,
        Hamiltonian::ComplexGeneral { .. } => {
            return Err(EdError::Unsupported(
                "low_spectrum requires a hermitian gauge; use complex_spectrum".to_string(),
            ))
        }
    };
    let evd = mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| EdError::Solver(format!("{e:?}")))?;
    let s = evd.S();
    let mut all: Vec<f64> = (0..mat.nrows()).map(|i| s[i]).collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(k);
    Ok(all)
}

/// Full eigenvalue set, sorted by real part then imaginary part.
///
/// Real spectra are promoted to complex values with zero imaginary part so
/// both Hamiltonian variants share one output shape.
pub fn complex_spectrum(h: &Hamiltonian) -> Result<Vec<Complex64>, EdError> {
    let mut evs: Vec<Complex64> = match h {
        Hamiltonian::RealSymmetric { mat, .. } => {
            let evd = mat
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| EdError::Solver(format!("{e:?}")))?;
            let s = evd.S();
            (0..mat.nrows()).map(|i| Complex64::new(s[i], 0.0)).collect()
        }
        Hamiltonian::ComplexGeneral { mat, .. } => {
            mat.eigenvalues().map_err(|e| EdError::Solver(format!("{e:?}")))?
        }
    };
    evs.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("eigenvalues are finite")
    });
    Ok(evs)
}

/// Ground-state observables extracted from a real eigenvector.
#[derive(Debug, Clone, Copy)]
pub struct Observables {
    /// Photon number per atom.
    pub n_p: f64,
    /// Spin projection per atom, `<S_z> / N`; -1 when every atom sits in the
    /// lowest level.
    pub delta_na: f64,
    /// Weight in the top five Fock levels; a truncation health check.
    pub tail_population: f64,
}

pub fn ed_observables(n_atoms: u32, n_max: usize, vector: &[f64]) -> Observables {
    let sd = 2 * n_atoms as usize + 1;
    let s = f64::from(n_atoms);
    assert_eq!(vector.len(), hilbert_dim(n_atoms, n_max), "vector length mismatch");
    let mut norm = 0.0;
    let mut n_mean = 0.0;
    let mut m_mean = 0.0;
    let mut tail = 0.0;
    let tail_from = n_max.saturating_sub(4);
    for (i, &v) in vector.iter().enumerate() {
        let w = v * v;
        let n = i / sd;
        let m = (i % sd) as f64 - s;
        norm += w;
        n_mean += w * n as f64;
        m_mean += w * m;
        if n >= tail_from {
            tail += w;
        }
    }
    let n_atoms = f64::from(n_atoms);
    Observables {
        n_p: n_mean / norm / n_atoms,
        delta_na: m_mean / norm / n_atoms,
        tail_population: tail / norm,
    }
}

/// Matrix-free Hermitian Hamiltonian for the iterative path.
///
/// Stores only the two ladder coefficient tables and the diagonal; one apply
/// touches each basis state and its four coupled neighbors.
#[derive(Debug, Clone)]
pub struct HamiltonianOp {
    n_atoms: u32,
    n_max: usize,
    dim: usize,
    g1: f64,
    g2: f64,
    diag: Vec<f64>,
    /// `bc[n] = sqrt(n + 1)` couples Fock levels `n` and `n + 1`.
    bc: Vec<f64>,
    /// `spc[j] = sqrt(s(s+1) - m_j(m_j + 1))` couples projections `j` and
    /// `j + 1`.
    spc: Vec<f64>,
}

impl HamiltonianOp {
    pub fn new(
        gauge: GaugeKind,
        p: &ModelParams,
        n_max: usize,
        limits: &EdLimits,
    ) -> Result<Self, EdError> {
        if !gauge.is_hermitian() {
            return Err(EdError::Unsupported(
                "the matrix-free path requires a hermitian gauge; use complex_spectrum on a dense build".to_string(),
            ));
        }
        let dim = hilbert_dim(p.n_atoms, n_max);
        if dim > limits.max_dim {
            return Err(EdError::TooLarge { dim, limit: limits.max_dim });
        }
        let sd = 2 * p.n_atoms as usize + 1;
        let s = p.spin();
        let (g1, g2) = channel_couplings(gauge, p);
        let diag = (0..dim)
            .map(|i| p.omega * (i / sd) as f64 + p.splitting * ((i % sd) as f64 - s))
            .collect();
        let bc = (0..n_max).map(|n| ((n + 1) as f64).sqrt()).collect();
        let spc = (0..sd - 1)
            .map(|j| {
                let m = j as f64 - s;
                (s * (s + 1.0) - m * (m + 1.0)).sqrt()
            })
            .collect();
        Ok(Self { n_atoms: p.n_atoms, n_max, dim, g1, g2, diag, bc, spc })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_atoms(&self) -> u32 {
        self.n_atoms
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `y = H x`.
    ///
    /// Neighbor signs: the `(a + a^dag)(S_+ + S_-)` channel couples all four
    /// `(n +- 1, j -+ 1)` neighbors with `+`, the `(a - a^dag)(S_+ - S_-)`
    /// channel with `+, -, -, +` for `(n+1, j-1), (n+1, j+1), (n-1, j-1),
    /// (n-1, j+1)`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let sd = 2 * self.n_atoms as usize + 1;
        let (g1, g2) = (self.g1, self.g2);
        for n in 0..=self.n_max {
            let row = n * sd;
            for j in 0..sd {
                let i = row + j;
                let mut acc = self.diag[i] * x[i];
                if n < self.n_max {
                    let up = i + sd;
                    if j > 0 {
                        acc += (g1 + g2) * self.bc[n] * self.spc[j - 1] * x[up - 1];
                    }
                    if j + 1 < sd {
                        acc += (g1 - g2) * self.bc[n] * self.spc[j] * x[up + 1];
                    }
                }
                if n > 0 {
                    let down = i - sd;
                    if j > 0 {
                        acc += (g1 - g2) * self.bc[n - 1] * self.spc[j - 1] * x[down - 1];
                    }
                    if j + 1 < sd {
                        acc += (g1 + g2) * self.bc[n - 1] * self.spc[j] * x[down + 1];
                    }
                }
                y[i] = acc;
            }
        }
    }
}

const LANCZOS_SEED: u64 = 0x0dd5_eed5;
const LANCZOS_MAX_ITERS: usize = 600;

/// Lanczos ground-state solve with full reorthogonalization.
///
/// Deterministic: the start vector comes from a fixed-seed generator. The
/// Ritz pair is accepted once the residual bound `|beta_j y_last|` drops
/// below `1e-11 * max(1, |theta|)`.
pub fn lanczos_ground(op: &HamiltonianOp) -> Result<GroundState, EdError> {
    let dim = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let max_iters = LANCZOS_MAX_ITERS.min(dim);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; dim];
    let mut last_residual = f64::INFINITY;
    for j in 0..max_iters {
        op.apply(&basis[j], &mut w);
        if j > 0 {
            let b = betas[j - 1];
            let prev = &basis[j - 1];
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= b * pi;
            }
        }
        let alpha = dot(&w, &basis[j]);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(&basis[j]) {
            *wi -= alpha * vi;
        }
        // Full reorthogonalization keeps the basis clean enough that no
        // ghost eigenvalues appear.
        for prev in &basis {
            let c = dot(&w, prev);
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= c * pi;
            }
        }
        let beta = dot(&w, &w).sqrt();
        let exhausted = beta < 1e-14 * alpha.abs().max(1.0);
        if exhausted || (j + 1) % 5 == 0 || j + 1 == max_iters {
            let (theta, y) = tridiag_ground(&alphas, &betas)?;
            let residual = (beta * y[y.len() - 1]).abs();
            last_residual = residual;
            if exhausted || residual <= 1e-11 * theta.abs().max(1.0) {
                let mut vector = vec![0.0f64; dim];
                for (yk, vk) in y.iter().zip(&basis) {
                    for (out, vi) in vector.iter_mut().zip(vk) {
                        *out += yk * vi;
                    }
                }
                normalize(&mut vector);
                return Ok(GroundState { energy: theta, vector });
            }
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|wi| wi / beta).collect();
        basis.push(next);
    }
    Err(EdError::IterativeNoConverge { iters: max_iters, residual: last_residual })
}

/// Lowest eigenpair of the symmetric tridiagonal built by the Lanczos sweep.
fn tridiag_ground(alphas: &[f64], betas: &[f64]) -> Result<(f64, Vec<f64>), EdError> {
    let k = alphas.len();
    let t = Mat::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i.abs_diff(j) == 1 {
            betas[i.min(j)]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| EdError::Solver(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut k_min = 0usize;
    for i in 1..k {
        if s[i] < s[k_min] {
            k_min = i;
        }
    }
    Ok((s[k_min], (0..k).map(|i| u[(i, k_min)]).collect()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// Ground-state solve choosing dense or iterative by dimension.
///
/// Dimensions up to `limits.dense_dim` are solved densely; anything above
/// goes through the matrix-free Lanczos path, and anything above
/// `limits.max_dim` is refused before allocation.
pub fn ground_energy(
    gauge: GaugeKind,
    p: &ModelParams,
    n_max: usize,
    limits: &EdLimits,
) -> Result<GroundState, EdError> {
    if !gauge.is_hermitian() {
        return Err(EdError::Unsupported(
            "ground-state solve requires a hermitian gauge; use complex_spectrum".to_string(),
        ));
    }
    let dim = hilbert_dim(p.n_atoms, n_max);
    if dim > limits.max_dim {
        return Err(EdError::TooLarge { dim, limit: limits.max_dim });
    }
    if dim <= limits.dense_dim {
        ground_state(&build_hamiltonian(gauge, p, n_max, limits)?)
    } else {
        lanczos_ground(&HamiltonianOp::new(gauge, p, n_max, limits)?)
    }
}

/// Converged truncation result.
#[derive(Debug, Clone, Copy)]
pub struct EdResult {
    pub ground_energy_per_atom: f64,
    pub n_p: f64,
    pub delta_na: f64,
    /// Cutoff whose results are reported.
    pub n_max_used: usize,
    pub tail_population: f64,
    pub converged: bool,
    pub dim: usize,
}

/// Weight of the top five Fock levels that still flags an unhealthy cutoff.
pub const TAIL_TOL: f64 = 1e-10;

/// Double the Fock cutoff until the per-atom ground energy moves less than
/// `tol` and the tail population is healthy.
///
/// The starting cutoff is seeded from the variational photon number,
/// `ceil(4 N max(n_p, 1)) + 20`. On success the reported `n_max_used` is the
/// smaller of the last two cutoffs; its observables are the ones returned.
pub fn cutoff_converge(
    gauge: GaugeKind,
    p: &ModelParams,
    tol: f64,
    limits: &EdLimits,
) -> Result<EdResult, EdError> {
    if !gauge.is_hermitian() {
        return Err(EdError::Unsupported(
            "cutoff convergence requires a hermitian gauge; use complex_spectrum".to_string(),
        ));
    }
    let n_p_var = variational::solve_ground_state(gauge, p).n_p;
    let atoms = p.spin();
    let mut n_max = (4.0 * atoms * n_p_var.max(1.0)).ceil() as usize + 20;
    let mut gs = ground_energy(gauge, p, n_max, limits)?;
    loop {
        let doubled = 2 * n_max;
        if hilbert_dim(p.n_atoms, doubled) > limits.max_dim {
            return Err(EdError::Unconverged {
                tol,
                n_max,
                best: Some(gs.energy / atoms),
            });
        }
        let gs2 = ground_energy(gauge, p, doubled, limits)?;
        let delta = (gs.energy - gs2.energy).abs() / atoms;
        let obs = ed_observables(p.n_atoms, n_max, &gs.vector);
        if delta < tol && obs.tail_population < TAIL_TOL {
            return Ok(EdResult {
                ground_energy_per_atom: gs.energy / atoms,
                n_p: obs.n_p,
                delta_na: obs.delta_na,
                n_max_used: n_max,
                tail_population: obs.tail_population,
                converged: true,
                dim: hilbert_dim(p.n_atoms, n_max),
            });
        }
        n_max = doubled;
        gs = gs2;
    }
}

/// Largest entry of `[H, Pi]` with the parity `Pi = diag((-1)^{n + m + N})`.
///
/// Every coupling flips one Fock quantum and one spin quantum together, so
/// the commutator is exactly zero entry by entry.
pub fn parity_commutator_max(h: &Hamiltonian) -> f64 {
    let dim = h.dim();
    let sd = 2 * h.n_atoms() as usize + 1;
    let parity = |i: usize| if (i / sd + i % sd) % 2 == 0 { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    match h {
        Hamiltonian::RealSymmetric { mat, .. } => {
            for i in 0..dim {
                for j in 0..dim {
                    worst = worst.max((mat[(i, j)] * (parity(j) - parity(i))).abs());
                }
            }
        }
        Hamiltonian::ComplexGeneral { mat, .. } => {
            for i in 0..dim {
                for j in 0..dim {
                    worst = worst.max((mat[(i, j)] * (parity(j) - parity(i))).norm());
                }
            }
        }
    }
    worst
}

/// Dump the Hamiltonian in Matrix Market coordinate format (1-based indices,
/// 17 significant digits). Real symmetric builds emit the lower triangle;
/// the complex variant emits every nonzero.
pub fn write_matrix_market<W: std::io::Write>(
    w: &mut W,
    h: &Hamiltonian,
) -> std::io::Result<()> {
    let dim = h.dim();
    match h {
        Hamiltonian::RealSymmetric { mat, .. } => {
            let mut entries = Vec::new();
            for j in 0..dim {
                for i in j..dim {
                    if mat[(i, j)] != 0.0 {
                        entries.push((i, j, mat[(i, j)]));
                    }
                }
            }
            writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
            writeln!(w, "{dim} {dim} {}", entries.len())?;
            for (i, j, v) in entries {
                writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
            }
        }
        Hamiltonian::ComplexGeneral { mat, .. } => {
            let mut entries = Vec::new();
            for j in 0..dim {
                for i in 0..dim {
                    if mat[(i, j)] != Complex64::new(0.0, 0.0) {
                        entries.push((i, j, mat[(i, j)]));
                    }
                }
            }
            writeln!(w, "%%MatrixMarket matrix coordinate complex general")?;
            writeln!(w, "{dim} {dim} {}", entries.len())?;
            for (i, j, v) in entries {
                writeln!(w, "{} {} {:.16e} {:.16e}", i + 1, j + 1, v.re, v.im)?;
            }
        }
    }
    Ok(())
}
