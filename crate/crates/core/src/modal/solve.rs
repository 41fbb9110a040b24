use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::Grid1D;
use crate::error::{Error, Result};
use crate::modal::problem::{assemble_modal, ModalProblem};
use crate::modal::residual::{ResidualEvaluator, ResidualReport};

/// Complex samples on a grid (eigenfunctions).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexProfile {
    grid: Grid1D<f64>,
    values: Vec<Complex64>,
}

impl ComplexProfile {
    pub fn new(grid: Grid1D<f64>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D<f64> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalSolution {
    /// Complex wave speed.
    pub c: Complex64,
    /// `k * Im(c)`.
    pub growth_rate: f64,
    /// Normalized so that the largest entry is `1`.
    pub phi: ComplexProfile,
    /// `(1 + a^2 k^2) phi - a^2 phi''`
    pub psi: ComplexProfile,
    pub residual: f64,
    pub boundary_violation: f64,
    pub near_critical_layer: bool,
    /// Relative distance to the closest eigenvalue on the refined grid, when checked.
    pub drift: Option<f64>,
}

/// Thresholds for discarding discretization artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterOptions {
    pub enabled: bool,
    /// Drop `|c| > speed_factor * max|V|`.
    pub speed_factor: f64,
    pub max_residual: f64,
    pub max_drift: f64,
    /// Node increment of the comparison grid for the drift test (0 disables it).
    pub drift_extra_nodes: usize,
    /// Scan verdicts treat growth rates up to this as neutral.
    pub tol_growth: f64,
}

impl Default for FilterOptions {
    fn default() -> Self {
        Self { enabled: true, speed_factor: 1e3, max_residual: 1e-3, max_drift: 1e-4, drift_extra_nodes: 32, tol_growth: super::scan::TOL_GROWTH }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscardCounts {
    pub too_fast: usize,
    pub residual: usize,
    pub drift: usize,
}

#[derive(Debug, Clone)]
pub struct ModalSpectrum {
    pub k: f64,
    pub n: usize,
    /// Retained modes, by decreasing `Im(c)`.
    pub modes: Vec<ModalSolution>,
    /// Every eigenvalue of the discrete problem, unfiltered.
    pub eigenvalues: Vec<Complex64>,
    pub discarded: DiscardCounts,
}

impl ModalSpectrum {
    pub fn leading(&self) -> Option<&ModalSolution> {
        self.modes.first()
    }

    pub fn max_growth_rate(&self) -> f64 {
        self.modes.iter().map(|m| m.growth_rate).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn condition_estimate(m: &Mat<f64>) -> String {
    match m.svd() {
        Ok(svd) => {
            let s = svd.S().column_vector();
            let (hi, lo) = (s[0], s[s.nrows() - 1]);
            format!("condition number of B ~ {:e}", hi / lo)
        }
        Err(_) => "condition number unavailable".into(),
    }
}

pub(crate) fn eigenvalues_of(problem: &ModalProblem) -> Result<Vec<Complex64>> {
    problem
        .standard_matrix()
        .eigenvalues()
        .map_err(|e| Error::EigenSolver(format!("{e:?}; {}", condition_estimate(&problem.b))))
}

pub fn solve_modal(problem: &ModalProblem) -> Result<ModalSpectrum> {
    solve_modal_with(problem, &FilterOptions::default())
}

pub fn solve_modal_with(problem: &ModalProblem, opts: &FilterOptions) -> Result<ModalSpectrum> {
    let n = problem.n();
    let m = n - 2;
    let k = problem.k;
    let eig = problem
        .standard_matrix()
        .eigen()
        .map_err(|e| Error::EigenSolver(format!("{e:?}; {}", condition_estimate(&problem.b))))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let eigenvalues: Vec<Complex64> = (0..m).map(|j| s[j]).collect();

    // psi = (D2 - k^2)^-1 q and phi = B^-1 q on the interior
    let q_re = Mat::from_fn(m, m, |i, j| u[(i, j)].re);
    let q_im = Mat::from_fn(m, m, |i, j| u[(i, j)].im);
    let phi_re = &problem.g * &q_re;
    let phi_im = &problem.g * &q_im;
    let psi_re = &problem.p_inv * &q_re;
    let psi_im = &problem.p_inv * &q_im;

    let state = &problem.state;
    let grid = state.grid().clone();
    let vmax = state.v().max_abs().max(f64::MIN_POSITIVE);
    let evaluator = ResidualEvaluator::new(state, &grid)?;
    let refined = if opts.enabled && opts.drift_extra_nodes > 0 {
        Some(eigenvalues_of(&assemble_modal(state, k, n + opts.drift_extra_nodes)?)?)
    } else {
        None
    };

    let mut discarded = DiscardCounts::default();
    let mut modes = Vec::new();
    for j in 0..m {
        let c = eigenvalues[j];
        if !c.re.is_finite() || !c.im.is_finite() || (opts.enabled && c.norm() > opts.speed_factor * vmax) {
            discarded.too_fast += 1;
            continue;
        }
        let mut phi = vec![Complex64::default(); n];
        let mut psi = vec![Complex64::default(); n];
        for i in 0..m {
            phi[i + 1] = Complex64::new(phi_re[(i, j)], phi_im[(i, j)]);
            psi[i + 1] = Complex64::new(psi_re[(i, j)], psi_im[(i, j)]);
        }
        let imax = (0..n).max_by(|&a, &b| phi[a].norm().partial_cmp(&phi[b].norm()).unwrap()).unwrap();
        let pivot = phi[imax];
        if pivot.norm() > 0.0 {
            phi.iter_mut().for_each(|z| *z /= pivot);
            psi.iter_mut().for_each(|z| *z /= pivot);
        }
        let ResidualReport { residual, boundary_violation, near_critical_layer } = evaluator.evaluate(&phi, &psi, c, k);
        if opts.enabled && !(residual <= opts.max_residual) {
            discarded.residual += 1;
            continue;
        }
        let drift = refined.as_ref().map(|r| {
            let closest = r.iter().map(|z| (z - c).norm()).fold(f64::INFINITY, f64::min);
            closest / c.norm().max(1e-3 * vmax)
        });
        if opts.enabled && drift.is_some_and(|d| !(d <= opts.max_drift)) {
            discarded.drift += 1;
            continue;
        }
        modes.push(ModalSolution {
            c,
            growth_rate: k * c.im,
            phi: ComplexProfile { grid: grid.clone(), values: phi },
            psi: ComplexProfile { grid: grid.clone(), values: psi },
            residual,
            boundary_violation,
            near_critical_layer,
            drift,
        });
    }
    modes.sort_by(|a, b| b.c.im.total_cmp(&a.c.im).then(a.c.re.total_cmp(&b.c.re)));
    Ok(ModalSpectrum { k, n, modes, eigenvalues, discarded })
}
