use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::SteadyShearState;
use crate::error::{Error, Result};
use crate::modal::problem::assemble_modal;
use crate::modal::solve::{solve_modal_with, FilterOptions};

/// Growth rates at or below this (in 1/time) count as neutral.
pub const TOL_GROWTH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectralVerdict {
    SpectrallyStable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub k: f64,
    /// `k * max Im(c)` over retained modes; `0` when none was retained.
    pub sigma: f64,
    /// Wave speed of the fastest-growing retained mode, `NaN` when none.
    pub c: Complex64,
    pub retained: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub n: usize,
    pub points: Vec<GrowthPoint>,
    pub max_sigma: f64,
    pub verdict: SpectralVerdict,
}

/// `m` points spaced logarithmically from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..m).map(|i| (la + (lb - la) * i as f64 / (m - 1) as f64).exp()).collect()
}

pub fn scan_wavenumbers(state: &SteadyShearState<f64>, k_grid: &[f64], n: usize) -> Result<GrowthCurve> {
    scan_wavenumbers_with(state, k_grid, n, &FilterOptions::default())
}

pub fn scan_wavenumbers_with(
    state: &SteadyShearState<f64>,
    k_grid: &[f64],
    n: usize,
    opts: &FilterOptions,
) -> Result<GrowthCurve> {
    if k_grid.is_empty() || k_grid.iter().any(|&k| !(k > 0.0)) || k_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("k grid must be non-empty, positive and sorted".into()));
    }
    let points = k_grid
        .par_iter()
        .map(|&k| {
            let spectrum = solve_modal_with(&assemble_modal(state, k, n)?, opts)?;
            Ok(match spectrum.leading() {
                Some(m) => GrowthPoint { k, sigma: m.growth_rate, c: m.c, retained: spectrum.modes.len() },
                None => GrowthPoint { k, sigma: 0.0, c: Complex64::new(f64::NAN, f64::NAN), retained: 0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_sigma = points.iter().map(|p| p.sigma).fold(f64::NEG_INFINITY, f64::max);
    let verdict = if max_sigma <= opts.tol_growth { SpectralVerdict::SpectrallyStable } else { SpectralVerdict::Unstable };
    Ok(GrowthCurve { n, points, max_sigma, verdict })
}
