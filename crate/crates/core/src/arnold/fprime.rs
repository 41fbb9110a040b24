use serde::{Deserialize, Serialize};

use crate::domain::{SteadyShearState, TorusState};
use crate::error::{Error, Result};

/// Number of vorticity bins used on the torus.
pub const TORUS_BINS: usize = 64;

#[derive(Debug, Clone, Copy)]
pub enum SteadyStateRef<'a> {
    Shear(&'a SteadyShearState<f64>),
    Torus(&'a TorusState),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FPrimeSample {
    /// `y` for shear states, the bin centre in `omega0` on the torus.
    pub coordinate: f64,
    pub value: f64,
}

/// Samples of `F'` along a steady state with `phi0 = F(omega0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FPrimeProfile {
    pub samples: Vec<FPrimeSample>,
    /// Bounds of `F'` over the regular samples.
    pub inf: f64,
    pub sup: f64,
    /// `F'` is unbounded: `U''` vanishes where `V` does not.
    pub singular: bool,
    pub singular_locus: Vec<f64>,
    /// Zeros of `U''` where `V` vanishes too; `F'` stays bounded there.
    pub removable: Vec<f64>,
    /// Sup-norm misfit of the reconstructed relation (torus only).
    pub relation_residual: f64,
}

impl FPrimeProfile {
    fn from_samples(samples: Vec<FPrimeSample>, singular_locus: Vec<f64>, removable: Vec<f64>, relation_residual: f64) -> Self {
        let inf = samples.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let sup = samples.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
        Self { samples, inf, sup, singular: !singular_locus.is_empty(), singular_locus, removable, relation_residual }
    }

    /// Bounds `(K1, K2)` of `-F'`.
    pub fn neg_bounds(&self) -> (f64, f64) {
        (-self.sup, -self.inf)
    }
}

pub fn reconstruct_f_prime(state: SteadyStateRef<'_>) -> Result<FPrimeProfile> {
    match state {
        SteadyStateRef::Shear(s) => shear_f_prime(s, 0.0),
        SteadyStateRef::Torus(t) => torus_f_prime(t),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `F' = -(V + shift) / U''` on the grid nodes.
pub(crate) fn shear_f_prime(state: &SteadyShearState<f64>, shift: f64) -> Result<FPrimeProfile> {
    let y = state.grid().nodes();
    let v = state.v().values();
    let d2u = state.d2u().values();
    let tol = 1e-9 * state.d2u().max_abs().max(1.0);
    if d2u.iter().all(|x| x.abs() <= tol) {
        return Err(Error::AllSingular);
    }
    // zeros of U'': small samples and bracketed sign changes
    let mut zeros = Vec::new();
    for i in 0..y.len() {
        if d2u[i].abs() <= tol {
            zeros.push(y[i]);
        } else if i + 1 < y.len() && d2u[i + 1].abs() > tol && (d2u[i] > 0.0) != (d2u[i + 1] > 0.0) {
            zeros.push(bisect(|t| state.d2u().eval(t), y[i], y[i + 1]));
        }
    }
    let vtol = 1e-6 * state.v().max_abs().max(shift.abs()).max(1.0);
    let (mut singular, mut removable) = (Vec::new(), Vec::new());
    for &z in &zeros {
        if (state.v().eval(z) + shift).abs() <= vtol {
            removable.push(z);
        } else {
            singular.push(z);
        }
    }
    let samples = (0..y.len())
        .filter(|&i| d2u[i].abs() > tol)
        .map(|i| FPrimeSample { coordinate: y[i], value: -(v[i] + shift) / d2u[i] })
        .collect();
    Ok(FPrimeProfile::from_samples(samples, singular, removable, 0.0))
}

/// Least-squares quadratic through `(x, f)`; returns value and slope at `x0`.
fn local_quadratic(points: &[(f64, f64)], x0: f64) -> Option<(f64, f64, f64)> {
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    let scale = points.iter().map(|p| (p.0 - x0).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for &(x, f) in points {
        let t = (x - x0) / scale;
        let basis = [1.0, t, t * t];
        for i in 0..3 {
            r[i] += basis[i] * f;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let a = crate::linalg::Dense::from_fn(3, 3, |i, j| m[i][j]);
    let c = a.solve(&r).ok()?;
    Some((c[0], c[1] / scale, c[2] / (scale * scale)))
}

fn torus_f_prime(state: &TorusState) -> Result<FPrimeProfile> {
    let omega = state.omega();
    let phi = state.phi();
    let (lo, hi) = omega.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &w| (a.min(w), b.max(w)));
    let phi_span = phi.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p)) - phi.iter().fold(f64::INFINITY, |m, &p| m.min(p));
    if !(hi - lo > 1e-12 * hi.abs().max(lo.abs()).max(1e-300)) {
        return Err(Error::AllSingular);
    }
    let mut pairs: Vec<(f64, f64)> = omega.into_iter().zip(phi).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let width = (hi - lo) / TORUS_BINS as f64;
    let bin_of = |w: f64| (((w - lo) / width) as usize).min(TORUS_BINS - 1);
    let mut bins: Vec<Vec<(f64, f64)>> = vec![Vec::new(); TORUS_BINS];
    for &p in &pairs {
        bins[bin_of(p.0)].push(p);
    }
    let distinct = |pts: &[(f64, f64)]| {
        let mut n = 0;
        let mut last = f64::NAN;
        for p in pts {
            if !(p.0 - last).abs().le(&(1e-8 * width)) {
                n += 1;
                last = p.0;
            }
        }
        n
    };
    let threshold = 1e-6 * phi_span.max(f64::MIN_POSITIVE);
    let mut residual = 0.0f64;
    let mut samples = Vec::new();
    for b in 0..TORUS_BINS {
        if bins[b].is_empty() {
            continue;
        }
        // widen the stencil until it holds three distinct vorticity values
        let mut reach = 1;
        let mut pts: Vec<(f64, f64)>;
        loop {
            let from = b.saturating_sub(reach);
            let to = (b + reach).min(TORUS_BINS - 1);
            pts = bins[from..=to].iter().flatten().copied().collect();
            if distinct(&pts) >= 3 || (from == 0 && to == TORUS_BINS - 1) {
                break;
            }
            reach += 1;
        }
        let centre = bins[b].iter().map(|p| p.0).sum::<f64>() / bins[b].len() as f64;
        let Some((f0, slope, curv)) = local_quadratic(&pts, centre) else { continue };
        for &(w, p) in &bins[b] {
            let t = w - centre;
            residual = residual.max((p - (f0 + slope * t + curv * t * t)).abs());
        }
        samples.push(FPrimeSample { coordinate: centre, value: slope });
    }
    if residual > threshold {
        return Err(Error::AssumptionViolated { residual, threshold });
    }
    Ok(FPrimeProfile::from_samples(samples, Vec::new(), Vec::new(), residual))
}
