use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{Fft2, TorusGrid, TorusState};
use crate::error::{Error, Result};
use crate::evolve::invariants::{compute_invariants, Casimir, InvariantLedger};

/// Courant number bound of the nonlinear stepper.
pub const TORUS_CFL: f64 = 0.5;

/// Courant number used when a run picks its own step; the margin below
/// [`TORUS_CFL`] absorbs growth of `max|v|` during the run.
pub const DEFAULT_COURANT: f64 = 0.4;

/// Whether mode `i` survives the 2/3 rule.
fn retained(grid: &TorusGrid, i: usize) -> bool {
    let (mx, my) = grid.mode_numbers(i);
    3 * mx.unsigned_abs() < grid.nx as u64 && 3 * my.unsigned_abs() < grid.ny as u64
}

/// The state with the modes removed by the 2/3 rule set to zero.
pub fn dealias(state: &TorusState) -> TorusState {
    let g = state.grid;
    let omega_hat = (0..g.len()).map(|i| if retained(&g, i) { state.omega_hat[i] } else { Complex64::default() }).collect();
    TorusState { grid: g, alpha: state.alpha, omega_hat }
}

/// `0.5 min(dx, dy) / max|v|`, infinite for a state at rest.
pub fn torus_cfl_limit(state: &TorusState) -> f64 {
    let v = state.max_speed();
    let g = state.grid();
    if v == 0.0 {
        f64::INFINITY
    } else {
        TORUS_CFL * g.dx().min(g.dy()) / v
    }
}

/// Pseudo-spectral RK4 integrator of `omega_t + v . grad omega = 0` with
/// owned FFT workspaces.
pub struct TorusStepper {
    grid: TorusGrid,
    alpha: f64,
    fft: Fft2,
    mask: Vec<bool>,
    /// `i kx`, `i ky`, zero on Nyquist modes
    ikx: Vec<Complex64>,
    iky: Vec<Complex64>,
    inv_symbol: Vec<f64>,
}

impl TorusStepper {
    pub fn new(grid: TorusGrid, alpha: f64) -> Self {
        let n = grid.len();
        let i = Complex64::i();
        let ikx = (0..n).map(|j| if j / grid.ny == grid.nx / 2 { Complex64::default() } else { i * grid.kx(j / grid.ny) }).collect();
        let iky = (0..n).map(|j| if j % grid.ny == grid.ny / 2 { Complex64::default() } else { i * grid.ky(j % grid.ny) }).collect();
        let inv_symbol = (0..n).map(|j| if j == 0 { 0.0 } else { 1.0 / grid.symbol(j, alpha) }).collect();
        Self { grid, alpha, fft: Fft2::new(grid), mask: (0..n).map(|j| retained(&grid, j)).collect(), ikx, iky, inv_symbol }
    }

    /// `-(v . grad omega)^`, dealiased; the mean mode is left at zero.
    fn rhs(&mut self, w: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.len();
        let phi: Vec<Complex64> = (0..n).map(|j| w[j] * self.inv_symbol[j]).collect();
        let v1: Vec<Complex64> = (0..n).map(|j| self.iky[j] * phi[j]).collect();
        let v2: Vec<Complex64> = (0..n).map(|j| -self.ikx[j] * phi[j]).collect();
        let wx: Vec<Complex64> = (0..n).map(|j| self.ikx[j] * w[j]).collect();
        let wy: Vec<Complex64> = (0..n).map(|j| self.iky[j] * w[j]).collect();
        let (v1, v2, wx, wy) = (self.fft.inverse(&v1), self.fft.inverse(&v2), self.fft.inverse(&wx), self.fft.inverse(&wy));
        let adv: Vec<f64> = (0..n).map(|j| v1[j] * wx[j] + v2[j] * wy[j]).collect();
        let mut out = self.fft.forward(&adv);
        for j in 0..n {
            out[j] = if self.mask[j] && j != 0 { -out[j] } else { Complex64::default() };
        }
        out
    }

    /// One RK4 step; `dt` must respect [`torus_cfl_limit`].
    pub fn step(&mut self, state: &TorusState, dt: f64) -> Result<TorusState> {
        if state.grid != self.grid || state.alpha != self.alpha {
            return Err(Error::InvalidArgument("state does not belong to this stepper".into()));
        }
        let limit = torus_cfl_limit(state);
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        let w = &state.omega_hat;
        let axpy = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x + y * s).collect() };
        let k1 = self.rhs(w);
        let k2 = self.rhs(&axpy(w, 0.5 * dt, &k1));
        let k3 = self.rhs(&axpy(w, 0.5 * dt, &k2));
        let k4 = self.rhs(&axpy(w, dt, &k3));
        let next: Vec<Complex64> = (0..w.len()).map(|i| w[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0)).collect();
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { t: f64::NAN });
        }
        Ok(TorusState { grid: self.grid, alpha: self.alpha, omega_hat: next })
    }
}

/// One RK4 step with a freshly planned workspace.
pub fn step_torus_nonlinear(state: &TorusState, dt: f64) -> Result<TorusState> {
    TorusStepper::new(state.grid, state.alpha).step(state, dt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TorusRunOptions {
    pub t_end: f64,
    /// Fixed step; `None` picks `courant * min(dx, dy) / max|v|` from the
    /// initial state, shortened to divide `t_end` evenly.
    pub dt: Option<f64>,
    pub courant: f64,
    /// Ledger rows are recorded every this many steps (and at the end).
    pub ledger_every: usize,
    pub casimir: Casimir,
}

impl Default for TorusRunOptions {
    fn default() -> Self {
        Self { t_end: 1.0, dt: None, courant: DEFAULT_COURANT, ledger_every: 1, casimir: Casimir::Sin }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusRun {
    pub state: TorusState,
    pub t: f64,
    pub dt: f64,
    pub steps: usize,
    pub ledger: Vec<InvariantLedger>,
    /// Set when the run stopped early; `state` and `ledger` hold the last
    /// valid data.
    pub failure: Option<Error>,
}

/// Evolves `initial` to `t_end`, recording invariants (and the stability
/// norm relative to `reference`, if given).
pub fn evolve_torus(initial: &TorusState, reference: Option<&TorusState>, opts: &TorusRunOptions) -> Result<TorusRun> {
    if !(opts.t_end >= 0.0) || !opts.t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("end time {} must be non-negative", opts.t_end)));
    }
    if !(opts.courant > 0.0 && opts.courant <= TORUS_CFL) {
        return Err(Error::InvalidArgument(format!("courant number {} must lie in (0, {TORUS_CFL}]", opts.courant)));
    }
    if initial.omega_hat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite { t: 0.0 });
    }
    let limit = torus_cfl_limit(initial);
    let target = opts.dt.unwrap_or(opts.courant / TORUS_CFL * limit);
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!("time step {target} must be positive")));
    }
    if target > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt: target, limit });
    }
    let steps = if opts.t_end == 0.0 {
        0
    } else if target.is_finite() {
        (opts.t_end / target).ceil().max(1.0) as usize
    } else {
        1
    };
    let dt = if steps == 0 { 0.0 } else { opts.t_end / steps as f64 };
    let every = opts.ledger_every.max(1);
    let mut stepper = TorusStepper::new(initial.grid, initial.alpha);
    let mut state = initial.clone();
    let mut ledger = vec![compute_invariants(&state, reference, &opts.casimir, 0.0)];
    let mut failure = None;
    let mut done = 0;
    for s in 1..=steps {
        let t = s as f64 * dt;
        match stepper.step(&state, dt) {
            Ok(next) => state = next,
            Err(Error::NonFinite { .. }) => {
                failure = Some(Error::NonFinite { t });
                break;
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        done = s;
        if s % every == 0 || s == steps {
            let row = compute_invariants(&state, reference, &opts.casimir, t);
            if !row.is_finite() {
                failure = Some(Error::NonFinite { t });
                break;
            }
            ledger.push(row);
        }
    }
    Ok(TorusRun { t: done as f64 * dt, state, dt, steps: done, ledger, failure })
}
