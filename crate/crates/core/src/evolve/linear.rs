use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{Grid1D, SteadyShearState};
use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::modal::{assemble_modal, ModalProblem};

/// Courant number of the RK4 contract for the linear stepper.
pub const LINEAR_CFL: f64 = 0.5;

/// One Fourier component `exp(ikx)` of a perturbation of a channel shear flow.
///
/// `q = psi'' - k^2 psi` lives on the interior collocation nodes; `phi` is
/// stored on the full grid with the wall zeros included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearChannelState {
    pub k: f64,
    pub q: Vec<Complex64>,
    pub phi: Vec<Complex64>,
    pub t: f64,
}

/// Linearized channel dynamics `q_t = -ik (V q - U'' phi)` at fixed `k`,
/// with `phi` recovered from `q` through the same discrete operator as the
/// modal solver.
#[derive(Debug, Clone)]
pub struct LinearChannel {
    problem: ModalProblem,
    v: Vec<f64>,
    d2u: Vec<f64>,
    vmax: f64,
}

fn real_matvec(m: &Mat<f64>, z: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).fold(Complex64::default(), |s, j| s + z[j] * m[(i, j)]))
        .collect()
}

fn dense_matvec(m: &Dense<f64>, z: &[Complex64]) -> Vec<Complex64> {
    (0..m.rows())
        .map(|i| m.row(i).iter().zip(z).fold(Complex64::default(), |s, (&a, &b)| s + b * a))
        .collect()
}

impl LinearChannel {
    /// `n` Chebyshev nodes across the channel, walls included.
    pub fn new(steady: &SteadyShearState<f64>, k: f64, n: usize) -> Result<Self> {
        let problem = assemble_modal(steady, k, n)?;
        let st = problem.state();
        let v = st.v().values()[1..n - 1].to_vec();
        let d2u = st.d2u().values()[1..n - 1].to_vec();
        let vmax = st.v().max_abs();
        Ok(Self { problem, v, d2u, vmax })
    }

    pub fn k(&self) -> f64 {
        self.problem.k()
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    pub fn grid(&self) -> &Grid1D<f64> {
        self.problem.state().grid()
    }

    /// The steady state on the collocation grid.
    pub fn steady(&self) -> &SteadyShearState<f64> {
        self.problem.state()
    }

    /// Largest admissible step, `0.5 / (k max|V|)`.
    pub fn cfl_limit(&self) -> f64 {
        if self.vmax == 0.0 {
            f64::INFINITY
        } else {
            LINEAR_CFL / (self.k() * self.vmax)
        }
    }

    fn full_phi(&self, q: &[Complex64]) -> Vec<Complex64> {
        let mut phi = vec![Complex64::default(); self.n()];
        phi[1..self.n() - 1].copy_from_slice(&real_matvec(&self.problem.g, q));
        phi
    }

    pub fn state_from_q(&self, q: Vec<Complex64>, t: f64) -> Result<LinearChannelState> {
        if q.len() != self.n() - 2 {
            return Err(Error::LengthMismatch { expected: self.n() - 2, got: q.len() });
        }
        let phi = self.full_phi(&q);
        Ok(LinearChannelState { k: self.k(), q, phi, t })
    }

    /// From `phi` on the full grid; the wall values are ignored.
    pub fn state_from_phi(&self, phi: &[Complex64], t: f64) -> Result<LinearChannelState> {
        if phi.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: phi.len() });
        }
        let q = real_matvec(&self.problem.b, &phi[1..self.n() - 1]);
        self.state_from_q(q, t)
    }

    fn rhs(&self, q: &[Complex64]) -> Vec<Complex64> {
        let phi = real_matvec(&self.problem.g, q);
        let factor = Complex64::new(0.0, -self.k());
        (0..q.len()).map(|i| factor * (q[i] * self.v[i] - phi[i] * self.d2u[i])).collect()
    }

    /// One classical RK4 step.
    pub fn step(&self, state: &LinearChannelState, dt: f64) -> Result<LinearChannelState> {
        if state.k != self.k() || state.q.len() != self.n() - 2 {
            return Err(Error::InvalidArgument("state does not belong to this stepper".into()));
        }
        let limit = self.cfl_limit();
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, limit });
        }
        let q = &state.q;
        let axpy = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x + y * s).collect() };
        let k1 = self.rhs(q);
        let k2 = self.rhs(&axpy(q, 0.5 * dt, &k1));
        let k3 = self.rhs(&axpy(q, 0.5 * dt, &k2));
        let k4 = self.rhs(&axpy(q, dt, &k3));
        let next: Vec<Complex64> = (0..q.len()).map(|i| q[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0)).collect();
        let t = state.t + dt;
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        self.state_from_q(next, t)
    }

    /// `(int |q|^2 dy)^(1/2)`.
    pub fn norm(&self, state: &LinearChannelState) -> f64 {
        let w = self.grid().quadrature_weights();
        state.q.iter().zip(&w[1..]).map(|(z, w)| w * z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Per-wavenumber stability norm `||v||^2 + a^2 ||grad v||^2 + ||omega||^2`
    /// of the perturbation, integrated over `y` (per unit length in `x`).
    pub fn stability_norm(&self, state: &LinearChannelState) -> f64 {
        let g = self.grid();
        let (k2, a2) = (self.k() * self.k(), self.steady().alpha().powi(2));
        let d1 = dense_matvec(&g.diff_matrix(1), &state.phi);
        let d2 = dense_matvec(&g.diff_matrix(2), &state.phi);
        let w = g.quadrature_weights();
        let mut total = 0.0;
        for i in 0..g.n() {
            let (p, p1, p2) = (state.phi[i].norm_sqr(), d1[i].norm_sqr(), d2[i].norm_sqr());
            total += w[i] * (p1 + k2 * p + a2 * (p2 + 2.0 * k2 * p1 + k2 * k2 * p));
        }
        // omega = -q at interior nodes
        total + state.q.iter().zip(&w[1..]).map(|(z, w)| w * z.norm_sqr()).sum::<f64>()
    }

    /// Steps from `state` to `t_end` with steps no longer than `dt`, sampling
    /// `(t, norm)` after every step.
    pub fn run(&self, state: &LinearChannelState, dt: f64, t_end: f64) -> Result<(LinearChannelState, Vec<(f64, f64)>)> {
        let span = t_end - state.t;
        if !(span >= 0.0) {
            return Err(Error::InvalidArgument(format!("end time {t_end} precedes the state time {}", state.t)));
        }
        let steps = (span / dt).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let mut s = state.clone();
        let mut history = vec![(s.t, self.norm(&s))];
        for _ in 0..steps {
            s = self.step(&s, h)?;
            history.push((s.t, self.norm(&s)));
        }
        Ok((s, history))
    }
}

/// Advances one step, assembling the operator on the state's grid.
pub fn step_linear_channel(state: &LinearChannelState, steady: &SteadyShearState<f64>, dt: f64) -> Result<LinearChannelState> {
    LinearChannel::new(steady, state.k, state.phi.len())?.step(state, dt)
}

/// Exponential rate fitted to `log ||q||` over the final half of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthMeasurement {
    pub k: f64,
    pub rate: f64,
    pub dt: f64,
    pub horizon: f64,
    pub history: Vec<(f64, f64)>,
}

/// Least-squares slope of `log ||q||` against `t` over the last 50% of
/// `[0, horizon]`.
pub fn measure_growth_rate(channel: &LinearChannel, initial: &LinearChannelState, dt: f64, horizon: f64) -> Result<GrowthMeasurement> {
    let (_, history) = channel.run(initial, dt, initial.t + horizon)?;
    let start = initial.t + 0.5 * horizon;
    let pts: Vec<(f64, f64)> = history.iter().filter(|(t, n)| *t >= start && *n > 0.0).map(|&(t, n)| (t, n.ln())).collect();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument("too few nonzero samples to fit a growth rate".into()));
    }
    let m = pts.len() as f64;
    let (st, sl) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + t, b + l));
    let (tm, lm) = (st / m, sl / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + (t - tm) * (l - lm), b + (t - tm).powi(2)));
    Ok(GrowthMeasurement { k: channel.k(), rate: num / den, dt, horizon, history })
}
