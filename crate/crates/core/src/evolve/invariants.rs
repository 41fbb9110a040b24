use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{Fft2, TorusGrid, TorusState};
use crate::error::{Error, Result};

/// Integrand `C` of a Casimir `int C(omega)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Casimir {
    /// `sum c_i omega^i`, degree at most 4.
    Polynomial { coefficients: Vec<f64> },
    Sin,
    /// Piecewise linear through `(omega_i, value_i)`, extended linearly.
    Tabulated { omega: Vec<f64>, values: Vec<f64> },
}

impl Casimir {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Polynomial { coefficients } if coefficients.len() > 5 => {
                Err(Error::InvalidArgument(format!("Casimir polynomial of degree {} exceeds 4", coefficients.len() - 1)))
            }
            Self::Tabulated { omega, values } => {
                if omega.len() != values.len() {
                    return Err(Error::LengthMismatch { expected: omega.len(), got: values.len() });
                }
                if omega.len() < 2 || omega.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidArgument("tabulated Casimir needs at least two increasing abscissae".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        match self {
            Self::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, &c| acc * w + c),
            Self::Sin => w.sin(),
            Self::Tabulated { omega, values } => {
                let j = omega.partition_point(|&x| x <= w).clamp(1, omega.len() - 1);
                let (x0, x1) = (omega[j - 1], omega[j]);
                values[j - 1] + (values[j] - values[j - 1]) * (w - x0) / (x1 - x0)
            }
        }
    }
}

/// Invariants of a torus state at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantLedger {
    pub t: f64,
    /// `1/2 int v . (1 - a^2 Lap) v`
    pub h: f64,
    /// `H + int C(omega)`
    pub hc: f64,
    pub omega_int: f64,
    /// `int omega^2`
    pub enstrophy: f64,
    /// `int C(omega)`
    pub casimir: f64,
    /// `int u_1`
    pub mx: f64,
    /// `||v - v0||^2 + a^2 ||grad(v - v0)||^2 + ||omega - omega0||^2`
    pub stability_norm: Option<f64>,
}

impl InvariantLedger {
    pub fn is_finite(&self) -> bool {
        [self.t, self.h, self.hc, self.omega_int, self.enstrophy, self.casimir, self.mx].iter().all(|x| x.is_finite())
            && self.stability_norm.is_none_or(f64::is_finite)
    }
}

/// Vorticity on the grid refined twice in each direction (Nyquist modes
/// dropped). Products of up to five dealiased fields are integrated exactly.
pub(crate) fn padded_vorticity(state: &TorusState) -> (TorusGrid, Vec<f64>) {
    let g = state.grid;
    let fine = TorusGrid { nx: 2 * g.nx, ny: 2 * g.ny, lx: g.lx, ly: g.ly };
    let mut hat = vec![Complex64::default(); fine.len()];
    let scale = (fine.len() / g.len()) as f64;
    for i in 0..g.len() {
        if g.is_nyquist(i) {
            continue;
        }
        let (mx, my) = g.mode_numbers(i);
        let ix = mx.rem_euclid(fine.nx as i64) as usize;
        let iy = my.rem_euclid(fine.ny as i64) as usize;
        hat[fine.index(ix, iy)] = state.omega_hat[i] * scale;
    }
    let values = Fft2::new(fine).inverse(&hat);
    (fine, values)
}

/// Quadratic norm of `state - reference`; `None` when they do not share grid and alpha.
pub fn stability_norm(state: &TorusState, reference: &TorusState) -> Option<f64> {
    let d = state.difference(reference).ok()?;
    let g = d.grid;
    let a2 = d.alpha * d.alpha;
    let phi = d.phi_hat();
    let total: f64 = (0..g.len())
        .map(|i| {
            let k2 = g.k2(i);
            (k2 + a2 * k2 * k2) * phi[i].norm_sqr() + d.omega_hat[i].norm_sqr()
        })
        .sum();
    Some(total * g.area() / (g.len() as f64).powi(2))
}

pub fn compute_invariants(state: &TorusState, reference: Option<&TorusState>, casimir: &Casimir, t: f64) -> InvariantLedger {
    let g = state.grid;
    let norm = g.area() / (g.len() as f64).powi(2);
    let phi = state.phi_hat();
    let mut h = 0.0;
    let mut enstrophy = 0.0;
    for i in 0..g.len() {
        h += g.symbol(i, state.alpha) * phi[i].norm_sqr();
        enstrophy += state.omega_hat[i].norm_sqr();
    }
    let h = 0.5 * h * norm;
    let enstrophy = enstrophy * norm;
    let omega_int = state.omega_hat[0].re * g.area() / g.len() as f64;
    let mx = state.unfiltered_velocity_hat()[0][0].re * g.area() / g.len() as f64;
    let (fine, w) = padded_vorticity(state);
    let cas = w.iter().map(|&x| casimir.eval(x)).sum::<f64>() * fine.area() / fine.len() as f64;
    InvariantLedger {
        t,
        h,
        hc: h + cas,
        omega_int,
        enstrophy,
        casimir: cas,
        mx,
        stability_norm: reference.and_then(|r| stability_norm(state, r)),
    }
}
