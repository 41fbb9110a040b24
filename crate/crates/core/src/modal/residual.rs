use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{Grid1D, SteadyShearState};
use crate::linalg::Dense;
use crate::modal::solve::ModalSolution;
use crate::error::Result;

/// Pointwise check of an eigenpair against the continuous equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Relative sup-norm residual on the fine grid.
    pub residual: f64,
    /// Largest of `|phi|`, `|phi''|` at the walls.
    pub boundary_violation: f64,
    /// `c` is real and lies in the range of `V`: the equation is singular
    /// where `V = c`, and those points were excluded.
    pub near_critical_layer: bool,
}

const EXCLUSION: f64 = 1e-6;

/// Evaluates the residual of eigenpairs computed on one coarse grid.
///
/// The operator is applied in its factored form: with
/// `psi = (1 + a^2 k^2) phi - a^2 phi''` the equation reads
/// `psi'' - k^2 psi = U'' phi / (V - c)`. Both that equation and the
/// definition of `psi` are checked on a Chebyshev grid four times finer.
pub(crate) struct ResidualEvaluator {
    d2: Dense<f64>,
    interp: Dense<f64>,
    v: Vec<f64>,
    d2u: Vec<f64>,
    v_range: (f64, f64),
    alpha: f64,
}

impl ResidualEvaluator {
    pub fn new(state: &SteadyShearState<f64>, grid: &Grid1D<f64>) -> Result<Self> {
        let fine = Grid1D::chebyshev(grid.a(), grid.b(), 4 * grid.n())?;
        let interp = grid.interpolation_matrix(fine.nodes());
        let v: Vec<f64> = fine.nodes().iter().map(|&y| state.v().eval(y)).collect();
        let d2u = fine.nodes().iter().map(|&y| state.d2u().eval(y)).collect();
        let lo = state.v().values().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = state.v().values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { d2: grid.diff_matrix(2), interp, v, d2u, v_range: (lo, hi), alpha: state.alpha() })
    }

    fn apply(m: &Dense<f64>, x: &[Complex64]) -> Vec<Complex64> {
        let re: Vec<f64> = x.iter().map(|z| z.re).collect();
        let im: Vec<f64> = x.iter().map(|z| z.im).collect();
        m.matvec(&re).into_iter().zip(m.matvec(&im)).map(|(r, i)| Complex64::new(r, i)).collect()
    }

    pub fn evaluate(&self, phi: &[Complex64], psi: &[Complex64], c: Complex64, k: f64) -> ResidualReport {
        let n = phi.len();
        let a2 = self.alpha * self.alpha;
        let k2 = k * k;
        let phi_pp = Self::apply(&self.d2, phi);
        let psi_pp = Self::apply(&self.d2, psi);
        let lhs: Vec<Complex64> = psi_pp.iter().zip(psi).map(|(&p2, &p)| p2 - k2 * p).collect();
        let lhs_f = Self::apply(&self.interp, &lhs);
        let phi_f = Self::apply(&self.interp, phi);
        let psi_f = Self::apply(&self.interp, psi);
        let phi_pp_f = Self::apply(&self.interp, &phi_pp);

        let (mut r1, mut s1, mut r2, mut s2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut min_gap = f64::INFINITY;
        for i in 0..lhs_f.len() {
            let gap = Complex64::new(self.v[i], 0.0) - c;
            min_gap = min_gap.min(gap.norm());
            if gap.norm() >= EXCLUSION {
                let forcing = self.d2u[i] * phi_f[i] / gap;
                r1 = r1.max((lhs_f[i] - forcing).norm());
                s1 = s1.max(lhs_f[i].norm()).max(forcing.norm());
            }
            let def = psi_f[i] - (1.0 + a2 * k2) * phi_f[i] + a2 * phi_pp_f[i];
            r2 = r2.max(def.norm());
            s2 = s2.max(psi_f[i].norm()).max((1.0 + a2 * k2) * phi_f[i].norm()).max(a2 * phi_pp_f[i].norm());
        }
        let rel = |r: f64, s: f64| if s > 0.0 { r / s } else { 0.0 };
        let boundary_violation = [phi[0].norm(), phi[n - 1].norm(), phi_pp[0].norm(), phi_pp[n - 1].norm()]
            .into_iter()
            .fold(0.0, f64::max);
        let (lo, hi) = self.v_range;
        let near_critical_layer = min_gap < 1e-12 || (c.im.abs() < 1e-12 && c.re >= lo && c.re <= hi);
        ResidualReport { residual: rel(r1, s1).max(rel(r2, s2)), boundary_violation, near_critical_layer }
    }
}

/// Residual of a computed eigenpair against the continuous equation, on a grid
/// four times finer than the one the pair was computed on.
pub fn modal_residual(state: &SteadyShearState<f64>, solution: &ModalSolution, k: f64) -> Result<ResidualReport> {
    let eval = ResidualEvaluator::new(state, solution.phi.grid())?;
    Ok(eval.evaluate(solution.phi.values(), solution.psi.values(), solution.c, k))
}
