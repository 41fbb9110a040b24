use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::domain::{Grid1D, GridKind, SteadyShearState};
use crate::error::{Error, Result};

pub const MIN_MODAL_NODES: usize = 32;

/// Discretized generalized eigenproblem `A phi = c B phi` on the interior
/// Chebyshev nodes, walls eliminated.
///
/// `B` is the discrete `L` and `A = diag(V) B - diag(U'')`. The solver works
/// with the equivalent standard problem for `q = B phi`, whose matrix
/// `diag(V) - diag(U'') B^-1` is formed from the two factor inverses.
#[derive(Debug, Clone)]
pub struct ModalProblem {
    pub(crate) state: SteadyShearState<f64>,
    pub(crate) k: f64,
    pub(crate) a: Mat<f64>,
    pub(crate) b: Mat<f64>,
    /// `B^-1`
    pub(crate) g: Mat<f64>,
    /// `(D2 - k^2)^-1` on the interior
    pub(crate) p_inv: Mat<f64>,
}

/// The state on a Chebyshev grid of `n` nodes (unchanged if it already is one).
pub(crate) fn chebyshev_state(state: &SteadyShearState<f64>, n: usize) -> Result<SteadyShearState<f64>> {
    let grid = state.grid();
    if grid.kind() == GridKind::ChebyshevExtrema && grid.n() == n {
        return Ok(state.clone());
    }
    state.on_grid(&Grid1D::chebyshev(grid.a(), grid.b(), n)?)
}

pub fn assemble_modal(state: &SteadyShearState<f64>, k: f64, n: usize) -> Result<ModalProblem> {
    if n < MIN_MODAL_NODES {
        return Err(Error::GridTooCoarse { n, min: MIN_MODAL_NODES });
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidWavenumber(k));
    }
    let state = chebyshev_state(state, n)?;
    let m = n - 2;
    let d2 = state.grid().diff_matrix(2);
    let a2 = state.alpha() * state.alpha();
    let k2 = k * k;
    let p = Mat::from_fn(m, m, |i, j| d2[(i + 1, j + 1)] - if i == j { k2 } else { 0.0 });
    let h = Mat::from_fn(m, m, |i, j| -a2 * d2[(i + 1, j + 1)] + if i == j { 1.0 + a2 * k2 } else { 0.0 });
    let b = &p * &h;
    let v = &state.v().values()[1..n - 1];
    let d2u = &state.d2u().values()[1..n - 1];
    let a = Mat::from_fn(m, m, |i, j| v[i] * b[(i, j)] - if i == j { d2u[i] } else { 0.0 });
    let p_inv = p.partial_piv_lu().inverse();
    let g = h.partial_piv_lu().solve(&p_inv);
    if g.col_iter().flat_map(|c| c.iter().copied().collect::<Vec<_>>()).any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem("alpha-Rayleigh operator".into()));
    }
    Ok(ModalProblem { state, k, a, b, g, p_inv })
}

use faer::linalg::solvers::Solve;

impl ModalProblem {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.state.grid().n()
    }

    /// The state resampled on the collocation grid.
    pub fn state(&self) -> &SteadyShearState<f64> {
        &self.state
    }

    pub fn a(&self) -> &Mat<f64> {
        &self.a
    }

    pub fn b(&self) -> &Mat<f64> {
        &self.b
    }

    /// Standard-form matrix `diag(V) - diag(U'') B^-1`; its eigenvalues are the `c`.
    pub fn standard_matrix(&self) -> Mat<f64> {
        let n = self.n();
        let v = &self.state.v().values()[1..n - 1];
        let d2u = &self.state.d2u().values()[1..n - 1];
        let m = n - 2;
        Mat::from_fn(m, m, |i, j| if i == j { v[i] } else { 0.0 } - d2u[i] * self.g[(i, j)])
    }
}
