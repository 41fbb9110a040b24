//! Grids, profiles, the Helmholtz filter and steady-state construction.

mod grid;
mod helmholtz;
mod profile;
mod shear;
mod torus;

pub use grid::{Grid1D, GridKind, MIN_NODES};
pub use helmholtz::{helmholtz_filter, invert_helmholtz, invert_helmholtz_discrete};
pub use profile::{Descriptor, Profile1D};
pub use shear::{build_steady_shear, ShearSource, SteadyShearState};
pub use torus::{torus_state_from_streamfunction, TorusGrid, TorusState};
pub(crate) use torus::Fft2;

use crate::scalar::Real;

/// Running integral of nodal data from the left endpoint.
pub(crate) fn cumulative_integral<T: Real>(grid: &Grid1D<T>, f: &[T]) -> Vec<T> {
    let n = grid.n();
    match grid.kind() {
        GridKind::ChebyshevExtrema => {
            let mut d = grid.diff_matrix(1);
            let mut rhs = f.to_vec();
            d.row_mut(0).iter_mut().for_each(|v| *v = T::zero());
            d[(0, 0)] = T::one();
            rhs[0] = T::zero();
            d.solve(&rhs).expect("first-derivative matrix with a pinned value is invertible")
        }
        GridKind::Uniform => {
            // trapezoid with the endpoint derivative correction (fourth order)
            let df = grid.diff_matrix(1).matvec(f);
            let x = grid.nodes();
            let mut out = vec![T::zero(); n];
            let twelfth = T::lit(1.0 / 12.0);
            for i in 1..n {
                let h = x[i] - x[i - 1];
                let step = h * T::lit(0.5) * (f[i] + f[i - 1]) - h * h * twelfth * (df[i] - df[i - 1]);
                out[i] = out[i - 1] + step;
            }
            out
        }
    }
}
