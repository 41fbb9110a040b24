//! Normal modes of the alpha-Rayleigh equation
//!
//! ```text
//! -a^2 phi'''' + (1 + 2 a^2 k^2) phi'' - k^2 (1 + a^2 k^2) phi - U'' phi / (V - c) = 0,
//! phi = phi'' = 0 at both walls,
//! ```
//!
//! for a perturbation stream function `phi(y) exp(ik(x - ct))`.
//!
//! The operator on the left factors as `L = (D^2 - k^2)((1 + a^2 k^2) - a^2 D^2)`,
//! and the wall conditions split accordingly into `phi = 0` and
//! `psi = (1 + a^2 k^2) phi - a^2 phi'' = 0`. The discretization uses this
//! factorization: two Dirichlet second-order Chebyshev operators instead of a
//! fourth-derivative matrix.

mod problem;
mod residual;
mod scan;
mod solve;

pub use problem::{assemble_modal, ModalProblem, MIN_MODAL_NODES};
pub use residual::{modal_residual, ResidualReport};
pub use scan::{logspace, scan_wavenumbers, scan_wavenumbers_with, GrowthCurve, GrowthPoint, SpectralVerdict, TOL_GROWTH};
pub use solve::{solve_modal, solve_modal_with, ComplexProfile, DiscardCounts, FilterOptions, ModalSolution, ModalSpectrum};
