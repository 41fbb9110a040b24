//! Stability analysis of parallel and doubly periodic steady states of the
//! two-dimensional alpha-Euler equations.
//!
//! Grids, profiles, shear steady states and the criteria are generic over
//! [`Real`] (`f32` or `f64`); eigenvalue problems, the energy-Casimir
//! verdicts, time stepping and the torus are `f64`.

pub mod arnold;
pub mod criteria;
pub mod domain;
pub mod error;
pub mod evolve;
pub mod io;
pub mod linalg;
pub mod modal;
mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = domain::Grid1D<f64>;
pub type Profile = domain::Profile1D<f64>;
pub type Descriptor = domain::Descriptor<f64>;
pub type ShearState = domain::SteadyShearState<f64>;
pub type ShearSource = domain::ShearSource<f64>;
pub type CriterionReport = criteria::CriterionReport<f64>;
