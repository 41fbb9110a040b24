//! Energy-Casimir (Arnold) stability verdicts.
//!
//! Along a steady state with `phi0 = F(omega0)` the first theorem needs
//! `0 < K1 <= -F' <= K2 < inf`, the second `1 / lambda_min < inf F'`, with
//! `lambda_min` the smallest eigenvalue of `-Lap (1 - a^2 Lap)` on admissible
//! stream functions.

mod fprime;
mod lambda;
mod regularization;
mod verdict;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fprime::{reconstruct_f_prime, FPrimeProfile, FPrimeSample, SteadyStateRef, TORUS_BINS};
pub use lambda::{lambda_min_alpha, ritz_norms, LambdaMin, DEFAULT_LAMBDA_NODES};
pub use regularization::build_regularization_example;
pub use verdict::{arnold_first_verdict, arnold_second_verdict, ArnoldReport, ArnoldVerdict, ShiftScan, Theorem};

/// Domain on which perturbation stream functions live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainSpec {
    /// Doubly periodic box; stream functions have zero mean.
    Torus { lx: f64, ly: f64 },
    /// `x` periodic with period `lx`, `-1 <= y <= 1`, `phi = phi_yy = 0` at the walls.
    PeriodicChannel { lx: f64 },
    /// `x` periodic with period `lx`, `a1 <= y <= a2`, same wall conditions.
    ChannelInterval { a1: f64, a2: f64, lx: f64 },
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match *self {
            Self::Torus { lx, ly } => ok(lx) && ok(ly),
            Self::PeriodicChannel { lx } => ok(lx),
            Self::ChannelInterval { a1, a2, lx } => ok(lx) && a1 < a2 && a1.is_finite() && a2.is_finite(),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::InvalidDomain(format!("{self:?}")))
        }
    }

    /// Wall positions of channel domains.
    pub fn walls(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Torus { .. } => None,
            Self::PeriodicChannel { .. } => Some((-1.0, 1.0)),
            Self::ChannelInterval { a1, a2, .. } => Some((a1, a2)),
        }
    }
}
