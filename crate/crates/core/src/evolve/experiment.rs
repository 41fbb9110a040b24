use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arnold::{arnold_first_verdict, arnold_second_verdict, ArnoldVerdict, DomainSpec, ShiftScan, SteadyStateRef};
use crate::domain::TorusState;
use crate::error::{Error, Result};
use crate::evolve::invariants::{stability_norm, Casimir, InvariantLedger};
use crate::evolve::linear::LinearChannel;
use crate::evolve::torus::{dealias, evolve_torus, TorusRunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentLabel {
    /// An Arnold theorem applies; the ratio is expected to stay bounded.
    Verified,
    /// No theorem applies; the ratio is reported without a verdict.
    Exploratory,
    /// Zero perturbation; the ratio is identically one.
    NoPerturbation,
}

/// Evolution of `R(t) = N(t) / N(0)`, `N` the stability norm of the
/// perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityNormReport {
    pub label: ExperimentLabel,
    /// Best Arnold verdict for the steady state, if one could be formed.
    pub verdict: Option<ArnoldVerdict>,
    pub epsilon: f64,
    pub initial_norm: f64,
    pub times: Vec<f64>,
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
    pub bound: Option<f64>,
    /// `sup R <= bound`; only set for verified experiments with a bound.
    pub within_bound: Option<bool>,
    pub failure: Option<Error>,
    /// Invariants along the nonlinear run (empty for the linear experiment).
    pub ledger: Vec<InvariantLedger>,
}

fn best_verdict(state: SteadyStateRef<'_>, spec: &DomainSpec) -> Option<ArnoldVerdict> {
    let first = arnold_first_verdict(state, ShiftScan::Default).ok().map(|r| r.verdict);
    let second = arnold_second_verdict(state, spec).ok().map(|r| r.verdict);
    match (first, second) {
        (Some(ArnoldVerdict::Stable), _) | (_, Some(ArnoldVerdict::Stable)) => Some(ArnoldVerdict::Stable),
        (a, b) => a.or(b),
    }
}

fn finish(
    verdict: Option<ArnoldVerdict>,
    epsilon: f64,
    initial_norm: f64,
    times: Vec<f64>,
    ratios: Vec<f64>,
    bound: Option<f64>,
    failure: Option<Error>,
) -> StabilityNormReport {
    let label = if initial_norm == 0.0 {
        ExperimentLabel::NoPerturbation
    } else if verdict == Some(ArnoldVerdict::Stable) {
        ExperimentLabel::Verified
    } else {
        ExperimentLabel::Exploratory
    };
    let sup_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let within_bound = if label == ExperimentLabel::Verified { bound.map(|b| sup_ratio <= b) } else { None };
    StabilityNormReport { label, verdict, epsilon, initial_norm, times, ratios, sup_ratio, bound, within_bound, failure, ledger: Vec::new() }
}

/// Perturbs a torus steady state by a random smooth field of relative size
/// `epsilon` (in the square root of the stability norm) and evolves it to
/// `horizon` with the nonlinear stepper.
pub fn stability_norm_experiment(
    steady: &TorusState,
    epsilon: f64,
    horizon: f64,
    seed: u64,
    bound: Option<f64>,
) -> Result<StabilityNormReport> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation scale {epsilon} must be non-negative")));
    }
    let g = *steady.grid();
    let spec = DomainSpec::Torus { lx: g.lx, ly: g.ly };
    let verdict = best_verdict(SteadyStateRef::Torus(steady), &spec);
    let zero = TorusState::zero(g, steady.alpha());
    let base = stability_norm(steady, &zero).unwrap_or(0.0);
    if epsilon == 0.0 || base == 0.0 {
        return Ok(finish(verdict, epsilon, 0.0, vec![0.0], vec![1.0], bound, None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmax = 4.min(g.nx.min(g.ny) / 3 - 1).max(1);
    let raw = TorusState::random(g, steady.alpha(), kmax, &mut rng)?;
    let raw_norm = stability_norm(&raw, &zero).unwrap_or(0.0);
    let delta = raw.scaled(epsilon * (base / raw_norm).sqrt());
    let initial = dealias(&steady.sum(&delta)?);
    let opts = TorusRunOptions { t_end: horizon, casimir: Casimir::Sin, ..TorusRunOptions::default() };
    let run = evolve_torus(&initial, Some(steady), &opts)?;
    let n0 = run.ledger[0].stability_norm.unwrap_or(0.0);
    let (times, ratios) = run.ledger.iter().map(|r| (r.t, r.stability_norm.unwrap_or(f64::NAN) / n0)).unzip();
    let mut report = finish(verdict, epsilon, n0, times, ratios, bound, run.failure);
    report.ledger = run.ledger;
    Ok(report)
}

/// Linearized analogue on a channel: a random perturbation of one wavenumber
/// evolved with the linear stepper, `N` the per-wavenumber stability norm.
/// `epsilon` only distinguishes the zero perturbation; the dynamics are linear.
pub fn linear_stability_norm_experiment(
    channel: &LinearChannel,
    spec: &DomainSpec,
    epsilon: f64,
    horizon: f64,
    seed: u64,
    bound: Option<f64>,
) -> Result<StabilityNormReport> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("perturbation scale {epsilon} must be non-negative")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be positive")));
    }
    let verdict = best_verdict(SteadyStateRef::Shear(channel.steady()), spec);
    if epsilon == 0.0 {
        return Ok(finish(verdict, epsilon, 0.0, vec![0.0], vec![1.0], bound, None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = channel.grid().nodes().to_vec();
    let (a, w) = (channel.grid().a(), channel.grid().width());
    // smooth wall-compatible phi: a few sine modes with random coefficients
    let coeffs: Vec<Complex64> = (1..=4).map(|j| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / (j * j) as f64).collect();
    let phi: Vec<Complex64> = y
        .iter()
        .map(|&yy| {
            let s = std::f64::consts::PI * (yy - a) / w;
            coeffs.iter().enumerate().map(|(j, c)| c * ((j + 1) as f64 * s).sin()).sum::<Complex64>() * epsilon
        })
        .collect();
    let mut state = channel.state_from_phi(&phi, 0.0)?;
    let n0 = channel.stability_norm(&state);
    let dt = channel.cfl_limit().min(horizon);
    let steps = (horizon / dt).ceil().max(1.0) as usize;
    let h = horizon / steps as f64;
    let mut times = vec![0.0];
    let mut ratios = vec![1.0];
    let mut failure = None;
    for _ in 0..steps {
        match channel.step(&state, h) {
            Ok(next) => state = next,
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        times.push(state.t);
        ratios.push(channel.stability_norm(&state) / n0);
    }
    Ok(finish(verdict, epsilon, n0, times, ratios, bound, failure))
}
