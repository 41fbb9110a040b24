use serde::{Deserialize, Serialize};

use crate::arnold::fprime::{reconstruct_f_prime, shear_f_prime, FPrimeProfile, SteadyStateRef};
use crate::arnold::lambda::{lambda_min_alpha, DEFAULT_LAMBDA_NODES};
use crate::arnold::DomainSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArnoldVerdict {
    Stable,
    Inconclusive,
    /// No functional relation `phi0 = F(omega0)` exists.
    AssumptionViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArnoldReport {
    pub theorem: Theorem,
    pub verdict: ArnoldVerdict,
    /// First theorem: bounds of `-F'`. Second theorem: bounds of `F'`.
    pub k1: f64,
    pub k2: f64,
    pub lambda_min: Option<f64>,
    /// `K1` for the first theorem, `inf F' - 1/lambda_min` for the second.
    pub margin: f64,
    /// Constant added to `V` (first theorem on shear flows).
    pub shift_used: f64,
    pub singular_locus: Vec<f64>,
    pub detail: String,
}

impl ArnoldReport {
    /// Report for a state without the functional relation.
    pub fn assumption_violated(theorem: Theorem, err: &Error) -> Self {
        Self {
            theorem,
            verdict: ArnoldVerdict::AssumptionViolated,
            k1: f64::NAN,
            k2: f64::NAN,
            lambda_min: None,
            margin: f64::NAN,
            shift_used: 0.0,
            singular_locus: Vec::new(),
            detail: err.to_string(),
        }
    }
}

/// Strict inequalities must hold by more than this.
const STRICT_MARGIN: f64 = 1e-12;

/// Galilean shifts tried by the first theorem on shear flows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftScan {
    /// Only the frame the state is given in.
    Off,
    /// 401 shifts spanning three times the range of `V`, centred so that
    /// `V + c` sweeps through zero.
    Default,
    /// 401 shifts on `[lo, hi]`.
    Range { lo: f64, hi: f64 },
}

fn linspace(lo: f64, hi: f64, m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
}

fn first_from_profile(f: &FPrimeProfile, shift: f64) -> ArnoldReport {
    let (k1, k2) = f.neg_bounds();
    let stable = !f.singular && k1 > STRICT_MARGIN && k2.is_finite();
    let detail = if f.singular {
        format!("F' unbounded: U'' vanishes where V + c does not ({} point(s))", f.singular_locus.len())
    } else if stable {
        format!("{k1:e} <= -F' <= {k2:e}")
    } else {
        format!("inf(-F') = {k1:e} is not positive")
    };
    ArnoldReport {
        theorem: Theorem::First,
        verdict: if stable { ArnoldVerdict::Stable } else { ArnoldVerdict::Inconclusive },
        k1,
        k2,
        lambda_min: None,
        margin: k1,
        shift_used: shift,
        singular_locus: f.singular_locus.clone(),
        detail,
    }
}

/// First theorem: `0 < inf(-F') <= sup(-F') < inf`.
///
/// On shear flows the frame may be changed (`V -> V + c`); the shift scan
/// picks the `c` maximizing `inf(-F')` among shifts leaving `F'` bounded.
/// `c = 0` and the shifts that make zeros of `U''` removable are always
/// candidates. Torus states are analysed as given.
pub fn arnold_first_verdict(state: SteadyStateRef<'_>, shift_scan: ShiftScan) -> Result<ArnoldReport> {
    let SteadyStateRef::Shear(shear) = state else {
        let f = reconstruct_f_prime(state)?;
        return Ok(first_from_profile(&f, 0.0));
    };
    let base = shear_f_prime(shear, 0.0)?;
    let v = shear.v().values();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut candidates = vec![0.0];
    match shift_scan {
        ShiftScan::Off => {}
        ShiftScan::Default => {
            let range = (hi - lo).max(1e-12 * hi.abs().max(1.0));
            let centre = -0.5 * (hi + lo);
            candidates.extend(linspace(centre - 1.5 * range, centre + 1.5 * range, 401));
        }
        ShiftScan::Range { lo, hi } => candidates.extend(linspace(lo, hi, 401)),
    }
    if shift_scan != ShiftScan::Off {
        candidates.extend(base.removable.iter().chain(&base.singular_locus).map(|&y| -shear.v().eval(y)));
    }
    let mut best: Option<ArnoldReport> = None;
    for c in candidates {
        let report = first_from_profile(&shear_f_prime(shear, c)?, c);
        let better = match &best {
            None => true,
            Some(b) => match (report.singular_locus.is_empty(), b.singular_locus.is_empty()) {
                (true, false) => true,
                (false, true) => false,
                _ => report.k1 > b.k1,
            },
        };
        if better {
            best = Some(report);
        }
    }
    Ok(best.expect("at least the unshifted frame"))
}

/// Second theorem: `1 / lambda_min < inf F'` strictly, `lambda_min` on `spec`.
pub fn arnold_second_verdict(state: SteadyStateRef<'_>, spec: &DomainSpec) -> Result<ArnoldReport> {
    let (alpha, consistent) = match state {
        SteadyStateRef::Shear(s) => {
            let walls = spec.walls();
            let g = s.grid();
            let ok = walls.is_some_and(|(a, b)| (a - g.a()).abs() <= 1e-12 * (1.0 + a.abs()) && (b - g.b()).abs() <= 1e-12 * (1.0 + b.abs()));
            (s.alpha(), ok)
        }
        SteadyStateRef::Torus(t) => {
            let g = t.grid();
            let ok = matches!(*spec, DomainSpec::Torus { lx, ly } if lx == g.lx && ly == g.ly);
            (t.alpha(), ok)
        }
    };
    if !consistent {
        return Err(Error::InvalidDomain(format!("{spec:?} does not match the steady state's domain")));
    }
    let f = reconstruct_f_prime(state)?;
    let lam = lambda_min_alpha(spec, alpha, DEFAULT_LAMBDA_NODES)?;
    let margin = f.inf - 1.0 / lam.lambda_min;
    let stable = !f.singular && f.inf > 0.0 && margin > STRICT_MARGIN;
    let detail = if f.singular {
        "F' unbounded".to_string()
    } else if f.inf <= 0.0 {
        format!("F' is not positive (inf F' = {:e})", f.inf)
    } else if stable {
        format!("1/lambda_min = {:e} < inf F' = {:e}", 1.0 / lam.lambda_min, f.inf)
    } else {
        format!("1/lambda_min = {:e} >= inf F' = {:e}", 1.0 / lam.lambda_min, f.inf)
    };
    Ok(ArnoldReport {
        theorem: Theorem::Second,
        verdict: if stable { ArnoldVerdict::Stable } else { ArnoldVerdict::Inconclusive },
        k1: f.inf,
        k2: f.sup,
        lambda_min: Some(lam.lambda_min),
        margin,
        shift_used: 0.0,
        singular_locus: f.singular_locus,
        detail,
    })
}
