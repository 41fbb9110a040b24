//! Rayleigh and Fjortoft necessary conditions for linear instability of a
//! parallel steady state, in their alpha-model form.
//!
//! A verdict of [`Verdict::StableByCriterion`] means no growing normal mode can
//! exist. [`Verdict::InstabilityNotRuledOut`] makes no claim either way.

use serde::{Deserialize, Serialize};

use crate::domain::SteadyShearState;
use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Rayleigh,
    Fjortoft,
    FjortoftGeneralized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StableByCriterion,
    InstabilityNotRuledOut,
    /// `U''` vanishes identically (Couette-type flows). No nontrivial normal
    /// mode exists, but not because `U''` is free of zeros.
    DegenerateStable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness<T> {
    pub y: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport<T> {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness<T>>,
    /// Zeros of `U''` across which it changes sign.
    pub inflection_points: Vec<T>,
    /// Zeros of `U''` without a sign change; reported, never scanned.
    pub tangential_points: Vec<T>,
    /// Certifying (or best) shift of the generalized Fjortoft scan.
    pub best_z: Option<T>,
    pub detail: String,
}

fn zero_tol<T: Real>(d2u: &[T]) -> T {
    T::lit(1e-9) * T::one().max(max_abs(d2u))
}

fn product_tol<T: Real>(state: &SteadyShearState<T>) -> T {
    let s = T::one().max(state.d2u().max_abs()).max(state.v().max_abs());
    T::lit(1e-10) * s * s
}

fn argmin<T: Real>(values: &[T]) -> usize {
    (0..values.len()).fold(0, |best, i| if values[i] < values[best] { i } else { best })
}

/// Bisection for a sign change of `f` inside `[lo, hi]`.
fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let mut flo = f(lo);
    if flo == T::zero() {
        return lo;
    }
    if f(hi) == T::zero() {
        return hi;
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

struct Zeros<T> {
    crossings: Vec<T>,
    tangential: Vec<T>,
}

fn classify_zeros<T: Real>(state: &SteadyShearState<T>) -> Zeros<T> {
    let y = state.grid().nodes();
    let d2u = state.d2u().values();
    let tol = zero_tol(d2u);
    let sign = |v: T| if v > tol { 1 } else if v < -tol { -1 } else { 0 };
    let mut crossings = Vec::new();
    let mut tangential = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    let mut i = 0;
    while i < y.len() {
        if sign(d2u[i]) == 0 {
            // run of samples below tolerance
            let start = i;
            while i < y.len() && sign(d2u[i]) == 0 {
                i += 1;
            }
            let next = (i < y.len()).then_some(i);
            let crosses = matches!((last_nonzero, next), (Some(p), Some(q)) if sign(d2u[p]) != sign(d2u[q]));
            if !crosses {
                let k = (start..i).min_by(|&a, &b| d2u[a].abs().partial_cmp(&d2u[b].abs()).unwrap()).unwrap();
                tangential.push(y[k]);
            }
            continue;
        }
        if let Some(p) = last_nonzero {
            if sign(d2u[p]) != sign(d2u[i]) {
                crossings.push(bisect(|t| state.d2u().eval(t), y[p], y[i]));
            }
        }
        last_nonzero = Some(i);
        i += 1;
    }
    Zeros { crossings, tangential }
}

/// Rayleigh's condition: a growing mode needs `U''` to vanish somewhere.
pub fn rayleigh_check<T: Real>(state: &SteadyShearState<T>) -> CriterionReport<T> {
    let y = state.grid().nodes();
    let d2u = state.d2u().values();
    let tol = zero_tol(d2u);
    let mut report = CriterionReport {
        criterion: Criterion::Rayleigh,
        verdict: Verdict::InstabilityNotRuledOut,
        witnesses: Vec::new(),
        inflection_points: Vec::new(),
        tangential_points: Vec::new(),
        best_z: None,
        detail: String::new(),
    };
    if d2u.iter().all(|v| v.abs() <= tol) {
        let k = (0..d2u.len()).fold(0, |b, i| if d2u[i].abs() > d2u[b].abs() { i } else { b });
        report.verdict = Verdict::DegenerateStable;
        report.witnesses.push(Witness { y: y[k], value: d2u[k] });
        report.detail = format!("U'' vanishes identically (max |U''| = {:e})", d2u[k].abs().as_f64());
        return report;
    }
    let zeros = classify_zeros(state);
    report.tangential_points = zeros.tangential;
    if zeros.crossings.is_empty() {
        let k = (0..d2u.len()).fold(0, |b, i| if d2u[i].abs() < d2u[b].abs() { i } else { b });
        report.verdict = Verdict::StableByCriterion;
        report.witnesses.push(Witness { y: y[k], value: d2u[k] });
        report.detail = if report.tangential_points.is_empty() {
            format!("U'' keeps one sign; min |U''| = {:e}", d2u[k].abs().as_f64())
        } else {
            format!("U'' touches zero at {} point(s) without changing sign", report.tangential_points.len())
        };
    } else {
        report.witnesses = zeros.crossings.iter().map(|&ys| Witness { y: ys, value: state.d2u().eval(ys) }).collect();
        report.detail = format!("U'' changes sign at {} point(s)", zeros.crossings.len());
        report.inflection_points = zeros.crossings;
    }
    report
}

/// `U''(y) (V(y) - V(y_s))` at the grid nodes.
pub fn fjortoft_product<T: Real>(state: &SteadyShearState<T>, y_s: T) -> Vec<T> {
    shifted_product(state, state.v().eval(y_s))
}

fn shifted_product<T: Real>(state: &SteadyShearState<T>, z: T) -> Vec<T> {
    state.d2u().values().iter().zip(state.v().values()).map(|(&c, &v)| c * (v - z)).collect()
}

/// Fjortoft's condition. Reports the Rayleigh verdict unchanged when that
/// already excludes instability.
pub fn fjortoft_check<T: Real>(state: &SteadyShearState<T>) -> CriterionReport<T> {
    let rayleigh = rayleigh_check(state);
    if rayleigh.verdict != Verdict::InstabilityNotRuledOut {
        return CriterionReport {
            criterion: Criterion::Fjortoft,
            detail: format!("settled by the Rayleigh criterion: {}", rayleigh.detail),
            ..rayleigh
        };
    }
    let mut report =
        fjortoft_check_at(state, &rayleigh.inflection_points).expect("Rayleigh reported inflection points");
    report.tangential_points = rayleigh.tangential_points;
    report
}

/// Fjortoft's condition for the given inflection points.
pub fn fjortoft_check_at<T: Real>(state: &SteadyShearState<T>, inflection_points: &[T]) -> Result<CriterionReport<T>> {
    if inflection_points.is_empty() {
        return Err(Error::NoInflectionPoint);
    }
    let y = state.grid().nodes();
    let tol = product_tol(state);
    let mut witnesses = Vec::new();
    let mut certified = None;
    for &ys in inflection_points {
        let p = fjortoft_product(state, ys);
        let k = argmin(&p);
        witnesses.push(Witness { y: y[k], value: p[k] });
        if p[k] >= -tol && certified.is_none() {
            certified = Some(ys);
        }
    }
    let (verdict, detail) = match certified {
        Some(ys) => (
            Verdict::StableByCriterion,
            format!("U''(V - V(y_s)) >= 0 everywhere for y_s = {}", ys.as_f64()),
        ),
        None => (Verdict::InstabilityNotRuledOut, "U''(V - V(y_s)) < 0 somewhere for every inflection point".into()),
    };
    Ok(CriterionReport {
        criterion: Criterion::Fjortoft,
        verdict,
        witnesses,
        inflection_points: inflection_points.to_vec(),
        tangential_points: Vec::new(),
        best_z: certified.map(|ys| state.v().eval(ys)),
        detail,
    })
}

/// 201 shifts covering `[min V - span, max V + span]`, `span` the range of `V`.
pub fn default_z_grid<T: Real>(state: &SteadyShearState<T>) -> Vec<T> {
    let v = state.v().values();
    let lo = v.iter().copied().fold(T::infinity(), T::min);
    let hi = v.iter().copied().fold(T::neg_infinity(), T::max);
    let mut span = hi - lo;
    if span <= T::zero() {
        span = T::one().max(hi.abs());
    }
    let (a, b) = (lo - span, hi + span);
    (0..201).map(|j| a + (b - a) * T::lit(j as f64 / 200.0)).collect()
}

/// Searches for one shift `z` with `(V - z) U'' >= 0` everywhere. An empty
/// `z_grid` selects [`default_z_grid`].
pub fn fjortoft_generalized_check<T: Real>(state: &SteadyShearState<T>, z_grid: &[T]) -> CriterionReport<T> {
    let rayleigh = rayleigh_check(state);
    let y = state.grid().nodes();
    let default;
    let zs = if z_grid.is_empty() {
        default = default_z_grid(state);
        &default[..]
    } else {
        z_grid
    };
    let mut report = CriterionReport {
        criterion: Criterion::FjortoftGeneralized,
        verdict: Verdict::InstabilityNotRuledOut,
        witnesses: Vec::new(),
        inflection_points: rayleigh.inflection_points,
        tangential_points: rayleigh.tangential_points,
        best_z: None,
        detail: String::new(),
    };
    if rayleigh.verdict == Verdict::DegenerateStable {
        report.verdict = Verdict::DegenerateStable;
        report.best_z = zs.first().copied();
        report.detail = "U'' vanishes identically; every shift certifies".into();
        return report;
    }
    let mut best: Option<(T, usize, T)> = None;
    for &z in zs {
        let p = shifted_product(state, z);
        let k = argmin(&p);
        if best.map_or(true, |(_, _, w)| p[k] > w) {
            best = Some((z, k, p[k]));
        }
    }
    let (z, k, worst) = best.expect("non-empty shift grid");
    report.best_z = Some(z);
    report.witnesses.push(Witness { y: y[k], value: worst });
    if worst >= -product_tol(state) {
        report.verdict = Verdict::StableByCriterion;
        report.detail = format!("(V - z) U'' >= 0 everywhere for z = {}", z.as_f64());
    } else {
        report.detail = format!("no shift among {} certifies; best z = {}", zs.len(), z.as_f64());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_steady_shear, Descriptor, Grid1D, Profile1D, ShearSource};

    fn from_u(coeffs: Vec<f64>, a: f64, b: f64) -> SteadyShearState<f64> {
        let g = Grid1D::chebyshev(a, b, 49).unwrap();
        let u = Profile1D::from_descriptor(&g, Descriptor::Polynomial(coeffs));
        build_steady_shear(ShearSource::FromU(u), 0.1, 0.0).unwrap()
    }

    #[test]
    fn tangential_zero_is_not_an_inflection() {
        // U'' = 12 y^2 touches zero at y = 0
        let s = from_u(vec![0.0, 0.0, 0.0, 0.0, 1.0], -1.0, 1.0);
        let r = rayleigh_check(&s);
        assert_eq!(r.verdict, Verdict::StableByCriterion);
        assert!(r.inflection_points.is_empty());
        assert_eq!(r.tangential_points.len(), 1);
    }

    #[test]
    fn fjortoft_without_inflection_is_an_error() {
        let s = from_u(vec![1.0, 0.0, -1.0], -1.0, 1.0);
        assert_eq!(fjortoft_check_at(&s, &[]).unwrap_err(), Error::NoInflectionPoint);
        assert_eq!(fjortoft_check(&s).verdict, Verdict::StableByCriterion);
    }
}
