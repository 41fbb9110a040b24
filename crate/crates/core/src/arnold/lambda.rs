use std::f64::consts::PI;

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::arnold::DomainSpec;
use crate::domain::{Grid1D, TorusState};
use crate::error::{Error, Result};

/// Default resolution of the numerical eigenvalue check.
pub const DEFAULT_LAMBDA_NODES: usize = 16;

/// Smallest eigenvalue of `-Lap (1 - a^2 Lap)` on a domain, with the mode
/// attaining it: `exp(2 pi i mode_kx x / Lx)` times the `mode_n`-th `y` mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaMin {
    pub alpha: f64,
    pub lambda_min: f64,
    /// Corresponding eigenvalue of `-Lap`.
    pub mu_min: f64,
    pub mode_kx: usize,
    pub mode_n: usize,
    /// The discretized-operator value the analytic one was checked against.
    pub numeric: f64,
}

fn analytic(spec: &DomainSpec) -> (f64, usize, usize) {
    match *spec {
        DomainSpec::Torus { lx, ly } => {
            let (mx, my) = ((2.0 * PI / lx).powi(2), (2.0 * PI / ly).powi(2));
            if mx <= my {
                (mx, 1, 0)
            } else {
                (my, 0, 1)
            }
        }
        DomainSpec::PeriodicChannel { .. } => ((PI / 2.0).powi(2), 0, 1),
        DomainSpec::ChannelInterval { a1, a2, .. } => ((PI / (a2 - a1)).powi(2), 0, 1),
    }
}

/// Dense Fourier second-derivative matrix on `n` points of period `l`.
fn fourier_d2(n: usize, l: f64) -> Mat<f64> {
    let h = 2.0 * PI / n as f64;
    let s = (2.0 * PI / l).powi(2);
    Mat::from_fn(n, n, |i, j| {
        let v = if i == j {
            -PI * PI / (3.0 * h * h) - 1.0 / 6.0
        } else {
            let d = (i as f64 - j as f64) * h;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            -sign / (2.0 * (0.5 * d).sin().powi(2))
        };
        v * s
    })
}

fn numeric_torus(lx: f64, ly: f64, alpha: f64, n: usize) -> Result<f64> {
    let a2 = alpha * alpha;
    let dx = fourier_d2(n, lx);
    let dy = fourier_d2(n, ly);
    let m = n * n;
    // -Lap + a^2 Lap^2 on the tensor grid, Lap = Dx (x) I + I (x) Dy
    let lap = Mat::from_fn(m, m, |r, c| {
        let (ix, iy, jx, jy) = (r / n, r % n, c / n, c % n);
        let mut v = 0.0;
        if iy == jy {
            v += dx[(ix, jx)];
        }
        if ix == jx {
            v += dy[(iy, jy)];
        }
        v
    });
    let op = &lap * &lap * faer::Scale(a2) - &lap;
    let ev = op
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
    // the constant mode is excluded by the mean-zero condition
    Ok(ev.into_iter().filter(|&x| x > 1e-8).fold(f64::INFINITY, f64::min))
}

/// `-(D^2 - kappa)(1 + a^2 kappa - a^2 D^2)` by fourth-order Chebyshev
/// collocation with `phi = phi'' = 0` eliminated at both walls.
fn numeric_channel_mode(a1: f64, a2w: f64, alpha: f64, kappa: f64, n: usize) -> Result<f64> {
    let grid = Grid1D::chebyshev(a1, a2w, n)?;
    let d2 = grid.diff_matrix(2);
    let d4 = grid.diff_matrix(4);
    let a2 = alpha * alpha;
    // operator: a^2 D4 - (1 + 2 a^2 kappa) D2 + kappa (1 + a^2 kappa)
    let op = |i: usize, j: usize| {
        a2 * d4[(i, j)] - (1.0 + 2.0 * a2 * kappa) * d2[(i, j)] + if i == j { kappa * (1.0 + a2 * kappa) } else { 0.0 }
    };
    // phi_0 = phi_{n-1} = 0; phi_1, phi_{n-2} follow from the two phi'' rows
    let (l, r) = (1, n - 2);
    let det = d2[(0, l)] * d2[(n - 1, r)] - d2[(0, r)] * d2[(n - 1, l)];
    if det.abs() < 1e-300 {
        return Err(Error::SingularSystem("channel boundary elimination".into()));
    }
    let free: Vec<usize> = (2..n - 2).collect();
    let m = free.len();
    // phi_l = sum_j el[j] phi_j, phi_r = sum_j er[j] phi_j
    let mut el = vec![0.0; m];
    let mut er = vec![0.0; m];
    for (c, &j) in free.iter().enumerate() {
        let (b0, b1) = (-d2[(0, j)], -d2[(n - 1, j)]);
        el[c] = (b0 * d2[(n - 1, r)] - d2[(0, r)] * b1) / det;
        er[c] = (d2[(0, l)] * b1 - b0 * d2[(n - 1, l)]) / det;
    }
    let mat = Mat::from_fn(m, m, |ri, c| {
        let i = free[ri];
        op(i, free[c]) + op(i, l) * el[c] + op(i, r) * er[c]
    });
    let ev = mat.eigenvalues().map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
    Ok(ev.iter().filter(|z| z.im.abs() < 1e-8 * z.re.abs().max(1.0)).map(|z| z.re).fold(f64::INFINITY, f64::min))
}

/// Smallest eigenvalue of `-Lap (1 - a^2 Lap)`, analytic and numerical.
///
/// `n` is the per-direction resolution of the numerical check (Fourier
/// points on the torus, Chebyshev nodes across a channel). The two values must
/// agree to `1e-8` relative.
pub fn lambda_min_alpha(spec: &DomainSpec, alpha: f64, n: usize) -> Result<LambdaMin> {
    spec.validate()?;
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    let (mu, mode_kx, mode_n) = analytic(spec);
    let lambda = mu * (1.0 + alpha * alpha * mu);
    let numeric = match *spec {
        DomainSpec::Torus { lx, ly } => numeric_torus(lx, ly, alpha, n.max(4))?,
        DomainSpec::PeriodicChannel { lx } | DomainSpec::ChannelInterval { lx, .. } => {
            let (a1, a2) = spec.walls().expect("channel");
            let nodes = (2 * n).max(24);
            let k1 = (2.0 * PI / lx).powi(2);
            numeric_channel_mode(a1, a2, alpha, 0.0, nodes)?.min(numeric_channel_mode(a1, a2, alpha, k1, nodes)?)
        }
    };
    if !((numeric - lambda).abs() <= 1e-8 * lambda.abs()) {
        return Err(Error::DiscretizationMismatch { analytic: lambda, numeric });
    }
    Ok(LambdaMin { alpha, lambda_min: lambda, mu_min: mu, mode_kx, mode_n, numeric })
}

/// `(||curl (1 - a^2 Lap) v||^2, ||v||^2 + a^2 ||grad v||^2)` for the torus
/// state, by Parseval. Their ratio is bounded below by `lambda_min`.
pub fn ritz_norms(state: &TorusState) -> (f64, f64) {
    let g = state.grid();
    let norm = g.area() / (g.len() as f64).powi(2);
    let phi = state.phi_hat();
    let (mut top, mut bottom) = (0.0, 0.0);
    for (i, p) in phi.iter().enumerate() {
        let s = g.symbol(i, state.alpha());
        top += s * s * p.norm_sqr();
        bottom += s * p.norm_sqr();
    }
    (top * norm, bottom * norm)
}
