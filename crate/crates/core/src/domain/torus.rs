use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[0, lx) x [0, ly)` resolved by `nx x ny` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl TorusGrid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() || nx < 4 || ny < 4 {
            return Err(Error::InvalidDomain(format!("torus resolution {nx}x{ny} must be powers of two >= 4")));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::InvalidDomain(format!("torus periods {lx}, {ly} must be positive")));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// `2 pi x 2 pi` box.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    fn signed(i: usize, n: usize) -> i64 {
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Signed integer wavenumbers `(mx, my)` of flat index `i`.
    pub fn mode_numbers(&self, i: usize) -> (i64, i64) {
        (Self::signed(i / self.ny, self.nx), Self::signed(i % self.ny, self.ny))
    }

    pub fn kx(&self, ix: usize) -> f64 {
        2.0 * PI / self.lx * Self::signed(ix, self.nx) as f64
    }

    pub fn ky(&self, iy: usize) -> f64 {
        2.0 * PI / self.ly * Self::signed(iy, self.ny) as f64
    }

    /// `|k|^2` at flat index `i`.
    pub fn k2(&self, i: usize) -> f64 {
        let (ix, iy) = (i / self.ny, i % self.ny);
        self.kx(ix).powi(2) + self.ky(iy).powi(2)
    }

    /// Flat index of the mode `-k`.
    pub fn conjugate_index(&self, i: usize) -> usize {
        let (ix, iy) = (i / self.ny, i % self.ny);
        self.index((self.nx - ix) % self.nx, (self.ny - iy) % self.ny)
    }

    /// Whether mode `i` is a Nyquist mode in either direction.
    pub fn is_nyquist(&self, i: usize) -> bool {
        let (ix, iy) = (i / self.ny, i % self.ny);
        ix == self.nx / 2 || iy == self.ny / 2
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.lx * ix as f64 / self.nx as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.ly * iy as f64 / self.ny as f64
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Symbol of `-Delta (1 - alpha^2 Delta)`.
    pub fn symbol(&self, i: usize, alpha: f64) -> f64 {
        let k2 = self.k2(i);
        k2 * (1.0 + alpha * alpha * k2)
    }
}

/// Two-dimensional FFT with owned plans. Forward is unnormalized; inverse
/// divides by `nx * ny`.
pub(crate) struct Fft2 {
    grid: TorusGrid,
    fx: Arc<dyn Fft<f64>>,
    fy: Arc<dyn Fft<f64>>,
    ix: Arc<dyn Fft<f64>>,
    iy: Arc<dyn Fft<f64>>,
    column: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(grid: TorusGrid) -> Self {
        let mut p = FftPlanner::new();
        Self {
            grid,
            fx: p.plan_fft_forward(grid.nx),
            fy: p.plan_fft_forward(grid.ny),
            ix: p.plan_fft_inverse(grid.nx),
            iy: p.plan_fft_inverse(grid.ny),
            column: vec![Complex64::default(); grid.nx],
        }
    }

    fn apply(&mut self, data: &mut [Complex64], forward: bool) {
        let TorusGrid { nx, ny, .. } = self.grid;
        let (fx, fy) = if forward { (&self.fx, &self.fy) } else { (&self.ix, &self.iy) };
        fy.process(data);
        for iy in 0..ny {
            for ix in 0..nx {
                self.column[ix] = data[ix * ny + iy];
            }
            fx.process(&mut self.column);
            for ix in 0..nx {
                data[ix * ny + iy] = self.column[ix];
            }
        }
    }

    pub fn forward(&mut self, real: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = real.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        self.apply(&mut data, true);
        data
    }

    pub fn inverse(&mut self, spec: &[Complex64]) -> Vec<f64> {
        let mut data = spec.to_vec();
        self.apply(&mut data, false);
        let scale = 1.0 / self.grid.len() as f64;
        data.iter().map(|c| c.re * scale).collect()
    }
}

/// Doubly periodic state described by its vorticity coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusState {
    pub(crate) grid: TorusGrid,
    pub(crate) alpha: f64,
    pub(crate) omega_hat: Vec<Complex64>,
}

fn asymmetry(grid: &TorusGrid, hat: &[Complex64]) -> f64 {
    let scale = hat.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let worst = (0..hat.len())
        .map(|i| (hat[i] - hat[grid.conjugate_index(i)].conj()).norm())
        .fold(0.0, f64::max);
    worst / scale
}

const REALNESS_TOL: f64 = 1e-10;

/// `omega_hat = |k|^2 (1 + alpha^2 |k|^2) phi_hat`; the mean of `phi` is irrelevant.
pub fn torus_state_from_streamfunction(grid: TorusGrid, phi_hat: &[Complex64], alpha: f64) -> Result<TorusState> {
    if phi_hat.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: phi_hat.len() });
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    let asym = asymmetry(&grid, phi_hat);
    if asym > REALNESS_TOL {
        return Err(Error::NonRealField { asymmetry: asym });
    }
    let omega_hat = phi_hat.iter().enumerate().map(|(i, &p)| p * grid.symbol(i, alpha)).collect();
    Ok(TorusState { grid, alpha, omega_hat })
}

impl TorusState {
    /// From vorticity coefficients, which must describe a real mean-zero field.
    pub fn from_vorticity_hat(grid: TorusGrid, omega_hat: Vec<Complex64>, alpha: f64) -> Result<Self> {
        if omega_hat.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: omega_hat.len() });
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        let asym = asymmetry(&grid, &omega_hat);
        if asym > REALNESS_TOL {
            return Err(Error::NonRealField { asymmetry: asym });
        }
        let scale = omega_hat.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if omega_hat[0].norm() > 1e-12 * scale.max(1.0) {
            return Err(Error::NonZeroMean { mean: omega_hat[0].re / grid.len() as f64 });
        }
        let mut omega_hat = omega_hat;
        omega_hat[0] = Complex64::default();
        Ok(Self { grid, alpha, omega_hat })
    }

    /// Samples `phi(x, y)` at the grid points and transforms.
    pub fn from_streamfunction_fn(grid: TorusGrid, alpha: f64, phi: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = (0..grid.len()).map(|i| phi(grid.x(i / grid.ny), grid.y(i % grid.ny))).collect();
        let hat = Fft2::new(grid).forward(&values);
        torus_state_from_streamfunction(grid, &hat, alpha)
    }

    pub fn zero(grid: TorusGrid, alpha: f64) -> Self {
        Self { grid, alpha, omega_hat: vec![Complex64::default(); grid.len()] }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_hat(&self) -> &[Complex64] {
        &self.omega_hat
    }

    pub fn phi_hat(&self) -> Vec<Complex64> {
        self.omega_hat
            .iter()
            .enumerate()
            .map(|(i, &w)| if i == 0 { Complex64::default() } else { w / self.grid.symbol(i, self.alpha) })
            .collect()
    }

    /// Coefficients of `v = (phi_y, -phi_x)`.
    pub fn velocity_hat(&self) -> [Vec<Complex64>; 2] {
        let phi = self.phi_hat();
        let g = &self.grid;
        let i = Complex64::i();
        let v1 = (0..g.len()).map(|n| i * g.ky(n % g.ny) * phi[n]).collect();
        let v2 = (0..g.len()).map(|n| -i * g.kx(n / g.ny) * phi[n]).collect();
        [v1, v2]
    }

    /// Coefficients of the unfiltered velocity `u = (1 - alpha^2 Delta) v`.
    pub fn unfiltered_velocity_hat(&self) -> [Vec<Complex64>; 2] {
        let a2 = self.alpha * self.alpha;
        self.velocity_hat().map(|v| v.iter().enumerate().map(|(n, &c)| c * (1.0 + a2 * self.grid.k2(n))).collect())
    }

    pub fn omega(&self) -> Vec<f64> {
        Fft2::new(self.grid).inverse(&self.omega_hat)
    }

    pub fn phi(&self) -> Vec<f64> {
        Fft2::new(self.grid).inverse(&self.phi_hat())
    }

    pub fn velocity(&self) -> [Vec<f64>; 2] {
        let mut fft = Fft2::new(self.grid);
        self.velocity_hat().map(|v| fft.inverse(&v))
    }

    pub fn max_speed(&self) -> f64 {
        let [v1, v2] = self.velocity();
        v1.iter().zip(&v2).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
    }

    /// Flat spectral difference `self - other` as a state on the same grid.
    pub fn difference(&self, other: &TorusState) -> Result<TorusState> {
        if self.grid != other.grid || self.alpha != other.alpha {
            return Err(Error::InvalidDomain("states live on different grids or alphas".into()));
        }
        let omega_hat = self.omega_hat.iter().zip(&other.omega_hat).map(|(a, b)| a - b).collect();
        Ok(TorusState { grid: self.grid, alpha: self.alpha, omega_hat })
    }

    /// Random smooth mean-zero state: stream-function modes with
    /// `0 < |m| <= kmax` (integer wavenumbers), uniform coefficients damped by
    /// `(1 + |m|^2)^-2`.
    pub fn random<R: Rng + ?Sized>(grid: TorusGrid, alpha: f64, kmax: usize, rng: &mut R) -> Result<Self> {
        let km = kmax as i64;
        if 2 * km >= grid.nx.min(grid.ny) as i64 {
            return Err(Error::InvalidArgument(format!("kmax {kmax} is not resolved on {}x{}", grid.nx, grid.ny)));
        }
        let mut hat = vec![Complex64::default(); grid.len()];
        let half = grid.len() as f64 / 2.0;
        for mx in 0..=km {
            for my in -km..=km {
                let m2 = mx * mx + my * my;
                if m2 == 0 || m2 > km * km || (mx == 0 && my < 0) {
                    continue;
                }
                let damp = (1.0 + m2 as f64).powi(-2);
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (damp * half);
                let i = grid.index(mx as usize, my.rem_euclid(grid.ny as i64) as usize);
                hat[i] = c;
                hat[grid.conjugate_index(i)] = c.conj();
            }
        }
        torus_state_from_streamfunction(grid, &hat, alpha)
    }

    /// Multiplies the vorticity (and hence every linear quantity) by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { grid: self.grid, alpha: self.alpha, omega_hat: self.omega_hat.iter().map(|w| w * s).collect() }
    }

    /// Sum of two states on the same grid.
    pub fn sum(&self, other: &TorusState) -> Result<TorusState> {
        self.difference(&other.scaled(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_roundtrip() {
        let g = TorusGrid::new(8, 16, 1.0, 2.0).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let mut fft = Fft2::new(g);
        let hat = fft.forward(&f);
        let back = fft.inverse(&hat);
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_noise_is_not_a_real_field() {
        let g = TorusGrid::square(8).unwrap();
        let mut hat = vec![Complex64::default(); g.len()];
        hat[g.index(1, 2)] = Complex64::new(1.0, 0.0);
        let err = torus_state_from_streamfunction(g, &hat, 0.1).unwrap_err();
        assert!(matches!(err, Error::NonRealField { .. }));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(TorusGrid::new(12, 16, 1.0, 1.0).is_err());
    }
}
