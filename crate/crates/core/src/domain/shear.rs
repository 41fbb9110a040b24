use crate::domain::helmholtz::{helmholtz_filter, invert_helmholtz};
use crate::domain::profile::{Descriptor, Profile1D};
use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};

/// What a parallel steady state is built from.
#[derive(Debug, Clone, PartialEq)]
pub enum ShearSource<T> {
    /// Filtered velocity `V`; must satisfy `V' = 0` at both walls.
    FromV(Profile1D<T>),
    /// Unfiltered velocity `U`; `V` is recovered by a Neumann Helmholtz solve.
    FromU(Profile1D<T>),
}

/// Parallel steady state `v = (V(y), 0)` in the channel `a <= y <= b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyShearState<T> {
    alpha: T,
    p0: T,
    v: Profile1D<T>,
    u: Profile1D<T>,
    dv: Profile1D<T>,
    d2v: Profile1D<T>,
    d2u: Profile1D<T>,
    phi0: Profile1D<T>,
    psi0: Profile1D<T>,
    omega0: Profile1D<T>,
    pressure: Profile1D<T>,
}

/// Builds the steady state and its derived fields.
///
/// `alpha = 0` is accepted for comparisons with the classical Euler
/// equations; then `U = V` and no wall condition on `V'` is imposed.
pub fn build_steady_shear<T: Real>(source: ShearSource<T>, alpha: T, p0: T) -> Result<SteadyShearState<T>> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha.as_f64()));
    }
    let classical = alpha == T::zero();
    let (v, u) = match source {
        ShearSource::FromV(v) => {
            let u = if classical { v.clone() } else { helmholtz_filter(&v, alpha)? };
            (v, u)
        }
        ShearSource::FromU(u) => {
            let v = if classical { u.clone() } else { invert_helmholtz(&u, alpha)? };
            (v, u)
        }
    };
    let dv = v.derivative(1);
    if !classical {
        let left = dv.values()[0].abs();
        let right = dv.values()[dv.n() - 1].abs();
        let tol = T::lit(1e-8) * T::one().max(dv.max_abs());
        if left > tol || right > tol {
            return Err(Error::BoundaryConditionViolation {
                left: left.as_f64(),
                right: right.as_f64(),
                tol: tol.as_f64(),
            });
        }
    }
    let d2v = match (v.descriptor(), classical) {
        (None, false) => v.combine(T::one() / (alpha * alpha), &u, -T::one() / (alpha * alpha))?,
        _ => v.derivative(2),
    };
    let du = u.derivative(1);
    let d2u = u.derivative(2);
    let omega0 = match du.descriptor() {
        Some(d) => Profile1D::from_descriptor(du.grid(), d.scale(-T::one())),
        None => du.map(|x| -x),
    };
    let phi0 = v.antiderivative();
    let psi0 = u.antiderivative();
    let half = T::lit(0.5);
    let a2 = alpha * alpha;
    let pv: Vec<T> = v
        .values()
        .iter()
        .zip(dv.values())
        .map(|(&vi, &dvi)| p0 - half * vi * vi + half * a2 * dvi * dvi)
        .collect();
    let pressure = Profile1D::tabulated(v.grid(), pv)?;
    Ok(SteadyShearState { alpha, p0, v, u, dv, d2v, d2u, phi0, psi0, omega0, pressure })
}

impl<T: Real> SteadyShearState<T> {
    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn p0(&self) -> T {
        self.p0
    }
    /// Filtered velocity `V`.
    pub fn v(&self) -> &Profile1D<T> {
        &self.v
    }
    /// Unfiltered velocity `U = V - alpha^2 V''`.
    pub fn u(&self) -> &Profile1D<T> {
        &self.u
    }
    pub fn dv(&self) -> &Profile1D<T> {
        &self.dv
    }
    pub fn d2v(&self) -> &Profile1D<T> {
        &self.d2v
    }
    pub fn d2u(&self) -> &Profile1D<T> {
        &self.d2u
    }
    /// Stream function of `V`, zero at the left wall.
    pub fn phi0(&self) -> &Profile1D<T> {
        &self.phi0
    }
    /// Stream function of `U`, zero at the left wall.
    pub fn psi0(&self) -> &Profile1D<T> {
        &self.psi0
    }
    /// Vorticity `-U'`.
    pub fn omega0(&self) -> &Profile1D<T> {
        &self.omega0
    }
    pub fn pressure(&self) -> &Profile1D<T> {
        &self.pressure
    }
    pub fn grid(&self) -> &crate::domain::Grid1D<T> {
        self.v.grid()
    }

    /// The same flow seen from a frame moving with speed `-c`: `V + c`, `U + c`.
    pub fn shifted(&self, c: T) -> Self {
        let add = |p: &Profile1D<T>| match p.descriptor() {
            Some(d) => Profile1D::from_descriptor(p.grid(), d.clone().plus(Descriptor::constant(c))),
            None => p.map(|x| x + c),
        };
        let v = add(&self.v);
        let u = add(&self.u);
        let phi0 = v.antiderivative();
        let psi0 = u.antiderivative();
        let half = T::lit(0.5);
        let a2 = self.alpha * self.alpha;
        let pv = v
            .values()
            .iter()
            .zip(self.dv.values())
            .map(|(&vi, &dvi)| self.p0 - half * vi * vi + half * a2 * dvi * dvi)
            .collect();
        let pressure = Profile1D::tabulated(v.grid(), pv).expect("same grid");
        Self { v, u, phi0, psi0, pressure, ..self.clone() }
    }

    /// The same state on another node count, used by refinement studies.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        self.on_grid(&self.grid().with_n(n)?)
    }

    /// The same state rebuilt on another grid over the same interval. Closed
    /// forms are kept; tabulated data is interpolated.
    pub fn on_grid(&self, grid: &crate::domain::Grid1D<T>) -> Result<Self> {
        let v = self.v.resample(grid);
        let source = if v.descriptor().is_some() || self.alpha == T::zero() {
            ShearSource::FromV(v)
        } else {
            ShearSource::FromU(self.u.resample(grid))
        };
        build_steady_shear(source, self.alpha, self.p0)
    }

    /// Largest `|V' |` at the walls, the quantity the wall condition bounds.
    pub fn wall_slope(&self) -> T {
        let d = self.dv.values();
        max_abs(&[d[0], d[d.len() - 1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Grid1D;

    #[test]
    fn linear_v_violates_the_wall_condition() {
        let g = Grid1D::chebyshev(0.0, 1.0, 32).unwrap();
        let v = Profile1D::from_descriptor(&g, Descriptor::Polynomial(vec![0.0, 1.0]));
        let err = build_steady_shear(ShearSource::FromV(v), 0.1, 0.0).unwrap_err();
        assert!(matches!(err, Error::BoundaryConditionViolation { .. }));
    }

    #[test]
    fn shift_moves_both_velocities() {
        let g = Grid1D::<f64>::chebyshev(-1.0, 1.0, 32).unwrap();
        let u = Profile1D::from_descriptor(&g, Descriptor::Polynomial(vec![1.0, 0.0, -1.0]));
        let s = build_steady_shear(ShearSource::FromU(u), 0.2, 0.0).unwrap();
        let t = s.shifted(2.5);
        for i in 0..32 {
            assert!((t.v().values()[i] - s.v().values()[i] - 2.5).abs() < 1e-14);
            assert_eq!(t.d2u().values()[i], s.d2u().values()[i]);
        }
    }
}
