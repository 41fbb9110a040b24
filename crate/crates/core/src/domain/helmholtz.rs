use crate::domain::grid::Grid1D;
use crate::domain::profile::{Descriptor, Profile1D};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.as_f64()))
    }
}

/// `U = V - alpha^2 V''`.
///
/// Symbolic when `v` carries a descriptor, otherwise uses the grid's
/// second-derivative matrix.
pub fn helmholtz_filter<T: Real>(v: &Profile1D<T>, alpha: T) -> Result<Profile1D<T>> {
    check_alpha(alpha)?;
    if let Some(d) = v.descriptor() {
        return Ok(Profile1D::from_descriptor(v.grid(), d.helmholtz(alpha)));
    }
    let d2 = v.derivative(2);
    v.combine(T::one(), &d2, -(alpha * alpha))
}

/// Solves `V - alpha^2 V'' = U` with `V'(a) = V'(b) = 0`.
///
/// With a closed-form `U` the solution is a particular solution plus the two
/// decaying exponentials fixed by the Neumann conditions. Otherwise the
/// collocation system is solved directly ([`invert_helmholtz_discrete`]).
pub fn invert_helmholtz<T: Real>(u: &Profile1D<T>, alpha: T) -> Result<Profile1D<T>> {
    check_alpha(alpha)?;
    let grid = u.grid();
    let Some(vp) = u.descriptor().and_then(|d| d.helmholtz_particular(alpha)) else {
        return invert_helmholtz_discrete(u, alpha);
    };
    let (a, b) = (grid.a(), grid.b());
    let dvp = vp.derivative();
    let (pa, pb) = (dvp.eval(a), dvp.eval(b));
    let e = (-(b - a) / alpha).exp();
    // V' = vp' + ca e^{(y-b)/alpha} - cb e^{-(y-a)/alpha}
    let ca = (e * pa - pb) / (T::one() - e * e);
    let cb = e * ca + pa;
    let v = vp.plus(Descriptor::Sum(vec![
        Descriptor::Exponential { amplitude: alpha * ca, rate: T::one() / alpha, center: b },
        Descriptor::Exponential { amplitude: alpha * cb, rate: -T::one() / alpha, center: a },
    ]));
    Ok(Profile1D::from_descriptor(grid, v))
}

/// Collocation solve of the Neumann problem on the profile's grid; the
/// returned profile is tabulated.
pub fn invert_helmholtz_discrete<T: Real>(u: &Profile1D<T>, alpha: T) -> Result<Profile1D<T>> {
    check_alpha(alpha)?;
    let grid: &Grid1D<T> = u.grid();
    let n = grid.n();
    let d1 = grid.diff_matrix(1);
    let d2 = grid.diff_matrix(2);
    let mut m = crate::linalg::Dense::identity(n).add_scaled(-(alpha * alpha), &d2);
    let mut rhs = u.values().to_vec();
    for row in [0, n - 1] {
        m.row_mut(row).copy_from_slice(d1.row(row));
        rhs[row] = T::zero();
    }
    let v = m.solve(&rhs).map_err(|_| Error::SingularSystem("Helmholtz inversion".into()))?;
    Profile1D::tabulated(grid, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonpositive_alpha_is_rejected() {
        let g = Grid1D::chebyshev(0.0, 1.0, 16).unwrap();
        let v = Profile1D::from_descriptor(&g, Descriptor::constant(1.0));
        assert_eq!(helmholtz_filter(&v, 0.0), Err(Error::InvalidAlpha(0.0)));
        assert_eq!(invert_helmholtz(&v, -1.0).unwrap_err(), Error::InvalidAlpha(-1.0));
    }

    #[test]
    fn discrete_inverse_of_cosine() {
        let g = Grid1D::chebyshev(0.0, std::f64::consts::PI, 40).unwrap();
        let alpha = 0.3;
        let u = Profile1D::from_fn(&g, |y| (1.0 + alpha * alpha) * y.cos());
        let v = invert_helmholtz_discrete(&u, alpha).unwrap();
        for (&y, &vi) in g.nodes().iter().zip(v.values()) {
            assert!((vi - y.cos()).abs() < 1e-12);
        }
    }
}
