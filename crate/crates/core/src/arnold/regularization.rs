use std::f64::consts::{FRAC_PI_2, PI};

use crate::arnold::DomainSpec;
use crate::domain::{build_steady_shear, Descriptor, Grid1D, Profile1D, ShearSource, SteadyShearState};
use crate::error::{Error, Result};

/// Shear state in a channel of width `pi` whose stream function satisfies
///
/// ```text
/// a^2 phi'''' - phi'' - phi / (1 + a^2) = 0,   phi'' = 0 at the walls,
/// ```
///
/// so that `phi0 = (1 + a^2) omega0` and `F' = 1 + a^2`.
///
/// The wall conditions leave a two-dimensional solution space; this picks the
/// member odd about the channel centre,
/// `phi = sin(m s) + K sinh(r s) / sinh(r pi/2)` with `s` the distance from the
/// centre and `-m^2`, `r^2` the roots of `a^2 z^2 - z - 1/(1 + a^2)`. Its
/// velocity `V = phi'` is positive across the channel. For `a = 0` the equation
/// is second order and the solution is `cos s`.
///
/// The closed form is checked against the equation and the wall conditions at
/// the nodes of the `n`-node Chebyshev grid the state is built on; a relative
/// residual above `1e-8` is reported as [`Error::NoNontrivialSolution`].
pub fn build_regularization_example(alpha: f64, spec: &DomainSpec, n: usize) -> Result<SteadyShearState<f64>> {
    spec.validate()?;
    let Some((a1, a2)) = spec.walls() else {
        return Err(Error::InvalidDomain("the regularization example lives in a channel".into()));
    };
    if ((a2 - a1) - PI).abs() > 1e-12 * PI {
        return Err(Error::InvalidDomain(format!("channel width {} must be pi so that min(-Lap) = 1", a2 - a1)));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidAlpha(alpha));
    }
    let centre = 0.5 * (a1 + a2);
    let grid = Grid1D::chebyshev(a1, a2, n)?;
    let beta = 1.0 / (1.0 + alpha * alpha);

    let (phi, v) = if alpha == 0.0 {
        // phi = cos(y - centre), V = -sin(y - centre)
        (
            Descriptor::Trig { amplitude: 1.0, frequency: 1.0, phase: FRAC_PI_2 - centre },
            Descriptor::Trig { amplitude: -1.0, frequency: 1.0, phase: -centre },
        )
    } else {
        let a2c = alpha * alpha;
        let disc = (1.0 + 4.0 * a2c * beta).sqrt();
        let m2 = 2.0 * beta / (disc + 1.0);
        let r2 = (disc + 1.0) / (2.0 * a2c);
        let (m, r) = (m2.sqrt(), r2.sqrt());
        let kk = m2 * (m * FRAC_PI_2).sin() / r2;
        let e = 1.0 / (1.0 - (-r * PI).exp());
        let phi = Descriptor::Sum(vec![
            Descriptor::Trig { amplitude: 1.0, frequency: m, phase: -m * centre },
            Descriptor::Exponential { amplitude: kk * e, rate: r, center: centre + FRAC_PI_2 },
            Descriptor::Exponential { amplitude: -kk * e, rate: -r, center: centre - FRAC_PI_2 },
        ]);
        let v = phi.derivative();
        (phi, v)
    };

    let (d2, d4) = (phi.nth_derivative(2), phi.nth_derivative(4));
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for &y in grid.nodes() {
        let terms = [alpha * alpha * d4.eval(y), -d2.eval(y), -beta * phi.eval(y)];
        worst = worst.max(terms.iter().sum::<f64>().abs());
        scale = terms.iter().fold(scale, |s, t| s.max(t.abs()));
    }
    // phi'' = 0 at the walls
    worst = worst.max(d2.eval(a1).abs()).max(d2.eval(a2).abs());
    let residual = worst / scale.max(f64::MIN_POSITIVE);
    if !(residual < 1e-8) {
        return Err(Error::NoNontrivialSolution { residual });
    }
    build_steady_shear(ShearSource::FromV(Profile1D::from_descriptor(&grid, v)), alpha, 0.0)
}
