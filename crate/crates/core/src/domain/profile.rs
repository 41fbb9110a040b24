use serde::{Deserialize, Serialize};

use crate::domain::grid::Grid1D;
use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};

/// Closed-form description of a profile, differentiated and integrated symbolically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Descriptor<T> {
    /// Coefficients in ascending powers of `y`.
    Polynomial(Vec<T>),
    /// `amplitude * sin(frequency * y + phase)`
    Trig { amplitude: T, frequency: T, phase: T },
    /// `amplitude * exp(rate * (y - center))`
    Exponential { amplitude: T, rate: T, center: T },
    Sum(Vec<Descriptor<T>>),
}

impl<T: Real> Descriptor<T> {
    pub fn constant(c: T) -> Self {
        Self::Polynomial(vec![c])
    }

    pub fn sin(frequency: T) -> Self {
        Self::Trig { amplitude: T::one(), frequency, phase: T::zero() }
    }

    pub fn cos(frequency: T) -> Self {
        Self::Trig { amplitude: T::one(), frequency, phase: T::FRAC_PI_2() }
    }

    pub fn eval(&self, y: T) -> T {
        match self {
            Self::Polynomial(c) => c.iter().rev().fold(T::zero(), |acc, &ci| acc * y + ci),
            Self::Trig { amplitude, frequency, phase } => *amplitude * (*frequency * y + *phase).sin(),
            Self::Exponential { amplitude, rate, center } => *amplitude * (*rate * (y - *center)).exp(),
            Self::Sum(terms) => terms.iter().fold(T::zero(), |acc, t| acc + t.eval(y)),
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            Self::Polynomial(c) => {
                let d: Vec<T> = c.iter().enumerate().skip(1).map(|(i, &ci)| ci * T::lit(i as f64)).collect();
                Self::Polynomial(if d.is_empty() { vec![T::zero()] } else { d })
            }
            Self::Trig { amplitude, frequency, phase } => Self::Trig {
                amplitude: *amplitude * *frequency,
                frequency: *frequency,
                phase: *phase + T::FRAC_PI_2(),
            },
            Self::Exponential { amplitude, rate, center } => {
                Self::Exponential { amplitude: *amplitude * *rate, rate: *rate, center: *center }
            }
            Self::Sum(terms) => Self::Sum(terms.iter().map(Self::derivative).collect()),
        }
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |d, _| d.derivative())
    }

    /// Some antiderivative (the additive constant is unspecified).
    pub fn antiderivative(&self) -> Self {
        match self {
            Self::Polynomial(c) => {
                let mut out = vec![T::zero()];
                out.extend(c.iter().enumerate().map(|(i, &ci)| ci / T::lit((i + 1) as f64)));
                Self::Polynomial(out)
            }
            Self::Trig { amplitude, frequency, phase } => {
                if *frequency == T::zero() {
                    Self::Polynomial(vec![T::zero(), *amplitude * phase.sin()])
                } else {
                    Self::Trig {
                        amplitude: *amplitude / *frequency,
                        frequency: *frequency,
                        phase: *phase - T::FRAC_PI_2(),
                    }
                }
            }
            Self::Exponential { amplitude, rate, center } => {
                if *rate == T::zero() {
                    Self::Polynomial(vec![T::zero(), *amplitude])
                } else {
                    Self::Exponential { amplitude: *amplitude / *rate, rate: *rate, center: *center }
                }
            }
            Self::Sum(terms) => Self::Sum(terms.iter().map(Self::antiderivative).collect()),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        match self {
            Self::Polynomial(c) => Self::Polynomial(c.iter().map(|&ci| ci * s).collect()),
            Self::Trig { amplitude, frequency, phase } => {
                Self::Trig { amplitude: *amplitude * s, frequency: *frequency, phase: *phase }
            }
            Self::Exponential { amplitude, rate, center } => {
                Self::Exponential { amplitude: *amplitude * s, rate: *rate, center: *center }
            }
            Self::Sum(terms) => Self::Sum(terms.iter().map(|t| t.scale(s)).collect()),
        }
    }

    pub fn plus(self, other: Self) -> Self {
        match (self, other) {
            (Self::Polynomial(a), Self::Polynomial(b)) => {
                let n = a.len().max(b.len());
                let get = |c: &Vec<T>, i: usize| c.get(i).copied().unwrap_or(T::zero());
                Self::Polynomial((0..n).map(|i| get(&a, i) + get(&b, i)).collect())
            }
            (Self::Sum(mut a), Self::Sum(b)) => {
                a.extend(b);
                Self::Sum(a)
            }
            (Self::Sum(mut a), b) => {
                a.push(b);
                Self::Sum(a)
            }
            (a, b) => Self::Sum(vec![a, b]),
        }
    }

    /// `self - alpha^2 * self''`, computed on the coefficients.
    pub fn helmholtz(&self, alpha: T) -> Self {
        let a2 = alpha * alpha;
        match self {
            Self::Polynomial(c) => {
                let d2 = self.nth_derivative(2);
                let Self::Polynomial(d2) = d2 else { unreachable!() };
                Self::Polynomial(
                    c.iter().enumerate().map(|(i, &ci)| ci - a2 * d2.get(i).copied().unwrap_or(T::zero())).collect(),
                )
            }
            Self::Trig { frequency, .. } => self.scale(T::one() + a2 * *frequency * *frequency),
            Self::Exponential { rate, .. } => self.scale(T::one() - a2 * *rate * *rate),
            Self::Sum(terms) => Self::Sum(terms.iter().map(|t| t.helmholtz(alpha)).collect()),
        }
    }

    /// A particular solution `V` of `V - alpha^2 V'' = self` (no boundary
    /// conditions), or `None` when an exponential term is resonant.
    pub fn helmholtz_particular(&self, alpha: T) -> Option<Self> {
        let a2 = alpha * alpha;
        match self {
            Self::Polynomial(c) => {
                let mut out = vec![T::zero(); c.len()];
                let mut term = self.clone();
                let mut weight = T::one();
                loop {
                    let Self::Polynomial(tc) = &term else { unreachable!() };
                    if tc.iter().all(|&v| v == T::zero()) {
                        break;
                    }
                    for (o, &v) in out.iter_mut().zip(tc) {
                        *o = *o + weight * v;
                    }
                    weight = weight * a2;
                    term = term.nth_derivative(2);
                }
                Some(Self::Polynomial(out))
            }
            Self::Trig { frequency, .. } => Some(self.scale(T::one() / (T::one() + a2 * *frequency * *frequency))),
            Self::Exponential { rate, .. } => {
                let f = T::one() - a2 * *rate * *rate;
                if f.abs() < T::lit(1e-8) {
                    None
                } else {
                    Some(self.scale(T::one() / f))
                }
            }
            Self::Sum(terms) => terms.iter().map(|t| t.helmholtz_particular(alpha)).collect::<Option<Vec<_>>>().map(Self::Sum),
        }
    }
}

/// Samples of a function of `y` on a [`Grid1D`], optionally with its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D<T> {
    grid: Grid1D<T>,
    values: Vec<T>,
    descriptor: Option<Descriptor<T>>,
}

impl<T: Real> Profile1D<T> {
    pub fn from_descriptor(grid: &Grid1D<T>, descriptor: Descriptor<T>) -> Self {
        let values = grid.nodes().iter().map(|&y| descriptor.eval(y)).collect();
        Self { grid: grid.clone(), values, descriptor: Some(descriptor) }
    }

    pub fn tabulated(grid: &Grid1D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid: grid.clone(), values, descriptor: None })
    }

    pub fn from_fn(grid: &Grid1D<T>, f: impl Fn(T) -> T) -> Self {
        let values = grid.nodes().iter().map(|&y| f(y)).collect();
        Self { grid: grid.clone(), values, descriptor: None }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn descriptor(&self) -> Option<&Descriptor<T>> {
        self.descriptor.as_ref()
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.values)
    }

    pub fn eval(&self, y: T) -> T {
        match &self.descriptor {
            Some(d) => d.eval(y),
            None => self.grid.interpolate(&self.values, y),
        }
    }

    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        match &self.descriptor {
            Some(d) => Self::from_descriptor(&self.grid, d.nth_derivative(order)),
            None => Self {
                grid: self.grid.clone(),
                values: self.grid.diff_matrix(order).matvec(&self.values),
                descriptor: None,
            },
        }
    }

    /// Antiderivative vanishing at the left endpoint.
    pub fn antiderivative(&self) -> Self {
        let a = self.grid.a();
        if let Some(d) = &self.descriptor {
            let anti = d.antiderivative();
            let shift = anti.eval(a);
            return Self::from_descriptor(&self.grid, anti.plus(Descriptor::constant(-shift)));
        }
        let values = crate::domain::cumulative_integral(&self.grid, &self.values);
        Self { grid: self.grid.clone(), values, descriptor: None }
    }

    /// `a * self + b * other` on a shared grid.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::LengthMismatch { expected: self.n(), got: other.n() });
        }
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| a * x + b * y).collect();
        let descriptor = match (&self.descriptor, &other.descriptor) {
            (Some(x), Some(y)) => Some(x.scale(a).plus(y.scale(b))),
            _ => None,
        };
        Ok(Self { grid: self.grid.clone(), values, descriptor })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect(), descriptor: None }
    }

    /// Same function sampled on another grid over the same interval.
    pub fn resample(&self, grid: &Grid1D<T>) -> Self {
        match &self.descriptor {
            Some(d) => Self::from_descriptor(grid, d.clone()),
            None => Self::from_fn(grid, |y| self.grid.interpolate(&self.values, y)),
        }
    }

    /// Drops the closed form, keeping the samples.
    pub fn into_tabulated(mut self) -> Self {
        self.descriptor = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_calculus_matches_hand_results() {
        let p = Descriptor::<f64>::Polynomial(vec![0.0, 1.0, 0.0, -1.0]);
        assert_eq!(p.derivative(), Descriptor::Polynomial(vec![1.0, 0.0, -3.0]));
        let h = p.helmholtz(0.1);
        let Descriptor::Polynomial(c) = h else { panic!() };
        assert!((c[1] - 1.06).abs() < 1e-15 && c[3] == -1.0);

        let s = Descriptor::<f64>::cos(2.0);
        let a = s.antiderivative();
        for y in [0.0, 0.3, 1.7] {
            assert!((a.derivative().eval(y) - s.eval(y)).abs() < 1e-14);
        }
    }

    #[test]
    fn particular_solution_solves_the_ode() {
        let u = Descriptor::<f64>::Sum(vec![
            Descriptor::Polynomial(vec![1.0, -2.0, 0.5, 0.25, 3.0]),
            Descriptor::sin(1.5),
            Descriptor::Exponential { amplitude: 0.3, rate: 0.7, center: 0.0 },
        ]);
        let alpha = 0.4;
        let v = u.helmholtz_particular(alpha).unwrap();
        let back = v.helmholtz(alpha);
        for y in [-1.0, 0.0, 0.4, 2.0] {
            assert!((back.eval(y) - u.eval(y)).abs() < 1e-12);
        }
    }

    #[test]
    fn tabulated_antiderivative_starts_at_zero() {
        let g = Grid1D::<f64>::chebyshev(1.0, 2.0, 24).unwrap();
        let p = Profile1D::from_fn(&g, |y| y.exp());
        let a = p.antiderivative();
        assert!(a.values()[0].abs() < 1e-14);
        assert!((a.values()[23] - (2f64.exp() - 1f64.exp())).abs() < 1e-12);
    }
}
