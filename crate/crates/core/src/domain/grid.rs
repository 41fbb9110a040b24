use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::scalar::Real;
use crate::spectral;

/// Smallest admissible number of nodes.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Uniform,
    ChebyshevExtrema,
}

/// Nodes on the wall-normal interval `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    a: T,
    b: T,
    kind: GridKind,
    nodes: Vec<T>,
}

impl<T: Real> Grid1D<T> {
    pub fn new(a: T, b: T, n: usize, kind: GridKind) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::GridTooCoarse { n, min: MIN_NODES });
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval { a: a.as_f64(), b: b.as_f64() });
        }
        let nodes = match kind {
            GridKind::Uniform => spectral::uniform_nodes(a, b, n),
            GridKind::ChebyshevExtrema => spectral::chebyshev_nodes(a, b, n),
        };
        Ok(Self { a, b, kind, nodes })
    }

    pub fn chebyshev(a: T, b: T, n: usize) -> Result<Self> {
        Self::new(a, b, n, GridKind::ChebyshevExtrema)
    }

    pub fn uniform(a: T, b: T, n: usize) -> Result<Self> {
        Self::new(a, b, n, GridKind::Uniform)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn width(&self) -> T {
        self.b - self.a
    }

    /// Same interval and kind with a different node count.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.a, self.b, n, self.kind)
    }

    fn bary_weights(&self) -> Vec<T> {
        spectral::chebyshev_weights(self.n())
    }

    /// Differentiation matrix of the given order: spectral on Chebyshev grids,
    /// fourth-order finite differences on uniform ones.
    pub fn diff_matrix(&self, order: usize) -> Dense<T> {
        match self.kind {
            GridKind::ChebyshevExtrema => spectral::barycentric_diff(&self.nodes, &self.bary_weights(), order),
            GridKind::Uniform => spectral::finite_difference(&self.nodes, order),
        }
    }

    pub fn quadrature_weights(&self) -> Vec<T> {
        match self.kind {
            GridKind::ChebyshevExtrema => spectral::clenshaw_curtis(self.a, self.b, self.n()),
            GridKind::Uniform => spectral::simpson(self.a, self.b, self.n()),
        }
    }

    pub fn integrate(&self, f: &[T]) -> T {
        self.quadrature_weights().iter().zip(f).fold(T::zero(), |s, (&w, &v)| s + w * v)
    }

    /// Interpolates nodal data at an arbitrary point of the interval.
    pub fn interpolate(&self, f: &[T], y: T) -> T {
        match self.kind {
            GridKind::ChebyshevExtrema => spectral::barycentric_eval(&self.nodes, &self.bary_weights(), f, y),
            GridKind::Uniform => spectral::local_lagrange(&self.nodes, f, y),
        }
    }

    /// Matrix taking nodal values to values at `targets`.
    pub fn interpolation_matrix(&self, targets: &[T]) -> Dense<T> {
        match self.kind {
            GridKind::ChebyshevExtrema => spectral::barycentric_matrix(&self.nodes, &self.bary_weights(), targets),
            GridKind::Uniform => {
                let n = self.n();
                let mut m = Dense::zeros(targets.len(), n);
                for (r, &t) in targets.iter().enumerate() {
                    let i = self.nodes.partition_point(|&x| x < t).min(n - 1);
                    let win = spectral::window(i, 6.min(n), n);
                    let c = spectral::fornberg(t, &self.nodes[win.clone()], 0);
                    for (off, j) in win.enumerate() {
                        m[(r, j)] = c[0][off];
                    }
                }
                m
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(Grid1D::chebyshev(0.0, 1.0, 7), Err(Error::GridTooCoarse { n: 7, min: 8 }));
        assert!(matches!(Grid1D::uniform(1.0, 1.0, 16), Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn uniform_fd_is_fourth_order() {
        let err = |n: usize| {
            let g = Grid1D::<f64>::uniform(0.0, 1.0, n).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|y| (3.0 * y).sin()).collect();
            let d2 = g.diff_matrix(2).matvec(&f);
            g.nodes().iter().zip(&d2).map(|(y, v)| (v + 9.0 * (3.0 * y).sin()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn works_in_single_precision() {
        let g = Grid1D::<f32>::chebyshev(-1.0, 1.0, 16).unwrap();
        let f: Vec<f32> = g.nodes().iter().map(|y| y * y).collect();
        assert!((g.integrate(&f) - 2.0 / 3.0).abs() < 1e-6);
    }
}
