//! Node sets, differentiation weights and quadrature rules.

use crate::linalg::Dense;
use crate::scalar::Real;

/// Chebyshev extrema on `[a, b]`, increasing, with exact endpoints.
pub fn chebyshev_nodes<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let big_n = T::lit((n - 1) as f64);
    let half = T::lit(0.5);
    let mid = (a + b) * half;
    let rad = (b - a) * half;
    (0..n)
        .map(|j| {
            if j == 0 {
                return a;
            }
            if j == n - 1 {
                return b;
            }
            // sin form keeps the node set symmetric to the last bit
            let arg = T::PI() * (T::lit(2.0 * j as f64) - big_n) / (T::lit(2.0) * big_n);
            mid + rad * arg.sin()
        })
        .collect()
}

pub fn uniform_nodes<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let h = (b - a) / T::lit((n - 1) as f64);
    (0..n).map(|j| if j == n - 1 { b } else { a + h * T::lit(j as f64) }).collect()
}

/// Barycentric weights of the Chebyshev extrema.
pub fn chebyshev_weights<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { T::one() } else { -T::one() };
            if j == 0 || j == n - 1 {
                s * T::lit(0.5)
            } else {
                s
            }
        })
        .collect()
}

/// Differentiation matrix of order `m` for the polynomial interpolant through
/// `x` with barycentric weights `w`.
///
/// Higher orders use the recursion of Schneider and Werner rather than powers
/// of the first-order matrix, which keeps roundoff in check for fourth derivatives.
pub fn barycentric_diff<T: Real>(x: &[T], w: &[T], m: usize) -> Dense<T> {
    let n = x.len();
    let mut d = Dense::identity(n);
    for order in 1..=m {
        let k = T::lit(order as f64);
        let prev = d.clone();
        let mut next = Dense::zeros(n, n);
        for i in 0..n {
            let mut diag = T::zero();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = k / (x[i] - x[j]) * (w[j] / w[i] * prev[(i, i)] - prev[(i, j)]);
                next[(i, j)] = v;
                diag = diag - v;
            }
            next[(i, i)] = diag;
        }
        d = next;
    }
    d
}

/// Finite-difference weights (Fornberg) for derivatives `0..=m` at `z` using
/// the stencil `x`. Returns `c[k][j]`, the weight of `f(x[j])` in the k-th derivative.
pub fn fornberg<T: Real>(z: T, x: &[T], m: usize) -> Vec<Vec<T>> {
    let n = x.len();
    let mut c = vec![vec![T::zero(); n]; m + 1];
    let mut c1 = T::one();
    let mut c4 = x[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::lit(k as f64);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::lit(k as f64);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil window of `width` points around node `i`, clamped to `0..n`.
pub(crate) fn window(i: usize, width: usize, n: usize) -> std::ops::Range<usize> {
    let half = width / 2;
    let start = i.saturating_sub(half).min(n - width);
    start..start + width
}

/// Banded finite-difference matrix of order `m` on arbitrary increasing nodes,
/// fourth order throughout. Interior rows are centred, rows near the ends use
/// one-sided stencils with one extra point.
pub fn finite_difference<T: Real>(x: &[T], m: usize) -> Dense<T> {
    let n = x.len();
    let centred = (if m <= 2 { 5 } else { 7 }).min(n);
    let one_sided = (m + 4).min(n);
    let half = centred / 2;
    let mut d = Dense::zeros(n, n);
    for i in 0..n {
        let win = if i >= half && i + half < n { i - half..i + half + 1 } else { window(i, one_sided, n) };
        let c = fornberg(x[i], &x[win.clone()], m);
        for (off, j) in win.enumerate() {
            d[(i, j)] = c[m][off];
        }
    }
    d
}

/// Clenshaw-Curtis weights for Chebyshev extrema on `[a, b]`.
pub fn clenshaw_curtis<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let big_n = n - 1;
    let nf = T::lit(big_n as f64);
    let half = (b - a) * T::lit(0.5);
    (0..n)
        .map(|j| {
            let theta = T::PI() * T::lit(j as f64) / nf;
            let mut s = T::one();
            for k in 1..=big_n / 2 {
                let bk = if 2 * k == big_n { T::one() } else { T::lit(2.0) };
                let kk = T::lit(k as f64);
                s = s - bk / (T::lit(4.0) * kk * kk - T::one()) * (T::lit(2.0) * kk * theta).cos();
            }
            let cj = if j == 0 || j == big_n { T::one() } else { T::lit(2.0) };
            half * cj / nf * s
        })
        .collect()
}

/// Composite Simpson weights on a uniform grid (3/8 rule on the last panel
/// when the number of intervals is odd).
pub fn simpson<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let intervals = n - 1;
    let h = (b - a) / T::lit(intervals as f64);
    let mut w = vec![T::zero(); n];
    let simpson_end = if intervals % 2 == 0 { intervals } else { intervals - 3 };
    let third = h / T::lit(3.0);
    let mut i = 0;
    while i < simpson_end {
        w[i] = w[i] + third;
        w[i + 1] = w[i + 1] + T::lit(4.0) * third;
        w[i + 2] = w[i + 2] + third;
        i += 2;
    }
    if simpson_end < intervals {
        let e = h * T::lit(3.0) / T::lit(8.0);
        let s = simpson_end;
        w[s] = w[s] + e;
        w[s + 1] = w[s + 1] + T::lit(3.0) * e;
        w[s + 2] = w[s + 2] + T::lit(3.0) * e;
        w[s + 3] = w[s + 3] + e;
    }
    w
}

/// Matrix mapping nodal values at `x` to values at `targets` (barycentric formula).
pub fn barycentric_matrix<T: Real>(x: &[T], w: &[T], targets: &[T]) -> Dense<T> {
    let mut m = Dense::zeros(targets.len(), x.len());
    for (r, &t) in targets.iter().enumerate() {
        if let Some(j) = x.iter().position(|&xj| xj == t) {
            m[(r, j)] = T::one();
            continue;
        }
        let mut denom = T::zero();
        for j in 0..x.len() {
            let q = w[j] / (t - x[j]);
            m[(r, j)] = q;
            denom = denom + q;
        }
        for j in 0..x.len() {
            m[(r, j)] = m[(r, j)] / denom;
        }
    }
    m
}

pub fn barycentric_eval<T: Real>(x: &[T], w: &[T], f: &[T], t: T) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for j in 0..x.len() {
        let dx = t - x[j];
        if dx == T::zero() {
            return f[j];
        }
        let q = w[j] / dx;
        num = num + q * f[j];
        den = den + q;
    }
    num / den
}

/// Local six-point Lagrange interpolation on increasing nodes.
pub fn local_lagrange<T: Real>(x: &[T], f: &[T], t: T) -> T {
    let n = x.len();
    let i = x.partition_point(|&xi| xi < t).min(n - 1);
    let width = 6.min(n);
    let win = window(i, width, n);
    let c = fornberg(t, &x[win.clone()], 0);
    win.enumerate().fold(T::zero(), |acc, (off, j)| acc + c[0][off] * f[j])
}
