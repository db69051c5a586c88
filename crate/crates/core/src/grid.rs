//! One-dimensional grids, finite-difference and Fourier differentiation
//! matrices, and band-limited interpolation on periodic grids.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Grid kind: periodic (endpoint excluded) or bounded (endpoints included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    Periodic,
    Bounded,
}

/// Uniform 1D grid on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub kind: GridKind,
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn periodic(a: f64, b: f64, n: usize) -> Grid1D {
        assert!(n >= 8, "grids need at least 8 points");
        Grid1D { kind: GridKind::Periodic, a, b, n }
    }

    pub fn bounded(a: f64, b: f64, n: usize) -> Grid1D {
        assert!(n >= 8, "grids need at least 8 points");
        Grid1D { kind: GridKind::Bounded, a, b, n }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    /// Node spacing; for periodic grids the endpoint is excluded.
    pub fn spacing(&self) -> f64 {
        match self.kind {
            GridKind::Periodic => self.len() / self.n as f64,
            GridKind::Bounded => self.len() / (self.n - 1) as f64,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.a + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

/// Differentiation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// 4th-order centered finite differences with wrap-around.
    Fd4Periodic,
    /// 4th-order centered interior with one-sided closures of matching order.
    Fd4Dirichlet,
    /// Spectral collocation on equispaced periodic points.
    Fourier,
}

/// A differentiation matrix in row-compressed form.
///
/// Rows are short for finite differences and dense for Fourier; both expose
/// the same `(col, weight)` iteration for Jacobian assembly.
#[derive(Debug, Clone)]
pub struct DiffMatrix {
    pub order: usize,
    pub scheme: Scheme,
    pub n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl DiffMatrix {
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// y = D x
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, w) in row {
                acc += w * x[j];
            }
            y[i] = acc;
        }
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.apply(x, &mut y);
        y
    }
}

/// Finite-difference weights for the `m`-th derivative at `z` from nodes
/// `xs` (Fornberg's recurrence).
pub fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Builds the differentiation matrix of the given derivative order for a
/// grid/scheme pair.
pub fn build_diff(grid: &Grid1D, order: usize, scheme: Scheme) -> Result<DiffMatrix> {
    if order != 1 && order != 2 {
        return Err(Error::Dimension(format!("unsupported derivative order {order}")));
    }
    match (grid.kind, scheme) {
        (GridKind::Periodic, Scheme::Fd4Periodic) => Ok(fd4_periodic(grid, order)),
        (GridKind::Bounded, Scheme::Fd4Dirichlet) => Ok(fd4_bounded(grid, order)),
        (GridKind::Periodic, Scheme::Fourier) => Ok(fourier(grid, order)),
        (kind, scheme) => Err(Error::Dimension(format!(
            "scheme {scheme:?} incompatible with {kind:?} grid"
        ))),
    }
}

fn fd4_periodic(grid: &Grid1D, order: usize) -> DiffMatrix {
    let n = grid.n;
    let h = grid.spacing();
    let stencil: [(i64, f64); 5] = if order == 1 {
        [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (0, 0.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)]
    } else {
        [(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)]
    };
    let scale = if order == 1 { 1.0 / h } else { 1.0 / (h * h) };
    let rows = (0..n)
        .map(|i| {
            stencil
                .iter()
                .filter(|(_, w)| *w != 0.0)
                .map(|&(off, w)| {
                    let j = (i as i64 + off).rem_euclid(n as i64) as usize;
                    (j, w * scale)
                })
                .collect()
        })
        .collect();
    DiffMatrix { order, scheme: Scheme::Fd4Periodic, n, rows }
}

fn fd4_bounded(grid: &Grid1D, order: usize) -> DiffMatrix {
    let n = grid.n;
    let xs = grid.points();
    // one-sided closures need one extra node for 2nd derivatives to stay
    // 4th order
    let width = if order == 1 { 5 } else { 6 };
    let rows = (0..n)
        .map(|i| {
            let (lo, len) = if i >= 2 && i + 2 < n {
                (i - 2, 5)
            } else {
                (i.saturating_sub(2).min(n - width), width)
            };
            let nodes: Vec<f64> = xs[lo..lo + len].to_vec();
            let w = fd_weights(xs[i], &nodes, order);
            (0..len).map(|k| (lo + k, w[k])).collect()
        })
        .collect();
    DiffMatrix { order, scheme: Scheme::Fd4Dirichlet, n, rows }
}

fn fourier(grid: &Grid1D, order: usize) -> DiffMatrix {
    let n = grid.n;
    assert!(n % 2 == 0, "Fourier matrices require an even point count");
    // standard spectral collocation entries on the 2*pi grid, rescaled
    let scale = 2.0 * std::f64::consts::PI / grid.len();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = i as i64 - j as i64;
                    let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let w = if order == 1 {
                        if d == 0 {
                            0.0
                        } else {
                            0.5 * sign / (0.5 * d as f64 * h).tan()
                        }
                    } else if d == 0 {
                        -std::f64::consts::PI.powi(2) / (3.0 * h * h) - 1.0 / 6.0
                    } else {
                        -0.5 * sign / (0.5 * d as f64 * h).sin().powi(2)
                    };
                    (j, w * scale.powi(order as i32))
                })
                .collect()
        })
        .collect();
    DiffMatrix { order, scheme: Scheme::Fourier, n, rows }
}

/// Band-limited (trigonometric cardinal) interpolation of periodic samples
/// onto arbitrary targets.
pub fn sinc_interpolate(grid: &Grid1D, values: &[f64], targets: &[f64]) -> Vec<f64> {
    assert_eq!(grid.kind, GridKind::Periodic, "sinc interpolation needs a periodic grid");
    assert_eq!(values.len(), grid.n);
    let n = grid.n as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    targets
        .iter()
        .map(|&t| {
            // map to the 2*pi reference circle
            let s0 = (t - grid.a) / grid.len() * two_pi;
            let mut acc = 0.0;
            for (j, &vj) in values.iter().enumerate() {
                let s = s0 - two_pi * j as f64 / n;
                // periodic sinc for even n: sin(n s / 2) / (n tan(s / 2))
                let wrapped = (s / two_pi - (s / two_pi).round()).abs();
                let w = if wrapped < 1e-14 {
                    1.0
                } else {
                    (0.5 * n * s).sin() / (n * (0.5 * s).tan())
                };
                acc += vj * w;
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn constants_differentiate_to_zero() {
        for (grid, scheme) in [
            (Grid1D::periodic(0.0, 1.0, 64), Scheme::Fd4Periodic),
            (Grid1D::bounded(-1.0, 1.0, 41), Scheme::Fd4Dirichlet),
            (Grid1D::periodic(0.0, 2.0 * PI, 32), Scheme::Fourier),
        ] {
            let d1 = build_diff(&grid, 1, scheme).unwrap();
            let ones = vec![1.0; grid.n];
            let dy = d1.apply_vec(&ones);
            for v in dy {
                assert!(v.abs() < 1e-12, "row sum {v} for {scheme:?}");
            }
        }
    }

    #[test]
    fn fd4_exact_on_quartic_interior() {
        let grid = Grid1D::bounded(0.0, 2.0, 81);
        let d1 = build_diff(&grid, 1, Scheme::Fd4Dirichlet).unwrap();
        let d2 = build_diff(&grid, 2, Scheme::Fd4Dirichlet).unwrap();
        let xs = grid.points();
        let f: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
        let df = d1.apply_vec(&f);
        let d2f = d2.apply_vec(&f);
        for (i, &x) in xs.iter().enumerate() {
            assert_relative_eq!(df[i], 4.0 * x.powi(3), epsilon = 1e-9);
            assert_relative_eq!(d2f[i], 12.0 * x.powi(2), epsilon = 1e-8);
        }
    }

    #[test]
    fn fourier_exact_on_resolved_mode() {
        let grid = Grid1D::periodic(0.0, 2.0 * PI, 32);
        let d1 = build_diff(&grid, 1, Scheme::Fourier).unwrap();
        let k = 5.0;
        let xs = grid.points();
        let f: Vec<f64> = xs.iter().map(|x| (k * x).sin()).collect();
        let df = d1.apply_vec(&f);
        for (i, &x) in xs.iter().enumerate() {
            assert_relative_eq!(df[i], k * (k * x).cos(), epsilon = 1e-10);
        }
    }

    #[test]
    fn fourier_second_derivative_is_squared_first() {
        let grid = Grid1D::periodic(0.0, 1.0, 24);
        let d1 = build_diff(&grid, 1, Scheme::Fourier).unwrap();
        let d2 = build_diff(&grid, 2, Scheme::Fourier).unwrap();
        // apply to a generic smooth function and compare D2 f with D1(D1 f)
        let xs = grid.points();
        let f: Vec<f64> = xs
            .iter()
            .map(|x| (2.0 * PI * x).sin() + 0.3 * (4.0 * PI * x).cos())
            .collect();
        let a = d2.apply_vec(&f);
        let b = d1.apply_vec(&d1.apply_vec(&f));
        for i in 0..grid.n {
            assert!((a[i] - b[i]).abs() < 1e-10, "{} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn fd4_observed_order_on_sine() {
        let mut errs = Vec::new();
        for n in [32, 64, 128, 256] {
            let grid = Grid1D::periodic(0.0, 1.0, n);
            let d1 = build_diff(&grid, 1, Scheme::Fd4Periodic).unwrap();
            let xs = grid.points();
            let f: Vec<f64> = xs.iter().map(|x| (2.0 * PI * x).sin()).collect();
            let df = d1.apply_vec(&f);
            let err = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| (df[i] - 2.0 * PI * (2.0 * PI * x).cos()).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(
                (3.7..=4.3).contains(&order),
                "observed order {order} outside [3.7, 4.3]"
            );
        }
    }

    #[test]
    fn sinc_identity_at_nodes() {
        let grid = Grid1D::periodic(0.0, 1.0, 32);
        let xs = grid.points();
        let f: Vec<f64> = xs.iter().map(|x| (2.0 * PI * x).sin().exp()).collect();
        let out = sinc_interpolate(&grid, &f, &xs);
        for i in 0..grid.n {
            assert_relative_eq!(out[i], f[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn sinc_exact_on_resolved_mode_off_grid() {
        let grid = Grid1D::periodic(0.0, 2.0 * PI, 32);
        let xs = grid.points();
        let k = 7.0;
        let f: Vec<f64> = xs.iter().map(|x| (k * x).cos()).collect();
        let targets: Vec<f64> = (0..57).map(|i| 0.013 + i as f64 * 0.11).collect();
        let out = sinc_interpolate(&grid, &f, &targets);
        for (i, &t) in targets.iter().enumerate() {
            assert_relative_eq!(out[i], (k * t).cos(), epsilon = 1e-11);
        }
    }

    #[test]
    fn sinc_gaussian_onto_finer_grid() {
        // periodized Gaussian, effectively band-limited at this width
        let grid = Grid1D::periodic(0.0, 1.0, 128);
        let gauss = |x: f64| {
            let mut acc = 0.0;
            for kimg in -3i32..=3 {
                let d = x - 0.5 + kimg as f64;
                acc += (-(d / 0.08).powi(2)).exp();
            }
            acc
        };
        let f: Vec<f64> = grid.points().iter().map(|&x| gauss(x)).collect();
        let fine = Grid1D::periodic(0.0, 1.0, 256);
        let out = sinc_interpolate(&grid, &f, &fine.points());
        for (i, &x) in fine.points().iter().enumerate() {
            assert!(
                (out[i] - gauss(x)).abs() < 1e-8,
                "err {} at x = {x}",
                (out[i] - gauss(x)).abs()
            );
        }
    }

    #[test]
    fn incompatible_scheme_rejected() {
        let grid = Grid1D::periodic(0.0, 1.0, 16);
        assert!(build_diff(&grid, 1, Scheme::Fd4Dirichlet).is_err());
        let grid = Grid1D::bounded(0.0, 1.0, 16);
        assert!(build_diff(&grid, 2, Scheme::Fourier).is_err());
    }
}
