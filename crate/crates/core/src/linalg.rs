//! Thin sparse-matrix layer over the direct solver backend.

use crate::error::{Error, Result};
use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

/// Triplet accumulator for assembling sparse Jacobians. Duplicate entries
/// are summed on conversion.
#[derive(Debug, Clone)]
pub struct Triplets {
    pub nrows: usize,
    pub ncols: usize,
    entries: Vec<Triplet<usize, usize, f64>>,
}

impl Triplets {
    pub fn new(nrows: usize, ncols: usize) -> Triplets {
        Triplets { nrows, ncols, entries: Vec::new() }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, cap: usize) -> Triplets {
        Triplets { nrows, ncols, entries: Vec::with_capacity(cap) }
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push(Triplet::new(row, col, val));
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Dense matrix-vector product (test/diagnostic use).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        for t in &self.entries {
            y[t.row] += t.val * x[t.col];
        }
        y
    }

    pub fn to_sparse(&self) -> Result<SparseColMat<usize, f64>> {
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &self.entries)
            .map_err(|e| Error::SingularJacobian(format!("assembly failed: {e:?}")))
    }
}

/// LU factorization of a sparse square matrix.
pub struct SparseLu {
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
    n: usize,
}

impl SparseLu {
    pub fn factor(t: &Triplets) -> Result<SparseLu> {
        if t.nrows != t.ncols {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                t.nrows, t.ncols
            )));
        }
        let mat = t.to_sparse()?;
        let lu = mat
            .sp_lu()
            .map_err(|e| Error::SingularJacobian(format!("{e:?}")))?;
        Ok(SparseLu { lu, n: t.nrows })
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.n);
        let rhs = Mat::from_fn(self.n, 1, |i, _| b[i]);
        let x = self.lu.solve(&rhs);
        let out: Vec<f64> = (0..self.n).map(|i| x[(i, 0)]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularJacobian("non-finite solve result".into()));
        }
        Ok(out)
    }

    /// Solves A X = B for several right-hand sides.
    pub fn solve_many(&self, bs: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
        let k = bs.len();
        let rhs = Mat::from_fn(self.n, k, |i, j| bs[j][i]);
        let x = self.lu.solve(&rhs);
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let col: Vec<f64> = (0..self.n).map(|i| x[(i, j)]).collect();
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::SingularJacobian("non-finite solve result".into()));
            }
            out.push(col);
        }
        Ok(out)
    }
}

/// Solves the bordered system
/// `[A  B; C^T  D] [x; y] = [f; g]`
/// by block elimination with a single LU of `A`.
///
/// `b_cols` are the dense border columns of `A`'s extension, `c_rows` the
/// sparse border rows, `d` the corner block (row-major `k x k`).
pub struct BorderedSolve;

impl BorderedSolve {
    #[allow(clippy::too_many_arguments)]
    pub fn solve(
        a: &Triplets,
        b_cols: &[Vec<f64>],
        c_rows: &[Vec<(usize, f64)>],
        d: &[f64],
        f: &[f64],
        g: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let k = b_cols.len();
        assert_eq!(c_rows.len(), k);
        assert_eq!(d.len(), k * k);
        assert_eq!(g.len(), k);
        let lu = SparseLu::factor(a)?;
        // A [x0 | Y] = [f | B]
        let mut rhs: Vec<&[f64]> = vec![f];
        for col in b_cols {
            rhs.push(col);
        }
        let sols = lu.solve_many(&rhs)?;
        let x0 = &sols[0];
        // Schur complement S = D - C^T Y, rhs g - C^T x0
        let dot = |row: &Vec<(usize, f64)>, v: &Vec<f64>| -> f64 {
            row.iter().map(|&(i, w)| w * v[i]).sum()
        };
        let mut s = vec![0.0; k * k];
        let mut rg = vec![0.0; k];
        for i in 0..k {
            rg[i] = g[i] - dot(&c_rows[i], x0);
            for j in 0..k {
                s[i * k + j] = d[i * k + j] - dot(&c_rows[i], &sols[1 + j]);
            }
        }
        let y = solve_dense_small(&mut s, &rg, k)?;
        // x = x0 - Y y
        let mut x = x0.clone();
        for j in 0..k {
            for (xi, yi) in x.iter_mut().zip(sols[1 + j].iter()) {
                *xi -= y[j] * yi;
            }
        }
        Ok((x, y))
    }
}

/// Gaussian elimination with partial pivoting for tiny dense systems.
fn solve_dense_small(a: &mut [f64], b: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .abs()
                    .partial_cmp(&a[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[piv * n + col].abs() < 1e-300 {
            return Err(Error::SingularJacobian("singular Schur complement".into()));
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        for i in col + 1..n {
            let m = a[i * n + col] / a[col * n + col];
            for j in col..n {
                a[i * n + j] -= m * a[col * n + j];
            }
            x[i] -= m * x[col];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= a[i * n + j] * x[j];
        }
        x[i] /= a[i * n + i];
    }
    Ok(x)
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

pub fn norm_2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
