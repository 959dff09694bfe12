//! General Euclidean geometry: the primal/dual norm pair induced by a fixed
//! symmetric positive definite matrix `B`, plus the plain vector arithmetic
//! the rest of the crate is built on.
//!
//! The primal norm is `‖x‖ = ⟨Bx, x⟩^{1/2}` and the dual norm is
//! `‖s‖_* = ⟨s, B⁻¹s⟩^{1/2}`. `B` comes in three shapes: identity (the common
//! case, no matrix work at all), positive diagonal, and dense SPD. A dense
//! context factorizes `B` once at construction and reuses the Cholesky factor
//! for every solve.

use thiserror::Error;

/// Errors from norm-context construction and vector operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("dimension mismatch: context is {expected}-dimensional, vector has length {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("diagonal entry {index} is {value}; entries must be strictly positive and finite")]
    BadDiagonal { index: usize, value: f64 },
    #[error("expected {expected} entries for a {dim}x{dim} row-major matrix, got {got}")]
    BadMatrixShape { dim: usize, expected: usize, got: usize },
    #[error("matrix is not symmetric: |B[{i}][{j}] - B[{j}][{i}]| = {gap:e} exceeds 1e-12 relative")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("matrix is not positive definite: Cholesky failed at pivot {index}")]
    NotPositiveDefinite { index: usize },
}

/// Relative tolerance for the symmetry check on dense `B`.
const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
enum BShape {
    Identity,
    Diagonal {
        diag: Vec<f64>,
    },
    Dense {
        /// Row-major `d*d` entries of `B`.
        entries: Vec<f64>,
        /// Row-major lower-triangular Cholesky factor `L` with `B = L Lᵀ`,
        /// computed once at construction.
        chol: Vec<f64>,
    },
}

/// The matrix `B` defining the primal norm `⟨Bx, x⟩^{1/2}` and dual norm
/// `⟨s, B⁻¹s⟩^{1/2}`.
///
/// Immutable after construction; operations are pure, so a context can be
/// shared freely across concurrent solver runs.
#[derive(Debug, Clone)]
pub struct NormContext {
    dim: usize,
    shape: BShape,
}

impl NormContext {
    /// Standard Euclidean geometry, `B = I`.
    pub fn identity(dim: usize) -> Self {
        NormContext {
            dim,
            shape: BShape::Identity,
        }
    }

    /// `B = diag(d_1, ..., d_n)` with strictly positive entries.
    pub fn diagonal(diag: Vec<f64>) -> Result<Self, SpaceError> {
        if diag.is_empty() {
            return Err(SpaceError::ZeroDimension);
        }
        for (index, &value) in diag.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(SpaceError::BadDiagonal { index, value });
            }
        }
        Ok(NormContext {
            dim: diag.len(),
            shape: BShape::Diagonal { diag },
        })
    }

    /// Dense SPD `B`, given row-major. Fails loudly on asymmetric or
    /// non-positive-definite input; no regularization is applied.
    pub fn dense(dim: usize, entries: Vec<f64>) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::ZeroDimension);
        }
        if entries.len() != dim * dim {
            return Err(SpaceError::BadMatrixShape {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let scale = entries.iter().fold(0.0f64, |m, &e| m.max(e.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                let gap = (entries[i * dim + j] - entries[j * dim + i]).abs();
                if gap > SYMMETRY_RTOL * scale {
                    return Err(SpaceError::NotSymmetric { i, j, gap });
                }
            }
        }
        let chol = cholesky(dim, &entries)?;
        Ok(NormContext {
            dim,
            shape: BShape::Dense { entries, chol },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when `B = I`; constrained feasible sets only support this and the
    /// diagonal shape.
    pub fn is_identity(&self) -> bool {
        matches!(self.shape, BShape::Identity)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.shape, BShape::Dense { .. })
    }

    fn check_dim(&self, v: &[f64]) -> Result<(), SpaceError> {
        if v.len() != self.dim {
            Err(SpaceError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Primal norm `‖x‖ = ⟨Bx, x⟩^{1/2}`.
    pub fn primal_norm(&self, x: &[f64]) -> Result<f64, SpaceError> {
        self.check_dim(x)?;
        let sq = match &self.shape {
            BShape::Identity => dot(x, x),
            BShape::Diagonal { diag } => x
                .iter()
                .zip(diag)
                .map(|(&xi, &di)| di * xi * xi)
                .sum::<f64>(),
            BShape::Dense { entries, .. } => {
                let bx = matvec(self.dim, entries, x);
                dot(&bx, x)
            }
        };
        // The quadratic form can round to a tiny negative near zero.
        Ok(sq.max(0.0).sqrt())
    }

    /// Dual norm `‖s‖_* = ⟨s, B⁻¹s⟩^{1/2} = max_{‖x‖=1} ⟨s, x⟩`.
    pub fn dual_norm(&self, s: &[f64]) -> Result<f64, SpaceError> {
        self.check_dim(s)?;
        let sq = match &self.shape {
            BShape::Identity => dot(s, s),
            BShape::Diagonal { diag } => s
                .iter()
                .zip(diag)
                .map(|(&si, &di)| si * si / di)
                .sum::<f64>(),
            // ⟨s, B⁻¹s⟩ = ‖L⁻¹s‖² with B = L Lᵀ.
            BShape::Dense { chol, .. } => {
                let y = forward_solve(self.dim, chol, s);
                dot(&y, &y)
            }
        };
        Ok(sq.max(0.0).sqrt())
    }

    /// `B x`.
    pub fn apply_b(&self, x: &[f64]) -> Result<Vec<f64>, SpaceError> {
        self.check_dim(x)?;
        Ok(match &self.shape {
            BShape::Identity => x.to_vec(),
            BShape::Diagonal { diag } => x.iter().zip(diag).map(|(&xi, &di)| di * xi).collect(),
            BShape::Dense { entries, .. } => matvec(self.dim, entries, x),
        })
    }

    /// `B⁻¹ s`; the dense path solves with the cached Cholesky factor.
    pub fn apply_b_inverse(&self, s: &[f64]) -> Result<Vec<f64>, SpaceError> {
        self.check_dim(s)?;
        Ok(match &self.shape {
            BShape::Identity => s.to_vec(),
            BShape::Diagonal { diag } => s.iter().zip(diag).map(|(&si, &di)| si / di).collect(),
            BShape::Dense { chol, .. } => {
                let y = forward_solve(self.dim, chol, s);
                backward_solve(self.dim, chol, &y)
            }
        })
    }
}

/// Standard inner product. All dot products in the crate go through here so
/// that data generation and oracle evaluation agree bit-for-bit.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// `a - b` as a fresh vector.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn matvec(dim: usize, entries: &[f64], x: &[f64]) -> Vec<f64> {
    (0..dim)
        .map(|i| dot(&entries[i * dim..(i + 1) * dim], x))
        .collect()
}

/// Row-major lower-triangular Cholesky; `Err` carries the failing pivot.
fn cholesky(dim: usize, entries: &[f64]) -> Result<Vec<f64>, SpaceError> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut sum = entries[i * dim + j];
            for k in 0..j {
                sum -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if !(sum.is_finite() && sum > 0.0) {
                    return Err(SpaceError::NotPositiveDefinite { index: i });
                }
                l[i * dim + j] = sum.sqrt();
            } else {
                l[i * dim + j] = sum / l[j * dim + j];
            }
        }
    }
    Ok(l)
}

/// Solve `L y = b` for lower-triangular `L`.
fn forward_solve(dim: usize, l: &[f64], b: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; dim];
    for i in 0..dim {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * dim + k] * y[k];
        }
        y[i] = sum / l[i * dim + i];
    }
    y
}

/// Solve `Lᵀ x = y` for lower-triangular `L`.
fn backward_solve(dim: usize, l: &[f64], y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for i in (0..dim).rev() {
        let mut sum = y[i];
        for k in (i + 1)..dim {
            sum -= l[k * dim + i] * x[k];
        }
        x[i] = sum / l[i * dim + i];
    }
    x
}
