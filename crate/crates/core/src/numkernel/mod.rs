//! Dense small-matrix numerics shared by all higher layers.
//!
//! Everything here works on [`Mat`], a dense matrix with complex entries
//! (real matrices are stored with vanishing imaginary parts). The kernel is
//! tuned for the small (n ≲ 50), well-conditioned matrices that come out of
//! Lie-algebra bases and adjoint representations, not for large-scale work.

mod eig;
mod expm;
mod logm;

pub use eig::{eig, SpectralData};
pub use expm::expm;
pub use logm::{logm_principal, sqrtm_principal};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numeric kernel.
#[derive(Debug, Error)]
pub enum NumError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{what} failed to converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("eigenvalue {value} lies on the branch cut (-inf, 0] of the principal logarithm")]
    SpectrumOnCut { value: Complex64 },
    #[error("overflow in matrix exponential (norm {norm:.3e})")]
    Overflow { norm: f64 },
    #[error("matrix does not satisfy claimed {claim} property (residual {residual:.3e} > tol {tol:.3e})")]
    ClaimViolated {
        claim: &'static str,
        residual: f64,
        tol: f64,
    },
}

/// Tolerances used across the toolkit. All verification entry points record
/// the values they ran with, so reports stay reproducible and auditable.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Structural claims on matrices (symmetry, unitarity, ...).
    pub mat: f64,
    /// Spectral residuals `‖A·V − V·diag(λ)‖ ≤ spec·‖A‖`.
    pub spec: f64,
    /// Eigenvalue clustering when deciding multiplicities.
    pub clust: f64,
    /// Residuals of algebraic identities (closure, Jacobi, gradings).
    pub resid: f64,
    /// Half-width of the boundary band excluded from agreement statistics.
    pub band: f64,
    /// Feasibility tolerance of the ray-cone membership solve.
    pub raycone: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mat: 1e-10,
            spec: 1e-8,
            clust: 1e-7,
            resid: 1e-9,
            band: 1e-7,
            raycone: 1e-9,
        }
    }
}

impl Tolerances {
    /// The tolerances as a name → value map, for inclusion in reports.
    pub fn as_map(&self) -> std::collections::BTreeMap<String, f64> {
        let mut m = std::collections::BTreeMap::new();
        m.insert("mat".into(), self.mat);
        m.insert("spec".into(), self.spec);
        m.insert("clust".into(), self.clust);
        m.insert("resid".into(), self.resid);
        m.insert("band".into(), self.band);
        m.insert("raycone".into(), self.raycone);
        m
    }
}

/// Orthonormal null-space basis of a real matrix, via the real SVD. The
/// complex SVD attaches arbitrary unit phases to singular vectors, so real
/// callers that need real basis vectors must use this entry point.
pub fn null_space_real(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    // Pad wide matrices with zero rows: the thin SVD of an m*n matrix with
    // m < n omits the null-space directions from v_t.
    let a = if a.nrows() < a.ncols() {
        let mut padded = DMatrix::zeros(a.ncols(), a.ncols());
        padded.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    let n = a.ncols();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] <= cut {
            cols.push(v_t.row(i).transpose());
        }
    }
    for i in svd.singular_values.len()..v_t.nrows() {
        cols.push(v_t.row(i).transpose());
    }
    let mut out = DMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Structural property a caller may claim about a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatClaim {
    Symmetric,
    AntiSymmetric,
    Hermitian,
    Unitary,
}

/// Dense matrix over the complex numbers. Real matrices are represented with
/// zero imaginary parts; [`Mat::is_real`] and [`Mat::real_part`] recover them.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    data: DMatrix<Complex64>,
}

impl Mat {
    /// Wraps a complex matrix, rejecting non-finite entries.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self, NumError> {
        for (idx, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                let row = idx % data.nrows();
                let col = idx / data.nrows();
                return Err(NumError::NonFinite { row, col });
            }
        }
        Ok(Mat { data })
    }

    pub fn from_real(data: DMatrix<f64>) -> Result<Self, NumError> {
        Self::new(data.map(|x| Complex64::new(x, 0.0)))
    }

    /// Row-major construction from real entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, NumError> {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self::from_real(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Row-major construction from complex entries.
    pub fn from_rows_complex(
        rows: usize,
        cols: usize,
        entries: &[Complex64],
    ) -> Result<Self, NumError> {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Mat {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.data.nrows() == self.data.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.im)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn conjugate(&self) -> Mat {
        Mat {
            data: self.data.map(|z| z.conj()),
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat {
            data: self.data.transpose(),
        }
    }

    pub fn adjoint(&self) -> Mat {
        Mat {
            data: self.data.adjoint(),
        }
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.norm()
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        (0..self.ncols())
            .map(|j| self.data.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat {
            data: self.data.map(|z| z * s),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat {
            data: &self.data - &other.data,
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        Mat {
            data: &self.data * &other.data,
        }
    }

    pub fn mul_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.data * v
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        Mat {
            data: &self.data * &other.data - &other.data * &self.data,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn try_inverse(&self) -> Result<Mat, NumError> {
        self.data
            .clone()
            .try_inverse()
            .map(|data| Mat { data })
            .ok_or(NumError::Singular)
    }

    /// Solves `A·X = B` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Mat) -> Result<Mat, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            });
        }
        if self.nrows() != rhs.nrows() {
            return Err(NumError::DimensionMismatch(format!(
                "solve: {} rows vs rhs {} rows",
                self.nrows(),
                rhs.nrows()
            )));
        }
        let lu = self.data.clone().lu();
        lu.solve(&rhs.data)
            .map(|data| Mat { data })
            .ok_or(NumError::Singular)
    }

    /// Numerical rank from singular values with cutoff `tol·max(1, σ_max)`.
    pub fn rank(&self, tol: f64) -> usize {
        let svd = self.data.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cut = tol * smax.max(1.0);
        svd.singular_values.iter().filter(|&&s| s > cut).count()
    }

    /// Orthonormal basis of the null space, as matrix columns.
    pub fn null_space(&self, tol: f64) -> Mat {
        // Pad wide matrices with zero rows; see null_space_real.
        let data = if self.data.nrows() < self.data.ncols() {
            let n = self.data.ncols();
            let mut padded = DMatrix::zeros(n, n);
            padded
                .view_mut((0, 0), (self.data.nrows(), n))
                .copy_from(&self.data);
            padded
        } else {
            self.data.clone()
        };
        let svd = data.svd(false, true);
        let v_t = svd.v_t.expect("requested v_t");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cut = tol * smax.max(1.0);
        let n = self.ncols();
        let mut cols = Vec::new();
        for i in 0..svd.singular_values.len() {
            if svd.singular_values[i] <= cut {
                cols.push(v_t.row(i).adjoint());
            }
        }
        // Rows of v_t beyond the number of singular values (rectangular case)
        // also span the null space.
        for i in svd.singular_values.len()..v_t.nrows() {
            cols.push(v_t.row(i).adjoint());
        }
        let mut out = DMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            out.set_column(j, c);
        }
        Mat { data: out }
    }

    /// Verifies a structural claim to the given tolerance.
    pub fn verify_claim(&self, claim: MatClaim, tol: f64) -> Result<(), NumError> {
        let residual = match claim {
            MatClaim::Symmetric => self.sub(&self.transpose()).norm_fro(),
            MatClaim::AntiSymmetric => self.add(&self.transpose()).norm_fro(),
            MatClaim::Hermitian => self.sub(&self.adjoint()).norm_fro(),
            MatClaim::Unitary => {
                let n = self.nrows();
                self.adjoint().mul(self).sub(&Mat::identity(n)).norm_fro()
            }
        };
        let scale = self.norm_fro().max(1.0);
        if residual > tol * scale {
            return Err(NumError::ClaimViolated {
                claim: match claim {
                    MatClaim::Symmetric => "symmetric",
                    MatClaim::AntiSymmetric => "antisymmetric",
                    MatClaim::Hermitian => "hermitian",
                    MatClaim::Unitary => "unitary",
                },
                residual,
                tol: tol * scale,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_square(&self) -> Result<usize, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            });
        }
        Ok(self.nrows())
    }

    pub(crate) fn ensure_finite(&self) -> Result<(), NumError> {
        for (idx, v) in self.data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(NumError::NonFinite {
                    row: idx % self.data.nrows(),
                    col: idx / self.data.nrows(),
                });
            }
        }
        Ok(())
    }
}

impl From<Mat> for DMatrix<Complex64> {
    fn from(m: Mat) -> Self {
        m.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn rejects_non_finite_entries() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert!(matches!(
            Mat::from_real(m),
            Err(NumError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn claim_verification() {
        let sym = Mat::from_rows(2, 2, &[1.0, 2.0, 2.0, 3.0]).unwrap();
        sym.verify_claim(MatClaim::Symmetric, 1e-10).unwrap();
        assert!(sym.verify_claim(MatClaim::AntiSymmetric, 1e-10).is_err());

        let rot = Mat::from_rows(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        rot.verify_claim(MatClaim::Unitary, 1e-10).unwrap();
        rot.verify_claim(MatClaim::AntiSymmetric, 1e-10).unwrap();
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = Mat::from_rows(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.rank(1e-12), 1);
        let ns = m.null_space(1e-12);
        assert_eq!(ns.ncols(), 1);
        let v = ns.inner().column(0).clone_owned();
        let img = m.mul_vec(&v);
        assert!(img.norm() < 1e-12);
    }

    #[test]
    fn solve_round_trip() {
        let a = Mat::from_rows(2, 2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let b = Mat::from_rows(2, 1, &[1.0, 2.0]).unwrap();
        let x = a.solve(&b).unwrap();
        assert!(a.mul(&x).sub(&b).norm_fro() < 1e-12);
    }

    #[test]
    fn complex_arithmetic() {
        let i = C::new(0.0, 1.0);
        let m = Mat::from_rows_complex(2, 2, &[i, C::new(0.0, 0.0), C::new(0.0, 0.0), -i]).unwrap();
        assert!(!m.is_real(1e-12));
        assert!((m.trace() - C::new(0.0, 0.0)).norm() < 1e-15);
        m.verify_claim(MatClaim::AntiSymmetric, 1e-10).unwrap_err();
        m.verify_claim(MatClaim::Unitary, 1e-10).unwrap();
    }
}
