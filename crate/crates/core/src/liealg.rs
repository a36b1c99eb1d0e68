//! Matrix Lie algebras as first-class objects.
//!
//! An algebra is a real span of (possibly complex) square matrices, stored
//! together with its structure constants, Killing form and the adjoint
//! representation on coordinates. Elements are coordinate vectors against
//! the fixed basis; their matrix representatives are kept available so the
//! structure-constant bracket and the matrix commutator can cross-check
//! each other.

use crate::numkernel::{eig, Mat, NumError, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("basis is not closed under the bracket: [b{i}, b{j}] has off-span residual {residual:.3e}")]
    ClosureViolation { i: usize, j: usize, residual: f64 },
    #[error("Jacobi identity violated with residual {residual:.3e}")]
    JacobiViolation { residual: f64 },
    #[error("basis matrices must be square and of equal size")]
    BadBasis,
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("matrix lies outside the algebra span (residual {residual:.3e})")]
    NotInSpan { residual: f64 },
    #[error("unsupported builtin algebra: {0}")]
    UnsupportedBuiltin(String),
    #[error("coordinates contain a non-finite entry")]
    NonFiniteCoords,
}

/// A finite-dimensional real matrix Lie algebra.
#[derive(Debug)]
pub struct MatrixLieAlgebra {
    name: String,
    basis: Vec<Mat>,
    matrix_size: usize,
    /// `ad_basis[i][(k, j)] = c_{ij}^k`; this is `ad b_i` on coordinates.
    ad_basis: Vec<DMatrix<f64>>,
    killing: DMatrix<f64>,
    /// Inverse Gram matrix of the basis, for span projections.
    gram_inv: DMatrix<f64>,
}

impl MatrixLieAlgebra {
    /// Builds and verifies an algebra from a basis. Checks closure,
    /// antisymmetry and the Jacobi identity at construction time.
    pub fn new(name: impl Into<String>, basis: Vec<Mat>) -> Result<Arc<Self>, LieError> {
        Self::with_tolerances(name, basis, &Tolerances::default())
    }

    pub fn with_tolerances(
        name: impl Into<String>,
        basis: Vec<Mat>,
        tol: &Tolerances,
    ) -> Result<Arc<Self>, LieError> {
        let name = name.into();
        let n = basis.len();
        if n == 0 {
            return Err(LieError::BadBasis);
        }
        let m = basis[0].nrows();
        for b in &basis {
            if !b.is_square() || b.nrows() != m {
                return Err(LieError::BadBasis);
            }
        }

        let gram_inv = gram_inverse(&basis).ok_or(LieError::DependentBasis)?;

        // Structure constants from span projections of pairwise brackets.
        let mut ad_basis = vec![DMatrix::<f64>::zeros(n, n); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let br = basis[i].commutator(&basis[j]);
                let (coords, residual) = project_onto_span(&basis, &gram_inv, &br);
                let scale = br.norm_fro().max(1.0);
                if residual > tol.resid * scale {
                    return Err(LieError::ClosureViolation { i, j, residual });
                }
                for k in 0..n {
                    ad_basis[i][(k, j)] = coords[k];
                }
            }
        }
        // Antisymmetry c_{ij}^k = -c_{ji}^k holds up to projection error;
        // symmetrize exactly so downstream identities are clean.
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let avg = 0.5 * (ad_basis[i][(k, j)] - ad_basis[j][(k, i)]);
                    ad_basis[i][(k, j)] = avg;
                    ad_basis[j][(k, i)] = -avg;
                }
            }
        }

        // Jacobi identity on coordinates: ad[b_i,b_j] = [ad b_i, ad b_j].
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut lhs = DMatrix::<f64>::zeros(n, n);
                for k in 0..n {
                    let c = ad_basis[i][(k, j)];
                    if c != 0.0 {
                        lhs += &ad_basis[k] * c;
                    }
                }
                let rhs = &ad_basis[i] * &ad_basis[j] - &ad_basis[j] * &ad_basis[i];
                worst = worst.max((lhs - rhs).norm());
            }
        }
        if worst > tol.resid * 10.0 {
            return Err(LieError::JacobiViolation { residual: worst });
        }

        let mut killing = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = (&ad_basis[i] * &ad_basis[j]).trace();
                killing[(i, j)] = v;
                killing[(j, i)] = v;
            }
        }

        Ok(Arc::new(MatrixLieAlgebra {
            name,
            basis,
            matrix_size: m,
            ad_basis,
            killing,
            gram_inv,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix_size(&self) -> usize {
        self.matrix_size
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn killing(&self) -> &DMatrix<f64> {
        &self.killing
    }

    pub fn killing_form(&self, x: &AlgElement, y: &AlgElement) -> f64 {
        (x.coords.transpose() * &self.killing * &y.coords)[(0, 0)]
    }

    /// The basis images under `ad`, i.e. the structure-constant tensor.
    pub fn ad_basis(&self) -> &[DMatrix<f64>] {
        &self.ad_basis
    }

    /// Worst Jacobi residual over all basis pairs, for diagnostics.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut lhs = DMatrix::<f64>::zeros(n, n);
                for k in 0..n {
                    let c = self.ad_basis[i][(k, j)];
                    if c != 0.0 {
                        lhs += &self.ad_basis[k] * c;
                    }
                }
                let rhs = &self.ad_basis[i] * &self.ad_basis[j]
                    - &self.ad_basis[j] * &self.ad_basis[i];
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    pub fn element(self: &Arc<Self>, coords: &[f64]) -> Result<AlgElement, LieError> {
        if coords.len() != self.dim() {
            return Err(LieError::AlgebraMismatch);
        }
        self.element_from_vec(DVector::from_column_slice(coords))
    }

    pub fn element_from_vec(
        self: &Arc<Self>,
        coords: DVector<f64>,
    ) -> Result<AlgElement, LieError> {
        if coords.len() != self.dim() {
            return Err(LieError::AlgebraMismatch);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(LieError::NonFiniteCoords);
        }
        Ok(AlgElement {
            algebra: Arc::clone(self),
            coords,
        })
    }

    pub fn zero(self: &Arc<Self>) -> AlgElement {
        AlgElement {
            algebra: Arc::clone(self),
            coords: DVector::zeros(self.dim()),
        }
    }

    /// Coordinates of a matrix in the basis span; errors if it lies outside.
    pub fn coords_of(self: &Arc<Self>, m: &Mat) -> Result<AlgElement, LieError> {
        let (coords, residual) = project_onto_span(&self.basis, &self.gram_inv, m);
        if residual > 1e-8 * m.norm_fro().max(1.0) {
            return Err(LieError::NotInSpan { residual });
        }
        self.element_from_vec(DVector::from_vec(coords))
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>, LieError> {
        let ma = a.matrix_size;
        let mb = b.matrix_size;
        let mut basis = Vec::with_capacity(a.dim() + b.dim());
        for x in &a.basis {
            let mut block = DMatrix::<Complex64>::zeros(ma + mb, ma + mb);
            block.view_mut((0, 0), (ma, ma)).copy_from(x.inner());
            basis.push(Mat::new(block)?);
        }
        for y in &b.basis {
            let mut block = DMatrix::<Complex64>::zeros(ma + mb, ma + mb);
            block.view_mut((ma, ma), (mb, mb)).copy_from(y.inner());
            basis.push(Mat::new(block)?);
        }
        Self::new(format!("{}+{}", a.name, b.name), basis)
    }
}

/// An element of a [`MatrixLieAlgebra`], stored as real coordinates.
#[derive(Debug, Clone)]
pub struct AlgElement {
    algebra: Arc<MatrixLieAlgebra>,
    coords: DVector<f64>,
}

impl AlgElement {
    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coords.norm() <= tol
    }

    pub fn scale(&self, s: f64) -> AlgElement {
        AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords: &self.coords * s,
        }
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement, LieError> {
        self.same_algebra(other)?;
        Ok(AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords: &self.coords + &other.coords,
        })
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement, LieError> {
        self.same_algebra(other)?;
        Ok(AlgElement {
            algebra: Arc::clone(&self.algebra),
            coords: &self.coords - &other.coords,
        })
    }

    /// The matrix representative `Σ x_i b_i`.
    pub fn matrix(&self) -> Mat {
        let m = self.algebra.matrix_size;
        let mut acc = DMatrix::<Complex64>::zeros(m, m);
        for (i, b) in self.algebra.basis.iter().enumerate() {
            let c = self.coords[i];
            if c != 0.0 {
                acc += b.inner() * Complex64::from(c);
            }
        }
        Mat::new(acc).expect("finite element matrix")
    }

    fn same_algebra(&self, other: &AlgElement) -> Result<(), LieError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(LieError::AlgebraMismatch)
        }
    }
}

/// Bracket via structure constants. Agrees with the matrix commutator of
/// the representatives; tests exploit the two routes as an oracle pair.
pub fn bracket(x: &AlgElement, y: &AlgElement) -> Result<AlgElement, LieError> {
    x.same_algebra(y)?;
    let adx = ad_coords(x);
    Ok(AlgElement {
        algebra: Arc::clone(&x.algebra),
        coords: adx * &y.coords,
    })
}

/// The matrix of `ad x` in the stored basis.
pub fn ad(x: &AlgElement) -> Mat {
    Mat::from_real(ad_coords(x)).expect("finite ad matrix")
}

pub(crate) fn ad_coords(x: &AlgElement) -> DMatrix<f64> {
    let n = x.algebra.dim();
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let c = x.coords[i];
        if c != 0.0 {
            acc += &x.algebra.ad_basis[i] * c;
        }
    }
    acc
}

/// True iff `ad x` is semisimple with purely imaginary spectrum.
pub fn is_elliptic(x: &AlgElement) -> bool {
    spectral_predicate(x, |lam| lam.re.abs())
}

/// True iff `ad x` is semisimple with real spectrum.
pub fn is_hyperbolic(x: &AlgElement) -> bool {
    spectral_predicate(x, |lam| lam.im.abs())
}

fn spectral_predicate(x: &AlgElement, off_axis: impl Fn(&Complex64) -> f64) -> bool {
    let tol = Tolerances::default();
    let adm = ad(x);
    match eig(&adm) {
        Ok(s) => s.diagonalizable && s.eigenvalues.iter().all(|l| off_axis(l) <= tol.spec),
        Err(_) => false,
    }
}

fn gram_inverse(basis: &[Mat]) -> Option<DMatrix<f64>> {
    let n = basis.len();
    let mut gram = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = real_inner(&basis[i], &basis[j]);
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    // Reject numerically dependent bases before inverting.
    let svd = gram.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
    if smin <= 1e-12 * smax.max(1.0) {
        return None;
    }
    gram.try_inverse()
}

fn real_inner(a: &Mat, b: &Mat) -> f64 {
    a.adjoint().mul(b).trace().re
}

fn project_onto_span(basis: &[Mat], gram_inv: &DMatrix<f64>, m: &Mat) -> (Vec<f64>, f64) {
    let n = basis.len();
    let rhs = DVector::from_iterator(n, basis.iter().map(|b| real_inner(b, m)));
    let coords = gram_inv * rhs;
    let size = basis[0].nrows();
    let mut recon = DMatrix::<Complex64>::zeros(size, size);
    for (i, b) in basis.iter().enumerate() {
        recon += b.inner() * Complex64::from(coords[i]);
    }
    let residual = (m.inner() - recon).norm();
    (coords.as_slice().to_vec(), residual)
}

// ---------------------------------------------------------------------------
// Builtin catalog
// ---------------------------------------------------------------------------

/// Built-in algebra constructors covering the small real forms used by the
/// verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// sl(2, ℝ) with ordered basis (h, x₊, x₋).
    Sl2,
    /// so(2, d−1) on ℝ^{d+1} with the form x₀² + x₁² − x₂² − ... − x_d².
    So2 { d: usize },
    /// sp(4, ℝ).
    Sp4,
    /// su(p, q) as a real Lie algebra.
    Su { p: usize, q: usize },
}

/// Builds a verified catalog algebra.
pub fn builtin_algebra(which: Builtin) -> Result<Arc<MatrixLieAlgebra>, LieError> {
    match which {
        Builtin::Sl2 => {
            let h = Mat::from_rows(2, 2, &[0.5, 0.0, 0.0, -0.5])?;
            let xp = Mat::from_rows(2, 2, &[0.0, 1.0, 0.0, 0.0])?;
            let xm = Mat::from_rows(2, 2, &[0.0, 0.0, 1.0, 0.0])?;
            MatrixLieAlgebra::new("sl2(R)", vec![h, xp, xm])
        }
        Builtin::So2 { d } => {
            if !(2..=8).contains(&d) {
                return Err(LieError::UnsupportedBuiltin(format!(
                    "so(2,d-1) requires 2 <= d <= 8, got d={d}"
                )));
            }
            let n = d + 1;
            let signs: Vec<f64> = (0..n).map(|i| if i < 2 { 1.0 } else { -1.0 }).collect();
            let mut basis = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut m = DMatrix::<f64>::zeros(n, n);
                    m[(i, j)] = signs[j];
                    m[(j, i)] = -signs[i];
                    basis.push(Mat::from_real(m)?);
                }
            }
            MatrixLieAlgebra::new(format!("so(2,{})", d - 1), basis)
        }
        Builtin::Sp4 => {
            // X = [[A, B], [C, -A^T]] with B, C symmetric 2x2.
            let e = |i: usize, j: usize| {
                let mut m = DMatrix::<f64>::zeros(2, 2);
                m[(i, j)] = 1.0;
                m
            };
            let assemble = |a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>| {
                let mut m = DMatrix::<f64>::zeros(4, 4);
                m.view_mut((0, 0), (2, 2)).copy_from(a);
                m.view_mut((0, 2), (2, 2)).copy_from(b);
                m.view_mut((2, 0), (2, 2)).copy_from(c);
                m.view_mut((2, 2), (2, 2)).copy_from(&(-a.transpose()));
                m
            };
            let z = DMatrix::<f64>::zeros(2, 2);
            let mut basis = Vec::new();
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                basis.push(Mat::from_real(assemble(&e(i, j), &z, &z))?);
            }
            let syms = [e(0, 0), e(1, 1), e(0, 1) + e(1, 0)];
            for s in &syms {
                basis.push(Mat::from_real(assemble(&z, s, &z))?);
            }
            for s in &syms {
                basis.push(Mat::from_real(assemble(&z, &z, s))?);
            }
            MatrixLieAlgebra::new("sp4(R)", basis)
        }
        Builtin::Su { p, q } => {
            let n = p + q;
            if p == 0 || q == 0 || n > 4 {
                return Err(LieError::UnsupportedBuiltin(format!("su({p},{q})")));
            }
            let i = Complex64::new(0.0, 1.0);
            let s: Vec<f64> = (0..n).map(|k| if k < p { 1.0 } else { -1.0 }).collect();
            let mut basis = Vec::new();
            // Traceless imaginary diagonals.
            for k in 0..n - 1 {
                let mut m = DMatrix::<Complex64>::zeros(n, n);
                m[(k, k)] = i;
                m[(k + 1, k + 1)] = -i;
                basis.push(Mat::new(m)?);
            }
            // Off-diagonal pairs: X_{jk} = α, X_{kj} = −s_j s_k conj(α).
            for j in 0..n {
                for k in (j + 1)..n {
                    let mut m = DMatrix::<Complex64>::zeros(n, n);
                    m[(j, k)] = Complex64::from(1.0);
                    m[(k, j)] = Complex64::from(-s[j] * s[k]);
                    basis.push(Mat::new(m)?);
                    let mut m2 = DMatrix::<Complex64>::zeros(n, n);
                    m2[(j, k)] = i;
                    m2[(k, j)] = i * s[j] * s[k];
                    basis.push(Mat::new(m2)?);
                }
            }
            MatrixLieAlgebra::new(format!("su({p},{q})"), basis)
        }
    }
}

/// The boost Euler element of `so(2, d−1)`: `h·x = (0, x₂, x₁, 0, ..., 0)`.
pub fn so2_boost(alg: &Arc<MatrixLieAlgebra>) -> Result<AlgElement, LieError> {
    let n = alg.matrix_size();
    let mut h = DMatrix::<f64>::zeros(n, n);
    h[(1, 2)] = 1.0;
    h[(2, 1)] = 1.0;
    alg.coords_of(&Mat::from_real(h)?)
}

/// The canonical Euler element of a builtin algebra, when it has one.
pub fn builtin_euler_element(
    which: Builtin,
    alg: &Arc<MatrixLieAlgebra>,
) -> Result<AlgElement, LieError> {
    match which {
        Builtin::Sl2 => alg.element(&[1.0, 0.0, 0.0]),
        Builtin::So2 { .. } => so2_boost(alg),
        Builtin::Sp4 => {
            let h = Mat::from_rows(
                4,
                4,
                &[
                    0.5, 0.0, 0.0, 0.0, //
                    0.0, 0.5, 0.0, 0.0, //
                    0.0, 0.0, -0.5, 0.0, //
                    0.0, 0.0, 0.0, -0.5,
                ],
            )?;
            alg.coords_of(&h)
        }
        Builtin::Su { p, q } if p == q => {
            let n = p + q;
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for k in 0..p {
                m[(k, p + k)] = Complex64::from(0.5);
                m[(p + k, k)] = Complex64::from(0.5);
            }
            alg.coords_of(&Mat::new(m)?)
        }
        Builtin::Su { p, q } => Err(LieError::UnsupportedBuiltin(format!(
            "su({p},{q}) has no Euler element (not of tube type)"
        ))),
    }
}
