//! Finite-dimensional modular pairs `(Δ, J)` and standard subspaces.
//!
//! `ℂⁿ` is treated as `ℝ^{2n}` with stacked real and imaginary parts, so an
//! antilinear map like the conjugation `J` becomes an honest real matrix
//! that anticommutes with the complex-structure matrix `i ↦ J_struct`. A
//! modular pair consists of a positive operator `Δ` and a conjugation `J`
//! with `JΔJ = Δ⁻¹`; the associated standard subspace is the fixed space
//! `V = Fix(JΔ^{1/2})`, a plain real eigenproblem in this encoding.
//!
//! The reverse direction is also implemented: from a standard subspace the
//! closed operator `σ(x + iy) = x − iy` (`x, y ∈ V`) is assembled and its
//! polar decomposition recovers `(Δ, J)`.

use crate::numkernel::{expm, null_space_real, Mat, NumError, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModularError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("Delta must be hermitian positive definite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },
    #[error("J is not an antilinear involutive isometry (residual {residual:.3e})")]
    BadConjugation { residual: f64 },
    #[error("modular relation JΔJ = Δ⁻¹ violated (residual {residual:.3e})")]
    ModularRelation { residual: f64 },
    #[error("flow generator is not J-symmetric (residual {residual:.3e})")]
    NotJSymmetric { residual: f64 },
    #[error("fixed space has real dimension {got}, expected {want}")]
    WrongFixedDimension { want: usize, got: usize },
    #[error("subspace basis is not real-linearly independent")]
    DependentBasis,
    #[error("subspace is not standard; cannot recover a modular pair")]
    NotStandard,
}

/// The complex-structure matrix: multiplication by `i` on `ℝ^{2n}`.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = -1.0;
        j[(n + k, k)] = 1.0;
    }
    j
}

/// Realification of a complex-linear map: `[[Re A, −Im A], [Im A, Re A]]`.
pub fn to_real_linear(a: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = a[(r, c)].re;
            out[(r, c + n)] = -a[(r, c)].im;
            out[(r + n, c)] = a[(r, c)].im;
            out[(r + n, c + n)] = a[(r, c)].re;
        }
    }
    out
}

/// Inverse of [`to_real_linear`]; fails when the block structure is broken.
pub fn to_complex_linear(a: &DMatrix<f64>, tol: f64) -> Option<DMatrix<Complex64>> {
    let n2 = a.nrows();
    if n2 % 2 != 0 {
        return None;
    }
    let n = n2 / 2;
    let mut out = DMatrix::zeros(n, n);
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let re = a[(r, c)];
            let im = a[(r + n, c)];
            worst = worst.max((a[(r + n, c + n)] - re).abs());
            worst = worst.max((a[(r, c + n)] + im).abs());
            out[(r, c)] = Complex64::new(re, im);
        }
    }
    if worst > tol * a.norm().max(1.0) {
        return None;
    }
    Some(out)
}

/// The standard entrywise conjugation `z ↦ conj(z)` as a real matrix.
pub fn conjugation_matrix(n: usize) -> DMatrix<f64> {
    let mut c = DMatrix::identity(2 * n, 2 * n);
    for k in n..2 * n {
        c[(k, k)] = -1.0;
    }
    c
}

fn hermitian_eigen(a: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let se = a.clone().symmetric_eigen();
    (se.eigenvalues, se.eigenvectors)
}

/// `Δ^p` for hermitian positive `Δ` via the spectral calculus.
fn hermitian_power(a: &DMatrix<Complex64>, p: f64) -> DMatrix<Complex64> {
    let (vals, vecs) = hermitian_eigen(a);
    let d = DMatrix::from_diagonal(&vals.map(|l| Complex64::from(l.powf(p))));
    &vecs * d * vecs.adjoint()
}

/// `Δ^{it}` via the spectral calculus.
fn hermitian_power_it(a: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let (vals, vecs) = hermitian_eigen(a);
    let d = DMatrix::from_diagonal(&vals.map(|l| Complex64::new(0.0, t * l.ln()).exp()));
    &vecs * d * vecs.adjoint()
}

/// A modular pair: a positive operator and a conjugation satisfying the
/// modular relation.
#[derive(Debug, Clone)]
pub struct ModularPair {
    delta: DMatrix<Complex64>,
    j_real: DMatrix<f64>,
    n: usize,
}

impl ModularPair {
    pub fn new(delta: Mat, j_real: DMatrix<f64>) -> Result<Self, ModularError> {
        let tol = Tolerances::default();
        let n = delta.ensure_square()?;
        let d = delta.inner().clone();
        // Hermitian positive definite.
        let herm_resid = (&d - d.adjoint()).norm();
        if herm_resid > tol.resid * d.norm().max(1.0) {
            return Err(ModularError::NotPositive { min_eig: f64::NAN });
        }
        let (vals, _) = hermitian_eigen(&d);
        let min_eig = vals.iter().cloned().fold(f64::MAX, f64::min);
        if min_eig <= 0.0 {
            return Err(ModularError::NotPositive { min_eig });
        }
        // J: involutive antilinear isometry.
        if j_real.nrows() != 2 * n || j_real.ncols() != 2 * n {
            return Err(ModularError::BadConjugation { residual: f64::NAN });
        }
        let id = DMatrix::<f64>::identity(2 * n, 2 * n);
        let jsq = (&j_real * &j_real - &id).norm();
        let ortho = (j_real.transpose() * &j_real - &id).norm();
        let jc = complex_structure(n);
        let antilinear = (&j_real * &jc + &jc * &j_real).norm();
        let residual = jsq.max(ortho).max(antilinear);
        if residual > tol.resid * j_real.norm().max(1.0) {
            return Err(ModularError::BadConjugation { residual });
        }
        // Modular relation on realifications.
        let d_real = to_real_linear(&d);
        let d_inv = to_real_linear(&hermitian_power(&d, -1.0));
        let rel = (&j_real * &d_real * &j_real - &d_inv).norm();
        if rel > 1e-9 * d_real.norm().max(1.0) * d_inv.norm().max(1.0) {
            return Err(ModularError::ModularRelation { residual: rel });
        }
        Ok(ModularPair {
            delta: d,
            j_real,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &DMatrix<Complex64> {
        &self.delta
    }

    pub fn j_real(&self) -> &DMatrix<f64> {
        &self.j_real
    }

    /// `Δ^{1/2}` as a real-linear map.
    pub fn delta_sqrt_real(&self) -> DMatrix<f64> {
        to_real_linear(&hermitian_power(&self.delta, 0.5))
    }

    /// `Δ^{it}` as a real-linear map.
    pub fn delta_it_real(&self, t: f64) -> DMatrix<f64> {
        to_real_linear(&hermitian_power_it(&self.delta, t))
    }
}

/// A real-linear subspace of `ℂⁿ ≅ ℝ^{2n}`, stored as basis columns.
#[derive(Debug, Clone)]
pub struct RealSubspace {
    /// `2n × k` matrix of basis columns.
    pub basis: DMatrix<f64>,
    pub n_complex: usize,
}

impl RealSubspace {
    pub fn new(basis: DMatrix<f64>, n_complex: usize) -> Result<Self, ModularError> {
        assert_eq!(basis.nrows(), 2 * n_complex);
        let rank = basis.clone().svd(false, false).rank(1e-10);
        if rank < basis.ncols() {
            return Err(ModularError::DependentBasis);
        }
        Ok(RealSubspace { basis, n_complex })
    }

    pub fn dim_real(&self) -> usize {
        self.basis.ncols()
    }

    /// Least-squares membership residual of a vector in the span.
    pub fn off_span_residual(&self, v: &DVector<f64>) -> f64 {
        let bt = self.basis.transpose();
        let gram = &bt * &self.basis;
        let coeffs = gram
            .lu()
            .solve(&(&bt * v))
            .expect("independent basis has invertible Gram matrix");
        (&self.basis * coeffs - v).norm()
    }

    /// Rank of the combined family `[B | i·B]`.
    fn rank_with_i(&self) -> usize {
        let n2 = 2 * self.n_complex;
        let k = self.basis.ncols();
        let jc = complex_structure(self.n_complex);
        let mut combined = DMatrix::zeros(n2, 2 * k);
        combined.view_mut((0, 0), (n2, k)).copy_from(&self.basis);
        combined
            .view_mut((0, k), (n2, k))
            .copy_from(&(&jc * &self.basis));
        combined.svd(false, false).rank(1e-8)
    }
}

/// The fixed space of `JΔ^{1/2}`, which is a standard subspace.
pub fn standard_subspace(pair: &ModularPair) -> Result<RealSubspace, ModularError> {
    let n = pair.n();
    let s = pair.j_real() * pair.delta_sqrt_real();
    let shifted = &s - DMatrix::<f64>::identity(2 * n, 2 * n);
    let basis = null_space_real(&shifted, 1e-8);
    let k = basis.ncols();
    if k != n {
        return Err(ModularError::WrongFixedDimension { want: n, got: k });
    }
    RealSubspace::new(basis, n)
}

/// Standardness: `dim_ℝ V = n`, `V + iV = ℂⁿ`, `V ∩ iV = {0}` (all by rank
/// computations at tolerance 1e−8).
pub fn check_standard(v: &RealSubspace) -> bool {
    let n = v.n_complex;
    if v.dim_real() != n {
        return false;
    }
    // dim(V + iV) = 2n forces dim(V ∩ iV) = dim V + dim iV − dim(V+iV) = 0.
    v.rank_with_i() == 2 * n
}

/// Builds the modular pair generated by a one-parameter flow: given the
/// skew-hermitian generator `A` with `J A J = A`, returns
/// `Δ = e^{2πiA}` paired with `J`.
pub fn bgl_from_flow(generator: &Mat, j_real: &DMatrix<f64>) -> Result<ModularPair, ModularError> {
    let tol = Tolerances::default();
    let _ = generator.ensure_square()?;
    let a = generator.inner().clone();
    let skew = (&a + a.adjoint()).norm();
    if skew > tol.resid * a.norm().max(1.0) {
        return Err(ModularError::NotJSymmetric { residual: skew });
    }
    let a_real = to_real_linear(&a);
    let sym = (j_real * &a_real * j_real - &a_real).norm();
    if sym > 1e-9 * a_real.norm().max(1.0) {
        return Err(ModularError::NotJSymmetric { residual: sym });
    }
    let exponent = Mat::new(a * Complex64::new(0.0, 2.0 * std::f64::consts::PI))
        .expect("finite generator");
    let delta = expm(&exponent)?;
    // Positivity failure here would mean the generator was not i·selfadjoint.
    ModularPair::new(delta, j_real.clone())
}

/// `Δ^{it}·V = V` at the sampled times, by span-membership of the images
/// of every basis vector.
pub fn modular_group_invariance(pair: &ModularPair, v: &RealSubspace, t_samples: &[f64]) -> bool {
    for &t in t_samples {
        let u = pair.delta_it_real(t);
        for j in 0..v.basis.ncols() {
            let image = &u * v.basis.column(j).clone_owned();
            if v.off_span_residual(&image) > 1e-8 * image.norm().max(1.0) {
                return false;
            }
        }
    }
    true
}

/// The symplectic commutant `V′ = {w : Im⟨v, w⟩ = 0 for all v ∈ V}`,
/// computed as the kernel of `Bᵀ·Ω` with `Ω = −J_struct`.
pub fn commutant(v: &RealSubspace) -> RealSubspace {
    let n = v.n_complex;
    let omega = -complex_structure(n);
    let constraint = v.basis.transpose() * omega;
    let basis = null_space_real(&constraint, 1e-10);
    RealSubspace::new(basis, n).expect("null space basis is orthonormal")
}

/// Whether two subspaces of the same ambient space coincide.
pub fn same_span(a: &RealSubspace, b: &RealSubspace) -> bool {
    if a.dim_real() != b.dim_real() {
        return false;
    }
    let mut combined = DMatrix::zeros(a.basis.nrows(), a.dim_real() + b.dim_real());
    combined
        .view_mut((0, 0), (a.basis.nrows(), a.dim_real()))
        .copy_from(&a.basis);
    combined
        .view_mut((0, a.dim_real()), (b.basis.nrows(), b.dim_real()))
        .copy_from(&b.basis);
    let rank = combined.svd(false, false).rank(1e-8);
    rank == a.dim_real()
}

/// Applies `J` to a subspace.
pub fn apply_j(pair: &ModularPair, v: &RealSubspace) -> RealSubspace {
    RealSubspace::new(pair.j_real() * &v.basis, v.n_complex).expect("J is invertible")
}

/// Recovers the modular pair of a standard subspace from the polar
/// decomposition of `σ(x + iy) = x − iy`.
pub fn recover_pair(v: &RealSubspace) -> Result<ModularPair, ModularError> {
    let n = v.n_complex;
    if !check_standard(v) {
        return Err(ModularError::NotStandard);
    }
    let jc = complex_structure(n);
    // Columns of [B | iB] form a real basis of ℂⁿ; σ is +1 on B, −1 on iB.
    let mut full = DMatrix::zeros(2 * n, 2 * n);
    full.view_mut((0, 0), (2 * n, n)).copy_from(&v.basis);
    full.view_mut((0, n), (2 * n, n))
        .copy_from(&(&jc * &v.basis));
    let mut sign = DMatrix::<f64>::identity(2 * n, 2 * n);
    for k in n..2 * n {
        sign[(k, k)] = -1.0;
    }
    let full_inv = full
        .clone()
        .try_inverse()
        .ok_or(ModularError::NotStandard)?;
    let sigma = &full * sign * full_inv;
    // Δ = σ*σ (the adjoint of an antilinear map is its real transpose).
    let delta_real = sigma.transpose() * &sigma;
    let delta = to_complex_linear(&delta_real, 1e-8).ok_or(ModularError::NotStandard)?;
    let sqrt_inv = to_real_linear(&hermitian_power(&delta, -0.5));
    let j_real = sigma * sqrt_inv;
    ModularPair::new(
        Mat::new(delta).expect("finite recovered Delta"),
        j_real,
    )
}

/// A random valid modular pair: `J = U·conj·U*` for a random unitary `U`
/// and `Δ = e^{2πiA}` for a random `J`-symmetric skew-hermitian `A`.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> ModularPair {
    // Random unitary from the QR of a complex Gaussian-ish matrix.
    let raw = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let qr = raw.qr();
    let u = qr.q();
    let u_real = to_real_linear(&u);
    let j_real = &u_real * conjugation_matrix(n) * to_real_linear(&u.adjoint());

    // Random hermitian B, anti-symmetrized so that J B J = −B.
    let mut b = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    b = (&b + b.adjoint()) * Complex64::from(0.5);
    let b_real = to_real_linear(&b);
    let b_anti_real = (&b_real - &j_real * &b_real * &j_real) * 0.5;
    let mut b_anti =
        to_complex_linear(&b_anti_real, 1e-9).expect("difference of complex-linear maps");
    // Keep Δ well conditioned.
    let norm = b_anti.norm();
    if norm > 0.25 {
        b_anti *= Complex64::from(0.25 / norm);
    }
    let a = b_anti * Complex64::new(0.0, 1.0);
    bgl_from_flow(&Mat::new(a).expect("finite generator"), &j_real)
        .expect("construction satisfies the pair axioms")
}
