//! Euler elements, the 3-grading they induce, and the associated maps:
//! the involution `τ_h` and the order-4 Wick rotation `κ_h`.
//!
//! An Euler element has `ad h` nonzero, diagonalizable, with spectrum in
//! `{−1, 0, 1}`. Its spectral projections are polynomial in `ad h`:
//!
//! ```text
//! P₊ = (A² + A)/2,   P₀ = I − A²,   P₋ = (A² − A)/2,   A = ad h,
//! ```
//!
//! which makes `τ_h = P₀ − P₊ − P₋` involutive by construction. The complex
//! exponential `e^{πi·ad h}` serves as an independent oracle in the tests.

use crate::liealg::{ad_coords, bracket, AlgElement, LieError, MatrixLieAlgebra};
use crate::numkernel::{eig, Mat, NumError, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EulerError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("element is not an Euler element (ad spectrum not in {{-1,0,1}} or not semisimple)")]
    NotEuler,
    #[error("map is not involutive (residual {residual:.3e})")]
    NotInvolutive { residual: f64 },
    #[error("map is not an automorphism (bracket residual {residual:.3e})")]
    NotAutomorphism { residual: f64 },
    #[error("grading projections failed validation: {0}")]
    BadGrading(String),
}

/// An involutive Lie algebra automorphism, as a matrix on coordinates.
#[derive(Debug, Clone)]
pub struct InvolutionMap {
    algebra: Arc<MatrixLieAlgebra>,
    matrix: DMatrix<f64>,
    label: String,
}

impl InvolutionMap {
    /// Validates involutivity and the automorphism property (the latter on
    /// seeded random pairs) before accepting the map.
    pub fn new(
        algebra: &Arc<MatrixLieAlgebra>,
        matrix: DMatrix<f64>,
        label: impl Into<String>,
    ) -> Result<Self, EulerError> {
        let tol = Tolerances::default();
        let n = algebra.dim();
        let sq_resid = (&matrix * &matrix - DMatrix::<f64>::identity(n, n)).norm();
        if sq_resid > tol.resid {
            return Err(EulerError::NotInvolutive { residual: sq_resid });
        }
        let this = InvolutionMap {
            algebra: Arc::clone(algebra),
            matrix,
            label: label.into(),
        };
        let resid = this.automorphism_residual(24, 0x5eed);
        if resid > 1e-8 {
            return Err(EulerError::NotAutomorphism { residual: resid });
        }
        Ok(this)
    }

    /// Conjugation `X ↦ s X s⁻¹` by a fixed group element, as a coordinate map.
    pub fn from_conjugation(
        algebra: &Arc<MatrixLieAlgebra>,
        s: &Mat,
        label: impl Into<String>,
    ) -> Result<Self, EulerError> {
        let s_inv = s.try_inverse()?;
        let n = algebra.dim();
        let mut matrix = DMatrix::<f64>::zeros(n, n);
        for (j, b) in algebra.basis().iter().enumerate() {
            let image = s.mul(b).mul(&s_inv);
            let col = algebra.coords_of(&image)?;
            matrix.set_column(j, col.coords());
        }
        Self::new(algebra, matrix, label)
    }

    /// The flip `(x, y) ↦ (y, x)` on a direct sum of two copies of the same
    /// algebra (factors of equal dimension).
    pub fn flip(sum_algebra: &Arc<MatrixLieAlgebra>) -> Result<Self, EulerError> {
        let n = sum_algebra.dim();
        assert!(n % 2 == 0, "flip needs an even-dimensional direct sum");
        let half = n / 2;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..half {
            m[(i, half + i)] = 1.0;
            m[(half + i, i)] = 1.0;
        }
        Self::new(sum_algebra, m, "flip")
    }

    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apply(&self, x: &AlgElement) -> AlgElement {
        self.algebra
            .element_from_vec(&self.matrix * x.coords())
            .expect("involution preserves dimension")
    }

    /// Worst bracket residual `‖σ[x,y] − [σx, σy]‖` over seeded random pairs.
    pub fn automorphism_residual(&self, pairs: usize, seed: u64) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = self.algebra.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let x = self
                .algebra
                .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
                .expect("finite");
            let y = self
                .algebra
                .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
                .expect("finite");
            let lhs = self.apply(&bracket(&x, &y).expect("same algebra"));
            let rhs = bracket(&self.apply(&x), &self.apply(&y)).expect("same algebra");
            worst = worst.max((lhs.coords() - rhs.coords()).norm());
        }
        worst
    }
}

/// The three spectral projections of `ad h` for an Euler element `h`.
#[derive(Debug, Clone)]
pub struct Grading3 {
    h: AlgElement,
    p_minus: DMatrix<f64>,
    p_zero: DMatrix<f64>,
    p_plus: DMatrix<f64>,
}

impl Grading3 {
    pub fn h(&self) -> &AlgElement {
        &self.h
    }

    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        self.h.algebra()
    }

    pub fn p_minus(&self) -> &DMatrix<f64> {
        &self.p_minus
    }

    pub fn p_zero(&self) -> &DMatrix<f64> {
        &self.p_zero
    }

    pub fn p_plus(&self) -> &DMatrix<f64> {
        &self.p_plus
    }

    pub fn project(&self, degree: i32, x: &AlgElement) -> AlgElement {
        let p = match degree {
            -1 => &self.p_minus,
            0 => &self.p_zero,
            1 => &self.p_plus,
            _ => panic!("grading degree must be -1, 0 or 1"),
        };
        self.algebra()
            .element_from_vec(p * x.coords())
            .expect("projection preserves dimension")
    }

    /// Dimensions `(dim g₋₁, dim g₀, dim g₊₁)` from projection ranks.
    pub fn dims(&self) -> (usize, usize, usize) {
        let r = |p: &DMatrix<f64>| p.trace().round() as usize;
        (r(&self.p_minus), r(&self.p_zero), r(&self.p_plus))
    }

    /// Worst residual of `‖P_k [P_i x, P_j y]‖` over sampled pairs for all
    /// k ≠ i + j (with `P_k = 0` when `|k| > 1`).
    pub fn bracket_grading_residual(&self, pairs: usize, seed: u64) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let alg = self.algebra();
        let n = alg.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let x = alg
                .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
                .expect("finite");
            let y = alg
                .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
                .expect("finite");
            for i in [-1i32, 0, 1] {
                for j in [-1i32, 0, 1] {
                    let br = bracket(&self.project(i, &x), &self.project(j, &y))
                        .expect("same algebra");
                    let target = i + j;
                    for k in [-1i32, 0, 1] {
                        if k != target {
                            worst = worst.max(self.project(k, &br).norm());
                        }
                    }
                    if target.abs() > 1 {
                        // The bracket must vanish entirely.
                        worst = worst.max(br.norm());
                    }
                }
            }
        }
        worst
    }
}

/// True iff `ad h` is nonzero, diagonalizable, and every eigenvalue lies
/// within the clustering tolerance of `{−1, 0, 1}`.
pub fn is_euler(h: &AlgElement) -> bool {
    let tol = Tolerances::default();
    let adm = crate::liealg::ad(h);
    if adm.norm_fro() <= tol.spec {
        return false;
    }
    match eig(&adm) {
        Ok(s) => {
            s.diagonalizable
                && s.eigenvalues.iter().all(|l| {
                    l.im.abs() <= tol.clust
                        && [-1.0, 0.0, 1.0].iter().any(|t| (l.re - t).abs() <= tol.clust)
                })
        }
        Err(_) => false,
    }
}

/// The 3-grading induced by an Euler element.
pub fn grading(h: &AlgElement) -> Result<Grading3, EulerError> {
    if !is_euler(h) {
        return Err(EulerError::NotEuler);
    }
    let tol = Tolerances::default();
    let a = ad_coords(h);
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let p_plus = (&a2 + &a) * 0.5;
    let p_minus = (&a2 - &a) * 0.5;
    let p_zero = &id - &a2;

    let sum_resid = (&p_plus + &p_minus + &p_zero - &id).norm();
    if sum_resid > tol.resid {
        return Err(EulerError::BadGrading(format!(
            "projection sum residual {sum_resid:.3e}"
        )));
    }
    for (label, p) in [("P-", &p_minus), ("P0", &p_zero), ("P+", &p_plus)] {
        let idem = (p * p - p).norm();
        if idem > tol.resid {
            return Err(EulerError::BadGrading(format!(
                "{label} idempotency residual {idem:.3e}"
            )));
        }
    }
    for (j, p) in [(-1.0, &p_minus), (0.0, &p_zero), (1.0, &p_plus)] {
        let eigen_resid = (&a * p - p * j).norm();
        if eigen_resid > 1e-8 * a.norm().max(1.0) {
            return Err(EulerError::BadGrading(format!(
                "eigenprojection residual {eigen_resid:.3e} at degree {j}"
            )));
        }
    }

    let g3 = Grading3 {
        h: h.clone(),
        p_minus,
        p_zero,
        p_plus,
    };
    let br = g3.bracket_grading_residual(12, 0x61);
    if br > 1e-8 {
        return Err(EulerError::BadGrading(format!(
            "bracket grading residual {br:.3e}"
        )));
    }
    Ok(g3)
}

/// The involution `τ_h = e^{πi·ad h}`, realized as `P₀ − P₊ − P₋`.
pub fn tau_h(g3: &Grading3) -> InvolutionMap {
    let m = &g3.p_zero - &g3.p_plus - &g3.p_minus;
    InvolutionMap::new(g3.algebra(), m, format!("tau_h[{}]", g3.algebra().name()))
        .expect("spectral projections give an exact involution")
}

/// The Wick rotation `κ_h = e^{−(πi/2)·ad h}` on complexified coordinates:
/// acts as `(i, 1, −i)` on the degrees `(−1, 0, +1)`. Order 4, `κ_h² = τ_h`.
pub fn kappa_h(g3: &Grading3) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let n = g3.p_zero.nrows();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] = Complex64::from(g3.p_zero[(r, c)])
                + i * g3.p_minus[(r, c)]
                - i * g3.p_plus[(r, c)];
        }
    }
    m
}
