//! The SL(2,ℝ) group-type space: the real Olshanski semigroup
//! `S(C,h) = {g : h − Ad(g)h ∈ C}` and its equivalent characterizations.
//!
//! Four independent membership routes are implemented and cross-checked:
//!
//! 1. `in_s_via_ad`: the defining condition `h − Ad(g)h ∈ C`.
//! 2. `in_s_via_field`: the modular vector field condition
//!    `X_h(g) ∈ g.C`, evaluated through the left-trivialization identity
//!    `X_h(g) = g.(Ad(g)⁻¹h − h)`.
//! 3. `in_s_via_factor`: the polar factorization
//!    `g = exp(a·x₊) · g₀ · exp(b·x₋)` with `g₀` diagonal and `a, b ≥ 0`,
//!    solved in closed form from the matrix entries.
//! 4. `kms_member`: analytic continuation of the conjugation orbit to
//!    imaginary time: for each `t ∈ (0,π)` the element
//!    `s = e^{ith} g e^{−ith} ∈ SL(2,ℂ)` must admit a polar decomposition
//!    `s = u·e^{iy}` with `u` real and `y` in the open cone; `y` is
//!    recovered as `log(conj(s)⁻¹ s) / 2i`.
//!
//! The degenerate Euler element `(h₀, 0)` of `g ⊕ g` is covered as well:
//! its wedge domains are empty and its derived cones vanish exactly.

use crate::cones::{derived_cones, ConeError, ConeSpec, CoordGrading};
use crate::euler::{grading, EulerError, Grading3};
use crate::liealg::{builtin_algebra, is_elliptic, Builtin, LieError, MatrixLieAlgebra};
use crate::numkernel::{logm_principal, Mat, NumError, Tolerances};
use crate::report::{kms_grid, SeedStream, VerifyReport};
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("matrix has determinant {det}, expected 1")]
    NotUnimodular { det: f64 },
}

/// An element of SL(2,ℝ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2GroupElement {
    m: Matrix2<f64>,
}

impl Sl2GroupElement {
    pub fn new(m: Matrix2<f64>) -> Result<Self, GroupError> {
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-10 {
            return Err(GroupError::NotUnimodular { det });
        }
        Ok(Sl2GroupElement { m })
    }

    pub fn identity() -> Self {
        Sl2GroupElement {
            m: Matrix2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    /// Inverse via the adjugate; exact for determinant one.
    pub fn inverse(&self) -> Self {
        Sl2GroupElement {
            m: Matrix2::new(self.m[(1, 1)], -self.m[(0, 1)], -self.m[(1, 0)], self.m[(0, 0)]),
        }
    }

    pub fn mul(&self, other: &Sl2GroupElement) -> Self {
        Sl2GroupElement {
            m: self.m * other.m,
        }
    }

    /// `g♯ = τ_h(g)⁻¹` with `τ_h` the conjugation by `diag(1,−1)`.
    pub fn sharp(&self) -> Self {
        let delta = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let tau = delta * self.m * delta;
        Sl2GroupElement { m: tau }.inverse()
    }
}

/// An element of SL(2,ℂ).
#[derive(Debug, Clone, Copy)]
pub struct Sl2cElement {
    m: Matrix2<Complex64>,
}

impl Sl2cElement {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self, GroupError> {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if (det - Complex64::from(1.0)).norm() > 1e-10 {
            return Err(GroupError::NotUnimodular { det: det.norm() });
        }
        Ok(Sl2cElement { m })
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Sl2cElement {
            m: Matrix2::new(self.m[(1, 1)], -self.m[(0, 1)], -self.m[(1, 0)], self.m[(0, 0)]),
        }
    }

    pub fn conjugate_entries(&self) -> Self {
        Sl2cElement {
            m: self.m.map(|z| z.conj()),
        }
    }
}

/// Shared sl(2,ℝ) data: algebra, Euler element, oriented invariant cone and
/// its derived cones.
#[derive(Debug, Clone)]
pub struct Sl2Context {
    pub algebra: Arc<MatrixLieAlgebra>,
    pub grading: Grading3,
    pub cone: ConeSpec,
    pub c_plus: ConeSpec,
    pub c_minus: ConeSpec,
    pub c_c: ConeSpec,
}

impl Sl2Context {
    pub fn new() -> Result<Self, GroupError> {
        let algebra = builtin_algebra(Builtin::Sl2)?;
        let h = algebra.element(&[1.0, 0.0, 0.0])?;
        let grading = grading(&h)?;
        let cone = ConeSpec::sl2(1.0);
        let (c_plus, c_minus, c_c) = derived_cones(
            &cone,
            &CoordGrading::from(&grading),
            &Tolerances::default(),
        )?;
        Ok(Sl2Context {
            algebra,
            grading,
            cone,
            c_plus,
            c_minus,
            c_c,
        })
    }

    /// Euler element `h = ½ diag(1, −1)` as a matrix.
    pub fn h_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(0.5, 0.0, 0.0, -0.5)
    }
}

/// Coordinates `(2a, b, c)` of a traceless 2×2 matrix `[[a,b],[c,−a]]`
/// against the basis `(h, x₊, x₋)`.
fn sl2_coords(m: &Matrix2<f64>) -> DVector<f64> {
    DVector::from_column_slice(&[2.0 * m[(0, 0)], m[(0, 1)], m[(1, 0)]])
}

/// `Ad(g)h` as a 2×2 matrix.
fn adjoint_h(ctx: &Sl2Context, g: &Sl2GroupElement) -> Matrix2<f64> {
    g.matrix() * ctx.h_matrix() * g.inverse().matrix()
}

/// Membership `h − Ad(g)h ∈ C` (strict: in the open cone).
pub fn in_s_via_ad(ctx: &Sl2Context, g: &Sl2GroupElement, strict: bool) -> bool {
    let y = ctx.h_matrix() - adjoint_h(ctx, g);
    ctx.cone.member(&sl2_coords(&y), strict).unwrap_or(false)
}

/// Scale-normalized boundary proxy for the via-Ad predicate.
pub fn margin_via_ad(ctx: &Sl2Context, g: &Sl2GroupElement) -> f64 {
    let y = ctx.h_matrix() - adjoint_h(ctx, g);
    ctx.cone.margin(&sl2_coords(&y)).unwrap_or(-1.0)
}

/// The modular vector field condition `X_h(g) ∈ g.C`, computed through the
/// left trivialization `X_h(g) = g.(Ad(g)⁻¹h − h)`.
pub fn in_s_via_field(ctx: &Sl2Context, g: &Sl2GroupElement, strict: bool) -> bool {
    let y = adjoint_h(ctx, &g.inverse()) - ctx.h_matrix();
    ctx.cone.member(&sl2_coords(&y), strict).unwrap_or(false)
}

/// Outcome of the closed-form factorization `g = exp(a x₊) g₀ exp(b x₋)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorOutcome {
    pub member: bool,
    pub strict: bool,
    /// `x₊`-coefficient, when the factorization exists.
    pub a: Option<f64>,
    /// `x₋`-coefficient, when the factorization exists.
    pub b: Option<f64>,
    /// The `g22` entry vanished: no polar factorization (boundary case,
    /// reported as non-strict non-membership).
    pub singular: bool,
}

/// Attempts the factorization `g = exp(a·x₊)·diag(λ, 1/λ)·exp(b·x₋)` with
/// `a, b ≥ 0`. From the matrix entries: `λ = 1/g₂₂`, `a = g₁₂/g₂₂`,
/// `b = g₂₁/g₂₂`; the remaining entry is fixed by the determinant.
pub fn in_s_via_factor(g: &Sl2GroupElement) -> FactorOutcome {
    let m = g.matrix();
    let g22 = m[(1, 1)];
    if g22.abs() < 1e-300 {
        return FactorOutcome {
            member: false,
            strict: false,
            a: None,
            b: None,
            singular: true,
        };
    }
    let a = m[(0, 1)] / g22;
    let b = m[(1, 0)] / g22;
    FactorOutcome {
        member: a >= 0.0 && b >= 0.0,
        strict: a > 0.0 && b > 0.0,
        a: Some(a),
        b: Some(b),
        singular: false,
    }
}

/// Outcome of the analytic-continuation membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsOutcome {
    pub member: bool,
    /// Grid points where the principal logarithm hit its branch cut
    /// (treated as non-membership).
    pub branch_failures: usize,
    /// Smallest cone margin of the recovered `y` over the grid; boundary
    /// proxy for the agreement harness.
    pub min_margin: f64,
}

/// Tests `e^{ith} g e^{−ith} ∈ G·exp(iC⁰)` for every `t` in the grid.
pub fn kms_member(ctx: &Sl2Context, g: &Sl2GroupElement, t_grid: &[f64]) -> KmsOutcome {
    let mut member = true;
    let mut branch_failures = 0usize;
    let mut min_margin = f64::MAX;
    for &t in t_grid {
        let half = Complex64::new(0.0, t / 2.0).exp();
        let flow = Matrix2::new(
            half,
            Complex64::from(0.0),
            Complex64::from(0.0),
            half.conj(),
        );
        let flow_inv = Matrix2::new(
            half.conj(),
            Complex64::from(0.0),
            Complex64::from(0.0),
            half,
        );
        let gc = g.matrix().map(|x| Complex64::from(x));
        let s = Sl2cElement { m: flow * gc * flow_inv };
        // s = u e^{iy} with real u iff A := conj(s)⁻¹ s = e^{2iy}.
        let a = s.conjugate_entries().inverse().m * s.m;
        let a_mat = Mat::from_rows_complex(
            2,
            2,
            &[a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]],
        )
        .expect("finite flow conjugate");
        let log = match logm_principal(&a_mat) {
            Ok(l) => l,
            Err(_) => {
                branch_failures += 1;
                member = false;
                min_margin = min_margin.min(-1.0);
                continue;
            }
        };
        // log A = 2iy with y real; any imaginary remainder is numerical noise.
        let y = log.scale(Complex64::new(0.0, -0.5));
        debug_assert!(y.is_real(1e-8 * y.norm_fro().max(1.0)));
        let y_re = y.real_part();
        let coords = sl2_coords(&Matrix2::new(
            y_re[(0, 0)],
            y_re[(0, 1)],
            y_re[(1, 0)],
            y_re[(1, 1)],
        ));
        let margin = ctx.cone.margin(&coords).unwrap_or(-1.0);
        min_margin = min_margin.min(margin);
        if !ctx.cone.member(&coords, true).unwrap_or(false) {
            member = false;
        }
    }
    KmsOutcome {
        member,
        branch_failures,
        min_margin,
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Exponentials of the basis elements in closed form.
pub fn exp_h(u: f64) -> Sl2GroupElement {
    Sl2GroupElement {
        m: Matrix2::new((u / 2.0).exp(), 0.0, 0.0, (-u / 2.0).exp()),
    }
}

pub fn exp_xp(u: f64) -> Sl2GroupElement {
    Sl2GroupElement {
        m: Matrix2::new(1.0, u, 0.0, 1.0),
    }
}

pub fn exp_xm(u: f64) -> Sl2GroupElement {
    Sl2GroupElement {
        m: Matrix2::new(1.0, 0.0, u, 1.0),
    }
}

/// Haar-like sampling of an identity neighborhood:
/// `g = exp(u₁h)·exp(u₂x₊)·exp(u₃x₋)` with `u ~ U(−R, R)`, `R = 1.5`.
pub fn sample_group(rng: &mut ChaCha8Rng, radius: f64) -> Sl2GroupElement {
    let u1 = rng.random_range(-radius..radius);
    let u2 = rng.random_range(-radius..radius);
    let u3 = rng.random_range(-radius..radius);
    exp_h(u1).mul(&exp_xp(u2)).mul(&exp_xm(u3))
}

/// Constructive sampler of strict semigroup members
/// `exp(a x₊)·(±diag(λ, 1/λ))·exp(b x₋)` with `a, b > 0`.
pub fn sample_member(rng: &mut ChaCha8Rng) -> Sl2GroupElement {
    let a = rng.random_range(0.05..1.5);
    let b = rng.random_range(0.05..1.5);
    let lam: f64 = rng.random_range(0.3..3.0);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let g0 = Sl2GroupElement {
        m: Matrix2::new(sign * lam, 0.0, 0.0, sign / lam),
    };
    exp_xp(a).mul(&g0).mul(&exp_xm(b))
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

/// Four-way agreement of the membership characterizations on sampled group
/// elements, excluding a boundary band where the open/closed distinction is
/// undecidable at machine precision.
pub fn verify_semigroup_agreement(
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    grid_points: usize,
) -> Result<VerifyReport, GroupError> {
    let ctx = Sl2Context::new()?;
    let grid = kms_grid(grid_points, 1e-3);
    let seeds = SeedStream::new(seed);
    let mut report = VerifyReport::new("sl2-semigroup-agreement", seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..samples {
        let mut rng = seeds.rng(i as u64);
        // Mix generic samples with constructed members so both membership
        // answers are well represented.
        let g = if i % 3 == 0 {
            sample_member(&mut rng)
        } else {
            sample_group(&mut rng, 1.5)
        };
        let m_ad = margin_via_ad(&ctx, &g);
        let kms = kms_member(&ctx, &g, &grid);
        let near_boundary = m_ad.abs() < tol.band
            || (kms.min_margin.abs() < tol.band && kms.branch_failures == 0);
        if near_boundary {
            report.record_boundary();
            continue;
        }
        let ad_strict = in_s_via_ad(&ctx, &g, true);
        let field_strict = in_s_via_field(&ctx, &g, true);
        let factor = in_s_via_factor(&g);
        let agree = ad_strict == field_strict
            && ad_strict == factor.strict
            && ad_strict == kms.member;
        if agree {
            report.record_pass();
        } else {
            let mut values = BTreeMap::new();
            values.insert("in_s_via_ad".to_string(), ad_strict);
            values.insert("in_s_via_field".to_string(), field_strict);
            values.insert("in_s_via_factor".to_string(), factor.strict);
            values.insert("kms_member".to_string(), kms.member);
            let m = g.matrix();
            report.record_mismatch(
                vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
                values,
            );
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// `g ∈ S ⟹ g♯ ∈ S` on sampled members.
pub fn verify_sharp_invariance(
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerifyReport, GroupError> {
    let ctx = Sl2Context::new()?;
    let seeds = SeedStream::new(seed ^ 0x5a5a);
    let mut report = VerifyReport::new("sl2-sharp-invariance", seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..pairs {
        let mut rng = seeds.rng(i as u64);
        let g = sample_member(&mut rng);
        if margin_via_ad(&ctx, &g).abs() < tol.band {
            report.record_boundary();
            continue;
        }
        let gs = g.sharp();
        let ok = in_s_via_ad(&ctx, &g, true) && in_s_via_ad(&ctx, &gs, true);
        if ok {
            report.record_pass();
        } else {
            let m = gs.matrix();
            let mut values = BTreeMap::new();
            values.insert("sharp_in_s".to_string(), in_s_via_ad(&ctx, &gs, true));
            report.record_mismatch(
                vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
                values,
            );
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Products of sampled members stay members.
pub fn verify_semigroup_closure(
    pairs: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerifyReport, GroupError> {
    let ctx = Sl2Context::new()?;
    let seeds = SeedStream::new(seed ^ 0xc105);
    let mut report = VerifyReport::new("sl2-semigroup-closure", seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..pairs {
        let mut rng = seeds.rng(i as u64);
        let g1 = sample_member(&mut rng);
        let g2 = sample_member(&mut rng);
        let prod = g1.mul(&g2);
        if margin_via_ad(&ctx, &prod).abs() < tol.band {
            report.record_boundary();
            continue;
        }
        if in_s_via_ad(&ctx, &prod, true) {
            report.record_pass();
        } else {
            let m = prod.matrix();
            let mut values = BTreeMap::new();
            values.insert("product_in_s".to_string(), false);
            report.record_mismatch(
                vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
                values,
            );
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// For the degenerate Euler element `h = (h₀, 0)` of `g ⊕ g`:
/// no sampled `Ad(g₁⁻¹)h₀` lies in the open cone (its interior is made of
/// elliptic elements while `Ad` preserves the hyperbolic spectrum of h₀),
/// and the derived cones `C_±` vanish exactly. The final two report entries
/// are the two exact cone checks.
pub fn degenerate_euler_empty(
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerifyReport, GroupError> {
    let ctx = Sl2Context::new()?;
    let seeds = SeedStream::new(seed ^ 0xdead);
    let mut report = VerifyReport::new("sl2-degenerate-euler-empty", seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..samples {
        let mut rng = seeds.rng(i as u64);
        let g1 = sample_group(&mut rng, 1.5);
        let y_mat = adjoint_h(&ctx, &g1.inverse());
        let y = ctx
            .algebra
            .element_from_vec(sl2_coords(&y_mat))
            .expect("sl2 coords");
        let in_open_cone = ctx.cone.member(y.coords(), true).unwrap_or(false);
        let elliptic = is_elliptic(&y);
        if !in_open_cone && !elliptic {
            report.record_pass();
        } else {
            let mut values = BTreeMap::new();
            values.insert("in_open_cone".to_string(), in_open_cone);
            values.insert("elliptic".to_string(), elliptic);
            report.record_mismatch(y.coords().as_slice().to_vec(), values);
        }
    }

    // Exact vanishing of C± for h = (h₀, 0) on the product algebra.
    let (c_plus, c_minus) = degenerate_derived_cones()?;
    for (label, cone) in [("c_plus", c_plus), ("c_minus", c_minus)] {
        let zero = cone.generators().map(|g| g.is_empty()).unwrap_or(false);
        if zero {
            report.record_pass();
        } else {
            let mut values = BTreeMap::new();
            values.insert(format!("{label}_zero"), false);
            report.record_mismatch(vec![], values);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Derived cones of the group-type cone `{(x, −x) : x ∈ C}` with respect to
/// the degenerate Euler element `(h₀, 0)`; both must be the zero cone.
pub fn degenerate_derived_cones() -> Result<(ConeSpec, ConeSpec), GroupError> {
    let g = builtin_algebra(Builtin::Sl2)?;
    let gg = MatrixLieAlgebra::direct_sum(&g, &g)?;
    let h_deg = gg.element(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0])?;
    let g3 = grading(&h_deg)?;

    let product = ConeSpec::product(
        "sl2 x -sl2",
        vec![ConeSpec::sl2(1.0), ConeSpec::sl2(-1.0)],
    );
    let mut proj = DMatrix::<f64>::zeros(6, 6);
    for i in 0..3 {
        proj[(i, i)] = 0.5;
        proj[(i, i + 3)] = -0.5;
        proj[(i + 3, i)] = -0.5;
        proj[(i + 3, i + 3)] = 0.5;
    }
    let cone = ConeSpec::slice("group-type cone", product, proj);
    let (cp, cm, _) = derived_cones(&cone, &CoordGrading::from(&g3), &Tolerances::default())?;
    Ok((cp, cm))
}
