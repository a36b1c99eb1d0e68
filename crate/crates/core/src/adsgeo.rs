//! Anti-de Sitter space `AdS^d = {x ∈ ℝ^{d+1} : β(x,x) = 1}` with
//! `β(x,y) = x₀y₀ + x₁y₁ − x₂y₂ − ... − x_dy_d`, its causal structure, the
//! modular boost flow, tube domains and the three wedge-domain predicates.
//!
//! The boost generator acts by `h·x = (0, x₂, x₁, 0, ..., 0)` and flows in
//! closed form in the `(x₁, x₂)`-plane. The causal cone at a point `x` is
//! decided by the orientation functional `s(x, y) = x₀y₁ − x₁y₀`, which is
//! nonvanishing on timelike tangents: writing a tangent pair in the
//! positive-definite plane `P = span(e₀, e₁)` and its complement, the
//! conditions `β(x,x) = 1`, `β(y,y) > 0`, `β(x,y) = 0` force the
//! `P`-components of `x` and `y` to be linearly independent. The sign of
//! `s` therefore labels the two components of the timelike tangent bundle,
//! with `s(e₀, e₁) > 0` on the positive one. A sampling oracle for this
//! nonvanishing claim lives in the test suite.
//!
//! Wedge predicates:
//! - positivity: the boost field is future-timelike, `X_h(x) ∈ V₊(x)`,
//!   equivalently `x₂² > x₁²` and `x₀x₂ > 0`;
//! - KMS: the flow continues analytically to imaginary times `t ∈ (0, π)`
//!   inside the positive tube domain;
//! - polar: the image of the open cone `C₊⁰ + C₋⁰` under the exponential
//!   map at the flow fixed points `±e₀`, moved by the boost centralizer.

use crate::numkernel::Tolerances;
use crate::report::{kms_grid, SeedStream, VerifyReport};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdsError {
    #[error("dimension d={0} unsupported; d must be in 2..=5")]
    BadDimension(usize),
    #[error("vector has length {got}, expected {want}")]
    BadLength { want: usize, got: usize },
    #[error("point is off the manifold: beta(x,x) = {value}, expected 1")]
    OffManifold { value: f64 },
    #[error("vector is not tangent: beta(base, y) = {value}, expected 0")]
    NotTangent { value: f64 },
    #[error("complex point violates beta_C(z,z) = 1 (residual {residual:.3e})")]
    OffComplexManifold { residual: f64 },
    #[error("matrix does not preserve the form (residual {residual:.3e})")]
    NotIsometry { residual: f64 },
    #[error("Wick-rotated point is not real (imaginary norm {imag:.3e})")]
    WickImageNotReal { imag: f64 },
}

/// The ambient data of `AdS^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdsSpace {
    d: usize,
}

/// A point of `AdS^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsPoint {
    pub x: DVector<f64>,
}

/// A tangent vector `(x, y)` with `β(x, y) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsTangent {
    pub base: AdsPoint,
    pub y: DVector<f64>,
}

/// A point of the complexified quadric: `β_ℂ(z, z) = 1`, i.e.
/// `β(x,x) − β(y,y) = 1` and `β(x,y) = 0` for `z = x + iy`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsComplexPoint {
    pub z: DVector<Complex64>,
}

/// An element of `SO(2, d−1)` acting on the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct SoGroupElement {
    pub m: DMatrix<f64>,
}

/// Connected component of the modular-flow fixed point set
/// `M^α ≅ ℍ^{d−2} ∪ −ℍ^{d−2}`, labeled by the sign of `x₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedComponent {
    PlusSheet,
    MinusSheet,
}

impl AdsSpace {
    pub fn new(d: usize) -> Result<Self, AdsError> {
        if !(2..=5).contains(&d) {
            return Err(AdsError::BadDimension(d));
        }
        Ok(AdsSpace { d })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.d + 1
    }

    fn sign(&self, i: usize) -> f64 {
        if i < 2 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn beta(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (0..self.ambient_dim())
            .map(|i| self.sign(i) * x[i] * y[i])
            .sum()
    }

    /// The complex-bilinear extension of β (not a hermitian form).
    pub fn beta_c(&self, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
        (0..self.ambient_dim())
            .map(|i| Complex64::from(self.sign(i)) * x[i] * y[i])
            .sum()
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim());
        v[i] = 1.0;
        v
    }

    pub fn point(&self, x: DVector<f64>) -> Result<AdsPoint, AdsError> {
        if x.len() != self.ambient_dim() {
            return Err(AdsError::BadLength {
                want: self.ambient_dim(),
                got: x.len(),
            });
        }
        let b = self.beta(&x, &x);
        if (b - 1.0).abs() > 1e-9 * x.norm_squared().max(1.0) {
            return Err(AdsError::OffManifold { value: b });
        }
        Ok(AdsPoint { x })
    }

    pub fn base_point(&self) -> AdsPoint {
        AdsPoint {
            x: self.basis_vector(0),
        }
    }

    pub fn tangent(&self, base: AdsPoint, y: DVector<f64>) -> Result<AdsTangent, AdsError> {
        if y.len() != self.ambient_dim() {
            return Err(AdsError::BadLength {
                want: self.ambient_dim(),
                got: y.len(),
            });
        }
        let b = self.beta(&base.x, &y);
        if b.abs() > 1e-9 * (base.x.norm() * y.norm()).max(1.0) {
            return Err(AdsError::NotTangent { value: b });
        }
        Ok(AdsTangent { base, y })
    }

    pub fn complex_point(&self, z: DVector<Complex64>) -> Result<AdsComplexPoint, AdsError> {
        if z.len() != self.ambient_dim() {
            return Err(AdsError::BadLength {
                want: self.ambient_dim(),
                got: z.len(),
            });
        }
        let b = self.beta_c(&z, &z);
        let residual = (b - Complex64::from(1.0)).norm();
        if residual > 1e-9 * z.norm_squared().max(1.0) {
            return Err(AdsError::OffComplexManifold { residual });
        }
        Ok(AdsComplexPoint { z })
    }

    pub fn group_element(&self, m: DMatrix<f64>) -> Result<SoGroupElement, AdsError> {
        let n = self.ambient_dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(AdsError::BadLength {
                want: n,
                got: m.nrows(),
            });
        }
        let b = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| self.sign(i)));
        let residual = (m.transpose() * &b * &m - &b).norm();
        if residual > 1e-9 * m.norm().max(1.0) {
            return Err(AdsError::NotIsometry { residual });
        }
        Ok(SoGroupElement { m })
    }

    // -----------------------------------------------------------------
    // Exponential map
    // -----------------------------------------------------------------

    /// Geodesic exponential `Exp_p(v) = C(β(v,v))·p + S(β(v,v))·v`.
    pub fn exp_map(&self, p: &AdsPoint, v: &DVector<f64>) -> Result<AdsPoint, AdsError> {
        let t = self.tangent(p.clone(), v.clone())?;
        let u = self.beta(&t.y, &t.y);
        let (c, s) = cs_real(u);
        let x = &p.x * c + &t.y * s;
        self.point(x)
    }

    /// Exponential with a complex tangent vector at a real base point.
    pub fn exp_map_complex(
        &self,
        p: &AdsPoint,
        v: &DVector<Complex64>,
    ) -> Result<AdsComplexPoint, AdsError> {
        let pc = p.x.map(|t| Complex64::from(t));
        let pairing = self.beta_c(&pc, v);
        if pairing.norm() > 1e-9 * (p.x.norm() * v.norm()).max(1.0) {
            return Err(AdsError::NotTangent {
                value: pairing.norm(),
            });
        }
        let u = self.beta_c(v, v);
        let (c, s) = cs_complex(u);
        let z = pc * c + v * s;
        self.complex_point(z)
    }

    // -----------------------------------------------------------------
    // Modular flow
    // -----------------------------------------------------------------

    /// The boost field `X_h(x) = (0, x₂, x₁, 0, ..., 0)`.
    pub fn boost_field(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim());
        v[1] = x[2];
        v[2] = x[1];
        v
    }

    /// Real modular flow `α_t(x) = e^{th}x`.
    pub fn modular_flow(&self, t: f64, p: &AdsPoint) -> AdsPoint {
        let mut x = p.x.clone();
        let (ch, sh) = (t.cosh(), t.sinh());
        let (x1, x2) = (x[1], x[2]);
        x[1] = ch * x1 + sh * x2;
        x[2] = ch * x2 + sh * x1;
        AdsPoint { x }
    }

    /// Holomorphic flow at complex time on a complex point.
    pub fn modular_flow_complex(&self, w: Complex64, z: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = z.clone();
        let (ch, sh) = (w.cosh(), w.sinh());
        let (z1, z2) = (z[1], z[2]);
        out[1] = ch * z1 + sh * z2;
        out[2] = ch * z2 + sh * z1;
        out
    }

    /// Flow of a real point to imaginary time `it`.
    pub fn modular_flow_imag(&self, t: f64, p: &AdsPoint) -> AdsComplexPoint {
        let zc = p.x.map(|v| Complex64::from(v));
        let z = self.modular_flow_complex(Complex64::new(0.0, t), &zc);
        // The flow is a β_C-isometry; re-validate the invariant.
        self.complex_point(z).expect("flow preserves the quadric")
    }

    /// The linear involution `τ_h(x) = (x₀, −x₁, −x₂, x₃, ..., x_d)`.
    pub fn tau_h_vec(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = x.clone();
        out[1] = -out[1];
        out[2] = -out[2];
        out
    }

    /// Antiholomorphic extension `τ̄_h(z) = τ_h(conj z)`.
    pub fn tau_h_bar(&self, z: &DVector<Complex64>) -> DVector<Complex64> {
        self.tau_h_vec(&z.map(|v| v.conj()))
    }

    /// The Wick rotation `κ_h(z) = (z₀, −i z₂, −i z₁, z₃, ..., z_d)`.
    pub fn kappa_h(&self, z: &DVector<Complex64>) -> DVector<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let mut out = z.clone();
        out[1] = -i * z[2];
        out[2] = -i * z[1];
        out
    }

    // -----------------------------------------------------------------
    // Causal structure and wedge predicates
    // -----------------------------------------------------------------

    /// Orientation functional `s(x, y) = x₀y₁ − x₁y₀` (see module docs).
    pub fn orientation(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x[0] * y[1] - x[1] * y[0]
    }

    /// Positive causal cone membership: `β(y,y) > 0` and `s(x,y) > 0`.
    pub fn in_v_plus(&self, t: &AdsTangent) -> bool {
        self.beta(&t.y, &t.y) > 0.0 && self.orientation(&t.base.x, &t.y) > 0.0
    }

    /// Membership in the positive tube domain: `β(Im z, Im z) > 0` and the
    /// normalized tangent pair `Γ(z) = (x, y)/√β(x,x)` is positive.
    pub fn in_tube_plus(&self, z: &AdsComplexPoint) -> bool {
        let x = z.z.map(|v| v.re);
        let y = z.z.map(|v| v.im);
        let byy = self.beta(&y, &y);
        if byy <= 0.0 {
            return false;
        }
        let bxx = self.beta(&x, &x);
        debug_assert!(bxx > 0.0, "quadric + timelike imaginary part force beta(x,x) > 1");
        let scale = bxx.sqrt();
        let xt = &x / scale;
        let yt = &y / scale;
        self.beta(&yt, &yt) > 0.0 && self.orientation(&xt, &yt) > 0.0
    }

    /// Positivity domain: the boost field is future-timelike at `x`.
    pub fn wedge_positivity(&self, p: &AdsPoint) -> bool {
        let v = self.boost_field(&p.x);
        let t = AdsTangent {
            base: p.clone(),
            y: v,
        };
        // β(x, X_h(x)) = x₁x₂ − x₂x₁ = 0 exactly; no validation needed.
        self.in_v_plus(&t)
    }

    /// KMS domain: the imaginary-time flow stays in the positive tube for
    /// every grid time in `(0, π)`.
    pub fn wedge_kms(&self, p: &AdsPoint, t_grid: &[f64]) -> bool {
        t_grid
            .iter()
            .all(|&t| self.in_tube_plus(&self.modular_flow_imag(t, p)))
    }

    /// Boundary proxies of the wedge predicates: `(x₂² − x₁², x₀x₂)`,
    /// scale-normalized. Samples with either value inside the band are
    /// excluded from agreement statistics.
    pub fn wedge_margins(&self, p: &AdsPoint) -> (f64, f64) {
        let x = &p.x;
        let m1 = (x[2] * x[2] - x[1] * x[1]) / (x[1] * x[1] + x[2] * x[2]).max(1.0);
        let m2 = (x[0] * x[2]) / (x[0] * x[0] + x[2] * x[2]).max(1.0);
        (m1, m2)
    }

    /// Fixed points of the modular flow: `x₁ = x₂ = 0`, two hyperboloid
    /// sheets labeled by `sign(x₀)`.
    pub fn fixed_point_set(&self, p: &AdsPoint) -> Option<FixedComponent> {
        if self.boost_field(&p.x).norm() > 1e-9 {
            return None;
        }
        Some(if p.x[0] > 0.0 {
            FixedComponent::PlusSheet
        } else {
            FixedComponent::MinusSheet
        })
    }

    // -----------------------------------------------------------------
    // Group sampling
    // -----------------------------------------------------------------

    /// Basis generator `M_{ij} = s_j E_{ij} − s_i E_{ji}` of `so(2, d−1)`.
    pub fn so_generator(&self, i: usize, j: usize) -> DMatrix<f64> {
        let n = self.ambient_dim();
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = self.sign(j);
        m[(j, i)] = -self.sign(i);
        m
    }

    /// A random identity-component element: product of two exponentials of
    /// random Lie algebra elements on a compact parameter box.
    pub fn sample_group(&self, rng: &mut ChaCha8Rng, radius: f64) -> SoGroupElement {
        let n = self.ambient_dim();
        let mut g = DMatrix::<f64>::identity(n, n);
        for _ in 0..2 {
            let mut x = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = rng.random_range(-radius..radius);
                    x += self.so_generator(i, j) * c;
                }
            }
            g *= real_expm(&x);
        }
        SoGroupElement { m: g }
    }

    /// A random element of `G^h_e = SO(1,1)↑ × SO(1, d−2)↑`: a boost in the
    /// `(e₁, e₂)`-plane times an isometry of `span(e₀, e₃, ..., e_d)`.
    pub fn sample_gh_identity(&self, rng: &mut ChaCha8Rng, radius: f64) -> SoGroupElement {
        let n = self.ambient_dim();
        let boost = real_expm(&(self.so_generator(1, 2) * rng.random_range(-radius..radius)));
        let mut x = DMatrix::<f64>::zeros(n, n);
        let mut fixed_block: Vec<usize> = vec![0];
        fixed_block.extend(3..n);
        for (a, &i) in fixed_block.iter().enumerate() {
            for &j in fixed_block.iter().skip(a + 1) {
                x += self.so_generator(i.min(j), i.max(j)) * rng.random_range(-radius..radius);
            }
        }
        SoGroupElement {
            m: boost * real_expm(&x),
        }
    }

    /// The rotation by π in the positive-definite `(e₀, e₁)`-plane:
    /// `r₀₁ = diag(−1, −1, 1, ..., 1)`, the component representative of
    /// `G^{τ_h}` that reverses the Euler element.
    pub fn r01(&self) -> SoGroupElement {
        let n = self.ambient_dim();
        let mut m = DMatrix::identity(n, n);
        m[(0, 0)] = -1.0;
        m[(1, 1)] = -1.0;
        SoGroupElement { m }
    }

    /// `r = diag(−1, −1, −1, −1, 1, ..., 1)`: the second component of
    /// `G^h` for `d ≥ 3`; it swaps the two fixed-point sheets.
    pub fn r_sheet_swap(&self) -> Option<SoGroupElement> {
        if self.d < 3 {
            return None;
        }
        let n = self.ambient_dim();
        let mut m = DMatrix::identity(n, n);
        for k in 0..4 {
            m[(k, k)] = -1.0;
        }
        Some(SoGroupElement { m })
    }

    /// A random element of `G^{τ_h}`, covering all connected components
    /// (two for `d = 2`, four for `d ≥ 3`).
    pub fn sample_gtauh(&self, rng: &mut ChaCha8Rng, radius: f64) -> SoGroupElement {
        let mut g = self.sample_gh_identity(rng, radius);
        if let Some(r) = self.r_sheet_swap() {
            if rng.random_bool(0.5) {
                g = SoGroupElement { m: r.m * g.m };
            }
        }
        if rng.random_bool(0.5) {
            g = SoGroupElement {
                m: self.r01().m * g.m,
            };
        }
        g
    }

    pub fn act(&self, g: &SoGroupElement, p: &AdsPoint) -> AdsPoint {
        AdsPoint { x: &g.m * &p.x }
    }

    pub fn act_complex(&self, g: &SoGroupElement, z: &DVector<Complex64>) -> DVector<Complex64> {
        let gc = g.m.map(|v| Complex64::from(v));
        &gc * z
    }

    // -----------------------------------------------------------------
    // Wedge-domain constructions
    // -----------------------------------------------------------------

    /// A point of the polar wedge domain:
    /// `g · Exp_{±e₀}(±(λ₊(e₂+e₁) + λ₋(e₂−e₁)))` with `λ± > 0` and
    /// `g ∈ G^h_e`.
    pub fn wedge_polar_sample(
        &self,
        g: &SoGroupElement,
        base_plus: bool,
        lambda_plus: f64,
        lambda_minus: f64,
    ) -> Result<AdsPoint, AdsError> {
        assert!(lambda_plus > 0.0 && lambda_minus > 0.0);
        let mut v = DVector::zeros(self.ambient_dim());
        v[1] = lambda_plus - lambda_minus;
        v[2] = lambda_plus + lambda_minus;
        let (base, dir) = if base_plus {
            (self.base_point(), v)
        } else {
            let mut minus = self.base_point();
            minus.x[0] = -1.0;
            (minus, -v)
        };
        let p = self.exp_map(&base, &dir)?;
        Ok(self.act(g, &p))
    }

    /// A fixed point of `τ̄_h` in the positive tube and its Wick rotation:
    /// `z = g·Exp_{e₀}(it·e₁)` for `g ∈ G^{τ_h}`, mapped by `κ_h` to a real
    /// point of the positivity domain.
    pub fn wick_fixed_point(
        &self,
        t: f64,
        g: &SoGroupElement,
    ) -> Result<(AdsComplexPoint, AdsPoint), AdsError> {
        assert!(t > 0.0);
        let mut v = DVector::<Complex64>::zeros(self.ambient_dim());
        v[1] = Complex64::new(0.0, t);
        let z0 = self.exp_map_complex(&self.base_point(), &v)?;
        let z = self.act_complex(g, &z0.z);
        let z = self.complex_point(z)?;
        // τ̄_h-fixedness is part of the construction; validated by callers
        // via tau_h_bar_residual.
        let w = self.kappa_h(&z.z);
        let imag = w.map(|c| c.im).norm();
        if imag > 1e-9 * w.norm().max(1.0) {
            return Err(AdsError::WickImageNotReal { imag });
        }
        let real_point = self.point(w.map(|c| c.re))?;
        Ok((z, real_point))
    }

    pub fn tau_h_bar_residual(&self, z: &AdsComplexPoint) -> f64 {
        (self.tau_h_bar(&z.z) - &z.z).norm()
    }

    // -----------------------------------------------------------------
    // Point sampling
    // -----------------------------------------------------------------

    /// Uniform-ish sample: a random box vector normalized onto the quadric.
    pub fn sample_point(&self, rng: &mut ChaCha8Rng) -> AdsPoint {
        loop {
            let v = DVector::from_fn(self.ambient_dim(), |_, _| rng.random_range(-2.0..2.0));
            let b = self.beta(&v, &v);
            if b > 0.05 {
                return AdsPoint { x: v / b.sqrt() };
            }
        }
    }

    /// Adversarial sample near the wedge boundary: either `x₂² − x₁²` tiny
    /// (timelike/spacelike boundary of the boost field) or `x₁, x₂` both
    /// tiny (near the fixed-point set, where `x₀x₂` also degenerates).
    pub fn sample_point_adversarial(&self, rng: &mut ChaCha8Rng) -> AdsPoint {
        let n = self.ambient_dim();
        let mut x = DVector::zeros(n);
        for k in 3..n {
            x[k] = rng.random_range(-1.5..1.5);
        }
        let rest: f64 = (3..n).map(|k| x[k] * x[k]).sum();
        if rng.random_bool(0.5) {
            // x2^2 - x1^2 = delta, |delta| small at scale of x1^2.
            let x1: f64 = rng.random_range(-2.0..2.0);
            let delta = rng.random_range(-1e-6..1e-6) * x1.abs().max(0.3);
            let x22 = x1 * x1 + delta;
            let x2 = if x22 > 0.0 {
                x22.sqrt() * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
            } else {
                0.0
            };
            x[1] = x1;
            x[2] = x2;
        } else {
            x[1] = rng.random_range(-1e-5..1e-5);
            x[2] = rng.random_range(-1e-5..1e-5);
        }
        // beta = 1 fixes x0 up to sign.
        let x0sq = 1.0 - x[1] * x[1] + x[2] * x[2] + rest;
        x[0] = x0sq.max(0.0).sqrt() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        if x0sq < 0.0 {
            // Rare corner: fall back to a uniform sample.
            return self.sample_point(rng);
        }
        AdsPoint { x }
    }

    /// Trajectory of the modular flow, for CSV export. Real mode returns
    /// rows `(t, x₀..x_d)`; imaginary mode rows `(t, Re x₀, Im x₀, ...)`.
    pub fn flow_trace(
        &self,
        p: &AdsPoint,
        t_max: f64,
        steps: usize,
        imaginary: bool,
    ) -> Vec<Vec<f64>> {
        let mut rows = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let t = if steps == 0 {
                0.0
            } else {
                t_max * k as f64 / steps as f64
            };
            let mut row = vec![t];
            if imaginary {
                let z = self.modular_flow_imag(t, p);
                for c in z.z.iter() {
                    row.push(c.re);
                    row.push(c.im);
                }
            } else {
                let x = self.modular_flow(t, p);
                row.extend(x.x.iter());
            }
            rows.push(row);
        }
        rows
    }
}

// ---------------------------------------------------------------------------
// The C and S coefficient functions of the exponential map
// ---------------------------------------------------------------------------

/// `C(u) = cos(√u)`, `S(u) = sin(√u)/√u`, both entire in `u`; a short
/// series takes over near zero.
fn cs_real(u: f64) -> (f64, f64) {
    if u.abs() < 1e-6 {
        (cs_series(u).0, cs_series(u).1)
    } else if u > 0.0 {
        let r = u.sqrt();
        (r.cos(), r.sin() / r)
    } else {
        let r = (-u).sqrt();
        (r.cosh(), r.sinh() / r)
    }
}

fn cs_complex(u: Complex64) -> (Complex64, Complex64) {
    if u.norm() < 1e-6 {
        let (c, s) = cs_series_complex(u);
        (c, s)
    } else {
        let r = u.sqrt();
        (r.cos(), r.sin() / r)
    }
}

fn cs_series(u: f64) -> (f64, f64) {
    // Four terms each; error O(u^4) ≤ 1e-24 on |u| < 1e-6.
    let c = 1.0 - u / 2.0 + u * u / 24.0 - u * u * u / 720.0;
    let s = 1.0 - u / 6.0 + u * u / 120.0 - u * u * u / 5040.0;
    (c, s)
}

fn cs_series_complex(u: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::from(1.0);
    let c = one - u / 2.0 + u * u / 24.0 - u * u * u / 720.0;
    let s = one - u / 6.0 + u * u / 120.0 - u * u * u / 5040.0;
    (c, s)
}

/// Small dense real exponential (the ambient matrices are at most 6×6).
fn real_expm(x: &DMatrix<f64>) -> DMatrix<f64> {
    crate::numkernel::expm(&crate::numkernel::Mat::from_real(x.clone()).expect("finite"))
        .expect("bounded generator")
        .real_part()
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

/// Wedge equality: `wedge_positivity ⟺ wedge_kms` on uniform plus
/// boundary-adversarial samples, excluding the undecidable boundary band.
pub fn verify_wedge_equality(
    d: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    grid_points: usize,
) -> Result<VerifyReport, AdsError> {
    let space = AdsSpace::new(d)?;
    let grid = kms_grid(grid_points, 1e-3);
    let seeds = SeedStream::new(seed);
    let mut report = VerifyReport::new(format!("ads-wedge-equality[d={d}]"), seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..samples {
        let mut rng = seeds.rng(i as u64);
        // One quarter adversarial, three quarters uniform.
        let p = if i % 4 == 3 {
            space.sample_point_adversarial(&mut rng)
        } else {
            space.sample_point(&mut rng)
        };
        let (m1, m2) = space.wedge_margins(&p);
        if m1.abs() < tol.band || m2.abs() < tol.band {
            report.record_boundary();
            continue;
        }
        let pos = space.wedge_positivity(&p);
        let kms = space.wedge_kms(&p, &grid);
        if pos == kms {
            report.record_pass();
        } else {
            let mut values = BTreeMap::new();
            values.insert("wedge_positivity".to_string(), pos);
            values.insert("wedge_kms".to_string(), kms);
            report.record_mismatch(p.x.as_slice().to_vec(), values);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Polar forward inclusion: every constructed polar-wedge point satisfies
/// both the positivity and the KMS predicate.
pub fn verify_polar_inclusion(
    d: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
    grid_points: usize,
) -> Result<VerifyReport, AdsError> {
    let space = AdsSpace::new(d)?;
    let grid = kms_grid(grid_points, 1e-3);
    let seeds = SeedStream::new(seed ^ 0x907a);
    let mut report = VerifyReport::new(format!("ads-polar-inclusion[d={d}]"), seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..samples {
        let mut rng = seeds.rng(i as u64);
        let g = space.sample_gh_identity(&mut rng, 1.2);
        let base_plus = i % 2 == 0;
        let lp = rng.random_range(0.05..1.5);
        let lm = rng.random_range(0.05..1.5);
        let p = space.wedge_polar_sample(&g, base_plus, lp, lm)?;
        let pos = space.wedge_positivity(&p);
        let kms = space.wedge_kms(&p, &grid);
        if pos && kms {
            report.record_pass();
        } else {
            let mut values = BTreeMap::new();
            values.insert("polar_positivity".to_string(), pos);
            values.insert("polar_kms".to_string(), kms);
            report.record_mismatch(p.x.as_slice().to_vec(), values);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Wick rotation: `τ̄_h`-fixed tube points map to real positivity-domain
/// points with fixedness residual below 1e−9.
pub fn verify_wick_rotation(
    d: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerifyReport, AdsError> {
    let space = AdsSpace::new(d)?;
    let seeds = SeedStream::new(seed ^ 0x71c4);
    let mut report = VerifyReport::new(format!("ads-wick-rotation[d={d}]"), seed, tol.as_map());
    let start = std::time::Instant::now();
    for i in 0..samples {
        let mut rng = seeds.rng(i as u64);
        let g = space.sample_gtauh(&mut rng, 1.2);
        let t = rng.random_range(0.05..2.0);
        match space.wick_fixed_point(t, &g) {
            Ok((z, real_point)) => {
                let fixed_residual = space.tau_h_bar_residual(&z);
                let fixed_ok = fixed_residual <= 1e-9 * z.z.norm().max(1.0);
                let pos = space.wedge_positivity(&real_point);
                if fixed_ok && pos {
                    report.record_pass();
                } else {
                    let mut values = BTreeMap::new();
                    values.insert("tau_bar_fixed".to_string(), fixed_ok);
                    values.insert("wick_positivity".to_string(), pos);
                    report.record_mismatch(real_point.x.as_slice().to_vec(), values);
                }
            }
            Err(_) => {
                let mut values = BTreeMap::new();
                values.insert("wick_image_real".to_string(), false);
                report.record_mismatch(vec![], values);
            }
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    fn space(d: usize) -> AdsSpace {
        AdsSpace::new(d).unwrap()
    }

    fn dvec(s: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(s)
    }

    #[test]
    fn dimension_bounds() {
        assert!(AdsSpace::new(1).is_err());
        assert!(AdsSpace::new(6).is_err());
        assert!(AdsSpace::new(3).is_ok());
    }

    #[test]
    fn exp_map_basics() {
        let sp = space(3);
        let p = sp.base_point();
        // Exp_p(0) = p.
        let zero = DVector::zeros(4);
        assert_eq!(sp.exp_map(&p, &zero).unwrap(), p);
        // Timelike closed geodesic: Exp_{e0}(t e1) = cos t e0 + sin t e1.
        for t in [0.3, 1.2, 2.9] {
            let v = dvec(&[0.0, t, 0.0, 0.0]);
            let q = sp.exp_map(&p, &v).unwrap();
            assert!((q.x[0] - t.cos()).abs() < 1e-12);
            assert!((q.x[1] - t.sin()).abs() < 1e-12);
        }
        // Full period 2π returns to p.
        let v = dvec(&[0.0, 2.0 * std::f64::consts::PI, 0.0, 0.0]);
        let q = sp.exp_map(&p, &v).unwrap();
        assert!((q.x - p.x).norm() < 1e-8);
    }

    #[test]
    fn exp_map_complex_imaginary_timelike() {
        // Exp_{e0}(it e1) = cosh t e0 + i sinh t e1.
        let sp = space(3);
        let p = sp.base_point();
        let t = 0.8;
        let mut v = DVector::<Complex64>::zeros(4);
        v[1] = Complex64::new(0.0, t);
        let z = sp.exp_map_complex(&p, &v).unwrap();
        assert!((z.z[0] - Complex64::from(t.cosh())).norm() < 1e-12);
        assert!((z.z[1] - Complex64::new(0.0, t.sinh())).norm() < 1e-12);
    }

    #[test]
    fn off_manifold_rejected() {
        let sp = space(2);
        assert!(matches!(
            sp.point(dvec(&[2.0, 0.0, 0.0])),
            Err(AdsError::OffManifold { .. })
        ));
        let p = sp.base_point();
        assert!(matches!(
            sp.tangent(p, dvec(&[1.0, 0.0, 0.0])),
            Err(AdsError::NotTangent { .. })
        ));
    }

    #[test]
    fn modular_flow_fixes_base_point_and_preserves_beta() {
        let sp = space(4);
        let e0 = sp.base_point();
        let moved = sp.modular_flow(1.7, &e0);
        assert!((moved.x - e0.x).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let p = sp.sample_point(&mut rng);
            let t = rng.random_range(-2.0..2.0);
            let q = sp.modular_flow(t, &p);
            assert!((sp.beta(&q.x, &q.x) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn imaginary_flow_matches_closed_form() {
        // Im(α_{it}(x)) = sin t · (0, x₂, x₁, 0, ...).
        let sp = space(3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let p = sp.sample_point(&mut rng);
            let t = rng.random_range(0.1..3.0);
            let z = sp.modular_flow_imag(t, &p);
            let im = z.z.map(|c| c.im);
            let expected = sp.boost_field(&p.x) * t.sin();
            assert!((im - expected).norm() < 1e-12);
            let re = z.z.map(|c| c.re);
            let mut exp_re = p.x.clone();
            exp_re[1] = t.cos() * p.x[1];
            exp_re[2] = t.cos() * p.x[2];
            assert!((re - exp_re).norm() < 1e-12);
        }
    }

    #[test]
    fn v_plus_base_point_examples() {
        let sp = space(3);
        let e0 = sp.base_point();
        let e1 = dvec(&[0.0, 1.0, 0.0, 0.0]);
        let t = sp.tangent(e0.clone(), e1.clone()).unwrap();
        assert!(sp.in_v_plus(&t));

        let mut minus_e0 = e0.clone();
        minus_e0.x[0] = -1.0;
        let t2 = sp.tangent(minus_e0.clone(), e1.clone()).unwrap();
        assert!(!sp.in_v_plus(&t2));
        let t3 = sp.tangent(minus_e0, -e1).unwrap();
        assert!(sp.in_v_plus(&t3));
    }

    #[test]
    fn orientation_functional_nonvanishing_oracle() {
        // Pre-build oracle: s(x, y) never vanishes on timelike tangents.
        let sp = space(4);
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        let mut checked = 0usize;
        while checked < 100_000 {
            let p = sp.sample_point(&mut rng);
            let raw = DVector::from_fn(sp.ambient_dim(), |_, _| rng.random_range(-2.0..2.0));
            // Project onto the tangent space: y = raw − β(p, raw)·p.
            let y = &raw - &p.x * sp.beta(&p.x, &raw);
            if sp.beta(&y, &y) <= 1e-6 {
                continue;
            }
            let s = sp.orientation(&p.x, &y);
            assert!(
                s.abs() > 1e-12 * p.x.norm() * y.norm(),
                "orientation functional vanished on a timelike tangent"
            );
            checked += 1;
        }
    }

    #[test]
    fn orientation_sign_constant_along_transports() {
        let sp = space(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2718);
        let e0 = sp.base_point();
        let e1 = dvec(&[0.0, 1.0, 0.0, 0.0]);
        for _ in 0..500 {
            let g = sp.sample_group(&mut rng, 0.9);
            let x = sp.act(&g, &e0);
            let y = &g.m * &e1;
            assert!(sp.beta(&y, &y) > 0.0, "transport preserves timelikeness");
            assert!(
                sp.orientation(&x.x, &y) > 0.0,
                "positive component must stay positive"
            );
        }
    }

    #[test]
    fn tube_membership_examples() {
        let sp = space(3);
        let p = sp.base_point();
        let mut v = DVector::<Complex64>::zeros(4);
        v[1] = Complex64::new(0.0, 0.7);
        let z = sp.exp_map_complex(&p, &v).unwrap();
        assert!(sp.in_tube_plus(&z));
        // The negative tube.
        let mut vneg = DVector::<Complex64>::zeros(4);
        vneg[1] = Complex64::new(0.0, -0.7);
        let zneg = sp.exp_map_complex(&p, &vneg).unwrap();
        assert!(!sp.in_tube_plus(&zneg));
        // Real points have vanishing imaginary part.
        let real = sp.complex_point(p.x.map(|t| Complex64::from(t))).unwrap();
        assert!(!sp.in_tube_plus(&real));
    }

    #[test]
    fn wedge_positivity_examples() {
        let sp = space(3);
        let r2 = 2f64.sqrt();
        let inside = sp.point(dvec(&[r2, 0.0, 1.0, 0.0])).unwrap();
        assert!(sp.wedge_positivity(&inside));
        let fixed = sp.base_point();
        assert!(!sp.wedge_positivity(&fixed));
        let wrong_sign = sp.point(dvec(&[-r2, 0.0, 1.0, 0.0])).unwrap();
        assert!(!sp.wedge_positivity(&wrong_sign));
    }

    #[test]
    fn wedge_positivity_matches_closed_form() {
        let sp = space(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let p = sp.sample_point(&mut rng);
            let closed = p.x[2] * p.x[2] > p.x[1] * p.x[1] && p.x[0] * p.x[2] > 0.0;
            assert_eq!(sp.wedge_positivity(&p), closed);
        }
    }

    #[test]
    fn wedge_kms_examples() {
        let sp = space(3);
        let grid = kms_grid(32, 1e-3);
        let r2 = 2f64.sqrt();
        let inside = sp.point(dvec(&[r2, 0.0, 1.0, 0.0])).unwrap();
        assert!(sp.wedge_kms(&inside, &grid));
        // At t = π/2 the flowed point is (√2, i, 0, 0).
        let z = sp.modular_flow_imag(std::f64::consts::FRAC_PI_2, &inside);
        assert!((z.z[0] - Complex64::from(r2)).norm() < 1e-12);
        assert!((z.z[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!(z.z[2].norm() < 1e-12);
        assert!(sp.in_tube_plus(&z));
        // Fixed points never enter the open tube.
        assert!(!sp.wedge_kms(&sp.base_point(), &grid));
    }

    #[test]
    fn polar_samples_land_in_both_domains() {
        let sp = space(3);
        let grid = kms_grid(16, 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        // g = e, λ± = 1/2: Exp_{e0}(e2) = cosh(1) e0 + sinh(1) e2.
        let id = SoGroupElement {
            m: DMatrix::identity(4, 4),
        };
        let p = sp.wedge_polar_sample(&id, true, 0.5, 0.5).unwrap();
        assert!((p.x[0] - 1f64.cosh()).abs() < 1e-12);
        assert!((p.x[2] - 1f64.sinh()).abs() < 1e-12);
        assert!(sp.wedge_positivity(&p));

        for i in 0..200 {
            let g = sp.sample_gh_identity(&mut rng, 1.2);
            let p = sp
                .wedge_polar_sample(
                    &g,
                    i % 2 == 0,
                    rng.random_range(0.05..1.5),
                    rng.random_range(0.05..1.5),
                )
                .unwrap();
            assert!(sp.wedge_positivity(&p));
            assert!(sp.wedge_kms(&p, &grid));
        }
    }

    #[test]
    fn wick_rotation_base_case() {
        let sp = space(3);
        let id = SoGroupElement {
            m: DMatrix::identity(4, 4),
        };
        let (z, real_point) = sp.wick_fixed_point(1.0, &id).unwrap();
        // z = cosh(1) e0 + i sinh(1) e1.
        assert!((z.z[0] - Complex64::from(1f64.cosh())).norm() < 1e-12);
        assert!((z.z[1] - Complex64::new(0.0, 1f64.sinh())).norm() < 1e-12);
        assert!(sp.tau_h_bar_residual(&z) < 1e-12);
        // κ_h(z) = (cosh 1, 0, sinh 1, 0).
        assert!((real_point.x[0] - 1f64.cosh()).abs() < 1e-12);
        assert!((real_point.x[2] - 1f64.sinh()).abs() < 1e-12);
        assert!(sp.wedge_positivity(&real_point));
    }

    #[test]
    fn wick_rotation_r01_lands_in_minus_wedge() {
        let sp = space(3);
        let (z, real_point) = sp.wick_fixed_point(0.9, &sp.r01()).unwrap();
        assert!(sp.tau_h_bar_residual(&z) < 1e-12);
        assert!(real_point.x[0] < 0.0, "r01 must move to the -e0 component");
        assert!(sp.wedge_positivity(&real_point));
    }

    #[test]
    fn fixed_point_classification() {
        let sp = space(4);
        assert_eq!(
            sp.fixed_point_set(&sp.base_point()),
            Some(FixedComponent::PlusSheet)
        );
        let mut minus = sp.base_point();
        minus.x[0] = -1.0;
        assert_eq!(
            sp.fixed_point_set(&minus),
            Some(FixedComponent::MinusSheet)
        );
        let generic = sp.point(dvec(&[2f64.sqrt(), 0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(sp.fixed_point_set(&generic), None);
        // The sheet swap moves +H to -H.
        let r = sp.r_sheet_swap().unwrap();
        let moved = sp.act(&r, &sp.base_point());
        assert_eq!(
            sp.fixed_point_set(&moved),
            Some(FixedComponent::MinusSheet)
        );
    }

    #[test]
    fn flow_equivariance_for_centralizer() {
        let sp = space(4);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let g = sp.sample_gh_identity(&mut rng, 1.0);
            let p = sp.sample_point(&mut rng);
            let t = rng.random_range(-1.5..1.5);
            let lhs = sp.act(&g, &sp.modular_flow(t, &p));
            let rhs = sp.modular_flow(t, &sp.act(&g, &p));
            let scale = lhs.x.norm().max(1.0);
            assert!((lhs.x - rhs.x).norm() < 1e-9 * scale);
        }
    }

    #[test]
    fn group_samplers_are_isometries() {
        let sp = space(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = sp.sample_group(&mut rng, 0.8);
            sp.group_element(g.m.clone()).unwrap();
            let gh = sp.sample_gh_identity(&mut rng, 1.0);
            sp.group_element(gh.m.clone()).unwrap();
            // G^h elements commute with the boost generator.
            let hgen = sp.so_generator(1, 2);
            assert!((&gh.m * &hgen - &hgen * &gh.m).norm() < 1e-9);
            let gt = sp.sample_gtauh(&mut rng, 1.0);
            sp.group_element(gt.m.clone()).unwrap();
        }
    }

    #[test]
    fn suite_smoke_runs() {
        let tol = Tolerances::default();
        for d in [2usize, 3] {
            let eq = verify_wedge_equality(d, 400, 9, &tol, 16).unwrap();
            assert!(eq.consistent());
            assert!(eq.all_passed(), "equality mismatches at d={d}: {:?}", eq.mismatches);
            let polar = verify_polar_inclusion(d, 200, 9, &tol, 16).unwrap();
            assert!(polar.all_passed());
            let wick = verify_wick_rotation(d, 200, 9, &tol).unwrap();
            assert!(wick.all_passed());
        }
    }

    #[test]
    fn flow_trace_rows() {
        let sp = space(2);
        let p = sp.point(dvec(&[2f64.sqrt(), 0.0, 1.0])).unwrap();
        let rows = sp.flow_trace(&p, 2.0, 10, false);
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0].len(), 4);
        for row in &rows {
            let x = dvec(&row[1..]);
            assert!((sp.beta(&x, &x) - 1.0).abs() < 1e-9);
        }
        let imag_rows = sp.flow_trace(&p, 1.0, 4, true);
        assert_eq!(imag_rows[0].len(), 1 + 2 * 3);
    }
}
