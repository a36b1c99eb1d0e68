//! Invariant convex cones with exact membership predicates.
//!
//! Cones come from a small catalog of closed forms rather than a general
//! semialgebraic engine:
//!
//! - `Quad`: `{v : Q(v,v) ≥ 0, ℓ(v) ≥ 0}` for a symmetric form of Lorentz
//!   signature and an orienting functional — the round causal cones.
//! - `Sl2`: the invariant cone of sl(2,ℝ) in basis coordinates `(h, x₊, x₋)`,
//!   with an orientation sign picking one of the two components.
//! - `Rays`: all nonnegative combinations of finitely many independent
//!   generators; membership is a small nonnegative-least-squares solve.
//! - `Product` and `Slice`: componentwise assembly and intersection with a
//!   linear subspace, used for the group-type cone `{(x, −x) : x ∈ C}`.
//!
//! The derived cones `C_± = ±C ∩ g_{±1}(h)` are computed in closed form for
//! one-dimensional grading eigenspaces (the catalog case) by testing the two
//! ray directions; everything else reports an unsupported combination.

use crate::euler::Grading3;
use crate::report::{SeedStream, VerifyReport};
use crate::numkernel::Tolerances;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("vector has dimension {got}, cone lives in dimension {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("ray generators must be linearly independent and of ambient dimension")]
    BadGenerators,
    #[error("unsupported cone/grading combination: {0}")]
    UnsupportedDerivation(String),
    #[error("quadratic form must have exactly one positive eigendirection")]
    BadQuadForm,
}

/// Tagged catalog of invariant convex cones.
#[derive(Debug, Clone)]
pub enum ConeKind {
    /// `Q(v,v) ≥ 0 ∧ ℓ(v) ≥ 0` (strict: both `>`).
    Quad {
        form: DMatrix<f64>,
        functional: DVector<f64>,
    },
    /// Invariant cone of sl(2,ℝ) on `(h, x₊, x₋)`-coordinates; the matrix
    /// entries are `a = h-coord/2`, `b = x₊-coord`, `c = x₋-coord`, and the
    /// predicate reads `a² + bc ≤ 0 ∧ orientation·(b − c) ≥ 0`.
    Sl2 { orientation: f64 },
    /// Nonnegative span of linearly independent generators. An empty list
    /// is the zero cone.
    Rays { generators: Vec<DVector<f64>> },
    /// Direct product, splitting the ambient coordinates in order.
    Product { parts: Vec<ConeSpec> },
    /// Intersection with the range of an idempotent projection.
    Slice {
        base: Box<ConeSpec>,
        projection: DMatrix<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct ConeSpec {
    label: String,
    ambient: usize,
    kind: ConeKind,
}

impl ConeSpec {
    pub fn quad(
        label: impl Into<String>,
        form: DMatrix<f64>,
        functional: DVector<f64>,
    ) -> Result<Self, ConeError> {
        let n = form.nrows();
        if form.ncols() != n || functional.len() != n {
            return Err(ConeError::DimensionMismatch {
                want: n,
                got: functional.len(),
            });
        }
        Ok(ConeSpec {
            label: label.into(),
            ambient: n,
            kind: ConeKind::Quad { form, functional },
        })
    }

    /// The sl(2,ℝ) invariant cone; `orientation = +1` selects the component
    /// containing the rotation generator `x₊ − x₋`.
    pub fn sl2(orientation: f64) -> Self {
        ConeSpec {
            label: format!("sl2-cone[{}]", if orientation >= 0.0 { "+" } else { "-" }),
            ambient: 3,
            kind: ConeKind::Sl2 {
                orientation: orientation.signum(),
            },
        }
    }

    pub fn rays(
        label: impl Into<String>,
        ambient: usize,
        generators: Vec<DVector<f64>>,
    ) -> Result<Self, ConeError> {
        for g in &generators {
            if g.len() != ambient {
                return Err(ConeError::BadGenerators);
            }
        }
        if !generators.is_empty() {
            let mut m = DMatrix::<f64>::zeros(ambient, generators.len());
            for (j, g) in generators.iter().enumerate() {
                m.set_column(j, g);
            }
            let rank = m.svd(false, false).rank(1e-10);
            if rank < generators.len() {
                return Err(ConeError::BadGenerators);
            }
        }
        Ok(ConeSpec {
            label: label.into(),
            ambient,
            kind: ConeKind::Rays { generators },
        })
    }

    pub fn product(label: impl Into<String>, parts: Vec<ConeSpec>) -> Self {
        let ambient = parts.iter().map(|p| p.ambient).sum();
        ConeSpec {
            label: label.into(),
            ambient,
            kind: ConeKind::Product { parts },
        }
    }

    pub fn slice(label: impl Into<String>, base: ConeSpec, projection: DMatrix<f64>) -> Self {
        let ambient = base.ambient;
        debug_assert_eq!(projection.nrows(), ambient);
        ConeSpec {
            label: label.into(),
            ambient,
            kind: ConeKind::Slice {
                base: Box::new(base),
                projection,
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    /// Generators, when the cone is ray-generated.
    pub fn generators(&self) -> Option<&[DVector<f64>]> {
        match &self.kind {
            ConeKind::Rays { generators } => Some(generators),
            _ => None,
        }
    }

    /// Exact membership predicate.
    pub fn member(&self, v: &DVector<f64>, strict: bool) -> Result<bool, ConeError> {
        self.member_with_tol(v, strict, &Tolerances::default())
    }

    pub fn member_with_tol(
        &self,
        v: &DVector<f64>,
        strict: bool,
        tol: &Tolerances,
    ) -> Result<bool, ConeError> {
        if v.len() != self.ambient {
            return Err(ConeError::DimensionMismatch {
                want: self.ambient,
                got: v.len(),
            });
        }
        Ok(match &self.kind {
            ConeKind::Quad { form, functional } => {
                let q = (v.transpose() * form * v)[(0, 0)];
                let l = functional.dot(v);
                if strict {
                    q > 0.0 && l > 0.0
                } else {
                    q >= 0.0 && l >= 0.0
                }
            }
            ConeKind::Sl2 { orientation } => {
                let (q, l) = sl2_margins(v, *orientation);
                if strict {
                    q > 0.0 && l > 0.0
                } else {
                    q >= 0.0 && l >= 0.0
                }
            }
            ConeKind::Rays { generators } => {
                let eps = tol.raycone * v.norm().max(1.0);
                if generators.is_empty() {
                    return Ok(if strict { false } else { v.norm() <= eps });
                }
                let (coeffs, residual) = ray_coefficients(generators, v);
                if residual > eps {
                    false
                } else if strict {
                    // Boundary ties resolve toward non-strict membership.
                    coeffs.iter().all(|&c| c > eps)
                } else {
                    coeffs.iter().all(|&c| c >= -eps)
                }
            }
            ConeKind::Product { parts } => {
                let mut offset = 0;
                for part in parts {
                    let sub = v.rows(offset, part.ambient).clone_owned();
                    if !part.member_with_tol(&sub, strict, tol)? {
                        return Ok(false);
                    }
                    offset += part.ambient;
                }
                true
            }
            ConeKind::Slice { base, projection } => {
                let proj = projection * v;
                let off_plane = (&proj - v).norm();
                if off_plane > tol.raycone * v.norm().max(1.0) {
                    false
                } else {
                    base.member_with_tol(v, strict, tol)?
                }
            }
        })
    }

    /// Signed scale-normalized distance proxy to the cone boundary:
    /// positive well inside, negative well outside, near zero on the
    /// boundary band. Used by agreement harnesses to exclude undecidable
    /// samples, never by the membership predicates themselves.
    pub fn margin(&self, v: &DVector<f64>) -> Result<f64, ConeError> {
        if v.len() != self.ambient {
            return Err(ConeError::DimensionMismatch {
                want: self.ambient,
                got: v.len(),
            });
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let vhat = v / norm;
        Ok(match &self.kind {
            ConeKind::Quad { form, functional } => {
                let q = (vhat.transpose() * form * &vhat)[(0, 0)];
                let l = functional.dot(&vhat);
                q.min(l)
            }
            ConeKind::Sl2 { orientation } => {
                let (q, l) = sl2_margins(&vhat, *orientation);
                q.min(l)
            }
            ConeKind::Rays { generators } => {
                if generators.is_empty() {
                    return Ok(-1.0);
                }
                let (coeffs, residual) = ray_coefficients(generators, &vhat);
                if residual > 1e-9 {
                    -residual
                } else {
                    coeffs.iter().cloned().fold(f64::MAX, f64::min)
                }
            }
            ConeKind::Product { parts } => {
                let mut worst = f64::MAX;
                let mut offset = 0;
                for part in parts {
                    let sub = v.rows(offset, part.ambient).clone_owned();
                    worst = worst.min(part.margin(&sub)? * sub.norm().max(1e-300) / norm);
                    offset += part.ambient;
                }
                worst
            }
            ConeKind::Slice { base, projection } => {
                let off_plane = (projection * &vhat - &vhat).norm();
                if off_plane > 1e-9 {
                    -off_plane
                } else {
                    base.margin(v)?
                }
            }
        })
    }

    /// Samples a member; `interior` asks for a strict member, otherwise a
    /// boundary ray is produced when the kind supports one.
    pub fn sample_member(&self, rng: &mut ChaCha8Rng, interior: bool) -> Option<DVector<f64>> {
        match &self.kind {
            ConeKind::Quad { form, functional } => {
                // Diagonalize Q; mix the positive axis with negative axes.
                let se = form.clone().symmetric_eigen();
                let mut pos_idx = None;
                for (i, l) in se.eigenvalues.iter().enumerate() {
                    if *l > 0.0 {
                        if pos_idx.is_some() {
                            return None;
                        }
                        pos_idx = Some(i);
                    }
                }
                let pi = pos_idx?;
                let lam0 = se.eigenvalues[pi];
                let mut axis = se.eigenvectors.column(pi).clone_owned();
                if functional.dot(&axis) < 0.0 {
                    axis = -axis;
                }
                let mut v = axis.clone();
                let rho: f64 = if interior {
                    rng.random_range(0.0..0.9)
                } else {
                    1.0
                };
                // Budget the negative-direction excursion so Q(v,v) ≥ 0.
                let mut budget = lam0;
                let mut dirs = Vec::new();
                for (i, l) in se.eigenvalues.iter().enumerate() {
                    if *l < -1e-12 {
                        dirs.push((i, -*l));
                    }
                }
                if !dirs.is_empty() {
                    let weights: Vec<f64> =
                        (0..dirs.len()).map(|_| rng.random_range(0.0..1.0)).collect();
                    let total: f64 = weights.iter().sum::<f64>().max(1e-12);
                    for ((i, lneg), w) in dirs.iter().zip(&weights) {
                        let share = budget * rho * rho * w / total;
                        let coeff = (share / lneg).sqrt();
                        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                        v += se.eigenvectors.column(*i) * (coeff * sign);
                    }
                    budget = 0.0;
                }
                let _ = budget;
                let scale: f64 = rng.random_range(0.2..2.0);
                Some(v * scale)
            }
            ConeKind::Sl2 { orientation } => {
                // Coordinates (a', b, c) with w = (b−c)/2 ≥ sqrt(a² + u²),
                // u = (b+c)/2, a = a'/2.
                let a: f64 = rng.random_range(-1.0..1.0);
                let u: f64 = rng.random_range(-1.0..1.0);
                let base = (a * a + u * u).sqrt();
                let w = if interior {
                    base + rng.random_range(0.05..1.0)
                } else {
                    base
                };
                let w = w * orientation.signum();
                let b = u + w;
                let c = u - w;
                Some(DVector::from_column_slice(&[2.0 * a, b, c]))
            }
            ConeKind::Rays { generators } => {
                if generators.is_empty() {
                    return if interior {
                        None
                    } else {
                        Some(DVector::zeros(self.ambient))
                    };
                }
                let mut v = DVector::zeros(self.ambient);
                let kill = if interior || generators.len() == 1 {
                    usize::MAX
                } else {
                    rng.random_range(0..generators.len())
                };
                for (i, g) in generators.iter().enumerate() {
                    if i == kill {
                        continue;
                    }
                    v += g * rng.random_range(0.1..2.0);
                }
                Some(v)
            }
            ConeKind::Product { parts } => {
                let mut v = DVector::zeros(self.ambient);
                let mut offset = 0;
                for part in parts {
                    let sub = part.sample_member(rng, interior)?;
                    v.rows_mut(offset, part.ambient).copy_from(&sub);
                    offset += part.ambient;
                }
                Some(v)
            }
            ConeKind::Slice { base, projection } => {
                // Project a base sample into the slice; for the catalog
                // slices the projection of a member stays a member.
                for _ in 0..32 {
                    let cand = base.sample_member(rng, interior)?;
                    let proj = projection * cand;
                    if self.member(&proj, interior).unwrap_or(false) {
                        return Some(proj);
                    }
                }
                None
            }
        }
    }
}

fn sl2_margins(v: &DVector<f64>, orientation: f64) -> (f64, f64) {
    let a = v[0] / 2.0;
    let b = v[1];
    let c = v[2];
    (-(a * a + b * c), orientation * (b - c))
}

/// Unique expansion coefficients of `v` over independent generators, with
/// the off-span residual. This is the feasibility solve behind ray cones.
fn ray_coefficients(generators: &[DVector<f64>], v: &DVector<f64>) -> (Vec<f64>, f64) {
    let n = generators[0].len();
    let k = generators.len();
    let mut g = DMatrix::<f64>::zeros(n, k);
    for (j, gen) in generators.iter().enumerate() {
        g.set_column(j, gen);
    }
    let gtg = g.transpose() * &g;
    let gtv = g.transpose() * v;
    let coeffs = gtg
        .lu()
        .solve(&gtv)
        .expect("independent generators have invertible Gram matrix");
    let residual = (&g * &coeffs - v).norm();
    (coeffs.as_slice().to_vec(), residual)
}

/// Grading projections on the coordinate space a cone lives in.
#[derive(Debug, Clone)]
pub struct CoordGrading {
    pub p_minus: DMatrix<f64>,
    pub p_zero: DMatrix<f64>,
    pub p_plus: DMatrix<f64>,
}

impl From<&Grading3> for CoordGrading {
    fn from(g3: &Grading3) -> Self {
        CoordGrading {
            p_minus: g3.p_minus().clone(),
            p_zero: g3.p_zero().clone(),
            p_plus: g3.p_plus().clone(),
        }
    }
}

impl CoordGrading {
    /// Builds the grading of a linear flow generator acting directly on the
    /// ambient coordinates, assuming spectrum `{−1, 0, 1}`.
    pub fn from_generator(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let a2 = a * a;
        CoordGrading {
            p_minus: (&a2 - a) * 0.5,
            p_zero: &id - &a2,
            p_plus: (&a2 + a) * 0.5,
        }
    }
}

/// The derived cones `C₊ = C ∩ E₊`, `C₋ = (−C) ∩ E₋` and `C^c = C₊ + C₋`,
/// in closed form for catalog cones whose grading eigenspaces `E_{±1}` are
/// at most one-dimensional.
pub fn derived_cones(
    cone: &ConeSpec,
    grading: &CoordGrading,
    tol: &Tolerances,
) -> Result<(ConeSpec, ConeSpec, ConeSpec), ConeError> {
    let plus_dirs = eigenspace_directions(&grading.p_plus)?;
    let minus_dirs = eigenspace_directions(&grading.p_minus)?;

    let mut plus_gens = Vec::new();
    for u in &plus_dirs {
        // v ∈ C₊ ⟺ v ∈ E₊ and v ∈ C.
        if cone.member_with_tol(u, false, tol)? {
            plus_gens.push(u.clone());
        }
        let neg = -u;
        if cone.member_with_tol(&neg, false, tol)? {
            plus_gens.push(neg);
        }
    }
    let mut minus_gens = Vec::new();
    for u in &minus_dirs {
        // v ∈ C₋ ⟺ v ∈ E₋ and −v ∈ C.
        let neg = -u;
        if cone.member_with_tol(&neg, false, tol)? {
            minus_gens.push(u.clone());
        }
        if cone.member_with_tol(u, false, tol)? {
            minus_gens.push(-u);
        }
    }

    let ambient = cone.ambient();
    let c_plus = ConeSpec::rays(format!("{}+", cone.label()), ambient, plus_gens.clone())?;
    let c_minus = ConeSpec::rays(format!("{}-", cone.label()), ambient, minus_gens.clone())?;
    let mut all = plus_gens;
    all.extend(minus_gens);
    let c_c = ConeSpec::rays(format!("{}^c", cone.label()), ambient, all)?;
    Ok((c_plus, c_minus, c_c))
}

/// Unit directions spanning the range of an eigenprojection, accepting only
/// zero- or one-dimensional ranges (the catalog case).
fn eigenspace_directions(p: &DMatrix<f64>) -> Result<Vec<DVector<f64>>, ConeError> {
    let rank = p.trace().round() as usize;
    match rank {
        0 => Ok(vec![]),
        1 => {
            let svd = p.clone().svd(true, false);
            let u = svd.u.as_ref().expect("requested u");
            let mut best = 0;
            for i in 0..svd.singular_values.len() {
                if svd.singular_values[i] > svd.singular_values[best] {
                    best = i;
                }
            }
            let dir = u.column(best).clone_owned();
            let norm = dir.norm();
            Ok(vec![dir / norm])
        }
        d => Err(ConeError::UnsupportedDerivation(format!(
            "grading eigenspace has dimension {d}; only 0 or 1 supported"
        ))),
    }
}

/// Samples group elements (as matrices acting on the ambient space) and
/// cone members, and verifies that membership is preserved.
pub fn check_invariance(
    cone: &ConeSpec,
    mut group_sampler: impl FnMut(&mut ChaCha8Rng) -> DMatrix<f64>,
    n: usize,
    seed: u64,
) -> VerifyReport {
    let tol = Tolerances::default();
    let seeds = SeedStream::new(seed);
    let mut report = VerifyReport::new(
        format!("cone-invariance[{}]", cone.label()),
        seed,
        tol.as_map(),
    );
    let start = std::time::Instant::now();
    for i in 0..n {
        let mut rng = seeds.rng(i as u64);
        let g = group_sampler(&mut rng);
        let interior = i % 2 == 0;
        let Some(v) = cone.sample_member(&mut rng, interior) else {
            report.record_boundary();
            continue;
        };
        let image = &g * &v;
        // Membership preserved up to the boundary band: exact predicates
        // cannot decide points that sit on the boundary to machine
        // precision, which is where half the samples are placed.
        let m_img = cone.margin(&image).unwrap_or(-1.0);
        let preserved = m_img >= -tol.band;
        let interior_ok = !interior || cone.member_with_tol(&image, false, &tol).unwrap_or(false);
        if preserved && interior_ok {
            report.record_pass();
        } else {
            let mut values = std::collections::BTreeMap::new();
            values.insert("membership_preserved".to_string(), preserved);
            values.insert("interior_preserved".to_string(), interior_ok);
            report.record_mismatch(image.as_slice().to_vec(), values);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::grading;
    use crate::liealg::{builtin_algebra, is_elliptic, Builtin};
    use crate::numkernel::expm;
    use rand::SeedableRng;

    fn dvec(s: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(s)
    }

    #[test]
    fn sl2_cone_examples() {
        let c = ConeSpec::sl2(1.0);
        // z = x+ - x-: strict member.
        let z = dvec(&[0.0, 1.0, -1.0]);
        assert!(c.member(&z, true).unwrap());
        // h: not a member (a² = 1/4 > 0).
        let h = dvec(&[1.0, 0.0, 0.0]);
        assert!(!c.member(&h, false).unwrap());
        // x+: boundary ray, member but not strict.
        let xp = dvec(&[0.0, 1.0, 0.0]);
        assert!(c.member(&xp, false).unwrap());
        assert!(!c.member(&xp, true).unwrap());
        // Opposite orientation flips the component.
        let cneg = ConeSpec::sl2(-1.0);
        assert!(!cneg.member(&z, false).unwrap());
        assert!(cneg.member(&-z.clone(), true).unwrap());
    }

    #[test]
    fn ads_quad_cone_at_base_point() {
        // q ≅ e0-perp with Q = diag(1,-1,...,-1) on (x1..xd), ℓ = x1.
        let d = 4;
        let mut q = DMatrix::<f64>::identity(d, d) * -1.0;
        q[(0, 0)] = 1.0;
        let mut ell = DVector::zeros(d);
        ell[0] = 1.0;
        let c = ConeSpec::quad("ads-cone", q, ell).unwrap();
        let e1 = dvec(&[1.0, 0.0, 0.0, 0.0]);
        assert!(c.member(&e1, true).unwrap());
        assert!(!c.member(&-e1.clone(), false).unwrap());
        let lightray = dvec(&[1.0, 1.0, 0.0, 0.0]);
        assert!(c.member(&lightray, false).unwrap());
        assert!(!c.member(&lightray, true).unwrap());
    }

    #[test]
    fn ray_cone_membership_and_strictness() {
        let c = ConeSpec::rays(
            "quadrant",
            3,
            vec![dvec(&[0.0, 1.0, 0.0]), dvec(&[0.0, 0.0, 1.0])],
        )
        .unwrap();
        assert!(c.member(&dvec(&[0.0, 1.0, 2.0]), true).unwrap());
        assert!(c.member(&dvec(&[0.0, 1.0, 0.0]), false).unwrap());
        assert!(!c.member(&dvec(&[0.0, 1.0, 0.0]), true).unwrap());
        assert!(!c.member(&dvec(&[0.0, -1.0, 1.0]), false).unwrap());
        // Off-span vectors are rejected.
        assert!(!c.member(&dvec(&[1.0, 1.0, 1.0]), false).unwrap());
        // Zero cone.
        let z = ConeSpec::rays("zero", 2, vec![]).unwrap();
        assert!(z.member(&dvec(&[0.0, 0.0]), false).unwrap());
        assert!(!z.member(&dvec(&[0.0, 0.0]), true).unwrap());
        assert!(!z.member(&dvec(&[1e-3, 0.0]), false).unwrap());
    }

    #[test]
    fn dependent_generators_rejected() {
        let bad = ConeSpec::rays(
            "dependent",
            2,
            vec![dvec(&[1.0, 0.0]), dvec(&[2.0, 0.0])],
        );
        assert!(matches!(bad, Err(ConeError::BadGenerators)));
    }

    #[test]
    fn derived_cones_for_sl2() {
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let h = g.element(&[1.0, 0.0, 0.0]).unwrap();
        let g3 = grading(&h).unwrap();
        let cone = ConeSpec::sl2(1.0);
        let (cp, cm, cc) = derived_cones(&cone, &CoordGrading::from(&g3), &Tolerances::default())
            .unwrap();
        // C+ = R+ x+, C- = R+ x-.
        let gens_p = cp.generators().unwrap();
        assert_eq!(gens_p.len(), 1);
        assert!((gens_p[0].normalize() - dvec(&[0.0, 1.0, 0.0])).norm() < 1e-10);
        let gens_m = cm.generators().unwrap();
        assert_eq!(gens_m.len(), 1);
        assert!((gens_m[0].normalize() - dvec(&[0.0, 0.0, 1.0])).norm() < 1e-10);
        // C^c members: a x+ + b x- with a, b ≥ 0.
        assert!(cc.member(&dvec(&[0.0, 1.0, 1.0]), true).unwrap());
        assert!(!cc.member(&dvec(&[0.0, 1.0, -1.0]), false).unwrap());
    }

    #[test]
    fn derived_cone_samples_pass_defining_intersection() {
        // Cross-check: strict members of the C± candidates satisfy the
        // defining predicate (membership in ±C and in the eigenspace).
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let h = g.element(&[1.0, 0.0, 0.0]).unwrap();
        let g3 = grading(&h).unwrap();
        let grading_c = CoordGrading::from(&g3);
        let cone = ConeSpec::sl2(1.0);
        let (cp, cm, _) = derived_cones(&cone, &grading_c, &Tolerances::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..64 {
            if let Some(v) = cp.sample_member(&mut rng, true) {
                assert!(cone.member(&v, false).unwrap());
                assert!(((&grading_c.p_plus) * &v - &v).norm() < 1e-9 * v.norm().max(1.0));
            }
            if let Some(v) = cm.sample_member(&mut rng, true) {
                let neg = -v.clone();
                assert!(cone.member(&neg, false).unwrap());
                assert!(((&grading_c.p_minus) * &v - &v).norm() < 1e-9 * v.norm().max(1.0));
            }
        }
    }

    #[test]
    fn sampled_strict_sl2_members_are_elliptic() {
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let cone = ConeSpec::sl2(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let v = cone.sample_member(&mut rng, true).unwrap();
            assert!(cone.member(&v, true).unwrap());
            let x = g.element_from_vec(v).unwrap();
            assert!(is_elliptic(&x), "strict cone member must be elliptic");
        }
    }

    #[test]
    fn limit_projection_of_cone_elements() {
        // e^{-t} e^{±t ad h} x converges to a member of ±C as t → ∞;
        // checked at t = 30 with tolerance 1e-6.
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let h = g.element(&[1.0, 0.0, 0.0]).unwrap();
        let adh = crate::liealg::ad(&h).real_part();
        let cone = ConeSpec::sl2(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let t = 30.0;
        let flow_p = expm(&crate::numkernel::Mat::from_real(adh.clone() * t).unwrap())
            .unwrap()
            .real_part()
            * (-t).exp();
        let flow_m = expm(&crate::numkernel::Mat::from_real(adh * (-t)).unwrap())
            .unwrap()
            .real_part()
            * (-t).exp();
        for _ in 0..1000 {
            let interior = rng.random_bool(0.5);
            let x = cone.sample_member(&mut rng, interior).unwrap();
            let xp = &flow_p * &x;
            let xm = &flow_m * &x;
            assert!(
                cone.margin(&xp).unwrap() >= -1e-6,
                "positive limit projection left the cone"
            );
            // Both limits stay in C itself; the negative one lands on
            // the ray C ∩ q₋₁ = −C₋.
            assert!(
                cone.margin(&xm).unwrap() >= -1e-6,
                "negative limit projection left the cone"
            );
        }
    }

    #[test]
    fn invariance_under_sl2_adjoint_samples() {
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let cone = ConeSpec::sl2(1.0);
        let g2 = g.clone();
        let report = check_invariance(
            &cone,
            move |rng| {
                // Ad(exp x) on coordinates = expm(ad x).
                let x = g2
                    .element(&[
                        rng.random_range(-1.5..1.5),
                        rng.random_range(-1.5..1.5),
                        rng.random_range(-1.5..1.5),
                    ])
                    .unwrap();
                expm(&crate::liealg::ad(&x)).unwrap().real_part()
            },
            500,
            7,
        );
        assert!(report.consistent());
        assert!(
            report.all_passed(),
            "invariance mismatches: {:?}",
            report.mismatches
        );
    }

    #[test]
    fn identity_preserves_everything() {
        let cone = ConeSpec::sl2(1.0);
        let report = check_invariance(&cone, |_| DMatrix::identity(3, 3), 50, 3);
        assert!(report.all_passed());
    }

    #[test]
    fn group_type_slice_cone() {
        // C = {(x, -x) : x ∈ C_sl2} inside sl2 ⊕ sl2 coordinates.
        let plus = ConeSpec::sl2(1.0);
        let minus = ConeSpec::sl2(-1.0); // -C in the second factor
        let product = ConeSpec::product("sl2 x -sl2", vec![plus, minus]);
        let mut proj = DMatrix::<f64>::zeros(6, 6);
        for i in 0..3 {
            proj[(i, i)] = 0.5;
            proj[(i, i + 3)] = -0.5;
            proj[(i + 3, i)] = -0.5;
            proj[(i + 3, i + 3)] = 0.5;
        }
        let cone = ConeSpec::slice("group-type", product, proj);
        // (z, -z) for elliptic z is a strict member.
        let z = dvec(&[0.0, 1.0, -1.0, 0.0, -1.0, 1.0]);
        assert!(cone.member(&z, true).unwrap());
        // (z, z) is off the antidiagonal slice.
        let bad = dvec(&[0.0, 1.0, -1.0, 0.0, 1.0, -1.0]);
        assert!(!cone.member(&bad, false).unwrap());
        // Sampler produces members.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..32 {
            let v = cone.sample_member(&mut rng, true).unwrap();
            assert!(cone.member(&v, true).unwrap());
        }
    }

    #[test]
    fn margin_sign_convention() {
        let cone = ConeSpec::sl2(1.0);
        assert!(cone.margin(&dvec(&[0.0, 1.0, -1.0])).unwrap() > 1e-3);
        assert!(cone.margin(&dvec(&[1.0, 0.0, 0.0])).unwrap() < -1e-3);
        assert!(cone.margin(&dvec(&[0.0, 1.0, 0.0])).unwrap().abs() < 1e-12);
    }
}
