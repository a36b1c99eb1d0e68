//! Symmetric Lie algebras `(g, τ)`: the `h ⊕ q` eigenspace decomposition,
//! the four-subspace refinement by a commuting Cartan involution, c-duality,
//! and the embedding `x ↦ (x, τx)` into group type.
//!
//! The c-dual is realized on the same real coordinate space by twisting the
//! structure constants: brackets with at least one `h`-argument are kept,
//! `(q,q)`-brackets flip sign. Matrix representatives of the dual are the
//! complex matrices `m(x_h) + i·m(x_q)`, which makes the twisted bracket an
//! honest matrix commutator again.

use crate::euler::{EulerError, InvolutionMap};
use crate::liealg::{bracket, AlgElement, LieError, MatrixLieAlgebra};
use crate::numkernel::{Mat, NumError, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error("subspace bracket relation {relation} violated (residual {residual:.3e})")]
    SubspaceBracket {
        relation: &'static str,
        residual: f64,
    },
    #[error("involutions do not commute (residual {residual:.3e})")]
    NonCommutingInvolutions { residual: f64 },
}

/// A symmetric Lie algebra `(g, τ)` with the projections onto
/// `h = g^τ` and `q = g^{−τ}`.
#[derive(Debug, Clone)]
pub struct SymmetricPair {
    algebra: Arc<MatrixLieAlgebra>,
    tau: InvolutionMap,
    p_h: DMatrix<f64>,
    p_q: DMatrix<f64>,
}

impl SymmetricPair {
    pub fn algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.algebra
    }

    pub fn tau(&self) -> &InvolutionMap {
        &self.tau
    }

    pub fn p_h(&self) -> &DMatrix<f64> {
        &self.p_h
    }

    pub fn p_q(&self) -> &DMatrix<f64> {
        &self.p_q
    }

    pub fn dim_h(&self) -> usize {
        self.p_h.trace().round() as usize
    }

    pub fn dim_q(&self) -> usize {
        self.p_q.trace().round() as usize
    }

    pub fn project_h(&self, x: &AlgElement) -> AlgElement {
        self.algebra
            .element_from_vec(&self.p_h * x.coords())
            .expect("projection preserves dimension")
    }

    pub fn project_q(&self, x: &AlgElement) -> AlgElement {
        self.algebra
            .element_from_vec(&self.p_q * x.coords())
            .expect("projection preserves dimension")
    }
}

/// Builds and verifies a symmetric pair from an involutive automorphism.
pub fn make_pair(
    algebra: &Arc<MatrixLieAlgebra>,
    tau: InvolutionMap,
) -> Result<SymmetricPair, SymError> {
    let tol = Tolerances::default();
    let n = algebra.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let p_h = (&id + tau.matrix()) * 0.5;
    let p_q = (&id - tau.matrix()) * 0.5;
    debug_assert!(((&p_h + &p_q) - &id).norm() < tol.mat);

    let pair = SymmetricPair {
        algebra: Arc::clone(algebra),
        tau,
        p_h,
        p_q,
    };

    // [h,h] ⊆ h, [h,q] ⊆ q, [q,q] ⊆ h on seeded random samples.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7a7);
    for _ in 0..16 {
        let x = algebra
            .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
            .expect("finite");
        let y = algebra
            .element_from_vec(DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
            .expect("finite");
        let checks: [(&'static str, AlgElement, AlgElement, bool); 3] = [
            ("[h,h] in h", pair.project_h(&x), pair.project_h(&y), true),
            ("[h,q] in q", pair.project_h(&x), pair.project_q(&y), false),
            ("[q,q] in h", pair.project_q(&x), pair.project_q(&y), true),
        ];
        for (relation, a, b, lands_in_h) in checks {
            let br = bracket(&a, &b)?;
            let off = if lands_in_h {
                pair.project_q(&br).norm()
            } else {
                pair.project_h(&br).norm()
            };
            if off > 1e-8 * br.norm().max(1.0) {
                return Err(SymError::SubspaceBracket {
                    relation,
                    residual: off,
                });
            }
        }
    }
    Ok(pair)
}

/// The four-subspace refinement by a Cartan involution commuting with τ.
#[derive(Debug, Clone)]
pub struct CartanData {
    theta: InvolutionMap,
    p_hk: DMatrix<f64>,
    p_hp: DMatrix<f64>,
    p_qk: DMatrix<f64>,
    p_qp: DMatrix<f64>,
}

impl CartanData {
    pub fn theta(&self) -> &InvolutionMap {
        &self.theta
    }

    pub fn dims(&self) -> (usize, usize, usize, usize) {
        let r = |p: &DMatrix<f64>| p.trace().round() as usize;
        (r(&self.p_hk), r(&self.p_hp), r(&self.p_qk), r(&self.p_qp))
    }
}

/// Combines a symmetric pair with a commuting Cartan involution θ.
pub fn cartan_refinement(
    pair: &SymmetricPair,
    theta: InvolutionMap,
) -> Result<CartanData, SymError> {
    let tol = Tolerances::default();
    let commute = (pair.tau.matrix() * theta.matrix() - theta.matrix() * pair.tau.matrix()).norm();
    if commute > tol.resid {
        return Err(SymError::NonCommutingInvolutions { residual: commute });
    }
    let n = pair.algebra.dim();
    let id = DMatrix::<f64>::identity(n, n);
    let p_k = (&id + theta.matrix()) * 0.5;
    let p_p = (&id - theta.matrix()) * 0.5;
    let p_hk = &pair.p_h * &p_k;
    let p_hp = &pair.p_h * &p_p;
    let p_qk = &pair.p_q * &p_k;
    let p_qp = &pair.p_q * &p_p;
    let sum_resid = (&p_hk + &p_hp + &p_qk + &p_qp - &id).norm();
    if sum_resid > 1e-8 {
        return Err(SymError::SubspaceBracket {
            relation: "four-subspace direct sum",
            residual: sum_resid,
        });
    }
    Ok(CartanData {
        theta,
        p_hk,
        p_hp,
        p_qk,
        p_qp,
    })
}

/// The c-dual symmetric Lie algebra on `h + iq`, realized by sign-twisted
/// structure constants on the same real coordinate space.
pub fn c_dual(pair: &SymmetricPair) -> Result<SymmetricPair, SymError> {
    let alg = &pair.algebra;
    let n = alg.dim();
    // New basis matrices: m(P_h b_j) + i·m(P_q b_j).
    let mut basis = Vec::with_capacity(n);
    for j in 0..n {
        let mut unit = DVector::<f64>::zeros(n);
        unit[j] = 1.0;
        let e = alg.element_from_vec(unit).expect("unit coordinate");
        let h_part = pair.project_h(&e).matrix();
        let q_part = pair.project_q(&e).matrix();
        let dual = h_part
            .inner()
            .clone()
            .zip_map(q_part.inner(), |a, b| a + Complex64::new(0.0, 1.0) * b);
        basis.push(Mat::new(dual)?);
    }
    let name = format!("{}^c", alg.name());
    // Jacobi is re-verified by the constructor; a failure here would signal
    // an implementation bug, not bad input.
    let dual_alg = MatrixLieAlgebra::new(name, basis)?;
    let tau = InvolutionMap::new(
        &dual_alg,
        pair.tau.matrix().clone(),
        format!("{}^c", pair.tau.label()),
    )?;
    make_pair(&dual_alg, tau)
}

/// The group-type embedding `ι(x) = (x, τx)` into `(g ⊕ g, τ_flip)`.
#[derive(Debug, Clone)]
pub struct GroupTypeEmbedding {
    sum_algebra: Arc<MatrixLieAlgebra>,
    flip: InvolutionMap,
    iota: DMatrix<f64>,
}

impl GroupTypeEmbedding {
    pub fn sum_algebra(&self) -> &Arc<MatrixLieAlgebra> {
        &self.sum_algebra
    }

    pub fn flip(&self) -> &InvolutionMap {
        &self.flip
    }

    pub fn iota_matrix(&self) -> &DMatrix<f64> {
        &self.iota
    }

    pub fn embed(&self, x: &AlgElement) -> AlgElement {
        self.sum_algebra
            .element_from_vec(&self.iota * x.coords())
            .expect("embedding dimensions")
    }

    /// Rank of the embedding matrix (equals dim g: ι is injective).
    pub fn rank(&self) -> usize {
        Mat::from_real(self.iota.clone()).expect("finite").rank(1e-10)
    }
}

pub fn group_type_embed(pair: &SymmetricPair) -> Result<GroupTypeEmbedding, SymError> {
    let alg = &pair.algebra;
    let sum = MatrixLieAlgebra::direct_sum(alg, alg)?;
    let flip = InvolutionMap::flip(&sum)?;
    let n = alg.dim();
    let mut iota = DMatrix::<f64>::zeros(2 * n, n);
    iota.view_mut((0, 0), (n, n))
        .copy_from(&DMatrix::identity(n, n));
    iota.view_mut((n, 0), (n, n)).copy_from(pair.tau.matrix());
    Ok(GroupTypeEmbedding {
        sum_algebra: sum,
        flip,
        iota,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{grading, tau_h};
    use crate::liealg::{builtin_algebra, is_elliptic, is_hyperbolic, Builtin};

    fn sl2_tauh_pair() -> SymmetricPair {
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let h = g.element(&[1.0, 0.0, 0.0]).unwrap();
        let g3 = grading(&h).unwrap();
        make_pair(&g, tau_h(&g3)).unwrap()
    }

    #[test]
    fn sl2_with_tau_h_splits_one_two() {
        let pair = sl2_tauh_pair();
        assert_eq!(pair.dim_h(), 1);
        assert_eq!(pair.dim_q(), 2);
    }

    #[test]
    fn flip_pair_on_double_sl2() {
        let g = builtin_algebra(Builtin::Sl2).unwrap();
        let gg = MatrixLieAlgebra::direct_sum(&g, &g).unwrap();
        let flip = InvolutionMap::flip(&gg).unwrap();
        let pair = make_pair(&gg, flip).unwrap();
        assert_eq!(pair.dim_h(), 3); // diagonal copy
        assert_eq!(pair.dim_q(), 3);
    }

    #[test]
    fn ads_pair_tangent_dimension() {
        // so(2, d-1) with conjugation by the reflection fixing e0:
        // h ≅ so(1, d-1), q ≅ tangent space of dimension d.
        for d in [2usize, 3, 4] {
            let g = builtin_algebra(Builtin::So2 { d }).unwrap();
            let n = d + 1;
            let mut s = DMatrix::<f64>::identity(n, n);
            for k in 1..n {
                s[(k, k)] = -1.0;
            }
            let tau =
                InvolutionMap::from_conjugation(&g, &Mat::from_real(s).unwrap(), "theta_e0")
                    .unwrap();
            let pair = make_pair(&g, tau).unwrap();
            assert_eq!(pair.dim_q(), d, "tangent dim at d={d}");
            assert_eq!(pair.dim_h(), d * (d - 1) / 2, "so(1,d-1) dim at d={d}");
        }
    }

    #[test]
    fn c_dual_is_involutive_on_structure_constants() {
        let pair = sl2_tauh_pair();
        let dual = c_dual(&pair).unwrap();
        let double = c_dual(&dual).unwrap();
        let orig = pair.algebra();
        let back = double.algebra();
        assert_eq!(orig.dim(), back.dim());
        for i in 0..orig.dim() {
            let diff = (&orig.ad_basis()[i] - &back.ad_basis()[i]).norm();
            assert!(diff < 1e-10, "structure constants differ at basis {i}");
        }
    }

    #[test]
    fn sl2_cayley_type_is_self_c_dual() {
        // Killing signature (2,1) and dim 3 pin the dual down to sl2(R).
        let pair = sl2_tauh_pair();
        let dual = c_dual(&pair).unwrap();
        assert_eq!(dual.algebra().dim(), 3);
        let eigs = dual
            .algebra()
            .killing()
            .clone()
            .symmetric_eigen()
            .eigenvalues;
        let pos = eigs.iter().filter(|&&l| l > 1e-9).count();
        let neg = eigs.iter().filter(|&&l| l < -1e-9).count();
        assert_eq!((pos, neg), (2, 1));
    }

    #[test]
    fn c_dual_flips_elliptic_to_hyperbolic() {
        let pair = sl2_tauh_pair();
        let dual = c_dual(&pair).unwrap();
        // z = x+ - x- lies in q and is elliptic in sl2; the element with the
        // same coordinates in the c-dual is hyperbolic.
        let z = pair.algebra().element(&[0.0, 1.0, -1.0]).unwrap();
        let z_dual = dual.algebra().element(&[0.0, 1.0, -1.0]).unwrap();
        assert!(is_elliptic(&z));
        assert!(!is_hyperbolic(&z));
        assert!(is_hyperbolic(&z_dual));
        assert!(!is_elliptic(&z_dual));
    }

    #[test]
    fn group_type_embedding_properties() {
        let pair = sl2_tauh_pair();
        let emb = group_type_embed(&pair).unwrap();
        let g = pair.algebra().clone();

        // iota(h) = (h, h) for h in the fixed algebra of tau.
        let h = g.element(&[1.0, 0.0, 0.0]).unwrap();
        let ih = emb.embed(&h);
        assert!((ih.coords().rows(0, 3) - h.coords()).norm() < 1e-12);
        assert!((ih.coords().rows(3, 3) - h.coords()).norm() < 1e-12);

        // iota(x) fixed by flip iff x in g^tau.
        let flip = emb.flip();
        let fixed = flip.apply(&ih);
        assert!((fixed.coords() - ih.coords()).norm() < 1e-12);
        let xp = g.element(&[0.0, 1.0, 0.0]).unwrap();
        let ixp = emb.embed(&xp);
        assert!((flip.apply(&ixp).coords() - ixp.coords()).norm() > 0.5);

        // Bracket preservation on seeded random pairs.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..16 {
            let mut rand_el = || {
                g.element(&[
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ])
                .unwrap()
            };
            let x = rand_el();
            let y = rand_el();
            let lhs = emb.embed(&bracket(&x, &y).unwrap());
            let rhs = bracket(&emb.embed(&x), &emb.embed(&y)).unwrap();
            assert!((lhs.coords() - rhs.coords()).norm() < 1e-9);
        }

        // Injectivity: full column rank.
        assert_eq!(emb.rank(), 3);
    }

    #[test]
    fn cartan_refinement_on_sl2() {
        // theta(x) = -x^T commutes with tau_h. In basis (h, x+, x-):
        // theta(h) = -h, theta(x+) = -x-, theta(x-) = -x+.
        let pair = sl2_tauh_pair();
        let g = pair.algebra().clone();
        let theta_m =
            DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]);
        let theta = InvolutionMap::new(&g, theta_m, "neg-transpose").unwrap();
        let cd = cartan_refinement(&pair, theta).unwrap();
        // h_k = 0, h_p = Rh, q_k = R(x+ - x-), q_p = R(x+ + x-).
        assert_eq!(cd.dims(), (0, 1, 1, 1));
    }

    #[test]
    fn non_commuting_involutions_rejected() {
        let pair = sl2_tauh_pair();
        let g = pair.algebra().clone();
        // theta'(x) = conjugation by the rotation r(pi/2) composed with
        // negative transpose does not commute with tau_h.
        let bad = DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 2.0, 1.0]);
        // Not even involutive; the constructor already rejects it.
        assert!(InvolutionMap::new(&g, bad, "bad").is_err());
        // An honest involution that fails to commute: swap h <-> (x+ + x-)/sqrt2?
        // Use conjugation by exp(z pi/4), a rotation mixing the grading.
        let rot = crate::numkernel::expm(
            &g.element(&[0.0, 1.0, -1.0]).unwrap().matrix().scale(
                Complex64::from(std::f64::consts::FRAC_PI_4),
            ),
        )
        .unwrap();
        if let Ok(theta) = InvolutionMap::from_conjugation(&g, &rot, "rotated") {
            assert!(cartan_refinement(&pair, theta).is_err());
        }
    }
}
