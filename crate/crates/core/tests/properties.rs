//! Property-based invariants spanning the crate's modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use wedgekit::cones::ConeSpec;
use wedgekit::euler::grading;
use wedgekit::liealg::{bracket, builtin_algebra, builtin_euler_element, Builtin};
use wedgekit::numkernel::{eig, expm, logm_principal, Mat};

fn mat_from(entries: &[f64], n: usize, target_norm: f64) -> Mat {
    let m = DMatrix::from_row_slice(n, n, entries);
    let norm = m.norm().max(1e-9);
    Mat::from_real(m * (target_norm / norm)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// expm(A)·expm(−A) = I for ‖A‖ ≤ 10.
    #[test]
    fn expm_inverse_relation(
        entries in prop::collection::vec(-1.0f64..1.0, 9),
        scale in 0.1f64..10.0,
    ) {
        let a = mat_from(&entries, 3, scale);
        let e = expm(&a).unwrap();
        let em = expm(&a.scale(Complex64::from(-1.0))).unwrap();
        let resid = e.mul(&em).sub(&Mat::identity(3)).norm_fro();
        prop_assert!(resid < 1e-9, "residual {resid}");
    }

    /// logm_principal ∘ expm = id on ‖A‖ < 1 (spectrum stays off the cut).
    #[test]
    fn logm_round_trip(
        entries in prop::collection::vec(-1.0f64..1.0, 9),
        scale in 0.01f64..0.95,
    ) {
        let a = mat_from(&entries, 3, scale);
        let back = logm_principal(&expm(&a).unwrap()).unwrap();
        prop_assert!(back.sub(&a).norm_fro() < 1e-8);
    }

    /// For diagonalizable input the spectral route reproduces expm.
    #[test]
    fn expm_spectral_cross_check(
        diag in prop::collection::vec(-2.0f64..2.0, 4),
        entries in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        // A = Q D Q^T with orthogonal Q from a QR factorization.
        let raw = DMatrix::from_row_slice(4, 4, &entries)
            + DMatrix::<f64>::identity(4, 4) * 3.0;
        let q = raw.qr().q();
        let d = DMatrix::from_diagonal(&DVector::from_vec(diag.clone()));
        let a = &q * &d * q.transpose();
        let e = expm(&Mat::from_real(a.clone()).unwrap()).unwrap();
        let ed = DMatrix::from_diagonal(&DVector::from_vec(
            diag.iter().map(|x| x.exp()).collect(),
        ));
        let expected = &q * ed * q.transpose();
        let scale = expected.norm().max(1.0);
        let resid = (e.real_part() - expected).norm() / scale;
        prop_assert!(resid < 1e-8, "spectral cross-check residual {resid}");
    }

    /// The Killing form is ad-invariant: κ([x,y],z) + κ(y,[x,z]) = 0.
    #[test]
    fn killing_form_ad_invariance(
        xs in prop::collection::vec(-1.0f64..1.0, 6),
        ys in prop::collection::vec(-1.0f64..1.0, 6),
        zs in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let g = builtin_algebra(Builtin::So2 { d: 3 }).unwrap();
        let x = g.element(&xs).unwrap();
        let y = g.element(&ys).unwrap();
        let z = g.element(&zs).unwrap();
        let lhs = g.killing_form(&bracket(&x, &y).unwrap(), &z);
        let rhs = g.killing_form(&y, &bracket(&x, &z).unwrap());
        prop_assert!((lhs + rhs).abs() < 1e-8 * (lhs.abs() + rhs.abs()).max(1.0));
    }

    /// Bracket grading: [g_i, g_j] ⊆ g_{i+j} for the boost grading.
    #[test]
    fn bracket_grading_respected(
        xs in prop::collection::vec(-1.0f64..1.0, 10),
        ys in prop::collection::vec(-1.0f64..1.0, 10),
    ) {
        let g = builtin_algebra(Builtin::So2 { d: 4 }).unwrap();
        let h = builtin_euler_element(Builtin::So2 { d: 4 }, &g).unwrap();
        let g3 = grading(&h).unwrap();
        let x = g.element(&xs).unwrap();
        let y = g.element(&ys).unwrap();
        for i in [-1i32, 0, 1] {
            for j in [-1i32, 0, 1] {
                let br = bracket(&g3.project(i, &x), &g3.project(j, &y)).unwrap();
                let target = i + j;
                for k in [-1i32, 0, 1] {
                    if k != target {
                        prop_assert!(g3.project(k, &br).norm() < 1e-8);
                    }
                }
                if target.abs() > 1 {
                    prop_assert!(br.norm() < 1e-8);
                }
            }
        }
    }

    /// Cone convexity: members are closed under nonnegative combinations.
    #[test]
    fn sl2_cone_convexity(
        a1 in -1.0f64..1.0, u1 in -1.0f64..1.0, w1 in 0.0f64..1.0,
        a2 in -1.0f64..1.0, u2 in -1.0f64..1.0, w2 in 0.0f64..1.0,
        s in 0.0f64..3.0, t in 0.0f64..3.0,
    ) {
        let cone = ConeSpec::sl2(1.0);
        let mk = |a: f64, u: f64, extra: f64| {
            let w = (a * a + u * u).sqrt() + extra;
            DVector::from_column_slice(&[2.0 * a, u + w, u - w])
        };
        let v1 = mk(a1, u1, w1);
        let v2 = mk(a2, u2, w2);
        prop_assert!(cone.member(&v1, false).unwrap());
        prop_assert!(cone.member(&v2, false).unwrap());
        let combo = v1 * s + v2 * t;
        prop_assert!(cone.margin(&combo).unwrap() >= -1e-9);
    }

    /// Geodesics stay on the quadric and unit timelike ones close up.
    #[test]
    fn exp_map_conserves_the_form(
        raw in prop::collection::vec(-2.0f64..2.0, 5),
        tangent in prop::collection::vec(-2.0f64..2.0, 5),
    ) {
        let sp = wedgekit::adsgeo::AdsSpace::new(4).unwrap();
        let v = DVector::from_vec(raw);
        let b = sp.beta(&v, &v);
        prop_assume!(b > 0.3);
        let p = sp.point(v / b.sqrt()).unwrap();
        let t_raw = DVector::from_vec(tangent);
        let t = &t_raw - &p.x * sp.beta(&p.x, &t_raw);
        prop_assume!(t.norm() < 6.0);
        let q = sp.exp_map(&p, &t).unwrap();
        let scale = q.x.norm_squared().max(1.0);
        prop_assert!((sp.beta(&q.x, &q.x) - 1.0).abs() < 1e-9 * scale);

        // Unit timelike directions give 2π-periodic closed geodesics.
        let tt = sp.beta(&t, &t);
        if tt > 1e-3 {
            let unit = &t / tt.sqrt();
            let loop_v = unit * (2.0 * std::f64::consts::PI);
            let back = sp.exp_map(&p, &loop_v).unwrap();
            prop_assert!((back.x - p.x).norm() < 1e-8);
        }
    }

    /// Eigenvalue sums and products match trace and determinant.
    #[test]
    fn eig_trace_det_consistency(entries in prop::collection::vec(-2.0f64..2.0, 16)) {
        let a = Mat::from_rows(4, 4, &entries).unwrap();
        let s = eig(&a).unwrap();
        let tr: Complex64 = s.eigenvalues.iter().sum();
        prop_assert!((tr - a.trace()).norm() < 1e-7 * a.norm_fro().max(1.0));
        let det: Complex64 = s.eigenvalues.iter().product();
        let lu_det = a.inner().clone().lu().determinant();
        prop_assert!((det - lu_det).norm() < 1e-6 * lu_det.norm().max(1.0));
    }
}
