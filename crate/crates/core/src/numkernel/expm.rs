//! Matrix exponential by scaling-and-squaring with diagonal Padé approximants.

use super::{Mat, NumError};
use nalgebra::DMatrix;
use num_complex::Complex64;

// Degree/theta pairs from the standard double-precision backward-error analysis.
const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

/// Computes `e^A` with relative accuracy around 1e-13 on well-scaled input.
pub fn expm(a: &Mat) -> Result<Mat, NumError> {
    let n = a.ensure_square()?;
    a.ensure_finite()?;
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let norm = a.norm_one();
    if !norm.is_finite() || norm > 1e6 {
        return Err(NumError::Overflow { norm });
    }

    let m = a.inner();
    let result = if norm <= THETA_3 {
        pade(m, &[120.0, 60.0, 12.0, 1.0])?
    } else if norm <= THETA_5 {
        pade(m, &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0])?
    } else if norm <= THETA_7 {
        pade(
            m,
            &[
                17_297_280.0,
                8_648_640.0,
                1_995_840.0,
                277_200.0,
                25_200.0,
                1_512.0,
                56.0,
                1.0,
            ],
        )?
    } else if norm <= THETA_9 {
        pade(
            m,
            &[
                17_643_225_600.0,
                8_821_612_800.0,
                2_075_673_600.0,
                302_702_400.0,
                30_270_240.0,
                2_162_160.0,
                110_880.0,
                3_960.0,
                90.0,
                1.0,
            ],
        )?
    } else {
        // Scale down to ‖A/2^s‖ ≤ θ13, apply Padé-13, square back up.
        let s = ((norm / THETA_13).log2().ceil() as i32).max(0);
        let scaled = m.map(|z| z / 2f64.powi(s));
        let mut r = pade13(&scaled)?;
        for _ in 0..s {
            r = &r * &r;
        }
        r
    };

    let out = Mat::new(result).map_err(|_| NumError::Overflow { norm })?;
    Ok(out)
}

fn pade(a: &DMatrix<Complex64>, b: &[f64]) -> Result<DMatrix<Complex64>, NumError> {
    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    // U odd powers, V even powers.
    let mut u = id.clone() * Complex64::from(b[1]);
    let mut v = id.clone() * Complex64::from(b[0]);
    let mut pow = id.clone();
    for k in 1..=(b.len() - 1) / 2 {
        pow = &pow * &a2;
        if 2 * k + 1 < b.len() {
            u += &pow * Complex64::from(b[2 * k + 1]);
        }
        v += &pow * Complex64::from(b[2 * k]);
    }
    let u = a * u;
    solve_pade(u, v)
}

fn pade13(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, NumError> {
    let b: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];
    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * Complex64::from(b[13]) + &a4 * Complex64::from(b[11]) + &a2 * Complex64::from(b[9]);
    let u = a
        * (&a6 * u_inner
            + &a6 * Complex64::from(b[7])
            + &a4 * Complex64::from(b[5])
            + &a2 * Complex64::from(b[3])
            + &id * Complex64::from(b[1]));
    let v_inner = &a6 * Complex64::from(b[12]) + &a4 * Complex64::from(b[10]) + &a2 * Complex64::from(b[8]);
    let v = &a6 * v_inner
        + &a6 * Complex64::from(b[6])
        + &a4 * Complex64::from(b[4])
        + &a2 * Complex64::from(b[2])
        + &id * Complex64::from(b[0]);
    solve_pade(u, v)
}

fn solve_pade(
    u: DMatrix<Complex64>,
    v: DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, NumError> {
    let p = &v + &u;
    let q = &v - &u;
    q.lu().solve(&p).ok_or(NumError::Singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        let a = Mat::zeros(3, 3);
        let e = expm(&a).unwrap();
        assert!(e.sub(&Mat::identity(3)).norm_fro() < 1e-15);
    }

    #[test]
    fn exp_of_diagonal() {
        let a = Mat::from_rows(2, 2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        let e = expm(&a).unwrap();
        assert!((e.get(0, 0).re - 1f64.exp()).abs() < 1e-12);
        assert!((e.get(1, 1).re - 2f64.exp()).abs() < 1e-11);
        assert!(e.get(0, 1).norm() < 1e-14 && e.get(1, 0).norm() < 1e-14);
    }

    #[test]
    fn exp_of_rotation_generator() {
        // expm(t·[[0,1],[-1,0]]) is the rotation by angle t.
        for &t in &[0.1, 1.0, 2.5, 9.7] {
            let a = Mat::from_rows(2, 2, &[0.0, t, -t, 0.0]).unwrap();
            let e = expm(&a).unwrap();
            let expect =
                Mat::from_rows(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]).unwrap();
            assert!(
                e.sub(&expect).norm_fro() < 1e-12,
                "rotation mismatch at t={t}"
            );
        }
    }

    #[test]
    fn inverse_relation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 9] {
            for _ in 0..6 {
                let data: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mut a = Mat::from_rows(n, n, &data).unwrap();
                // Rescale to exercise norms up to 10.
                let target: f64 = rng.random_range(0.1..10.0);
                a = a.scale(num_complex::Complex64::from(target / a.norm_fro()));
                let e = expm(&a).unwrap();
                let em = expm(&a.scale(num_complex::Complex64::from(-1.0))).unwrap();
                let resid = e.mul(&em).sub(&Mat::identity(n)).norm_fro();
                assert!(resid < 1e-9, "expm(A)expm(-A) residual {resid}");
            }
        }
    }

    #[test]
    fn overflow_reported() {
        let a = Mat::from_rows(2, 2, &[1e7, 0.0, 0.0, 1e7]).unwrap();
        assert!(matches!(expm(&a), Err(NumError::Overflow { .. })));
    }
}
