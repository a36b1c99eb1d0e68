//! Eigendecomposition of small dense complex matrices.
//!
//! Eigenvalues come from a complex single-shift QR iteration on the
//! Hessenberg form (Wilkinson shifts, standard deflation). Eigenvectors and
//! multiplicities are then recovered per eigenvalue cluster from SVD null
//! spaces of `A − μI`, which also decides diagonalizability by comparing
//! geometric and algebraic multiplicities.

use super::{Mat, NumError, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Spectral data of a square matrix.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Eigenvalues with algebraic multiplicity, grouped cluster by cluster.
    pub eigenvalues: Vec<Complex64>,
    /// Independent eigenvectors found, one per geometric dimension (columns).
    /// Has `n` columns exactly when the matrix is diagonalizable.
    pub eigenvectors: Mat,
    pub diagonalizable: bool,
    /// Relative residual `‖A·V − V·diag(λ)‖ / max(1, ‖A‖)` on the found vectors.
    pub defect: f64,
}

/// Computes eigenvalues, eigenvectors and the diagonalizability flag.
pub fn eig(a: &Mat) -> Result<SpectralData, NumError> {
    eig_with(a, &Tolerances::default())
}

pub fn eig_with(a: &Mat, tol: &Tolerances) -> Result<SpectralData, NumError> {
    let n = a.ensure_square()?;
    a.ensure_finite()?;
    if n == 0 {
        return Ok(SpectralData {
            eigenvalues: vec![],
            eigenvectors: Mat::zeros(0, 0),
            diagonalizable: true,
            defect: 0.0,
        });
    }
    let scale = a.norm_fro().max(1.0);
    let mut raw = schur_eigenvalues(a.inner().clone())?;
    raw.sort_by(|x, y| {
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .expect("finite eigenvalues")
    });

    let clusters = cluster(&raw, tol.clust * scale);

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors: Vec<(Complex64, DVector<Complex64>)> = Vec::new();
    let mut diagonalizable = true;
    for cl in &clusters {
        let algebraic = cl.len();
        let mu = cl.iter().sum::<Complex64>() / Complex64::new(algebraic as f64, 0.0);
        eigenvalues.extend(std::iter::repeat(mu).take(algebraic));
        let shifted = Mat::new(a.inner() - DMatrix::from_diagonal_element(n, n, mu))
            .expect("finite shift");
        let ns = shifted.null_space(tol.spec);
        let geometric = ns.ncols();
        if geometric < algebraic {
            diagonalizable = false;
        }
        for j in 0..geometric.min(algebraic) {
            vectors.push((mu, ns.inner().column(j).clone_owned()));
        }
    }

    let k = vectors.len();
    let mut vmat = DMatrix::zeros(n, k);
    let mut lambda = DMatrix::zeros(k, k);
    for (j, (mu, v)) in vectors.iter().enumerate() {
        vmat.set_column(j, v);
        lambda[(j, j)] = *mu;
    }
    let defect = if k > 0 {
        (a.inner() * &vmat - &vmat * &lambda).norm() / scale
    } else {
        0.0
    };

    Ok(SpectralData {
        eigenvalues,
        eigenvectors: Mat::new(vmat).expect("finite eigenvectors"),
        diagonalizable,
        defect,
    })
}

fn cluster(sorted: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    // Union-find over pairwise closeness; eigenvalue sets here are tiny.
    let n = sorted.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (sorted[i] - sorted[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(sorted[i]);
    }
    groups.into_values().collect()
}

/// Eigenvalues via complex Hessenberg + shifted QR. Does not accumulate the
/// Schur vectors; callers recover eigenvectors from null spaces instead.
fn schur_eigenvalues(mut h: DMatrix<Complex64>) -> Result<Vec<Complex64>, NumError> {
    let n = h.nrows();
    if n == 1 {
        return Ok(vec![h[(0, 0)]]);
    }
    hessenberg_in_place(&mut h);

    let max_iter = 60 * n.max(4);
    let mut iter = 0;
    let mut hi = n - 1; // active block is rows/cols 0..=hi
    let eps = f64::EPSILON;
    while hi > 0 {
        // Deflate converged subdiagonal entries.
        let mut deflated = false;
        for k in (1..=hi).rev() {
            let off = h[(k, k - 1)].norm();
            let local = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            if off <= eps * local.max(f64::MIN_POSITIVE) {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
                if k == hi {
                    hi -= 1;
                    deflated = true;
                    break;
                }
            }
        }
        if deflated {
            continue;
        }
        // Find the start of the unreduced block ending at hi.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }
        if lo == hi {
            hi = hi.saturating_sub(1);
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(NumError::NonConvergence {
                what: "QR eigenvalue iteration",
                iterations: max_iter,
            });
        }
        let shift = wilkinson_shift(&h, hi, iter);
        qr_step(&mut h, lo, hi, shift);
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

fn wilkinson_shift(h: &DMatrix<Complex64>, hi: usize, iter: usize) -> Complex64 {
    // Occasional exceptional shift breaks symmetry stalls.
    if iter % 12 == 0 {
        return h[(hi, hi)] + Complex64::new(0.75, 0.0) * h[(hi, hi - 1)].norm();
    }
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    // Eigenvalue of the trailing 2x2 closest to d.
    let tr = a + d;
    let half = tr * 0.5;
    let disc = (half * half - (a * d - b * c)).sqrt();
    let l1 = half + disc;
    let l2 = half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit single-shift QR step on the active Hessenberg block.
fn qr_step(h: &mut DMatrix<Complex64>, lo: usize, hi: usize, shift: Complex64) {
    let n = h.nrows();
    let m = hi - lo + 1;
    // Givens rotations zeroing the subdiagonal of H - shift*I.
    let mut rotations: Vec<(usize, Complex64, Complex64)> = Vec::with_capacity(m - 1);
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    for k in lo..hi {
        let f = h[(k, k)];
        let g = h[(k + 1, k)];
        let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
        if r == 0.0 {
            rotations.push((k, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
            continue;
        }
        let cs = f.conj() / r;
        let sn = g.conj() / r;
        // Apply G = [[cs, sn], [-conj(sn), conj(cs)]]-style rotation to rows k, k+1.
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = cs * x + sn * y;
            h[(k + 1, j)] = -sn.conj() * x + cs.conj() * y;
        }
        rotations.push((k, cs, sn));
    }
    // Multiply R by the adjoint rotations on the right: columns k, k+1.
    for &(k, cs, sn) in &rotations {
        for i in 0..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * cs.conj() + y * sn.conj();
            h[(i, k + 1)] = -x * sn + y * cs;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

fn hessenberg_in_place(h: &mut DMatrix<Complex64>) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        // Householder reflector annihilating column k below the subdiagonal.
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let alpha = if x[0].norm() == 0.0 {
            Complex64::new(-xnorm, 0.0)
        } else {
            -(x[0] / x[0].norm()) * xnorm
        };
        x[0] -= alpha;
        let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in x.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv*) H (I - 2vv*)
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                dot += v.conj() * h[(k + 1 + i, j)];
            }
            let dot2 = dot * 2.0;
            for (i, v) in x.iter().enumerate() {
                let delta = v * dot2;
                h[(k + 1 + i, j)] -= delta;
            }
        }
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (jj, v) in x.iter().enumerate() {
                dot += h[(i, k + 1 + jj)] * *v;
            }
            let dot2 = dot * 2.0;
            for (jj, v) in x.iter().enumerate() {
                let delta = dot2 * v.conj();
                h[(i, k + 1 + jj)] -= delta;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}
