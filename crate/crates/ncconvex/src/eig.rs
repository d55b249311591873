//! Self-adjoint eigendecomposition by cyclic Jacobi sweeps.
//!
//! Complex Hermitian input is routed through its real 2n x 2n block doubling,
//! so a single real symmetric solver serves both fields. Eigenvalues of the
//! doubled image come in pairs; the complex eigenvectors are recovered from
//! the real pair structure by a pivoted complex orthonormalization.

use crate::error::{Error, Result};
use crate::mat::{Field, Mat};

const SYM_GATE: f64 = 1e-10;
const OFF_TARGET: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending plus the matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomp {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl EigDecomp {
    /// Reconstruction error ||A V - V diag(lambda)||_max.
    pub fn residual(&self, a: &Mat) -> f64 {
        let av = a.matmul(&self.vectors);
        let mut lam = Mat::zeros(self.values.len(), self.values.len(), self.vectors.field());
        for (i, &v) in self.values.iter().enumerate() {
            lam.set(i, i, v, 0.0);
        }
        av.sub(&self.vectors.matmul(&lam)).max_abs()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Jacobi eigendecomposition of a real symmetric matrix.
///
/// Sweeps terminate once the off-diagonal Frobenius mass falls below
/// `1e-14 * ||A||_F`.
fn jacobi_real_symmetric(a_in: &Mat) -> Result<(Vec<f64>, Mat)> {
    let n = a_in.rows();
    let mut a: Vec<f64> = (0..n * n).map(|k| a_in.re_at(k / n, k % n)).collect();
    // symmetrize once so rotation bookkeeping sees an exactly symmetric input
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = m;
            a[j * n + i] = m;
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm_a = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = OFF_TARGET * norm_a.max(f64::MIN_POSITIVE);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= target {
            let mut pairs: Vec<(f64, usize)> =
                (0..n).map(|i| (a[i * n + i], i)).collect();
            pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut vectors = Mat::zeros(n, n, Field::Real);
            for (col, &(_, src)) in pairs.iter().enumerate() {
                for row in 0..n {
                    vectors.set(row, col, v[row * n + src], 0.0);
                }
            }
            return Ok((values, vectors));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= target / (n as f64) {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for j in 0..n {
                    if j != p && j != q {
                        let ajp = a[j * n + p];
                        let ajq = a[j * n + q];
                        let njp = ajp - s * (ajq + tau * ajp);
                        let njq = ajq + s * (ajp - tau * ajq);
                        a[j * n + p] = njp;
                        a[p * n + j] = njp;
                        a[j * n + q] = njq;
                        a[q * n + j] = njq;
                    }
                }
                for j in 0..n {
                    let vjp = v[j * n + p];
                    let vjq = v[j * n + q];
                    v[j * n + p] = vjp - s * (vjq + tau * vjp);
                    v[j * n + q] = vjq + s * (vjp - tau * vjq);
                }
            }
        }
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

/// Eigendecomposition of a self-adjoint matrix over R or C.
///
/// Rejects inputs whose self-adjointness deviation exceeds the gate; the
/// returned eigenvalues are ascending and `V* V = I` to solver precision.
pub fn herm_eig(a: &Mat) -> Result<EigDecomp> {
    a.check_self_adjoint(SYM_GATE)?;
    match a.field() {
        Field::Real => {
            let sym = a.herm_part();
            let (values, vectors) = jacobi_real_symmetric(&sym)?;
            Ok(EigDecomp { values, vectors })
        }
        Field::Complex => herm_eig_complex(a),
    }
}

fn herm_eig_complex(a: &Mat) -> Result<EigDecomp> {
    let n = a.rows();
    let doubled = a.herm_part().real_doubling();
    let (mu, w) = jacobi_real_symmetric(&doubled)?;

    // Each real eigenvector [p; q] of the doubling gives the candidate
    // complex eigenvector p + iq; candidates within one eigenvalue cluster
    // span a complex space of half the real dimension. A pivoted complex
    // Gram-Schmidt per cluster picks an orthonormal half.
    let scale = mu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cluster_gap = 1e-10 * (1.0 + scale);

    let mut values = Vec::with_capacity(n);
    let mut vectors = Mat::zeros(n, n, Field::Complex);
    let mut col_out = 0usize;

    let mut start = 0usize;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && mu[end] - mu[end - 1] <= cluster_gap {
            end += 1;
        }
        let dim = end - start;
        if dim % 2 != 0 {
            return Err(Error::Invalid(
                "doubled spectrum did not pair up; input is too far from Hermitian".into(),
            ));
        }
        let take = dim / 2;
        // candidates as complex n-vectors
        let mut cands: Vec<Vec<(f64, f64)>> = Vec::with_capacity(dim);
        for c in start..end {
            let mut z = Vec::with_capacity(n);
            for r in 0..n {
                z.push((w.re_at(r, c), w.re_at(n + r, c)));
            }
            cands.push(z);
        }
        let mut accepted: Vec<Vec<(f64, f64)>> = Vec::with_capacity(take);
        for _ in 0..take {
            // project every remaining candidate against accepted, pick largest
            let mut best: Option<(usize, f64, Vec<(f64, f64)>)> = None;
            for (ci, cand) in cands.iter().enumerate() {
                let mut z = cand.clone();
                for acc in &accepted {
                    let mut ip = (0.0, 0.0); // <acc, z>
                    for r in 0..n {
                        let (ar, ai) = acc[r];
                        let (zr, zi) = z[r];
                        ip.0 += ar * zr + ai * zi;
                        ip.1 += ar * zi - ai * zr;
                    }
                    for r in 0..n {
                        let (ar, ai) = acc[r];
                        z[r].0 -= ip.0 * ar - ip.1 * ai;
                        z[r].1 -= ip.0 * ai + ip.1 * ar;
                    }
                }
                let norm = z
                    .iter()
                    .map(|(x, y)| x * x + y * y)
                    .sum::<f64>()
                    .sqrt();
                if best.as_ref().map_or(true, |(_, bn, _)| norm > *bn) {
                    best = Some((ci, norm, z));
                }
            }
            let (_, norm, mut z) = best.ok_or_else(|| {
                Error::Invalid("eigenvector extraction exhausted candidates".into())
            })?;
            if norm < 1e-6 {
                return Err(Error::Invalid(
                    "eigenvector extraction degenerated; input is too far from Hermitian".into(),
                ));
            }
            for e in z.iter_mut() {
                e.0 /= norm;
                e.1 /= norm;
            }
            accepted.push(z);
        }
        // eigenvalues deduplicated by adjacent pairing inside the cluster
        for k in 0..take {
            let lam = 0.5 * (mu[start + 2 * k] + mu[start + 2 * k + 1]);
            values.push(lam);
            for r in 0..n {
                let (x, y) = accepted[k][r];
                vectors.set(r, col_out, x, y);
            }
            col_out += 1;
        }
        start = end;
    }
    if col_out != n {
        return Err(Error::Invalid("eigenvector extraction miscounted".into()));
    }
    Ok(EigDecomp { values, vectors })
}

/// PSD test: all eigenvalues at least `-tol`.
pub fn is_psd(a: &Mat, tol: f64) -> Result<bool> {
    let dec = herm_eig(a)?;
    Ok(dec.min() >= -tol)
}

/// Smallest eigenvalue of a self-adjoint matrix.
pub fn min_eig(a: &Mat) -> Result<f64> {
    Ok(herm_eig(a)?.min())
}

/// Largest eigenvalue of a self-adjoint matrix.
pub fn max_eig(a: &Mat) -> Result<f64> {
    Ok(herm_eig(a)?.max())
}

/// Operator norm of an arbitrary matrix, via the spectrum of A* A.
pub fn op_norm(a: &Mat) -> Result<f64> {
    let g = a.adjoint().matmul(a);
    Ok(max_eig(&g.herm_part())?.max(0.0).sqrt())
}

/// Square root of a PSD self-adjoint matrix by spectral clipping.
pub fn psd_sqrt(a: &Mat) -> Result<Mat> {
    spectral_map(a, |l| l.max(0.0).sqrt())
}

/// Apply a function to the spectrum of a self-adjoint matrix.
pub fn spectral_map(a: &Mat, f: impl Fn(f64) -> f64) -> Result<Mat> {
    let dec = herm_eig(a)?;
    let n = a.rows();
    let mut lam = Mat::zeros(n, n, a.field());
    for (i, &v) in dec.values.iter().enumerate() {
        lam.set(i, i, f(v), 0.0);
    }
    Ok(dec.vectors.matmul(&lam).matmul(&dec.vectors.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_input_sorts_ascending() {
        let a = Mat::from_rows_real(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ]);
        let dec = herm_eig(&a).unwrap();
        assert_eq!(dec.values, vec![1.0, 2.0, 3.0]);
        assert!(dec.residual(&a) < 1e-12);
    }

    #[test]
    fn identity_spectrum() {
        let a = Mat::identity(5, Field::Real);
        let dec = herm_eig(&a).unwrap();
        for v in dec.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Mat::from_rows_real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(herm_eig(&a), Err(Error::NotSelfAdjoint(_))));
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            let a = randmat::random_hermitian(n, Field::Complex, &mut rng);
            let dec = herm_eig(&a).unwrap();
            let scale = 1.0 + a.max_abs();
            assert!(dec.residual(&a) < 1e-10 * scale, "residual too large at n={n}");
            let g = dec.vectors.adjoint().matmul(&dec.vectors);
            assert!(g.sub(&Mat::identity(n, Field::Complex)).max_abs() < 1e-10);
            for w in dec.values.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
        }
    }

    #[test]
    fn complex_with_degenerate_spectrum() {
        // 2x2 identity plus a rank-one Hermitian bump has a double eigenvalue
        let a = Mat::from_rows_complex(
            &[vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]],
            &[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]],
        );
        let dec = herm_eig(&a).unwrap();
        assert!(dec.residual(&a) < 1e-12);
        assert!((dec.values[0] - 2.0).abs() < 1e-12);
        assert!((dec.values[1] - 2.0).abs() < 1e-12);
        assert!((dec.values[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn psd_examples() {
        let a = Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(is_psd(&a, 1e-9).unwrap());
        let b = Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(!is_psd(&b, 1e-9).unwrap());
    }

    #[test]
    fn complex_psd_iff_doubling_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let z = randmat::random_hermitian(3, Field::Complex, &mut rng);
            let direct = is_psd(&z, 1e-9).unwrap();
            let doubled = is_psd(&z.real_doubling(), 1e-9).unwrap();
            assert_eq!(direct, doubled);
            let p = randmat::random_psd(3, Field::Complex, &mut rng);
            assert!(is_psd(&p, 1e-9).unwrap());
            assert!(is_psd(&p.real_doubling(), 1e-9).unwrap());
        }
    }
}
