//! Seeded random matrix generators used by samplers and tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::mat::{Field, Mat};

pub type Seeded = ChaCha8Rng;

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; two uniforms per call keeps the stream simple to reason about.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_mat<R: Rng>(rows: usize, cols: usize, field: Field, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, field, |_, _| {
        let re = gauss(rng);
        let im = if field == Field::Complex { gauss(rng) } else { 0.0 };
        (re, im)
    })
}

pub fn random_hermitian<R: Rng>(n: usize, field: Field, rng: &mut R) -> Mat {
    random_mat(n, n, field, rng).herm_part()
}

pub fn random_psd<R: Rng>(n: usize, field: Field, rng: &mut R) -> Mat {
    let g = random_mat(n, n, field, rng);
    g.adjoint().matmul(&g).scale(1.0 / n as f64)
}

/// Random isometry: `rows x cols` with `B* B = I`, requires rows >= cols.
pub fn random_isometry<R: Rng>(rows: usize, cols: usize, field: Field, rng: &mut R) -> Mat {
    assert!(rows >= cols, "an isometry cannot widen");
    loop {
        let g = random_mat(rows, cols, field, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

pub fn random_unitary<R: Rng>(n: usize, field: Field, rng: &mut R) -> Mat {
    random_isometry(n, n, field, rng)
}

/// Modified Gram-Schmidt; None when the input is numerically rank deficient.
pub fn orthonormalize_columns(a: &Mat) -> Option<Mat> {
    let (rows, cols, field) = (a.rows(), a.cols(), a.field());
    let mut q = a.clone();
    for j in 0..cols {
        for k in 0..j {
            // ip = <q_k, q_j>
            let mut ip = (0.0, 0.0);
            for r in 0..rows {
                let (kr, ki) = q.at(r, k);
                let (jr, ji) = q.at(r, j);
                ip.0 += kr * jr + ki * ji;
                ip.1 += kr * ji - ki * jr;
            }
            for r in 0..rows {
                let (kr, ki) = q.at(r, k);
                let (jr, ji) = q.at(r, j);
                q.set(
                    r,
                    j,
                    jr - (ip.0 * kr - ip.1 * ki),
                    ji - (ip.0 * ki + ip.1 * kr),
                );
            }
        }
        let mut norm = 0.0;
        for r in 0..rows {
            let (x, y) = q.at(r, j);
            norm += x * x + y * y;
        }
        let norm = norm.sqrt();
        if norm < 1e-10 {
            return None;
        }
        for r in 0..rows {
            let (x, y) = q.at(r, j);
            q.set(r, j, x / norm, y / norm);
        }
    }
    let _ = field;
    Some(q)
}

/// Random family `alpha_i` in `M_{n_i, n}` with `sum alpha_i* alpha_i = 1_n`.
/// Built by splitting the rows of a random (sum n_i) x n isometry.
pub fn random_partition_of_unity<R: Rng>(
    levels: &[usize],
    n: usize,
    field: Field,
    rng: &mut R,
) -> Vec<Mat> {
    let total: usize = levels.iter().sum();
    assert!(total >= n, "partition of unity needs sum n_i >= n");
    let stacked = random_isometry(total, n, field, rng);
    let mut out = Vec::with_capacity(levels.len());
    let mut row = 0;
    for &ni in levels {
        out.push(stacked.submatrix(row, 0, ni, n));
        row += ni;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn isometry_is_isometry() {
        let mut rng = Seeded::seed_from_u64(3);
        for &field in &[Field::Real, Field::Complex] {
            let b = random_isometry(5, 3, field, &mut rng);
            assert!(b.isometry_deviation() < 1e-12);
        }
    }

    #[test]
    fn partition_sums_to_identity() {
        let mut rng = Seeded::seed_from_u64(4);
        let parts = random_partition_of_unity(&[2, 3, 1], 3, Field::Real, &mut rng);
        let mut s = Mat::zeros(3, 3, Field::Real);
        for a in &parts {
            s = s.add(&a.adjoint().matmul(a));
        }
        assert!(s.sub(&Mat::identity(3, Field::Real)).max_abs() < 1e-12);
    }
}
