//! Pivoted Householder QR over plain real buffers.
//!
//! One factorization of A^T serves two jobs in the feasibility engine:
//! minimum-norm solutions of A x = b (the affine projection) and least-squares
//! fits min ||A^T w - v|| (dual multiplier extraction).

/// QR of an N x m matrix with column pivoting: A P = Q R.
#[derive(Debug)]
pub struct PivotedQr {
    nrows: usize,
    ncols: usize,
    /// Householder vectors below the diagonal, R on and above. Column-major.
    data: Vec<f64>,
    taus: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

const RANK_TOL: f64 = 1e-12;

impl PivotedQr {
    /// Factor a dense row-major `nrows x ncols` matrix.
    pub fn new(a_row_major: &[f64], nrows: usize, ncols: usize) -> PivotedQr {
        let mut data = vec![0.0; nrows * ncols];
        for i in 0..nrows {
            for j in 0..ncols {
                data[j * nrows + i] = a_row_major[i * ncols + j];
            }
        }
        let mut taus = vec![0.0; ncols.min(nrows)];
        let mut perm: Vec<usize> = (0..ncols).collect();
        let mut col_norms: Vec<f64> = (0..ncols)
            .map(|j| norm2(&data[j * nrows..j * nrows + nrows]))
            .collect();
        let max_norm = col_norms.iter().cloned().fold(0.0f64, f64::max);
        let kmax = ncols.min(nrows);
        let mut rank = 0;

        for k in 0..kmax {
            // pivot: remaining column with the largest trailing norm
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..ncols {
                let nj = norm2(&data[j * nrows + k..j * nrows + nrows]);
                col_norms[j] = nj;
                if nj > best_norm {
                    best_norm = nj;
                    best = j;
                }
            }
            if best_norm <= RANK_TOL * (1.0 + max_norm) {
                break;
            }
            if best != k {
                data.swap_ranges_cols(nrows, best, k);
                perm.swap(best, k);
                col_norms.swap(best, k);
            }
            // Householder reflector for column k
            let (tau, beta) = {
                let col = &mut data[k * nrows..(k + 1) * nrows];
                let alpha = col[k];
                let xnorm = norm2(&col[k + 1..]);
                if xnorm == 0.0 {
                    (0.0, alpha)
                } else {
                    let beta = -alpha.signum() * alpha.hypot(xnorm);
                    let tau = (beta - alpha) / beta;
                    let scale = 1.0 / (alpha - beta);
                    for v in col[k + 1..].iter_mut() {
                        *v *= scale;
                    }
                    col[k] = beta;
                    (tau, beta)
                }
            };
            taus[k] = tau;
            let _ = beta;
            if tau != 0.0 {
                for j in (k + 1)..ncols {
                    let mut w = data[j * nrows + k];
                    for i in (k + 1)..nrows {
                        w += data[k * nrows + i] * data[j * nrows + i];
                    }
                    w *= tau;
                    data[j * nrows + k] -= w;
                    for i in (k + 1)..nrows {
                        let h = data[k * nrows + i];
                        data[j * nrows + i] -= w * h;
                    }
                }
            }
            rank = k + 1;
        }
        // trim rank by diagonal magnitude
        let diag_max = (0..rank)
            .map(|k| data[k * nrows + k].abs())
            .fold(0.0f64, f64::max);
        while rank > 0 && data[(rank - 1) * nrows + (rank - 1)].abs() <= RANK_TOL * (1.0 + diag_max)
        {
            rank -= 1;
        }
        PivotedQr { nrows, ncols, data, taus, perm, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// y <- Q^T y.
    fn apply_qt(&self, y: &mut [f64]) {
        for k in 0..self.rank {
            let tau = self.taus[k];
            if tau == 0.0 {
                continue;
            }
            let mut w = y[k];
            for i in (k + 1)..self.nrows {
                w += self.data[k * self.nrows + i] * y[i];
            }
            w *= tau;
            y[k] -= w;
            for i in (k + 1)..self.nrows {
                y[i] -= w * self.data[k * self.nrows + i];
            }
        }
    }

    /// y <- Q y (y holds coefficients in the first `rank` slots, rest zero).
    fn apply_q(&self, y: &mut [f64]) {
        for k in (0..self.rank).rev() {
            let tau = self.taus[k];
            if tau == 0.0 {
                continue;
            }
            let mut w = y[k];
            for i in (k + 1)..self.nrows {
                w += self.data[k * self.nrows + i] * y[i];
            }
            w *= tau;
            y[k] -= w;
            for i in (k + 1)..self.nrows {
                y[i] -= w * self.data[k * self.nrows + i];
            }
        }
    }

    /// Least-squares solution of (this matrix) x = y in the pivoted rank-r
    /// sense; returns (x, residual_sup) where x has `ncols` entries.
    pub fn least_squares(&self, y: &[f64]) -> (Vec<f64>, f64) {
        assert_eq!(y.len(), self.nrows);
        let mut work = y.to_vec();
        self.apply_qt(&mut work);
        let mut coeff = vec![0.0; self.ncols];
        // back substitution on the rank x rank leading block of R
        for k in (0..self.rank).rev() {
            let mut s = work[k];
            for j in (k + 1)..self.rank {
                s -= self.data[j * self.nrows + k] * coeff[j];
            }
            coeff[k] = s / self.data[k * self.nrows + k];
        }
        let mut x = vec![0.0; self.ncols];
        for k in 0..self.rank {
            x[self.perm[k]] = coeff[k];
        }
        let resid = work[self.rank..]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        (x, resid)
    }

    /// Minimum-norm solution of (this matrix)^T z = b.
    /// Returns (z, consistency residual in sup norm).
    pub fn min_norm_transpose_solve(&self, b: &[f64]) -> (Vec<f64>, f64) {
        assert_eq!(b.len(), self.ncols);
        // (QR)^T z = P^T b  =>  R^T (Q^T z) = P^T b; forward substitution.
        let mut pb = vec![0.0; self.ncols];
        for k in 0..self.ncols {
            pb[k] = b[self.perm[k]];
        }
        let mut c = vec![0.0; self.nrows];
        for k in 0..self.rank {
            let mut s = pb[k];
            for j in 0..k {
                s -= self.data[k * self.nrows + j] * c[j];
            }
            c[k] = s / self.data[k * self.nrows + k];
        }
        // consistency: rows of R^T beyond the rank must match
        let mut resid = 0.0f64;
        for k in self.rank..self.ncols {
            let mut s = pb[k];
            for j in 0..self.rank {
                s -= self.data[k * self.nrows + j] * c[j];
            }
            resid = resid.max(s.abs());
        }
        self.apply_q(&mut c);
        (c, resid)
    }
}

trait SwapCols {
    fn swap_ranges_cols(&mut self, nrows: usize, a: usize, b: usize);
}

impl SwapCols for Vec<f64> {
    fn swap_ranges_cols(&mut self, nrows: usize, a: usize, b: usize) {
        for i in 0..nrows {
            self.swap(a * nrows + i, b * nrows + i);
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
