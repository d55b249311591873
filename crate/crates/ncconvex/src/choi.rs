//! Choi-matrix plumbing: linear maps M_m -> M_n as mn x mn blocks.
//!
//! Convention: the block at coarse position (i, j) of the Choi matrix is the
//! image of the matrix unit E_ij, so `Phi(X)_{pq} = sum_ij X_ij C[(i,p),(j,q)]`
//! and the matrix is PSD exactly when the map is completely positive (over R
//! and over C alike). Constraint rows on a Choi unknown pair a multiplier
//! matrix W with the image: `Re tr(W* Phi(g)) = Re <hermitize(g^T o W*), C>`.

use crate::conic::AffinePsdProblem;
use crate::mat::{Field, Mat};

/// Where the constraint rows of one matching equation group live, so dual
/// multipliers can be reassembled into a matrix functional.
#[derive(Debug, Clone)]
pub struct EquationGroup {
    /// target is n x n
    pub n: usize,
    /// row index of the constraint for entry (p,q)'s real part; for complex
    /// problems the imaginary-part row follows immediately.
    pub first_row: usize,
    pub complex: bool,
}

impl EquationGroup {
    /// Reassemble the multiplier matrix W from a dual vector.
    pub fn multiplier_matrix(&self, field: Field, duals: &[f64]) -> Mat {
        let mut w = Mat::zeros(self.n, self.n, field);
        let mut row = self.first_row;
        for p in 0..self.n {
            for q in 0..self.n {
                let re = duals[row];
                row += 1;
                let im = if self.complex {
                    let v = duals[row];
                    row += 1;
                    v
                } else {
                    0.0
                };
                if field == Field::Complex {
                    w.set(p, q, re, im);
                } else {
                    w.set(p, q, re, 0.0);
                }
            }
        }
        w
    }

    pub fn rows(&self) -> usize {
        self.n * self.n * if self.complex { 2 } else { 1 }
    }
}

/// Evaluate the map encoded by a Choi block on `x` (m x m -> n x n).
pub fn apply_choi(choi: &Mat, m: usize, n: usize, x: &Mat) -> Mat {
    assert_eq!(choi.rows(), m * n, "choi block size mismatch");
    assert_eq!(x.rows(), m);
    let field = if choi.field() == Field::Complex || x.field() == Field::Complex {
        Field::Complex
    } else {
        Field::Real
    };
    let mut out = Mat::zeros(n, n, field);
    for i in 0..m {
        for j in 0..m {
            let (a, b) = x.at(i, j);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            for p in 0..n {
                for q in 0..n {
                    let (c, d) = choi.at(i * n + p, j * n + q);
                    out.add_to(p, q, a * c - b * d, a * d + b * c);
                }
            }
        }
    }
    out
}

/// Choi block of the map X -> V* X V for V of shape m x n.
pub fn choi_of_compression(v: &Mat) -> Mat {
    let m = v.rows();
    let n = v.cols();
    let field = v.field();
    let mut c = Mat::zeros(m * n, m * n, field);
    // Phi(E_ij)_{pq} = conj(V_{i p}) V_{j q}
    for i in 0..m {
        for j in 0..m {
            for p in 0..n {
                for q in 0..n {
                    let (ar, ai) = v.at(i, p);
                    let (br, bi) = v.at(j, q);
                    // conj(a) * b
                    c.set(
                        i * n + p,
                        j * n + q,
                        ar * br + ai * bi,
                        ar * bi - ai * br,
                    );
                }
            }
        }
    }
    c
}

/// Sum of compressions; `vs` all m x n. The result is the Choi block of
/// X -> sum_k V_k* X V_k.
pub fn choi_of_compressions(vs: &[Mat]) -> Mat {
    let mut acc = choi_of_compression(&vs[0]);
    for v in &vs[1..] {
        acc = acc.add(&choi_of_compression(v));
    }
    acc
}

/// The image of the identity, `Phi(1_m)`.
pub fn choi_unit_image(choi: &Mat, m: usize, n: usize) -> Mat {
    apply_choi(choi, m, n, &Mat::identity(m, choi.field()))
}

/// Lift of the functional `Phi -> tr(W* Phi(g))` to the Choi unknown: the
/// raw matrix M with `tr(M C) = tr(W* Phi_C(g))`. Callers that need the
/// Hermitian representative for a real part take `herm_part()`; the raw form
/// is what the imaginary-part constraint rows require.
pub fn lift_functional(g: &Mat, w: &Mat, n: usize) -> Mat {
    let m = g.rows();
    let field = if g.field() == Field::Complex || w.field() == Field::Complex {
        Field::Complex
    } else {
        Field::Real
    };
    let mut lift = Mat::zeros(m * n, m * n, field);
    // M = g^T (coarse) o W^* (fine): entry ((j,q),(i,p)) = g_ij * conj(W_pq)
    for i in 0..m {
        for j in 0..m {
            let (gr, gi) = g.at(i, j);
            if gr == 0.0 && gi == 0.0 {
                continue;
            }
            for p in 0..n {
                for q in 0..n {
                    let (wr, wi) = w.at(p, q);
                    // g_ij * conj(w_pq)
                    lift.add_to(
                        j * n + q,
                        i * n + p,
                        gr * wr + gi * wi,
                        gi * wr - gr * wi,
                    );
                }
            }
        }
    }
    lift
}

/// Append the full matrix equation `sum_i Phi_{block_i}(g_i) = target` to a
/// problem, entry by entry; returns the row-group descriptor for dual
/// extraction.
pub fn push_sum_matching_equations(
    problem: &mut AffinePsdProblem,
    inputs: &[(usize, &Mat)],
    target: &Mat,
    n: usize,
) -> EquationGroup {
    let first_row = problem.constraints.len();
    let complex = inputs
        .iter()
        .any(|(b, _)| problem.blocks[*b].field == Field::Complex);
    for p in 0..n {
        for q in 0..n {
            let mut w = Mat::zeros(n, n, target.field());
            w.set(p, q, 1.0, 0.0);
            let terms: Vec<(usize, Mat)> = inputs
                .iter()
                .map(|(b, g)| (*b, lift_functional(g, &w, n)))
                .collect();
            let (tr, ti) = target.at(p, q);
            problem.push_complex_row(&terms, tr, ti);
        }
    }
    EquationGroup { n, first_row, complex }
}

/// Single-map special case of [`push_sum_matching_equations`].
pub fn push_matching_equations(
    problem: &mut AffinePsdProblem,
    block: usize,
    g: &Mat,
    target: &Mat,
    n: usize,
) -> EquationGroup {
    push_sum_matching_equations(problem, &[(block, g)], target, n)
}
