//! Feasibility over (affine subspace) ∩ (product of PSD cones).
//!
//! The engine runs Dykstra's alternating projections between the affine set
//! and the capped PSD product cone. Either outcome ships with a certificate
//! that re-validates using only the eigensolver and direct constraint
//! arithmetic: a feasible point is re-checked entry by entry, and an
//! infeasibility functional is re-checked through the Farkas inequality
//!   sum_b <T_b, X_b> = <w, b>  with  T = A^T w,
//! which no PSD block assignment with bounded total trace can satisfy once
//! `<w, b> - cap * max(0, lambda_max(T))` clears the certificate margin.
//! Answers are therefore relative to the trace cap; every encoding in this
//! crate keeps its feasible set strictly inside the default cap.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::eig::{herm_eig, min_eig};
use crate::error::{Error, Result};
use crate::mat::{Field, Mat};
use crate::qr::PivotedQr;

/// One self-adjoint PSD unknown.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BlockSpec {
    pub size: usize,
    pub field: Field,
}

/// One scalar affine constraint: sum_b Re<G_b, X_b> = rhs with G_b Hermitian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub terms: Vec<(usize, Mat)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffinePsdProblem {
    pub blocks: Vec<BlockSpec>,
    pub constraints: Vec<Constraint>,
    /// Bound on the total trace of the blocks; defaults to 10x the total size.
    pub norm_cap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasStatus {
    Feasible,
    Infeasible,
    Undecided,
}

/// Constraint multipliers certifying infeasibility of the capped problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualCertificate {
    pub multipliers: Vec<f64>,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasResult {
    pub status: FeasStatus,
    pub point: Option<Vec<Mat>>,
    pub dual: Option<DualCertificate>,
    pub iterations: usize,
}

impl AffinePsdProblem {
    pub fn new(blocks: Vec<BlockSpec>) -> AffinePsdProblem {
        AffinePsdProblem { blocks, constraints: Vec::new(), norm_cap: None }
    }

    pub fn cap(&self) -> f64 {
        self.norm_cap
            .unwrap_or_else(|| 10.0 * self.blocks.iter().map(|b| b.size).sum::<usize>() as f64)
    }

    /// Add `Re <G, X_block> = rhs`; G is hermitized on entry.
    pub fn push_constraint(&mut self, terms: Vec<(usize, Mat)>, rhs: f64) {
        let terms = terms
            .into_iter()
            .map(|(b, g)| (b, g.herm_part()))
            .collect();
        self.constraints.push(Constraint { terms, rhs });
    }

    /// Both real equations of the complex-linear condition
    /// `sum_b tr(M_b X_b) = rhs` on Hermitian unknowns (only one equation
    /// when every block is real).
    pub fn push_complex_row(&mut self, terms: &[(usize, Mat)], rhs_re: f64, rhs_im: f64) {
        let complex = terms
            .iter()
            .any(|(b, _)| self.blocks[*b].field == Field::Complex);
        self.push_constraint(terms.to_vec(), rhs_re);
        if complex {
            // Im tr(M X) = Re tr((-iM) X)
            let iterms: Vec<(usize, Mat)> = terms
                .iter()
                .map(|(b, g)| (*b, g.scale_complex(0.0, -1.0)))
                .collect();
            self.push_constraint(iterms, rhs_im);
        }
    }

    pub fn push_entry_equation(&mut self, block: usize, m: &Mat, rhs_re: f64, rhs_im: f64) {
        self.push_complex_row(&[(block, m.clone())], rhs_re, rhs_im);
    }

    fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Invalid("problem needs at least one block".into()));
        }
        for c in &self.constraints {
            for (b, g) in &c.terms {
                let spec = self.blocks.get(*b).ok_or_else(|| {
                    Error::DimensionMismatch(format!("constraint names missing block {b}"))
                })?;
                if g.rows() != spec.size || g.cols() != spec.size {
                    return Err(Error::DimensionMismatch(
                        "constraint coefficient does not match its block".into(),
                    ));
                }
                if g.field() != spec.field {
                    return Err(Error::FieldMismatch(
                        "constraint coefficient field does not match its block".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

// ---- svec packing: isometric real coordinates for self-adjoint matrices ----

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn svec_len(spec: &BlockSpec) -> usize {
    match spec.field {
        Field::Real => spec.size * (spec.size + 1) / 2,
        Field::Complex => spec.size * spec.size,
    }
}

fn svec_into(m: &Mat, out: &mut Vec<f64>) {
    let s = m.rows();
    match m.field() {
        Field::Real => {
            for j in 0..s {
                for i in 0..=j {
                    if i == j {
                        out.push(m.re_at(i, i));
                    } else {
                        out.push(SQRT2 * 0.5 * (m.re_at(i, j) + m.re_at(j, i)));
                    }
                }
            }
        }
        Field::Complex => {
            for j in 0..s {
                for i in 0..=j {
                    if i == j {
                        out.push(m.re_at(i, i));
                    } else {
                        out.push(SQRT2 * 0.5 * (m.re_at(i, j) + m.re_at(j, i)));
                        out.push(SQRT2 * 0.5 * (m.im_at(i, j) - m.im_at(j, i)));
                    }
                }
            }
        }
    }
}

fn unsvec(spec: &BlockSpec, v: &[f64]) -> Mat {
    let s = spec.size;
    let mut m = Mat::zeros(s, s, spec.field);
    let mut k = 0;
    for j in 0..s {
        for i in 0..=j {
            if i == j {
                m.set(i, i, v[k], 0.0);
                k += 1;
            } else {
                match spec.field {
                    Field::Real => {
                        let x = v[k] / SQRT2;
                        k += 1;
                        m.set(i, j, x, 0.0);
                        m.set(j, i, x, 0.0);
                    }
                    Field::Complex => {
                        let x = v[k] / SQRT2;
                        let y = v[k + 1] / SQRT2;
                        k += 2;
                        m.set(i, j, x, y);
                        m.set(j, i, x, -y);
                    }
                }
            }
        }
    }
    m
}

struct Layout {
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(blocks: &[BlockSpec]) -> Layout {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0;
        for b in blocks {
            offsets.push(total);
            total += svec_len(b);
        }
        Layout { offsets, total }
    }

    fn pack(&self, blocks: &[BlockSpec], mats: &[Mat]) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.total);
        for (spec, m) in blocks.iter().zip(mats) {
            let _ = spec;
            svec_into(m, &mut v);
        }
        v
    }

    fn unpack(&self, blocks: &[BlockSpec], v: &[f64]) -> Vec<Mat> {
        blocks
            .iter()
            .enumerate()
            .map(|(i, spec)| unsvec(spec, &v[self.offsets[i]..self.offsets[i] + svec_len(spec)]))
            .collect()
    }
}

// ---- standalone projections ----

/// Eigenvalue clipping at zero: the Frobenius-nearest PSD matrix.
pub fn project_psd(a: &Mat) -> Result<Mat> {
    a.check_self_adjoint(1e-8)?;
    let dec = herm_eig(&a.herm_part())?;
    let n = a.rows();
    let mut lam = Mat::zeros(n, n, a.field());
    for (i, &v) in dec.values.iter().enumerate() {
        lam.set(i, i, v.max(0.0), 0.0);
    }
    Ok(dec.vectors.matmul(&lam).matmul(&dec.vectors.adjoint()))
}

/// Precomputed least-norm projector onto the affine set of a problem.
pub struct AffineProjector {
    blocks: Vec<BlockSpec>,
    lay: Layout,
    amat: Vec<f64>,
    rhs: Vec<f64>,
    qr: PivotedQr,
}

impl AffineProjector {
    pub fn new(problem: &AffinePsdProblem) -> Result<AffineProjector> {
        problem.validate()?;
        let lay = Layout::new(&problem.blocks);
        let (amat, rhs) = assemble(problem, &lay);
        let qr = PivotedQr::new(
            &transpose_dense(&amat, problem.constraints.len(), lay.total),
            lay.total,
            problem.constraints.len(),
        );
        Ok(AffineProjector { blocks: problem.blocks.clone(), lay, amat, rhs, qr })
    }

    pub fn project(&self, values: &[Mat]) -> Result<Vec<Mat>> {
        let x = self.lay.pack(&self.blocks, values);
        let projected = affine_step(&self.amat, &self.rhs, &self.qr, &x, self.lay.total)?;
        Ok(self.lay.unpack(&self.blocks, &projected))
    }
}

/// Least-norm correction of block values onto the affine set of a problem.
pub fn project_affine(
    problem: &AffinePsdProblem,
    values: &[Mat],
) -> Result<Vec<Mat>> {
    AffineProjector::new(problem)?.project(values)
}

fn transpose_dense(a_row_major: &[f64], m: usize, n: usize) -> Vec<f64> {
    let mut at = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            at[j * m + i] = a_row_major[i * n + j];
        }
    }
    at
}

fn assemble(problem: &AffinePsdProblem, lay: &Layout) -> (Vec<f64>, Vec<f64>) {
    let m = problem.constraints.len();
    let mut amat = vec![0.0; m * lay.total];
    let mut rhs = vec![0.0; m];
    for (ci, c) in problem.constraints.iter().enumerate() {
        rhs[ci] = c.rhs;
        for (b, g) in &c.terms {
            let mut gv = Vec::with_capacity(svec_len(&problem.blocks[*b]));
            svec_into(g, &mut gv);
            let off = lay.offsets[*b];
            for (k, val) in gv.iter().enumerate() {
                amat[ci * lay.total + off + k] += val;
            }
        }
    }
    (amat, rhs)
}

fn matvec(a: &[f64], m: usize, n: usize, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m];
    for i in 0..m {
        let row = &a[i * n..(i + 1) * n];
        y[i] = row.iter().zip(x).map(|(p, q)| p * q).sum();
    }
    y
}

fn affine_step(
    amat: &[f64],
    rhs: &[f64],
    qr_of_at: &PivotedQr,
    x: &[f64],
    n: usize,
) -> Result<Vec<f64>> {
    let m = rhs.len();
    if m == 0 {
        return Ok(x.to_vec());
    }
    let ax = matvec(amat, m, n, x);
    let gap: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let (delta, resid) = qr_of_at.min_norm_transpose_solve(&gap);
    let scale = 1.0 + rhs.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if resid > 1e-8 * scale {
        return Err(Error::IllPosed(resid));
    }
    Ok(x.iter().zip(&delta).map(|(a, d)| a + d).collect())
}

/// Joint projection onto { all blocks PSD, total trace <= cap }:
/// per-block eigenvalue clipping with a shared water-filling shift.
fn project_cone_capped(blocks: &[BlockSpec], lay: &Layout, v: &[f64], cap: f64) -> Vec<f64> {
    let mats = lay.unpack(blocks, v);
    let mut decs = Vec::with_capacity(mats.len());
    for m in &mats {
        // svec coordinates always decode to an exactly self-adjoint matrix
        let dec = herm_eig(m).expect("svec decode is self-adjoint");
        decs.push(dec);
    }
    let clipped_trace: f64 = decs
        .iter()
        .flat_map(|d| d.values.iter())
        .map(|&l| l.max(0.0))
        .sum();
    let theta = if clipped_trace <= cap {
        0.0
    } else {
        // bisect sum max(l - theta, 0) = cap
        let mut lo = 0.0f64;
        let mut hi = decs
            .iter()
            .flat_map(|d| d.values.iter())
            .fold(0.0f64, |m, &l| m.max(l));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s: f64 = decs
                .iter()
                .flat_map(|d| d.values.iter())
                .map(|&l| (l - mid).max(0.0))
                .sum();
            if s > cap {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut out = Vec::with_capacity(lay.total);
    for (spec, dec) in blocks.iter().zip(&decs) {
        let n = spec.size;
        let mut lam = Mat::zeros(n, n, spec.field);
        for (i, &l) in dec.values.iter().enumerate() {
            lam.set(i, i, (l - theta).max(0.0), 0.0);
        }
        let m = dec.vectors.matmul(&lam).matmul(&dec.vectors.adjoint());
        svec_into(&m, &mut out);
    }
    out
}

// ---- validation, exposed so callers never trust the solver ----

/// Max constraint violation and min block eigenvalue of a candidate point.
pub fn check_point(problem: &AffinePsdProblem, point: &[Mat]) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    for c in &problem.constraints {
        let mut v = -c.rhs;
        for (b, g) in &c.terms {
            v += g.inner_re(&point[*b]);
        }
        worst = worst.max(v.abs());
    }
    let mut min_lambda = f64::INFINITY;
    for p in point {
        min_lambda = min_lambda.min(min_eig(&p.herm_part())?);
    }
    Ok((worst, min_lambda))
}

/// Re-validate an infeasibility certificate from scratch.
///
/// Returns the certified margin `<w,b> - cap * max(0, lambda_max(A^T w))`,
/// positive when the capped problem is genuinely infeasible.
pub fn check_dual(problem: &AffinePsdProblem, multipliers: &[f64]) -> Result<f64> {
    if multipliers.len() != problem.constraints.len() {
        return Err(Error::DimensionMismatch(
            "one multiplier per constraint".into(),
        ));
    }
    let mut pairing = 0.0;
    let mut t_blocks: Vec<Mat> = problem
        .blocks
        .iter()
        .map(|b| Mat::zeros(b.size, b.size, b.field))
        .collect();
    for (w, c) in multipliers.iter().zip(&problem.constraints) {
        pairing += w * c.rhs;
        for (b, g) in &c.terms {
            t_blocks[*b] = t_blocks[*b].add(&g.scale(*w));
        }
    }
    let mut lam_max = 0.0f64;
    for t in &t_blocks {
        lam_max = lam_max.max(herm_eig(&t.herm_part())?.max());
    }
    Ok(pairing - problem.cap() * lam_max.max(0.0))
}

/// Aggregate the multipliers into the per-block dual matrices `A^T w`.
pub fn dual_blocks(problem: &AffinePsdProblem, multipliers: &[f64]) -> Vec<Mat> {
    let mut t_blocks: Vec<Mat> = problem
        .blocks
        .iter()
        .map(|b| Mat::zeros(b.size, b.size, b.field))
        .collect();
    for (w, c) in multipliers.iter().zip(&problem.constraints) {
        for (b, g) in &c.terms {
            t_blocks[*b] = t_blocks[*b].add(&g.scale(*w));
        }
    }
    t_blocks
}

// ---- the solver ----

/// Dykstra alternating projections with validated exits.
pub fn solve_feasibility(problem: &AffinePsdProblem, cfg: &ToleranceConfig) -> Result<FeasResult> {
    let result = solve_feasibility_inner(problem, cfg);
    if let Ok(res) = &result {
        dump_if_enabled(problem, res);
    }
    result
}

fn solve_feasibility_inner(
    problem: &AffinePsdProblem,
    cfg: &ToleranceConfig,
) -> Result<FeasResult> {
    cfg.validate()?;
    problem.validate()?;

    let lay = Layout::new(&problem.blocks);
    let m = problem.constraints.len();
    let cap = problem.cap();
    let (amat, rhs) = assemble(problem, &lay);

    if m == 0 {
        let point = lay.unpack(&problem.blocks, &vec![0.0; lay.total]);
        return Ok(FeasResult { status: FeasStatus::Feasible, point: Some(point), dual: None, iterations: 0 });
    }

    let at = transpose_dense(&amat, m, lay.total);
    let qr = PivotedQr::new(&at, lay.total, m);

    // affine consistency gate
    let start = affine_step(&amat, &rhs, &qr, &vec![0.0; lay.total], lay.total)?;

    let mut x = start;
    let mut p_corr = vec![0.0; lay.total];
    let mut q_corr = vec![0.0; lay.total];
    let mut y = vec![0.0; lay.total];
    let mut prev_disp = f64::INFINITY;
    let mut stall_count = 0usize;
    let check_every = 25usize;

    let scale = 1.0 + rhs.iter().fold(0.0f64, |s, v| s.max(v.abs()));

    for it in 0..cfg.max_iter {
        let xp: Vec<f64> = x.iter().zip(&p_corr).map(|(a, b)| a + b).collect();
        y = project_cone_capped(&problem.blocks, &lay, &xp, cap);
        for k in 0..lay.total {
            p_corr[k] = xp[k] - y[k];
        }
        let yq: Vec<f64> = y.iter().zip(&q_corr).map(|(a, b)| a + b).collect();
        let xn = affine_step(&amat, &rhs, &qr, &yq, lay.total)?;
        for k in 0..lay.total {
            q_corr[k] = yq[k] - xn[k];
        }
        x = xn;

        if it % check_every == check_every - 1 || it + 1 == cfg.max_iter {
            // candidate 1: cone point y, check the affine residual
            let ay = matvec(&amat, m, lay.total, &y);
            let ry = ay
                .iter()
                .zip(&rhs)
                .fold(0.0f64, |mx, (a, b)| mx.max((a - b).abs()));
            if ry <= cfg.tol_feas * scale {
                let point = lay.unpack(&problem.blocks, &y);
                if let Ok((viol, lmin)) = check_point(problem, &point) {
                    if viol <= cfg.tol_feas * scale && lmin >= -cfg.tol_psd {
                        return Ok(FeasResult {
                            status: FeasStatus::Feasible,
                            point: Some(point),
                            dual: None,
                            iterations: it + 1,
                        });
                    }
                }
            }
            // candidate 2: affine point x, check positivity
            let mats = lay.unpack(&problem.blocks, &x);
            let lmin = mats
                .iter()
                .map(|b| min_eig(&b.herm_part()).unwrap_or(f64::NEG_INFINITY))
                .fold(f64::INFINITY, f64::min);
            if lmin >= -cfg.tol_psd {
                if let Ok((viol, lmin2)) = check_point(problem, &mats) {
                    if viol <= cfg.tol_feas * scale && lmin2 >= -cfg.tol_psd {
                        return Ok(FeasResult {
                            status: FeasStatus::Feasible,
                            point: Some(mats),
                            dual: None,
                            iterations: it + 1,
                        });
                    }
                }
            }
            // stall detection: displacement between the two sets stabilizes
            let disp: f64 = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if disp > 2.0 * cfg.tol_feas * scale
                && (disp - prev_disp).abs() <= 1e-7 * (1.0 + disp)
            {
                stall_count += 1;
            } else {
                stall_count = 0;
            }
            prev_disp = disp;
            if stall_count >= 3 || it + 1 == cfg.max_iter {
                if let Some(cert) = try_certificate(problem, &lay, &qr, &x, &y, cfg) {
                    return Ok(FeasResult {
                        status: FeasStatus::Infeasible,
                        point: None,
                        dual: Some(cert),
                        iterations: it + 1,
                    });
                }
                stall_count = 0;
            }
        }
    }

    let _ = y;
    Ok(FeasResult { status: FeasStatus::Undecided, point: None, dual: None, iterations: cfg.max_iter })
}

/// Multipliers from the limiting displacement, polished by one pass of
/// blockwise NSD projection, then re-validated through `check_dual`.
fn try_certificate(
    problem: &AffinePsdProblem,
    lay: &Layout,
    qr: &PivotedQr,
    x: &[f64],
    y: &[f64],
    cfg: &ToleranceConfig,
) -> Option<DualCertificate> {
    let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if vn == 0.0 {
        return None;
    }
    let v: Vec<f64> = v.iter().map(|t| t / vn).collect();
    let (w0, _) = qr.least_squares(&v);

    let mut best: Option<DualCertificate> = None;
    let mut candidate = w0;
    for _pass in 0..3 {
        let scaled = normalize_multipliers(problem, &candidate);
        if let Ok(margin) = check_dual(problem, &scaled) {
            if margin >= cfg.tol_cert {
                let better = best
                    .as_ref()
                    .map_or(true, |b| margin > b.margin);
                if better {
                    best = Some(DualCertificate { multipliers: scaled.clone(), margin });
                }
            }
        }
        // cutting-plane style polish: clamp the dual blocks to NSD and refit
        let t_blocks = dual_blocks(problem, &candidate);
        let mut clipped = Vec::with_capacity(t_blocks.len());
        for t in &t_blocks {
            let nsd = project_psd(&t.neg()).ok()?.neg();
            clipped.push(nsd);
        }
        let target = lay.pack(&problem.blocks, &clipped);
        let (w1, _) = qr.least_squares(&target);
        candidate = w1;
    }
    best
}

fn normalize_multipliers(problem: &AffinePsdProblem, w: &[f64]) -> Vec<f64> {
    // unit Frobenius norm of the separating functional A^T w
    let blocks = dual_blocks(problem, w);
    let norm = blocks
        .iter()
        .map(|b| {
            let f = b.fro_norm();
            f * f
        })
        .sum::<f64>()
        .sqrt();
    if norm <= 0.0 {
        return w.to_vec();
    }
    w.iter().map(|t| t / norm).collect()
}

// ---- optional problem dumps for the CLI debugging path ----

static DUMP_DIR: Mutex<Option<std::path::PathBuf>> = Mutex::new(None);

/// Route every solved problem to JSON files under `dir` (None to disable).
pub fn set_dump_dir(dir: Option<std::path::PathBuf>) {
    *DUMP_DIR.lock().unwrap() = dir;
}

fn dump_if_enabled(problem: &AffinePsdProblem, result: &FeasResult) {
    let guard = DUMP_DIR.lock().unwrap();
    if let Some(dir) = guard.as_ref() {
        #[derive(Serialize)]
        struct Dump<'a> {
            problem: &'a AffinePsdProblem,
            result: &'a FeasResult,
        }
        if let Ok(body) = serde_json::to_string_pretty(&Dump { problem, result }) {
            // content-hash names keep the dump deterministic and idempotent
            let mut h: u64 = 0xcbf29ce484222325;
            for byte in body.as_bytes() {
                h ^= *byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
            let path = dir.join(format!("conic_{h:016x}.json"));
            let _ = std::fs::create_dir_all(dir);
            let _ = std::fs::write(path, body);
        }
    }
}
