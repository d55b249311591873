//! Finite-dimensional operator systems over R or C.
//!
//! A system is a unital self-adjoint span of matrices in a full matrix
//! algebra, with its involution stored as a coordinate action so that
//! trivial involutions are detectable exactly. Matrix states are tested by
//! extension to the full ambient algebra, encoded as one Choi PSD block with
//! linear matching constraints; the ambient algebra is injective in both the
//! real and complex category, so the encoding loses nothing.

use serde::{Deserialize, Serialize};

use crate::choi::{self, EquationGroup};
use crate::config::ToleranceConfig;
use crate::conic::{self, AffinePsdProblem, AffineProjector, BlockSpec, FeasStatus};
use crate::eig::{self, herm_eig};
use crate::error::{Error, Result};
use crate::mat::{Field, Mat};
use crate::qr::PivotedQr;
use crate::randmat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A concrete operator system: ambient size, spanning basis with unit,
/// involution as an s x s real coordinate matrix.
#[derive(Debug, Clone, Serialize)]
pub struct OpSysDescr {
    pub ambient: usize,
    pub field: Field,
    pub basis: Vec<Mat>,
    pub involution: Vec<Vec<f64>>,
    #[serde(skip)]
    coord_qr: Option<std::sync::Arc<PivotedQr>>,
}

#[derive(Deserialize)]
struct OpSysJson {
    ambient: usize,
    field: Field,
    basis: Vec<Mat>,
    involution: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for OpSysDescr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OpSysJson::deserialize(d)?;
        OpSysDescr::new(raw.ambient, raw.field, raw.basis, raw.involution)
            .map_err(serde::de::Error::custom)
    }
}

/// System reference in JSON inputs: a builtin name or a full description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Builtin { builtin: String },
    Explicit(OpSysDescr),
}

impl SystemSpec {
    pub fn resolve(&self) -> Result<OpSysDescr> {
        match self {
            SystemSpec::Builtin { builtin } => builtin_system(builtin),
            SystemSpec::Explicit(sys) => Ok(sys.clone()),
        }
    }
}

fn flatten_len(ambient: usize, field: Field) -> usize {
    match field {
        Field::Real => ambient * ambient,
        Field::Complex => 2 * ambient * ambient,
    }
}

fn flatten_into(m: &Mat, out: &mut Vec<f64>) {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m.re_at(i, j));
        }
    }
    if m.field() == Field::Complex {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.push(m.im_at(i, j));
            }
        }
    }
}

impl OpSysDescr {
    pub fn new(
        ambient: usize,
        field: Field,
        basis: Vec<Mat>,
        involution: Vec<Vec<f64>>,
    ) -> Result<OpSysDescr> {
        if basis.is_empty() {
            return Err(Error::Invalid("system needs a nonempty basis".into()));
        }
        for b in &basis {
            if b.rows() != ambient || b.cols() != ambient {
                return Err(Error::DimensionMismatch(
                    "basis elements must be ambient-sized squares".into(),
                ));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch("basis element field mismatch".into()));
            }
        }
        let s = basis.len();
        if basis[0]
            .sub(&Mat::identity(ambient, field))
            .max_abs()
            > 1e-12
        {
            return Err(Error::Invalid("basis[0] must be the ambient identity".into()));
        }
        if involution.len() != s || involution.iter().any(|r| r.len() != s) {
            return Err(Error::DimensionMismatch("involution must be s x s".into()));
        }
        // involution squared = identity
        for i in 0..s {
            for j in 0..s {
                let mut acc = 0.0;
                for k in 0..s {
                    acc += involution[i][k] * involution[k][j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                if (acc - want).abs() > 1e-10 {
                    return Err(Error::Invalid("involution matrix must square to identity".into()));
                }
            }
        }
        let mut sys = OpSysDescr { ambient, field, basis, involution, coord_qr: None };
        sys.build_coord_qr();
        // basis linear independence over R (complex entries flattened)
        let qr = sys.coord_qr.as_ref().unwrap();
        if qr.rank() != s {
            return Err(Error::Invalid("basis is linearly dependent".into()));
        }
        // span closed under adjoints, matching the declared involution
        for k in 0..s {
            let direct = sys.basis[k].adjoint();
            let mut combo = Mat::zeros(ambient, ambient, field);
            for l in 0..s {
                combo = combo.add(&sys.basis[l].scale(sys.involution[l][k]));
            }
            if direct.sub(&combo).max_abs() > 1e-9 * (1.0 + direct.max_abs()) {
                return Err(Error::Invalid(
                    "involution matrix does not reproduce the ambient adjoint".into(),
                ));
            }
        }
        // order-unit sanity at desk scale: v + 2||v|| 1 is PSD for sa basis v
        for k in 0..s {
            let b = &sys.basis[k];
            if b.is_self_adjoint(1e-10) {
                let norm = eig::op_norm(b)?;
                let shifted = b.add(&Mat::identity(ambient, field).scale(2.0 * norm + 1e-12));
                if !eig::is_psd(&shifted, 1e-8)? {
                    return Err(Error::Invalid("unit fails the order-unit check".into()));
                }
            }
        }
        Ok(sys)
    }

    fn build_coord_qr(&mut self) {
        let s = self.basis.len();
        let rows = flatten_len(self.ambient, self.field);
        let mut a = vec![0.0; rows * s];
        for (k, b) in self.basis.iter().enumerate() {
            let mut col = Vec::with_capacity(rows);
            flatten_into(b, &mut col);
            for (r, v) in col.iter().enumerate() {
                a[r * s + k] = *v;
            }
        }
        self.coord_qr = Some(std::sync::Arc::new(PivotedQr::new(&a, rows, s)));
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Trivial involution means the system is the self-adjoint part of
    /// another system; detected exactly from the stored matrix.
    pub fn has_trivial_involution(&self) -> bool {
        let s = self.dim();
        (0..s).all(|i| {
            (0..s).all(|j| {
                let want = if i == j { 1.0 } else { 0.0 };
                (self.involution[i][j] - want).abs() <= 1e-14
            })
        })
    }

    /// Real coordinates of `v` in the basis; complex systems get complex
    /// coordinates as (re, im) pairs.
    pub fn coords_of(&self, v: &Mat) -> Result<Vec<(f64, f64)>> {
        if v.rows() != self.ambient || v.cols() != self.ambient {
            return Err(Error::DimensionMismatch("element must be ambient-sized".into()));
        }
        match self.field {
            Field::Real => {
                let mut target = Vec::new();
                flatten_into(&v.real_part(), &mut target);
                let (x, resid) = self.coord_qr.as_ref().unwrap().least_squares(&target);
                if resid > 1e-8 * (1.0 + v.max_abs()) {
                    return Err(Error::BasisMismatch(resid));
                }
                Ok(x.into_iter().map(|c| (c, 0.0)).collect())
            }
            Field::Complex => {
                // complex coordinates: solve for real and imaginary targets
                let vc = v.to_complex();
                let mut target = Vec::new();
                flatten_into(&vc, &mut target);
                let (x, resid) = self.coord_qr.as_ref().unwrap().least_squares(&target);
                // x are real coefficients against complex basis: real part only;
                // redo with the i-scaled target for the imaginary coefficients.
                let mut target_i = Vec::new();
                flatten_into(&vc.scale_complex(0.0, -1.0), &mut target_i);
                let (y, resid_i) = self.coord_qr.as_ref().unwrap().least_squares(&target_i);
                let r = resid.max(resid_i);
                if r > 1e-8 * (1.0 + v.max_abs()) {
                    return Err(Error::BasisMismatch(r));
                }
                Ok(x.into_iter().zip(y).collect())
            }
        }
    }

    pub fn element_from_coords(&self, coords: &[(f64, f64)]) -> Result<Mat> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch("one coordinate per basis element".into()));
        }
        let mut acc = Mat::zeros(self.ambient, self.ambient, self.field);
        for (c, b) in coords.iter().zip(&self.basis) {
            if self.field == Field::Real && c.1 != 0.0 {
                return Err(Error::FieldMismatch(
                    "complex coordinate against a real system".into(),
                ));
            }
            acc = acc.add(&b.scale_complex(c.0, c.1));
        }
        Ok(acc)
    }

    /// Coordinates of the adjoint of the element with the given coordinates.
    pub fn adjoint_coords(&self, coords: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let s = self.dim();
        let mut out = vec![(0.0, 0.0); s];
        for l in 0..s {
            for k in 0..s {
                let t = self.involution[l][k];
                // conjugate-linear: conj(z_k) * T[l][k]
                out[l].0 += t * coords[k].0;
                out[l].1 -= t * coords[k].1;
            }
        }
        out
    }
}

// ---- builtins ----

/// Built-in systems addressable by name: `quaternions`,
/// `complex_numbers_as_real`, `matrix_algebra:m`.
pub fn builtin_system(name: &str) -> Result<OpSysDescr> {
    if name == "quaternions" {
        return quaternions();
    }
    if name == "complex_numbers_as_real" {
        return complex_numbers_as_real();
    }
    if let Some(rest) = name.strip_prefix("matrix_algebra:") {
        let m: usize = rest
            .parse()
            .map_err(|_| Error::Invalid(format!("bad matrix_algebra size: {rest}")))?;
        return matrix_algebra(m);
    }
    Err(Error::Invalid(format!("unknown builtin system: {name}")))
}

/// The quaternions as 4x4 real matrices via the left regular representation.
pub fn quaternions() -> Result<OpSysDescr> {
    let one = Mat::identity(4, Field::Real);
    let i = Mat::from_rows_real(&[
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ]);
    let j = Mat::from_rows_real(&[
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0, 0.0],
    ]);
    let k = Mat::from_rows_real(&[
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
    ]);
    let mut inv = vec![vec![0.0; 4]; 4];
    inv[0][0] = 1.0;
    inv[1][1] = -1.0;
    inv[2][2] = -1.0;
    inv[3][3] = -1.0;
    OpSysDescr::new(4, Field::Real, vec![one, i, j, k], inv)
}

/// C viewed as a real system inside M_2(R).
pub fn complex_numbers_as_real() -> Result<OpSysDescr> {
    let one = Mat::identity(2, Field::Real);
    let i = Mat::from_rows_real(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
    let inv = vec![vec![1.0, 0.0], vec![0.0, -1.0]];
    OpSysDescr::new(2, Field::Real, vec![one, i], inv)
}

/// Full real matrix algebra M_m(R) as a system.
/// Basis: identity, E_11..E_{m-1,m-1}, then all off-diagonal units.
pub fn matrix_algebra(m: usize) -> Result<OpSysDescr> {
    if m == 0 {
        return Err(Error::Invalid("matrix_algebra needs m >= 1".into()));
    }
    let mut basis = vec![Mat::identity(m, Field::Real)];
    let mut index = vec![vec![0usize; m]; m]; // (i,j) -> basis index for units
    for i in 0..m - 1 {
        let mut e = Mat::zeros(m, m, Field::Real);
        e.set(i, i, 1.0, 0.0);
        index[i][i] = basis.len();
        basis.push(e);
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = Mat::zeros(m, m, Field::Real);
                e.set(i, j, 1.0, 0.0);
                index[i][j] = basis.len();
                basis.push(e);
            }
        }
    }
    let s = basis.len();
    let mut inv = vec![vec![0.0; s]; s];
    inv[0][0] = 1.0;
    // E_ii* = E_ii for i < m-1; E_ij* = E_ji; E_{m-1,m-1} is 1 - sum E_ii
    for i in 0..m - 1 {
        let k = index[i][i];
        inv[k][k] = 1.0;
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                inv[index[j][i]][index[i][j]] = 1.0;
            }
        }
    }
    OpSysDescr::new(m, Field::Real, basis, inv)
}

// ---- matrix states and ucp testing ----

/// Candidate matrix state at level n: images of the basis elements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UcpCandidate {
    pub n: usize,
    pub images: Vec<Mat>,
}

impl UcpCandidate {
    pub fn new(images: Vec<Mat>) -> Result<UcpCandidate> {
        if images.is_empty() {
            return Err(Error::Invalid("candidate needs images".into()));
        }
        let n = images[0].rows();
        for im in &images {
            if im.rows() != n || im.cols() != n {
                return Err(Error::DimensionMismatch("images must be square of one size".into()));
            }
        }
        Ok(UcpCandidate { n, images })
    }
}

/// A PSD block certifying a completely positive map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiBlock {
    pub m: usize,
    pub n: usize,
    pub mat: Mat,
}

impl ChoiBlock {
    pub fn apply(&self, x: &Mat) -> Mat {
        choi::apply_choi(&self.mat, self.m, self.n, x)
    }

    pub fn unit_image(&self) -> Mat {
        choi::choi_unit_image(&self.mat, self.m, self.n)
    }
}

#[derive(Debug, Clone)]
pub enum UcpVerdict {
    Yes(ChoiBlock),
    No,
    Undecided,
}

/// Full outcome of a ucp test, with the Choi problem and its dual kept
/// around for certificate extraction by the separation machinery.
pub struct UcpOutcome {
    pub verdict: UcpVerdict,
    pub problem: AffinePsdProblem,
    pub groups: Vec<EquationGroup>,
    pub dual: Option<Vec<f64>>,
}

fn candidate_gate(sys: &OpSysDescr, cand: &UcpCandidate, cfg: &ToleranceConfig) -> Result<()> {
    if cand.images.len() != sys.dim() {
        return Err(Error::BasisMismatch(cand.images.len() as f64));
    }
    for im in &cand.images {
        if im.field() != sys.field {
            return Err(Error::FieldMismatch("image field must match the system".into()));
        }
    }
    let n = cand.n;
    let unit_dev = cand.images[0].sub(&Mat::identity(n, sys.field)).max_abs();
    if unit_dev > cfg.tol_sym * (1.0 + 1.0) {
        return Err(Error::NotUcp);
    }
    // involution compatibility: image(b_k*) = image(b_k)*
    let s = sys.dim();
    for k in 0..s {
        let mut lhs = Mat::zeros(n, n, sys.field);
        for l in 0..s {
            lhs = lhs.add(&cand.images[l].scale(sys.involution[l][k]));
        }
        let rhs = cand.images[k].adjoint();
        if lhs.sub(&rhs).max_abs() > cfg.tol_cert * (1.0 + rhs.max_abs()) {
            return Err(Error::NotUcp);
        }
    }
    Ok(())
}

/// Is the candidate a matrix state, i.e. does it extend to a unital
/// completely positive map on the ambient algebra? The answer always
/// carries an independently validated witness.
pub fn is_ucp(sys: &OpSysDescr, cand: &UcpCandidate, cfg: &ToleranceConfig) -> Result<UcpOutcome> {
    candidate_gate(sys, cand, cfg)?;
    let n = cand.n;
    let m = sys.ambient;
    let mut problem = AffinePsdProblem::new(vec![BlockSpec { size: m * n, field: sys.field }]);
    let mut groups = Vec::with_capacity(sys.dim());
    for (b, target) in sys.basis.iter().zip(&cand.images) {
        groups.push(choi::push_matching_equations(&mut problem, 0, b, target, n));
    }
    let res = conic::solve_feasibility(&problem, cfg)?;
    let verdict = match res.status {
        FeasStatus::Feasible => {
            let point = res.point.expect("feasible carries a point");
            let choi_mat = point.into_iter().next().unwrap();
            let block = ChoiBlock { m, n, mat: choi_mat };
            // re-validate: PSD and basis matching by direct arithmetic
            let psd_ok = eig::is_psd(&block.mat, cfg.tol_psd)?;
            let mut match_ok = true;
            for (b, target) in sys.basis.iter().zip(&cand.images) {
                let got = block.apply(b);
                if got.sub(target).max_abs() > cfg.tol_feas * (1.0 + target.max_abs()) {
                    match_ok = false;
                }
            }
            if psd_ok && match_ok {
                UcpVerdict::Yes(block)
            } else {
                UcpVerdict::Undecided
            }
        }
        FeasStatus::Infeasible => {
            let dual = res.dual.as_ref().expect("infeasible carries a dual");
            if conic::check_dual(&problem, &dual.multipliers)? >= cfg.tol_cert {
                UcpVerdict::No
            } else {
                UcpVerdict::Undecided
            }
        }
        FeasStatus::Undecided => UcpVerdict::Undecided,
    };
    Ok(UcpOutcome {
        verdict,
        problem,
        groups,
        dual: res.dual.map(|d| d.multipliers),
    })
}

/// Random matrix state at level n: compression of an amplified identity
/// representation, `x -> beta* (x o 1_r) beta`.
pub fn sample_state<R: Rng>(sys: &OpSysDescr, n: usize, rng: &mut R) -> UcpCandidate {
    let amp = if sys.ambient >= n { 1 } else { n.div_ceil(sys.ambient) };
    let beta = randmat::random_isometry(sys.ambient * amp, n, sys.field, rng);
    let images = sys
        .basis
        .iter()
        .map(|b| {
            let big = b.kron(&Mat::identity(amp, sys.field));
            beta.adjoint().matmul(&big).matmul(&beta)
        })
        .collect();
    UcpCandidate::new(images).expect("compression images are square")
}

// ---- complexification of systems ----

/// Same basis reinterpreted over C. Positivity of x + iy in the result is
/// decided by the PSD check of the real block doubling, which for concrete
/// systems coincides with the ambient complex PSD cone.
pub fn complexify_opsys(sys: &OpSysDescr) -> Result<OpSysDescr> {
    if sys.field == Field::Complex {
        return Err(Error::AlreadyComplex);
    }
    OpSysDescr::new(
        sys.ambient,
        Field::Complex,
        sys.basis.iter().map(|b| b.to_complex()).collect(),
        sys.involution.clone(),
    )
}

/// Positivity of an element x + iy of the complexification, routed through
/// the real doubling of the ambient algebra.
pub fn positive_in_complexification(
    sys: &OpSysDescr,
    x: &Mat,
    y: &Mat,
    tol: f64,
) -> Result<bool> {
    if sys.field == Field::Complex {
        return Err(Error::AlreadyComplex);
    }
    let z = x.to_complex().add(&y.to_complex().scale_complex(0.0, 1.0));
    let doubled = z.real_doubling();
    if doubled.sym_deviation() > 1e-8 * (1.0 + doubled.max_abs()) {
        return Ok(false);
    }
    eig::is_psd(&doubled, tol)
}

// ---- the state-pairing maps between ncS(V)_c and ncS(V_c) ----

/// Real pair (f, g) at level n with c(f, g) a matrix state at level 2n.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub f: UcpCandidate,
    pub g: UcpCandidate,
}

/// Images of the doubled candidate c(f,g) at level 2n.
pub fn doubled_candidate(f: &UcpCandidate, g: &UcpCandidate) -> Result<UcpCandidate> {
    if f.n != g.n || f.images.len() != g.images.len() {
        return Err(Error::DimensionMismatch("pair shapes must agree".into()));
    }
    let n = f.n;
    let images = f
        .images
        .iter()
        .zip(&g.images)
        .map(|(fi, gi)| {
            let mut m = Mat::zeros(2 * n, 2 * n, fi.field());
            m.paste(0, 0, fi);
            m.paste(0, n, &gi.neg());
            m.paste(n, 0, gi);
            m.paste(n, n, fi);
            m
        })
        .collect();
    UcpCandidate::new(images)
}

/// psi: a valid pair (f, g) becomes the complex matrix state with images
/// f_k + i g_k on the complexified system. The pair is admitted only when
/// c(f, g) passes the level-2n state test.
pub fn psi_map(
    sys: &OpSysDescr,
    pair: &StatePair,
    cfg: &ToleranceConfig,
) -> Result<UcpCandidate> {
    if sys.field == Field::Complex {
        return Err(Error::AlreadyComplex);
    }
    let doubled = doubled_candidate(&pair.f, &pair.g)?;
    match is_ucp(sys, &doubled, cfg)?.verdict {
        UcpVerdict::Yes(_) => {}
        _ => return Err(Error::NotInComplexifiedStateSpace),
    }
    let images = pair
        .f
        .images
        .iter()
        .zip(&pair.g.images)
        .map(|(fi, gi)| fi.to_complex().add(&gi.to_complex().scale_complex(0.0, 1.0)))
        .collect();
    let out = UcpCandidate::new(images)?;
    let sys_c = complexify_opsys(sys)?;
    match is_ucp(&sys_c, &out, cfg)?.verdict {
        UcpVerdict::Yes(_) => Ok(out),
        _ => Err(Error::NotInComplexifiedStateSpace),
    }
}

/// gamma: split a complex matrix state of the complexified system into its
/// real and imaginary parts on the real system.
pub fn gamma_map(
    sys: &OpSysDescr,
    omega: &UcpCandidate,
    cfg: &ToleranceConfig,
) -> Result<StatePair> {
    if sys.field == Field::Complex {
        return Err(Error::AlreadyComplex);
    }
    let sys_c = complexify_opsys(sys)?;
    match is_ucp(&sys_c, omega, cfg)?.verdict {
        UcpVerdict::Yes(_) => {}
        _ => return Err(Error::NotUcp),
    }
    let f = UcpCandidate::new(omega.images.iter().map(|m| m.real_part()).collect())?;
    let g = UcpCandidate::new(omega.images.iter().map(|m| m.imag_part()).collect())?;
    // the doubled pair must be a real matrix state at level 2n
    let doubled = doubled_candidate(&f, &g)?;
    match is_ucp(sys, &doubled, cfg)?.verdict {
        UcpVerdict::Yes(_) => Ok(StatePair { f, g }),
        _ => Err(Error::NotUcp),
    }
}

// ---- a complex system viewed as a real one ----

/// A complex system realified: ambient doubled, basis {c(b_k)} u {c(i b_k)},
/// with the multiplication-by-i coordinate action kept for the state
/// correspondence.
pub struct RealifiedOpSys {
    pub system: OpSysDescr,
    pub parent: OpSysDescr,
}

pub fn realify_opsys(sys: &OpSysDescr) -> Result<RealifiedOpSys> {
    if sys.field == Field::Real {
        return Err(Error::AlreadyReal);
    }
    let s = sys.dim();
    let mut basis = Vec::with_capacity(2 * s);
    for b in &sys.basis {
        basis.push(b.real_doubling());
    }
    for b in &sys.basis {
        basis.push(b.scale_complex(0.0, 1.0).real_doubling());
    }
    // adjoint action: c(b)* = c(b*); on the doubled coordinates the parent
    // involution acts with conjugation, so (i b_k)* = -i b_k*.
    let mut inv = vec![vec![0.0; 2 * s]; 2 * s];
    for k in 0..s {
        for l in 0..s {
            let t = sys.involution[l][k];
            inv[l][k] += t;
            inv[l + s][k + s] -= t;
        }
    }
    let system = OpSysDescr::new(2 * sys.ambient, Field::Real, basis, inv)?;
    Ok(RealifiedOpSys { system, parent: sys.clone() })
}

/// From a real matrix state phi of the realified system with phi(i 1) = 0,
/// build the complex matrix state eps(phi)(x) = phi(x) - i phi(ix).
pub fn eps_complex_states(
    real_view: &RealifiedOpSys,
    phi: &UcpCandidate,
    cfg: &ToleranceConfig,
) -> Result<UcpCandidate> {
    let s = real_view.parent.dim();
    if phi.images.len() != 2 * s {
        return Err(Error::BasisMismatch(phi.images.len() as f64));
    }
    match is_ucp(&real_view.system, phi, cfg)?.verdict {
        UcpVerdict::Yes(_) => {}
        _ => return Err(Error::NotUcp),
    }
    let i_unit_norm = phi.images[s].max_abs();
    if i_unit_norm > cfg.tol_cert {
        return Err(Error::IAnnihilationFails(i_unit_norm));
    }
    let images = (0..s)
        .map(|k| {
            phi.images[k]
                .to_complex()
                .add(&phi.images[k + s].to_complex().scale_complex(0.0, -1.0))
        })
        .collect();
    let out = UcpCandidate::new(images)?;
    match is_ucp(&real_view.parent, &out, cfg)?.verdict {
        UcpVerdict::Yes(_) => Ok(out),
        _ => Err(Error::NotUcp),
    }
}

/// Restriction of a complex matrix state of the parent to the realified
/// system: phi(x) = Re omega(x) on both halves of the doubled basis.
pub fn restrict_to_realified(
    real_view: &RealifiedOpSys,
    omega: &UcpCandidate,
) -> Result<UcpCandidate> {
    let s = real_view.parent.dim();
    if omega.images.len() != s {
        return Err(Error::BasisMismatch(omega.images.len() as f64));
    }
    let mut images = Vec::with_capacity(2 * s);
    for k in 0..s {
        images.push(omega.images[k].real_part());
    }
    for k in 0..s {
        // Re omega(i b_k) = -Im omega(b_k)
        images.push(omega.images[k].imag_part().neg());
    }
    UcpCandidate::new(images)
}

// ---- factorization of cp maps through ucp maps ----

/// Split a self-adjoint cp map as `Phi = b Psi(.) b` with `b = Phi(1)^{1/2}`
/// and Psi ucp. Fails when the unit image is singular or too ill-conditioned.
pub fn cp_factorize(block: &ChoiBlock, cfg: &ToleranceConfig) -> Result<(Mat, ChoiBlock)> {
    if !eig::is_psd(&block.mat, cfg.tol_psd)? {
        return Err(Error::NotUcp);
    }
    let unit = block.unit_image().herm_part();
    let dec = herm_eig(&unit)?;
    let lmax = dec.max();
    let lmin = dec.min();
    if lmin <= 0.0 || lmax / lmin > 1e8 {
        return Err(Error::SingularUnitImage);
    }
    let b = eig::psd_sqrt(&unit)?;
    let binv = eig::spectral_map(&unit, |l| 1.0 / l.max(1e-300).sqrt())?;
    let scaler = Mat::identity(block.m, block.mat.field()).kron(&binv);
    let psi_mat = scaler.adjoint().matmul(&block.mat).matmul(&scaler);
    let psi = ChoiBlock { m: block.m, n: block.n, mat: psi_mat };
    // re-validate the factorization on the matrix units
    let field = block.mat.field();
    for i in 0..block.m {
        for j in 0..block.m {
            let mut e = Mat::zeros(block.m, block.m, field);
            e.set(i, j, 1.0, 0.0);
            let lhs = b.matmul(&psi.apply(&e)).matmul(&b);
            let rhs = block.apply(&e);
            if lhs.sub(&rhs).max_abs() > cfg.tol_cert * (1.0 + rhs.max_abs()) {
                return Err(Error::NotUcp);
            }
        }
    }
    let unit_dev = psi
        .unit_image()
        .sub(&Mat::identity(block.n, field))
        .max_abs();
    if unit_dev > cfg.tol_cert {
        return Err(Error::NotUcp);
    }
    Ok((b, psi))
}

// ---- positivity via states into M_2 ----

#[derive(Debug, Clone)]
pub enum PositivityVerdict {
    Positive,
    NotPositive { witness: ChoiBlock, value: f64 },
    Undecided,
}

/// Minimize the bottom eigenvalue of `Phi(v)` over ucp maps `V -> M_2`.
/// A validated negative optimum certifies non-positivity; an optimum above
/// `-tol_cert` certifies positivity of the self-adjoint element `v`.
pub fn positivity_via_level2(
    sys: &OpSysDescr,
    v: &Mat,
    cfg: &ToleranceConfig,
) -> Result<PositivityVerdict> {
    v.check_self_adjoint(cfg.tol_sym)?;
    // membership in the span is required
    let _ = sys.coords_of(v)?;
    let m = sys.ambient;
    let target = 2usize;
    // unitality constraints for the Choi unknown
    let mut unital = AffinePsdProblem::new(vec![BlockSpec { size: m * target, field: sys.field }]);
    choi::push_matching_equations(
        &mut unital,
        0,
        &Mat::identity(m, sys.field),
        &Mat::identity(target, sys.field),
        target,
    );
    let projector = AffineProjector::new(&unital)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e3779b97f4a7c15);
    let restarts = 20;
    let mut results: Vec<(f64, Mat)> = Vec::new();
    for r in 0..restarts {
        let mut c = if r == 0 {
            // deterministic start: a compression state
            choi::choi_of_compression(&Mat::from_fn(m, target, sys.field, |i, j| {
                ((i == j) as u32 as f64, 0.0)
            }))
        } else if r % 3 == 0 {
            choi::choi_of_compression(&randmat::random_isometry(m, target, sys.field, &mut rng))
        } else {
            randmat::random_psd(m * target, sys.field, &mut rng)
        };
        c = restore(&projector, &c, 60)?;
        let mut best_here = f64::INFINITY;
        let mut best_mat = c.clone();
        for it in 0..240 {
            let image = choi::apply_choi(&c, m, target, v).herm_part();
            let dec = herm_eig(&image)?;
            let lam = dec.min();
            if lam < best_here {
                best_here = lam;
                best_mat = c.clone();
            }
            let xi = dec.vectors.submatrix(0, 0, target, 1);
            let w = xi.matmul(&xi.adjoint());
            let grad = choi::lift_functional(v, &w, target).herm_part();
            let gn = grad.fro_norm().max(1e-12);
            let step = 0.8 / (gn * ((it + 1) as f64).sqrt());
            c = c.sub(&grad.scale(step));
            c = restore(&projector, &c, 8)?;
        }
        // polish the recorded best and re-measure
        let polished = restore(&projector, &best_mat, 200)?;
        let image = choi::apply_choi(&polished, m, target, v).herm_part();
        let lam = herm_eig(&image)?.min();
        results.push((lam, polished));
    }
    results.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (best_val, best_choi) = results.first().cloned().unwrap();
    let spread = results.last().unwrap().0 - best_val;

    if best_val < -cfg.tol_cert {
        // validate the witness strictly
        let block = ChoiBlock { m, n: target, mat: best_choi };
        let psd_ok = eig::is_psd(&block.mat, cfg.tol_psd)?;
        let unit_dev = block
            .unit_image()
            .sub(&Mat::identity(target, sys.field))
            .max_abs();
        let image = choi::apply_choi(&block.mat, m, target, v).herm_part();
        let lam = herm_eig(&image)?.min();
        if psd_ok && unit_dev <= cfg.tol_feas && lam < -cfg.tol_cert {
            return Ok(PositivityVerdict::NotPositive { witness: block, value: lam });
        }
        return Ok(PositivityVerdict::Undecided);
    }
    if spread <= cfg.tol_cert * (1.0 + best_val.abs()) * 10.0 {
        Ok(PositivityVerdict::Positive)
    } else {
        Ok(PositivityVerdict::Undecided)
    }
}

/// Alternate PSD and affine restoration a fixed number of rounds.
fn restore(projector: &AffineProjector, c: &Mat, rounds: usize) -> Result<Mat> {
    let mut cur = c.herm_part();
    for _ in 0..rounds {
        cur = conic::project_psd(&cur)?;
        cur = projector.project(&[cur])?.into_iter().next().unwrap();
    }
    // finish on the PSD side so eigen gates see a clean block
    conic::project_psd(&cur)
}

/// Supremum of the operator norm of `(id_r o Phi)(F)` over matrix states of
/// the system at the target level, from structured compressions plus a
/// subgradient ascent polish. The result is a certified lower bound on the
/// true supremum (each candidate is a validated state).
pub fn ucp_sup_norm(
    sys: &OpSysDescr,
    f_big: &Mat,
    r: usize,
    target: usize,
    cfg: &ToleranceConfig,
    samples: usize,
) -> Result<f64> {
    let m = sys.ambient;
    assert_eq!(f_big.rows(), r * m, "F must live in M_r(ambient)");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5a5a5a5a5a5a5a5);
    let mut best = 0.0f64;
    let mut best_choi: Option<Mat> = None;
    let consider = |choi_mat: &Mat, best: &mut f64, best_choi: &mut Option<Mat>| -> Result<()> {
        let val = image_norm(choi_mat, m, target, f_big, r)?;
        if val > *best {
            *best = val;
            *best_choi = Some(choi_mat.clone());
        }
        Ok(())
    };
    for amp in 1..=2usize {
        if m * amp < target {
            continue;
        }
        let rounds = samples.max(4) / 2;
        for _ in 0..rounds {
            let beta = randmat::random_isometry(m * amp, target, sys.field, &mut rng);
            // Choi of x -> beta*(x o 1_amp) beta
            let mut vs = Vec::new();
            for a in 0..amp {
                // rows of beta grouped by copy: x-slot i maps to row i*amp + a
                let mut v = Mat::zeros(m, target, sys.field);
                for i in 0..m {
                    for j in 0..target {
                        let (re, im) = beta.at(i * amp + a, j);
                        v.set(i, j, re, im);
                    }
                }
                vs.push(v);
            }
            let c = choi::choi_of_compressions(&vs);
            consider(&c, &mut best, &mut best_choi)?;
        }
    }
    // ascent polish from the best candidate
    if let Some(mut c) = best_choi {
        let mut unital = AffinePsdProblem::new(vec![BlockSpec { size: m * target, field: sys.field }]);
        choi::push_matching_equations(
            &mut unital,
            0,
            &Mat::identity(m, sys.field),
            &Mat::identity(target, sys.field),
            target,
        );
        let projector = AffineProjector::new(&unital)?;
        for it in 0..160 {
            let image = apply_amplified(&c, m, target, f_big, r).herm_part();
            let dec = herm_eig(&image)?;
            let (lam, xi) = if dec.max().abs() >= dec.min().abs() {
                (dec.max(), dec.vectors.submatrix(0, 0, r * target, 1))
            } else {
                let cols = dec.vectors.cols();
                (dec.min(), dec.vectors.submatrix(0, cols - 1, r * target, 1))
            };
            // gradient of xi* image xi in the Choi unknown, through the
            // amplification: sum over the r-leg entries
            let grad = amplified_gradient(f_big, &xi, m, target, r, lam >= 0.0);
            let gn = grad.fro_norm().max(1e-12);
            let step = 0.5 / (gn * ((it + 1) as f64).sqrt());
            c = c.add(&grad.scale(step));
            c = restore(&projector, &c, 8)?;
        }
        c = restore(&projector, &c, 200)?;
        // accept the polish only if the point is a validated state
        let unit_dev = choi::choi_unit_image(&c, m, target)
            .sub(&Mat::identity(target, sys.field))
            .max_abs();
        if unit_dev <= cfg.tol_feas && eig::is_psd(&c, cfg.tol_psd)? {
            let val = image_norm(&c, m, target, f_big, r)?;
            best = best.max(val);
        }
    }
    Ok(best)
}

fn apply_amplified(choi_mat: &Mat, m: usize, n: usize, f_big: &Mat, r: usize) -> Mat {
    // (id_r o Phi)(F): block (a,b) of F is m x m; image block is n x n
    let field = if choi_mat.field() == Field::Complex || f_big.field() == Field::Complex {
        Field::Complex
    } else {
        Field::Real
    };
    let mut out = Mat::zeros(r * n, r * n, field);
    for a in 0..r {
        for b in 0..r {
            let block = f_big.submatrix(a * m, b * m, m, m);
            let img = choi::apply_choi(choi_mat, m, n, &block);
            out.paste(a * n, b * n, &img);
        }
    }
    out
}

fn image_norm(choi_mat: &Mat, m: usize, n: usize, f_big: &Mat, r: usize) -> crate::error::Result<f64> {
    let image = apply_amplified(choi_mat, m, n, f_big, r);
    if image.is_self_adjoint(1e-8) {
        let dec = herm_eig(&image.herm_part())?;
        Ok(dec.max().abs().max(dec.min().abs()))
    } else {
        eig::op_norm(&image)
    }
}

fn amplified_gradient(f_big: &Mat, xi: &Mat, m: usize, n: usize, r: usize, ascend: bool) -> Mat {
    // functional xi* (id_r o Phi)(F) xi = sum_{a,b} xi_a* Phi(F_ab) xi_b
    //   = sum_{a,b} Re tr((xi_a xi_b*)* Phi(F_ab)) on the Hermitian image;
    // lift each term to the Choi unknown and sum.
    let field = f_big.field();
    let mut grad = Mat::zeros(m * n, m * n, field);
    for a in 0..r {
        let xa = xi.submatrix(a * n, 0, n, 1);
        for b in 0..r {
            let xb = xi.submatrix(b * n, 0, n, 1);
            let w = xa.matmul(&xb.adjoint());
            let block = f_big.submatrix(a * m, b * m, m, m);
            grad = grad.add(&choi::lift_functional(&block, &w, n).herm_part());
        }
    }
    if ascend {
        grad
    } else {
        grad.neg()
    }
}

// ---- quaternion <-> M_2(C) bridge ----

/// The standard identification of a (complexified) quaternion with a 2x2
/// complex matrix: a + bi + cj + dk -> [[a+bi, c+di], [-c+di, a-bi]].
pub fn quat_coords_to_m2c(coords: &[(f64, f64); 4]) -> Mat {
    let (a, b, c, d) = (coords[0], coords[1], coords[2], coords[3]);
    let mut m = Mat::zeros(2, 2, Field::Complex);
    m.set(0, 0, a.0 - b.1, a.1 + b.0);
    m.set(0, 1, c.0 - d.1, c.1 + d.0);
    m.set(1, 0, -c.0 - d.1, -c.1 + d.0);
    m.set(1, 1, a.0 + b.1, a.1 - b.0);
    m
}

/// Inverse of [`quat_coords_to_m2c`].
pub fn m2c_to_quat_coords(m: &Mat) -> [(f64, f64); 4] {
    let z11 = m.at(0, 0);
    let z12 = m.at(0, 1);
    let z21 = m.at(1, 0);
    let z22 = m.at(1, 1);
    // a = (z11+z22)/2, b = (z11-z22)/(2i), c = (z12-z21)/2, d = (z12+z21)/(2i)
    let half = 0.5;
    let a = ((z11.0 + z22.0) * half, (z11.1 + z22.1) * half);
    let b = ((z11.1 - z22.1) * half, -(z11.0 - z22.0) * half);
    let c = ((z12.0 - z21.0) * half, (z12.1 - z21.1) * half);
    let d = ((z12.1 + z21.1) * half, -(z12.0 + z21.0) * half);
    [a, b, c, d]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn builtins_validate() {
        for name in ["quaternions", "complex_numbers_as_real", "matrix_algebra:2", "matrix_algebra:3"] {
            let sys = builtin_system(name).unwrap();
            assert!(sys.dim() >= 2);
        }
        assert!(builtin_system("nope").is_err());
    }

    #[test]
    fn quaternion_relations() {
        let h = quaternions().unwrap();
        let i = &h.basis[1];
        let j = &h.basis[2];
        let k = &h.basis[3];
        assert!(i.matmul(j).sub(k).max_abs() < 1e-14);
        assert!(j.matmul(k).sub(i).max_abs() < 1e-14);
        assert!(i.matmul(i).add(&Mat::identity(4, Field::Real)).max_abs() < 1e-14);
        assert!(!h.has_trivial_involution());
    }

    #[test]
    fn coords_roundtrip() {
        let h = quaternions().unwrap();
        let v = h
            .element_from_coords(&[(1.0, 0.0), (-0.5, 0.0), (0.25, 0.0), (2.0, 0.0)])
            .unwrap();
        let c = h.coords_of(&v).unwrap();
        assert!((c[0].0 - 1.0).abs() < 1e-10);
        assert!((c[1].0 + 0.5).abs() < 1e-10);
        assert!((c[3].0 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn identity_map_is_ucp() {
        let sys = matrix_algebra(2).unwrap();
        let cand = UcpCandidate::new(sys.basis.clone()).unwrap();
        let out = is_ucp(&sys, &cand, &cfg()).unwrap();
        assert!(matches!(out.verdict, UcpVerdict::Yes(_)));
    }

    #[test]
    fn quaternion_level1_rejects_i_to_half() {
        let h = quaternions().unwrap();
        let one = Mat::identity(1, Field::Real);
        let images = vec![one.clone(), one.scale(0.5), one.scale(0.0), one.scale(0.0)];
        let cand = UcpCandidate::new(images).unwrap();
        // the involution gate already refuses: image of i* = -i must equal
        // image(i)^T = image(i), forcing zero
        assert!(matches!(is_ucp(&h, &cand, &cfg()), Err(Error::NotUcp)));
    }

    #[test]
    fn quaternion_level1_accepts_projection_to_real_part() {
        let h = quaternions().unwrap();
        let one = Mat::identity(1, Field::Real);
        let images = vec![one.clone(), one.scale(0.0), one.scale(0.0), one.scale(0.0)];
        let cand = UcpCandidate::new(images).unwrap();
        let out = is_ucp(&h, &cand, &cfg()).unwrap();
        assert!(matches!(out.verdict, UcpVerdict::Yes(_)));
    }

    #[test]
    fn sampled_states_are_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let h = quaternions().unwrap();
        for n in 1..=3 {
            let cand = sample_state(&h, n, &mut rng);
            let out = is_ucp(&h, &cand, &cfg()).unwrap();
            assert!(matches!(out.verdict, UcpVerdict::Yes(_)), "level {n}");
        }
    }

    #[test]
    fn quaternion_iso_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let h = quaternions().unwrap();
        for _ in 0..20 {
            let c1: [(f64, f64); 4] = std::array::from_fn(|_| (rng.gen_range(-1.0..1.0), 0.0));
            let c2: [(f64, f64); 4] = std::array::from_fn(|_| (rng.gen_range(-1.0..1.0), 0.0));
            let q1 = h.element_from_coords(&c1).unwrap();
            let q2 = h.element_from_coords(&c2).unwrap();
            let prod = q1.matmul(&q2);
            let pc = h.coords_of(&prod).unwrap();
            let lhs = quat_coords_to_m2c(&[pc[0], pc[1], pc[2], pc[3]]);
            let rhs = quat_coords_to_m2c(&c1).matmul(&quat_coords_to_m2c(&c2));
            assert!(lhs.sub(&rhs).max_abs() < 1e-10);
        }
        // roundtrip
        let m = quat_coords_to_m2c(&[(0.3, 0.1), (-0.2, 0.7), (1.0, 0.0), (0.0, -1.0)]);
        let back = quat_coords_to_m2c(&m2c_to_quat_coords(&m));
        assert!(back.sub(&m).max_abs() < 1e-12);
    }

    #[test]
    fn complexified_quaternion_positivity_matches_m2c() {
        // z PSD in the complexified system iff its 2x2 complex image is PSD
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let h = quaternions().unwrap();
        let mut agree = 0;
        for _ in 0..200 {
            let coords: [(f64, f64); 4] =
                std::array::from_fn(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let x = h
                .element_from_coords(&[
                    (coords[0].0, 0.0),
                    (coords[1].0, 0.0),
                    (coords[2].0, 0.0),
                    (coords[3].0, 0.0),
                ])
                .unwrap();
            let y = h
                .element_from_coords(&[
                    (coords[0].1, 0.0),
                    (coords[1].1, 0.0),
                    (coords[2].1, 0.0),
                    (coords[3].1, 0.0),
                ])
                .unwrap();
            let lhs = positive_in_complexification(&h, &x, &y, 1e-9).unwrap();
            let img = quat_coords_to_m2c(&coords);
            let rhs = img.is_self_adjoint(1e-8)
                && eig::is_psd(&img.herm_part(), 1e-9).unwrap();
            assert_eq!(lhs, rhs);
            agree += 1;
        }
        assert_eq!(agree, 200);
    }

    #[test]
    fn theta_preserves_complexified_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let h = quaternions().unwrap();
        for _ in 0..50 {
            let xe = h
                .element_from_coords(&[(rng.gen_range(-1.0..1.0), 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])
                .unwrap();
            let ye = h
                .element_from_coords(&[(0.0, 0.0), (rng.gen_range(-1.0..1.0), 0.0), (0.0, 0.0), (0.0, 0.0)])
                .unwrap();
            let plus = positive_in_complexification(&h, &xe, &ye, 1e-9).unwrap();
            let minus = positive_in_complexification(&h, &xe, &ye.neg(), 1e-9).unwrap();
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn psi_gamma_roundtrip_on_complex_numbers() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let sys = complex_numbers_as_real().unwrap();
        let sys_c = complexify_opsys(&sys).unwrap();
        for n in 1..=2 {
            // a complex matrix state of the complexified system by compression
            let omega = sample_state(&sys_c, n, &mut rng);
            let pair = gamma_map(&sys, &omega, &cfg()).unwrap();
            let back = psi_map(&sys, &pair, &cfg()).unwrap();
            for (a, b) in back.images.iter().zip(&omega.images) {
                assert!(a.sub(b).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn psi_of_real_state_is_canonical_complexification() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let sys = quaternions().unwrap();
        let f = sample_state(&sys, 2, &mut rng);
        let g = UcpCandidate::new(
            f.images.iter().map(|_| Mat::zeros(2, 2, Field::Real)).collect(),
        )
        .unwrap();
        let out = psi_map(&sys, &StatePair { f: f.clone(), g }, &cfg()).unwrap();
        for (a, b) in out.images.iter().zip(&f.images) {
            assert!(a.real_part().sub(b).max_abs() < 1e-10);
            assert!(a.imag_part().max_abs() < 1e-10);
        }
    }

    #[test]
    fn eps_inverts_real_part_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        // complex system: M_2(C) as the complexification of M_2(R)
        let m2 = matrix_algebra(2).unwrap();
        let m2c = complexify_opsys(&m2).unwrap();
        let rv = realify_opsys(&m2c).unwrap();
        let omega = sample_state(&m2c, 1, &mut rng);
        let phi = restrict_to_realified(&rv, &omega).unwrap();
        let back = eps_complex_states(&rv, &phi, &cfg()).unwrap();
        for (a, b) in back.images.iter().zip(&omega.images) {
            assert!(a.sub(b).max_abs() < 1e-8);
        }
    }

    #[test]
    fn realify_refuses_real_system() {
        let h = quaternions().unwrap();
        assert!(matches!(realify_opsys(&h), Err(Error::AlreadyReal)));
    }

    #[test]
    fn cp_factorize_recovers_scaled_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let beta = randmat::random_isometry(3, 2, Field::Real, &mut rng);
        let state = choi::choi_of_compression(&beta);
        let block = ChoiBlock { m: 3, n: 2, mat: state.scale(4.0) };
        let (b, psi) = cp_factorize(&block, &cfg()).unwrap();
        assert!(b.sub(&Mat::identity(2, Field::Real).scale(2.0)).max_abs() < 1e-8);
        assert!(psi.mat.sub(&state).max_abs() < 1e-8);
        // already ucp: b = I
        let block2 = ChoiBlock { m: 3, n: 2, mat: state.clone() };
        let (b2, _) = cp_factorize(&block2, &cfg()).unwrap();
        assert!(b2.sub(&Mat::identity(2, Field::Real)).max_abs() < 1e-8);
    }

    #[test]
    fn cp_factorize_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for _ in 0..5 {
            let raw = randmat::random_psd(6, Field::Real, &mut rng)
                .add(&Mat::identity(6, Field::Real).scale(0.4));
            let block = ChoiBlock { m: 3, n: 2, mat: raw };
            let (b, psi) = cp_factorize(&block, &cfg()).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let mut e = Mat::zeros(3, 3, Field::Real);
                    e.set(i, j, 1.0, 0.0);
                    let lhs = b.matmul(&psi.apply(&e)).matmul(&b);
                    let rhs = block.apply(&e);
                    assert!(lhs.sub(&rhs).max_abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn complexification_of_the_scalars() {
        // R complexifies to C with the usual order: a + ib is positive
        // exactly when b = 0 and a >= 0
        let r = matrix_algebra(1).unwrap();
        let cases = [
            (2.0, 0.0, true),
            (-1.0, 0.0, false),
            (1.0, 0.5, false),
            (0.0, 0.0, true),
        ];
        for (a, b, want) in cases {
            let x = Mat::identity(1, Field::Real).scale(a);
            let y = Mat::identity(1, Field::Real).scale(b);
            assert_eq!(
                positive_in_complexification(&r, &x, &y, 1e-9).unwrap(),
                want,
                "{a} + {b}i"
            );
        }
    }

    #[test]
    fn sa_part_complexification_order_iso_level1() {
        // level-1 positivity of the self-adjoint-part complexification of a
        // complex system matches ambient positivity: for x, y Hermitian,
        // x + iy is positive exactly when the real doubling is PSD
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let x = randmat::random_hermitian(2, Field::Complex, &mut rng);
            let y = randmat::random_hermitian(2, Field::Complex, &mut rng);
            let z = x.add(&y.scale_complex(0.0, 1.0));
            let direct = z.is_self_adjoint(1e-8)
                && eig::is_psd(&z.herm_part(), 1e-9).unwrap();
            let doubled = z.real_doubling();
            let via_doubling = doubled.is_self_adjoint(1e-8)
                && eig::is_psd(&doubled.herm_part(), 1e-9).unwrap();
            assert_eq!(direct, via_doubling);
        }
    }

    #[test]
    fn positivity_detects_small_negative_eigenvalue() {
        // random v with one slightly negative eigenvalue is flagged, in
        // agreement with the ambient spectrum
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let sys = matrix_algebra(2).unwrap();
        for _ in 0..3 {
            let u = randmat::random_unitary(2, Field::Real, &mut rng);
            let mut lam = Mat::zeros(2, 2, Field::Real);
            lam.set(0, 0, rng.gen_range(0.5..1.5), 0.0);
            lam.set(1, 1, -0.05, 0.0);
            let v = u.matmul(&lam).matmul(&u.adjoint()).herm_part();
            match positivity_via_level2(&sys, &v, &cfg()).unwrap() {
                PositivityVerdict::NotPositive { value, witness } => {
                    assert!(value < -1e-3);
                    // witness re-validates: unital, PSD, and negative image
                    assert!(eig::is_psd(&witness.mat, 1e-8).unwrap());
                    let unit_dev = witness
                        .unit_image()
                        .sub(&Mat::identity(2, Field::Real))
                        .max_abs();
                    assert!(unit_dev < 1e-6);
                }
                other => panic!("expected NotPositive, got {other:?}"),
            }
        }
    }

    #[test]
    fn psi_level1_quaternion_states_land_in_density_ball() {
        // a valid level-1 pair maps to a complex state whose 2x2 density
        // matrix is PSD with unit trace
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let h = quaternions().unwrap();
        let hc = complexify_opsys(&h).unwrap();
        for _ in 0..10 {
            let omega = sample_state(&hc, 1, &mut rng);
            let pair = gamma_map(&h, &omega, &cfg()).unwrap();
            let back = psi_map(&h, &pair, &cfg()).unwrap();
            // density matrix from the functional through the 2x2 bridge:
            // omega(q) = tr(D * img(q)) for all q determines D uniquely
            let mut d = Mat::zeros(2, 2, Field::Complex);
            // basis of M_2(C) built from quaternion images
            // omega(b_k) are scalars here (level 1)
            let imgs: Vec<Mat> = (0..4)
                .map(|k| {
                    let mut coords = [(0.0, 0.0); 4];
                    coords[k] = (1.0, 0.0);
                    quat_coords_to_m2c(&coords)
                })
                .collect();
            // solve tr(D img_k) = omega_k by linear algebra on the 4 dims
            // using the orthogonality <img_j, img_k> under the trace pairing
            let mut gram = vec![vec![(0.0, 0.0); 4]; 4];
            for (j, a) in imgs.iter().enumerate() {
                for (k, b) in imgs.iter().enumerate() {
                    gram[j][k] = a.adjoint().matmul(b).trace();
                }
            }
            // the images are trace-orthogonal up to scalars; project
            for (k, img) in imgs.iter().enumerate() {
                let (wr, wi) = back.images[k].at(0, 0);
                let (gr, _) = gram[k][k];
                // D += conj(omega_k)/<img,img> * img ... using tr(D img) form
                d = d.add(&img.scale_complex(wr / gr, -wi / gr));
            }
            let d = d.adjoint();
            let (tr, _) = d.trace();
            assert!((tr - 1.0).abs() < 1e-8, "trace {tr}");
            assert!(d.is_self_adjoint(1e-7));
            assert!(eig::is_psd(&d.herm_part(), 1e-7).unwrap());
        }
    }

    #[test]
    fn positivity_trivial_cases() {
        let sys = matrix_algebra(2).unwrap();
        let one = Mat::identity(2, Field::Real);
        match positivity_via_level2(&sys, &one, &cfg()).unwrap() {
            PositivityVerdict::Positive => {}
            other => panic!("expected Positive, got {other:?}"),
        }
        let v = Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        match positivity_via_level2(&sys, &v, &cfg()).unwrap() {
            PositivityVerdict::NotPositive { value, .. } => assert!(value < -1e-3),
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }
}
