//! Matrix-level separation with validated certificates, polars, bipolar
//! reports, and separable-body membership via a corrective Frank-Wolfe loop.
//!
//! A separation certificate is a pair (phi, gamma): a coordinate tuple of
//! n x n matrices and a self-adjoint gamma such that the realized pairing
//! `Re sum_k x_k (tensor) phi_k` stays below `1 (tensor) gamma` on the set
//! while exceeding it at the separated point. For generator hulls the
//! validity side is exact: the pairing transports through matrix convex
//! combinations, so checking the finitely many generators certifies every
//! level. For state spaces and facet sets validity is checked on samples and
//! the verdict stays honest about it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ToleranceConfig, DEFAULT_TRUNCATION};
use crate::eig::{self, herm_eig};
use crate::error::{Error, Result};
use crate::mat::{Field, Mat};
use crate::ncset::{self, HullCheck, Membership, MembershipWitness, NcRep, NcSetDescr};
use crate::opsys;
use crate::qr::PivotedQr;
use crate::tuple::MatTuple;

/// Effros-Winkler style separation data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SepCertificate {
    pub n: usize,
    pub phi: Vec<Mat>,
    pub gamma: Mat,
    pub margin: f64,
}

/// `Re sum_k x_k (tensor) phi_k` as a self-adjoint matrix of size n_x * n.
pub fn realized_pairing(x: &MatTuple, phi: &[Mat]) -> Mat {
    let n = phi[0].rows();
    let field = if x.field == Field::Complex || phi[0].field() == Field::Complex {
        Field::Complex
    } else {
        Field::Real
    };
    let mut acc = Mat::zeros(x.n * n, x.n * n, field);
    for (xk, pk) in x.parts.iter().zip(phi) {
        acc = acc.add(&xk.kron(pk));
    }
    acc.herm_part()
}

/// Slack of a certificate at one set point: lambda_max of the pairing minus
/// the gamma leg. Nonpositive means the inequality holds there.
pub fn point_slack(x: &MatTuple, phi: &[Mat], gamma: &Mat) -> Result<f64> {
    let e = realized_pairing(x, phi).sub(&Mat::identity(x.n, x.field).kron(gamma));
    Ok(herm_eig(&e.herm_part())?.max())
}

/// Independent re-validation of a certificate against a set.
///
/// Exact over generator hulls (the transport identity covers every level);
/// sampled for state-space and facet representations. Returns
/// (validity slack, violation at y).
pub fn validate_certificate(
    set: &NcSetDescr,
    y: &MatTuple,
    cert: &SepCertificate,
    cfg: &ToleranceConfig,
) -> Result<(f64, f64)> {
    if cert.phi.len() != set.d {
        return Err(Error::DimensionMismatch("certificate has wrong coordinate count".into()));
    }
    cert.gamma.check_self_adjoint(1e-8)?;
    let slack = match set.hull_generators() {
        Some((gens, contains_zero)) => {
            let mut worst = f64::NEG_INFINITY;
            for g in &gens {
                worst = worst.max(point_slack(g, &cert.phi, &cert.gamma)?);
            }
            if contains_zero {
                // validity at the origin: 0 <= gamma
                worst = worst.max(-herm_eig(&cert.gamma.herm_part())?.min());
            }
            worst
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5ca1ab1e);
            let mut worst = f64::NEG_INFINITY;
            let mut count = 0;
            for level in 1..=DEFAULT_TRUNCATION {
                for _ in 0..10 {
                    if let Ok(x) = ncset::sample(set, level, cfg, &mut rng) {
                        worst = worst.max(point_slack(&x, &cert.phi, &cert.gamma)?);
                        count += 1;
                    }
                }
            }
            if count == 0 {
                return Err(Error::RepresentationUnsupported(
                    "no points available to validate against".into(),
                ));
            }
            worst
        }
    };
    let violation = point_slack(y, &cert.phi, &cert.gamma)?;
    if slack > cfg.tol_cert {
        return Err(Error::Invalid(format!(
            "certificate violates the set side (slack {slack:.3e})"
        )));
    }
    if cert.margin <= 0.0 || violation < cert.margin - cfg.tol_cert {
        return Err(Error::Invalid(format!(
            "certificate does not separate (violation {violation:.3e}, claimed {:.3e})",
            cert.margin
        )));
    }
    Ok((slack, violation))
}

// ---- separation ----

#[derive(Debug, Clone)]
pub enum SepOutcome {
    Certificate(SepCertificate),
    InsideAfterAll(MembershipWitness),
    Undecided,
}

#[derive(Debug, Clone, Copy)]
pub struct SeparateOptions {
    /// Pin gamma to the identity (requires 0 in K) so the certificate is a
    /// polar element; only phi is searched.
    pub gamma_identity: bool,
}

impl Default for SeparateOptions {
    fn default() -> Self {
        SeparateOptions { gamma_identity: false }
    }
}

/// Separate a point from a set, guarding membership first.
pub fn separate(
    set: &NcSetDescr,
    y: &MatTuple,
    cfg: &ToleranceConfig,
    opts: SeparateOptions,
) -> Result<SepOutcome> {
    match ncset::member(set, y, cfg)? {
        Membership::Inside(w) => return Ok(SepOutcome::InsideAfterAll(w)),
        Membership::Undecided => return Err(Error::MembershipUndecided),
        Membership::Outside { .. } => {}
    }
    if let Some((gens, contains_zero)) = set.hull_generators() {
        if opts.gamma_identity && !contains_zero {
            return Err(Error::ZeroNotInK);
        }
        return Ok(match separate_from_hull(&gens, y, cfg, opts.gamma_identity)? {
            Some(cert) => SepOutcome::Certificate(cert),
            None => SepOutcome::Undecided,
        });
    }
    match &set.rep {
        NcRep::StateSpace { system } => {
            if opts.gamma_identity {
                return Err(Error::ZeroNotInK);
            }
            separate_from_state_space(set, system, y, cfg)
        }
        NcRep::MaxOfPolytope { facets } => {
            if opts.gamma_identity && facets.iter().any(|f| f.b < 0.0) {
                return Err(Error::ZeroNotInK);
            }
            separate_sampled(set, y, cfg, opts.gamma_identity, None)
        }
        other => Err(Error::RepresentationUnsupported(format!("{other:?}"))),
    }
}

/// Hull-only separation: run the membership feasibility, convert its dual,
/// polish, and validate. The caller must already know `y` is outside.
pub fn separate_from_hull(
    gens: &[MatTuple],
    y: &MatTuple,
    cfg: &ToleranceConfig,
    gamma_identity: bool,
) -> Result<Option<SepCertificate>> {
    let check = ncset::hull_feasibility(gens, y, cfg)?;
    certificate_from_hull_dual(gens, y, &check, cfg, gamma_identity)
}

/// Convert the Farkas dual of a hull-membership refusal into a separation
/// certificate, polish it with eigenvector cuts, and validate exactly on the
/// generators.
pub fn certificate_from_hull_dual(
    gens: &[MatTuple],
    y: &MatTuple,
    check: &HullCheck,
    cfg: &ToleranceConfig,
    gamma_identity: bool,
) -> Result<Option<SepCertificate>> {
    let n = y.n;
    let field = y.field;
    let (mut phi, gamma) = match &check.dual {
        Some(duals) => {
            let mut phi = Vec::with_capacity(y.d);
            for group in &check.match_groups {
                phi.push(group.multiplier_matrix(field, duals).conj());
            }
            let big_gamma = check.unit_group.multiplier_matrix(field, duals);
            let gamma = big_gamma.conj().herm_part().neg();
            (phi, gamma)
        }
        None => {
            // no dual available: seed from the point direction
            let scale = 1.0 + y.max_abs();
            (
                y.parts.iter().map(|p| p.conj().scale(1.0 / scale)).collect(),
                Mat::identity(n, field),
            )
        }
    };
    // self-adjoint context: the pairing only sees the Hermitian parts of phi
    let sa_context = y.parts_self_adjoint(1e-8) && gens.iter().all(|g| g.parts_self_adjoint(1e-8));
    if sa_context {
        for p in phi.iter_mut() {
            *p = p.herm_part();
        }
    }
    let gamma = if gamma_identity {
        // rescale phi so the point violation starts above the gamma level
        let v = point_slack(y, &phi, &Mat::zeros(n, n, field))?;
        if v > 0.0 {
            let s = 2.0 / v.max(1e-12);
            for p in phi.iter_mut() {
                *p = p.scale(s);
            }
        }
        Mat::identity(n, field)
    } else {
        gamma
    };
    let polished = polish_certificate(gens, y, phi, gamma, gamma_identity, cfg)?;
    Ok(polished)
}

/// Alternating eigenvector cuts (validity) and ascent steps (violation).
/// Exits only through strict validation.
fn polish_certificate(
    gens: &[MatTuple],
    y: &MatTuple,
    mut phi: Vec<Mat>,
    mut gamma: Mat,
    fix_gamma: bool,
    cfg: &ToleranceConfig,
) -> Result<Option<SepCertificate>> {
    let n = y.n;
    let field = y.field;
    let target_margin = 100.0 * cfg.tol_cert;
    let outer = 400usize;
    for it in 0..outer {
        // validity cuts over the generators
        for _ in 0..200 {
            let mut worst: Option<(usize, f64, Mat)> = None;
            for (gi, g) in gens.iter().enumerate() {
                let e = realized_pairing(g, &phi)
                    .sub(&Mat::identity(g.n, field).kron(&gamma));
                let dec = herm_eig(&e.herm_part())?;
                let lam = dec.max();
                if lam > 1e-12 && worst.as_ref().map_or(true, |w| lam > w.1) {
                    let cols = dec.vectors.cols();
                    let xi = dec.vectors.submatrix(0, cols - 1, g.n * n, 1);
                    worst = Some((gi, lam, xi));
                }
            }
            let Some((gi, lam, xi)) = worst else { break };
            cut_step(&gens[gi], &xi, lam, &mut phi, &mut gamma, fix_gamma);
        }
        // measure the violation at y
        let e_y = realized_pairing(y, &phi).sub(&Mat::identity(n, field).kron(&gamma));
        let dec = herm_eig(&e_y.herm_part())?;
        let violation = dec.max();
        if violation >= target_margin || (it + 1 == outer && violation >= 10.0 * cfg.tol_cert) {
            if let Some(cert) = finalize_certificate(gens, y, &phi, &gamma, cfg)? {
                return Ok(Some(cert));
            }
        }
        // ascent on the violation
        let cols = dec.vectors.cols();
        let xi = dec.vectors.submatrix(0, cols - 1, y.n * n, 1);
        let eta = 0.5 / ((it + 1) as f64).sqrt();
        ascent_step(y, &xi, eta, &mut phi, &mut gamma, fix_gamma);
    }
    finalize_certificate(gens, y, &phi, &gamma, cfg)
}

/// Project (phi, gamma) onto the violated halfspace of one eigenvector cut.
fn cut_step(g: &MatTuple, xi: &Mat, value: f64, phi: &mut [Mat], gamma: &mut Mat, fix_gamma: bool) {
    let n = phi[0].rows();
    let big = xi.rows() / n;
    let xi_mat = reshape_vec(xi, big, n);
    let coeffs: Vec<Mat> = g
        .parts
        .iter()
        .map(|gk| xi_mat.adjoint().matmul(gk).matmul(&xi_mat).conj())
        .collect();
    let e_coeff = xi_mat.adjoint().matmul(&xi_mat).conj();
    let mut norm2: f64 = coeffs.iter().map(|c| c.fro_norm().powi(2)).sum();
    if !fix_gamma {
        norm2 += e_coeff.fro_norm().powi(2);
    }
    if norm2 <= 0.0 {
        return;
    }
    let step = value / norm2;
    for (p, c) in phi.iter_mut().zip(&coeffs) {
        *p = p.sub(&c.scale(step));
    }
    if !fix_gamma {
        *gamma = gamma.add(&e_coeff.scale(step)).herm_part();
    }
}

/// Gradient step increasing the violation at y.
fn ascent_step(y: &MatTuple, xi: &Mat, eta: f64, phi: &mut [Mat], gamma: &mut Mat, fix_gamma: bool) {
    let n = phi[0].rows();
    let xi_mat = reshape_vec(xi, y.n, n);
    for (p, yk) in phi.iter_mut().zip(&y.parts) {
        let grad = xi_mat.adjoint().matmul(yk).matmul(&xi_mat).conj();
        *p = p.add(&grad.scale(eta));
    }
    if !fix_gamma {
        let e_coeff = xi_mat.adjoint().matmul(&xi_mat).conj();
        *gamma = gamma.sub(&e_coeff.scale(eta)).herm_part();
    }
}

/// A column vector of length big*n reshaped to big x n (row-major over the
/// coarse index, matching the kron convention x (tensor) phi).
fn reshape_vec(xi: &Mat, big: usize, n: usize) -> Mat {
    Mat::from_fn(big, n, xi.field(), |a, p| xi.at(a * n + p, 0))
}

/// Final normalization plus strict validation. Shifts gamma (or rescales phi
/// when gamma is pinned) so the generator slack is nonpositive, then checks
/// the gates.
fn finalize_certificate(
    gens: &[MatTuple],
    y: &MatTuple,
    phi: &[Mat],
    gamma: &Mat,
    cfg: &ToleranceConfig,
) -> Result<Option<SepCertificate>> {
    let n = y.n;
    let field = y.field;
    let mut phi = phi.to_vec();
    let mut gamma = gamma.clone();
    let mut slack = f64::NEG_INFINITY;
    for g in gens {
        slack = slack.max(point_slack(g, &phi, &gamma)?);
    }
    let pinned = gamma.sub(&Mat::identity(n, field)).max_abs() < 1e-14;
    if slack > 0.0 {
        if pinned {
            let s = 1.0 + slack;
            for p in phi.iter_mut() {
                *p = p.scale(1.0 / s);
            }
        } else {
            gamma = gamma.add(&Mat::identity(n, field).scale(slack + 1e-15));
        }
    }
    let mut final_slack = f64::NEG_INFINITY;
    for g in gens {
        final_slack = final_slack.max(point_slack(g, &phi, &gamma)?);
    }
    let violation = point_slack(y, &phi, &gamma)?;
    if final_slack <= cfg.tol_cert && violation >= 10.0 * cfg.tol_cert {
        Ok(Some(SepCertificate { n, phi, gamma, margin: violation }))
    } else {
        Ok(None)
    }
}

/// Separation from a state space: convert the ucp-test dual into coordinate
/// functionals, polish against sampled states, validate on samples.
fn separate_from_state_space(
    set: &NcSetDescr,
    system: &opsys::OpSysDescr,
    y: &MatTuple,
    cfg: &ToleranceConfig,
) -> Result<SepOutcome> {
    let n = y.n;
    let field = set.point_field();
    let s = system.dim();
    let mut phi: Vec<Mat> = vec![Mat::zeros(n, n, field); s];
    let mut gamma = Mat::identity(n, field);
    if let Ok(cand) = opsys::UcpCandidate::new(y.parts.clone()) {
        if let Ok(out) = opsys::is_ucp(system, &cand, cfg) {
            if let Some(duals) = out.dual {
                for (k, group) in out.groups.iter().enumerate() {
                    let w = group.multiplier_matrix(field, &duals).conj();
                    if k == 0 {
                        gamma = w.herm_part().neg();
                    } else {
                        phi[k] = w;
                    }
                }
            }
        }
    }
    separate_sampled(set, y, cfg, false, Some((phi, gamma)))
}

/// Sampled-cut search for representations without finite generator lists.
/// Validity is certified on samples only; Undecided whenever the gates miss.
fn separate_sampled(
    set: &NcSetDescr,
    y: &MatTuple,
    cfg: &ToleranceConfig,
    gamma_identity: bool,
    warm: Option<(Vec<Mat>, Mat)>,
) -> Result<SepOutcome> {
    let n = y.n;
    let field = set.point_field();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0ddba11);
    let mut cut_points: Vec<MatTuple> = Vec::new();
    for level in 1..=DEFAULT_TRUNCATION {
        for _ in 0..12 {
            if let Ok(x) = ncset::sample(set, level, cfg, &mut rng) {
                cut_points.push(x);
            }
        }
    }
    if cut_points.is_empty() {
        return Ok(SepOutcome::Undecided);
    }
    let (phi0, gamma0) = warm.unwrap_or_else(|| {
        let scale = 1.0 + y.max_abs();
        (
            y.parts.iter().map(|p| p.conj().scale(1.0 / scale)).collect(),
            Mat::identity(n, field),
        )
    });
    let gamma0 = if gamma_identity { Mat::identity(n, field) } else { gamma0 };
    match polish_certificate(&cut_points, y, phi0, gamma0, gamma_identity, cfg)? {
        Some(cert) => {
            // the sampled validator is the only gate here
            match validate_certificate(set, y, &cert, cfg) {
                Ok(_) => Ok(SepOutcome::Certificate(cert)),
                Err(_) => Ok(SepOutcome::Undecided),
            }
        }
        None => Ok(SepOutcome::Undecided),
    }
}

// ---- polar membership ----

#[derive(Debug, Clone)]
pub enum PolarVerdict {
    Inside,
    Outside { generator: usize, eigenvalue: f64, eigvec: Mat },
    Undecided,
}

impl PolarVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, PolarVerdict::Inside)
    }
    pub fn is_outside(&self) -> bool {
        matches!(self, PolarVerdict::Outside { .. })
    }
}

/// Membership of phi in the polar: the realized pairing must stay below 1 at
/// every member of the set. Exact over hull generators; over other
/// representations a violated validated sample certifies Outside while
/// agreement only yields Undecided.
pub fn polar_member(
    set: &NcSetDescr,
    phi: &MatTuple,
    cfg: &ToleranceConfig,
) -> Result<PolarVerdict> {
    if phi.d != set.d {
        return Err(Error::DimensionMismatch("polar element has wrong coordinate count".into()));
    }
    if let Some((gens, _)) = set.hull_generators() {
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut outside: Option<(usize, f64, Mat)> = None;
        for (gi, g) in gens.iter().enumerate() {
            let e = realized_pairing(g, &phi.parts);
            let dec = herm_eig(&e.herm_part())?;
            let lam = dec.max();
            worst = worst.max(lam);
            if lam > 1.0 + cfg.tol_cert && outside.is_none() {
                let cols = dec.vectors.cols();
                outside = Some((gi, lam, dec.vectors.submatrix(0, cols - 1, e.rows(), 1)));
            }
        }
        if let Some((generator, eigenvalue, eigvec)) = outside {
            return Ok(PolarVerdict::Outside { generator, eigenvalue, eigvec });
        }
        if worst <= 1.0 + cfg.tol_psd {
            return Ok(PolarVerdict::Inside);
        }
        return Ok(PolarVerdict::Undecided);
    }
    match &set.rep {
        NcRep::Pencil { .. } | NcRep::MaxOfPolytope { .. } | NcRep::StateSpace { .. }
        | NcRep::Realified { .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9d5f);
            for level in 1..=DEFAULT_TRUNCATION {
                for _ in 0..20 {
                    let Ok(x) = ncset::sample(set, level, cfg, &mut rng) else { continue };
                    // only validated members may refute
                    if !ncset::member(set, &x, cfg)?.is_inside() {
                        continue;
                    }
                    let e = realized_pairing(&x, &phi.parts);
                    let dec = herm_eig(&e.herm_part())?;
                    if dec.max() > 1.0 + cfg.tol_cert {
                        let cols = dec.vectors.cols();
                        return Ok(PolarVerdict::Outside {
                            generator: usize::MAX,
                            eigenvalue: dec.max(),
                            eigvec: dec.vectors.submatrix(0, cols - 1, e.rows(), 1),
                        });
                    }
                }
            }
            Ok(PolarVerdict::Undecided)
        }
        other => Err(Error::RepresentationUnsupported(format!("{other:?}"))),
    }
}

// ---- bipolar report ----

#[derive(Debug, Clone, Default, Serialize)]
pub struct BipolarReport {
    pub inside_checked: usize,
    pub inside_confirmed: usize,
    pub outside_checked: usize,
    pub outside_certified: usize,
    pub outside_undecided: usize,
    pub misclassified: usize,
}

/// Sampled two-sided bipolar check for a set containing the origin:
/// members stay inside the double polar, non-members are refuted through a
/// validated polar witness.
pub fn bipolar_check(
    set: &NcSetDescr,
    cfg: &ToleranceConfig,
    trunc: usize,
    samples: usize,
) -> Result<BipolarReport> {
    let d = set.d;
    let zero = MatTuple::zeros(1, d, set.point_field());
    if !ncset::member(set, &zero, cfg)?.is_inside() {
        return Err(Error::ZeroNotInK);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb1b0);
    let mut report = BipolarReport::default();

    // polar probes for the inside direction: random functionals normalized
    // onto the polar boundary through the generator slack
    let gens = set
        .hull_generators()
        .ok_or_else(|| Error::RepresentationUnsupported("bipolar needs a hull representation".into()))?
        .0;
    let probe_levels = [1usize, 2];
    let mut probes: Vec<MatTuple> = Vec::new();
    for &pl in &probe_levels {
        for _ in 0..8 {
            let parts: Vec<Mat> = (0..d)
                .map(|_| crate::randmat::random_mat(pl, pl, set.point_field(), &mut rng))
                .collect();
            let raw = MatTuple::new(parts).expect("probe shape");
            // largest pairing value over the generators
            let mut worst: f64 = 0.0;
            for g in &gens {
                worst = worst.max(herm_eig(&realized_pairing(g, &raw.parts))?.max());
            }
            if worst > 1e-9 {
                probes.push(raw.scale(1.0 / worst));
            }
        }
    }

    for round in 0..samples {
        let level = 1 + round % trunc;
        let Ok(x) = ncset::sample(set, level, cfg, &mut rng) else { continue };
        report.inside_checked += 1;
        let mut ok = true;
        for p in &probes {
            if point_slack(&x, &p.parts, &Mat::identity(p.n, set.point_field()))? > cfg.tol_cert {
                ok = false;
            }
        }
        if ok {
            report.inside_confirmed += 1;
        } else {
            report.misclassified += 1;
        }
    }

    for round in 0..samples {
        let level = 1 + round % trunc;
        let Ok(x) = ncset::sample(set, level, cfg, &mut rng) else { continue };
        // push the sample outside by scaling; sets with 0 inside leak out
        let mut y = None;
        let mut t = 2.0;
        for _ in 0..12 {
            let cand = x.scale(t).add(&random_push(&x, &mut rng));
            if ncset::member(set, &cand, cfg)?.is_outside() {
                y = Some(cand);
                break;
            }
            t *= 2.0;
        }
        let Some(y) = y else { continue };
        report.outside_checked += 1;
        match separate(set, &y, cfg, SeparateOptions { gamma_identity: true }) {
            Ok(SepOutcome::Certificate(cert)) => {
                // gamma = 1 certificates are polar witnesses; re-validate
                if validate_certificate(set, &y, &cert, cfg).is_ok() {
                    report.outside_certified += 1;
                } else {
                    report.outside_undecided += 1;
                }
            }
            Ok(SepOutcome::InsideAfterAll(_)) => {
                report.misclassified += 1;
            }
            Ok(SepOutcome::Undecided) | Err(_) => {
                report.outside_undecided += 1;
            }
        }
    }
    Ok(report)
}

fn random_push(x: &MatTuple, rng: &mut impl Rng) -> MatTuple {
    let parts = (0..x.d)
        .map(|_| crate::randmat::random_hermitian(x.n, x.field, rng).scale(0.05))
        .collect();
    MatTuple::new(parts).expect("push shape")
}

// ---- polar and complexification commute ----

#[derive(Debug, Clone, Default, Serialize)]
pub struct PolarAgreementReport {
    pub checked: usize,
    pub agreed: usize,
    pub theta_consistent: usize,
    pub undecided: usize,
}

/// For random complex functionals phi + i psi, the verdict in the
/// complexification of the polar (through the block doubling) must match the
/// verdict in the polar of the complexification (direct complex test).
pub fn polar_complexify_check(
    set: &NcSetDescr,
    cfg: &ToleranceConfig,
    trunc: usize,
    samples: usize,
) -> Result<PolarAgreementReport> {
    if set.field == Field::Complex {
        return Err(Error::AlreadyComplex);
    }
    let d = set.d;
    let zero = MatTuple::zeros(1, d, Field::Real);
    if !ncset::member(set, &zero, cfg)?.is_inside() {
        return Err(Error::ZeroNotInK);
    }
    let set_c = ncset::complexify(set)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xca1c);
    let mut report = PolarAgreementReport::default();
    for round in 0..samples {
        let n = 1 + round % trunc;
        let mut parts: Vec<Mat> = (0..d)
            .map(|_| crate::randmat::random_mat(n, n, Field::Complex, &mut rng))
            .collect();
        if round % 5 == 0 {
            // pure real functionals reduce to the real polar
            parts = parts.into_iter().map(|p| p.real_part().to_complex()).collect();
        }
        // randomly rescale to land on both sides of the polar boundary
        let scale = [0.25, 0.5, 1.0, 2.0][round % 4];
        let phi = MatTuple::new(parts).expect("functional shape").scale(scale);

        // (K^polar)_c via the doubling; (K_c)^polar directly
        let doubled = phi.real_doubling();
        let va = polar_member(set, &doubled, cfg)?;
        let vb = polar_member(&set_c, &phi, cfg)?;
        report.checked += 1;
        match (&va, &vb) {
            (PolarVerdict::Inside, PolarVerdict::Inside)
            | (PolarVerdict::Outside { .. }, PolarVerdict::Outside { .. }) => report.agreed += 1,
            (PolarVerdict::Undecided, _) | (_, PolarVerdict::Undecided) => report.undecided += 1,
            _ => {}
        }
        // theta-invariance of the complex polar
        let vtheta = polar_member(&set_c, &phi.theta(), cfg)?;
        match (&vb, &vtheta) {
            (PolarVerdict::Inside, PolarVerdict::Inside)
            | (PolarVerdict::Outside { .. }, PolarVerdict::Outside { .. })
            | (PolarVerdict::Undecided, PolarVerdict::Undecided) => report.theta_consistent += 1,
            _ => {}
        }
    }
    Ok(report)
}

// ---- separable-body membership (corrective Frank-Wolfe / Gilbert) ----

#[derive(Debug, Clone)]
pub enum MinMembership {
    Inside { coefficients: Vec<Mat>, vertex_indices: Vec<usize> },
    Outside { gap: MatTuple, lower_bound: f64 },
    Undecided,
}

struct Atom {
    tuple: Vec<Mat>,
    vec: Vec<f64>,
    vertex: usize,
}

/// Decide whether x lies in the level-n separable hull
/// `{ sum_j A_j (tensor) k_j : A_j PSD, sum_j A_j = 1_n, k_j vertices }`.
///
/// The resolution constraint is folded into an extra coordinate pinned to
/// the identity, which turns the feasible set into a plain convex hull of
/// rank-one atoms; a corrective Gilbert loop with an exact vertex-eigenvalue
/// oracle then either reconstructs a decomposition or certifies a gap.
pub fn min_membership(
    vertices: &[Vec<f64>],
    x: &MatTuple,
    cfg: &ToleranceConfig,
) -> Result<MinMembership> {
    if vertices.is_empty() {
        return Err(Error::EmptyBody);
    }
    let d = x.d;
    if vertices[0].len() != d {
        return Err(Error::DimensionMismatch("vertex dimension must match the point".into()));
    }
    if !x.parts_self_adjoint(cfg.tol_sym) {
        return Err(Error::NotSelfAdjoint(x.sym_deviation()));
    }
    let n = x.n;
    let field = x.field;
    let scale = 1.0 / n as f64;
    // augmented target: (x_1, .., x_d, 1_n) / n
    let mut target_parts: Vec<Mat> = x.parts.iter().map(|p| p.herm_part().scale(scale)).collect();
    target_parts.push(Mat::identity(n, field).scale(scale));
    let target_vec = flatten_tuple(&target_parts);

    let aug_vertex = |vi: usize| -> Vec<f64> {
        let mut a = vertices[vi].clone();
        a.push(1.0);
        a
    };

    let mut atoms: Vec<Atom> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let max_iter = cfg.max_iter.min(600);
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_gap: Option<MatTuple> = None;

    for _it in 0..max_iter {
        // current point and gradient direction
        let z_vec = combine(&atoms, &weights, target_vec.len());
        let g_vec: Vec<f64> = target_vec.iter().zip(&z_vec).map(|(t, z)| t - z).collect();
        let g_norm = g_vec.iter().map(|v| v * v).sum::<f64>().sqrt();
        let g_parts = unflatten_tuple(&g_vec, n, d + 1, field);

        // exact linear maximization oracle over the atoms
        let mut best: Option<(usize, f64, Mat)> = None;
        for vi in 0..vertices.len() {
            let a = aug_vertex(vi);
            let mut h = Mat::zeros(n, n, field);
            for (k, coeff) in a.iter().enumerate() {
                if *coeff != 0.0 {
                    h = h.add(&g_parts[k].scale(*coeff));
                }
            }
            let dec = herm_eig(&h.herm_part())?;
            let lam = dec.max();
            if best.as_ref().map_or(true, |b| lam > b.1) {
                let cols = dec.vectors.cols();
                best = Some((vi, lam, dec.vectors.submatrix(0, cols - 1, n, 1)));
            }
        }
        let (vi, support, u) = best.expect("nonempty vertex list");

        // certified distance lower bound from the support function
        let g_dot_target: f64 = g_vec.iter().zip(&target_vec).map(|(a, b)| a * b).sum();
        if g_norm > 1e-14 {
            let lower = (g_dot_target - support) / g_norm;
            if lower > best_lower {
                best_lower = lower;
                let mut de_aug = g_parts.clone();
                de_aug.truncate(d);
                best_gap = Some(MatTuple::new(de_aug.iter().map(|p| p.scale(1.0 / g_norm)).collect())?);
            }
            if lower >= cfg.tol_cert {
                return Ok(MinMembership::Outside {
                    gap: best_gap.expect("just set"),
                    lower_bound: lower * n as f64,
                });
            }
        }

        // inside gate: reconstruct and re-validate
        if g_norm <= cfg.tol_feas * 0.25 {
            if let Some((coefficients, vertex_indices)) =
                reconstruct(&atoms, &weights, vertices.len(), scale)
            {
                if validate_min_decomposition(vertices, x, &coefficients, &vertex_indices, cfg)
                    .is_ok()
                {
                    return Ok(MinMembership::Inside { coefficients, vertex_indices });
                }
            }
        }

        // add the new atom and re-fit the weights (corrective step)
        let mut tuple = Vec::with_capacity(d + 1);
        let avi = aug_vertex(vi);
        let uu = u.matmul(&u.adjoint());
        for coeff in &avi {
            tuple.push(uu.scale(*coeff));
        }
        let vec = flatten_tuple(&tuple);
        atoms.push(Atom { tuple, vec, vertex: vi });
        weights.push(0.0);
        let fitted = nnls_fit(&atoms, &target_vec);
        weights = fitted;
        // prune dead atoms to keep the active set small
        if atoms.len() > 160 {
            let mut keep: Vec<usize> = (0..atoms.len()).filter(|&i| weights[i] > 1e-12).collect();
            if keep.is_empty() {
                keep.push(atoms.len() - 1);
            }
            atoms = keep.iter().map(|&i| Atom {
                tuple: atoms[i].tuple.clone(),
                vec: atoms[i].vec.clone(),
                vertex: atoms[i].vertex,
            }).collect();
            weights = keep.iter().map(|&i| weights[i]).collect();
        }
    }
    // final inside attempt
    if let Some((coefficients, vertex_indices)) =
        reconstruct(&atoms, &weights, vertices.len(), scale)
    {
        if validate_min_decomposition(vertices, x, &coefficients, &vertex_indices, cfg).is_ok() {
            return Ok(MinMembership::Inside { coefficients, vertex_indices });
        }
    }
    Ok(MinMembership::Undecided)
}

fn flatten_tuple(parts: &[Mat]) -> Vec<f64> {
    let mut v = Vec::new();
    for p in parts {
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                let (re, im) = p.at(i, j);
                v.push(re);
                if p.field() == Field::Complex {
                    v.push(im);
                }
            }
        }
    }
    v
}

fn unflatten_tuple(v: &[f64], n: usize, d: usize, field: Field) -> Vec<Mat> {
    let per = match field {
        Field::Real => n * n,
        Field::Complex => 2 * n * n,
    };
    (0..d)
        .map(|k| {
            let base = k * per;
            Mat::from_fn(n, n, field, |i, j| match field {
                Field::Real => (v[base + i * n + j], 0.0),
                Field::Complex => (v[base + 2 * (i * n + j)], v[base + 2 * (i * n + j) + 1]),
            })
        })
        .collect()
}

fn combine(atoms: &[Atom], weights: &[f64], len: usize) -> Vec<f64> {
    let mut z = vec![0.0; len];
    for (a, w) in atoms.iter().zip(weights) {
        if *w != 0.0 {
            for (zi, ai) in z.iter_mut().zip(&a.vec) {
                *zi += w * ai;
            }
        }
    }
    z
}

/// Assemble the per-vertex coefficient matrices from the atom weights,
/// unscaling the 1/n normalization.
fn reconstruct(
    atoms: &[Atom],
    weights: &[f64],
    vertex_count: usize,
    scale: f64,
) -> Option<(Vec<Mat>, Vec<usize>)> {
    let mut per_vertex: Vec<Option<Mat>> = vec![None; vertex_count];
    for (a, w) in atoms.iter().zip(weights) {
        if *w <= 0.0 {
            continue;
        }
        // the augmented coordinate of the atom tuple is uu*, shared by all
        let uu = a.tuple.last().expect("augmented coordinate");
        let add = uu.scale(w / scale);
        per_vertex[a.vertex] = Some(match per_vertex[a.vertex].take() {
            Some(acc) => acc.add(&add),
            None => add,
        });
    }
    let mut coefficients = Vec::new();
    let mut vertex_indices = Vec::new();
    for (vi, c) in per_vertex.into_iter().enumerate() {
        if let Some(c) = c {
            coefficients.push(c);
            vertex_indices.push(vi);
        }
    }
    if coefficients.is_empty() {
        None
    } else {
        Some((coefficients, vertex_indices))
    }
}

/// Nonnegative least squares over the atom weights (Lawson-Hanson active
/// set on the Gram system).
fn nnls_fit(atoms: &[Atom], target: &[f64]) -> Vec<f64> {
    let m = atoms.len();
    let mut gram = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in i..m {
            let v: f64 = atoms[i].vec.iter().zip(&atoms[j].vec).map(|(a, b)| a * b).sum();
            gram[i * m + j] = v;
            gram[j * m + i] = v;
        }
        rhs[i] = atoms[i].vec.iter().zip(target).map(|(a, b)| a * b).sum();
    }
    let mut passive: Vec<usize> = Vec::new();
    let mut c = vec![0.0; m];
    for _outer in 0..(4 * m + 16) {
        // gradient of 1/2||Ac - t||^2 is gram c - rhs
        let mut grad = vec![0.0; m];
        for i in 0..m {
            let mut g = -rhs[i];
            for j in 0..m {
                g += gram[i * m + j] * c[j];
            }
            grad[i] = g;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if !passive.contains(&i) && grad[i] < -1e-12 {
                if best.map_or(true, |(_, g)| grad[i] < g) {
                    best = Some((i, grad[i]));
                }
            }
        }
        let Some((enter, _)) = best else { break };
        passive.push(enter);
        // inner loop: solve on the passive set, step back if negative
        for _inner in 0..(2 * m + 8) {
            let k = passive.len();
            let mut sub = vec![0.0; k * k];
            let mut sub_rhs = vec![0.0; k];
            for (a, &ia) in passive.iter().enumerate() {
                for (b, &ib) in passive.iter().enumerate() {
                    sub[a * k + b] = gram[ia * m + ib];
                }
                sub_rhs[a] = rhs[ia];
            }
            let qr = PivotedQr::new(&sub, k, k);
            let (z, _) = qr.least_squares(&sub_rhs);
            if z.iter().all(|&v| v > 1e-14) {
                for (a, &ia) in passive.iter().enumerate() {
                    c[ia] = z[a];
                }
                break;
            }
            // step toward z until the first passive weight hits zero
            let mut alpha = 1.0f64;
            for (a, &ia) in passive.iter().enumerate() {
                if z[a] <= 1e-14 {
                    let ca = c[ia];
                    if ca - z[a] > 1e-300 {
                        alpha = alpha.min(ca / (ca - z[a]));
                    }
                }
            }
            for (a, &ia) in passive.iter().enumerate() {
                c[ia] = (c[ia] + alpha * (z[a] - c[ia])).max(0.0);
            }
            passive.retain(|&ia| c[ia] > 1e-14);
            if passive.is_empty() {
                break;
            }
        }
    }
    c
}

/// Re-validate a separable decomposition: PSD coefficients, resolution of
/// the identity, exact reconstruction. Returns the worst deviation.
pub fn validate_min_decomposition(
    vertices: &[Vec<f64>],
    x: &MatTuple,
    coefficients: &[Mat],
    vertex_indices: &[usize],
    cfg: &ToleranceConfig,
) -> Result<f64> {
    if coefficients.len() != vertex_indices.len() {
        return Err(Error::DimensionMismatch("one vertex per coefficient".into()));
    }
    let n = x.n;
    let field = x.field;
    let mut sum = Mat::zeros(n, n, field);
    let mut recon = vec![Mat::zeros(n, n, field); x.d];
    for (c, &vi) in coefficients.iter().zip(vertex_indices) {
        if !eig::is_psd(&c.herm_part(), cfg.tol_psd)? {
            return Err(Error::NotMember);
        }
        sum = sum.add(c);
        for (k, r) in recon.iter_mut().enumerate() {
            *r = r.add(&c.scale(vertices[vi][k]));
        }
    }
    let mut worst = sum.sub(&Mat::identity(n, field)).max_abs();
    for (r, p) in recon.iter().zip(&x.parts) {
        worst = worst.max(r.sub(p).max_abs());
    }
    if worst <= cfg.tol_feas * (1.0 + x.max_abs()) * 4.0 {
        Ok(worst)
    } else {
        Err(Error::NotMember)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncset::Facet;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn square_vertices() -> Vec<Vec<f64>> {
        vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ]
    }

    fn anticommuting_pair() -> MatTuple {
        MatTuple::new(vec![
            Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
            Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
        ])
        .unwrap()
    }

    #[test]
    fn single_vertex_point_inside_quickly() {
        let verts = square_vertices();
        // x = A (tensor) k for the first vertex with A = diag(1, 1) = identity
        let x = MatTuple::new(vec![
            Mat::identity(2, Field::Real),
            Mat::identity(2, Field::Real),
        ])
        .unwrap();
        match min_membership(&verts, &x, &cfg()).unwrap() {
            MinMembership::Inside { coefficients, vertex_indices } => {
                validate_min_decomposition(&verts, &x, &coefficients, &vertex_indices, &cfg())
                    .unwrap();
            }
            other => panic!("expected Inside, got {other:?}"),
        }
    }

    #[test]
    fn level1_membership_is_the_body() {
        let verts = square_vertices();
        let inside = MatTuple::from_scalars(&[0.4, -0.8]);
        assert!(matches!(
            min_membership(&verts, &inside, &cfg()).unwrap(),
            MinMembership::Inside { .. }
        ));
        let outside = MatTuple::from_scalars(&[1.3, 0.2]);
        match min_membership(&verts, &outside, &cfg()).unwrap() {
            MinMembership::Outside { lower_bound, .. } => assert!(lower_bound > 1e-3),
            other => panic!("expected Outside, got {other:?}"),
        }
    }

    #[test]
    fn anticommuting_pair_outside_min_square() {
        let verts = square_vertices();
        let x = anticommuting_pair();
        match min_membership(&verts, &x, &cfg()).unwrap() {
            MinMembership::Outside { lower_bound, .. } => {
                assert!(lower_bound > 0.05, "weak bound {lower_bound}");
            }
            other => panic!("expected Outside, got {other:?}"),
        }
    }

    #[test]
    fn anticommuting_pair_certificate_from_vertex_hull() {
        let verts = square_vertices();
        let gens: Vec<MatTuple> = verts.iter().map(|v| MatTuple::from_scalars(v)).collect();
        let x = anticommuting_pair();
        let cert = separate_from_hull(&gens, &x, &cfg(), false)
            .unwrap()
            .expect("certificate");
        // certificate validates against the vertex hull exactly
        let set = NcSetDescr::min_of(verts, Field::Real).unwrap();
        validate_certificate(&set, &x, &cert, &cfg()).unwrap();
        assert!(cert.margin >= 1e-4);
    }

    #[test]
    fn interval_separation_hand_instance() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let y = MatTuple::new(vec![Mat::from_rows_real(&[vec![2.0, 0.0], vec![0.0, 0.0]])])
            .unwrap();
        match separate(&set, &y, &cfg(), SeparateOptions { gamma_identity: true }).unwrap() {
            SepOutcome::Certificate(cert) => {
                let (slack, violation) = validate_certificate(&set, &y, &cert, &cfg()).unwrap();
                assert!(slack <= 1e-6);
                assert!(violation >= 1e-4);
                // gamma pinned to the identity
                assert!(cert.gamma.sub(&Mat::identity(2, Field::Real)).max_abs() < 1e-12);
                // the hand certificate (phi supported on e11) also validates
                let hand = SepCertificate {
                    n: 2,
                    phi: vec![Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, 0.0]])],
                    gamma: Mat::identity(2, Field::Real),
                    margin: 1.0,
                };
                validate_certificate(&set, &y, &hand, &cfg()).unwrap();
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn inside_point_returns_witness() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let y = MatTuple::from_scalars(&[0.25]);
        assert!(matches!(
            separate(&set, &y, &cfg(), SeparateOptions::default()).unwrap(),
            SepOutcome::InsideAfterAll(_)
        ));
    }

    #[test]
    fn polar_of_interval_matches_direct_check() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let mut checked = 0;
        for n in 1..=4usize {
            for _ in 0..30 {
                let raw = crate::randmat::random_mat(n, n, Field::Real, &mut rng);
                let phi = MatTuple::new(vec![raw.clone()]).unwrap();
                let verdict = polar_member(&set, &phi, &cfg()).unwrap();
                // direct: phi in the polar iff -1 <= Re phi <= 1
                let h = raw.herm_part();
                let dec = herm_eig(&h).unwrap();
                let direct = dec.max() <= 1.0 + 1e-9 && dec.min() >= -1.0 - 1e-9;
                match verdict {
                    PolarVerdict::Inside => assert!(direct),
                    PolarVerdict::Outside { .. } => assert!(!direct),
                    PolarVerdict::Undecided => {}
                }
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn zero_functional_inside_any_polar() {
        let set = NcSetDescr::min_of(square_vertices(), Field::Real).unwrap();
        let phi = MatTuple::zeros(2, 2, Field::Real);
        assert!(polar_member(&set, &phi, &cfg()).unwrap().is_inside());
    }

    #[test]
    fn polar_scaling_monotone() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..10 {
            let raw = crate::randmat::random_hermitian(2, Field::Real, &mut rng);
            let phi = MatTuple::new(vec![raw]).unwrap();
            if polar_member(&set, &phi, &cfg()).unwrap().is_inside() {
                for t in [0.25, 0.5, 0.75] {
                    assert!(polar_member(&set, &phi.scale(t), &cfg()).unwrap().is_inside());
                }
            }
        }
    }

    #[test]
    fn scaled_functional_exits_polar_at_predicted_threshold() {
        // on the interval [-1,1] the functional t*I leaves the polar exactly
        // when the largest generator eigenvalue crosses 1, i.e. at t = 1
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let base = MatTuple::new(vec![Mat::identity(2, Field::Real)]).unwrap();
        let mut lo = 0.0;
        let mut hi = 4.0;
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            match polar_member(&set, &base.scale(mid), &cfg()).unwrap() {
                PolarVerdict::Inside => lo = mid,
                _ => hi = mid,
            }
        }
        assert!((lo - 1.0).abs() < 1e-6, "threshold {lo}");
    }

    #[test]
    fn transport_identity_numerically() {
        // Re phi(sum V_i* g_i V_i) = sum (V_i o 1)* Re phi(g_i) (V_i o 1)
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let n_phi = 2;
        let g1 = MatTuple::new(vec![crate::randmat::random_mat(2, 2, Field::Real, &mut rng)])
            .unwrap();
        let g2 = MatTuple::new(vec![crate::randmat::random_mat(3, 3, Field::Real, &mut rng)])
            .unwrap();
        let phi: Vec<Mat> = vec![crate::randmat::random_mat(n_phi, n_phi, Field::Real, &mut rng)];
        let coeffs = crate::randmat::random_partition_of_unity(&[2, 3], 2, Field::Real, &mut rng);
        let comb = crate::tuple::nc_combination(&[g1.clone(), g2.clone()], &coeffs).unwrap();
        let lhs = realized_pairing(&comb, &phi);
        let mut rhs = Mat::zeros(2 * n_phi, 2 * n_phi, Field::Real);
        for (g, v) in [(&g1, &coeffs[0]), (&g2, &coeffs[1])] {
            let amp = v.kron(&Mat::identity(n_phi, Field::Real));
            rhs = rhs.add(&amp.adjoint().matmul(&realized_pairing(g, &phi)).matmul(&amp));
        }
        assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }

    #[test]
    fn bipolar_interval_clean() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let report = bipolar_check(&set, &cfg(), 3, 40).unwrap();
        assert_eq!(report.misclassified, 0);
        assert_eq!(report.inside_confirmed, report.inside_checked);
        assert!(report.outside_checked > 0);
        assert!(report.outside_certified * 100 >= report.outside_checked * 95);
    }

    #[test]
    fn polar_complexification_agreement_interval() {
        let set = NcSetDescr::interval(-1.0, 1.0).unwrap();
        let report = polar_complexify_check(&set, &cfg(), 3, 60).unwrap();
        assert_eq!(report.agreed + report.undecided, report.checked);
        assert_eq!(report.undecided, 0);
        assert_eq!(report.theta_consistent, report.checked);
    }

    #[test]
    fn max_polytope_separation_sampled() {
        let facets = vec![
            Facet { b: 1.0, a: vec![1.0, 0.0] },
            Facet { b: 1.0, a: vec![-1.0, 0.0] },
            Facet { b: 1.0, a: vec![0.0, 1.0] },
            Facet { b: 1.0, a: vec![0.0, -1.0] },
        ];
        let set = NcSetDescr::max_of(facets, Field::Real, &cfg()).unwrap();
        let y = MatTuple::from_scalars(&[3.0, 0.0]);
        match separate(&set, &y, &cfg(), SeparateOptions::default()).unwrap() {
            SepOutcome::Certificate(cert) => {
                validate_certificate(&set, &y, &cert, &cfg()).unwrap();
            }
            SepOutcome::Undecided => {} // sampled search may abstain
            SepOutcome::InsideAfterAll(_) => panic!("y is outside"),
        }
    }
}
