//! Named property suites behind the `verify` command.
//!
//! Each suite runs a family of checks at the configured truncation level and
//! reports pass/fail/undecided counts per property. A suite is green exactly
//! when no property registered a failure; undecided outcomes are counted but
//! do not fail a suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::{self, AffineFn};
use crate::config::ToleranceConfig;
use crate::eig::{self, herm_eig};
use crate::error::{Error, Result};
use crate::mat::{Field, Mat};
use crate::ncset::{self, Facet, NcSetDescr};
use crate::opsys::{self, StatePair, UcpCandidate, UcpVerdict};
use crate::randmat;
use crate::sepolar;
use crate::tuple::MatTuple;

#[derive(Debug, Clone, Serialize)]
pub struct PropResult {
    pub name: String,
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
}

impl PropResult {
    fn new(name: &str) -> PropResult {
        PropResult { name: name.into(), pass: 0, fail: 0, undecided: 0 }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub props: Vec<PropResult>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.props.iter().map(|p| p.fail).sum()
    }

    pub fn undecided(&self) -> usize {
        self.props.iter().map(|p| p.undecided).sum()
    }
}

/// Optional inputs for suites that accept a custom set or body.
#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub set: Option<NcSetDescr>,
    pub body: Option<Body>,
    pub trunc: usize,
    pub samples: usize,
}

/// A classical convex body given both ways: vertices for the smallest
/// matrix convex set over it, facets for the largest.
#[derive(Debug, Clone, serde::Deserialize, Serialize)]
pub struct Body {
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
}

impl Body {
    pub fn square() -> Body {
        Body {
            vertices: vec![
                vec![1.0, 1.0],
                vec![1.0, -1.0],
                vec![-1.0, 1.0],
                vec![-1.0, -1.0],
            ],
            facets: vec![
                Facet { b: 1.0, a: vec![1.0, 0.0] },
                Facet { b: 1.0, a: vec![-1.0, 0.0] },
                Facet { b: 1.0, a: vec![0.0, 1.0] },
                Facet { b: 1.0, a: vec![0.0, -1.0] },
            ],
        }
    }
}

pub fn run_suite(name: &str, cfg: &ToleranceConfig, opts: &SuiteOptions) -> Result<SuiteReport> {
    let trunc = if opts.trunc == 0 { 4 } else { opts.trunc };
    match name {
        "complexification" => complexification_suite(cfg, trunc, opts),
        "duality" => duality_suite(cfg, trunc, opts),
        "bipolar" => bipolar_suite(cfg, trunc, opts),
        "minmax" => minmax_suite(cfg, trunc, opts),
        "quaternion" => quaternion_suite(cfg, trunc, opts),
        "dk258" => dk258_suite(cfg, trunc, opts),
        other => Err(Error::Invalid(format!("unknown suite: {other}"))),
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "complexification",
    "duality",
    "bipolar",
    "minmax",
    "quaternion",
    "dk258",
];

// ---- complexification ----

fn complexification_suite(
    cfg: &ToleranceConfig,
    trunc: usize,
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc0de);
    let samples = if opts.samples == 0 { 200 } else { opts.samples };
    let (a, b) = (-1.0, 1.0);
    let interval = NcSetDescr::interval(a, b)?;
    let interval_c = ncset::complexify(&interval)?;

    let mut agreement = PropResult::new("interval_complexification_agreement");
    for round in 0..samples {
        let n = 1 + round % trunc;
        // half clearly self-adjoint with varied spectrum, half perturbed
        let z = if round % 2 == 0 {
            let v = randmat::random_unitary(n, Field::Complex, &mut rng);
            let mut lam = Mat::zeros(n, n, Field::Complex);
            for i in 0..n {
                lam.set(i, i, rng.gen_range(a - 0.5..b + 0.5), 0.0);
            }
            v.matmul(&lam).matmul(&v.adjoint())
        } else {
            randmat::random_hermitian(n, Field::Complex, &mut rng)
        };
        let tuple = MatTuple::new(vec![z.clone()])?;
        let verdict = ncset::member(&interval_c, &tuple, cfg)?;
        let dec = herm_eig(&z.herm_part())?;
        let direct = dec.min() >= a - 1e-8 && dec.max() <= b + 1e-8;
        match verdict {
            ncset::Membership::Inside(_) => agreement.record(direct),
            ncset::Membership::Outside { .. } => agreement.record(!direct),
            ncset::Membership::Undecided => agreement.undecided += 1,
        }
    }

    let mut theta = PropResult::new("theta_invariance");
    for round in 0..samples / 4 {
        let n = 1 + round % trunc;
        let z = ncset::sample(&interval_c, n, cfg, &mut rng)?;
        let inside = ncset::member(&interval_c, &z.theta(), cfg)?.is_inside();
        theta.record(inside);
        let far = z.scale(3.0).add(&MatTuple::new(vec![Mat::identity(n, Field::Complex)
            .scale_complex(0.0, 0.4)])?);
        let out = ncset::member(&interval_c, &far, cfg)?;
        let out_theta = ncset::member(&interval_c, &far.theta(), cfg)?;
        theta.record(out.is_outside() == out_theta.is_outside());
    }

    let mut iota = PropResult::new("iota_embedding_and_retraction");
    for round in 0..samples / 4 {
        let n = 1 + round % trunc;
        let x = ncset::sample(&interval, n, cfg, &mut rng)?;
        let z = x.to_complex();
        iota.record(ncset::member(&interval_c, &z, cfg)?.is_inside());
        iota.record(ncset::retract(&z).sub(&x).max_abs() < 1e-12);
    }

    Ok(SuiteReport {
        suite: "complexification".into(),
        props: vec![agreement, theta, iota],
    })
}

// ---- quaternion ----

fn quaternion_suite(
    cfg: &ToleranceConfig,
    _trunc: usize,
    opts: &SuiteOptions,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4a47);
    let h = opsys::quaternions()?;
    let one = Mat::identity(1, Field::Real);

    // (a) level-1 feasibility search over the functional space: for a fan of
    // directions, the largest admissible coefficient mass is numerically zero
    let mut singleton = PropResult::new("level1_singleton");
    let mut directions: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, -1.0],
    ];
    for _ in 0..24 {
        let mut u = [0.0; 3];
        let mut norm = 0.0f64;
        for v in u.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
            norm += *v * *v;
        }
        let norm = norm.sqrt().max(1e-9);
        for v in u.iter_mut() {
            *v /= norm;
        }
        directions.push(u);
    }
    for u in &directions {
        let feasible = |t: f64| -> bool {
            let images = vec![
                one.clone(),
                one.scale(t * u[0]),
                one.scale(t * u[1]),
                one.scale(t * u[2]),
            ];
            let cand = UcpCandidate::new(images).expect("level-1 candidate");
            matches!(
                opsys::is_ucp(&h, &cand, cfg),
                Ok(out) if matches!(out.verdict, UcpVerdict::Yes(_))
            )
        };
        if !feasible(0.0) {
            singleton.record(false);
            continue;
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        if feasible(hi) {
            singleton.record(false);
            continue;
        }
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        singleton.record(hi <= 1e-6);
    }

    // (b) level 1 of the complexified state space against the density ball
    let samples = if opts.samples == 0 { 500 } else { opts.samples };
    let mut accept = PropResult::new("bloch_ball_accept");
    let mut reject = PropResult::new("bloch_ball_reject");
    for _round in 0..samples {
        // PSD trace-one density matrix, kept away from the boundary noise
        let raw = randmat::random_psd(2, Field::Complex, &mut rng)
            .add(&Mat::identity(2, Field::Complex).scale(1e-3));
        let (tr, _) = raw.trace();
        let density = raw.scale(1.0 / tr);
        accept.record(density_state_accepted(&h, &density, cfg)?);

        // trace-one self-adjoint perturbation with a genuinely negative eigenvalue
        let neg = loop {
            let m = randmat::random_hermitian(2, Field::Complex, &mut rng);
            let (tr, _) = m.trace();
            let cand = m.sub(&Mat::identity(2, Field::Complex).scale((tr - 1.0) / 2.0));
            if herm_eig(&cand)?.min() < -1e-3 {
                break cand;
            }
        };
        reject.record(!density_state_accepted(&h, &neg, cfg)?);
    }

    // (c) complexified positivity against the 2x2 complex image
    let mut iso = PropResult::new("complexification_is_m2c");
    for _ in 0..200 {
        let coords: [(f64, f64); 4] =
            std::array::from_fn(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let x = h.element_from_coords(&[
            (coords[0].0, 0.0),
            (coords[1].0, 0.0),
            (coords[2].0, 0.0),
            (coords[3].0, 0.0),
        ])?;
        let y = h.element_from_coords(&[
            (coords[0].1, 0.0),
            (coords[1].1, 0.0),
            (coords[2].1, 0.0),
            (coords[3].1, 0.0),
        ])?;
        let lhs = opsys::positive_in_complexification(&h, &x, &y, cfg.tol_psd)?;
        let img = opsys::quat_coords_to_m2c(&coords);
        let rhs = img.is_self_adjoint(1e-8) && eig::is_psd(&img.herm_part(), cfg.tol_psd)?;
        iso.record(lhs == rhs);
    }

    Ok(SuiteReport {
        suite: "quaternion".into(),
        props: vec![singleton, accept, reject, iso],
    })
}

/// Is the level-1 point of the complexified quaternion state space induced
/// by `density` accepted? Routes through the doubled real state test.
pub fn density_state_accepted(
    h: &opsys::OpSysDescr,
    density: &Mat,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    // the functional on the complexification pulls back through the 2x2
    // identification; restricted to the real system it splits into (f, g)
    let mut f_imgs = Vec::with_capacity(4);
    let mut g_imgs = Vec::with_capacity(4);
    for k in 0..4 {
        let mut coords = [(0.0, 0.0); 4];
        coords[k] = (1.0, 0.0);
        let img = opsys::quat_coords_to_m2c(&coords);
        // omega(b_k) = tr(density * img)
        let prod = density.matmul(&img);
        let (re, im) = prod.trace();
        f_imgs.push(Mat::identity(1, Field::Real).scale(re));
        g_imgs.push(Mat::identity(1, Field::Real).scale(im));
    }
    let f = UcpCandidate::new(f_imgs)?;
    let g = UcpCandidate::new(g_imgs)?;
    let doubled = opsys::doubled_candidate(&f, &g)?;
    match opsys::is_ucp(h, &doubled, cfg) {
        Ok(out) => Ok(matches!(out.verdict, UcpVerdict::Yes(_))),
        Err(Error::NotUcp) => Ok(false),
        Err(e) => Err(e),
    }
}

// ---- duality ----

fn duality_suite(cfg: &ToleranceConfig, trunc: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd0a1);
    let systems = vec![opsys::quaternions()?, opsys::matrix_algebra(2)?];
    let samples = if opts.samples == 0 { 100 } else { opts.samples };

    let mut lambda_states = PropResult::new("lambda_revalidates_as_state");
    let mut hat_unital = PropResult::new("hat_is_unital");
    let mut hat_order = PropResult::new("hat_order_preserving");
    let mut norming = PropResult::new("state_space_norming");

    for sys in &systems {
        let set = NcSetDescr::state_space(sys.clone());
        for round in 0..samples / 2 {
            let n = 1 + round % trunc;
            let x = ncset::sample(&set, n, cfg, &mut rng)?;
            lambda_states.record(affine::lambda_duality(&set, &x, cfg).is_ok());
        }
        // hat of the unit is the constant identity on sampled states
        let unit_hat = affine::hat_map(sys, &Mat::identity(sys.ambient, sys.field))?;
        for round in 0..10 {
            let n = 1 + round % trunc;
            let x = ncset::sample(&set, n, cfg, &mut rng)?;
            let v = affine::eval_affine(&unit_hat, &x)?;
            hat_unital.record(v.sub(&Mat::identity(n, sys.field)).max_abs() < 1e-10);
        }
        for _ in 0..25 {
            // positive element: v = w* w inside the span for the algebra
            // systems; for the quaternions positives are multiples of 1
            let v = if sys.dim() == 4 && sys.ambient == 4 {
                Mat::identity(4, Field::Real).scale(rng.gen_range(0.0..2.0))
            } else {
                let g = randmat::random_mat(sys.ambient, sys.ambient, sys.field, &mut rng);
                g.adjoint().matmul(&g)
            };
            let vhat = affine::hat_map(sys, &v)?;
            let mut ok = true;
            for n in 1..=trunc.min(3) {
                let x = ncset::sample(&set, n, cfg, &mut rng)?;
                let val = affine::eval_affine(&vhat, &x)?;
                if !eig::is_psd(&val.herm_part(), 1e-7)? {
                    ok = false;
                }
            }
            hat_order.record(ok);
        }
        for _ in 0..12 {
            let v = randmat::random_hermitian(sys.ambient, sys.field, &mut rng);
            let Ok(coords) = sys.coords_of(&v) else { continue };
            let v = sys.element_from_coords(&coords)?;
            let ambient_norm = eig::op_norm(&v)?;
            let vhat = affine::hat_map(sys, &v)?;
            let (lower, _) = affine::affine_norm(&vhat, &set, cfg)?;
            norming.record(lower <= ambient_norm * (1.0 + 1e-8) && lower >= 0.95 * ambient_norm);
        }
    }

    Ok(SuiteReport {
        suite: "duality".into(),
        props: vec![lambda_states, hat_unital, hat_order, norming],
    })
}

// ---- bipolar ----

fn bipolar_suite(cfg: &ToleranceConfig, trunc: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let samples = if opts.samples == 0 { 200 } else { opts.samples };
    let mut sets: Vec<(String, NcSetDescr)> = Vec::new();
    if let Some(set) = &opts.set {
        sets.push(("custom".into(), set.clone()));
    } else {
        sets.push(("interval".into(), NcSetDescr::interval(-1.0, 1.0)?));
        // three generator hulls containing zero
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb1f0);
        for (idx, (n, d)) in [(1usize, 1usize), (2, 1), (2, 2)].iter().enumerate() {
            let mut points = vec![MatTuple::zeros(*n, *d, Field::Real)];
            for _ in 0..3 {
                let parts = (0..*d)
                    .map(|_| randmat::random_hermitian(*n, Field::Real, &mut rng))
                    .collect();
                points.push(MatTuple::new(parts)?);
                let neg = points.last().unwrap().scale(-1.0);
                points.push(neg);
            }
            sets.push((format!("generators_{idx}"), NcSetDescr::generators(points, true)?));
        }
    }
    let mut props = Vec::new();
    for (name, set) in &sets {
        let report = sepolar::bipolar_check(set, cfg, trunc.min(3), samples / sets.len().max(1))?;
        let mut inside = PropResult::new(&format!("{name}_members_in_double_polar"));
        inside.pass = report.inside_confirmed;
        inside.fail = report.inside_checked - report.inside_confirmed;
        let mut outside = PropResult::new(&format!("{name}_non_members_refuted"));
        outside.pass = report.outside_certified;
        outside.fail = report.misclassified;
        outside.undecided = report.outside_undecided;
        props.push(inside);
        props.push(outside);
    }
    Ok(SuiteReport { suite: "bipolar".into(), props })
}

// ---- minmax ----

fn minmax_suite(cfg: &ToleranceConfig, trunc: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3133);
    let body = opts.body.clone().unwrap_or_else(Body::square);
    let samples = if opts.samples == 0 { 200 } else { opts.samples };
    let min_set = NcSetDescr::min_of(body.vertices.clone(), Field::Real)?;
    let max_set = NcSetDescr::max_of(body.facets.clone(), Field::Real, cfg)?;

    let mut sandwich = PropResult::new("min_samples_inside_max");
    for round in 0..samples {
        let n = 1 + round % trunc.min(3);
        let x = ncset::sample(&min_set, n, cfg, &mut rng)?;
        sandwich.record(ncset::member(&max_set, &x, cfg)?.is_inside());
    }

    let mut level1 = PropResult::new("level1_agreement");
    for _ in 0..40 {
        let x = ncset::sample(&min_set, 1, cfg, &mut rng)?;
        level1.record(ncset::member(&max_set, &x, cfg)?.is_inside());
        let y = ncset::sample(&max_set, 1, cfg, &mut rng)?;
        level1.record(ncset::member(&min_set, &y, cfg)?.is_inside());
    }

    // the standard gap witness for the square body
    let mut gap = PropResult::new("gap_pair_between_min_and_max");
    if opts.body.is_none() {
        let pair = MatTuple::new(vec![
            Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
            Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
        ])?;
        let in_max = ncset::member(&max_set, &pair, cfg)?.is_inside();
        gap.record(in_max);
        match ncset::member(&min_set, &pair, cfg)? {
            ncset::Membership::Outside { certificate: Some(cert) } => {
                gap.record(sepolar::validate_certificate(&min_set, &pair, &cert, cfg).is_ok());
            }
            ncset::Membership::Outside { certificate: None } => gap.record(false),
            _ => gap.record(false),
        }
    }

    // complexification agreement for both constructions
    let min_c_direct = NcSetDescr::min_of(body.vertices.clone(), Field::Complex)?;
    let max_c_direct = NcSetDescr::max_of(body.facets.clone(), Field::Complex, cfg)?;
    let min_c_doubled = ncset::complexify(&min_set)?;
    let max_c_doubled = ncset::complexify(&max_set)?;
    let mut min_cx = PropResult::new("min_complexification_agreement");
    let mut max_cx = PropResult::new("max_complexification_agreement");
    for round in 0..samples {
        let n = 1 + round % trunc.min(3);
        // points on both sides of the boundary
        let base = ncset::sample(&min_c_direct, n, cfg, &mut rng)?;
        let z = if round % 2 == 0 { base } else { base.scale(1.0 + rng.gen_range(0.2..1.5)) };
        let va = ncset::member(&min_c_doubled, &z, cfg)?;
        let vb = ncset::member(&min_c_direct, &z, cfg)?;
        match (&va, &vb) {
            (ncset::Membership::Undecided, _) | (_, ncset::Membership::Undecided) => {
                min_cx.undecided += 1
            }
            _ => min_cx.record(va.is_inside() == vb.is_inside()),
        }
        let va = ncset::member(&max_c_doubled, &z, cfg)?;
        let vb = ncset::member(&max_c_direct, &z, cfg)?;
        match (&va, &vb) {
            (ncset::Membership::Undecided, _) | (_, ncset::Membership::Undecided) => {
                max_cx.undecided += 1
            }
            _ => max_cx.record(va.is_inside() == vb.is_inside()),
        }
    }

    Ok(SuiteReport {
        suite: "minmax".into(),
        props: vec![sandwich, level1, gap, min_cx, max_cx],
    })
}

// ---- dk258 ----

fn dk258_suite(cfg: &ToleranceConfig, trunc: usize, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xdc25);
    let body = opts.body.clone().unwrap_or_else(Body::square);
    let min_set = NcSetDescr::min_of(body.vertices.clone(), Field::Real)?;
    let h = opsys::quaternions()?;
    let state_set = NcSetDescr::state_space(h);

    let mut symmetric = PropResult::new("symmetric_set_level1_isometry");
    for _ in 0..20 {
        let f = random_sa_pencil(2, 2, &mut rng);
        let norms = affine::restriction_norms(&f, &min_set, cfg, trunc)?;
        symmetric.record((norms.all - norms.level1).abs() <= 1e-6 * (1.0 + norms.level1));
    }

    let mut level2 = PropResult::new("quaternion_level2_factor_two");
    for _ in 0..20 {
        let f = random_sa_pencil(1, 4, &mut rng);
        let norms = affine::restriction_norms(&f, &state_set, cfg, trunc)?;
        level2.record(norms.all <= 2.0 * norms.level2 + 1e-6);
    }

    Ok(SuiteReport { suite: "dk258".into(), props: vec![symmetric, level2] })
}

fn random_sa_pencil(r: usize, d: usize, rng: &mut impl Rng) -> AffineFn {
    let raw = AffineFn {
        r,
        a0: randmat::random_mat(r, r, Field::Real, rng),
        legs: (0..d)
            .map(|_| affine::AffineLeg {
                a: randmat::random_mat(r, r, Field::Real, rng),
                b: randmat::random_mat(r, r, Field::Real, rng),
            })
            .collect(),
    };
    raw.add(&raw.involution()).scale(0.5)
}

// ---- psi/gamma round trips (used by the acceptance gate and examples) ----

#[derive(Debug, Clone, Serialize)]
pub struct RoundTripReport {
    pub checked: usize,
    pub max_error: f64,
    pub ucp_confirmed: usize,
}

/// psi/gamma round trips on random valid state pairs of a real system.
pub fn state_pair_roundtrips(
    sys: &opsys::OpSysDescr,
    cfg: &ToleranceConfig,
    trunc: usize,
    samples: usize,
) -> Result<RoundTripReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9516);
    let sys_c = opsys::complexify_opsys(sys)?;
    let mut max_error = 0.0f64;
    let mut ucp_confirmed = 0;
    let mut checked = 0;
    for round in 0..samples {
        let n = 1 + round % trunc.min(2);
        // a complex matrix state of the complexification, by compression
        let omega = opsys::sample_state(&sys_c, n, &mut rng);
        let pair = opsys::gamma_map(sys, &omega, cfg)?;
        let back = opsys::psi_map(sys, &pair, cfg)?;
        for (a, b) in back.images.iter().zip(&omega.images) {
            max_error = max_error.max(a.sub(b).max_abs());
        }
        // and the other composition, starting from the pair
        let pair2 = opsys::gamma_map(
            sys,
            &opsys::psi_map(sys, &StatePair { f: pair.f.clone(), g: pair.g.clone() }, cfg)?,
            cfg,
        )?;
        for (a, b) in pair2.f.images.iter().zip(&pair.f.images) {
            max_error = max_error.max(a.sub(b).max_abs());
        }
        for (a, b) in pair2.g.images.iter().zip(&pair.g.images) {
            max_error = max_error.max(a.sub(b).max_abs());
        }
        if matches!(opsys::is_ucp(&sys_c, &back, cfg)?.verdict, UcpVerdict::Yes(_)) {
            ucp_confirmed += 1;
        }
        checked += 1;
    }
    Ok(RoundTripReport { checked, max_error, ucp_confirmed })
}

/// Coefficient round trips for the affine complexification pair.
pub fn affine_roundtrips(cfg: &ToleranceConfig, samples: usize) -> Result<RoundTripReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xaff1);
    let mut max_error = 0.0f64;
    let mut checked = 0;
    for _ in 0..samples {
        let f = random_sa_pencil(2, 2, &mut rng);
        let g = random_sa_pencil(2, 2, &mut rng);
        let omega = affine::psi_affine(&f, &g)?;
        let (f2, g2) = affine::gamma_affine(&omega)?;
        let omega2 = affine::psi_affine(&f2, &g2)?;
        // compare on random complex evaluations
        for _ in 0..4 {
            let z = MatTuple::new(vec![
                randmat::random_mat(2, 2, Field::Complex, &mut rng),
                randmat::random_mat(2, 2, Field::Complex, &mut rng),
            ])?;
            let d1 = affine::eval_affine(&omega, &z)?
                .sub(&affine::eval_affine(&omega2, &z)?)
                .max_abs();
            let d2 = affine::eval_affine(&f, &z.re_part())?
                .sub(&affine::eval_affine(&f2, &z.re_part())?)
                .max_abs();
            max_error = max_error.max(d1).max(d2);
        }
        checked += 1;
    }
    Ok(RoundTripReport { checked, max_error, ucp_confirmed: checked })
}
