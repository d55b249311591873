//! Command-line front end: load set/system/point descriptions, run the
//! library operations, and emit text, JSON, or CSV.
//!
//! Exit codes mirror the membership trichotomy so shell pipelines can branch
//! on Undecided: 0 inside/pass, 1 outside/fail, 2 undecided. 64 flags a
//! usage problem, 65 malformed input data, 70 an internal error, 78 an
//! unknown verify suite.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{ToleranceConfig, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};
use crate::mat::Field;
use crate::ncset::{self, Membership, NcSetDescr};
use crate::opsys;
use crate::sepolar::{self, SepCertificate, SeparateOptions};
use crate::suites::{self, Body, SuiteOptions};
use crate::tuple::MatTuple;

pub const EXIT_INSIDE: i32 = 0;
pub const EXIT_OUTSIDE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_UNKNOWN_SUITE: i32 = 78;

#[derive(Debug, Parser)]
#[command(
    name = "ncconvex",
    version,
    about = "Membership, separation, polar and duality checks for matrix convex sets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalFlags {
    /// Truncation level: "for all levels" claims are checked for n <= N.
    #[arg(short = 'N', long = "trunc", default_value_t = DEFAULT_TRUNCATION, global = true)]
    pub trunc: usize,
    /// Feasibility tolerance override; certificates gate at 10x this value.
    #[arg(long = "tol", global = true)]
    pub tol: Option<f64>,
    /// RNG seed; falls back to NCCONVEX_SEED, then 0.
    #[arg(long = "seed", env = "NCCONVEX_SEED", global = true)]
    pub seed: Option<u64>,
    /// Output format.
    #[arg(long = "format", default_value = "text", global = true)]
    pub format: FormatKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatKind {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a point belongs to a set.
    Member {
        set: PathBuf,
        point: PathBuf,
    },
    /// Separate a point from a set with a validated certificate.
    Separate {
        set: PathBuf,
        point: PathBuf,
        /// Pin gamma to the identity (requires 0 in the set).
        #[arg(long)]
        gamma_identity: bool,
        /// Write the certificate JSON here as well.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a separation certificate from its file.
    CheckCert {
        set: PathBuf,
        point: PathBuf,
        cert: PathBuf,
    },
    /// Emit the complexification of a real set description.
    Complexify {
        set: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide membership of a functional tuple in the polar of a set.
    Polar {
        set: PathBuf,
        point: PathBuf,
    },
    /// Two-sided double-polar agreement report for a set containing 0.
    Bipolar {
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Smallest/largest matrix convex set reports over a classical body.
    Minmax {
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Emit the state space of an operator system as a set description.
    Ncstate {
        /// Builtin name (quaternions, complex_numbers_as_real,
        /// matrix_algebra:m) or a path to a system JSON.
        system: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also sample one point at this level and print it.
        #[arg(short = 'n', long = "level")]
        level: Option<usize>,
    },
    /// Run a named property suite.
    Verify {
        suite: String,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        /// Dump every conic feasibility problem the run solves to this
        /// directory as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// CSV boundary samples of a 2D slice through two coordinates.
    Plot {
        set: PathBuf,
        #[arg(short = 'n', long = "level", default_value_t = 1)]
        level: usize,
        /// Two zero-based coordinate indices, e.g. `0,1`.
        #[arg(long, default_value = "0,1")]
        plane: String,
        #[arg(long, default_value_t = 72)]
        angles: usize,
        #[arg(long, default_value_t = 16.0)]
        rmax: f64,
        /// Base point of the slice; defaults to the zero tuple.
        #[arg(long)]
        center: Option<PathBuf>,
        /// Walk along i-scaled coordinate directions (complex sets).
        #[arg(long)]
        imag: bool,
    },
}

fn build_cfg(flags: &GlobalFlags) -> ToleranceConfig {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = flags.tol {
        cfg.tol_feas = t;
        cfg.tol_cert = 10.0 * t;
        cfg.tol_psd = (t / 100.0).max(1e-14);
    }
    cfg.seed = flags.seed.unwrap_or(0);
    cfg
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    trunc: usize,
    tolerances: &'a ToleranceConfig,
    #[serde(flatten)]
    payload: T,
}

fn emit<T: Serialize>(
    flags: &GlobalFlags,
    cfg: &ToleranceConfig,
    text: String,
    payload: T,
) -> Result<()> {
    match flags.format {
        FormatKind::Text => {
            println!("{text}");
            println!("seed = {}, trunc = {}", cfg.seed, flags.trunc);
        }
        FormatKind::Json | FormatKind::Csv => {
            let env = Envelope {
                tool: "ncconvex",
                version: env!("CARGO_PKG_VERSION"),
                seed: cfg.seed,
                trunc: flags.trunc,
                tolerances: cfg,
                payload,
            };
            println!("{}", serde_json::to_string_pretty(&env)?);
        }
    }
    Ok(())
}

fn load_set(path: &Path) -> Result<NcSetDescr> {
    let text = std::fs::read_to_string(path)?;
    let set: NcSetDescr = serde_json::from_str(&text)?;
    set.validate()?;
    Ok(set)
}

fn load_point(path: &Path) -> Result<MatTuple> {
    let text = std::fs::read_to_string(path)?;
    let p: MatTuple = serde_json::from_str(&text)?;
    MatTuple::new(p.parts)
}

fn load_cert(path: &Path) -> Result<SepCertificate> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_body(path: &Path) -> Result<Body> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = build_cfg(&cli.global);
    match dispatch(&cli, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) | Error::Invalid(_) | Error::DimensionMismatch(_)
                | Error::FieldMismatch(_) | Error::AlreadyComplex | Error::AlreadyReal => EXIT_DATA,
                _ => EXIT_INTERNAL,
            }
        }
    }
}

#[derive(Serialize)]
struct MemberPayload<'a> {
    command: &'static str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a ncset::MembershipWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a SepCertificate>,
}

fn dispatch(cli: &Cli, cfg: &ToleranceConfig) -> Result<i32> {
    match &cli.command {
        Command::Member { set, point } => {
            let set = load_set(set)?;
            let x = load_point(point)?;
            let verdict = ncset::member(&set, &x, cfg)?;
            let (name, code, witness, certificate) = match &verdict {
                Membership::Inside(w) => ("inside", EXIT_INSIDE, Some(w), None),
                Membership::Outside { certificate } => {
                    ("outside", EXIT_OUTSIDE, None, certificate.as_ref())
                }
                Membership::Undecided => ("undecided", EXIT_UNDECIDED, None, None),
            };
            emit(
                &cli.global,
                cfg,
                format!("membership: {name}"),
                MemberPayload { command: "member", verdict: name, witness, certificate },
            )?;
            Ok(code)
        }
        Command::Separate { set, point, gamma_identity, out } => {
            let set = load_set(set)?;
            let y = load_point(point)?;
            let outcome = sepolar::separate(
                &set,
                &y,
                cfg,
                SeparateOptions { gamma_identity: *gamma_identity },
            )?;
            match outcome {
                sepolar::SepOutcome::Certificate(cert) => {
                    if let Some(path) = out {
                        std::fs::write(path, serde_json::to_string_pretty(&cert)?)?;
                    }
                    #[derive(Serialize)]
                    struct P<'a> {
                        command: &'static str,
                        verdict: &'static str,
                        certificate: &'a SepCertificate,
                    }
                    emit(
                        &cli.global,
                        cfg,
                        format!(
                            "separated: margin {:.3e} at level {}",
                            cert.margin, cert.n
                        ),
                        P { command: "separate", verdict: "separated", certificate: &cert },
                    )?;
                    Ok(EXIT_INSIDE)
                }
                sepolar::SepOutcome::InsideAfterAll(w) => {
                    emit(
                        &cli.global,
                        cfg,
                        "point is inside the set".into(),
                        MemberPayload {
                            command: "separate",
                            verdict: "inside",
                            witness: Some(&w),
                            certificate: None,
                        },
                    )?;
                    Ok(EXIT_OUTSIDE)
                }
                sepolar::SepOutcome::Undecided => {
                    emit(
                        &cli.global,
                        cfg,
                        "undecided".into(),
                        MemberPayload {
                            command: "separate",
                            verdict: "undecided",
                            witness: None,
                            certificate: None,
                        },
                    )?;
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
        Command::CheckCert { set, point, cert } => {
            let set = load_set(set)?;
            let y = load_point(point)?;
            let cert = load_cert(cert)?;
            match sepolar::validate_certificate(&set, &y, &cert, cfg) {
                Ok((slack, violation)) => {
                    #[derive(Serialize)]
                    struct P {
                        command: &'static str,
                        verdict: &'static str,
                        slack: f64,
                        violation: f64,
                    }
                    emit(
                        &cli.global,
                        cfg,
                        format!("certificate valid: slack {slack:.3e}, violation {violation:.3e}"),
                        P { command: "check-cert", verdict: "valid", slack, violation },
                    )?;
                    Ok(EXIT_INSIDE)
                }
                Err(e) => {
                    #[derive(Serialize)]
                    struct P {
                        command: &'static str,
                        verdict: &'static str,
                        reason: String,
                    }
                    emit(
                        &cli.global,
                        cfg,
                        format!("certificate invalid: {e}"),
                        P { command: "check-cert", verdict: "invalid", reason: e.to_string() },
                    )?;
                    Ok(EXIT_OUTSIDE)
                }
            }
        }
        Command::Complexify { set, out } => {
            let set = load_set(set)?;
            let c = ncset::complexify(&set)?;
            let body = serde_json::to_string_pretty(&c)?;
            if let Some(path) = out {
                std::fs::write(path, &body)?;
            }
            #[derive(Serialize)]
            struct P {
                command: &'static str,
                set: NcSetDescr,
            }
            emit(&cli.global, cfg, body, P { command: "complexify", set: c })?;
            Ok(EXIT_INSIDE)
        }
        Command::Polar { set, point } => {
            let set = load_set(set)?;
            let phi = load_point(point)?;
            let verdict = sepolar::polar_member(&set, &phi, cfg)?;
            let (name, code) = match &verdict {
                sepolar::PolarVerdict::Inside => ("inside", EXIT_INSIDE),
                sepolar::PolarVerdict::Outside { .. } => ("outside", EXIT_OUTSIDE),
                sepolar::PolarVerdict::Undecided => ("undecided", EXIT_UNDECIDED),
            };
            #[derive(Serialize)]
            struct P {
                command: &'static str,
                verdict: &'static str,
            }
            emit(
                &cli.global,
                cfg,
                format!("polar membership: {name}"),
                P { command: "polar", verdict: name },
            )?;
            Ok(code)
        }
        Command::Bipolar { set, samples } => {
            let set = match set {
                Some(p) => load_set(p)?,
                None => NcSetDescr::interval(-1.0, 1.0)?,
            };
            let report = sepolar::bipolar_check(&set, cfg, cli.global.trunc, *samples)?;
            let ok = report.misclassified == 0;
            #[derive(Serialize)]
            struct P<'a> {
                command: &'static str,
                report: &'a sepolar::BipolarReport,
            }
            emit(
                &cli.global,
                cfg,
                format!(
                    "bipolar: {}/{} members confirmed, {}/{} non-members refuted ({} undecided, {} misclassified)",
                    report.inside_confirmed,
                    report.inside_checked,
                    report.outside_certified,
                    report.outside_checked,
                    report.outside_undecided,
                    report.misclassified
                ),
                P { command: "bipolar", report: &report },
            )?;
            Ok(if ok { EXIT_INSIDE } else { EXIT_OUTSIDE })
        }
        Command::Minmax { body, samples } => {
            let opts = SuiteOptions {
                body: match body {
                    Some(p) => Some(load_body(p)?),
                    None => None,
                },
                samples: *samples,
                trunc: cli.global.trunc,
                set: None,
            };
            let report = suites::run_suite("minmax", cfg, &opts)?;
            print_suite(&cli.global, cfg, &report)?;
            Ok(if report.failures() == 0 { EXIT_INSIDE } else { EXIT_OUTSIDE })
        }
        Command::Ncstate { system, out, level } => {
            let sys = if system.contains('{') || Path::new(system).exists() {
                let text = if system.contains('{') {
                    system.clone()
                } else {
                    std::fs::read_to_string(system)?
                };
                serde_json::from_str::<opsys::OpSysDescr>(&text)?
            } else {
                opsys::builtin_system(system)?
            };
            let set = NcSetDescr::state_space(sys);
            let body = serde_json::to_string_pretty(&set)?;
            if let Some(path) = out {
                std::fs::write(path, &body)?;
            }
            let mut text = body.clone();
            let mut sample_json = None;
            if let Some(n) = level {
                let mut rng =
                    <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(cfg.seed);
                let x = ncset::sample(&set, *n, cfg, &mut rng)?;
                sample_json = Some(x.clone());
                text = format!("{text}\nsample at level {n}: {}", serde_json::to_string(&x)?);
            }
            #[derive(Serialize)]
            struct P {
                command: &'static str,
                set: NcSetDescr,
                #[serde(skip_serializing_if = "Option::is_none")]
                sample: Option<MatTuple>,
            }
            emit(
                &cli.global,
                cfg,
                text,
                P { command: "ncstate", set, sample: sample_json },
            )?;
            Ok(EXIT_INSIDE)
        }
        Command::Verify { suite, set, body, samples, dump } => {
            if !suites::SUITE_NAMES.contains(&suite.as_str()) {
                eprintln!(
                    "unknown suite `{suite}`; available: {}",
                    suites::SUITE_NAMES.join(", ")
                );
                return Ok(EXIT_UNKNOWN_SUITE);
            }
            crate::conic::set_dump_dir(dump.clone());
            let opts = SuiteOptions {
                set: match set {
                    Some(p) => Some(load_set(p)?),
                    None => None,
                },
                body: match body {
                    Some(p) => Some(load_body(p)?),
                    None => None,
                },
                samples: samples.unwrap_or(0),
                trunc: cli.global.trunc,
            };
            let report = suites::run_suite(suite, cfg, &opts);
            crate::conic::set_dump_dir(None);
            let report = report?;
            print_suite(&cli.global, cfg, &report)?;
            Ok(if report.failures() == 0 { EXIT_INSIDE } else { EXIT_OUTSIDE })
        }
        Command::Plot { set, level, plane, angles, rmax, center, imag } => {
            let set = load_set(set)?;
            // d = 1 sets degenerate to a two-sided sweep along the single
            // coordinate; the plane flag is ignored
            let (k1, k2) = if set.d == 1 {
                (0, 0)
            } else {
                parse_plane(plane, set.d)?
            };
            let center = match center {
                Some(p) => load_point(p)?,
                None => MatTuple::zeros(*level, set.d, set.point_field()),
            };
            let rows = plot_slice(&set, &center, *level, k1, k2, *angles, *rmax, *imag, cfg)?;
            match cli.global.format {
                FormatKind::Json => {
                    #[derive(Serialize)]
                    struct P {
                        command: &'static str,
                        rows: Vec<(f64, f64)>,
                    }
                    emit(&cli.global, cfg, String::new(), P { command: "plot", rows })?;
                }
                _ => {
                    println!("# ncconvex plot seed={} level={} plane={},{}", cfg.seed, level, k1, k2);
                    println!("angle,radius");
                    for (a, r) in &rows {
                        println!("{a:.6},{r:.6}");
                    }
                }
            }
            Ok(EXIT_INSIDE)
        }
    }
}

fn print_suite(flags: &GlobalFlags, cfg: &ToleranceConfig, report: &suites::SuiteReport) -> Result<()> {
    let mut text = format!("suite {}\n", report.suite);
    for p in &report.props {
        text.push_str(&format!(
            "  {:<40} pass {:>4}  fail {:>4}  undecided {:>4}\n",
            p.name, p.pass, p.fail, p.undecided
        ));
    }
    text.push_str(&format!(
        "result: {}",
        if report.failures() == 0 { "ok" } else { "FAILED" }
    ));
    #[derive(Serialize)]
    struct P<'a> {
        command: &'static str,
        report: &'a suites::SuiteReport,
    }
    emit(flags, cfg, text, P { command: "verify", report })
}

fn parse_plane(plane: &str, d: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = plane.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Invalid("plane must be `k1,k2`".into()));
    }
    let k1: usize = parts[0].trim().parse().map_err(|_| Error::Invalid("bad plane index".into()))?;
    let k2: usize = parts[1].trim().parse().map_err(|_| Error::Invalid("bad plane index".into()))?;
    if k1 >= d || k2 >= d || k1 == k2 {
        return Err(Error::Invalid("plane indices must be distinct and within d".into()));
    }
    Ok((k1, k2))
}

/// Boundary radius per angle by bisection on the validated membership
/// predicate along scalar coordinate directions from the base point.
#[allow(clippy::too_many_arguments)]
pub fn plot_slice(
    set: &NcSetDescr,
    center: &MatTuple,
    level: usize,
    k1: usize,
    k2: usize,
    angles: usize,
    rmax: f64,
    imag: bool,
    cfg: &ToleranceConfig,
) -> Result<Vec<(f64, f64)>> {
    if center.n != level {
        return Err(Error::DimensionMismatch("center level mismatch".into()));
    }
    if !ncset::member(set, center, cfg)?.is_inside() {
        return Err(Error::Invalid(
            "the slice base point is not a member; pass --center".into(),
        ));
    }
    let field = set.point_field();
    if imag && field != Field::Complex {
        return Err(Error::FieldMismatch("--imag needs a complex set".into()));
    }
    let one = crate::mat::Mat::identity(level, field);
    let unit_dir = |k: usize, c: f64| -> MatTuple {
        let mut parts = vec![crate::mat::Mat::zeros(level, level, field); set.d];
        parts[k] = if imag {
            one.scale_complex(0.0, c)
        } else {
            one.scale(c)
        };
        MatTuple::new(parts).expect("direction shape")
    };
    let mut rows = Vec::with_capacity(angles);
    for a in 0..angles {
        let theta = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
        let dir = if k1 == k2 {
            // one-coordinate sweep: only the cosine leg moves
            unit_dir(k1, theta.cos())
        } else {
            unit_dir(k1, theta.cos()).add(&unit_dir(k2, theta.sin()))
        };
        if dir.max_abs() < 1e-12 {
            rows.push((theta, 0.0));
            continue;
        }
        let inside = |r: f64| -> Result<bool> {
            Ok(ncset::member(set, &center.add(&dir.scale(r)), cfg)?.is_inside())
        };
        let mut lo = 0.0;
        let mut hi = rmax;
        if inside(hi)? {
            rows.push((theta, hi));
            continue;
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if inside(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rows.push((theta, lo));
    }
    Ok(rows)
}
