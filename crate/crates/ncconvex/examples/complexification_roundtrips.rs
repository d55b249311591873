//! The two complexification pairings and their inverses: state pairs
//! (f, g) against complex states of the complexified system, and affine
//! pairs against complex affine functions on the complexified set.
//!
//! Run with: cargo run --release -p ncconvex --example complexification_roundtrips

use ncconvex::affine::{self, AffineFn, AffineLeg};
use ncconvex::mat::{Field, Mat};
use ncconvex::opsys::{self, StatePair};
use ncconvex::randmat;
use ncconvex::suites;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = opsys::quaternions()?;
    let hc = opsys::complexify_opsys(&h)?;

    // gamma splits a complex state into a real pair; psi reassembles it
    let omega = opsys::sample_state(&hc, 2, &mut rng);
    let pair = opsys::gamma_map(&h, &omega, &cfg)?;
    let back = opsys::psi_map(&h, &pair, &cfg)?;
    let mut err = 0.0f64;
    for (a, b) in back.images.iter().zip(&omega.images) {
        err = err.max(a.sub(b).max_abs());
    }
    println!("state pairing round trip error: {err:.2e}");

    // a purely real pair complexifies canonically: psi(f, 0) = f + i0
    let f = opsys::sample_state(&h, 2, &mut rng);
    let zero = opsys::UcpCandidate::new(
        f.images.iter().map(|_| Mat::zeros(2, 2, Field::Real)).collect(),
    )?;
    let fc = opsys::psi_map(&h, &StatePair { f: f.clone(), g: zero }, &cfg)?;
    let imag_mass = fc
        .images
        .iter()
        .map(|m| m.imag_part().max_abs())
        .fold(0.0f64, f64::max);
    println!("canonical complexification keeps zero imaginary part: {imag_mass:.2e}");

    // the affine pairing works in pencil coefficients and round-trips exactly
    let mk = |rng: &mut ChaCha8Rng| {
        let raw = AffineFn {
            r: 2,
            a0: randmat::random_mat(2, 2, Field::Real, rng),
            legs: (0..2)
                .map(|_| AffineLeg {
                    a: randmat::random_mat(2, 2, Field::Real, rng),
                    b: randmat::random_mat(2, 2, Field::Real, rng),
                })
                .collect(),
        };
        raw.add(&raw.involution()).scale(0.5)
    };
    let (fa, ga) = (mk(&mut rng), mk(&mut rng));
    let omega = affine::psi_affine(&fa, &ga)?;
    let (fb, gb) = affine::gamma_affine(&omega)?;
    let z = MatTuple::new(vec![
        randmat::random_mat(3, 3, Field::Complex, &mut rng),
        randmat::random_mat(3, 3, Field::Complex, &mut rng),
    ])?;
    let d = affine::eval_affine(&omega, &z)?
        .sub(&affine::eval_affine(&affine::psi_affine(&fb, &gb)?, &z)?)
        .max_abs();
    println!("affine pairing round trip error at a random point: {d:.2e}");

    // the bundled report runs both directions on many random inputs
    let report = suites::state_pair_roundtrips(&h, &cfg, 2, 20)?;
    println!(
        "bundled report: {} pairs checked, max error {:.2e}, all images re-validated: {}",
        report.checked,
        report.max_error,
        report.ucp_confirmed == report.checked
    );
    Ok(())
}
