//! The complexification of the real operator interval is the complex
//! operator interval: membership of z goes through the block doubling
//! [[x, -y], [y, x]] two levels up, and agrees with the direct complex
//! check a <= z <= b.
//!
//! Run with: cargo run --release -p ncconvex --example interval_complexification

use ncconvex::eig::herm_eig;
use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, NcSetDescr};
use ncconvex::randmat;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let (a, b) = (-1.0, 1.0);
    let interval = NcSetDescr::interval(a, b)?;
    let interval_c = ncset::complexify(&interval)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // a non-real scalar is rejected: its doubling is not even symmetric
    let z = MatTuple::new(vec![Mat::from_rows_complex(&[vec![0.3]], &[vec![0.1]])])?;
    println!(
        "0.3 + 0.1i member of the complexified interval? {}",
        ncset::member(&interval_c, &z, &cfg)?.is_inside()
    );

    // agreement with the direct complex-interval check on random draws
    let mut agree = 0;
    let total = 400;
    for k in 0..total {
        let n = 1 + k % 4;
        let z = randmat::random_hermitian(n, Field::Complex, &mut rng)
            .scale(rng.gen_range(0.3..1.2));
        let dec = herm_eig(&z)?;
        let direct = dec.min() >= a - 1e-9 && dec.max() <= b + 1e-9;
        let via_doubling = ncset::member(&interval_c, &MatTuple::new(vec![z])?, &cfg)?.is_inside();
        if direct == via_doubling {
            agree += 1;
        }
    }
    println!("doubling vs direct check: {agree}/{total} agree");

    // the embedding iota and the retraction r: r(iota(x)) = x, and the
    // conjugation theta fixes exactly the embedded real points
    let x = ncset::sample(&interval, 3, &cfg, &mut rng)?;
    let iota_x = x.to_complex();
    println!(
        "iota(x) inside: {}, retract error {:.2e}, theta fixes iota(x): {}",
        ncset::member(&interval_c, &iota_x, &cfg)?.is_inside(),
        ncset::retract(&iota_x).sub(&x).max_abs(),
        iota_x.theta().sub(&iota_x).max_abs() < 1e-15
    );
    let z = ncset::sample(&interval_c, 2, &cfg, &mut rng)?;
    println!(
        "sampled z inside: {}, theta(z) inside: {}",
        ncset::member(&interval_c, &z, &cfg)?.is_inside(),
        ncset::member(&interval_c, &z.theta(), &cfg)?.is_inside()
    );
    Ok(())
}
