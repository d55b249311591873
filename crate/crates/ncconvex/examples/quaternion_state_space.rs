//! The quaternion state space: trivial at level 1, a Bloch ball after
//! complexification. The level-1 search pins the unique state, and the
//! complexified level-1 test accepts exactly the density matrices.
//!
//! Run with: cargo run --release -p ncconvex --example quaternion_state_space

use ncconvex::mat::{Field, Mat};
use ncconvex::opsys::{self, UcpCandidate, UcpVerdict};
use ncconvex::randmat;
use ncconvex::suites;
use ncconvex::ToleranceConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let h = opsys::quaternions()?;
    let one = Mat::identity(1, Field::Real);

    // the coefficient of the non-real units must vanish: bisect along axes
    for (name, k) in [("i", 1usize), ("j", 2), ("k", 3)] {
        let feasible = |t: f64| -> bool {
            let mut images = vec![one.clone(), one.scale(0.0), one.scale(0.0), one.scale(0.0)];
            images[k] = one.scale(t);
            let cand = UcpCandidate::new(images).unwrap();
            matches!(
                opsys::is_ucp(&h, &cand, &cfg),
                Ok(out) if matches!(out.verdict, UcpVerdict::Yes(_))
            )
        };
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        println!("largest admissible {name}-coefficient at level 1: {hi:.2e}");
    }

    // after complexification the level-1 slice is the set of 2x2 density
    // matrices: accept genuine densities, reject indefinite perturbations
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut accepted = 0;
    let mut rejected = 0;
    let rounds = 100;
    for _ in 0..rounds {
        let raw = randmat::random_psd(2, Field::Complex, &mut rng)
            .add(&Mat::identity(2, Field::Complex).scale(1e-3));
        let (tr, _) = raw.trace();
        if suites::density_state_accepted(&h, &raw.scale(1.0 / tr), &cfg)? {
            accepted += 1;
        }
        let neg = loop {
            let m = randmat::random_hermitian(2, Field::Complex, &mut rng);
            let (tr, _) = m.trace();
            let cand = m.sub(&Mat::identity(2, Field::Complex).scale((tr - 1.0) / 2.0));
            if ncconvex::eig::herm_eig(&cand)?.min() < -1e-3 {
                break cand;
            }
        };
        if !suites::density_state_accepted(&h, &neg, &cfg)? {
            rejected += 1;
        }
    }
    println!("density matrices accepted: {accepted}/{rounds}");
    println!("indefinite trace-one matrices rejected: {rejected}/{rounds}");

    // at level 2 the real state space is far from trivial: compressions of
    // the left regular representation carry a skew image of i
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let state = opsys::sample_state(&h, 2, &mut rng);
    let skew = state.images[1].sub(&state.images[1].transpose()).max_abs();
    println!("level-2 state: image of i has skew mass {skew:.3}");
    Ok(())
}
