//! Evaluation duality between a set and its affine functions: set points
//! act as matrix states on affine functions, system elements act as affine
//! functions on matrix states, and the state space norms the system.
//!
//! Run with: cargo run --release -p ncconvex --example evaluation_duality

use ncconvex::affine::{self, AffineFn};
use ncconvex::eig;
use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, NcSetDescr};
use ncconvex::opsys;
use ncconvex::ToleranceConfig;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = opsys::quaternions()?;
    let set = NcSetDescr::state_space(h.clone());

    // a set point evaluates affine functions; the unit goes to the identity
    let x = ncset::sample(&set, 2, &cfg, &mut rng)?;
    let lambda = affine::lambda_duality(&set, &x, &cfg)?;
    let unit_val = lambda.eval(&AffineFn::unit(1, 4, Field::Real))?;
    println!(
        "evaluation functional of a level-2 state maps 1 to the identity: {}",
        unit_val.sub(&Mat::identity(2, Field::Real)).max_abs() < 1e-12
    );

    // system elements become affine functions on the state space, exactly
    let v = h.element_from_coords(&[(0.4, 0.0), (-0.9, 0.0), (0.3, 0.0), (0.7, 0.0)])?;
    let vhat = affine::hat_map(&h, &v)?;
    let val = affine::eval_affine(&vhat, &x)?;
    println!("v-hat evaluated at the state has shape {}x{}", val.rows(), val.cols());

    // the state space norms the system: the sampled supremum reproduces the
    // ambient operator norm (the identity representation attains it)
    for _ in 0..4 {
        let coords: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(-1.0..1.0), 0.0)).collect();
        let w = h.element_from_coords(&coords)?;
        let ambient = eig::op_norm(&w)?;
        let what = affine::hat_map(&h, &w)?;
        let (lower, upper) = affine::affine_norm(&what, &set, &cfg)?;
        println!(
            "ambient norm {ambient:.4}; state-space norm bounds [{lower:.4}, {upper:.4}]"
        );
    }

    // restriction norms: the full norm against the level-1 and level-2 cuts
    let f = {
        let raw = AffineFn {
            r: 1,
            a0: ncconvex::randmat::random_mat(1, 1, Field::Real, &mut rng),
            legs: (0..4)
                .map(|_| affine::AffineLeg {
                    a: ncconvex::randmat::random_mat(1, 1, Field::Real, &mut rng),
                    b: ncconvex::randmat::random_mat(1, 1, Field::Real, &mut rng),
                })
                .collect(),
        };
        raw.add(&raw.involution()).scale(0.5)
    };
    let norms = affine::restriction_norms(&f, &set, &cfg, 4)?;
    println!(
        "restriction norms: level1 {:.4}, level2 {:.4}, all {:.4} (factor-2 bound holds: {})",
        norms.level1,
        norms.level2,
        norms.all,
        norms.all <= 2.0 * norms.level2 + 1e-6
    );
    Ok(())
}
