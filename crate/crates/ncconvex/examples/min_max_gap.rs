//! The smallest and largest matrix convex sets over the unit square agree at
//! level 1 and split at level 2: the anticommuting pair passes every facet
//! test yet admits no separable decomposition, and the refusal comes with a
//! validated separation certificate.
//!
//! Run with: cargo run --release -p ncconvex --example min_max_gap

use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, Facet, Membership, NcSetDescr};
use ncconvex::sepolar;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let vertices = vec![
        vec![1.0, 1.0],
        vec![1.0, -1.0],
        vec![-1.0, 1.0],
        vec![-1.0, -1.0],
    ];
    let facets = vec![
        Facet { b: 1.0, a: vec![1.0, 0.0] },
        Facet { b: 1.0, a: vec![-1.0, 0.0] },
        Facet { b: 1.0, a: vec![0.0, 1.0] },
        Facet { b: 1.0, a: vec![0.0, -1.0] },
    ];
    let min_set = NcSetDescr::min_of(vertices, Field::Real)?;
    let max_set = NcSetDescr::max_of(facets, Field::Real, &cfg)?;

    // sandwich: every separable sample passes the facet tests
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pass = 0;
    for round in 0..60 {
        let n = 1 + round % 3;
        let x = ncset::sample(&min_set, n, &cfg, &mut rng)?;
        if ncset::member(&max_set, &x, &cfg)?.is_inside() {
            pass += 1;
        }
    }
    println!("smallest-set samples inside the largest set: {pass}/60");

    let pair = MatTuple::new(vec![
        Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
        Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
    ])?;
    println!(
        "anticommuting pair in the largest set: {}",
        ncset::member(&max_set, &pair, &cfg)?.is_inside()
    );
    match ncset::member(&min_set, &pair, &cfg)? {
        Membership::Outside { certificate: Some(cert) } => {
            let (slack, violation) =
                sepolar::validate_certificate(&min_set, &pair, &cert, &cfg)?;
            println!(
                "anticommuting pair outside the smallest set; certificate slack {slack:.2e}, violation {violation:.4}"
            );
        }
        other => println!("unexpected: {other:?}"),
    }

    // the separable structure is explicit for members
    let inside = MatTuple::new(vec![
        Mat::from_rows_real(&[vec![0.5, 0.0], vec![0.0, -0.5]]),
        Mat::from_rows_real(&[vec![0.5, 0.0], vec![0.0, 0.5]]),
    ])?;
    match sepolar::min_membership(
        &[vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]],
        &inside,
        &cfg,
    )? {
        sepolar::MinMembership::Inside { coefficients, vertex_indices } => {
            println!(
                "separable decomposition over {} vertices: {:?}",
                coefficients.len(),
                vertex_indices
            );
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
