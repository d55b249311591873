//! Boundary slices as CSV: the square at level 1, the smallest-vs-largest
//! sets at level 2 (the separable boundary sits strictly inside), and the
//! Bloch circle of the complexified quaternion state space.
//!
//! Run with: cargo run --release -p ncconvex --example plot_slices

use ncconvex::cli::plot_slice;
use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, Facet, NcSetDescr};
use ncconvex::opsys;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;

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

    // level 1: both sets are the square itself
    let center1 = MatTuple::zeros(1, 2, Field::Real);
    let rows = plot_slice(&max_set, &center1, 1, 0, 1, 16, 8.0, false, &cfg)?;
    println!("# square boundary at level 1 (angle, radius)");
    for (a, r) in &rows {
        println!("{a:.4},{r:.4}");
    }

    // level 2 through scalar directions: the separable boundary is inside
    let center2 = MatTuple::zeros(2, 2, Field::Real);
    let min_rows = plot_slice(&min_set, &center2, 2, 0, 1, 8, 8.0, false, &cfg)?;
    let max_rows = plot_slice(&max_set, &center2, 2, 0, 1, 8, 8.0, false, &cfg)?;
    println!("# level-2 slice: angle, smallest-set radius, largest-set radius");
    for ((a, rmin), (_, rmax)) in min_rows.iter().zip(&max_rows) {
        println!("{a:.4},{rmin:.4},{rmax:.4}");
    }

    // the complexified quaternion state space at level 1: walking the i and
    // j coordinates along imaginary directions from the unique real state
    // traces the Bloch circle of radius 1
    let h = opsys::quaternions()?;
    let set_c = ncset::complexify(&NcSetDescr::state_space(h))?;
    let center = MatTuple::new(vec![
        Mat::identity(1, Field::Complex),
        Mat::zeros(1, 1, Field::Complex),
        Mat::zeros(1, 1, Field::Complex),
        Mat::zeros(1, 1, Field::Complex),
    ])?;
    let rows = plot_slice(&set_c, &center, 1, 1, 2, 8, 4.0, true, &cfg)?;
    println!("# Bloch section of the complexified quaternion state space");
    for (a, r) in &rows {
        println!("{a:.4},{r:.4}");
    }
    Ok(())
}
