//! Direct use of the feasibility engine: affine constraints over PSD
//! blocks, with validated certificates on both exits.
//!
//! Run with: cargo run --release -p ncconvex --example conic_feasibility

use ncconvex::conic::{self, AffinePsdProblem, BlockSpec, FeasStatus};
use ncconvex::mat::{Field, Mat};
use ncconvex::ToleranceConfig;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();

    // feasible: a 2x2 PSD matrix with prescribed trace and off-diagonal sum
    let mut p = AffinePsdProblem::new(vec![BlockSpec { size: 2, field: Field::Real }]);
    p.push_constraint(vec![(0, Mat::identity(2, Field::Real))], 2.0);
    p.push_constraint(
        vec![(0, Mat::from_rows_real(&[vec![0.0, 0.5], vec![0.5, 0.0]]))],
        0.6,
    );
    let res = conic::solve_feasibility(&p, &cfg)?;
    println!("first problem: {:?} after {} iterations", res.status, res.iterations);
    if let Some(point) = &res.point {
        let (violation, min_eig) = conic::check_point(&p, point)?;
        println!("  re-validated: constraint violation {violation:.2e}, min eigenvalue {min_eig:.2e}");
    }

    // infeasible: a PSD scalar equal to -1; the dual functional re-validates
    let mut q = AffinePsdProblem::new(vec![BlockSpec { size: 1, field: Field::Real }]);
    q.push_constraint(vec![(0, Mat::identity(1, Field::Real))], -1.0);
    let res = conic::solve_feasibility(&q, &cfg)?;
    println!("second problem: {:?} after {} iterations", res.status, res.iterations);
    if res.status == FeasStatus::Infeasible {
        let dual = res.dual.unwrap();
        let margin = conic::check_dual(&q, &dual.multipliers)?;
        println!("  re-validated Farkas margin: {margin:.4}");
    }

    // the projections behind the solver are available on their own
    let a = Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
    let pa = conic::project_psd(&a)?;
    println!(
        "eigenvalue clipping of diag(1,-1): diag({:.1}, {:.1})",
        pa.re_at(0, 0),
        pa.re_at(1, 1)
    );
    Ok(())
}
