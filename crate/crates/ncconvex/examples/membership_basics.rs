//! Membership across the basic representations: interval, pencil, facet
//! polytope, and a generator hull, with witnesses re-validated by hand.
//!
//! Run with: cargo run --release -p ncconvex --example membership_basics

use ncconvex::mat::{Field, Mat};
use ncconvex::ncset::{self, Facet, Membership, NcSetDescr};
use ncconvex::sepolar;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;

fn show(name: &str, m: &Membership) {
    let verdict = match m {
        Membership::Inside(_) => "inside",
        Membership::Outside { certificate: Some(_) } => "outside (with certificate)",
        Membership::Outside { certificate: None } => "outside",
        Membership::Undecided => "undecided",
    };
    println!("  {name:<42} -> {verdict}");
}

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();

    println!("operator interval [0, 1]:");
    let interval = NcSetDescr::interval(0.0, 1.0)?;
    let mid = MatTuple::from_scalars(&[0.5]);
    show("midpoint 0.5", &ncset::member(&interval, &mid, &cfg)?);
    let spread = MatTuple::new(vec![Mat::from_rows_real(&[
        vec![0.9, 0.3],
        vec![0.3, 0.2],
    ])])?;
    show("2x2 with spectrum straddling 0", &ncset::member(&interval, &spread, &cfg)?);

    println!("pencil 1 + diag(1,-1) x >= 0 (the interval in disguise):");
    let pencil = NcSetDescr::pencil(
        Mat::identity(2, Field::Real),
        vec![Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]])],
    )?;
    show("0.5", &ncset::member(&pencil, &mid, &cfg)?);
    show("1.5", &ncset::member(&pencil, &MatTuple::from_scalars(&[1.5]), &cfg)?);

    println!("largest matrix convex set over the square:");
    let square = NcSetDescr::max_of(
        vec![
            Facet { b: 1.0, a: vec![1.0, 0.0] },
            Facet { b: 1.0, a: vec![-1.0, 0.0] },
            Facet { b: 1.0, a: vec![0.0, 1.0] },
            Facet { b: 1.0, a: vec![0.0, -1.0] },
        ],
        Field::Real,
        &cfg,
    )?;
    let pair = MatTuple::new(vec![
        Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
        Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]),
    ])?;
    show("anticommuting pair at level 2", &ncset::member(&square, &pair, &cfg)?);

    println!("hull of diag(1,-1) and diag(-1,1):");
    let g1 = MatTuple::new(vec![Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, -1.0]])])?;
    let g2 = MatTuple::new(vec![Mat::from_rows_real(&[vec![-1.0, 0.0], vec![0.0, 1.0]])])?;
    let hull = NcSetDescr::generators(vec![g1, g2], true)?;
    // the flip matrix is a rotation conjugate of a generator, hence inside
    let flip = MatTuple::new(vec![Mat::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]])])?;
    match ncset::member(&hull, &flip, &cfg)? {
        Membership::Inside(witness) => {
            let err = ncset::validate_witness(&hull, &flip, &witness, &cfg)?;
            println!("  flip matrix inside the hull; witness reconstruction error {err:.2e}");
        }
        other => println!("  unexpected: {other:?}"),
    }
    // scaling out of the hull produces a validated separation certificate
    let far = flip.scale(1.5);
    match ncset::member(&hull, &far, &cfg)? {
        Membership::Outside { certificate: Some(cert) } => {
            let (slack, violation) = sepolar::validate_certificate(&hull, &far, &cert, &cfg)?;
            println!(
                "  1.5x flip outside; certificate slack {slack:.2e}, violation {violation:.3}"
            );
        }
        other => println!("  unexpected: {other:?}"),
    }
    Ok(())
}
