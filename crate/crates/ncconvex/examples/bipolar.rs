//! Polar membership and the double-polar agreement report: members stay in
//! the double polar, scaled-out points are refuted through polar witnesses,
//! and the polar commutes with complexification.
//!
//! Run with: cargo run --release -p ncconvex --example bipolar

use ncconvex::mat::Mat;
use ncconvex::ncset::NcSetDescr;
use ncconvex::sepolar;
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let set = NcSetDescr::interval(-1.0, 1.0)?;

    // polar membership of a functional tuple is a generator eigenvalue test
    let phi = MatTuple::new(vec![Mat::from_rows_real(&[vec![0.8, 0.0], vec![0.0, -0.5]])])?;
    println!(
        "phi = diag(0.8, -0.5) in the polar? {}",
        sepolar::polar_member(&set, &phi, &cfg)?.is_inside()
    );
    println!(
        "2*phi in the polar? {}",
        sepolar::polar_member(&set, &phi.scale(2.0), &cfg)?.is_inside()
    );

    let report = sepolar::bipolar_check(&set, &cfg, 3, 60)?;
    println!(
        "bipolar report: {}/{} members confirmed, {}/{} non-members refuted, {} undecided, {} misclassified",
        report.inside_confirmed,
        report.inside_checked,
        report.outside_certified,
        report.outside_checked,
        report.outside_undecided,
        report.misclassified
    );

    let agreement = sepolar::polar_complexify_check(&set, &cfg, 3, 60)?;
    println!(
        "polar/complexification agreement: {}/{} agree, theta-consistent {}/{}",
        agreement.agreed, agreement.checked, agreement.theta_consistent, agreement.checked
    );
    Ok(())
}
