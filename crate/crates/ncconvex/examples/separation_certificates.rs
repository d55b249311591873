//! Separating a point from a matrix convex set with a machine-checkable
//! certificate: the realized pairing stays below the gamma leg on the set
//! and exceeds it at the point.
//!
//! Run with: cargo run --release -p ncconvex --example separation_certificates

use ncconvex::mat::Mat;
use ncconvex::ncset::NcSetDescr;
use ncconvex::sepolar::{self, SepOutcome, SeparateOptions};
use ncconvex::tuple::MatTuple;
use ncconvex::ToleranceConfig;

fn main() -> ncconvex::Result<()> {
    let cfg = ToleranceConfig::default();
    let set = NcSetDescr::interval(-1.0, 1.0)?;
    let y = MatTuple::new(vec![Mat::from_rows_real(&[vec![2.0, 0.0], vec![0.0, 0.0]])])?;

    // the certificate is a polar element when gamma is pinned to 1
    match sepolar::separate(&set, &y, &cfg, SeparateOptions { gamma_identity: true })? {
        SepOutcome::Certificate(cert) => {
            let (slack, violation) = sepolar::validate_certificate(&set, &y, &cert, &cfg)?;
            println!("certificate found at level {}", cert.n);
            println!("  generator slack     {slack:.2e}");
            println!("  violation at point  {violation:.4}");
            println!("  margin recorded     {:.4}", cert.margin);
            println!("  json: {}", serde_json::to_string(&cert)?);
        }
        other => println!("unexpected outcome: {other:?}"),
    }

    // a point inside the set is reported as such, with a witness
    let inside = MatTuple::from_scalars(&[0.25]);
    match sepolar::separate(&set, &inside, &cfg, SeparateOptions::default())? {
        SepOutcome::InsideAfterAll(_) => println!("0.25 is inside, as expected"),
        other => println!("unexpected outcome: {other:?}"),
    }

    // a hand-written certificate for the same instance also validates:
    // phi supported on the (1,1) entry, gamma = 1
    let hand = sepolar::SepCertificate {
        n: 2,
        phi: vec![Mat::from_rows_real(&[vec![1.0, 0.0], vec![0.0, 0.0]])],
        gamma: Mat::identity(2, ncconvex::Field::Real),
        margin: 1.0,
    };
    let (slack, violation) = sepolar::validate_certificate(&set, &y, &hand, &cfg)?;
    println!("hand certificate: slack {slack:.2e}, violation {violation:.4}");
    Ok(())
}
