//! Counting negative squares of the Pick kernel built from a Weyl function.
//! The relation picture produces a genuine Herglotz function (no negative
//! squares); the operator picture over an anti-triangular Gram does not.
//!
//! Run with `cargo run --example kernel_census`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use singular_ext::model::{GramSpec, SingularFamily};
use singular_ext::nevanlinna::{audit, default_point_suites};
use singular_ext::operator_model::OperatorModel;
use singular_ext::relation_model::RelationModel;
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    let family = SingularFamily::borderline(&op, 2, 1)?;

    let pairing = GramSpec::pairing(&family, &op, 1e-6)?;
    let relation = RelationModel::new(&op, &family, &pairing, 1e-6)?;

    let blocks = vec![DMatrix::<Complex64>::identity(1, 1); 2];
    let anti = GramSpec::anti_triangular(2, 1, &blocks)?;
    let operator = OperatorModel::new(&op, &family, &anti, 1e-6)?;

    // Seeded ladders of points in the upper half plane, anchored near the
    // interesting part of the real axis (including the anchor itself).
    let suites = default_point_suites(op.z1(), 42, 8);
    println!("suite  points  relation-kernel  operator-kernel");
    for (idx, points) in suites.iter().enumerate() {
        let rel = audit(points, |z| relation.weyl(z).map(|(m, _)| m))?;
        let opr = audit(points, |z| operator.weyl(z).map(|(m, _)| m))?;
        println!(
            "{idx:5}  {:6}  neg {} min {:+.2e}   neg {} min {:+.2e}",
            points.len(),
            rel.negative_squares,
            rel.min_eigenvalue,
            opr.negative_squares,
            opr.min_eigenvalue
        );
    }

    // The census also reports symmetry across conjugation and strict
    // positivity of Im M / Im z pointwise.
    let sample = audit(&suites[0], |z| relation.weyl(z).map(|(m, _)| m))?;
    println!(
        "\nrelation picture on suite 0: symmetry defect {:.2e}, strictness {:.4}",
        sample.symmetry_defect, sample.strictness
    );
    Ok(())
}
