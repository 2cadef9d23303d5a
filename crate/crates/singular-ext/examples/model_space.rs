//! Building the model space: a singular family at the borderline of the
//! scale, its pairing Gram matrix with certified truncation error, and the
//! structural diagnostics that decide which pictures are available.
//!
//! Run with `cargo run --example model_space`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use singular_ext::conditions::{diagnose, CONDITION_TOL};
use singular_ext::model::{GramSpec, SingularFamily};
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    // Certification of the convergent sums at tolerance 1e-6 needs the tail
    // bound below that tolerance, hence the full truncation here.
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 2000, -1.0)?;
    let family = SingularFamily::borderline(&op, 2, 1)?;

    // Membership check: each generator must sit exactly between two rungs of
    // the scale (one weighted sum converges, the next one diverges).
    for report in family.membership(&op, 1e-6) {
        println!(
            "generator {}: upper sum converged {}, lower sum diverged {}, in class {}",
            report.sigma, report.upper.converged, report.lower.diverged, report.in_class
        );
    }

    // The pairing Gram is computed as a truncated series with a tail bound.
    let eval = family.gram_pairing(&op, 1e-6)?;
    println!("pairing Gram ({}x{}):", eval.matrix.nrows(), eval.matrix.ncols());
    for i in 0..eval.matrix.nrows() {
        let row: Vec<String> = (0..eval.matrix.ncols())
            .map(|j| format!("{:+.9}", eval.matrix[(i, j)].re))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    println!(
        "worst entry tail bound: {:.3e}",
        eval.worst.tail_bound.unwrap_or(f64::NAN)
    );

    // Diagnostics decide admissibility: the pairing Gram carries the pair
    // symmetry needed by the relation picture but does not commute with the
    // coordinate action, so the operator picture is out.
    let pairing = GramSpec::pairing(&family, &op, 1e-6)?;
    let diag = diagnose(&pairing, op.z1(), CONDITION_TOL);
    println!(
        "pairing:         a2 {}, gacomm {}, operator-ready {}, relation-ready {}",
        diag.a2, diag.gacomm, diag.operator_model_ready, diag.relation_model_ready
    );

    // An anti-triangular Gram with identity blocks satisfies everything.
    let blocks = vec![DMatrix::<Complex64>::identity(1, 1); 2];
    let anti = GramSpec::anti_triangular(2, 1, &blocks)?;
    let diag = diagnose(&anti, op.z1(), CONDITION_TOL);
    println!(
        "anti-triangular: a2 {}, gacomm {}, operator-ready {}, relation-ready {}",
        diag.a2, diag.gacomm, diag.operator_model_ready, diag.relation_model_ready
    );
    Ok(())
}
