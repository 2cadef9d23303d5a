//! Numerical simplicity probe: an overdetermined linear system whose smallest
//! singular value separates generating families from degenerate ones whose
//! model misses part of the spectrum.
//!
//! Run with `cargo run --example simplicity_probe`.

use num_complex::Complex64;
use singular_ext::model::{GramSpec, SingularFamily};
use singular_ext::relation_model::{
    default_simplicity_points, RelationModel, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD,
};
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    let points = default_simplicity_points();

    // The borderline family couples every eigenvector, so no nonzero
    // coefficient pattern can be invisible to the probe.
    let family = SingularFamily::borderline(&op, 2, 1)?;
    let gram = GramSpec::pairing(&family, &op, 1e-6)?;
    let model = RelationModel::new(&op, &family, &gram, 1e-6)?;
    let report = model.check_simplicity(&points, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD)?;
    println!(
        "borderline family: sigma_min {:.3e} over {} equations / {} unknowns -> {:?}",
        report.sigma_min, report.equations, report.unknowns, report.verdict
    );

    // A family supported on two eigenvectors leaves the rest of the spectrum
    // untouched; the probe's system collapses and the verdict flips.
    let mut row = vec![Complex64::new(0.0, 0.0); op.len()];
    row[0] = Complex64::new(1.0, 0.0);
    row[1] = Complex64::new(0.5, 0.5);
    let supported = SingularFamily::explicit(&op, 2, vec![row])?;
    let gram = GramSpec::pairing(&supported, &op, 1e-6)?;
    let model = RelationModel::new(&op, &supported, &gram, 1e-6)?;
    let report = model.check_simplicity(&points, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD)?;
    println!(
        "eigen-supported family: sigma_min {:.3e} -> {:?}",
        report.sigma_min, report.verdict
    );
    Ok(())
}
