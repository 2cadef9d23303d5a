//! The reduced matrix driving the singular part of the Weyl function: its
//! two displayed forms, its spectrum along independent routes, and the
//! dissipation identity that makes the singular part Herglotz.
//!
//! Run with `cargo run --example reduced_matrix`.

use num_complex::Complex64;
use singular_ext::model::{GramSpec, SingularFamily};
use singular_ext::relation_model::RelationModel;
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    // Rank two to get a matrix worth looking at.
    let family = SingularFamily::borderline(&op, 2, 2)?;
    let gram = GramSpec::pairing(&family, &op, 1e-6)?;
    let model = RelationModel::new(&op, &family, &gram, 1e-6)?;

    let delta = model.delta();
    let displayed = model.delta_displayed();
    println!(
        "delta vs displayed form: {:.3e}",
        (&delta - &displayed).norm()
    );

    let dh = model.delta_hat()?;
    println!("reduced matrix:");
    for i in 0..dh.nrows() {
        let row: Vec<String> = (0..dh.ncols())
            .map(|j| format!("{:+.6}{:+.6}i", dh[(i, j)].re, dh[(i, j)].im))
            .collect();
        println!("  [{}]", row.join(", "));
    }

    // Spectrum two ways: a general complex eigensolve, and the symmetrized
    // form available because the top-order Gram block is positive definite.
    let general = model.delta_hat_eigenvalues_general()?;
    let symmetrized = model.delta_hat_spectrum_symmetrized()?;
    println!("spectrum (general):     {general:.9?}");
    println!("spectrum (symmetrized): {symmetrized:.9?}");
    let worst_im = general.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
    println!("largest imaginary part: {worst_im:.3e}");

    // Singular Weyl part along two algebraically different routes.
    let z = Complex64::new(0.4, 1.5);
    let direct = model.weyl_singular(z)?;
    let sandwich = model.weyl_singular_sandwich(z)?;
    println!(
        "singular part route gap at {z}: {:.3e}",
        (&direct - &sandwich).norm()
    );

    // Dissipation identity: Im r(z) / Im z equals a positive Hermitian form.
    let (defect, min_eig) = model.dissipation_identity(z)?;
    println!("dissipation identity defect {defect:.3e}, smallest eigenvalue {min_eig:.6}");
    Ok(())
}
