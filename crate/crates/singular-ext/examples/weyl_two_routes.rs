//! The Weyl function along two independent routes: as the regular part q plus
//! the reduced-matrix correction, and as the boundary map applied to defect
//! fields. Both pictures agree wherever their hypotheses overlap.
//!
//! Run with `cargo run --example weyl_two_routes`.

use nalgebra::DVector;
use num_complex::Complex64;
use singular_ext::model::{GramSpec, SingularFamily};
use singular_ext::relation_model::RelationModel;
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    let family = SingularFamily::borderline(&op, 2, 1)?;
    let gram = GramSpec::pairing(&family, &op, 1e-6)?;
    let model = RelationModel::new(&op, &family, &gram, 1e-6)?;

    println!("          z                 q(z)                      M(z)          route gap");
    for &z in &[
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.3, 2.0),
        Complex64::new(-0.4, 4.0),
    ] {
        let (q, _) = family.regular_weyl(&op, z, 1e-6)?;
        let (m, _) = model.weyl(z)?;

        // Second route: gamma1 applied to the defect field at z.
        let c = DVector::from_element(1, Complex64::new(1.0, 0.0));
        let field = model.field(z, &c)?;
        let (via_field, _) = model.gamma1(&field)?;
        let gap = (m[(0, 0)] - via_field[0]).norm();
        println!(
            "{:>12}   {:>24}   {:>24}   {gap:.2e}",
            format!("{z}"),
            format!("{:.9}", q[(0, 0)]),
            format!("{:.9}", m[(0, 0)])
        );
    }

    // Herglotz behavior in the upper half plane: Im M / Im z stays positive.
    let z = Complex64::new(0.7, 1.1);
    let (m, _) = model.weyl(z)?;
    println!("\nIm M({z}) / Im z = {:.6} (> 0)", m[(0, 0)].im / z.im);

    // Order one degenerates: the singular correction collapses onto the
    // anchor and M reduces to q shifted by a constant matrix.
    let family1 = SingularFamily::borderline(&op, 1, 1)?;
    let gram1 = GramSpec::pairing(&family1, &op, 1e-6)?;
    let model1 = RelationModel::new(&op, &family1, &gram1, 1e-6)?;
    let dh = model1.delta_hat()?;
    println!("\norder one: reduced matrix = {:.9} (anchor {})", dh[(0, 0)], op.z1());
    Ok(())
}
