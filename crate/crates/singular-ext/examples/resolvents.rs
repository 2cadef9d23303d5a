//! Resolvents of the extensions selected by a boundary parameter: the
//! reference extension, a self-adjoint parameter via the correction formula,
//! the resolvent identity, and the compression to the regular subspace.
//!
//! Run with `cargo run --example resolvents`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use singular_ext::boundary::BoundaryCondition;
use singular_ext::model::{majorant_norm, GramSpec, ModelVector, SingularFamily};
use singular_ext::relation_model::RelationModel;
use singular_ext::spectral::SpectralOperator;

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    let family = SingularFamily::borderline(&op, 2, 1)?;
    let gram = GramSpec::pairing(&family, &op, 1e-6)?;
    let model = RelationModel::new(&op, &family, &gram, 1e-6)?;
    let layout = gram.layout();

    // Input vector: basis element of the regular space plus coordinates.
    let v = ModelVector::new(
        op.basis_vector(0, layout.m as i32),
        DVector::from_vec(vec![Complex64::new(0.4, 0.0), Complex64::new(0.0, -0.2)]),
        layout,
    )?;
    let z = Complex64::new(0.3, 1.2);

    // Self-adjoint parameter theta = 0.7 (a real scalar in rank one).
    let theta = BoundaryCondition::from_matrix(DMatrix::from_element(
        1,
        1,
        Complex64::new(0.7, 0.0),
    ))?;
    let el = model.resolvent_boundary(z, &theta, &v)?;
    let left = model.left(&el)?;
    let right = model.right(&el)?;

    // Round trip: (relation - z) applied to the output returns the input.
    let scaled = ModelVector::new(left.regular.scale(z), &left.singular * z, layout)?;
    let defect = right.sub(&scaled)?.sub(&v)?;
    println!(
        "graph equation residual: {:.3e}",
        majorant_norm(&op, &gram, &defect)?
    );

    // The boundary values land inside the parameter's relation.
    let (g1, _) = model.gamma1(&el)?;
    println!(
        "parameter membership residual: {:.3e}",
        theta.defining_residual(&model.gamma0(&el), &g1)
    );

    // Resolvent identity R(z) - R(w) = (z - w) R(z) R(w).
    let w = Complex64::new(-0.8, 0.9);
    let rz = model.left(&model.resolvent_boundary(z, &theta, &v)?)?;
    let rw = model.left(&model.resolvent_boundary(w, &theta, &v)?)?;
    let rzw = model.left(&model.resolvent_boundary(z, &theta, &rw)?)?;
    let lhs = rz.sub(&rw)?;
    let rhs = ModelVector::new(rzw.regular.scale(z - w), &rzw.singular * (z - w), layout)?;
    println!(
        "resolvent identity residual: {:.3e}",
        majorant_norm(&op, &gram, &lhs.sub(&rhs)?)?
    );

    // The trivial parameter {0} x C^d reproduces the reference extension.
    let fixed = BoundaryCondition::fixed_reference(1);
    let via_theta = model.left(&model.resolvent_boundary(z, &fixed, &v)?)?;
    let reference = model.left(&model.resolvent_reference(z, &v)?)?;
    println!(
        "reference reduction residual: {:.3e}",
        majorant_norm(&op, &gram, &via_theta.sub(&reference)?)?
    );

    // Compression to the regular subspace equals the projection of the full
    // resolvent applied to a regular vector.
    let f = op.basis_vector(2, layout.m as i32);
    let (compressed, _) = model.compressed_resolvent(z, &theta, &f, None)?;
    let full = model.left(&model.resolvent_boundary(
        z,
        &theta,
        &ModelVector::regular_only(f, layout),
    )?)?;
    println!(
        "compression residual: {:.3e}",
        op.norm(layout.m as i32, &compressed.sub(&full.regular)?)?
    );
    Ok(())
}
