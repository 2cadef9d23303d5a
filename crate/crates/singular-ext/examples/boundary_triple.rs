//! The operator picture as a boundary triple: domain elements with their
//! regular remainder, singular coefficients and model coordinates; the two
//! boundary maps; and the abstract Green identity connecting them.
//!
//! Run with `cargo run --example boundary_triple`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use singular_ext::model::SingularFamily;
use singular_ext::model::GramSpec;
use singular_ext::operator_model::{DomainElement, OperatorModel};
use singular_ext::spectral::{DecayLaw, SpectralOperator};

fn main() -> singular_ext::Result<()> {
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    let family = SingularFamily::borderline(&op, 2, 1)?;
    let blocks = vec![DMatrix::<Complex64>::identity(1, 1); 2];
    let gram = GramSpec::anti_triangular(2, 1, &blocks)?;
    let model = OperatorModel::new(&op, &family, &gram, 1e-6)?;
    let layout = gram.layout();

    // A domain element: smooth remainder two rungs above the borderline,
    // singular coefficient c, and free model coordinates. The decay law
    // attached to the remainder is what certifies tail bounds downstream.
    let remainder = |seed: f64| {
        let coeffs: Vec<Complex64> = (0..op.len())
            .map(|k0| {
                let k = (k0 + 1) as f64;
                Complex64::new(seed, -seed / k) * k.powi(-3) * op.weight(k0, -1)
            })
            .collect();
        op.vector(coeffs, layout.m as i32 + 2)
    };
    let law = |seed: f64| DecayLaw::new(seed.abs() * std::f64::consts::SQRT_2, 3.0, 1.0);
    let f = DomainElement::new(
        remainder(1.0)?,
        DVector::from_element(1, Complex64::new(0.8, -0.3)),
        DVector::from_vec(vec![Complex64::new(0.2, 0.1), Complex64::new(-0.5, 0.4)]),
        layout,
    )?
    .with_law(law(1.0));
    let g = DomainElement::new(
        remainder(-0.7)?,
        DVector::from_element(1, Complex64::new(-0.1, 0.6)),
        DVector::from_vec(vec![Complex64::new(0.9, 0.0), Complex64::new(0.3, -0.2)]),
        layout,
    )?
    .with_law(law(-0.7));

    let g0f = model.gamma0(&f);
    let (g1f, tail) = model.gamma1(&f)?;
    println!("gamma0(f) = {:.6}", g0f[0]);
    println!(
        "gamma1(f) = {:.6} (tail bound {:.3e})",
        g1f[0],
        tail.tail_bound.unwrap_or(f64::NAN)
    );

    // Green identity: the sesquilinear boundary form computed from the metric
    // equals the displayed pairing of boundary values.
    let direct = model.boundary_form(&f, &g)?;
    let displayed = model.boundary_pairing(&f, &g)?;
    println!("boundary form      = {direct:.12}");
    println!("displayed pairing  = {displayed:.12}");
    println!("difference         = {:.3e}", (direct - displayed).norm());

    // The same identity phrased against the dual action.
    let defect = model.green_dual_defect(&f, &g)?;
    println!("dual-action defect = {:.3e}", defect.norm());
    Ok(())
}
