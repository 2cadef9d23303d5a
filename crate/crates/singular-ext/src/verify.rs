//! Deterministic verification suites. Each suite exercises one structural
//! identity of the construction end to end and reports its worst relative
//! residual. Identities whose hypotheses fail for the configured Gram run on
//! an internal substitute fixture instead, so one broken condition shows up
//! in exactly the suite that tests it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::BoundaryCondition;
use crate::conditions::{
    diagnose, gram_action_adjoint, min_block_eigenvalues, solve_compatibility, GramDiagnostics,
    CONDITION_TOL,
};
use crate::config::{GramBlock, Instance, ModelConfig};
use crate::error::Result;
use crate::model::{
    h_perp_basis, majorant_norm, split_min_perp, GramSpec, ModelVector, SingularFamily,
};
use crate::nevanlinna::{audit, default_point_suites};
use crate::operator_model::{DomainElement, OperatorModel};
use crate::relation_model::{
    default_simplicity_points, GraphElement, RelationModel, SimplicityVerdict, SIMPLICITY_COEFFS,
    SIMPLICITY_THRESHOLD,
};
use crate::report::{SuiteResult, VerifyBlock};
use crate::spectral::{DecayLaw, ScaleVector, SpectralOperator};

pub const BOUNDARY_FORM_TOL: f64 = 1e-9;
pub const GREEN_TOL: f64 = 1e-9;
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-3;
pub const EIGEN_FIELD_TOL: f64 = 1e-9;
pub const WEYL_TWO_PATH_TOL: f64 = 1e-8;
pub const DEGENERACY_TOL: f64 = 1e-12;
pub const RESOLVENT_IDENTITY_TOL: f64 = 1e-8;
pub const REDUCTION_TOL: f64 = 1e-13;
pub const COMPRESSED_TOL: f64 = 1e-8;
pub const SPECTRUM_REAL_TOL: f64 = 1e-10;
pub const STRUCTURAL_TOL: f64 = 1e-10;
pub const DOUBLING_REL_TOL: f64 = 1e-4;
pub const KERNEL_SUITES: usize = 20;

/// Runs every suite on the configured instance. Deterministic for a given
/// config and seed.
pub fn run_all(config: &ModelConfig, seed: u64) -> Result<VerifyBlock> {
    let instance = config.build()?;
    let diag = diagnose(&instance.gram, instance.op.z1(), CONDITION_TOL);
    let theta = match &config.theta {
        Some(_) => instance.theta.clone(),
        None => BoundaryCondition::from_matrix(DMatrix::from_diagonal_element(
            instance.family.d(),
            instance.family.d(),
            Complex64::new(0.7, 0.0),
        ))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        boundary_form_suite(&instance, &mut rng),
        relation_green_suite(&instance, &mut rng),
        eigen_fields_suite(&instance, &mut rng),
        weyl_two_path_suite(&instance),
        resolvent_identity_suite(&instance, &diag, &theta, &mut rng),
        compressed_projection_suite(&instance, &diag, &theta, &mut rng),
        nevanlinna_kernel_suite(&instance, &diag, seed),
        structural_suite(&instance, &diag, &mut rng),
        truncation_stability_suite(config, &instance),
        simplicity_suite(&instance),
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyBlock { suites, passed })
}

fn suite<F>(name: &str, tolerance: f64, body: F) -> SuiteResult
where
    F: FnOnce() -> Result<(f64, bool, String)>,
{
    match body() {
        Ok((residual, passed, detail)) => SuiteResult {
            name: name.to_string(),
            passed,
            residual,
            tolerance,
            detail,
        },
        Err(e) => SuiteResult {
            name: name.to_string(),
            passed: false,
            residual: -1.0,
            tolerance,
            detail: format!("did not run: {e}"),
        },
    }
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn rand_vec(rng: &mut ChaCha8Rng, len: usize) -> DVector<Complex64> {
    DVector::from_fn(len, |_, _| rand_c(rng))
}

fn rand_nonreal(rng: &mut ChaCha8Rng) -> Complex64 {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Complex64::new(rng.gen_range(-2.0..2.0), sign * rng.gen_range(0.3..2.0))
}

/// Random coefficients decaying fast enough for every scale index in play.
fn decaying_coeffs(op: &SpectralOperator, m: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let e = m as f64 + 1.0;
    (0..op.len())
        .map(|k0| {
            let k = (k0 + 1) as f64;
            rand_c(rng) * k.powf(-e) * op.weight(k0, -1)
        })
        .collect()
}

fn regular_law(m: usize) -> DecayLaw {
    DecayLaw::new(std::f64::consts::SQRT_2, m as f64 + 1.0, 1.0)
}

fn random_remainder(op: &SpectralOperator, m: usize, rng: &mut ChaCha8Rng) -> ScaleVector {
    op.vector(decaying_coeffs(op, m, rng), m as i32 + 2)
        .expect("lengths match by construction")
}

fn random_h_m(op: &SpectralOperator, m: usize, rng: &mut ChaCha8Rng) -> ScaleVector {
    op.vector(decaying_coeffs(op, m, rng), m as i32)
        .expect("lengths match by construction")
}

fn random_domain_element(
    op: &SpectralOperator,
    gram: &GramSpec,
    rng: &mut ChaCha8Rng,
) -> Result<DomainElement> {
    let layout = gram.layout();
    let el = DomainElement::new(
        random_remainder(op, layout.m, rng),
        rand_vec(rng, layout.d),
        rand_vec(rng, layout.dim()),
        layout,
    )?;
    Ok(el.with_law(regular_law(layout.m)))
}

fn random_graph_element(
    op: &SpectralOperator,
    gram: &GramSpec,
    rng: &mut ChaCha8Rng,
) -> Result<GraphElement> {
    let layout = gram.layout();
    let basis = h_perp_basis(gram)?;
    let mut k_perp = DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0));
    for member in &basis {
        k_perp += member * rand_c(rng);
    }
    let el = GraphElement::new(
        random_remainder(op, layout.m, rng),
        rand_vec(rng, layout.d),
        rand_vec(rng, layout.d),
        k_perp,
        layout,
    )?;
    Ok(el.with_law(regular_law(layout.m)))
}

/// Anti-triangular Gram with identity blocks: satisfies every admissibility
/// condition of both pictures.
fn anti_fixture(m: usize, d: usize) -> GramSpec {
    let blocks = vec![DMatrix::<Complex64>::identity(d, d); m];
    GramSpec::anti_triangular(m, d, &blocks).expect("identity blocks are Hermitian")
}

/// Hermitian bump on the adjacent top-order pair; spoils that symmetry and
/// nothing else. Impossible at order one, where the pair does not exist.
fn broken_pair_gram(gram: &GramSpec) -> Option<GramSpec> {
    let layout = gram.layout();
    if layout.m < 2 {
        return None;
    }
    let mut matrix = gram.matrix().clone();
    let a = layout.flat(0, layout.m - 1);
    let b = layout.flat(0, layout.m);
    matrix[(a, b)] += Complex64::new(0.0, 0.05);
    matrix[(b, a)] += Complex64::new(0.0, -0.05);
    GramSpec::explicit(matrix, layout.m, layout.d).ok()
}

fn min_block_invertible(gram: &GramSpec) -> bool {
    let eig = min_block_eigenvalues(gram);
    let scale = eig.iter().map(|e| e.abs()).fold(0.0, f64::max);
    scale > 0.0 && eig.iter().all(|e| e.abs() > 1e-12 * scale)
}

fn scaled(v: &ModelVector, z: Complex64, gram: &GramSpec) -> Result<ModelVector> {
    ModelVector::new(v.regular.scale(z), &v.singular * z, gram.layout())
}

fn boundary_form_suite(inst: &Instance, rng: &mut ChaCha8Rng) -> SuiteResult {
    suite("boundary-form", BOUNDARY_FORM_TOL, || {
        let anti = anti_fixture(inst.family.m(), inst.family.d());
        let mut worst: f64 = 0.0;
        for gram in [&inst.gram, &anti] {
            let model = OperatorModel::new(&inst.op, &inst.family, gram, inst.tolerance)?;
            for _ in 0..100 {
                let f = random_domain_element(&inst.op, gram, rng)?;
                let g = random_domain_element(&inst.op, gram, rng)?;
                let direct = model.boundary_form(&f, &g)?;
                let displayed = model.boundary_pairing(&f, &g)?;
                worst = worst.max((direct - displayed).norm() / direct.norm().max(1.0));
            }
        }
        Ok((
            worst,
            worst <= BOUNDARY_FORM_TOL,
            "100 random pairs each on the configured and the anti-triangular Gram".into(),
        ))
    })
}

fn relation_green_suite(inst: &Instance, rng: &mut ChaCha8Rng) -> SuiteResult {
    suite("relation-green", GREEN_TOL, || {
        let model = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let f = random_graph_element(&inst.op, &inst.gram, rng)?;
            let g = random_graph_element(&inst.op, &inst.gram, rng)?;
            let lhs = model.green_form(&f, &g)?;
            let (g1f, _) = model.gamma1(&f)?;
            let (g1g, _) = model.gamma1(&g)?;
            let clean = g1f.dotc(&model.gamma0(&g)) - model.gamma0(&f).dotc(&g1g);
            worst = worst.max((lhs - clean).norm() / lhs.norm().max(1.0));
        }
        let mut detail = String::from("50 random graph pairs, plain boundary pairing");
        let mut control_ok = inst.family.m() < 2;
        if let Some(broken) = broken_pair_gram(&inst.gram) {
            let control = RelationModel::new(&inst.op, &inst.family, &broken, inst.tolerance)?;
            let mut control_worst: f64 = 0.0;
            for _ in 0..5 {
                let f = random_graph_element(&inst.op, &broken, rng)?;
                let g = random_graph_element(&inst.op, &broken, rng)?;
                let lhs = control.green_form(&f, &g)?;
                let (g1f, _) = control.gamma1(&f)?;
                let (g1g, _) = control.gamma1(&g)?;
                let clean =
                    g1f.dotc(&control.gamma0(&g)) - control.gamma0(&f).dotc(&g1g);
                control_worst =
                    control_worst.max((lhs - clean).norm() / lhs.norm().max(1.0));
            }
            control_ok = control_worst > NEGATIVE_CONTROL_FLOOR;
            detail.push_str(&format!(
                "; perturbed-pair control residual {control_worst:.3e} (must exceed {NEGATIVE_CONTROL_FLOOR:.0e})"
            ));
        } else {
            detail.push_str("; order-one instance, control skipped");
        }
        Ok((worst, worst <= GREEN_TOL && control_ok, detail))
    })
}

fn eigen_fields_suite(inst: &Instance, rng: &mut ChaCha8Rng) -> SuiteResult {
    suite("eigen-fields", EIGEN_FIELD_TOL, || {
        let om = OperatorModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let rm = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let d = inst.family.d();
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let z = rand_nonreal(rng);
            let c = rand_vec(rng, d);
            let el = om.field(z, &c)?;
            let value = om.value(&el)?;
            let action = om.max_action(&el)?;
            let diff = action.sub(&scaled(&value, z, &inst.gram)?)?;
            let denom = majorant_norm(&inst.op, &inst.gram, &value)?.max(1.0);
            worst = worst.max(majorant_norm(&inst.op, &inst.gram, &diff)? / denom);

            let gel = rm.field(z, &c)?;
            let left = rm.left(&gel)?;
            let right = rm.right(&gel)?;
            let gdiff = right.sub(&scaled(&left, z, &inst.gram)?)?;
            let gdenom = majorant_norm(&inst.op, &inst.gram, &left)?.max(1.0);
            worst = worst.max(majorant_norm(&inst.op, &inst.gram, &gdiff)? / gdenom);
            worst = worst.max(rm.perp_residual(&gel) / gdenom);
        }
        Ok((
            worst,
            worst <= EIGEN_FIELD_TOL,
            "eigen equations of both pictures at 20 random nonreal points".into(),
        ))
    })
}

fn weyl_two_path_suite(inst: &Instance) -> SuiteResult {
    suite("weyl-two-path", WEYL_TWO_PATH_TOL, || {
        let om = OperatorModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let rm = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let d = inst.family.d();
        let mut grid = Vec::with_capacity(12);
        for j in 0..6 {
            grid.push(Complex64::new(0.0, 0.7 * 1.5_f64.powi(j)));
            grid.push(Complex64::new(1.3, 0.5 * 2.0_f64.powi(j)));
        }
        let mut worst: f64 = 0.0;
        for &z in &grid {
            let (ma, _) = om.weyl(z)?;
            let mb = om.weyl_via_boundary(z)?;
            worst = worst.max((&ma - &mb).norm() / ma.norm().max(1.0));
            let (ra, _) = rm.weyl(z)?;
            let mut rb = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
            for sigma in 0..d {
                let mut c = DVector::from_element(d, Complex64::new(0.0, 0.0));
                c[sigma] = Complex64::new(1.0, 0.0);
                let el = rm.field(z, &c)?;
                let (col, _) = rm.gamma1(&el)?;
                rb.set_column(sigma, &col);
            }
            worst = worst.max((&ra - &rb).norm() / ra.norm().max(1.0));
        }
        // Order-one collapse: the reduced matrix is the anchor and the
        // singular Weyl parts of the two pictures coincide.
        let family1 = SingularFamily::borderline(&inst.op, 1, 1)?;
        let gram1 = GramSpec::pairing(&family1, &inst.op, inst.tolerance)?;
        let om1 = OperatorModel::new(&inst.op, &family1, &gram1, inst.tolerance)?;
        let rm1 = RelationModel::new(&inst.op, &family1, &gram1, inst.tolerance)?;
        let z1 = inst.op.z1();
        let dh = rm1.delta_hat()?;
        let mut degeneracy =
            (&dh - DMatrix::from_diagonal_element(1, 1, Complex64::new(z1, 0.0))).norm()
                / z1.abs().max(1.0);
        for &z in &grid[..3] {
            let r = om1.weyl_r(z)?;
            let rhat = rm1.weyl_singular(z)?;
            degeneracy = degeneracy.max((&r - &rhat).norm() / r.norm().max(1.0));
        }
        let passed = worst <= WEYL_TWO_PATH_TOL && degeneracy <= DEGENERACY_TOL;
        Ok((
            worst,
            passed,
            format!(
                "12-point grid, both pictures; order-one degeneracy residual {degeneracy:.3e} \
                 (tolerance {DEGENERACY_TOL:.0e})"
            ),
        ))
    })
}

fn resolvent_identity_suite(
    inst: &Instance,
    diag: &GramDiagnostics,
    theta: &BoundaryCondition,
    rng: &mut ChaCha8Rng,
) -> SuiteResult {
    suite("resolvent-identity", RESOLVENT_IDENTITY_TOL, || {
        let anti = anti_fixture(inst.family.m(), inst.family.d());
        let (a_gram, substituted) = if diag.operator_model_ready {
            (&inst.gram, false)
        } else {
            (&anti, true)
        };
        let am = OperatorModel::new(&inst.op, &inst.family, a_gram, inst.tolerance)?;
        let rm = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let layout = inst.gram.layout();
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let z = rand_nonreal(rng);
            let mut w = rand_nonreal(rng);
            while (z - w).norm() < 0.5 {
                w = rand_nonreal(rng);
            }
            let factor = z - w;
            let v = ModelVector::new(
                random_h_m(&inst.op, layout.m, rng),
                rand_vec(rng, layout.dim()),
                layout,
            )?;

            let rz = am.value(&am.resolvent_boundary(z, theta, &v)?)?;
            let rw = am.value(&am.resolvent_boundary(w, theta, &v)?)?;
            let pair = am.value(&am.resolvent_boundary(z, theta, &rw)?)?;
            let lhs = rz.sub(&rw)?;
            let rhs = scaled(&pair, factor, a_gram)?;
            let denom = majorant_norm(&inst.op, a_gram, &rhs)?.max(1e-6);
            worst = worst.max(majorant_norm(&inst.op, a_gram, &lhs.sub(&rhs)?)? / denom);

            let bz = rm.left(&rm.resolvent_boundary(z, theta, &v)?)?;
            let bw = rm.left(&rm.resolvent_boundary(w, theta, &v)?)?;
            let bpair = rm.left(&rm.resolvent_boundary(z, theta, &bw)?)?;
            let blhs = bz.sub(&bw)?;
            let brhs = scaled(&bpair, factor, &inst.gram)?;
            let bdenom = majorant_norm(&inst.op, &inst.gram, &brhs)?.max(1e-6);
            worst = worst
                .max(majorant_norm(&inst.op, &inst.gram, &blhs.sub(&brhs)?)? / bdenom);
        }
        // Trivial parameter: the correction term vanishes identically.
        let fixed = BoundaryCondition::fixed_reference(layout.d);
        let z = Complex64::new(0.4, 1.3);
        let v = ModelVector::new(
            random_h_m(&inst.op, layout.m, rng),
            rand_vec(rng, layout.dim()),
            layout,
        )?;
        let via_theta = am.value(&am.resolvent_boundary(z, &fixed, &v)?)?;
        let direct = am.value(&am.resolvent_reference(z, &v)?)?;
        let mut reduction = majorant_norm(&inst.op, a_gram, &via_theta.sub(&direct)?)?;
        let bvia = rm.left(&rm.resolvent_boundary(z, &fixed, &v)?)?;
        let bdirect = rm.left(&rm.resolvent_reference(z, &v)?)?;
        reduction =
            reduction.max(majorant_norm(&inst.op, &inst.gram, &bvia.sub(&bdirect)?)?);
        let passed = worst <= RESOLVENT_IDENTITY_TOL && reduction <= REDUCTION_TOL;
        let mut detail = format!(
            "5 point pairs, both pictures; reference-parameter reduction residual {reduction:.3e}"
        );
        if substituted {
            detail.push_str("; operator picture ran on the anti-triangular substitute");
        }
        Ok((worst, passed, detail))
    })
}

fn compressed_projection_suite(
    inst: &Instance,
    diag: &GramDiagnostics,
    theta: &BoundaryCondition,
    rng: &mut ChaCha8Rng,
) -> SuiteResult {
    suite("compressed-projection", COMPRESSED_TOL, || {
        let anti = anti_fixture(inst.family.m(), inst.family.d());
        let (a_gram, substituted) = if diag.operator_model_ready {
            (&inst.gram, false)
        } else {
            (&anti, true)
        };
        let am = OperatorModel::new(&inst.op, &inst.family, a_gram, inst.tolerance)?;
        let rm = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let layout = inst.gram.layout();
        let m = layout.m;
        let law = regular_law(m);
        let mut worst: f64 = 0.0;
        for &z in &[
            Complex64::new(0.0, 1.0),
            Complex64::new(1.7, -0.8),
            Complex64::new(-0.6, 2.2),
        ] {
            let f = random_h_m(&inst.op, m, rng);
            let (comp_a, _) = am.compressed_resolvent(z, theta, &f, Some(&law))?;
            let v = ModelVector::new(
                f.clone(),
                DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0)),
                layout,
            )?;
            let full_a = am.value(&am.resolvent_boundary(z, theta, &v)?)?;
            let diff = comp_a.sub(&full_a.regular)?;
            let denom = inst.op.norm(m as i32, &full_a.regular)?.max(1e-9);
            worst = worst.max(inst.op.norm(m as i32, &diff)? / denom);

            let (comp_b, _) = rm.compressed_resolvent(z, theta, &f, Some(&law))?;
            let full_b = rm.left(&rm.resolvent_boundary(z, theta, &v)?)?;
            let bdiff = comp_b.sub(&full_b.regular)?;
            let bdenom = inst.op.norm(m as i32, &full_b.regular)?.max(1e-9);
            worst = worst.max(inst.op.norm(m as i32, &bdiff)? / bdenom);
        }
        // Rank-one sanity: the correction solve collapses to the scalar
        // denominator theta - M(z).
        let mut scalar_note = String::new();
        if layout.d == 1 {
            let z = Complex64::new(0.3, 1.4);
            let scalar_theta =
                BoundaryCondition::from_matrix(DMatrix::from_element(1, 1, Complex64::new(0.7, 0.0)))?;
            let u = DVector::from_element(1, Complex64::new(0.9, -0.4));
            let (mz, _) = rm.weyl(z)?;
            let s = scalar_theta.correction_coefficients(&mz, &u)?;
            let direct = u[0] / (Complex64::new(0.7, 0.0) - mz[(0, 0)]);
            let scalar_res = (s[0] - direct).norm() / direct.norm().max(1e-12);
            worst = worst.max(scalar_res);
            scalar_note = format!("; scalar-denominator residual {scalar_res:.3e}");
        }
        let mut detail = format!("3 points, both pictures{scalar_note}");
        if substituted {
            detail.push_str("; operator picture ran on the anti-triangular substitute");
        }
        Ok((worst, worst <= COMPRESSED_TOL, detail))
    })
}

fn nevanlinna_kernel_suite(inst: &Instance, diag: &GramDiagnostics, seed: u64) -> SuiteResult {
    suite("nevanlinna-kernel", SPECTRUM_REAL_TOL, || {
        let pairing_fallback;
        let (b_gram, substituted) = if diag.relation_model_ready {
            (&inst.gram, false)
        } else {
            pairing_fallback = GramSpec::pairing(&inst.family, &inst.op, inst.tolerance)?;
            (&pairing_fallback, true)
        };
        let rm = RelationModel::new(&inst.op, &inst.family, b_gram, inst.tolerance)?;
        let suites = default_point_suites(inst.op.z1(), seed, KERNEL_SUITES);
        let mut max_negative = 0usize;
        let mut strictness = f64::INFINITY;
        let mut symmetry: f64 = 0.0;
        for points in &suites {
            let report = audit(points, |z| rm.weyl(z).map(|(m, _)| m))?;
            max_negative = max_negative.max(report.negative_squares);
            strictness = strictness.min(report.strictness);
            symmetry = symmetry.max(report.symmetry_defect);
        }
        // The anti-triangular order-two fixture carries a genuinely indefinite
        // kernel; the audit must see it.
        let family2 = SingularFamily::borderline(&inst.op, 2, 1)?;
        let anti2 = anti_fixture(2, 1);
        let om2 = OperatorModel::new(&inst.op, &family2, &anti2, inst.tolerance)?;
        let mut indefinite_max = 0usize;
        for points in &suites {
            let report = audit(points, |z| om2.weyl(z).map(|(m, _)| m))?;
            indefinite_max = indefinite_max.max(report.negative_squares);
        }
        let eigenvalues = rm.delta_hat_eigenvalues_general()?;
        let scale = eigenvalues
            .iter()
            .map(|e| e.norm())
            .fold(1.0_f64, f64::max);
        let realness = eigenvalues
            .iter()
            .map(|e| e.im.abs())
            .fold(0.0_f64, f64::max)
            / scale;
        let passed = max_negative == 0
            && strictness > 0.0
            && indefinite_max >= 1
            && realness <= SPECTRUM_REAL_TOL;
        let mut detail = format!(
            "{KERNEL_SUITES} point suites: relation kernel negatives {max_negative}, \
             strictness {strictness:.3e}, symmetry defect {symmetry:.3e}; \
             anti-triangular operator kernel negatives {indefinite_max}; \
             reduced-matrix spectrum imaginary residual {realness:.3e}"
        );
        if substituted {
            detail.push_str("; relation picture ran on the pairing Gram substitute");
        }
        Ok((realness, passed, detail))
    })
}

fn structural_suite(
    inst: &Instance,
    diag: &GramDiagnostics,
    rng: &mut ChaCha8Rng,
) -> SuiteResult {
    suite("structural-inclusions", STRUCTURAL_TOL, || {
        let anti = anti_fixture(inst.family.m(), inst.family.d());
        let mut notes = Vec::new();
        let mut worst: f64 = 0.0;

        // Action discrepancy on pure top-order elements stays metric-neutral.
        let (gram_a, sub_a) = if diag.a2 && diag.invertible {
            (&inst.gram, false)
        } else {
            (&anti, true)
        };
        let om = OperatorModel::new(&inst.op, &inst.family, gram_a, inst.tolerance)?;
        let layout = gram_a.layout();
        for _ in 0..5 {
            let c0 = rand_vec(rng, layout.d);
            let el = DomainElement::new(
                inst.op.zero_vector(layout.m as i32 + 2),
                DVector::from_element(layout.d, Complex64::new(0.0, 0.0)),
                layout.eta(&c0),
                layout,
            )?;
            let max_action = om.max_action(&el)?;
            let dual_action = om.dual_action(&el)?;
            let diff = dual_action.sub(&max_action)?;
            let leak = gram_a.block_m_of(&diff.singular).norm() + diff.regular.coeffs().iter().map(|x| x.norm()).sum::<f64>();
            worst = worst.max(leak / c0.norm());
        }
        if sub_a {
            notes.push("action discrepancy ran on the anti-triangular substitute");
        }

        // Coordinate splitting is exact and its remainder is metric-orthogonal.
        let (gram_b, sub_b) = if min_block_invertible(&inst.gram) {
            (&inst.gram, false)
        } else {
            (&anti, true)
        };
        for _ in 0..5 {
            let v = rand_vec(rng, gram_b.layout().dim());
            let (min_part, perp) = split_min_perp(gram_b, &v)?;
            let recon = (&min_part + &perp) - &v;
            worst = worst.max(recon.norm() / v.norm());
            worst = worst.max(gram_b.block_m_of(&perp).norm() / v.norm());
        }
        if sub_b {
            notes.push("coordinate splitting ran on the anti-triangular substitute");
        }

        // Compatibility solve reproduces the adjoint action of the metric.
        let (gram_c, sub_c) = if diag.invertible {
            (&inst.gram, false)
        } else {
            (&anti, true)
        };
        let adj = gram_action_adjoint(gram_c, inst.op.z1());
        for _ in 0..5 {
            let xi = rand_vec(rng, gram_c.layout().dim());
            let xi_prime = solve_compatibility(gram_c, inst.op.z1(), &xi)?;
            let lhs = &adj * &xi;
            let rhs = gram_c.matrix() * xi_prime;
            worst = worst.max((&lhs - &rhs).norm() / lhs.norm().max(1.0));
        }
        if sub_c {
            notes.push("compatibility solve ran on the anti-triangular substitute");
        }

        let mut detail = String::from("action discrepancy, coordinate splitting, compatibility solve");
        for note in notes {
            detail.push_str("; ");
            detail.push_str(note);
        }
        Ok((worst, worst <= STRUCTURAL_TOL, detail))
    })
}

fn truncation_stability_suite(config: &ModelConfig, inst: &Instance) -> SuiteResult {
    suite("truncation-stability", DOUBLING_REL_TOL, || {
        let n = config.n();
        if n < 8 {
            return Ok((0.0, true, "truncation too small to halve".into()));
        }
        let half = config.with_truncation(n / 2).build()?;
        let z = Complex64::new(0.0, 1.0);
        let mut worst_rel: f64 = 0.0;
        let mut bounded = true;
        let mut notes = Vec::new();

        let check = |full: &DMatrix<Complex64>,
                         coarse: &DMatrix<Complex64>,
                         bound: Option<f64>,
                         what: &str,
                         worst_rel: &mut f64,
                         bounded: &mut bool,
                         notes: &mut Vec<String>| {
            let mut move_abs: f64 = 0.0;
            let mut rel: f64 = 0.0;
            for i in 0..full.nrows() {
                for j in 0..full.ncols() {
                    let diff = (full[(i, j)] - coarse[(i, j)]).norm();
                    move_abs = move_abs.max(diff);
                    if full[(i, j)].norm() > 1e-9 {
                        rel = rel.max(diff / full[(i, j)].norm());
                    }
                }
            }
            *worst_rel = (*worst_rel).max(rel);
            match bound {
                Some(b) => {
                    if move_abs > b {
                        *bounded = false;
                    }
                    notes.push(format!("{what}: moved {move_abs:.3e} (bound {b:.3e})"));
                }
                None => notes.push(format!("{what}: moved {move_abs:.3e} (no tail bound)")),
            }
        };

        if matches!(config.gram, GramBlock::Pairing) {
            let full_eval = inst.family.gram_pairing(&inst.op, inst.tolerance)?;
            let half_eval = half.family.gram_pairing(&half.op, half.tolerance)?;
            check(
                &full_eval.matrix,
                &half_eval.matrix,
                half_eval.worst.tail_bound,
                "gram",
                &mut worst_rel,
                &mut bounded,
                &mut notes,
            );
        } else {
            notes.push("gram: truncation independent, skipped".into());
        }

        let (q_full, _) = inst.family.regular_weyl(&inst.op, z, inst.tolerance)?;
        let (q_half, q_half_report) = half.family.regular_weyl(&half.op, z, half.tolerance)?;
        check(
            &q_full,
            &q_half,
            q_half_report.tail_bound,
            "q(i)",
            &mut worst_rel,
            &mut bounded,
            &mut notes,
        );

        if min_block_invertible(&inst.gram) && min_block_invertible(&half.gram) {
            let rm_full = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
            let rm_half = RelationModel::new(&half.op, &half.family, &half.gram, half.tolerance)?;
            let (m_full, _) = rm_full.weyl(z)?;
            let (m_half, _) = rm_half.weyl(z)?;
            check(
                &m_full,
                &m_half,
                q_half_report.tail_bound,
                "M(i)",
                &mut worst_rel,
                &mut bounded,
                &mut notes,
            );
        } else {
            notes.push("M(i): top-order block singular, skipped".into());
        }

        let passed = bounded && worst_rel <= DOUBLING_REL_TOL;
        Ok((worst_rel, passed, notes.join("; ")))
    })
}

fn simplicity_suite(inst: &Instance) -> SuiteResult {
    suite("simplicity", SIMPLICITY_THRESHOLD, || {
        let rm = RelationModel::new(&inst.op, &inst.family, &inst.gram, inst.tolerance)?;
        let points = default_simplicity_points();
        let report = rm.check_simplicity(&points, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD)?;

        // Control supported on two eigenvectors: later coefficients are
        // untouched by the probe, so the system must collapse.
        let mut row = vec![Complex64::new(0.0, 0.0); inst.op.len()];
        row[0] = Complex64::new(1.0, 0.0);
        row[1] = Complex64::new(0.5, 0.5);
        let supported = SingularFamily::explicit(&inst.op, 2, vec![row])?;
        let control_gram = GramSpec::pairing(&supported, &inst.op, inst.tolerance)?;
        let control_rm =
            RelationModel::new(&inst.op, &supported, &control_gram, inst.tolerance)?;
        let control = control_rm.check_simplicity(&points, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD)?;

        let passed = report.verdict == SimplicityVerdict::Simple
            && control.verdict == SimplicityVerdict::Degenerate;
        let detail = format!(
            "configured instance sigma_min {:.3e} ({:?}); eigen-supported control sigma_min {:.3e} ({:?})",
            report.sigma_min, report.verdict, control.sigma_min, control.verdict
        );
        Ok((control.sigma_min, passed, detail))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_fixture_passes_every_suite() {
        let config = ModelConfig::reference(600);
        let block = run_all(&config, 17).unwrap();
        assert_eq!(block.suites.len(), 10);
        for suite in &block.suites {
            assert!(
                suite.passed,
                "suite {} failed: residual {:.3e}, {}",
                suite.name, suite.residual, suite.detail
            );
        }
        assert!(block.passed);
    }

    #[test]
    fn broken_pair_symmetry_fails_only_the_green_suite() {
        // Reference config, explicit Gram equal to the pairing matrix with the
        // adjacent-pair bump applied.
        let base = ModelConfig::reference(400).build().unwrap();
        let broken = broken_pair_gram(&base.gram).unwrap();
        let rows: Vec<Vec<crate::config::ComplexEntry>> = (0..broken.matrix().nrows())
            .map(|i| {
                (0..broken.matrix().ncols())
                    .map(|j| crate::config::ComplexEntry(broken.matrix()[(i, j)]))
                    .collect()
            })
            .collect();
        let config = ModelConfig {
            gram: GramBlock::Explicit { matrix: rows },
            ..ModelConfig::reference(400)
        };
        let block = run_all(&config, 17).unwrap();
        assert!(!block.passed);
        for suite in &block.suites {
            if suite.name == "relation-green" {
                assert!(!suite.passed, "green suite must catch the broken pair");
                assert!(suite.residual > NEGATIVE_CONTROL_FLOOR);
            } else {
                assert!(
                    suite.passed,
                    "suite {} should survive the broken pair: {}",
                    suite.name, suite.detail
                );
            }
        }
    }

    #[test]
    fn runs_are_deterministic_for_a_fixed_seed() {
        let config = ModelConfig::reference(200);
        let a = run_all(&config, 5).unwrap();
        let b = run_all(&config, 5).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }
}
