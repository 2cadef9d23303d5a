//! Structural conditions on the Gram matrix and the coordinate action.
//!
//! The singular coordinates carry a fixed linear action: each member's
//! `m x m` block is the Jordan-type matrix `z1 I + (upper shift)`, reflecting
//! how `(L - z1)` moves the singular basis down one regularization order. A
//! Gram matrix is compatible with the operator picture when the metrized
//! action `G M` is Hermitian; that is equivalent to three entrywise condition
//! families checked here (`gram_action_commutation`). The weaker relation
//! picture only needs symmetry of one adjacent pair of entries
//! (`adjacent_pair_symmetry`) together with positivity of the top-order block.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{GramSpec, Layout};

/// Coordinate action `M_d`: block diagonal over family members, each block
/// `z1 I + (upper shift)` of size `m x m`.
pub fn coordinate_action(layout: Layout, z1: f64) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(layout.dim(), layout.dim(), Complex64::new(0.0, 0.0));
    for sigma in 0..layout.d {
        for j in 1..=layout.m {
            m[(layout.flat(sigma, j), layout.flat(sigma, j))] = Complex64::new(z1, 0.0);
            if j < layout.m {
                m[(layout.flat(sigma, j), layout.flat(sigma, j + 1))] = Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// Applies the coordinate action without materializing the matrix.
pub fn apply_coordinate_action(
    layout: Layout,
    z1: f64,
    v: &DVector<Complex64>,
) -> DVector<Complex64> {
    let mut out = DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0));
    for sigma in 0..layout.d {
        for j in 1..=layout.m {
            let mut val = Complex64::new(z1, 0.0) * v[layout.flat(sigma, j)];
            if j < layout.m {
                val += v[layout.flat(sigma, j + 1)];
            }
            out[layout.flat(sigma, j)] = val;
        }
    }
    out
}

/// Resolvent `(M_d - z)^{-1}` in closed form: within each member block,
/// `[(M - z)^{-1}]_{j j'} = -(z - z1)^{-(j' - j + 1)}` for `j' >= j`, zero
/// below the diagonal. The only pole is `z = z1`.
pub fn coordinate_resolvent(layout: Layout, z1: f64, z: Complex64) -> Result<DMatrix<Complex64>> {
    let w = z - Complex64::new(z1, 0.0);
    if w.norm() <= 1e-12 * (1.0 + z.norm()) {
        return Err(Error::Pole { z, what: "coordinate action resolvent at the anchor".into() });
    }
    let mut m = DMatrix::from_element(layout.dim(), layout.dim(), Complex64::new(0.0, 0.0));
    for sigma in 0..layout.d {
        for j in 1..=layout.m {
            for jp in j..=layout.m {
                m[(layout.flat(sigma, j), layout.flat(sigma, jp))] =
                    -w.powi(-((jp - j + 1) as i32));
            }
        }
    }
    Ok(m)
}

/// Metrized action `G M_d`.
pub fn gram_action(gram: &GramSpec, z1: f64) -> DMatrix<Complex64> {
    gram.matrix() * coordinate_action(gram.layout(), z1)
}

/// Adjoint-side product `M_d^H G`, computed directly (not by transposing
/// `gram_action`): the two agree exactly when `G M_d` is Hermitian.
pub fn gram_action_adjoint(gram: &GramSpec, z1: f64) -> DMatrix<Complex64> {
    coordinate_action(gram.layout(), z1).adjoint() * gram.matrix()
}

/// Row-shifted Gram: entries `[G]_{(sigma, j-1), (sigma', j')}` for `j >= 2`,
/// zero in the `j = 1` rows. Satisfies `M_d^H G = z1 G + (row-shifted G)`.
pub fn row_shifted_gram(gram: &GramSpec) -> DMatrix<Complex64> {
    let layout = gram.layout();
    DMatrix::from_fn(layout.dim(), layout.dim(), |row, col| {
        let sigma = row / layout.m;
        let j = row % layout.m + 1;
        if j >= 2 {
            gram.matrix()[(layout.flat(sigma, j - 1), col)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Produces `xi'` such that `M_d^H G xi = G xi'`; exists for every `xi`
/// because `G` is invertible, and equals `(z1 I + G^{-1} (row-shifted G)) xi`.
pub fn solve_compatibility(
    gram: &GramSpec,
    z1: f64,
    xi: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    let shifted = row_shifted_gram(gram) * xi;
    let correction = gram.solve(&shifted)?;
    Ok(xi * Complex64::new(z1, 0.0) + correction)
}

/// One violated entrywise condition, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionViolation {
    /// Which condition family and which entry, e.g. `zero(sigma=0,j=1,sigma'=0,j'=1)`.
    pub what: String,
    pub magnitude: f64,
}

/// Result of the operator-picture compatibility check.
#[derive(Debug, Clone, Serialize)]
pub struct CommutationReport {
    pub satisfied: bool,
    /// Largest violation magnitude, relative to the Gram scale.
    pub worst: f64,
    pub violations: Vec<ConditionViolation>,
    /// Hermitian defect of `G M_d`, relative to the Gram scale; vanishes
    /// exactly when the entrywise conditions hold.
    pub action_hermitian_defect: f64,
}

fn gram_scale(gram: &GramSpec) -> f64 {
    gram.matrix().iter().map(|e| e.norm()).fold(0.0, f64::max).max(1.0)
}

/// Checks the three entrywise families equivalent to `G M_d` being Hermitian:
/// swap symmetry in the regularization orders, vanishing above the
/// anti-diagonal, and the Hankel step along the top order. All are vacuous
/// for `m = 1`.
pub fn gram_action_commutation(gram: &GramSpec, z1: f64, tol: f64) -> CommutationReport {
    let layout = gram.layout();
    let scale = gram_scale(gram);
    let mut violations = Vec::new();
    let mut worst = 0.0_f64;
    let mut push = |what: String, magnitude: f64| {
        if magnitude > tol * scale {
            violations.push(ConditionViolation { what, magnitude });
        }
        worst = worst.max(magnitude);
    };
    for sigma in 0..layout.d {
        for sp in 0..layout.d {
            for j in 1..=layout.m {
                for jp in 1..=layout.m {
                    if j < jp {
                        let diff = (gram.entry(sigma, j, sp, jp)
                            - gram.entry(sigma, jp, sp, j))
                        .norm();
                        push(format!("swap(sigma={sigma},j={j},sigma'={sp},j'={jp})"), diff);
                    }
                    if j < layout.m && jp <= layout.m - j {
                        let mag = gram.entry(sigma, j, sp, jp).norm();
                        push(format!("zero(sigma={sigma},j={j},sigma'={sp},j'={jp})"), mag);
                    }
                }
                if j < layout.m && layout.m >= 2 {
                    let diff = (gram.entry(sigma, j, sp, layout.m)
                        - gram.entry(sigma, j + 1, sp, layout.m - 1))
                    .norm();
                    push(format!("hankel(sigma={sigma},j={j},sigma'={sp})"), diff);
                }
            }
        }
    }
    let ga = gram_action(gram, z1);
    let defect = (&ga - ga.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
    CommutationReport {
        satisfied: violations.is_empty(),
        worst: worst / scale,
        violations,
        action_hermitian_defect: defect / scale,
    }
}

/// Result of the relation-picture compatibility check.
#[derive(Debug, Clone, Serialize)]
pub struct PairSymmetryReport {
    pub satisfied: bool,
    pub worst: f64,
    pub violations: Vec<ConditionViolation>,
}

/// Checks `[G]_{(sigma, m-1), (sigma', m)} = [G]_{(sigma, m), (sigma', m-1)}`
/// for all member pairs; vacuous for `m = 1`.
pub fn adjacent_pair_symmetry(gram: &GramSpec, tol: f64) -> PairSymmetryReport {
    let layout = gram.layout();
    let scale = gram_scale(gram);
    let mut violations = Vec::new();
    let mut worst = 0.0_f64;
    if layout.m >= 2 {
        for sigma in 0..layout.d {
            for sp in 0..layout.d {
                let diff = (gram.entry(sigma, layout.m - 1, sp, layout.m)
                    - gram.entry(sigma, layout.m, sp, layout.m - 1))
                .norm();
                if diff > tol * scale {
                    violations.push(ConditionViolation {
                        what: format!("pair(sigma={sigma},sigma'={sp})"),
                        magnitude: diff,
                    });
                }
                worst = worst.max(diff);
            }
        }
    }
    PairSymmetryReport { satisfied: violations.is_empty(), worst: worst / scale, violations }
}

/// Eigenvalues of the top-order block, ascending; the block is Hermitian.
pub fn min_block_eigenvalues(gram: &GramSpec) -> Vec<f64> {
    let block = gram.min_block();
    let herm = (&block + block.adjoint()).scale(0.5);
    let mut eig: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    eig
}

/// Full diagnostic over one Gram matrix. Field names are wire contract.
#[derive(Debug, Clone, Serialize)]
pub struct GramDiagnostics {
    pub hermitian: bool,
    #[serde(rename = "hermitianDefect")]
    pub hermitian_defect: f64,
    pub invertible: bool,
    #[serde(rename = "conditionNumber")]
    pub condition_number: f64,
    pub gacomm: bool,
    #[serde(rename = "gacommWorst")]
    pub gacomm_worst: f64,
    pub a2: bool,
    #[serde(rename = "a2Worst")]
    pub a2_worst: f64,
    #[serde(rename = "minPositive")]
    pub min_positive: bool,
    #[serde(rename = "minBlockEigenvalues")]
    pub min_block_eigenvalues: Vec<f64>,
    #[serde(rename = "operatorModelReady")]
    pub operator_model_ready: bool,
    #[serde(rename = "relationModelReady")]
    pub relation_model_ready: bool,
}

/// Default relative tolerance for structural condition checks.
pub const CONDITION_TOL: f64 = 1e-10;

/// Runs every structural check on one Gram matrix.
pub fn diagnose(gram: &GramSpec, z1: f64, tol: f64) -> GramDiagnostics {
    let scale = gram_scale(gram);
    let defect = (gram.matrix() - gram.matrix().adjoint())
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
        / scale;
    let hermitian = defect <= tol;
    let invertible = gram.is_invertible();
    let comm = gram_action_commutation(gram, z1, tol);
    let pair = adjacent_pair_symmetry(gram, tol);
    let eig = min_block_eigenvalues(gram);
    let eig_scale = eig.iter().map(|e| e.abs()).fold(0.0, f64::max).max(1e-300);
    let min_positive = eig.first().map(|&e| e > 1e-12 * eig_scale).unwrap_or(false);
    GramDiagnostics {
        hermitian,
        hermitian_defect: defect,
        invertible,
        condition_number: gram.condition_number(),
        gacomm: comm.satisfied,
        gacomm_worst: comm.worst,
        a2: pair.satisfied,
        a2_worst: pair.worst,
        min_positive,
        min_block_eigenvalues: eig,
        operator_model_ready: hermitian && invertible && comm.satisfied,
        relation_model_ready: hermitian && invertible && pair.satisfied && min_positive,
    }
}
