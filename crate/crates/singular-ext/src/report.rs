//! Machine-readable run reports. Every command emits one `RunReport`:
//! schema-versioned JSON whose field order is fixed by the struct layout, so
//! the same configuration and seed always produce byte-identical output.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::GramDiagnostics;
use crate::config::{ComplexEntry, SCHEMA};
use crate::nevanlinna::PickAudit;
use crate::relation_model::SimplicityReport;

/// Dense complex matrix in row-major number-or-pair form.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexMatrix(pub Vec<Vec<ComplexEntry>>);

impl From<&DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: &DMatrix<Complex64>) -> Self {
        ComplexMatrix(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| ComplexEntry(m[(i, j)])).collect())
                .collect(),
        )
    }
}

pub fn complex_row(v: &DVector<Complex64>) -> Vec<ComplexEntry> {
    v.iter().map(|&x| ComplexEntry(x)).collect()
}

/// Where the numbers came from: config identity, truncation, seed, model.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub config_sha256: String,
    pub n: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub tolerance: f64,
}

/// One Weyl-matrix grid sample. A point too close to a pole carries its
/// warning in `status` and no values.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeylSample {
    pub z: ComplexEntry,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeylBlock {
    pub samples: Vec<WeylSample>,
    /// Kernel audit over the upper-half-plane subset of the grid; absent when
    /// the grid has no such points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<PickAudit>,
}

/// Reduced top-order data of the relation picture.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReducedBlock {
    pub delta: ComplexMatrix,
    pub delta_hat: ComplexMatrix,
    pub spectrum_general: Vec<ComplexEntry>,
    /// Spectrum through the Hermitian similarity; needs the top-order block
    /// positive definite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum_symmetrized: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PickBlock {
    pub suites: Vec<PickAudit>,
    pub max_negative_squares: usize,
    pub min_strictness: f64,
    pub max_symmetry_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplicity: Option<SimplicityReport>,
}

/// Output of one resolvent application, coefficients inline.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResolventBlock {
    pub z: ComplexEntry,
    pub compressed: bool,
    pub regular: Vec<ComplexEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<ComplexEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<ComplexEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_perp: Option<Vec<ComplexEntry>>,
    /// Relative residual of the defining equation, recomputed independently.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

/// One verification suite outcome.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    /// Worst relative residual observed by the suite.
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyBlock {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// The envelope every command writes to stdout.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<GramDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pick: Option<PickBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolvent: Option<ResolventBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
}

impl RunReport {
    pub fn new(command: &str, provenance: Provenance) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            provenance,
            conditions: None,
            reduced: None,
            weyl: None,
            pick: None,
            resolvent: None,
            verify: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}
