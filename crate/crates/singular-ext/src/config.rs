//! JSON run configuration: schema, parsing, validation, and construction of
//! the objects a command works on.
//!
//! Complex scalars are written as a plain number when real and as a
//! two-element `[re, im]` array otherwise; both forms are accepted on input
//! everywhere a complex value appears.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::boundary::BoundaryCondition;
use crate::error::{Error, Result};
use crate::model::{GramSpec, SingularFamily};
use crate::spectral::{SpectralOperator, DEFAULT_PAIR_TOL};

/// Version tag shared by config files and reports.
pub const SCHEMA: &str = "singular-ext/1";

/// Complex scalar with the number-or-pair JSON representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEntry(pub Complex64);

impl From<Complex64> for ComplexEntry {
    fn from(z: Complex64) -> Self {
        ComplexEntry(z)
    }
}

impl From<f64> for ComplexEntry {
    fn from(x: f64) -> Self {
        ComplexEntry(Complex64::new(x, 0.0))
    }
}

impl Serialize for ComplexEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            serializer.serialize_f64(self.0.re)
        } else {
            (self.0.re, self.0.im).serialize(serializer)
        }
    }
}

struct ComplexVisitor;

impl<'de> Visitor<'de> for ComplexVisitor {
    type Value = ComplexEntry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a [re, im] pair")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ComplexEntry, E> {
        Ok(ComplexEntry(Complex64::new(v, 0.0)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ComplexEntry, E> {
        Ok(ComplexEntry(Complex64::new(v as f64, 0.0)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ComplexEntry, E> {
        Ok(ComplexEntry(Complex64::new(v as f64, 0.0)))
    }

    fn visit_seq<A: SeqAccess<'de>>(
        self,
        mut seq: A,
    ) -> std::result::Result<ComplexEntry, A::Error> {
        let re: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(0, &"two numbers"))?;
        let im: f64 = seq
            .next_element()?
            .ok_or_else(|| de::Error::invalid_length(1, &"two numbers"))?;
        if seq.next_element::<f64>()?.is_some() {
            return Err(de::Error::invalid_length(3, &"exactly two numbers"));
        }
        Ok(ComplexEntry(Complex64::new(re, im)))
    }
}

impl<'de> Deserialize<'de> for ComplexEntry {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<ComplexEntry, D::Error> {
        deserializer.deserialize_any(ComplexVisitor)
    }
}

/// Spectral data of the unperturbed operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase", deny_unknown_fields)]
pub enum OperatorBlock {
    Power {
        a: f64,
        p: f64,
        #[serde(default)]
        b: f64,
        #[serde(rename = "N")]
        n: usize,
        z1: f64,
    },
    Explicit {
        lambda: Vec<f64>,
        z1: f64,
    },
}

/// The singular family driving the perturbation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyBlock {
    Borderline { m: usize, d: usize },
    Explicit { m: usize, rows: Vec<Vec<ComplexEntry>> },
}

/// How the Gram metric of the singular coordinates is obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "camelCase", deny_unknown_fields)]
pub enum GramBlock {
    Pairing,
    Explicit { matrix: Vec<Vec<ComplexEntry>> },
    AntiTriangular { blocks: Vec<Vec<Vec<ComplexEntry>>> },
}

/// Boundary parameter: a scalar, a Hermitian matrix `T` (graph form
/// `gamma1 = T gamma0`), or a general `(X, Y)` pair. Absent means the
/// reference restriction `gamma0 = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaBlock {
    Scalar(ComplexEntry),
    Matrix { t: Vec<Vec<ComplexEntry>> },
    Pair { x: Vec<Vec<ComplexEntry>>, y: Vec<Vec<ComplexEntry>> },
}

fn default_tolerance() -> f64 {
    DEFAULT_PAIR_TOL
}

/// One run configuration. Field order is the canonical serialization order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema: String,
    pub operator: OperatorBlock,
    pub family: FamilyBlock,
    pub gram: GramBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Everything a command needs, built and validated from one config.
pub struct Instance {
    pub op: SpectralOperator,
    pub family: SingularFamily,
    pub gram: GramSpec,
    pub theta: BoundaryCondition,
    pub tolerance: f64,
}

fn to_matrix(rows: &[Vec<ComplexEntry>], what: &str) -> Result<DMatrix<Complex64>> {
    if rows.is_empty() {
        return Err(Error::Config(format!("{what}: empty matrix")));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Config(format!("{what}: ragged or empty matrix rows")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j].0))
}

impl ModelConfig {
    /// The borderline power-law setup used throughout the test corpus:
    /// `lambda_k = k^2`, anchor `-1`, order `2`, rank `1`, pairing Gram.
    pub fn reference(n: usize) -> ModelConfig {
        ModelConfig {
            schema: SCHEMA.to_string(),
            operator: OperatorBlock::Power { a: 1.0, p: 2.0, b: 0.0, n, z1: -1.0 },
            family: FamilyBlock::Borderline { m: 2, d: 1 },
            gram: GramBlock::Pairing,
            theta: None,
            grid: None,
            tolerance: DEFAULT_PAIR_TOL,
            seed: 0,
        }
    }

    /// Parses a config from raw bytes; the second value is the SHA-256 of
    /// exactly those bytes, quoted in every report.
    pub fn from_bytes(bytes: &[u8]) -> Result<(ModelConfig, String)> {
        let config: ModelConfig = serde_json::from_slice(bytes)?;
        config.validate()?;
        Ok((config, hex_sha256(bytes)))
    }

    pub fn from_path(path: &Path) -> Result<(ModelConfig, String)> {
        let bytes = std::fs::read(path)?;
        Self::from_bytes(&bytes)
    }

    /// Canonical serialization; the hash of a built-in config is the hash of
    /// this form.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialization cannot fail")
    }

    pub fn sha256(&self) -> String {
        hex_sha256(self.canonical_json().as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Config(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            )));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Truncation size of the operator block.
    pub fn n(&self) -> usize {
        match &self.operator {
            OperatorBlock::Power { n, .. } => *n,
            OperatorBlock::Explicit { lambda, .. } => lambda.len(),
        }
    }

    /// Same config with the power-law truncation replaced; explicit operator
    /// and family data are truncated to the prefix.
    pub fn with_truncation(&self, n: usize) -> ModelConfig {
        let mut out = self.clone();
        match &mut out.operator {
            OperatorBlock::Power { n: slot, .. } => *slot = n,
            OperatorBlock::Explicit { lambda, .. } => lambda.truncate(n),
        }
        if let FamilyBlock::Explicit { rows, .. } = &mut out.family {
            for row in rows {
                row.truncate(n);
            }
        }
        out
    }

    pub fn build(&self) -> Result<Instance> {
        self.validate()?;
        let op = match &self.operator {
            OperatorBlock::Power { a, p, b, n, z1 } => SpectralOperator::power(*a, *p, *b, *n, *z1)?,
            OperatorBlock::Explicit { lambda, z1 } => {
                SpectralOperator::explicit(lambda.clone(), *z1)?
            }
        };
        let family = match &self.family {
            FamilyBlock::Borderline { m, d } => SingularFamily::borderline(&op, *m, *d)?,
            FamilyBlock::Explicit { m, rows } => {
                let rows: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|r| r.iter().map(|e| e.0).collect())
                    .collect();
                SingularFamily::explicit(&op, *m, rows)?
            }
        };
        let gram = match &self.gram {
            GramBlock::Pairing => GramSpec::pairing(&family, &op, self.tolerance)?,
            GramBlock::Explicit { matrix } => {
                let matrix = to_matrix(matrix, "gram.matrix")?;
                GramSpec::explicit(matrix, family.m(), family.d())?
            }
            GramBlock::AntiTriangular { blocks } => {
                let blocks: Vec<DMatrix<Complex64>> = blocks
                    .iter()
                    .map(|b| to_matrix(b, "gram.blocks"))
                    .collect::<Result<_>>()?;
                GramSpec::anti_triangular(family.m(), family.d(), &blocks)?
            }
        };
        let d = family.d();
        let theta = match &self.theta {
            None => BoundaryCondition::fixed_reference(d),
            Some(ThetaBlock::Scalar(s)) => {
                BoundaryCondition::from_matrix(DMatrix::from_diagonal_element(d, d, s.0))?
            }
            Some(ThetaBlock::Matrix { t }) => {
                BoundaryCondition::from_matrix(to_matrix(t, "theta.t")?)?
            }
            Some(ThetaBlock::Pair { x, y }) => {
                BoundaryCondition::new(to_matrix(x, "theta.x")?, to_matrix(y, "theta.y")?)?
            }
        };
        if theta.dim() != d {
            return Err(Error::Config(format!(
                "boundary parameter is {}x{} but the family has rank {d}",
                theta.dim(),
                theta.dim()
            )));
        }
        Ok(Instance { op, family, gram, theta, tolerance: self.tolerance })
    }
}

fn hex_sha256(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Parses a sampling-grid description. Three forms:
/// `im:T0:RATIO:COUNT` (geometric ladder `i t0 ratio^j` above the origin),
/// `shift:X0:T0:RATIO:COUNT` (the same ladder above `x0`), and
/// `list:RE,IM;RE,IM;...` (explicit points).
pub fn parse_grid(spec: &str) -> Result<Vec<Complex64>> {
    const MAX_POINTS: usize = 4096;
    let err = |msg: &str| Error::Config(format!("grid spec {spec:?}: {msg}"));
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| err("expected im:, shift:, or list: prefix"))?;
    let parse_f = |s: &str| s.trim().parse::<f64>().map_err(|_| err("bad number"));
    let parse_n = |s: &str| s.trim().parse::<usize>().map_err(|_| err("bad count"));
    let ladder = |x0: f64, t0: f64, ratio: f64, count: usize| -> Result<Vec<Complex64>> {
        if t0 == 0.0 || ratio <= 0.0 {
            return Err(err("ladder needs t0 != 0 and ratio > 0"));
        }
        if count == 0 || count > MAX_POINTS {
            return Err(err("count out of range"));
        }
        Ok((0..count)
            .map(|j| Complex64::new(x0, t0 * ratio.powi(j as i32)))
            .collect())
    };
    match kind {
        "im" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(err("expected im:T0:RATIO:COUNT"));
            }
            ladder(0.0, parse_f(parts[0])?, parse_f(parts[1])?, parse_n(parts[2])?)
        }
        "shift" => {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 4 {
                return Err(err("expected shift:X0:T0:RATIO:COUNT"));
            }
            ladder(
                parse_f(parts[0])?,
                parse_f(parts[1])?,
                parse_f(parts[2])?,
                parse_n(parts[3])?,
            )
        }
        "list" => {
            let mut points = Vec::new();
            for chunk in rest.split(';') {
                let (re, im) = chunk
                    .split_once(',')
                    .ok_or_else(|| err("list entries are RE,IM pairs"))?;
                points.push(Complex64::new(parse_f(re)?, parse_f(im)?));
            }
            if points.is_empty() || points.len() > MAX_POINTS {
                return Err(err("list size out of range"));
            }
            Ok(points)
        }
        _ => Err(err("unknown grid kind")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_entries_accept_numbers_and_pairs() {
        let v: Vec<ComplexEntry> = serde_json::from_str("[1, -2.5, [0.5, -0.25]]").unwrap();
        assert_eq!(v[0].0, Complex64::new(1.0, 0.0));
        assert_eq!(v[1].0, Complex64::new(-2.5, 0.0));
        assert_eq!(v[2].0, Complex64::new(0.5, -0.25));
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0,-2.5,[0.5,-0.25]]");
        assert!(serde_json::from_str::<ComplexEntry>("[1, 2, 3]").is_err());
    }

    #[test]
    fn reference_config_round_trips_and_builds() {
        let config = ModelConfig::reference(200);
        let json = config.canonical_json();
        let (parsed, hash) = ModelConfig::from_bytes(json.as_bytes()).unwrap();
        assert_eq!(hash, config.sha256());
        assert_eq!(parsed.n(), 200);
        let instance = parsed.build().unwrap();
        assert_eq!(instance.op.len(), 200);
        assert_eq!(instance.family.m(), 2);
        assert_eq!(instance.gram.layout().dim(), 2);
        assert_eq!(instance.theta.dim(), 1);
    }

    #[test]
    fn explicit_blocks_build_and_validate() {
        let json = r#"{
            "schema": "singular-ext/1",
            "operator": {"law": "explicit", "lambda": [1.0, 4.0, 9.0, 16.0], "z1": -2.0},
            "family": {"law": "explicit", "m": 1, "rows": [[1, [0, 1], 0.5, 0.25]]},
            "gram": {"mode": "explicit", "matrix": [[2.0]]},
            "theta": 0.5,
            "tolerance": 1e-8
        }"#;
        let (config, _) = ModelConfig::from_bytes(json.as_bytes()).unwrap();
        let instance = config.build().unwrap();
        assert_eq!(instance.op.len(), 4);
        assert_eq!(instance.family.d(), 1);
        assert_eq!(instance.gram.matrix()[(0, 0)], Complex64::new(2.0, 0.0));
        let residual = instance.theta.defining_residual(
            &nalgebra::DVector::from_element(1, Complex64::new(1.0, 0.0)),
            &nalgebra::DVector::from_element(1, Complex64::new(0.5, 0.0)),
        );
        assert!(residual < 1e-14);
    }

    #[test]
    fn schema_and_shape_errors_are_config_errors() {
        let bad_schema = r#"{"schema": "other/9", "operator": {"law": "power", "a": 1, "p": 2, "N": 10, "z1": -1}, "family": {"law": "borderline", "m": 2, "d": 1}, "gram": {"mode": "pairing"}}"#;
        assert!(matches!(
            ModelConfig::from_bytes(bad_schema.as_bytes()),
            Err(Error::Config(_))
        ));
        let ragged = r#"{"schema": "singular-ext/1", "operator": {"law": "power", "a": 1, "p": 2, "N": 10, "z1": -1}, "family": {"law": "borderline", "m": 1, "d": 1}, "gram": {"mode": "explicit", "matrix": [[1, 2], [3]]}}"#;
        let (config, _) = ModelConfig::from_bytes(ragged.as_bytes()).unwrap();
        assert!(matches!(config.build(), Err(Error::Config(_))));
        let unknown = r#"{"schema": "singular-ext/1", "operator": {"law": "power", "a": 1, "p": 2, "N": 10, "z1": -1}, "family": {"law": "borderline", "m": 1, "d": 1}, "gram": {"mode": "pairing"}, "extra": 1}"#;
        assert!(matches!(
            ModelConfig::from_bytes(unknown.as_bytes()),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn grid_specs_parse_into_points() {
        let im = parse_grid("im:0.5:2:3").unwrap();
        assert_eq!(im, vec![
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 2.0),
        ]);
        let shifted = parse_grid("shift:-1:0.25:2:2").unwrap();
        assert_eq!(shifted[1], Complex64::new(-1.0, 0.5));
        let listed = parse_grid("list:0,1;2,-0.5").unwrap();
        assert_eq!(listed, vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, -0.5)]);
        assert!(parse_grid("im:0:2:3").is_err());
        assert!(parse_grid("ladder:1:2:3").is_err());
        assert!(parse_grid("list:").is_err());
    }

    #[test]
    fn truncation_override_rewrites_the_operator_block() {
        let config = ModelConfig::reference(2000).with_truncation(1000);
        assert_eq!(config.n(), 1000);
        let explicit = ModelConfig {
            operator: OperatorBlock::Explicit { lambda: vec![1.0, 2.0, 3.0], z1: 0.0 },
            ..ModelConfig::reference(10)
        };
        assert_eq!(explicit.with_truncation(2).n(), 2);
    }
}
