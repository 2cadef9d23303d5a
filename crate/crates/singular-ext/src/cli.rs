//! Command-line front end. Every verb prints one JSON run report to stdout;
//! `--out` additionally writes the verb's data file (CSV for grids, JSON for
//! vectors and reports). Exit codes: 0 success, 2 configuration, 3 condition
//! failure, 4 numerical failure, 5 invariant-suite failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use crate::conditions::{diagnose, GramDiagnostics, CONDITION_TOL};
use crate::config::{parse_grid, ComplexEntry, Instance, ModelConfig};
use crate::error::{Error, Result};
use crate::model::{majorant_norm, ModelVector};
use crate::nevanlinna::{audit, default_point_suites};
use crate::operator_model::OperatorModel;
use crate::relation_model::{
    default_simplicity_points, RelationModel, SIMPLICITY_COEFFS, SIMPLICITY_THRESHOLD,
};
use crate::report::{
    complex_row, ComplexMatrix, PickBlock, Provenance, ReducedBlock, ResolventBlock, RunReport,
    WeylBlock, WeylSample,
};
use crate::spectral::ScaleVector;
use crate::verify;

const DEFAULT_TRUNCATION: usize = 2000;
const DEFAULT_WEYL_GRID: &str = "im:0.1:1.6:12";

#[derive(Parser)]
#[command(name = "singular-ext", version, about = "Finite-rank singular perturbation models: diagnostics, Weyl functions, resolvents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diagnose the Gram matrix and report which pictures are admissible
    Check(Common),
    /// Evaluate the Weyl function on a grid, with a kernel audit
    Weyl(Common),
    /// Apply the resolvent at the first grid point to an input vector
    Resolvent(ResolventArgs),
    /// Census of kernel negativity over seeded point suites
    Pick(Common),
    /// Run every verification suite and report residuals
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// JSON model configuration; omitted = built-in reference setup
    #[arg(long)]
    config: Option<PathBuf>,
    /// Picture: `a` operator model, `b` relation model
    #[arg(long, value_enum, default_value_t = Model::B)]
    model: Model,
    /// Grid spec: im:T0:RATIO:COUNT, shift:X0:T0:RATIO:COUNT, or list:RE,IM;...
    #[arg(long)]
    grid: Option<String>,
    /// Seed override for randomized sweeps
    #[arg(long)]
    seed: Option<u64>,
    /// Write the verb's data file here as well
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResolventArgs {
    #[command(flatten)]
    common: Common,
    /// JSON input vector: a coefficient array, or {"regular": [...], "singular": [...]}
    input: Option<PathBuf>,
    /// Restrict to the regular subspace (input must be a plain array)
    #[arg(long)]
    compressed: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Model {
    A,
    B,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::A => "a",
            Model::B => "b",
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Check(common) => cmd_check(&Ctx::new(&common)?, &common),
        Command::Weyl(common) => cmd_weyl(&Ctx::new(&common)?, &common),
        Command::Resolvent(args) => cmd_resolvent(&Ctx::new(&args.common)?, &args),
        Command::Pick(common) => cmd_pick(&Ctx::new(&common)?, &common),
        Command::Verify(common) => cmd_verify(&Ctx::new(&common)?, &common),
    }
}

/// Everything a verb needs, resolved once.
struct Ctx {
    config: ModelConfig,
    hash: String,
    instance: Instance,
    diag: GramDiagnostics,
    seed: u64,
    model: Model,
}

impl Ctx {
    fn new(common: &Common) -> Result<Ctx> {
        let (config, hash) = match &common.config {
            Some(path) => ModelConfig::from_path(path)?,
            None => {
                let config = ModelConfig::reference(DEFAULT_TRUNCATION);
                let hash = config.sha256();
                (config, hash)
            }
        };
        let instance = config.build()?;
        let diag = diagnose(&instance.gram, instance.op.z1(), CONDITION_TOL);
        let seed = common.seed.unwrap_or(config.seed);
        Ok(Ctx {
            config,
            hash,
            instance,
            diag,
            seed,
            model: common.model,
        })
    }

    fn provenance(&self, with_model: bool) -> Provenance {
        Provenance {
            config_sha256: self.hash.clone(),
            n: self.config.n(),
            seed: self.seed,
            model: with_model.then(|| self.model.name().to_string()),
            tolerance: self.config.tolerance,
        }
    }

    /// The selected picture's admissibility gate.
    fn require_ready(&self) -> Result<()> {
        match self.model {
            Model::A if !self.diag.operator_model_ready => Err(Error::ConditionFailure(
                "the operator picture needs a Hermitian invertible Gram commuting with the \
                 coordinate action; run `check` for diagnostics"
                    .into(),
            )),
            Model::B if !self.diag.relation_model_ready => Err(Error::ConditionFailure(
                "the relation picture needs adjacent-pair symmetry and a positive definite \
                 top-order block; run `check` for diagnostics"
                    .into(),
            )),
            _ => Ok(()),
        }
    }

    fn grid(&self, common: &Common, fallback: &str) -> Result<Vec<Complex64>> {
        let spec = common
            .grid
            .as_deref()
            .or(self.config.grid.as_deref())
            .unwrap_or(fallback);
        parse_grid(spec)
    }

    fn relation(&self) -> Result<RelationModel<'_>> {
        RelationModel::new(
            &self.instance.op,
            &self.instance.family,
            &self.instance.gram,
            self.instance.tolerance,
        )
    }

    fn operator(&self) -> Result<OperatorModel<'_>> {
        OperatorModel::new(
            &self.instance.op,
            &self.instance.family,
            &self.instance.gram,
            self.instance.tolerance,
        )
    }
}

fn emit(report: &RunReport) {
    print!("{}", report.to_json());
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn cmd_check(ctx: &Ctx, common: &Common) -> Result<()> {
    let mut report = RunReport::new("check", ctx.provenance(true));
    report.conditions = Some(ctx.diag.clone());
    if ctx.diag.invertible {
        if let Ok(rm) = ctx.relation() {
            if let Ok(delta_hat) = rm.delta_hat() {
                let spectrum_general = rm.delta_hat_eigenvalues_general()?;
                let spectrum_symmetrized = if ctx.diag.min_positive {
                    Some(rm.delta_hat_spectrum_symmetrized()?)
                } else {
                    None
                };
                report.reduced = Some(ReducedBlock {
                    delta: ComplexMatrix::from(&rm.delta()),
                    delta_hat: ComplexMatrix::from(&delta_hat),
                    spectrum_general: spectrum_general.into_iter().map(ComplexEntry).collect(),
                    spectrum_symmetrized,
                });
            }
        }
    }
    emit(&report);
    if let Some(path) = &common.out {
        write_out(path, &report.to_json())?;
    }
    ctx.require_ready()
}

fn cmd_weyl(ctx: &Ctx, common: &Common) -> Result<()> {
    ctx.require_ready()?;
    let grid = ctx.grid(common, DEFAULT_WEYL_GRID)?;
    let inst = &ctx.instance;
    let om;
    let rm;
    let singular_part: &dyn Fn(Complex64) -> Result<DMatrix<Complex64>> = match ctx.model {
        Model::A => {
            om = ctx.operator()?;
            &move |z| om.weyl_r(z)
        }
        Model::B => {
            rm = ctx.relation()?;
            &move |z| rm.weyl_singular(z)
        }
    };

    let mut samples = Vec::with_capacity(grid.len());
    let mut csv = String::from("z_re,z_im");
    let d = inst.family.d();
    for part in ["q", "r", "m"] {
        for i in 0..d {
            for j in 0..d {
                csv.push_str(&format!(",{part}_{i}_{j}_re,{part}_{i}_{j}_im"));
            }
        }
    }
    csv.push('\n');
    for &z in &grid {
        let evaluated = inst
            .family
            .regular_weyl(&inst.op, z, inst.tolerance)
            .and_then(|(q, tail)| Ok((q, tail, singular_part(z)?)));
        match evaluated {
            Ok((q, tail, r)) => {
                let m = &q + &r;
                csv.push_str(&format!("{},{}", z.re, z.im));
                for matrix in [&q, &r, &m] {
                    for i in 0..d {
                        for j in 0..d {
                            csv.push_str(&format!(",{},{}", matrix[(i, j)].re, matrix[(i, j)].im));
                        }
                    }
                }
                csv.push('\n');
                samples.push(WeylSample {
                    z: ComplexEntry(z),
                    status: "ok".into(),
                    q: Some(ComplexMatrix::from(&q)),
                    singular: Some(ComplexMatrix::from(&r)),
                    m: Some(ComplexMatrix::from(&m)),
                    tail_bound: tail.tail_bound,
                });
            }
            Err(e) => samples.push(WeylSample {
                z: ComplexEntry(z),
                status: format!("skipped: {e}"),
                q: None,
                singular: None,
                m: None,
                tail_bound: None,
            }),
        }
    }

    let upper: Vec<Complex64> = grid.iter().copied().filter(|z| z.im > 0.0).collect();
    let kernel_audit = if upper.len() >= 2 {
        let q_eval = |z: Complex64| -> Result<DMatrix<Complex64>> {
            let (q, _) = inst.family.regular_weyl(&inst.op, z, inst.tolerance)?;
            Ok(&q + &singular_part(z)?)
        };
        audit(&upper, q_eval).ok()
    } else {
        None
    };

    let mut report = RunReport::new("weyl", ctx.provenance(true));
    report.weyl = Some(WeylBlock {
        samples,
        audit: kernel_audit,
    });
    emit(&report);
    if let Some(path) = &common.out {
        write_out(path, &csv)?;
    }
    Ok(())
}

/// Input vector file: a plain coefficient array lives in the regular
/// subspace; the split form carries model-space coordinates as well.
#[derive(Deserialize)]
#[serde(untagged)]
enum InputVector {
    Plain(Vec<ComplexEntry>),
    Split {
        regular: Vec<ComplexEntry>,
        #[serde(default)]
        singular: Vec<ComplexEntry>,
    },
}

fn read_input(ctx: &Ctx, path: Option<&Path>) -> Result<ModelVector> {
    let inst = &ctx.instance;
    let layout = inst.gram.layout();
    let n = inst.op.len();
    let (raw_regular, raw_singular) = match path {
        None => {
            return ModelVector::new(
                inst.op.basis_vector(0, layout.m as i32),
                DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0)),
                layout,
            )
        }
        Some(path) => {
            let bytes = std::fs::read(path)?;
            match serde_json::from_slice::<InputVector>(&bytes)? {
                InputVector::Plain(regular) => (regular, Vec::new()),
                InputVector::Split { regular, singular } => (regular, singular),
            }
        }
    };
    if raw_regular.len() > n {
        return Err(Error::Config(format!(
            "input vector has {} coefficients, the truncation holds {n}",
            raw_regular.len()
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (slot, entry) in coeffs.iter_mut().zip(&raw_regular) {
        *slot = entry.0;
    }
    let singular = if raw_singular.is_empty() {
        DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0))
    } else if raw_singular.len() == layout.dim() {
        DVector::from_iterator(layout.dim(), raw_singular.iter().map(|e| e.0))
    } else {
        return Err(Error::Config(format!(
            "singular part has {} coordinates, the model space holds {}",
            raw_singular.len(),
            layout.dim()
        )));
    };
    ModelVector::new(inst.op.vector(coeffs, layout.m as i32)?, singular, layout)
}

fn scale_row(v: &ScaleVector) -> Vec<ComplexEntry> {
    v.coeffs().iter().map(|&c| ComplexEntry(c)).collect()
}

fn cmd_resolvent(ctx: &Ctx, args: &ResolventArgs) -> Result<()> {
    ctx.require_ready()?;
    let common = &args.common;
    let inst = &ctx.instance;
    let grid = ctx.grid(common, "list:0,1")?;
    let z = grid[0];
    let theta = &inst.theta;
    let input = read_input(ctx, args.input.as_deref())?;
    if args.compressed && input.singular.norm() > 0.0 {
        return Err(Error::Config(
            "the compressed resolvent acts on the regular subspace only; \
             pass a plain coefficient array"
                .into(),
        ));
    }

    let block = if args.compressed {
        let (compressed, full_regular, tail) = match ctx.model {
            Model::A => {
                let om = ctx.operator()?;
                let (comp, tail) = om.compressed_resolvent(z, theta, &input.regular, None)?;
                let full = om.value(&om.resolvent_boundary(z, theta, &input)?)?;
                (comp, full.regular, tail)
            }
            Model::B => {
                let rm = ctx.relation()?;
                let (comp, tail) = rm.compressed_resolvent(z, theta, &input.regular, None)?;
                let full = rm.left(&rm.resolvent_boundary(z, theta, &input)?)?;
                (comp, full.regular, tail)
            }
        };
        let m = inst.family.m() as i32;
        let residual = inst.op.norm(m, &compressed.sub(&full_regular)?)?
            / inst.op.norm(m, &compressed)?.max(1e-12);
        ResolventBlock {
            z: ComplexEntry(z),
            compressed: true,
            regular: scale_row(&compressed),
            coords: None,
            chi: None,
            k_perp: None,
            residual: Some(residual),
            tail_bound: tail.tail_bound,
        }
    } else {
        match ctx.model {
            Model::A => {
                let om = ctx.operator()?;
                let el = om.resolvent_boundary(z, theta, &input)?;
                let value = om.value(&el)?;
                let action = om.max_action(&el)?;
                let scaled = ModelVector::new(
                    value.regular.scale(z),
                    &value.singular * z,
                    inst.gram.layout(),
                )?;
                let defect = action.sub(&scaled)?.sub(&input)?;
                let denom = majorant_norm(&inst.op, &inst.gram, &input)?.max(1e-12);
                let mut residual = majorant_norm(&inst.op, &inst.gram, &defect)? / denom;
                let (g1, _) = om.gamma1(&el)?;
                residual = residual.max(theta.defining_residual(&om.gamma0(&el), &g1));
                ResolventBlock {
                    z: ComplexEntry(z),
                    compressed: false,
                    regular: scale_row(&value.regular),
                    coords: Some(complex_row(&value.singular)),
                    chi: None,
                    k_perp: None,
                    residual: Some(residual),
                    tail_bound: None,
                }
            }
            Model::B => {
                let rm = ctx.relation()?;
                let el = rm.resolvent_boundary(z, theta, &input)?;
                let left = rm.left(&el)?;
                let right = rm.right(&el)?;
                let scaled = ModelVector::new(
                    left.regular.scale(z),
                    &left.singular * z,
                    inst.gram.layout(),
                )?;
                let defect = right.sub(&scaled)?.sub(&input)?;
                let denom = majorant_norm(&inst.op, &inst.gram, &input)?.max(1e-12);
                let mut residual = majorant_norm(&inst.op, &inst.gram, &defect)? / denom;
                residual = residual.max(rm.perp_residual(&el) / denom);
                let (g1, _) = rm.gamma1(&el)?;
                residual = residual.max(theta.defining_residual(&rm.gamma0(&el), &g1));
                ResolventBlock {
                    z: ComplexEntry(z),
                    compressed: false,
                    regular: scale_row(&left.regular),
                    coords: Some(complex_row(&left.singular)),
                    chi: Some(complex_row(&el.chi)),
                    k_perp: Some(complex_row(&el.k_perp)),
                    residual: Some(residual),
                    tail_bound: None,
                }
            }
        }
    };

    let mut report = RunReport::new("resolvent", ctx.provenance(true));
    report.resolvent = Some(block);
    emit(&report);
    if let Some(path) = &common.out {
        let vector_json = serde_json::to_string_pretty(
            report.resolvent.as_ref().expect("block was just attached"),
        )?;
        write_out(path, &format!("{vector_json}\n"))?;
    }
    Ok(())
}

fn cmd_pick(ctx: &Ctx, common: &Common) -> Result<()> {
    ctx.require_ready()?;
    let inst = &ctx.instance;
    let suites = default_point_suites(inst.op.z1(), ctx.seed, verify::KERNEL_SUITES);
    let om;
    let rm;
    let eval: &dyn Fn(Complex64) -> Result<DMatrix<Complex64>> = match ctx.model {
        Model::A => {
            om = ctx.operator()?;
            &move |z| om.weyl(z).map(|(m, _)| m)
        }
        Model::B => {
            rm = ctx.relation()?;
            &move |z| rm.weyl(z).map(|(m, _)| m)
        }
    };
    let mut audits = Vec::with_capacity(suites.len());
    for points in &suites {
        audits.push(audit(points, eval)?);
    }
    let simplicity = match ctx.model {
        Model::B => Some(ctx.relation()?.check_simplicity(
            &default_simplicity_points(),
            SIMPLICITY_COEFFS,
            SIMPLICITY_THRESHOLD,
        )?),
        Model::A => None,
    };
    let mut csv =
        String::from("suite,points,negative_squares,min_eigenvalue,strictness,symmetry_defect\n");
    for (idx, a) in audits.iter().enumerate() {
        csv.push_str(&format!(
            "{idx},{},{},{},{},{}\n",
            a.points, a.negative_squares, a.min_eigenvalue, a.strictness, a.symmetry_defect
        ));
    }
    let block = PickBlock {
        max_negative_squares: audits.iter().map(|a| a.negative_squares).max().unwrap_or(0),
        min_strictness: audits
            .iter()
            .map(|a| a.strictness)
            .fold(f64::INFINITY, f64::min),
        max_symmetry_defect: audits.iter().map(|a| a.symmetry_defect).fold(0.0, f64::max),
        suites: audits,
        simplicity,
    };
    let mut report = RunReport::new("pick", ctx.provenance(true));
    report.pick = Some(block);
    emit(&report);
    if let Some(path) = &common.out {
        write_out(path, &csv)?;
    }
    Ok(())
}

fn cmd_verify(ctx: &Ctx, common: &Common) -> Result<()> {
    let block = verify::run_all(&ctx.config, ctx.seed)?;
    let passed = block.passed;
    let mut report = RunReport::new("verify", ctx.provenance(false));
    report.conditions = Some(ctx.diag.clone());
    report.verify = Some(block);
    emit(&report);
    if let Some(path) = &common.out {
        write_out(path, &report.to_json())?;
    }
    if passed {
        Ok(())
    } else {
        Err(Error::InvariantFailure(
            "at least one verification suite failed; see the report".into(),
        ))
    }
}
