//! Acceptance gate. Runs every verification suite on the reference setup at
//! full truncation and prints one line per criterion. Exits nonzero if any
//! criterion fails, if a tolerance drifted from the pinned value, or if the
//! run exceeds its time budget.

use std::process::ExitCode;
use std::time::Instant;

use singular_ext::config::ModelConfig;
use singular_ext::relation_model::SIMPLICITY_THRESHOLD;
use singular_ext::verify::{self, run_all};

const TRUNCATION: usize = 2000;
const SEED: u64 = 0;
const TIME_BUDGET_SECS: f64 = 60.0;

/// Criterion order is fixed; tolerances are pinned here and cross-checked
/// against what the suites report.
const CRITERIA: [(&str, f64); 10] = [
    ("boundary-form", verify::BOUNDARY_FORM_TOL),
    ("relation-green", verify::GREEN_TOL),
    ("eigen-fields", verify::EIGEN_FIELD_TOL),
    ("weyl-two-path", verify::WEYL_TWO_PATH_TOL),
    ("resolvent-identity", verify::RESOLVENT_IDENTITY_TOL),
    ("compressed-projection", verify::COMPRESSED_TOL),
    ("nevanlinna-kernel", verify::SPECTRUM_REAL_TOL),
    ("structural-inclusions", verify::STRUCTURAL_TOL),
    ("truncation-stability", verify::DOUBLING_REL_TOL),
    ("simplicity", SIMPLICITY_THRESHOLD),
];

fn main() -> ExitCode {
    let config = ModelConfig::reference(TRUNCATION);
    let start = Instant::now();
    let block = match run_all(&config, SEED) {
        Ok(block) => block,
        Err(e) => {
            println!("acceptance: suites did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    let mut ok = true;
    if block.suites.len() != CRITERIA.len() {
        println!(
            "acceptance: expected {} suites, got {}",
            CRITERIA.len(),
            block.suites.len()
        );
        ok = false;
    }
    for (idx, ((name, tolerance), suite)) in
        CRITERIA.iter().zip(&block.suites).enumerate()
    {
        let mut passed = suite.passed;
        let mut note = String::new();
        if suite.name != *name {
            passed = false;
            note = format!(" [suite order broke: found {}]", suite.name);
        } else if suite.tolerance != *tolerance {
            passed = false;
            note = format!(" [tolerance drifted: {}]", suite.tolerance);
        }
        println!(
            "criterion {:2}: {} {} (residual {:.3e}, tolerance {:.0e}){}",
            idx + 1,
            if passed { "PASS" } else { "FAIL" },
            name,
            suite.residual,
            tolerance,
            note
        );
        if !passed {
            println!("              {}", suite.detail);
            ok = false;
        }
    }

    println!(
        "acceptance: N = {TRUNCATION}, seed = {SEED}, single-threaded, {elapsed:.1}s \
         (budget {TIME_BUDGET_SECS:.0}s)"
    );
    if elapsed > TIME_BUDGET_SECS {
        println!("acceptance: time budget exceeded");
        ok = false;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
