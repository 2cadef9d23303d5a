//! Scale-of-spaces basics: weighted norms over a diagonal operator, the
//! resolvent as a bounded map, and certified tail bounds for truncated sums.
//!
//! Run with `cargo run --example scale_ladder`.

use num_complex::Complex64;
use singular_ext::spectral::{DecayLaw, SpectralOperator};

fn main() -> singular_ext::Result<()> {
    // Eigenvalues 1, 4, 9, ..., N^2 with the anchor z1 = -1 below the bottom.
    let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0)?;
    println!(
        "operator: {} eigenvalues, first {}, last {}, anchor {}",
        op.len(),
        op.eigenvalue(0),
        op.eigenvalue(op.len() - 1),
        op.z1()
    );

    // One vector, measured along the scale. Coefficients k^{-2} put it in
    // every space with index below 3/2 here (weights grow like k^{2n}).
    let coeffs: Vec<Complex64> = (1..=op.len())
        .map(|k| Complex64::new((k as f64).powi(-2), 0.0))
        .collect();
    let u = op.vector(coeffs, 0)?;
    for n in [-2, -1, 0, 1] {
        println!("  ||u||_{n:2} = {:.6}", op.norm(n, &u)?);
    }

    // The resolvent improves the scale index by one: (L - z)^{-1} u lives two
    // rungs up in the weighted ladder, with operator norm 1/dist(z, spectrum).
    let z = Complex64::new(0.0, 2.0);
    let v = op.resolvent(z, &u)?;
    println!(
        "resolvent at {z}: ||(L-z)^-1 u||_2 = {:.6}, bound factor {:.4}",
        op.norm(2, &v)?,
        op.resolvent_bound(z)
    );

    // Tail certification: terms |t_k| <= k^{-1} (lambda_k - z1)^{-1} decay
    // like k^{-3}, so the sum beyond the truncation is bounded analytically.
    let law = DecayLaw::new(1.0, 1.0, 1.0);
    match op.tail_majorant(&law) {
        Some(bound) => println!("tail beyond N for k^-1 (lam-z1)^-1 terms: <= {bound:.3e}"),
        None => println!("law does not decay fast enough for a bound"),
    }

    // The same law against a divergent variant: k^{-1} alone has no summable
    // majorant and the certifier refuses it.
    let harmonic = DecayLaw::new(1.0, 1.0, 0.0);
    println!(
        "harmonic-like law certified? {}",
        op.tail_majorant(&harmonic).is_some()
    );
    Ok(())
}
