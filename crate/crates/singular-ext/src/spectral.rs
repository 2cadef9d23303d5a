//! Diagonal spectral operator and the scale of weighted sequence spaces.
//!
//! The unperturbed operator `L` is kept in spectral form: a nondecreasing
//! list of eigenvalues `lambda_1 <= lambda_2 <= ...` truncated at level `N`,
//! together with a real anchor `z1 < lambda_1`. A vector of scale index `n`
//! is a coefficient sequence `u` with norm
//! `||u||_n^2 = sum_k |u_k|^2 (lambda_k - z1)^n`; negative indices admit
//! coefficient growth, positive indices demand decay.
//!
//! Every series evaluated here is a finite sum over `k <= N` plus a tail
//! report. For power-law eigenvalue laws the tail is bounded analytically by
//! integral comparison; for explicit eigenvalue lists no analytic bound
//! exists and a doubling-window heuristic is used instead.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for tail-bounded pairings.
pub const DEFAULT_PAIR_TOL: f64 = 1e-6;

/// Relative spectral distance below which resolvent evaluation refuses to run.
pub const POLE_TOL: f64 = 1e-9;

/// Window-sum decay ratio above which a series with no analytic tail bound is
/// declared divergent (a harmonic tail keeps the ratio at 1).
const WINDOW_RATIO: f64 = 0.75;

/// Absolute floor under which window sums are considered exhausted.
const WINDOW_FLOOR: f64 = 1e-13;

/// How the eigenvalue list was generated.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenvalueLaw {
    /// `lambda_k = a * k^p + b` for `k = 1..=N`.
    Power { a: f64, p: f64, b: f64 },
    /// Eigenvalues supplied as an explicit list; no analytic tail bounds.
    Explicit,
}

/// Truncated diagonal operator together with the scale anchor `z1`.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    lambda: Vec<f64>,
    z1: f64,
    law: EigenvalueLaw,
    tag: u64,
}

/// Coefficient sequence tagged with its scale index and originating operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleVector {
    coeffs: Vec<Complex64>,
    index: i32,
    tag: u64,
}

/// Convergence summary for one truncated series.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TailReport {
    /// Partial sum of the absolute values of the terms, `sum_{k<=N} |t_k|`.
    pub partial_abs: f64,
    /// Analytic bound on `sum_{k>N} |t_k|`, when the term law admits one.
    pub tail_bound: Option<f64>,
    /// True when the tail is certified (bound below tolerance) or, lacking a
    /// bound, when doubling-window sums decay.
    pub converged: bool,
    /// True when doubling-window sums refuse to decay (harmonic-like tail).
    pub diverged: bool,
}

/// Term-magnitude law `|t_k| <= coeff * k^(-k_exp) * (lambda_k - z1)^(-lam_exp)`.
///
/// `lam_exp` may be negative (growing weight) as long as the combined decay
/// still gives a summable majorant.
#[derive(Debug, Clone, Copy)]
pub struct DecayLaw {
    pub coeff: f64,
    pub k_exp: f64,
    pub lam_exp: f64,
}

impl DecayLaw {
    pub fn new(coeff: f64, k_exp: f64, lam_exp: f64) -> Self {
        DecayLaw { coeff, k_exp, lam_exp }
    }

    /// Law for the product of two termwise-bounded factors.
    pub fn product(&self, other: &DecayLaw) -> DecayLaw {
        DecayLaw {
            coeff: self.coeff * other.coeff,
            k_exp: self.k_exp + other.k_exp,
            lam_exp: self.lam_exp + other.lam_exp,
        }
    }

    /// Extra weight `(lambda_k - z1)^(-e)` folded into the law.
    pub fn weighted(&self, e: f64) -> DecayLaw {
        DecayLaw { coeff: self.coeff, k_exp: self.k_exp, lam_exp: self.lam_exp + e }
    }

    /// Folds a resolvent factor `1/|lambda_k - z|` into the law, valid for the
    /// tail `k > N`. Returns `None` when `z` is too far out for the uniform
    /// comparison `|lambda_k - z| >= (lambda_k - z1) * (1 - |z - z1| / gap)`.
    pub fn with_resolvent(&self, z: Complex64, op: &SpectralOperator) -> Option<DecayLaw> {
        let gap = op.next_eigenvalue_after_truncation()? - op.z1;
        let ratio = (z - Complex64::new(op.z1, 0.0)).norm() / gap;
        if ratio >= 1.0 - 1e-12 {
            return None;
        }
        Some(DecayLaw {
            coeff: self.coeff / (1.0 - ratio),
            k_exp: self.k_exp,
            lam_exp: self.lam_exp + 1.0,
        })
    }
}

fn stable_tag(parts: &[f64]) -> u64 {
    // FNV-1a over the IEEE bit patterns; deterministic across runs.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in parts {
        for byte in p.to_bits().to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

impl SpectralOperator {
    /// Power-law operator `lambda_k = a * k^p + b`, truncated at `n` terms.
    pub fn power(a: f64, p: f64, b: f64, n: usize, z1: f64) -> Result<Self> {
        if !a.is_finite() || !p.is_finite() || a <= 0.0 || p <= 0.0 {
            return Err(Error::Config(format!(
                "power law needs a > 0 and p > 0, got a = {a}, p = {p}"
            )));
        }
        if n == 0 {
            return Err(Error::Config("truncation level must be positive".into()));
        }
        let lambda: Vec<f64> = (1..=n).map(|k| a * (k as f64).powf(p) + b).collect();
        if z1 >= lambda[0] {
            return Err(Error::Config(format!(
                "anchor z1 = {z1} must lie strictly below lambda_1 = {}",
                lambda[0]
            )));
        }
        let tag = stable_tag(&[a, p, b, n as f64, z1]);
        Ok(SpectralOperator { lambda, z1, law: EigenvalueLaw::Power { a, p, b }, tag })
    }

    /// Operator from an explicit nondecreasing eigenvalue list.
    pub fn explicit(lambda: Vec<f64>, z1: f64) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Config("eigenvalue list must be nonempty".into()));
        }
        if lambda.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("eigenvalue list must be nondecreasing".into()));
        }
        if z1 >= lambda[0] {
            return Err(Error::Config(format!(
                "anchor z1 = {z1} must lie strictly below lambda_1 = {}",
                lambda[0]
            )));
        }
        let mut parts = vec![z1, lambda.len() as f64];
        parts.extend_from_slice(&lambda);
        let tag = stable_tag(&parts);
        Ok(SpectralOperator { lambda, z1, law: EigenvalueLaw::Explicit, tag })
    }

    /// Same law truncated at a different level (power laws regenerate, explicit
    /// lists can only shrink).
    pub fn with_truncation(&self, n: usize) -> Result<Self> {
        match self.law {
            EigenvalueLaw::Power { a, p, b } => SpectralOperator::power(a, p, b, n, self.z1),
            EigenvalueLaw::Explicit => {
                if n > self.lambda.len() {
                    return Err(Error::Config(format!(
                        "cannot extend an explicit eigenvalue list from {} to {n}",
                        self.lambda.len()
                    )));
                }
                SpectralOperator::explicit(self.lambda[..n].to_vec(), self.z1)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn law(&self) -> &EigenvalueLaw {
        &self.law
    }

    /// Eigenvalue `lambda_k` for the 0-based slot `k0` (math index `k0 + 1`).
    pub fn eigenvalue(&self, k0: usize) -> f64 {
        self.lambda[k0]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// `(lambda_k - z1)^n` for the 0-based slot `k0`.
    pub fn weight(&self, k0: usize, n: i32) -> f64 {
        (self.lambda[k0] - self.z1).powi(n)
    }

    /// First eigenvalue beyond the truncation, when the law determines it.
    fn next_eigenvalue_after_truncation(&self) -> Option<f64> {
        match self.law {
            EigenvalueLaw::Power { a, p, b } => {
                Some(a * ((self.lambda.len() + 1) as f64).powf(p) + b)
            }
            EigenvalueLaw::Explicit => None,
        }
    }

    /// Distance from `z` to the truncated spectrum.
    pub fn spectral_distance(&self, z: Complex64) -> f64 {
        self.lambda
            .iter()
            .map(|&l| (z - Complex64::new(l, 0.0)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn check_tag(&self, v: &ScaleVector, what: &str) -> Result<()> {
        if v.tag != self.tag || v.coeffs.len() != self.lambda.len() {
            return Err(Error::OperatorMismatch(format!(
                "{what}: vector built for a different operator or truncation \
                 (len {} vs {})",
                v.coeffs.len(),
                self.lambda.len()
            )));
        }
        Ok(())
    }

    /// Wraps raw coefficients as a vector of declared scale index.
    pub fn vector(&self, coeffs: Vec<Complex64>, index: i32) -> Result<ScaleVector> {
        if coeffs.len() != self.lambda.len() {
            return Err(Error::Config(format!(
                "coefficient length {} does not match truncation {}",
                coeffs.len(),
                self.lambda.len()
            )));
        }
        Ok(ScaleVector { coeffs, index, tag: self.tag })
    }

    pub fn zero_vector(&self, index: i32) -> ScaleVector {
        ScaleVector {
            coeffs: vec![Complex64::new(0.0, 0.0); self.lambda.len()],
            index,
            tag: self.tag,
        }
    }

    /// Eigenvector `e_k` (0-based slot) as a vector of declared index.
    pub fn basis_vector(&self, k0: usize, index: i32) -> ScaleVector {
        let mut v = self.zero_vector(index);
        v.coeffs[k0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Scale inner product `<u, v>_n = sum conj(u_k) v_k (lambda_k - z1)^n`,
    /// conjugate-linear in the first slot.
    pub fn inner(&self, n: i32, u: &ScaleVector, v: &ScaleVector) -> Result<Complex64> {
        self.check_tag(u, "inner")?;
        self.check_tag(v, "inner")?;
        let mut acc = Complex64::new(0.0, 0.0);
        for k0 in 0..self.lambda.len() {
            acc += u.coeffs[k0].conj() * v.coeffs[k0] * self.weight(k0, n);
        }
        Ok(acc)
    }

    pub fn norm(&self, n: i32, u: &ScaleVector) -> Result<f64> {
        Ok(self.inner(n, u, u)?.re.max(0.0).sqrt())
    }

    /// Applies `(L - z1)^n` termwise; the scale index drops by `2 n`.
    pub fn apply_power(&self, n: i32, u: &ScaleVector) -> Result<ScaleVector> {
        self.check_tag(u, "apply_power")?;
        let coeffs = (0..self.lambda.len())
            .map(|k0| u.coeffs[k0] * self.weight(k0, n))
            .collect();
        Ok(ScaleVector { coeffs, index: u.index - 2 * n, tag: self.tag })
    }

    /// Applies `L` termwise (multiplication by `lambda_k`); the result is
    /// declared two scale indices lower.
    pub fn apply_l(&self, u: &ScaleVector) -> Result<ScaleVector> {
        self.check_tag(u, "apply_l")?;
        let coeffs = (0..self.lambda.len())
            .map(|k0| u.coeffs[k0] * self.lambda[k0])
            .collect();
        Ok(ScaleVector { coeffs, index: u.index - 2, tag: self.tag })
    }

    /// Applies `(L - z)^{-1}` termwise; the scale index rises by two.
    /// Refuses points too close to the truncated spectrum.
    pub fn resolvent(&self, z: Complex64, u: &ScaleVector) -> Result<ScaleVector> {
        self.check_tag(u, "resolvent")?;
        let dist = self.spectral_distance(z);
        if dist <= POLE_TOL * (1.0 + z.norm()) {
            return Err(Error::SpectralPoint { z, dist });
        }
        let coeffs = (0..self.lambda.len())
            .map(|k0| u.coeffs[k0] / (Complex64::new(self.lambda[k0], 0.0) - z))
            .collect();
        Ok(ScaleVector { coeffs, index: u.index + 2, tag: self.tag })
    }

    /// Uniform bound `(lambda_k - z1) / |lambda_k - z|` over the truncation,
    /// the constant in `||(L-z)^{-1} u||_{n+2} <= C(z) ||u||_n`.
    pub fn resolvent_bound(&self, z: Complex64) -> f64 {
        self.lambda
            .iter()
            .map(|&l| (l - self.z1) / (Complex64::new(l, 0.0) - z).norm())
            .fold(0.0, f64::max)
    }

    /// Analytic bound on `sum_{k>N} coeff * k^(-k_exp) * (lambda_k-z1)^(-lam_exp)`
    /// by integral comparison, when the eigenvalue law is a power law and the
    /// combined exponent is summable.
    pub fn tail_majorant(&self, law: &DecayLaw) -> Option<f64> {
        let EigenvalueLaw::Power { a, p, b } = self.law else {
            return None;
        };
        let s = law.k_exp + p * law.lam_exp;
        if s <= 1.0 + 1e-12 {
            return None;
        }
        let lam_coeff = if law.lam_exp >= 0.0 {
            // lambda_k - z1 >= rho * a * k^p with rho = min(1, (lambda_1 - z1)/a)
            let rho = (1.0_f64).min((self.lambda[0] - self.z1) / a);
            (rho * a).powf(-law.lam_exp)
        } else {
            // lambda_k - z1 <= (a + max(0, b - z1)) * k^p
            let a_up = a + (b - self.z1).max(0.0);
            a_up.powf(-law.lam_exp)
        };
        let n = self.lambda.len() as f64;
        Some(law.coeff * lam_coeff * n.powf(1.0 - s) / (s - 1.0))
    }

    /// Sums `t(k0)` over the truncation and attaches a tail report. The term
    /// law, when given, must majorize `|t|` beyond the truncation.
    pub fn sum_with_tail<F>(&self, term: F, law: Option<&DecayLaw>, tol: f64) -> (Complex64, TailReport)
    where
        F: Fn(usize) -> Complex64,
    {
        let n = self.lambda.len();
        let q1 = n / 4;
        let q2 = n / 2;
        let mut value = Complex64::new(0.0, 0.0);
        let mut abs = 0.0_f64;
        let mut abs_q1 = 0.0_f64;
        let mut abs_q2 = 0.0_f64;
        for k0 in 0..n {
            let t = term(k0);
            value += t;
            abs += t.norm();
            if k0 + 1 == q1 {
                abs_q1 = abs;
            }
            if k0 + 1 == q2 {
                abs_q2 = abs;
            }
        }
        let tail_bound = law.and_then(|l| self.tail_majorant(l));
        let (converged, diverged) = match tail_bound {
            Some(bound) => (bound <= tol * abs.max(1.0), false),
            None => {
                if n < 16 {
                    // Too short for the window heuristic; stay agnostic.
                    (false, false)
                } else {
                    let w1 = abs_q2 - abs_q1;
                    let w2 = abs - abs_q2;
                    let floor = WINDOW_FLOOR * (1.0 + abs);
                    let decayed = w2 <= WINDOW_RATIO * w1 || w2 <= floor;
                    (decayed, !decayed && w2 > floor)
                }
            }
        };
        (value, TailReport { partial_abs: abs, tail_bound, converged, diverged })
    }

    /// Duality pairing `<phi, u> = sum conj(phi_k) u_k` with tail accounting.
    ///
    /// `law` describes the termwise magnitude `|conj(phi_k) u_k|`; without it
    /// (explicit data) only the doubling-window heuristic applies.
    pub fn pair(
        &self,
        phi: &ScaleVector,
        u: &ScaleVector,
        law: Option<&DecayLaw>,
        tol: f64,
    ) -> Result<(Complex64, TailReport)> {
        self.check_tag(phi, "pair")?;
        self.check_tag(u, "pair")?;
        Ok(self.sum_with_tail(|k0| phi.coeffs[k0].conj() * u.coeffs[k0], law, tol))
    }

    /// `pair` that insists on a certified tail below `tol`.
    pub fn pair_checked(
        &self,
        phi: &ScaleVector,
        u: &ScaleVector,
        law: Option<&DecayLaw>,
        tol: f64,
    ) -> Result<Complex64> {
        let (value, report) = self.pair(phi, u, law, tol)?;
        if report.diverged {
            return Err(Error::Truncation(format!(
                "pairing diverges (window sums do not decay, partial |sum| = {:.3e})",
                report.partial_abs
            )));
        }
        if let Some(bound) = report.tail_bound {
            if bound > tol * report.partial_abs.max(1.0) {
                return Err(Error::Truncation(format!(
                    "tail bound {bound:.3e} exceeds tolerance {tol:.3e}"
                )));
            }
        }
        Ok(value)
    }
}

impl ScaleVector {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn index(&self) -> i32 {
        self.index
    }

    /// Reinterprets the same coefficients at a different declared index
    /// (membership in the smaller space is the caller's responsibility).
    pub fn reindexed(mut self, index: i32) -> ScaleVector {
        self.index = index;
        self
    }

    pub fn scale(&self, s: Complex64) -> ScaleVector {
        ScaleVector {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            index: self.index,
            tag: self.tag,
        }
    }

    pub fn add(&self, other: &ScaleVector) -> Result<ScaleVector> {
        self.combine(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &ScaleVector) -> Result<ScaleVector> {
        self.combine(other, Complex64::new(-1.0, 0.0))
    }

    fn combine(&self, other: &ScaleVector, s: Complex64) -> Result<ScaleVector> {
        if self.tag != other.tag || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::OperatorMismatch(
                "cannot combine vectors from different operators".into(),
            ));
        }
        if self.index != other.index {
            return Err(Error::OperatorMismatch(format!(
                "cannot combine vectors of scale indices {} and {}",
                self.index, other.index
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + s * b)
            .collect();
        Ok(ScaleVector { coeffs, index: self.index, tag: self.tag })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fixture_operator(n: usize) -> SpectralOperator {
        SpectralOperator::power(1.0, 2.0, 0.0, n, -1.0).expect("valid power law")
    }

    #[test]
    fn rejects_anchor_inside_spectrum() {
        assert!(SpectralOperator::power(1.0, 2.0, 0.0, 100, 1.0).is_err());
        assert!(SpectralOperator::explicit(vec![0.5, 1.0], 0.5).is_err());
    }

    #[test]
    fn inner_weights_basis_vectors() {
        let op = fixture_operator(100);
        // lambda_3 = 9, z1 = -1: weight (9 + 1)^{-2} = 1/100.
        let e3 = op.basis_vector(2, 0);
        let val = op.inner(-2, &e3, &e3).unwrap();
        assert_relative_eq!(val.re, 0.01, max_relative = 1e-14);
        assert_relative_eq!(val.im, 0.0);
    }

    #[test]
    fn inner_is_conjugate_symmetric() {
        let op = fixture_operator(16);
        let u = op
            .vector(
                (0..16).map(|k| Complex64::new(k as f64, 0.3 * k as f64)).collect(),
                0,
            )
            .unwrap();
        let v = op
            .vector(
                (0..16).map(|k| Complex64::new(1.0 / (k + 1) as f64, -0.5)).collect(),
                0,
            )
            .unwrap();
        let uv = op.inner(3, &u, &v).unwrap();
        let vu = op.inner(3, &v, &u).unwrap();
        assert_relative_eq!(uv.re, vu.conj().re, max_relative = 1e-13);
        assert_relative_eq!(uv.im, vu.conj().im, max_relative = 1e-13);
    }

    #[test]
    fn apply_power_round_trips() {
        let op = fixture_operator(64);
        let u = op
            .vector((0..64).map(|k| Complex64::new(1.0 + k as f64, -0.7)).collect(), 2)
            .unwrap();
        let back = op.apply_power(-3, &op.apply_power(3, &u).unwrap()).unwrap();
        assert_eq!(back.index(), u.index());
        for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
            assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
            assert_relative_eq!(a.im, b.im, max_relative = 1e-12);
        }
    }

    #[test]
    fn apply_power_shifts_declared_index() {
        let op = fixture_operator(8);
        let u = op.zero_vector(4);
        assert_eq!(op.apply_power(3, &u).unwrap().index(), -2);
    }

    #[test]
    fn resolvent_refuses_spectral_points() {
        let op = fixture_operator(50);
        let u = op.basis_vector(0, 0);
        let err = op.resolvent(Complex64::new(4.0, 0.0), &u).unwrap_err();
        match err {
            Error::SpectralPoint { .. } => {}
            other => panic!("expected spectral-point error, got {other}"),
        }
    }

    #[test]
    fn resolvent_bound_controls_norm_growth() {
        let op = fixture_operator(40);
        let z = Complex64::new(0.5, 2.0);
        let u = op
            .vector((0..40).map(|k| Complex64::new(0.2 * k as f64, 1.0)).collect(), -2)
            .unwrap();
        let ru = op.resolvent(z, &u).unwrap();
        assert_eq!(ru.index(), 0);
        let lhs = op.norm(0, &ru).unwrap();
        let rhs = op.resolvent_bound(z) * op.norm(-2, &u).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }

    #[test]
    fn tail_majorant_matches_integral_comparison() {
        let op = fixture_operator(2000);
        // Terms k^{-1} (lambda_k - z1)^{-1}: exponent s = 1 + 2 = 3,
        // bound = N^{-2} / 2 (rho = 1 for z1 = -1 < b = 0).
        let law = DecayLaw::new(1.0, 1.0, 1.0);
        let bound = op.tail_majorant(&law).unwrap();
        assert_relative_eq!(bound, 0.5 * 2000f64.powi(-2), max_relative = 1e-12);
        // The true tail is below the bound.
        let big = fixture_operator(100_000);
        let tail: f64 = (2000..100_000)
            .map(|k0| {
                let k = (k0 + 1) as f64;
                1.0 / (k * (big.eigenvalue(k0) + 1.0))
            })
            .sum();
        assert!(tail <= bound, "tail {tail} exceeds bound {bound}");
    }

    #[test]
    fn tail_majorant_absent_for_explicit_laws_and_slow_decay() {
        let op = SpectralOperator::explicit((1..=32).map(|k| k as f64).collect(), 0.0).unwrap();
        assert!(op.tail_majorant(&DecayLaw::new(1.0, 3.0, 0.0)).is_none());
        let power = fixture_operator(100);
        assert!(power.tail_majorant(&DecayLaw::new(1.0, 1.0, 0.0)).is_none());
    }

    #[test]
    fn harmonic_series_is_flagged_divergent() {
        let op = fixture_operator(4096);
        let ones = op.vector(vec![Complex64::new(1.0, 0.0); 4096], 0).unwrap();
        let harmonic = op
            .vector(
                (0..4096).map(|k0| Complex64::new(1.0 / (k0 + 1) as f64, 0.0)).collect(),
                0,
            )
            .unwrap();
        let (_, report) = op.pair(&ones, &harmonic, None, DEFAULT_PAIR_TOL).unwrap();
        assert!(report.diverged);
        assert!(!report.converged);
        assert!(op.pair_checked(&ones, &harmonic, None, DEFAULT_PAIR_TOL).is_err());
    }

    #[test]
    fn fast_decay_passes_the_window_heuristic() {
        let op = fixture_operator(4096);
        let ones = op.vector(vec![Complex64::new(1.0, 0.0); 4096], 0).unwrap();
        let cubic = op
            .vector(
                (0..4096)
                    .map(|k0| Complex64::new(((k0 + 1) as f64).powi(-3), 0.0))
                    .collect(),
                0,
            )
            .unwrap();
        let (_, report) = op.pair(&ones, &cubic, None, DEFAULT_PAIR_TOL).unwrap();
        assert!(report.converged);
        assert!(!report.diverged);
    }

    #[test]
    fn mismatched_operators_are_rejected() {
        let op_a = fixture_operator(32);
        let op_b = fixture_operator(64);
        let u = op_a.zero_vector(0);
        assert!(op_b.inner(0, &u, &u).is_err());
        let same_len = fixture_operator(32);
        // Same truncation, same law: tags agree and the vector is accepted.
        assert!(same_len.inner(0, &u, &u).is_ok());
        let shifted = SpectralOperator::power(1.0, 2.0, 0.0, 32, -2.0).unwrap();
        assert!(shifted.inner(0, &u, &u).is_err());
    }

    #[test]
    fn with_truncation_regenerates_power_laws() {
        let op = fixture_operator(2000);
        let half = op.with_truncation(1000).unwrap();
        assert_eq!(half.len(), 1000);
        assert_relative_eq!(half.eigenvalue(999), 1_000_000.0);
        let explicit = SpectralOperator::explicit(vec![1.0, 2.0, 3.0], 0.0).unwrap();
        assert!(explicit.with_truncation(5).is_err());
        assert_eq!(explicit.with_truncation(2).unwrap().len(), 2);
    }
}
