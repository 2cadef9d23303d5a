//! Model space for a rank-`d`, order-`m` singular perturbation.
//!
//! The singular inputs are `d` functionals `phi_sigma` living two rungs below
//! the form domain on the scale (index `-m-2`, outside `-m-1`). Regularizing
//! with inverse powers of `(L - z1)` produces the singular basis
//! `h_{sigma j} = (L - z1)^{-j} phi_sigma`, `j = 1..=m`, whose span carries
//! singular coordinates. The model space is the direct sum of the scale space
//! of index `m` and that span, metrized by a Hermitian invertible Gram matrix
//! `G` on the coordinates; `G` need not be positive, so the metric is
//! generally indefinite.
//!
//! Coordinates are canonical here: singular parts are stored as coordinate
//! vectors in `C^{m d}`, never as huge coefficient sequences, and the basis
//! pairing Gram (`gram_pairing`) converts raw pairing data into coordinates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{DecayLaw, ScaleVector, SpectralOperator, TailReport};

/// Flat indexing of the singular coordinate slots.
///
/// Slot `(sigma, j)` (family member `sigma = 0..d`, regularization order
/// `j = 1..=m`) lives at flat position `sigma * m + (j - 1)`: coordinates are
/// grouped by family member, so per-member `m x m` blocks act block-diagonally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub m: usize,
    pub d: usize,
}

impl Layout {
    pub fn new(m: usize, d: usize) -> Self {
        Layout { m, d }
    }

    pub fn dim(&self) -> usize {
        self.m * self.d
    }

    /// Flat slot of `(sigma, j)`; `sigma` is 0-based, `j` is 1-based.
    pub fn flat(&self, sigma: usize, j: usize) -> usize {
        debug_assert!(sigma < self.d && (1..=self.m).contains(&j));
        sigma * self.m + (j - 1)
    }

    /// Embeds `c` in the top-order slots: `eta(c)_(sigma,j) = delta_{j m} c_sigma`.
    pub fn eta(&self, c: &DVector<Complex64>) -> DVector<Complex64> {
        let mut v = DVector::from_element(self.dim(), Complex64::new(0.0, 0.0));
        for sigma in 0..self.d {
            v[self.flat(sigma, self.m)] = c[sigma];
        }
        v
    }

    /// Extracts the top-order row block: `(v_(sigma,m))_sigma` in `C^d`.
    pub fn block_m(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_fn(self.d, |sigma, _| v[self.flat(sigma, self.m)])
    }
}

/// How the singular family was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyLaw {
    /// `phi_{sigma,k} = (lambda_k - z1)^{(m+1)/2} k^{-1/2} e^{2 pi i (sigma+1) k / (d+1)}`:
    /// sits exactly on the boundary of the admitted class (in index `-m-2`,
    /// just outside `-m-1`).
    Borderline,
    /// Coefficients supplied explicitly; no analytic tail bounds.
    Explicit,
}

/// The `d` singular functionals, materialized at scale index `-m-2`.
#[derive(Debug, Clone)]
pub struct SingularFamily {
    m: usize,
    d: usize,
    phi: Vec<ScaleVector>,
    law: FamilyLaw,
}

/// Convergence diagnostics for one family member's class membership.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MembershipReport {
    pub sigma: usize,
    /// `sum |phi_k|^2 (lambda_k - z1)^{-m-2}` must converge.
    pub upper: TailReport,
    /// `sum |phi_k|^2 (lambda_k - z1)^{-m-1}` must diverge.
    pub lower: TailReport,
    /// True when the upper sum converges and the lower one diverges.
    pub in_class: bool,
}

/// Matrix evaluated entrywise from truncated series, with the slowest tail.
#[derive(Debug, Clone)]
pub struct GramEval {
    pub matrix: DMatrix<Complex64>,
    pub worst: TailReport,
}

fn worse(a: TailReport, b: &TailReport) -> TailReport {
    let a_bad = a.diverged || !a.converged;
    let b_bad = b.diverged || !b.converged;
    if b_bad && !a_bad {
        return b.clone();
    }
    if a_bad && !b_bad {
        return a;
    }
    match (a.tail_bound, b.tail_bound) {
        (Some(x), Some(y)) if y > x => b.clone(),
        (None, Some(_)) => a,
        (Some(_), None) => b.clone(),
        _ => a,
    }
}

impl SingularFamily {
    /// Bundled borderline family (an implementation convention, not a
    /// canonical choice): magnitudes `(lambda_k - z1)^{(m+1)/2} k^{-1/2}`,
    /// modulated per member by the phases `e^{2 pi i (sigma+1) k / (d+1)}`.
    pub fn borderline(op: &SpectralOperator, m: usize, d: usize) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(Error::Config("family needs m >= 1 and d >= 1".into()));
        }
        let half = (m as f64 + 1.0) / 2.0;
        let phi = (0..d)
            .map(|sigma| {
                let coeffs = (0..op.len())
                    .map(|k0| {
                        let k = (k0 + 1) as f64;
                        let mag = (op.eigenvalue(k0) - op.z1()).powf(half) / k.sqrt();
                        let angle = 2.0 * std::f64::consts::PI * ((sigma + 1) as f64) * k
                            / ((d + 1) as f64);
                        Complex64::from_polar(mag, angle)
                    })
                    .collect();
                op.vector(coeffs, -(m as i32) - 2)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SingularFamily { m, d, phi, law: FamilyLaw::Borderline })
    }

    /// Family from explicit coefficient rows (one per member).
    pub fn explicit(op: &SpectralOperator, m: usize, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if m == 0 || rows.is_empty() {
            return Err(Error::Config("family needs m >= 1 and at least one member".into()));
        }
        let d = rows.len();
        let phi = rows
            .into_iter()
            .map(|r| op.vector(r, -(m as i32) - 2))
            .collect::<Result<Vec<_>>>()?;
        Ok(SingularFamily { m, d, phi, law: FamilyLaw::Explicit })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn law(&self) -> FamilyLaw {
        self.law
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.m, self.d)
    }

    pub fn phi(&self, sigma: usize) -> &ScaleVector {
        &self.phi[sigma]
    }

    /// Termwise magnitude law for `|phi_{sigma,k} phi_{sigma',k}|`, when known.
    pub fn product_law(&self) -> Option<DecayLaw> {
        match self.law {
            FamilyLaw::Borderline => Some(DecayLaw::new(1.0, 1.0, -((self.m as f64) + 1.0))),
            FamilyLaw::Explicit => None,
        }
    }

    /// Class membership diagnostics per family member.
    pub fn membership(&self, op: &SpectralOperator, tol: f64) -> Vec<MembershipReport> {
        (0..self.d)
            .map(|sigma| {
                let p = &self.phi[sigma];
                let upper_law = self.product_law().map(|l| l.weighted((self.m + 2) as f64));
                let (_, upper) = op.sum_with_tail(
                    |k0| {
                        Complex64::new(
                            p.coeffs()[k0].norm_sqr() * op.weight(k0, -(self.m as i32) - 2),
                            0.0,
                        )
                    },
                    upper_law.as_ref(),
                    tol,
                );
                // The lower sum must diverge, so no analytic bound is wanted:
                // the doubling-window heuristic is the detector.
                let (_, lower) = op.sum_with_tail(
                    |k0| {
                        Complex64::new(
                            p.coeffs()[k0].norm_sqr() * op.weight(k0, -(self.m as i32) - 1),
                            0.0,
                        )
                    },
                    None,
                    tol,
                );
                let in_class = upper.converged && lower.diverged;
                MembershipReport { sigma, upper, lower, in_class }
            })
            .collect()
    }

    /// Singular basis element `h_{sigma j} = (L - z1)^{-j} phi_sigma` for
    /// `j = 1..=m+1` (order `m+1` is the regularized generator used by domain
    /// decompositions; only `j <= m` spans the singular subspace).
    pub fn singular_element(&self, op: &SpectralOperator, sigma: usize, j: usize) -> Result<ScaleVector> {
        if sigma >= self.d || j == 0 || j > self.m + 1 {
            return Err(Error::Config(format!(
                "singular element (sigma={sigma}, j={j}) outside family of m={}, d={}",
                self.m, self.d
            )));
        }
        op.apply_power(-(j as i32), &self.phi[sigma])
    }

    /// Linear combination `sum_sigma c_sigma h_{sigma j}`.
    pub fn combination(
        &self,
        op: &SpectralOperator,
        j: usize,
        c: &DVector<Complex64>,
    ) -> Result<ScaleVector> {
        if c.len() != self.d {
            return Err(Error::Config(format!(
                "combination wants {} coefficients, got {}",
                self.d,
                c.len()
            )));
        }
        let mut acc = op.zero_vector(-(self.m as i32) - 2 + 2 * j as i32);
        for sigma in 0..self.d {
            acc = acc.add(&self.singular_element(op, sigma, j)?.scale(c[sigma]))?;
        }
        Ok(acc)
    }

    /// Duality pairings `<phi_sigma, u>` for all members, with the worst tail.
    pub fn pair_phi(
        &self,
        op: &SpectralOperator,
        u: &ScaleVector,
        u_law: Option<&DecayLaw>,
        tol: f64,
    ) -> Result<(DVector<Complex64>, TailReport)> {
        let mag = match self.law {
            FamilyLaw::Borderline => {
                Some(DecayLaw::new(1.0, 0.5, -((self.m as f64) + 1.0) / 2.0))
            }
            FamilyLaw::Explicit => None,
        };
        let combined = match (mag, u_law) {
            (Some(a), Some(b)) => Some(a.product(b)),
            _ => None,
        };
        let mut values = DVector::from_element(self.d, Complex64::new(0.0, 0.0));
        let mut worst: Option<TailReport> = None;
        for sigma in 0..self.d {
            let (v, rep) = op.pair(&self.phi[sigma], u, combined.as_ref(), tol)?;
            values[sigma] = v;
            worst = Some(match worst {
                None => rep,
                Some(w) => worse(w, &rep),
            });
        }
        Ok((values, worst.expect("d >= 1")))
    }

    /// Regular Weyl contribution
    /// `q(z)_{sigma sigma'} = (z - z1) sum_k conj(phi_{sigma,k}) phi_{sigma',k}
    /// (lambda_k - z)^{-1} (lambda_k - z1)^{-(m+1)}`, entrywise with tail
    /// accounting. Refuses points on the truncated spectrum.
    pub fn regular_weyl(
        &self,
        op: &SpectralOperator,
        z: Complex64,
        tol: f64,
    ) -> Result<(DMatrix<Complex64>, TailReport)> {
        let dist = op.spectral_distance(z);
        if dist <= crate::spectral::POLE_TOL * (1.0 + z.norm()) {
            return Err(Error::SpectralPoint { z, dist });
        }
        let w = z - Complex64::new(op.z1(), 0.0);
        let law = match self.law {
            FamilyLaw::Borderline => DecayLaw::new(w.norm(), 1.0, 0.0).with_resolvent(z, op),
            FamilyLaw::Explicit => None,
        };
        let e = -(self.m as i32) - 1;
        let mut matrix = DMatrix::from_element(self.d, self.d, Complex64::new(0.0, 0.0));
        let mut worst: Option<TailReport> = None;
        for sigma in 0..self.d {
            for sp in 0..self.d {
                let (v, rep) = op.sum_with_tail(
                    |k0| {
                        self.phi[sigma].coeffs()[k0].conj()
                            * self.phi[sp].coeffs()[k0]
                            * op.weight(k0, e)
                            / (Complex64::new(op.eigenvalue(k0), 0.0) - z)
                    },
                    law.as_ref(),
                    tol,
                );
                matrix[(sigma, sp)] = w * v;
                worst = Some(match worst.take() {
                    None => rep,
                    Some(prev) => worse(prev, &rep),
                });
            }
        }
        Ok((matrix, worst.expect("d >= 1")))
    }

    /// Pairing Gram of the singular basis in the index `-m` inner product:
    /// entries `<h_alpha, h_alpha'>_{-m} = sum_k conj(phi_sigma,k) phi_sigma',k
    /// (lambda_k - z1)^{-j-j'-m}`. Hermitian by construction.
    pub fn gram_pairing(&self, op: &SpectralOperator, tol: f64) -> Result<GramEval> {
        self.gram_over(op, tol, 1)
    }

    /// Top-order block of the pairing Gram (`j = j' = m` only), `d x d`.
    pub fn gram_pairing_min(&self, op: &SpectralOperator, tol: f64) -> Result<GramEval> {
        let full = self.gram_over(op, tol, self.m)?;
        Ok(full)
    }

    fn gram_over(&self, op: &SpectralOperator, tol: f64, j_min: usize) -> Result<GramEval> {
        let per = self.m - j_min + 1;
        let n = per * self.d;
        let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let mut worst: Option<TailReport> = None;
        for sigma in 0..self.d {
            for sp in 0..self.d {
                for j in j_min..=self.m {
                    for jp in j_min..=self.m {
                        let row = sigma * per + (j - j_min);
                        let col = sp * per + (jp - j_min);
                        if col < row {
                            continue;
                        }
                        let e = -((j + jp + self.m) as i32);
                        let law = self
                            .product_law()
                            .map(|l| l.weighted((j + jp + self.m) as f64));
                        let (v, rep) = op.sum_with_tail(
                            |k0| {
                                self.phi[sigma].coeffs()[k0].conj()
                                    * self.phi[sp].coeffs()[k0]
                                    * op.weight(k0, e)
                            },
                            law.as_ref(),
                            tol,
                        );
                        matrix[(row, col)] = v;
                        if row != col {
                            matrix[(col, row)] = v.conj();
                        }
                        worst = Some(match worst.take() {
                            None => rep,
                            Some(w) => worse(w, &rep),
                        });
                    }
                }
            }
        }
        Ok(GramEval { matrix, worst: worst.expect("at least one entry") })
    }
}

/// How a Gram matrix was specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMode {
    /// The basis pairing Gram in the `-m` inner product.
    Pairing,
    /// Supplied entrywise.
    Explicit,
    /// Block-Hankel matrix vanishing above the anti-diagonal, generated from
    /// `m` Hermitian `d x d` blocks; satisfies the operator-model conditions
    /// by construction.
    AntiTriangular,
}

/// Hermitian invertible Gram matrix metrizing the singular coordinates.
#[derive(Debug, Clone)]
pub struct GramSpec {
    matrix: DMatrix<Complex64>,
    layout: Layout,
    mode: GramMode,
}

const HERMITIAN_TOL: f64 = 1e-12;

impl GramSpec {
    /// Uses the basis pairing Gram as the metric.
    pub fn pairing(family: &SingularFamily, op: &SpectralOperator, tol: f64) -> Result<Self> {
        let eval = family.gram_pairing(op, tol)?;
        GramSpec::explicit_with_mode(eval.matrix, family.layout(), GramMode::Pairing)
    }

    /// Explicit Hermitian matrix of size `(m d) x (m d)`.
    pub fn explicit(matrix: DMatrix<Complex64>, m: usize, d: usize) -> Result<Self> {
        GramSpec::explicit_with_mode(matrix, Layout::new(m, d), GramMode::Explicit)
    }

    /// Block-Hankel anti-triangular matrix from Hermitian blocks
    /// `blocks[0], ..., blocks[m-1]` sitting on the anti-diagonals
    /// `j + j' = m+1, ..., 2m`: entries `[G]_{(sigma,j),(sigma',j')} =
    /// blocks[j + j' - m - 1]_{sigma sigma'}` for `j + j' > m`, zero above.
    pub fn anti_triangular(m: usize, d: usize, blocks: &[DMatrix<Complex64>]) -> Result<Self> {
        if blocks.len() != m {
            return Err(Error::Config(format!(
                "anti-triangular Gram wants {m} blocks, got {}",
                blocks.len()
            )));
        }
        let layout = Layout::new(m, d);
        let mut matrix = DMatrix::from_element(layout.dim(), layout.dim(), Complex64::new(0.0, 0.0));
        for (i, b) in blocks.iter().enumerate() {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Config(format!(
                    "anti-triangular block {i} must be {d} x {d}"
                )));
            }
            for sigma in 0..d {
                for sp in 0..d {
                    for j in 1..=m {
                        for jp in 1..=m {
                            if j + jp == m + 1 + i {
                                matrix[(layout.flat(sigma, j), layout.flat(sp, jp))] =
                                    b[(sigma, sp)];
                            }
                        }
                    }
                }
            }
        }
        GramSpec::explicit_with_mode(matrix, layout, GramMode::AntiTriangular)
    }

    fn explicit_with_mode(matrix: DMatrix<Complex64>, layout: Layout, mode: GramMode) -> Result<Self> {
        if matrix.nrows() != layout.dim() || matrix.ncols() != layout.dim() {
            return Err(Error::Config(format!(
                "Gram matrix must be {0} x {0} for m = {1}, d = {2}",
                layout.dim(),
                layout.m,
                layout.d
            )));
        }
        let scale = matrix.iter().map(|e| e.norm()).fold(0.0, f64::max).max(1.0);
        let defect = (&matrix - matrix.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::Config(format!(
                "Gram matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(GramSpec { matrix, layout, mode })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    pub fn d(&self) -> usize {
        self.layout.d
    }

    pub fn mode(&self) -> GramMode {
        self.mode
    }

    pub fn entry(&self, sigma: usize, j: usize, sp: usize, jp: usize) -> Complex64 {
        self.matrix[(self.layout.flat(sigma, j), self.layout.flat(sp, jp))]
    }

    /// Top-order `d x d` block `[G]_{(sigma,m),(sigma',m)}`.
    pub fn min_block(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.layout.d, self.layout.d, |s, sp| {
            self.entry(s, self.layout.m, sp, self.layout.m)
        })
    }

    /// `[G v]_m`: the top-order row block of `G v`, in `C^d`.
    pub fn block_m_of(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        self.layout.block_m(&(&self.matrix * v))
    }

    pub fn is_invertible(&self) -> bool {
        let svd = self.matrix.clone().svd(false, false);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        max > 0.0 && min > 1e-10 * max
    }

    pub fn condition_number(&self) -> f64 {
        let svd = self.matrix.clone().svd(false, false);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Solves `G x = rhs`.
    pub fn solve(&self, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.matrix
            .clone()
            .lu()
            .solve(rhs)
            .ok_or_else(|| Error::SingularMatrix("Gram matrix is singular".into()))
    }

    /// Solves `G X = RHS` columnwise.
    pub fn solve_matrix(&self, rhs: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        self.matrix
            .clone()
            .lu()
            .solve(rhs)
            .ok_or_else(|| Error::SingularMatrix("Gram matrix is singular".into()))
    }
}

/// Element of the model space: a regular part at scale index `m` plus
/// singular coordinates in `C^{m d}`.
#[derive(Debug, Clone)]
pub struct ModelVector {
    pub regular: ScaleVector,
    pub singular: DVector<Complex64>,
}

impl ModelVector {
    pub fn new(regular: ScaleVector, singular: DVector<Complex64>, layout: Layout) -> Result<Self> {
        if singular.len() != layout.dim() {
            return Err(Error::Config(format!(
                "singular coordinates must have length {}, got {}",
                layout.dim(),
                singular.len()
            )));
        }
        Ok(ModelVector { regular, singular })
    }

    pub fn regular_only(regular: ScaleVector, layout: Layout) -> Self {
        let singular = DVector::from_element(layout.dim(), Complex64::new(0.0, 0.0));
        ModelVector { regular, singular }
    }

    pub fn sub(&self, other: &ModelVector) -> Result<ModelVector> {
        Ok(ModelVector {
            regular: self.regular.sub(&other.regular)?,
            singular: &self.singular - &other.singular,
        })
    }
}

/// Indefinite metric `[x, y] = <x_reg, y_reg>_m + <x_sing, G y_sing>_{C^{md}}`,
/// conjugate-linear in the first slot.
pub fn metric(
    op: &SpectralOperator,
    gram: &GramSpec,
    x: &ModelVector,
    y: &ModelVector,
) -> Result<Complex64> {
    let reg = op.inner(gram.m() as i32, &x.regular, &y.regular)?;
    let sing = x.singular.dotc(&(gram.matrix() * &y.singular));
    Ok(reg + sing)
}

/// Norm of the model vector in the majorant (all-positive) metric, used for
/// relative residuals.
pub fn majorant_norm(op: &SpectralOperator, gram: &GramSpec, x: &ModelVector) -> Result<f64> {
    let reg = op.norm(gram.m() as i32, &x.regular)?;
    Ok((reg * reg + x.singular.norm_squared()).sqrt())
}

/// Recovers coordinates from raw pairing data: solves `G~ x = rhs` where
/// `rhs_alpha = <h_alpha, k>_{-m}` and `G~` is the basis pairing Gram.
pub fn coords_from_pairings(
    gram_pairing: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    gram_pairing
        .clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::SingularMatrix("basis pairing Gram is singular".into()))
}

/// Orthonormal basis of the coordinate space of the orthogonal complement of
/// the minimal subspace: the null space of `v -> [G v]_m`.
///
/// Vectors are the eigenvectors of `R^H R` (`R` = top-order row block of `G`)
/// below the rank threshold `1e-10 * sigma_max`, sorted by eigenvalue; the
/// result has `(m-1) d` members whenever `G` is invertible.
pub fn h_perp_basis(gram: &GramSpec) -> Result<Vec<DVector<Complex64>>> {
    let layout = gram.layout();
    let rows = DMatrix::from_fn(layout.d, layout.dim(), |s, col| {
        gram.matrix()[(layout.flat(s, layout.m), col)]
    });
    let gram_rr = rows.adjoint() * &rows;
    let eig = gram_rr.symmetric_eigen();
    let sigma_max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max).sqrt();
    let threshold = 1e-10 * sigma_max.max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let mut basis = Vec::new();
    for idx in order {
        if eig.eigenvalues[idx].max(0.0).sqrt() <= threshold {
            basis.push(eig.eigenvectors.column(idx).into_owned());
        }
    }
    Ok(basis)
}

/// The minimal-part extraction `Phi(v) = (G_min)^{-1} [G v]_m`.
pub fn phi_map(gram: &GramSpec, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let min = gram.min_block();
    min.clone()
        .lu()
        .solve(&gram.block_m_of(v))
        .ok_or_else(|| Error::SingularMatrix("top-order Gram block is singular".into()))
}

/// Splits coordinates as `v = eta(Phi(v)) + v_perp` with `[G v_perp]_m = 0`.
pub fn split_min_perp(
    gram: &GramSpec,
    v: &DVector<Complex64>,
) -> Result<(DVector<Complex64>, DVector<Complex64>)> {
    let phi = phi_map(gram, v)?;
    let min_part = gram.layout().eta(&phi);
    let perp = v - &min_part;
    Ok((min_part, perp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_PAIR_TOL;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn fixture(n: usize) -> (SpectralOperator, SingularFamily) {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, n, -1.0).unwrap();
        let fam = SingularFamily::borderline(&op, 2, 1).unwrap();
        (op, fam)
    }

    #[test]
    fn borderline_family_sits_on_the_class_boundary() {
        let (op, fam) = fixture(2000);
        let reports = fam.membership(&op, DEFAULT_PAIR_TOL);
        assert_eq!(reports.len(), 1);
        assert!(reports[0].upper.converged, "upper sum must converge");
        assert!(reports[0].lower.diverged, "lower sum must diverge");
        assert!(reports[0].in_class);
    }

    #[test]
    fn eigenvector_supported_family_fails_membership() {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, 2000, -1.0).unwrap();
        let mut row = vec![Complex64::new(0.0, 0.0); 2000];
        row[0] = Complex64::new(1.0, 0.0);
        let fam = SingularFamily::explicit(&op, 2, vec![row]).unwrap();
        let reports = fam.membership(&op, DEFAULT_PAIR_TOL);
        assert!(!reports[0].in_class, "finite-rank data is inside the smaller space");
        assert!(!reports[0].lower.diverged);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn gram_pairing_matches_independent_sums() {
        let (op, fam) = fixture(2000);
        let eval = fam.gram_pairing(&op, DEFAULT_PAIR_TOL).unwrap();
        // Frozen reference values: direct high-precision summation of
        // sum_k k^{-1} (k^2+1)^{1-j-j'} at N = 2000.
        assert_abs_diff_eq!(eval.matrix[(0, 0)].re, 0.67186586058650982, epsilon = 1e-12);
        assert_abs_diff_eq!(eval.matrix[(0, 1)].re, 0.27474921414433480, epsilon = 1e-12);
        assert_abs_diff_eq!(eval.matrix[(1, 0)].re, 0.27474921414433480, epsilon = 1e-12);
        assert_abs_diff_eq!(eval.matrix[(1, 1)].re, 0.12940090485094365, epsilon = 1e-12);
        for e in eval.matrix.iter() {
            assert_abs_diff_eq!(e.im, 0.0, epsilon = 1e-15);
        }
        assert!(eval.worst.converged);
        let bound = eval.worst.tail_bound.expect("power law has analytic bounds");
        assert!(bound <= 2e-7, "slowest entry bound {bound}");
    }

    #[test]
    fn gram_pairing_doubling_moves_less_than_tail_bound() {
        let (op2000, fam2000) = fixture(2000);
        let (op1000, fam1000) = fixture(1000);
        let g2 = fam2000.gram_pairing(&op2000, DEFAULT_PAIR_TOL).unwrap();
        let g1 = fam1000.gram_pairing(&op1000, DEFAULT_PAIR_TOL).unwrap();
        let bound = g1.worst.tail_bound.unwrap();
        for (a, b) in g2.matrix.iter().zip(g1.matrix.iter()) {
            assert!((a - b).norm() <= bound, "move {} vs bound {bound}", (a - b).norm());
        }
    }

    #[test]
    fn pairing_of_family_with_its_regularization_diverges() {
        // <phi, (L-z1)^{-(m+1)} phi> reduces to the harmonic series for the
        // borderline family: the scale indices sum to -2 and the window
        // heuristic must flag it.
        let (op, fam) = fixture(4096);
        let h3 = fam.singular_element(&op, 0, 3).unwrap();
        let (_, report) = op.pair(fam.phi(0), &h3, None, DEFAULT_PAIR_TOL).unwrap();
        assert!(report.diverged, "harmonic pairing must be flagged");
    }

    #[test]
    fn anti_triangular_gram_has_the_advertised_shape() {
        let a = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let b = DMatrix::from_element(1, 1, Complex64::new(0.5, 0.0));
        let g = GramSpec::anti_triangular(2, 1, &[a, b]).unwrap();
        assert_abs_diff_eq!(g.entry(0, 1, 0, 1).re, 0.0);
        assert_abs_diff_eq!(g.entry(0, 1, 0, 2).re, 1.0);
        assert_abs_diff_eq!(g.entry(0, 2, 0, 1).re, 1.0);
        assert_abs_diff_eq!(g.entry(0, 2, 0, 2).re, 0.5);
        assert!(g.is_invertible());
    }

    #[test]
    fn non_hermitian_gram_is_rejected() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.2),
                Complex64::new(1.0, 0.3),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(GramSpec::explicit(m, 2, 1).is_err());
    }

    #[test]
    fn metric_sees_the_indefinite_gram() {
        // G = [[0,1],[1,0]]: a vector supported on the first singular slot is
        // neutral, [v, v] = 0.
        let op = SpectralOperator::power(1.0, 2.0, 0.0, 32, -1.0).unwrap();
        let g = GramSpec::explicit(
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            ),
            2,
            1,
        )
        .unwrap();
        let v = ModelVector::new(
            op.zero_vector(2),
            DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
            g.layout(),
        )
        .unwrap();
        let val = metric(&op, &g, &v, &v).unwrap();
        assert_abs_diff_eq!(val.re, 0.0);
        assert_abs_diff_eq!(val.im, 0.0);
    }

    #[test]
    fn coords_round_trip_explicit_combinations() {
        let (op, fam) = fixture(500);
        let gt = fam.gram_pairing(&op, DEFAULT_PAIR_TOL).unwrap().matrix;
        let c = DVector::from_vec(vec![Complex64::new(0.3, -1.1), Complex64::new(2.0, 0.4)]);
        // Raw pairing data of k = sum_alpha c_alpha h_alpha is G~ c.
        let rhs = &gt * &c;
        let x = coords_from_pairings(&gt, &rhs).unwrap();
        for i in 0..2 {
            assert_relative_eq!(x[i].re, c[i].re, max_relative = 1e-10);
            assert_relative_eq!(x[i].im, c[i].im, max_relative = 1e-10);
        }
    }

    #[test]
    fn perp_basis_of_anti_triangular_gram() {
        // [G v]_m = a v_1 + b v_2; null space is the line through (b, -a).
        let a = DMatrix::from_element(1, 1, Complex64::new(2.0, 0.0));
        let b = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let g = GramSpec::anti_triangular(2, 1, &[a, b]).unwrap();
        let basis = h_perp_basis(&g).unwrap();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_relative_eq!(v.norm(), 1.0, max_relative = 1e-12);
        let residual = gram_block_m_norm(&g, v);
        assert_abs_diff_eq!(residual, 0.0, epsilon = 1e-12);
        // Proportional to (1, -2) up to phase.
        let ratio = v[1] / v[0];
        assert_relative_eq!(ratio.re, -2.0, max_relative = 1e-10);
        assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-10);
    }

    fn gram_block_m_norm(g: &GramSpec, v: &DVector<Complex64>) -> f64 {
        g.block_m_of(v).norm()
    }

    #[test]
    fn perp_basis_has_full_advertised_dimension() {
        let (op, fam) = fixture(300);
        let g = GramSpec::pairing(&fam, &op, DEFAULT_PAIR_TOL).unwrap();
        let basis = h_perp_basis(&g).unwrap();
        assert_eq!(basis.len(), (fam.m() - 1) * fam.d());
        for v in &basis {
            assert!(gram_block_m_norm(&g, v) < 1e-10);
        }
    }

    #[test]
    fn phi_map_inverts_the_embedding() {
        let (op, fam) = fixture(300);
        let g = GramSpec::pairing(&fam, &op, DEFAULT_PAIR_TOL).unwrap();
        let c = DVector::from_vec(vec![Complex64::new(1.5, -0.25)]);
        let v = g.layout().eta(&c);
        let phi = phi_map(&g, &v).unwrap();
        assert_relative_eq!(phi[0].re, 1.5, max_relative = 1e-12);
        assert_relative_eq!(phi[0].im, -0.25, max_relative = 1e-12);
    }

    #[test]
    fn split_is_exact_and_perp_part_annihilates() {
        let (op, fam) = fixture(300);
        let g = GramSpec::pairing(&fam, &op, DEFAULT_PAIR_TOL).unwrap();
        let v = DVector::from_vec(vec![Complex64::new(0.7, 0.1), Complex64::new(-1.2, 2.0)]);
        let (min_part, perp) = split_min_perp(&g, &v).unwrap();
        let back = &min_part + &perp;
        for i in 0..2 {
            assert_abs_diff_eq!(back[i].re, v[i].re, epsilon = 1e-14);
            assert_abs_diff_eq!(back[i].im, v[i].im, epsilon = 1e-14);
        }
        assert!(gram_block_m_norm(&g, &perp) < 1e-12);
    }

    #[test]
    fn single_order_family_has_no_perp_space() {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, 300, -1.0).unwrap();
        let fam = SingularFamily::borderline(&op, 1, 1).unwrap();
        let g = GramSpec::pairing(&fam, &op, DEFAULT_PAIR_TOL).unwrap();
        assert!(h_perp_basis(&g).unwrap().is_empty());
    }

    #[test]
    fn d2_pairing_gram_is_hermitian_and_invertible() {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, 800, -1.0).unwrap();
        let fam = SingularFamily::borderline(&op, 2, 2).unwrap();
        let g = GramSpec::pairing(&fam, &op, DEFAULT_PAIR_TOL).unwrap();
        assert_eq!(g.matrix().nrows(), 4);
        assert!(g.is_invertible());
        // Off-member entries carry the modulation phases.
        assert!(g.entry(0, 1, 1, 1).im.abs() > 1e-3);
    }
}
