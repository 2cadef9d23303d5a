//! Relation picture: graph pairs, boundary maps, the reduced singular matrix,
//! and resolvents of the boundary restrictions.
//!
//! Here the perturbed object is a linear relation rather than an operator: a
//! graph pair `(f, f')` carries, besides the regular remainder `f#` and the
//! generator coefficients `c`, top-order singular coefficients `chi` on the
//! left and a free coordinate vector `k_perp` on the right, constrained by
//! `[G k_perp]_m = 0`. The singular dynamics collapse onto the `d x d`
//! matrices `Delta = [G M_d]` restricted to top order and `Delta_hat =
//! (G_min)^{-1} Delta`.
//!
//! Every construction here is exact linear algebra valid for any Hermitian
//! invertible Gram; the full commutation conditions of the operator picture
//! are never needed. Symmetry of the restrictions, realness of the spectrum
//! of `Delta_hat`, and the Nevanlinna property of the Weyl matrix hold when
//! the adjacent top-order pair of the Gram is symmetric and its top-order
//! block is positive, which callers check through the condition diagnostics
//! before trusting those interpretations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::BoundaryCondition;
use crate::conditions::{apply_coordinate_action, coordinate_action, gram_action};
use crate::error::{Error, Result};
use crate::model::{metric, phi_map, GramSpec, Layout, ModelVector, SingularFamily};
use crate::spectral::{DecayLaw, ScaleVector, SpectralOperator, TailReport};

/// One graph pair of the maximal relation, in split form.
#[derive(Debug, Clone)]
pub struct GraphElement {
    /// Regular remainder, scale index `m + 2`.
    pub f_sharp: ScaleVector,
    /// Coefficients of the regularized generators `h_{m+1}` on the left side.
    pub c: DVector<Complex64>,
    /// Top-order singular coefficients on the left side.
    pub chi: DVector<Complex64>,
    /// Free coordinate part of the right side; `[G k_perp]_m = 0`.
    pub k_perp: DVector<Complex64>,
    /// Termwise magnitude law for `f_sharp`, when one is known.
    pub f_sharp_law: Option<DecayLaw>,
}

impl GraphElement {
    pub fn new(
        f_sharp: ScaleVector,
        c: DVector<Complex64>,
        chi: DVector<Complex64>,
        k_perp: DVector<Complex64>,
        layout: Layout,
    ) -> Result<Self> {
        if f_sharp.index() != layout.m as i32 + 2 {
            return Err(Error::Config(format!(
                "regular remainder must carry scale index {}, got {}",
                layout.m + 2,
                f_sharp.index()
            )));
        }
        if c.len() != layout.d || chi.len() != layout.d || k_perp.len() != layout.dim() {
            return Err(Error::Config(
                "graph element blocks do not match the family layout".into(),
            ));
        }
        Ok(GraphElement { f_sharp, c, chi, k_perp, f_sharp_law: None })
    }

    pub fn with_law(mut self, law: DecayLaw) -> Self {
        self.f_sharp_law = Some(law);
        self
    }

    pub fn add(&self, other: &GraphElement) -> Result<GraphElement> {
        let law = match (self.f_sharp_law, other.f_sharp_law) {
            (Some(a), Some(b)) if a.k_exp == b.k_exp && a.lam_exp == b.lam_exp => {
                Some(DecayLaw::new(a.coeff + b.coeff, a.k_exp, a.lam_exp))
            }
            _ => None,
        };
        Ok(GraphElement {
            f_sharp: self.f_sharp.add(&other.f_sharp)?,
            c: &self.c + &other.c,
            chi: &self.chi + &other.chi,
            k_perp: &self.k_perp + &other.k_perp,
            f_sharp_law: law,
        })
    }
}

/// Outcome of the rank-deficiency probe for the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplicityVerdict {
    Simple,
    Inconclusive,
    Degenerate,
}

/// Report of the simplicity probe.
#[derive(Debug, Clone, Serialize)]
pub struct SimplicityReport {
    #[serde(rename = "sigmaMin")]
    pub sigma_min: f64,
    pub threshold: f64,
    pub verdict: SimplicityVerdict,
    pub points: usize,
    pub unknowns: usize,
    pub equations: usize,
}

/// Default singular-value threshold separating `Simple` from `Inconclusive`.
pub const SIMPLICITY_THRESHOLD: f64 = 1e-6;

/// Default number of leading regular coefficients probed for a common kernel.
pub const SIMPLICITY_COEFFS: usize = 12;

/// The relation picture over one spectral operator, family, and Gram metric.
pub struct RelationModel<'a> {
    op: &'a SpectralOperator,
    family: &'a SingularFamily,
    gram: &'a GramSpec,
    tol: f64,
}

impl<'a> RelationModel<'a> {
    pub fn new(
        op: &'a SpectralOperator,
        family: &'a SingularFamily,
        gram: &'a GramSpec,
        tol: f64,
    ) -> Result<Self> {
        if gram.layout() != family.layout() {
            return Err(Error::Config(format!(
                "Gram layout ({}, {}) does not match family layout ({}, {})",
                gram.m(),
                gram.d(),
                family.m(),
                family.d()
            )));
        }
        Ok(RelationModel { op, family, gram, tol })
    }

    pub fn layout(&self) -> Layout {
        self.gram.layout()
    }

    pub fn gram(&self) -> &GramSpec {
        self.gram
    }

    fn z1(&self) -> f64 {
        self.op.z1()
    }

    fn m(&self) -> usize {
        self.family.m()
    }

    fn d(&self) -> usize {
        self.family.d()
    }

    /// Left side of the pair: regular part `f# + h_{m+1}(c)`, coordinates
    /// `eta(chi)`.
    pub fn left(&self, el: &GraphElement) -> Result<ModelVector> {
        let gen = self.family.combination(self.op, self.m() + 1, &el.c)?;
        let regular = el.f_sharp.clone().reindexed(self.m() as i32).add(&gen)?;
        ModelVector::new(regular, self.layout().eta(&el.chi), self.layout())
    }

    /// Right side of the pair: regular part `L f# + z1 h_{m+1}(c)`,
    /// coordinates `M_d eta(chi) + eta(c) + k_perp`.
    pub fn right(&self, el: &GraphElement) -> Result<ModelVector> {
        let gen = self.family.combination(self.op, self.m() + 1, &el.c)?;
        let regular = self
            .op
            .apply_l(&el.f_sharp)?
            .add(&gen.scale(Complex64::new(self.z1(), 0.0)))?;
        let coords = apply_coordinate_action(self.layout(), self.z1(), &self.layout().eta(&el.chi))
            + self.layout().eta(&el.c)
            + &el.k_perp;
        ModelVector::new(regular, coords, self.layout())
    }

    /// Residual of the constraint on the free right-side part.
    pub fn perp_residual(&self, el: &GraphElement) -> f64 {
        self.gram.block_m_of(&el.k_perp).norm()
    }

    pub fn gamma0(&self, el: &GraphElement) -> DVector<Complex64> {
        el.c.clone()
    }

    /// Second boundary map: `<phi, f#> - G_min chi`.
    pub fn gamma1(&self, el: &GraphElement) -> Result<(DVector<Complex64>, TailReport)> {
        let (pairings, report) =
            self.family
                .pair_phi(self.op, &el.f_sharp, el.f_sharp_law.as_ref(), self.tol)?;
        Ok((pairings - self.gram.min_block() * &el.chi, report))
    }

    /// Left side of the Green identity for graph pairs: `[f', g] - [f, g']`.
    pub fn green_form(&self, f: &GraphElement, g: &GraphElement) -> Result<Complex64> {
        let lhs = metric(self.op, self.gram, &self.right(f)?, &self.left(g)?)?;
        let rhs = metric(self.op, self.gram, &self.left(f)?, &self.right(g)?)?;
        Ok(lhs - rhs)
    }

    /// Right side of the Green identity:
    /// `<G1 f, G0 g> - <G0 f, G1 g> + <chi_f, (Delta^H - Delta) chi_g>`.
    /// The correction term vanishes exactly when the adjacent top-order pair
    /// of the Gram is symmetric.
    pub fn green_pairing(&self, f: &GraphElement, g: &GraphElement) -> Result<Complex64> {
        let (g1f, _) = self.gamma1(f)?;
        let (g1g, _) = self.gamma1(g)?;
        let delta = self.delta();
        let skew = delta.adjoint() - &delta;
        let correction = f.chi.dotc(&(&skew * &g.chi));
        Ok(g1f.dotc(&self.gamma0(g)) - self.gamma0(f).dotc(&g1g) + correction)
    }

    /// Top-order block of the metrized coordinate action, extracted from the
    /// full product `G M_d`.
    pub fn delta(&self) -> DMatrix<Complex64> {
        let layout = self.layout();
        let full = gram_action(self.gram, self.z1());
        DMatrix::from_fn(layout.d, layout.d, |s, sp| {
            full[(layout.flat(s, layout.m), layout.flat(sp, layout.m))]
        })
    }

    /// Same block by the entrywise formula
    /// `z1 G_min + [G]_{(sigma, m-1),(sigma', m)}` (second term absent for
    /// `m = 1`). Agrees with `delta` exactly when the adjacent pair is
    /// symmetric.
    pub fn delta_displayed(&self) -> DMatrix<Complex64> {
        let layout = self.layout();
        let mut out = self.gram.min_block().scale(self.z1());
        if layout.m >= 2 {
            for s in 0..layout.d {
                for sp in 0..layout.d {
                    out[(s, sp)] += self.gram.entry(s, layout.m - 1, sp, layout.m);
                }
            }
        }
        out
    }

    /// Reduced singular matrix `Delta_hat = (G_min)^{-1} Delta`.
    pub fn delta_hat(&self) -> Result<DMatrix<Complex64>> {
        let min = self.gram.min_block();
        min.lu()
            .solve(&self.delta())
            .ok_or_else(|| Error::SingularMatrix("top-order Gram block is singular".into()))
    }

    /// Spectrum of `Delta_hat` by a general (non-symmetric) eigensolver;
    /// realness of the imaginary parts is a structural consequence, not an
    /// input.
    pub fn delta_hat_eigenvalues_general(&self) -> Result<Vec<Complex64>> {
        let dh = self.delta_hat()?;
        let eig = dh
            .eigenvalues()
            .ok_or_else(|| Error::SingularMatrix("eigenvalue iteration failed".into()))?;
        let mut out: Vec<Complex64> = eig.iter().cloned().collect();
        out.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite eigenvalues")
        });
        Ok(out)
    }

    /// Spectrum of `Delta_hat` through the Hermitian similarity
    /// `G_min^{-1/2} Delta G_min^{-1/2}`; needs the top-order block positive.
    pub fn delta_hat_spectrum_symmetrized(&self) -> Result<Vec<f64>> {
        let min = self.gram.min_block();
        let herm = (&min + min.adjoint()).scale(0.5);
        let eig = herm.symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::ConditionFailure(
                "top-order Gram block is not positive definite".into(),
            ));
        }
        let d = min.nrows();
        let mut inv_sqrt = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for i in 0..d {
            let li = 1.0 / eig.eigenvalues[i].sqrt();
            let ui = eig.eigenvectors.column(i);
            for r in 0..d {
                for c in 0..d {
                    inv_sqrt[(r, c)] += ui[r] * ui[c].conj() * Complex64::new(li, 0.0);
                }
            }
        }
        let sym = &inv_sqrt * self.delta() * &inv_sqrt;
        let herm_sym = (&sym + sym.adjoint()).scale(0.5);
        let mut vals: Vec<f64> = herm_sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Ok(vals)
    }

    /// Singular contribution to the Weyl matrix,
    /// `r_hat(z) = G_min (Delta_hat - z)^{-1}`.
    pub fn weyl_singular(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let d = self.d();
        let dh = self.delta_hat()?;
        let shifted = dh - DMatrix::from_diagonal_element(d, d, z);
        let inv = shifted.lu().solve(&DMatrix::identity(d, d)).ok_or_else(|| {
            Error::SingularMatrix(format!("reduced singular matrix hits the point {z}"))
        })?;
        Ok(self.gram.min_block() * inv)
    }

    /// Same matrix by the sandwich formula
    /// `G_min (Delta - z G_min)^{-1} G_min`; independent route used in tests.
    pub fn weyl_singular_sandwich(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let min = self.gram.min_block();
        let shifted = self.delta() - min.scale(1.0) * z;
        let inv = shifted
            .lu()
            .solve(&min)
            .ok_or_else(|| Error::SingularMatrix(format!("singular pencil at {z}")))?;
        Ok(min * inv)
    }

    /// Weyl matrix `q(z) + r_hat(z)`.
    pub fn weyl(&self, z: Complex64) -> Result<(DMatrix<Complex64>, TailReport)> {
        let (q, report) = self.family.regular_weyl(self.op, z, self.tol)?;
        Ok((q + self.weyl_singular(z)?, report))
    }

    fn generator_law(&self, weight: f64, z: Complex64) -> Option<DecayLaw> {
        match self.family.law() {
            crate::model::FamilyLaw::Borderline => {
                DecayLaw::new(weight, 0.5, (self.m() as f64 + 1.0) / 2.0).with_resolvent(z, self.op)
            }
            crate::model::FamilyLaw::Explicit => None,
        }
    }

    /// Graph eigenpair at `z`: `(f, z f)` belongs to the maximal relation with
    /// generator coefficients `c`. The top-order coefficients solve
    /// `chi = (z - Delta_hat)^{-1} c` so that the free part stays admissible.
    pub fn field(&self, z: Complex64, c: &DVector<Complex64>) -> Result<GraphElement> {
        if c.len() != self.d() {
            return Err(Error::Config(format!(
                "field wants {} coefficients, got {}",
                self.d(),
                c.len()
            )));
        }
        let w = z - Complex64::new(self.z1(), 0.0);
        let gen = self.family.combination(self.op, self.m() + 1, c)?;
        let f_sharp = self.op.resolvent(z, &gen)?.scale(w);
        let d = self.d();
        let dh = self.delta_hat()?;
        let shifted = DMatrix::from_diagonal_element(d, d, z) - dh;
        let chi = shifted
            .lu()
            .solve(c)
            .ok_or_else(|| Error::SingularMatrix(format!("reduced singular matrix hits {z}")))?;
        let k_perp = self.perp_completion(z, &chi, c);
        let mut el = GraphElement::new(f_sharp, c.clone(), chi, k_perp, self.layout())?;
        let weight: f64 = c.iter().map(|x| x.norm()).sum();
        if let Some(law) = self.generator_law(weight, z) {
            el = el.with_law(DecayLaw::new(law.coeff * w.norm(), law.k_exp, law.lam_exp));
        }
        Ok(el)
    }

    /// The free right-side part making `(f, z f)` exact:
    /// `k_perp = (z - M_d) eta(chi) - eta(c)`.
    fn perp_completion(
        &self,
        z: Complex64,
        chi: &DVector<Complex64>,
        c: &DVector<Complex64>,
    ) -> DVector<Complex64> {
        let layout = self.layout();
        let eta_chi = layout.eta(chi);
        let action = coordinate_action(layout, self.z1());
        (DMatrix::from_diagonal_element(layout.dim(), layout.dim(), z) - action) * eta_chi
            - layout.eta(c)
    }

    /// Resolvent of the reference restriction (`c = 0`): regular part
    /// `(L - z)^{-1}`, top-order coefficients `(Delta_hat - z)^{-1} Phi(v)`.
    pub fn resolvent_reference(&self, z: Complex64, w: &ModelVector) -> Result<GraphElement> {
        let f_sharp = self.op.resolvent(z, &w.regular)?;
        let d = self.d();
        let dh = self.delta_hat()?;
        let shifted = dh - DMatrix::from_diagonal_element(d, d, z);
        let phi_part = phi_map(self.gram, &w.singular)?;
        let chi = shifted
            .lu()
            .solve(&phi_part)
            .ok_or_else(|| Error::SingularMatrix(format!("reduced singular matrix hits {z}")))?;
        let zero_c = DVector::from_element(d, Complex64::new(0.0, 0.0));
        let k_perp = self.perp_completion(z, &chi, &zero_c) + &w.singular;
        GraphElement::new(f_sharp, zero_c, chi, k_perp, self.layout())
    }

    /// Adjoint of the field at `conj(z)` applied to `w`, componentwise the
    /// indefinite-metric pairing with the left sides of the field pairs.
    pub fn field_adjoint_metric(&self, z: Complex64, w: &ModelVector) -> Result<DVector<Complex64>> {
        let mut out = DVector::from_element(self.d(), Complex64::new(0.0, 0.0));
        for sigma in 0..self.d() {
            let mut c = DVector::from_element(self.d(), Complex64::new(0.0, 0.0));
            c[sigma] = Complex64::new(1.0, 0.0);
            let el = self.field(z.conj(), &c)?;
            out[sigma] = metric(self.op, self.gram, &self.left(&el)?, w)?;
        }
        Ok(out)
    }

    /// Same functional by the boundary route: second boundary map of the
    /// reference resolvent.
    pub fn field_adjoint_boundary(
        &self,
        z: Complex64,
        w: &ModelVector,
    ) -> Result<DVector<Complex64>> {
        let el = self.resolvent_reference(z, w)?;
        Ok(self.gamma1(&el)?.0)
    }

    /// Resolvent of the restriction selected by a boundary parameter, via the
    /// resolvent-difference formula. The correction data comes from the
    /// boundary route, which keeps the construction exact linear algebra.
    pub fn resolvent_boundary(
        &self,
        z: Complex64,
        bc: &BoundaryCondition,
        w: &ModelVector,
    ) -> Result<GraphElement> {
        if bc.dim() != self.d() {
            return Err(Error::Config(format!(
                "boundary parameter dimension {} does not match d = {}",
                bc.dim(),
                self.d()
            )));
        }
        let r0 = self.resolvent_reference(z, w)?;
        let (u, _) = self.gamma1(&r0)?;
        let (mz, _) = self.weyl(z)?;
        let s = bc.correction_coefficients(&mz, &u)?;
        let corr = self.field(z, &s)?;
        r0.add(&corr)
    }

    /// Compression of `resolvent_boundary` to the regular component.
    pub fn compressed_resolvent(
        &self,
        z: Complex64,
        bc: &BoundaryCondition,
        f: &ScaleVector,
        f_law: Option<&DecayLaw>,
    ) -> Result<(ScaleVector, TailReport)> {
        let rf = self.op.resolvent(z, f)?;
        let folded = f_law.and_then(|l| l.with_resolvent(z, self.op));
        let (u, report) = self.family.pair_phi(self.op, &rf, folded.as_ref(), self.tol)?;
        let (mz, _) = self.weyl(z)?;
        let s = bc.correction_coefficients(&mz, &u)?;
        let generators = self.family.combination(self.op, self.m(), &s)?;
        let tail = self.op.resolvent(z, &generators)?;
        let value = rf.reindexed(self.m() as i32).add(&tail.reindexed(self.m() as i32))?;
        Ok((value, report))
    }

    /// Graph element hitting prescribed boundary values `(c, target)`:
    /// top-order coefficients `chi0` are free, the regular remainder is built
    /// from the regular Weyl contribution at the anchor `z0`.
    pub fn boundary_witness(
        &self,
        z0: Complex64,
        c: &DVector<Complex64>,
        target: &DVector<Complex64>,
        chi0: DVector<Complex64>,
    ) -> Result<GraphElement> {
        let (q0, _) = self.family.regular_weyl(self.op, z0, self.tol)?;
        let tau = target + self.gram.min_block() * &chi0;
        let w = q0
            .lu()
            .solve(&tau)
            .ok_or_else(|| {
                Error::SingularMatrix("regular Weyl contribution is singular at the anchor".into())
            })?
            * (z0 - Complex64::new(self.z1(), 0.0));
        let gen = self.family.combination(self.op, self.m() + 1, &w)?;
        let f_sharp = self.op.resolvent(z0, &gen)?;
        let zero_perp = DVector::from_element(self.layout().dim(), Complex64::new(0.0, 0.0));
        let mut el = GraphElement::new(f_sharp, c.clone(), chi0, zero_perp, self.layout())?;
        let weight: f64 = w.iter().map(|x| x.norm()).sum();
        if let Some(law) = self.generator_law(weight, z0) {
            el = el.with_law(law);
        }
        Ok(el)
    }

    /// Element of the minimal restriction: both boundary maps vanish, the
    /// free part is zero, and the top-order coefficients are prescribed.
    pub fn minimal_witness(&self, z0: Complex64, chi: DVector<Complex64>) -> Result<GraphElement> {
        let zero = DVector::from_element(self.d(), Complex64::new(0.0, 0.0));
        self.boundary_witness(z0, &zero.clone(), &zero, chi)
    }

    /// Defect of the dissipation identity
    /// `Im r_hat(z) / Im z = r_hat(z) G_min^{-1} r_hat(z)^H` together with the
    /// smallest eigenvalue of the right-hand side (which is Hermitian positive
    /// when the relation structure holds).
    pub fn dissipation_identity(&self, z: Complex64) -> Result<(f64, f64)> {
        if z.im.abs() < 1e-12 {
            return Err(Error::Config("dissipation identity needs a nonreal point".into()));
        }
        let r = self.weyl_singular(z)?;
        let im_part = (&r - r.adjoint()).scale(0.5) / Complex64::new(0.0, z.im);
        let min = self.gram.min_block();
        let product = &r
            * min
                .lu()
                .solve(&r.adjoint())
                .ok_or_else(|| Error::SingularMatrix("top-order Gram block is singular".into()))?;
        let defect = (&im_part - &product).norm() / product.norm().max(1e-300);
        let herm = (&product + product.adjoint()).scale(0.5);
        let eig = herm.symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((defect, min_eig))
    }

    /// Probes for a common kernel among the sampled field functionals: the
    /// smallest singular value of the system whose rows pair a candidate
    /// vector (leading regular coefficients plus top-order singular
    /// coefficients) against the field data at each point. A comfortably
    /// positive value certifies that no such kernel vector exists at this
    /// resolution; a collapse to zero exhibits one.
    pub fn check_simplicity(
        &self,
        points: &[Complex64],
        n_coeffs: usize,
        threshold: f64,
    ) -> Result<SimplicityReport> {
        let d = self.d();
        let n_f = n_coeffs.min(self.op.len());
        let unknowns = n_f + d;
        let equations = points.len() * d;
        if equations < unknowns {
            return Err(Error::Config(format!(
                "simplicity probe needs at least {unknowns} equations, got {equations}"
            )));
        }
        let half_m = -(self.m() as f64) / 2.0;
        let mut system = DMatrix::from_element(equations, unknowns, Complex64::new(0.0, 0.0));
        for (i, &z) in points.iter().enumerate() {
            let rhat = self.weyl_singular(z)?;
            for sigma in 0..d {
                let row = i * d + sigma;
                for k0 in 0..n_f {
                    let weight = (self.op.eigenvalue(k0) - self.z1()).powf(half_m);
                    system[(row, k0)] = self.family.phi(sigma).coeffs()[k0].conj()
                        * weight
                        / (Complex64::new(self.op.eigenvalue(k0), 0.0) - z);
                }
                for tau in 0..d {
                    system[(row, n_f + tau)] = -rhat[(sigma, tau)];
                }
            }
        }
        let svd = system.svd(false, false);
        let sigma_min = svd.singular_values.min();
        let verdict = if sigma_min >= threshold {
            SimplicityVerdict::Simple
        } else if sigma_min < 0.01 * threshold {
            SimplicityVerdict::Degenerate
        } else {
            SimplicityVerdict::Inconclusive
        };
        Ok(SimplicityReport {
            sigma_min,
            threshold,
            verdict,
            points: points.len(),
            unknowns,
            equations,
        })
    }
}

/// Default sampling points for the simplicity probe: two geometric ladders in
/// the upper half plane.
pub fn default_simplicity_points() -> Vec<Complex64> {
    let mut points = Vec::with_capacity(24);
    for j in 0..12 {
        let t = 2.0_f64.powi(j);
        points.push(Complex64::new(0.0, t));
        points.push(Complex64::new(t, t));
    }
    points
}
