//! Operator picture: maximal operator, boundary maps, field and Weyl matrix,
//! and resolvents of the self-adjoint restrictions.
//!
//! A domain element is `f = f# + h_{m+1}(c) + (singular part)` with regular
//! remainder `f#` two rungs up the scale, generator coefficients `c`, and
//! singular coordinates. The maximal action applies `L` to the regular part
//! and the Jordan-type coordinate action to the singular part; the boundary
//! maps read off `c` and the pairing data `<phi, f#> - [G coords]_m`. The
//! abstract Green identity acquires a correction term unless the metrized
//! coordinate action is Hermitian (`gram_action_commutation`); resolvent
//! formulas for boundary restrictions are only available in that regime and
//! refuse to run otherwise.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::boundary::BoundaryCondition;
use crate::conditions::{
    apply_coordinate_action, coordinate_resolvent, gram_action, gram_action_adjoint,
    gram_action_commutation, solve_compatibility, CONDITION_TOL,
};
use crate::error::{Error, Result};
use crate::model::{metric, FamilyLaw, GramSpec, Layout, ModelVector, SingularFamily};
use crate::spectral::{DecayLaw, ScaleVector, SpectralOperator, TailReport};

/// Element of the maximal domain, in split form.
#[derive(Debug, Clone)]
pub struct DomainElement {
    /// Regular remainder, scale index `m + 2`.
    pub f_sharp: ScaleVector,
    /// Coefficients of the regularized generators `h_{m+1}`.
    pub c: DVector<Complex64>,
    /// Singular coordinates in `C^{m d}`.
    pub coords: DVector<Complex64>,
    /// Termwise magnitude law for `f_sharp`, when one is known.
    pub f_sharp_law: Option<DecayLaw>,
}

impl DomainElement {
    pub fn new(
        f_sharp: ScaleVector,
        c: DVector<Complex64>,
        coords: DVector<Complex64>,
        layout: Layout,
    ) -> Result<Self> {
        if f_sharp.index() != layout.m as i32 + 2 {
            return Err(Error::Config(format!(
                "regular remainder must carry scale index {}, got {}",
                layout.m + 2,
                f_sharp.index()
            )));
        }
        if c.len() != layout.d || coords.len() != layout.dim() {
            return Err(Error::Config(
                "domain element blocks do not match the family layout".into(),
            ));
        }
        Ok(DomainElement { f_sharp, c, coords, f_sharp_law: None })
    }

    pub fn with_law(mut self, law: DecayLaw) -> Self {
        self.f_sharp_law = Some(law);
        self
    }

    pub fn add(&self, other: &DomainElement) -> Result<DomainElement> {
        let law = match (self.f_sharp_law, other.f_sharp_law) {
            (Some(a), Some(b)) if a.k_exp == b.k_exp && a.lam_exp == b.lam_exp => {
                Some(DecayLaw::new(a.coeff + b.coeff, a.k_exp, a.lam_exp))
            }
            _ => None,
        };
        Ok(DomainElement {
            f_sharp: self.f_sharp.add(&other.f_sharp)?,
            c: &self.c + &other.c,
            coords: &self.coords + &other.coords,
            f_sharp_law: law,
        })
    }
}

/// The operator picture over one spectral operator, family, and Gram metric.
pub struct OperatorModel<'a> {
    op: &'a SpectralOperator,
    family: &'a SingularFamily,
    gram: &'a GramSpec,
    tol: f64,
}

impl<'a> OperatorModel<'a> {
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
        Ok(OperatorModel { op, family, gram, tol })
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

    /// The element itself as a model vector: regular part `f# + h_{m+1}(c)`,
    /// singular part the coordinates.
    pub fn value(&self, el: &DomainElement) -> Result<ModelVector> {
        let gen = self.family.combination(self.op, self.m() + 1, &el.c)?;
        let regular = el.f_sharp.clone().reindexed(self.m() as i32).add(&gen)?;
        ModelVector::new(regular, el.coords.clone(), self.layout())
    }

    /// Maximal action: `L f# + z1 h_{m+1}(c)` on the regular part, Jordan-type
    /// action plus top-order injection `eta(c)` on the coordinates.
    pub fn max_action(&self, el: &DomainElement) -> Result<ModelVector> {
        let gen = self.family.combination(self.op, self.m() + 1, &el.c)?;
        let regular = self
            .op
            .apply_l(&el.f_sharp)?
            .add(&gen.scale(Complex64::new(self.z1(), 0.0)))?;
        let coords = apply_coordinate_action(self.layout(), self.z1(), &el.coords)
            + self.layout().eta(&el.c);
        ModelVector::new(regular, coords, self.layout())
    }

    /// Metric-adjoint action: same regular part, coordinates moved by
    /// `G^{-1} M_d^H G` instead of `M_d`.
    pub fn dual_action(&self, el: &DomainElement) -> Result<ModelVector> {
        let gen = self.family.combination(self.op, self.m() + 1, &el.c)?;
        let regular = self
            .op
            .apply_l(&el.f_sharp)?
            .add(&gen.scale(Complex64::new(self.z1(), 0.0)))?;
        let coords =
            solve_compatibility(self.gram, self.z1(), &el.coords)? + self.layout().eta(&el.c);
        ModelVector::new(regular, coords, self.layout())
    }

    /// First boundary map: the generator coefficients.
    pub fn gamma0(&self, el: &DomainElement) -> DVector<Complex64> {
        el.c.clone()
    }

    /// Second boundary map: `<phi, f#> - [G coords]_m`, with tail accounting
    /// for the pairing.
    pub fn gamma1(&self, el: &DomainElement) -> Result<(DVector<Complex64>, TailReport)> {
        let (pairings, report) =
            self.family
                .pair_phi(self.op, &el.f_sharp, el.f_sharp_law.as_ref(), self.tol)?;
        Ok((pairings - self.gram.block_m_of(&el.coords), report))
    }

    /// Left side of the abstract Green identity: `[f, A g] - [A f, g]`.
    pub fn boundary_form(&self, f: &DomainElement, g: &DomainElement) -> Result<Complex64> {
        let lhs = metric(self.op, self.gram, &self.value(f)?, &self.max_action(g)?)?;
        let rhs = metric(self.op, self.gram, &self.max_action(f)?, &self.value(g)?)?;
        Ok(lhs - rhs)
    }

    /// Right side of the abstract Green identity:
    /// `<G0 f, G1 g> - <G1 f, G0 g> + <coords_f, (G M - M^H G) coords_g>`.
    /// The correction term vanishes exactly when the metrized action is
    /// Hermitian.
    pub fn boundary_pairing(&self, f: &DomainElement, g: &DomainElement) -> Result<Complex64> {
        let (g1f, _) = self.gamma1(f)?;
        let (g1g, _) = self.gamma1(g)?;
        let skew = gram_action(self.gram, self.z1()) - gram_action_adjoint(self.gram, self.z1());
        let correction = f.coords.dotc(&(&skew * &g.coords));
        Ok(self.gamma0(f).dotc(&g1g) - g1f.dotc(&self.gamma0(g)) + correction)
    }

    /// Green identity with the metric-adjoint action on the second slot:
    /// `[A f, g] - [f, A' g] = <G1 f, G0 g> - <G0 f, G1 g>` holds with no
    /// correction for every Hermitian Gram.
    pub fn green_dual_defect(&self, f: &DomainElement, g: &DomainElement) -> Result<Complex64> {
        let lhs = metric(self.op, self.gram, &self.max_action(f)?, &self.value(g)?)?
            - metric(self.op, self.gram, &self.value(f)?, &self.dual_action(g)?)?;
        let (g1f, _) = self.gamma1(f)?;
        let (g1g, _) = self.gamma1(g)?;
        let rhs = g1f.dotc(&self.gamma0(g)) - self.gamma0(f).dotc(&g1g);
        Ok(lhs - rhs)
    }

    /// Magnitude law for `(L - z)^{-1} h_{m+1}(c)` with `sum |c| = weight`,
    /// when the family supplies one.
    fn generator_law(&self, weight: f64, z: Complex64) -> Option<DecayLaw> {
        match self.family.law() {
            FamilyLaw::Borderline => {
                DecayLaw::new(weight, 0.5, (self.m() as f64 + 1.0) / 2.0).with_resolvent(z, self.op)
            }
            FamilyLaw::Explicit => None,
        }
    }

    /// Field element at `z`: the unique solution of `(A_max - z) f = 0` with
    /// generator coefficients `c`. Regular remainder
    /// `(z - z1)(L - z)^{-1} h_{m+1}(c)`, coordinates
    /// `(z - M_d)^{-1} eta(c)`.
    pub fn field(&self, z: Complex64, c: &DVector<Complex64>) -> Result<DomainElement> {
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
        let coords = -(coordinate_resolvent(self.layout(), self.z1(), z)? * self.layout().eta(c));
        let mut el = DomainElement::new(f_sharp, c.clone(), coords, self.layout())?;
        let weight: f64 = c.iter().map(|x| x.norm()).sum();
        if let Some(law) = self.generator_law(weight, z) {
            el = el.with_law(DecayLaw::new(law.coeff * w.norm(), law.k_exp, law.lam_exp));
        }
        Ok(el)
    }

    /// Regular contribution to the Weyl matrix, delegated to the family.
    pub fn weyl_q(&self, z: Complex64) -> Result<(DMatrix<Complex64>, TailReport)> {
        self.family.regular_weyl(self.op, z, self.tol)
    }

    /// Singular contribution to the Weyl matrix:
    /// `r(z)_{sigma sigma'} = -sum_j [G]_{(sigma,m),(sigma',j)}
    /// (z - z1)^{-(m - j + 1)}`. Pole only at the anchor.
    pub fn weyl_r(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let w = z - Complex64::new(self.z1(), 0.0);
        if w.norm() <= 1e-12 * (1.0 + z.norm()) {
            return Err(Error::Pole { z, what: "singular Weyl contribution at the anchor".into() });
        }
        let d = self.d();
        let m = self.m();
        Ok(DMatrix::from_fn(d, d, |sigma, sp| {
            -(1..=m)
                .map(|j| self.gram.entry(sigma, m, sp, j) * w.powi(-((m - j + 1) as i32)))
                .sum::<Complex64>()
        }))
    }

    /// Weyl matrix by the closed formula `q(z) + r(z)`.
    pub fn weyl(&self, z: Complex64) -> Result<(DMatrix<Complex64>, TailReport)> {
        let (q, report) = self.weyl_q(z)?;
        Ok((q + self.weyl_r(z)?, report))
    }

    /// Weyl matrix by its definition: second boundary map of the field,
    /// column by column. Independent route used to cross-check `weyl`.
    pub fn weyl_via_boundary(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let d = self.d();
        let mut matrix = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for sp in 0..d {
            let mut c = DVector::from_element(d, Complex64::new(0.0, 0.0));
            c[sp] = Complex64::new(1.0, 0.0);
            let el = self.field(z, &c)?;
            let (g1, _) = self.gamma1(&el)?;
            matrix.set_column(sp, &g1);
        }
        Ok(matrix)
    }

    /// Resolvent of the reference restriction (`c = 0`): componentwise
    /// `(L - z)^{-1}` on the regular part and `(M_d - z)^{-1}` on the
    /// coordinates.
    pub fn resolvent_reference(&self, z: Complex64, w: &ModelVector) -> Result<DomainElement> {
        let f_sharp = self.op.resolvent(z, &w.regular)?;
        let coords = coordinate_resolvent(self.layout(), self.z1(), z)? * &w.singular;
        DomainElement::new(
            f_sharp,
            DVector::from_element(self.d(), Complex64::new(0.0, 0.0)),
            coords,
            self.layout(),
        )
    }

    /// Adjoint of the field at `conj(z)` applied to `w`, componentwise the
    /// indefinite-metric pairing with the field elements.
    pub fn field_adjoint_metric(&self, z: Complex64, w: &ModelVector) -> Result<DVector<Complex64>> {
        let mut out = DVector::from_element(self.d(), Complex64::new(0.0, 0.0));
        for sigma in 0..self.d() {
            let mut c = DVector::from_element(self.d(), Complex64::new(0.0, 0.0));
            c[sigma] = Complex64::new(1.0, 0.0);
            let el = self.field(z.conj(), &c)?;
            out[sigma] = metric(self.op, self.gram, &self.value(&el)?, w)?;
        }
        Ok(out)
    }

    /// Same functional by the boundary route: second boundary map of the
    /// reference resolvent. Agrees with `field_adjoint_metric` exactly when
    /// the metrized action is Hermitian.
    pub fn field_adjoint_boundary(
        &self,
        z: Complex64,
        w: &ModelVector,
    ) -> Result<DVector<Complex64>> {
        let el = self.resolvent_reference(z, w)?;
        Ok(self.gamma1(&el)?.0)
    }

    fn require_commutation(&self) -> Result<()> {
        let comm = gram_action_commutation(self.gram, self.z1(), CONDITION_TOL);
        if !comm.satisfied {
            return Err(Error::ConditionFailure(format!(
                "operator-picture resolvents need a Hermitian metrized action; \
                 worst violation {:.3e}",
                comm.worst
            )));
        }
        Ok(())
    }

    /// Resolvent of the restriction selected by a boundary parameter, via the
    /// resolvent-difference formula
    /// `R(z) = R0(z) + field(z) X (Y - M(z) X)^{-1} field(conj z)^*`.
    pub fn resolvent_boundary(
        &self,
        z: Complex64,
        bc: &BoundaryCondition,
        w: &ModelVector,
    ) -> Result<DomainElement> {
        self.require_commutation()?;
        if bc.dim() != self.d() {
            return Err(Error::Config(format!(
                "boundary parameter dimension {} does not match d = {}",
                bc.dim(),
                self.d()
            )));
        }
        let r0 = self.resolvent_reference(z, w)?;
        let u = self.field_adjoint_metric(z, w)?;
        let (mz, _) = self.weyl(z)?;
        let s = bc.correction_coefficients(&mz, &u)?;
        let corr = self.field(z, &s)?;
        r0.add(&corr)
    }

    /// Compression of `resolvent_boundary` to the regular component, computed
    /// without leaving it: `(L-z)^{-1} f` plus field contributions
    /// `(L-z)^{-1} h_m` weighted by the correction coefficients.
    pub fn compressed_resolvent(
        &self,
        z: Complex64,
        bc: &BoundaryCondition,
        f: &ScaleVector,
        f_law: Option<&DecayLaw>,
    ) -> Result<(ScaleVector, TailReport)> {
        self.require_commutation()?;
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

    /// Element hitting prescribed boundary values `(c, target)` at anchor
    /// `z0`: coordinates are chosen freely, the regular remainder is built
    /// from the regular Weyl contribution, `f# = (L - z0)^{-1} h_{m+1}(w)`
    /// with `w = (z0 - z1) q(z0)^{-1} (target + [G coords]_m)`.
    pub fn boundary_witness(
        &self,
        z0: Complex64,
        c: &DVector<Complex64>,
        target: &DVector<Complex64>,
        coords: DVector<Complex64>,
    ) -> Result<DomainElement> {
        let (q0, _) = self.weyl_q(z0)?;
        let tau = target + self.gram.block_m_of(&coords);
        let w = q0
            .lu()
            .solve(&tau)
            .ok_or_else(|| {
                Error::SingularMatrix("regular Weyl contribution is singular at the anchor".into())
            })?
            * (z0 - Complex64::new(self.z1(), 0.0));
        let gen = self.family.combination(self.op, self.m() + 1, &w)?;
        let f_sharp = self.op.resolvent(z0, &gen)?;
        let mut el = DomainElement::new(f_sharp, c.clone(), coords, self.layout())?;
        let weight: f64 = w.iter().map(|x| x.norm()).sum();
        if let Some(law) = self.generator_law(weight, z0) {
            el = el.with_law(law);
        }
        Ok(el)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_PAIR_TOL;
    use approx::assert_abs_diff_eq;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct Setup {
        op: SpectralOperator,
        family: SingularFamily,
        pairing: GramSpec,
        anti: GramSpec,
    }

    fn setup(n: usize) -> Setup {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, n, -1.0).unwrap();
        let family = SingularFamily::borderline(&op, 2, 1).unwrap();
        let pairing = GramSpec::pairing(&family, &op, DEFAULT_PAIR_TOL).unwrap();
        let blocks = [
            DMatrix::from_element(1, 1, c64(1.0, 0.0)),
            DMatrix::from_element(1, 1, c64(1.0, 0.0)),
        ];
        let anti = GramSpec::anti_triangular(2, 1, &blocks).unwrap();
        Setup { op, family, pairing, anti }
    }

    fn sample_elements(s: &Setup) -> (DomainElement, DomainElement) {
        let n = s.op.len();
        let f_sharp = s
            .op
            .vector(
                (0..n)
                    .map(|k0| {
                        let k = (k0 + 1) as f64;
                        c64(1.0, 0.4) * k.powf(-2.5) * s.op.weight(k0, -1)
                    })
                    .collect(),
                4,
            )
            .unwrap();
        let g_sharp = s
            .op
            .vector(
                (0..n)
                    .map(|k0| {
                        let k = (k0 + 1) as f64;
                        c64(-0.3, 1.1) * k.powf(-3.0) * s.op.weight(k0, -1)
                    })
                    .collect(),
                4,
            )
            .unwrap();
        let layout = s.family.layout();
        let f = DomainElement::new(
            f_sharp,
            DVector::from_vec(vec![c64(0.7, -0.2)]),
            DVector::from_vec(vec![c64(1.0, 0.5), c64(-0.4, 0.9)]),
            layout,
        )
        .unwrap();
        let g = DomainElement::new(
            g_sharp,
            DVector::from_vec(vec![c64(-1.2, 0.3)]),
            DVector::from_vec(vec![c64(0.2, -1.5), c64(2.0, 0.1)]),
            layout,
        )
        .unwrap();
        (f, g)
    }

    #[test]
    fn green_identity_with_correction_holds_for_the_pairing_gram() {
        let s = setup(400);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        let (f, g) = sample_elements(&s);
        let lhs = model.boundary_form(&f, &g).unwrap();
        let rhs = model.boundary_pairing(&f, &g).unwrap();
        let scale = lhs.norm().max(1.0);
        assert!((lhs - rhs).norm() / scale < 1e-12, "defect {}", (lhs - rhs).norm());
        // The correction term is genuinely active for this Gram.
        let skew = gram_action(&s.pairing, s.op.z1())
            - gram_action_adjoint(&s.pairing, s.op.z1());
        assert!(f.coords.dotc(&(&skew * &g.coords)).norm() > 1e-3);
    }

    #[test]
    fn green_identity_correction_vanishes_for_commuting_grams() {
        let s = setup(400);
        let model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let (f, g) = sample_elements(&s);
        let lhs = model.boundary_form(&f, &g).unwrap();
        let (g1f, _) = model.gamma1(&f).unwrap();
        let (g1g, _) = model.gamma1(&g).unwrap();
        let bare = model.gamma0(&f).dotc(&g1g) - g1f.dotc(&model.gamma0(&g));
        assert!((lhs - bare).norm() / lhs.norm().max(1.0) < 1e-12);
    }

    #[test]
    fn dual_green_identity_needs_no_correction_for_any_hermitian_gram() {
        let s = setup(400);
        for gram in [&s.pairing, &s.anti] {
            let model = OperatorModel::new(&s.op, &s.family, gram, DEFAULT_PAIR_TOL).unwrap();
            let (f, g) = sample_elements(&s);
            let defect = model.green_dual_defect(&f, &g).unwrap();
            assert!(defect.norm() < 1e-12, "defect {defect} for mode {:?}", gram.mode());
        }
    }

    #[test]
    fn field_solves_the_eigen_equation() {
        let s = setup(500);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        for z in [c64(0.0, 1.0), c64(2.0, -3.0), c64(-5.0, 0.25)] {
            let c = DVector::from_vec(vec![c64(1.0, -0.5)]);
            let el = model.field(z, &c).unwrap();
            let lhs = model.max_action(&el).unwrap();
            let value = model.value(&el).unwrap();
            let scaled = ModelVector::new(
                value.regular.scale(z),
                &value.singular * z,
                model.layout(),
            )
            .unwrap();
            let diff = lhs.sub(&scaled).unwrap();
            let num = crate::model::majorant_norm(&s.op, &s.pairing, &diff).unwrap();
            let den = crate::model::majorant_norm(&s.op, &s.pairing, &lhs).unwrap().max(1.0);
            assert!(num / den < 1e-12, "eigen defect {} at z = {z}", num / den);
            let g0 = model.gamma0(&el);
            assert_abs_diff_eq!(g0[0].re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(g0[0].im, -0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn weyl_routes_agree_for_both_grams() {
        let s = setup(800);
        for gram in [&s.pairing, &s.anti] {
            let model = OperatorModel::new(&s.op, &s.family, gram, DEFAULT_PAIR_TOL).unwrap();
            for z in [c64(0.0, 1.0), c64(1.5, 2.0), c64(-3.0, 0.5)] {
                let (direct, _) = model.weyl(z).unwrap();
                let via = model.weyl_via_boundary(z).unwrap();
                let diff = (&direct - &via).norm() / direct.norm().max(1.0);
                assert!(diff < 1e-10, "route mismatch {diff} at z = {z}");
            }
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn regular_weyl_contribution_matches_frozen_reference() {
        let s = setup(2000);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        // Frozen reference: high-precision evaluation of
        // (i + 1) * sum_k k^{-1} (k^2 + 1)^{-1} (k^2 - i)^{-1} at N = 2000.
        let (q, report) = model.weyl_q(c64(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(q[(0, 0)].re, 0.15913800986341146, epsilon = 1e-12);
        assert_abs_diff_eq!(q[(0, 0)].im, 1.22920778456298776, epsilon = 1e-12);
        assert!(report.converged);
        let (q2, _) = model.weyl_q(c64(0.0, 2.0)).unwrap();
        assert_abs_diff_eq!(q2[(0, 0)].re, -0.54686611046146303, epsilon = 1e-12);
        assert_abs_diff_eq!(q2[(0, 0)].im, 1.21093274288694245, epsilon = 1e-12);
    }

    #[test]
    fn singular_weyl_contribution_is_the_expected_rational_matrix() {
        let s = setup(300);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        let z = c64(1.0, 2.0);
        let w = z - c64(s.op.z1(), 0.0);
        let expected = -(s.pairing.entry(0, 2, 0, 1) * w.powi(-2)
            + s.pairing.entry(0, 2, 0, 2) * w.powi(-1));
        let r = model.weyl_r(z).unwrap();
        assert_abs_diff_eq!(r[(0, 0)].re, expected.re, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(0, 0)].im, expected.im, epsilon = 1e-14);
        assert!(model.weyl_r(c64(s.op.z1(), 0.0)).is_err());
    }

    #[test]
    fn reference_resolvent_satisfies_the_defining_equation() {
        let s = setup(300);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        let w = ModelVector::new(
            s.op.basis_vector(4, 2),
            DVector::from_vec(vec![c64(0.3, -0.7), c64(1.1, 0.2)]),
            model.layout(),
        )
        .unwrap();
        let z = c64(0.5, 1.5);
        let el = model.resolvent_reference(z, &w).unwrap();
        let action = model.max_action(&el).unwrap();
        let value = model.value(&el).unwrap();
        let back = action
            .sub(&ModelVector::new(value.regular.scale(z), &value.singular * z, model.layout()).unwrap())
            .unwrap();
        let diff = back.sub(&w).unwrap();
        assert!(crate::model::majorant_norm(&s.op, &s.pairing, &diff).unwrap() < 1e-12);
        assert_abs_diff_eq!(model.gamma0(&el).norm(), 0.0);
    }

    #[test]
    fn field_adjoint_routes_agree_exactly_when_the_action_commutes() {
        let s = setup(600);
        let w = ModelVector::new(
            s.op.basis_vector(2, 2),
            DVector::from_vec(vec![c64(0.4, 0.9), c64(-1.0, 0.3)]),
            Layout::new(2, 1),
        )
        .unwrap();
        let z = c64(0.7, 1.3);
        let anti_model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let a = anti_model.field_adjoint_metric(z, &w).unwrap();
        let b = anti_model.field_adjoint_boundary(z, &w).unwrap();
        assert!((&a - &b).norm() < 1e-10, "routes differ by {}", (&a - &b).norm());
        let pairing_model =
            OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        let a2 = pairing_model.field_adjoint_metric(z, &w).unwrap();
        let b2 = pairing_model.field_adjoint_boundary(z, &w).unwrap();
        assert!(
            (&a2 - &b2).norm() > 1e-3,
            "without commutation the routes must visibly differ"
        );
    }

    #[test]
    fn boundary_resolvent_solves_equation_and_respects_the_parameter() {
        let s = setup(600);
        let model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let bc = BoundaryCondition::from_matrix(DMatrix::from_element(1, 1, c64(0.7, 0.0)))
            .unwrap();
        let w = ModelVector::new(
            s.op.basis_vector(3, 2),
            DVector::from_vec(vec![c64(0.5, -0.1), c64(0.8, 0.6)]),
            model.layout(),
        )
        .unwrap();
        let z = c64(0.3, 1.1);
        let el = model.resolvent_boundary(z, &bc, &w).unwrap();
        let action = model.max_action(&el).unwrap();
        let value = model.value(&el).unwrap();
        let residual = action
            .sub(&ModelVector::new(value.regular.scale(z), &value.singular * z, model.layout()).unwrap())
            .unwrap()
            .sub(&w)
            .unwrap();
        let num = crate::model::majorant_norm(&s.op, &s.anti, &residual).unwrap();
        assert!(num < 1e-9, "defining equation residual {num}");
        let g0 = model.gamma0(&el);
        let (g1, _) = model.gamma1(&el).unwrap();
        assert!(bc.contains(&g0, &g1, 1e-9), "residual {}", bc.defining_residual(&g0, &g1));
    }

    #[test]
    fn boundary_resolvent_satisfies_the_first_resolvent_identity() {
        let s = setup(500);
        let model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let bc = BoundaryCondition::from_matrix(DMatrix::from_element(1, 1, c64(-0.4, 0.0)))
            .unwrap();
        let w = ModelVector::new(
            s.op.basis_vector(1, 2),
            DVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, -1.0)]),
            model.layout(),
        )
        .unwrap();
        let z = c64(0.0, 1.0);
        let zeta = c64(1.0, -2.0);
        let left = model
            .value(&model.resolvent_boundary(z, &bc, &w).unwrap())
            .unwrap()
            .sub(&model.value(&model.resolvent_boundary(zeta, &bc, &w).unwrap()).unwrap())
            .unwrap();
        let inner = model.value(&model.resolvent_boundary(zeta, &bc, &w).unwrap()).unwrap();
        let right_el = model.resolvent_boundary(z, &bc, &inner).unwrap();
        let right = model.value(&right_el).unwrap();
        let scaled = ModelVector::new(
            right.regular.scale(z - zeta),
            &right.singular * (z - zeta),
            model.layout(),
        )
        .unwrap();
        let diff = left.sub(&scaled).unwrap();
        let num = crate::model::majorant_norm(&s.op, &s.anti, &diff).unwrap();
        let den = crate::model::majorant_norm(&s.op, &s.anti, &left).unwrap().max(1e-12);
        assert!(num / den < 1e-9, "resolvent identity defect {}", num / den);
    }

    #[test]
    fn reference_parameter_reduces_to_the_reference_resolvent() {
        let s = setup(300);
        let model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let bc = BoundaryCondition::fixed_reference(1);
        let w = ModelVector::new(
            s.op.basis_vector(0, 2),
            DVector::from_vec(vec![c64(0.2, 0.4), c64(-0.6, 1.0)]),
            model.layout(),
        )
        .unwrap();
        let z = c64(0.9, 0.8);
        let full = model.resolvent_boundary(z, &bc, &w).unwrap();
        let reference = model.resolvent_reference(z, &w).unwrap();
        let diff = model
            .value(&full)
            .unwrap()
            .sub(&model.value(&reference).unwrap())
            .unwrap();
        assert!(crate::model::majorant_norm(&s.op, &s.anti, &diff).unwrap() < 1e-14);
    }

    #[test]
    fn boundary_resolvent_refuses_noncommuting_grams() {
        let s = setup(300);
        let model = OperatorModel::new(&s.op, &s.family, &s.pairing, DEFAULT_PAIR_TOL).unwrap();
        let bc = BoundaryCondition::from_matrix(DMatrix::from_element(1, 1, c64(0.7, 0.0)))
            .unwrap();
        let w = ModelVector::new(
            s.op.basis_vector(0, 2),
            DVector::from_element(2, c64(0.0, 0.0)),
            model.layout(),
        )
        .unwrap();
        match model.resolvent_boundary(c64(0.0, 1.0), &bc, &w) {
            Err(Error::ConditionFailure(_)) => {}
            other => panic!("expected a condition failure, got {other:?}"),
        }
    }

    #[test]
    fn compressed_resolvent_is_the_projection_of_the_full_one() {
        let s = setup(600);
        let model = OperatorModel::new(&s.op, &s.family, &s.anti, DEFAULT_PAIR_TOL).unwrap();
        let bc = BoundaryCondition::from_matrix(DMatrix::from_element(1, 1, c64(0.3, 0.0)))
            .unwrap();
        let f = s.op.basis_vector(4, 2);
        let z = c64(0.2, 1.7);
        let (compressed, report) = model.compressed_resolvent(z, &bc, &f, None).unwrap();
        assert!(!report.diverged);
        let w = ModelVector::new(f, DVector::from_element(2, c64(0.0, 0.0)), model.layout())
            .unwrap();
        let full = model.resolvent_boundary(z, &bc, &w).unwrap();
        let projected = model.value(&full).unwrap().regular;
        let diff = compressed.sub(&projected).unwrap();
        let num = s.op.norm(2, &diff).unwrap();
        let den = s.op.norm(2, &projected).unwrap().max(1e-12);
        assert!(num / den < 1e-10, "projection mismatch {}", num / den);
    }

    #[test]
    fn boundary_witness_hits_prescribed_values() {
        let s = setup(800);
        for gram in [&s.pairing, &s.anti] {
            let model = OperatorModel::new(&s.op, &s.family, gram, DEFAULT_PAIR_TOL).unwrap();
            let c = DVector::from_vec(vec![c64(0.9, -1.4)]);
            let target = DVector::from_vec(vec![c64(-2.0, 0.5)]);
            let coords = DVector::from_vec(vec![c64(0.3, 0.2), c64(-0.1, 1.0)]);
            let el = model
                .boundary_witness(c64(0.0, 2.0), &c, &target, coords)
                .unwrap();
            let g0 = model.gamma0(&el);
            let (g1, _) = model.gamma1(&el).unwrap();
            assert!((&g0 - &c).norm() < 1e-14);
            assert!(
                (&g1 - &target).norm() < 1e-9,
                "witness misses the target by {}",
                (&g1 - &target).norm()
            );
        }
    }

    #[test]
    fn order_one_singular_weyl_contribution_is_a_simple_pole() {
        let op = SpectralOperator::power(1.0, 2.0, 0.0, 400, -1.0).unwrap();
        let family = SingularFamily::borderline(&op, 1, 1).unwrap();
        let gram = GramSpec::pairing(&family, &op, DEFAULT_PAIR_TOL).unwrap();
        let model = OperatorModel::new(&op, &family, &gram, DEFAULT_PAIR_TOL).unwrap();
        let z = c64(0.5, 0.5);
        let r = model.weyl_r(z).unwrap();
        let expected = -gram.entry(0, 1, 0, 1) / (z - c64(-1.0, 0.0));
        assert_abs_diff_eq!(r[(0, 0)].re, expected.re, epsilon = 1e-14);
        assert_abs_diff_eq!(r[(0, 0)].im, expected.im, epsilon = 1e-14);
    }
}
