//! Self-adjoint boundary parameters in graph form.
//!
//! A boundary parameter is a relation `Theta = {(X v, Y v) : v in C^d}` given
//! by a matrix pair. Self-adjointness of the induced restriction requires the
//! stacked matrix `[X; Y]` to have full rank `d` and `X^H Y` to be Hermitian;
//! both are enforced at construction. Membership of a boundary-value pair
//! `(g0, g1)` is then equivalent to the defining equation `Y^H g0 = X^H g1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BoundaryCondition {
    x: DMatrix<Complex64>,
    y: DMatrix<Complex64>,
}

impl BoundaryCondition {
    pub fn new(x: DMatrix<Complex64>, y: DMatrix<Complex64>) -> Result<Self> {
        let d = x.nrows();
        if x.ncols() != d || y.nrows() != d || y.ncols() != d {
            return Err(Error::Config(format!(
                "boundary parameter blocks must both be {d} x {d}"
            )));
        }
        let mut stacked = DMatrix::from_element(2 * d, d, Complex64::new(0.0, 0.0));
        stacked.view_mut((0, 0), (d, d)).copy_from(&x);
        stacked.view_mut((d, 0), (d, d)).copy_from(&y);
        let svd = stacked.svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !smax.is_finite() || smax <= 0.0 || smin <= 1e-10 * smax {
            return Err(Error::Config(
                "boundary parameter blocks do not have full joint rank".into(),
            ));
        }
        let xy = x.adjoint() * &y;
        let defect = (&xy - xy.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        let scale = xy.iter().map(|e| e.norm()).fold(0.0, f64::max).max(1.0);
        if defect > 1e-12 * scale {
            return Err(Error::Config(format!(
                "boundary parameter is not self-adjoint (X^H Y defect {defect:.3e})"
            )));
        }
        Ok(BoundaryCondition { x, y })
    }

    /// Graph of a Hermitian matrix: the condition `g1 = T g0`.
    pub fn from_matrix(t: DMatrix<Complex64>) -> Result<Self> {
        let d = t.nrows();
        BoundaryCondition::new(DMatrix::identity(d, d), t)
    }

    /// The condition `g0 = 0` (the reference restriction itself).
    pub fn fixed_reference(d: usize) -> Self {
        BoundaryCondition {
            x: DMatrix::from_element(d, d, Complex64::new(0.0, 0.0)),
            y: DMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn x(&self) -> &DMatrix<Complex64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<Complex64> {
        &self.y
    }

    /// Residual of the defining equation `Y^H g0 - X^H g1`, relative to the
    /// data scale.
    pub fn defining_residual(&self, g0: &DVector<Complex64>, g1: &DVector<Complex64>) -> f64 {
        let res = (self.y.adjoint() * g0 - self.x.adjoint() * g1).norm();
        let scale = (g0.norm() + g1.norm()).max(1.0);
        res / scale
    }

    pub fn contains(&self, g0: &DVector<Complex64>, g1: &DVector<Complex64>, tol: f64) -> bool {
        self.defining_residual(g0, g1) <= tol
    }

    /// The correction coefficients `X (Y - M X)^{-1} u` entering the resolvent
    /// difference formula at a point where `M` is the sampled Weyl matrix.
    pub fn correction_coefficients(
        &self,
        m: &DMatrix<Complex64>,
        u: &DVector<Complex64>,
    ) -> Result<DVector<Complex64>> {
        let a = &self.y - m * &self.x;
        let s = a.lu().solve(u).ok_or_else(|| {
            Error::SingularMatrix(
                "boundary parameter hits an eigenvalue: Y - M X is singular".into(),
            )
        })?;
        Ok(&self.x * s)
    }
}
