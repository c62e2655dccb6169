use faer::{c64, Col};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::model::{Operator, DIM};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite 8×8 state of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(m: Operator) -> Result<Self> {
        if (m.nrows(), m.ncols()) != (DIM, DIM) {
            return Err(Error::Domain(format!("density matrix must be {DIM}x{DIM}")));
        }
        let herm = linalg::hermiticity_defect(&m);
        if herm > HERMITIAN_TOL {
            return Err(Error::Domain(format!(
                "density matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = linalg::trace(&m);
        if (tr - linalg::real(1.0)).norm() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let min = linalg::hermitian_eigenvalues(&m)?[0];
        if min < -PSD_TOL {
            return Err(Error::Domain(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(m))
    }

    /// Takes the Hermitian part and rescales to unit trace without checking positivity.
    pub(crate) fn normalized_unchecked(m: &Operator) -> Result<Self> {
        let h = linalg::hermitian_part(m);
        let tr = linalg::trace(&h).re;
        if !(tr.abs() > f64::EPSILON) {
            return Err(Error::Consistency(format!(
                "cannot normalize operator with trace {tr:e}"
            )));
        }
        Ok(Self(linalg::scale(linalg::real(1.0 / tr), &h)))
    }

    pub fn maximally_mixed() -> Self {
        Self(linalg::scale(
            linalg::real(1.0 / DIM as f64),
            &linalg::identity(DIM),
        ))
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &Col<c64>) -> Result<Self> {
        let norm = psi.norm_l2();
        if psi.nrows() != DIM || !(norm > 0.0) {
            return Err(Error::Domain(
                "pure state needs a nonzero vector of length 8".into(),
            ));
        }
        let v = faer::Scale(linalg::real(1.0 / norm)) * psi;
        Ok(Self(linalg::outer(&v, &v)))
    }

    pub fn matrix(&self) -> &Operator {
        &self.0
    }

    pub fn into_matrix(self) -> Operator {
        self.0
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(linalg::hermitian_eigenvalues(&self.0)?[0])
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        linalg::trace_distance(&self.0, &other.0)
    }

    /// `U ρ U†`.
    pub fn transformed(&self, u: &CMat) -> Self {
        Self(u * &self.0 * u.adjoint())
    }
}
