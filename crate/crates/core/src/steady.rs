//! Steady state of the master equation.
//!
//! The primary route extracts the null vector of the 64×64 generator. The
//! effective-Hamiltonian form `H_T` on the system ⊗ ancilla space is assembled
//! separately and checked against the generator (`−i H_T = M`). RK4 time
//! propagation is an independent route used for cross-validation.

use faer::{c64, Col, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I};
use crate::lindblad::{self, BathSpec, Superoperator};
use crate::model::{self, ModelParams, Operator, DIM};
use crate::state::DensityMatrix;

/// A second-smallest generator eigenvalue at or below this magnitude means
/// the steady state is not unique.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

/// Most negative eigenvalue tolerated in a computed steady state.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NullSpace,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub method: Method,
    /// `‖M vec(ρ_ss)‖`.
    pub residual: f64,
    /// Magnitude of the second-smallest generator eigenvalue. Only the
    /// null-space route computes it.
    pub null_gap: Option<f64>,
    pub min_eigenvalue: f64,
    /// Propagation time reached (RK4 only).
    pub time: Option<f64>,
}

fn residual(m: &Superoperator, rho: &DensityMatrix) -> f64 {
    (m.matrix() * linalg::vectorize(rho.matrix())).norm_l2()
}

fn check_positivity(rho: &DensityMatrix) -> Result<f64> {
    let min = rho.min_eigenvalue()?;
    if min < -POSITIVITY_TOL {
        return Err(Error::Positivity {
            min_eigenvalue: min,
        });
    }
    Ok(min)
}

/// Null vector of a generator, normalized to a density matrix.
pub fn null_space_state(
    m: &Superoperator,
    gap_tol: f64,
) -> Result<(DensityMatrix, SolveDiagnostics)> {
    let evd = m.matrix().eigen().map_err(|_| Error::Eigen)?;
    let values: Vec<c64> = evd.S().column_vector().iter().copied().collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].norm().total_cmp(&values[b].norm()));
    let null_gap = values[order[1]].norm();
    if null_gap <= gap_tol {
        return Err(Error::NonUniqueSteadyState {
            gap: null_gap,
            tol: gap_tol,
        });
    }
    let v: Col<c64> = evd.U().col(order[0]).to_owned();
    let raw = linalg::unvectorize(&v, DIM);
    let tr = linalg::trace(&raw);
    if tr.norm() < 1e-12 {
        return Err(Error::Consistency("null vector has vanishing trace".into()));
    }
    let rho = DensityMatrix::normalized_unchecked(&linalg::scale(tr.inv(), &raw))?;
    let min_eigenvalue = check_positivity(&rho)?;
    let diagnostics = SolveDiagnostics {
        method: Method::NullSpace,
        residual: residual(m, &rho),
        null_gap: Some(null_gap),
        min_eigenvalue,
        time: None,
    };
    Ok((rho, diagnostics))
}

/// Unique steady state via the null space of the generator.
pub fn steady_state_null(
    params: &ModelParams,
    baths: &BathSpec,
) -> Result<(DensityMatrix, SolveDiagnostics)> {
    null_space_state(&lindblad::liouvillian(params, baths)?, DEFAULT_GAP_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Options {
    /// Fixed step; `None` picks one from a bound on the generator's spectral radius.
    pub step: Option<f64>,
    pub max_time: f64,
    /// Stop once `‖M vec(ρ)‖` falls below this.
    pub conv_tol: f64,
}

impl Default for Rk4Options {
    fn default() -> Self {
        Self {
            step: None,
            max_time: 1e6,
            conv_tol: 1e-9,
        }
    }
}

/// Max absolute row sum, an upper bound on the spectral radius.
fn spectral_radius_bound(m: &CMat) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Step used when [`Rk4Options::step`] is unset: keeps `h·|λ| ≤ 1` for every
/// generator eigenvalue, well inside the RK4 stability region.
pub fn default_rk4_step(m: &Superoperator) -> f64 {
    1.0 / spectral_radius_bound(m.matrix()).max(f64::MIN_POSITIVE)
}

fn trace_of_vec(v: &Col<c64>) -> c64 {
    (0..DIM).map(|k| v[k * (DIM + 1)]).sum()
}

/// Integrates `∂ρ = M ρ` from `rho0` with the classical fourth-order Runge–Kutta
/// scheme until the generator residual drops below `conv_tol`.
pub fn rk4_state(
    m: &Superoperator,
    rho0: &DensityMatrix,
    opts: &Rk4Options,
) -> Result<(DensityMatrix, SolveDiagnostics)> {
    let h = opts.step.unwrap_or_else(|| default_rk4_step(m));
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("RK4 step must be positive, got {h}")));
    }
    let gen = m.matrix();
    let n = gen.nrows();
    let id = linalg::identity(n);
    // For an autonomous linear system the four RK4 stages collapse to the
    // degree-4 Taylor polynomial of hM, applied once per step.
    let hm = linalg::scale(linalg::real(h), gen);
    let mut propagator = &id + linalg::scale(linalg::real(0.25), &hm);
    for k in [3.0, 2.0, 1.0] {
        propagator = &id + linalg::scale(linalg::real(1.0 / k), &(&hm * &propagator));
    }

    const CHECK_EVERY: usize = 8;
    let mut v = linalg::vectorize(rho0.matrix());
    let mut t = 0.0;
    let mut step = 0usize;
    let mut res = (gen * &v).norm_l2();
    while res >= opts.conv_tol {
        if t >= opts.max_time {
            return Err(Error::NoConvergence {
                time: t,
                residual: res,
            });
        }
        v = &propagator * &v;
        let tr = trace_of_vec(&v);
        v = faer::Scale(tr.inv()) * &v;
        t += h;
        step += 1;
        if step.is_multiple_of(CHECK_EVERY) {
            res = (gen * &v).norm_l2();
            if !res.is_finite() {
                return Err(Error::NoConvergence {
                    time: t,
                    residual: res,
                });
            }
        }
    }

    let rho = DensityMatrix::normalized_unchecked(&linalg::unvectorize(&v, DIM))?;
    let min_eigenvalue = check_positivity(&rho)?;
    let diagnostics = SolveDiagnostics {
        method: Method::Rk4,
        residual: residual(m, &rho),
        null_gap: None,
        min_eigenvalue,
        time: Some(t),
    };
    Ok((rho, diagnostics))
}

pub fn steady_state_rk4(
    params: &ModelParams,
    baths: &BathSpec,
    rho0: &DensityMatrix,
    opts: &Rk4Options,
) -> Result<(DensityMatrix, SolveDiagnostics)> {
    rk4_state(&lindblad::liouvillian(params, baths)?, rho0, opts)
}

/// The non-Hermitian operator `H_T` on system ⊗ ancilla whose zero mode is the
/// vectorized steady state.
///
/// Tensor factors are ordered (ancilla, system), which makes the doubled-space
/// vector coincide with the column-stacked density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian(CMat);

impl EffectiveHamiltonian {
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    /// `−i H_T`, the generator it encodes.
    pub fn to_generator(&self) -> Superoperator {
        Superoperator::from_matrix(linalg::scale(-I, &self.0))
    }

    /// Eigenvalue of smallest magnitude.
    pub fn smallest_eigenvalue(&self) -> Result<c64> {
        let values = self.0.eigenvalues().map_err(|_| Error::Eigen)?;
        Ok(values
            .into_iter()
            .min_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("nonempty spectrum"))
    }
}

/// Ancilla image `O^A` with `⟨e_m|O^A|e_n⟩ = ⟨E_n|O†|E_m⟩`, i.e. the elementwise conjugate.
pub fn ancilla_image(o: &Operator) -> Operator {
    let adj = linalg::dagger(o);
    Mat::from_fn(o.nrows(), o.ncols(), |m, n| adj[(n, m)])
}

fn on_system(o: &Operator) -> CMat {
    linalg::kron(&linalg::identity(DIM), o)
}

fn on_ancilla(o: &Operator) -> CMat {
    linalg::kron(o, &linalg::identity(DIM))
}

/// `H_T = H − H^A − (i/2)Σ L_k†L_k − (i/2)Σ L_k^{A†}L_k^A + iΣ L_k^A L_k`
/// for Lindblad-form jump operators `L_k`.
pub fn effective_hamiltonian_from_jumps(h: &Operator, jumps: &[Operator]) -> EffectiveHamiltonian {
    let half_i = c64::new(0.0, 0.5);
    let mut ht = on_system(h) - on_ancilla(&ancilla_image(h));
    for l in jumps {
        let la = ancilla_image(l);
        let ldl = linalg::dagger(l) * l;
        let la_dla = linalg::dagger(&la) * &la;
        ht -= linalg::scale(half_i, &on_system(&ldl));
        ht -= linalg::scale(half_i, &on_ancilla(&la_dla));
        ht += linalg::scale(I, &(on_ancilla(&la) * on_system(l)));
    }
    EffectiveHamiltonian(ht)
}

/// Tolerance of the `−i H_T = M` consistency check.
pub const EFFECTIVE_HAMILTONIAN_TOL: f64 = 1e-10;

/// Builds `H_T` from the Lindblad-form jumps `√(2J(−ω_μ)) X_μ` and
/// `√(2J(ω_μ)) X_μ†` and checks it against the generator.
pub fn effective_hamiltonian(
    params: &ModelParams,
    baths: &BathSpec,
) -> Result<EffectiveHamiltonian> {
    let jumps: Vec<Operator> = lindblad::all_jumps(params, baths)?
        .iter()
        .map(lindblad::WeightedJump::lindblad_operator)
        .collect();
    let ht = effective_hamiltonian_from_jumps(&model::hamiltonian(params), &jumps);
    let generator = lindblad::liouvillian(params, baths)?;
    let diff = linalg::norm(&(ht.to_generator().into_matrix() - generator.matrix()));
    if diff > EFFECTIVE_HAMILTONIAN_TOL {
        return Err(Error::Consistency(format!(
            "-i H_T differs from the generator by {diff:e}"
        )));
    }
    Ok(ht)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ancilla_image_is_elementwise_conjugate() {
        let o = Mat::from_fn(DIM, DIM, |i, j| c64::new(i as f64, j as f64 * 0.5));
        assert_eq!(ancilla_image(&o), linalg::conj(&o));
    }

    #[test]
    fn closed_system_limit() {
        let p = ModelParams::new(1.0, 0.4, 0.9).unwrap();
        let h = model::hamiltonian(&p);
        let ht = effective_hamiltonian_from_jumps(&h, &[]);
        let expected = on_system(&h) - on_ancilla(&linalg::transpose(&h));
        assert!(linalg::norm(&(ht.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn rejects_degenerate_null_space() {
        // Pure Hamiltonian dynamics: every eigenprojector is stationary.
        let p = ModelParams::new(1.0, 0.4, 0.9).unwrap();
        let m = Superoperator::from_matrix(lindblad::hamiltonian_superoperator(
            &model::hamiltonian(&p),
        ));
        assert!(matches!(
            null_space_state(&m, DEFAULT_GAP_TOL),
            Err(Error::NonUniqueSteadyState { .. })
        ));
    }

    #[test]
    fn rk4_reports_non_convergence() {
        let p = ModelParams::new(1.0, 1.0, 1.0).unwrap();
        let b = BathSpec::with_default_gamma(0.5, 0.7).unwrap();
        let opts = Rk4Options {
            step: None,
            max_time: 1.0,
            conv_tol: 1e-12,
        };
        let err = steady_state_rk4(&p, &b, &DensityMatrix::maximally_mixed(), &opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn null_space_residual_and_gap() {
        let p = ModelParams::new(3.0, 0.5, 2.5).unwrap();
        let b = BathSpec::with_default_gamma(0.3, 0.5).unwrap();
        let (rho, d) = steady_state_null(&p, &b).unwrap();
        assert!(d.residual <= 1e-10);
        assert!(d.null_gap.unwrap() > DEFAULT_GAP_TOL);
        assert!(d.min_eigenvalue >= -1e-10);
        assert!((linalg::trace(rho.matrix()).re - 1.0).abs() < 1e-12);
    }
}
