//! Thermal dissipators for the two end spins and the full master-equation generator.
//!
//! Each bath couples to one end spin through `σ^-_site`. That operator is split into
//! Bohr-frequency components `X_μ` with `[H, X_μ] = −ω_μ X_μ`. Lowering components
//! are weighted by `J(−ω_μ)` and raising components by `J(ω_μ)`, where
//! `J(ω) = γ n(ω)` and `J(−ω) = e^{ω/T} J(ω)`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I};
use crate::model::{self, ModelParams, Operator, DEFAULT_FREQ_TOL, DIM};

/// Coupling rate used when none is configured.
pub const DEFAULT_GAMMA: f64 = 0.05;

/// Which bath: left couples to spin 1, right to spin 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn site(self) -> usize {
        match self {
            Side::Left => 1,
            Side::Right => 3,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Temperatures and flat coupling rates of the two baths (`k_B = ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    t_left: f64,
    t_right: f64,
    gamma_left: f64,
    gamma_right: f64,
}

impl BathSpec {
    pub fn new(t_left: f64, t_right: f64, gamma_left: f64, gamma_right: f64) -> Result<Self> {
        for (name, v) in [
            ("t_left", t_left),
            ("t_right", t_right),
            ("gamma_left", gamma_left),
            ("gamma_right", gamma_right),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            t_left,
            t_right,
            gamma_left,
            gamma_right,
        })
    }

    /// Both baths at [`DEFAULT_GAMMA`].
    pub fn with_default_gamma(t_left: f64, t_right: f64) -> Result<Self> {
        Self::new(t_left, t_right, DEFAULT_GAMMA, DEFAULT_GAMMA)
    }

    /// From mean temperature `T_M = (T_L + T_R)/2` and difference `ΔT = T_L − T_R`.
    pub fn from_mean_difference(
        t_mean: f64,
        delta_t: f64,
        gamma_left: f64,
        gamma_right: f64,
    ) -> Result<Self> {
        if delta_t.abs() >= 2.0 * t_mean {
            return Err(Error::Domain(format!(
                "|delta_t| = {} must be below 2 t_mean = {}",
                delta_t.abs(),
                2.0 * t_mean
            )));
        }
        Self::new(
            t_mean + delta_t / 2.0,
            t_mean - delta_t / 2.0,
            gamma_left,
            gamma_right,
        )
    }

    pub fn t_left(&self) -> f64 {
        self.t_left
    }

    pub fn t_right(&self) -> f64 {
        self.t_right
    }

    pub fn gamma_left(&self) -> f64 {
        self.gamma_left
    }

    pub fn gamma_right(&self) -> f64 {
        self.gamma_right
    }

    pub fn temperature(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.t_left,
            Side::Right => self.t_right,
        }
    }

    pub fn gamma(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.gamma_left,
            Side::Right => self.gamma_right,
        }
    }

    pub fn gamma_max(&self) -> f64 {
        self.gamma_left.max(self.gamma_right)
    }

    /// Left and right baths exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            t_left: self.t_right,
            t_right: self.t_left,
            gamma_left: self.gamma_right,
            gamma_right: self.gamma_left,
        }
    }

    /// Both coupling rates multiplied by `factor`.
    pub fn scaled_gamma(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.t_left,
            self.t_right,
            factor * self.gamma_left,
            factor * self.gamma_right,
        )
    }
}

/// The three Bohr frequencies `ε + J`, `ε`, `ε − J`.
pub fn bohr_frequencies(params: &ModelParams) -> [f64; 3] {
    let (e, j) = (params.epsilon(), params.j_total());
    [e + j, e, e - j]
}

#[derive(Debug, Clone)]
pub struct EigenOperator {
    pub omega: f64,
    /// Lowering component: `[H, X] = −ω X`.
    pub op: Operator,
}

#[derive(Debug, Clone)]
pub struct EigenOperatorSet {
    pub side: Side,
    pub components: [EigenOperator; 3],
}

impl EigenOperatorSet {
    /// `Σ_μ X_μ`, which reproduces `σ^-` on the bath's site.
    pub fn sum(&self) -> Operator {
        self.components
            .iter()
            .fold(Mat::zeros(DIM, DIM), |acc, c| acc + &c.op)
    }
}

const ELEMENT_TOL: f64 = 1e-13;

/// Splits `σ^-` on the bath's site into Bohr-frequency components by projecting
/// onto pairs of closed-form eigenstates.
pub fn eigenoperators(params: &ModelParams, side: Side) -> Result<EigenOperatorSet> {
    let eig = model::analytic_eigensystem(params);
    let lower = model::sigma_minus(side.site());
    let omegas = bohr_frequencies(params);
    let match_tol = 1e-9 * (1.0 + params.epsilon() + params.j_total());
    let mut ops: [Operator; 3] = std::array::from_fn(|_| Mat::zeros(DIM, DIM));

    for (a, pa) in eig.pairs().iter().enumerate() {
        for (b, pb) in eig.pairs().iter().enumerate() {
            let element = linalg::matrix_element(&pa.vector, &lower, &pb.vector);
            if element.norm() <= ELEMENT_TOL {
                continue;
            }
            let omega = pb.value - pa.value;
            let mut hits = omegas
                .iter()
                .enumerate()
                .filter(|(_, w)| (omega - **w).abs() <= match_tol);
            let mu = match (hits.next(), hits.next()) {
                (Some((mu, _)), None) => mu,
                _ => return Err(Error::Degeneracy { omega }),
            };
            ops[mu] += linalg::scale(element, &eig.transition(a + 1, b + 1));
        }
    }

    let [x1, x2, x3] = ops;
    Ok(EigenOperatorSet {
        side,
        components: [
            EigenOperator {
                omega: omegas[0],
                op: x1,
            },
            EigenOperator {
                omega: omegas[1],
                op: x2,
            },
            EigenOperator {
                omega: omegas[2],
                op: x3,
            },
        ],
    })
}

/// Bose–Einstein occupation `1/(e^{ω/T} − 1)` for `ω > 0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "Bose occupation needs omega > 0, got {omega}"
        )));
    }
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Signed-frequency rate `J(ω)`: `γ n(ω)` for absorption (`ω > 0`) and
/// `γ (n(|ω|) + 1)` for emission (`ω < 0`).
pub fn spectral_rate(omega: f64, temperature: f64, gamma: f64) -> Result<f64> {
    spectral_rate_with_tol(omega, temperature, gamma, DEFAULT_FREQ_TOL)
}

pub fn spectral_rate_with_tol(
    omega: f64,
    temperature: f64,
    gamma: f64,
    freq_tol: f64,
) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if omega.abs() < freq_tol {
        return Err(Error::RateSingularity {
            omega,
            tol: freq_tol,
        });
    }
    let n = bose_occupation(omega.abs(), temperature)?;
    Ok(if omega > 0.0 {
        gamma * n
    } else {
        gamma * (n + 1.0)
    })
}

/// A jump operator `X` together with the coefficient `r` of
/// `r (2 X ρ X† − {X†X, ρ})`.
#[derive(Debug, Clone)]
pub struct WeightedJump {
    pub rate: f64,
    pub op: Operator,
}

impl WeightedJump {
    /// `L = √(2r) X`, the operator of the form `L ρ L† − ½{L†L, ρ}`.
    pub fn lindblad_operator(&self) -> Operator {
        linalg::scale(linalg::real((2.0 * self.rate).sqrt()), &self.op)
    }
}

/// The six weighted jumps contributed by one bath.
pub fn bath_jumps(
    params: &ModelParams,
    side: Side,
    temperature: f64,
    gamma: f64,
) -> Result<Vec<WeightedJump>> {
    let set = eigenoperators(params, side)?;
    let mut jumps = Vec::with_capacity(6);
    for c in &set.components {
        jumps.push(WeightedJump {
            rate: spectral_rate(-c.omega, temperature, gamma)?,
            op: c.op.clone(),
        });
        jumps.push(WeightedJump {
            rate: spectral_rate(c.omega, temperature, gamma)?,
            op: linalg::dagger(&c.op),
        });
    }
    Ok(jumps)
}

pub fn all_jumps(params: &ModelParams, baths: &BathSpec) -> Result<Vec<WeightedJump>> {
    let mut jumps = bath_jumps(params, Side::Left, baths.t_left, baths.gamma_left)?;
    jumps.extend(bath_jumps(
        params,
        Side::Right,
        baths.t_right,
        baths.gamma_right,
    )?);
    Ok(jumps)
}

/// `L_j ρ` for one bath, evaluated directly on the 8×8 matrix.
pub fn dissipator_apply(
    rho: &Operator,
    params: &ModelParams,
    side: Side,
    temperature: f64,
    gamma: f64,
) -> Result<Operator> {
    let two = linalg::real(2.0);
    let mut out = Mat::zeros(DIM, DIM);
    for jump in bath_jumps(params, side, temperature, gamma)? {
        let x = &jump.op;
        let xd = linalg::dagger(x);
        let term = linalg::scale(two, &(x * rho * &xd)) - linalg::anticommutator(rho, &(&xd * x));
        out += linalg::scale(linalg::real(jump.rate), &term);
    }
    Ok(out)
}

/// Right-hand side of the master equation, `−i[H, ρ] + L_L ρ + L_R ρ`, evaluated directly.
pub fn generator_apply(rho: &Operator, params: &ModelParams, baths: &BathSpec) -> Result<Operator> {
    let h = model::hamiltonian(params);
    let unitary = linalg::scale(-I, &linalg::commutator(&h, rho));
    Ok(unitary
        + dissipator_apply(rho, params, Side::Left, baths.t_left, baths.gamma_left)?
        + dissipator_apply(rho, params, Side::Right, baths.t_right, baths.gamma_right)?)
}

/// Linear map on column-stacked 8×8 operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator(CMat);

impl Superoperator {
    pub fn from_matrix(m: CMat) -> Self {
        assert_eq!((m.nrows(), m.ncols()), (DIM * DIM, DIM * DIM));
        Self(m)
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn apply(&self, rho: &Operator) -> Operator {
        linalg::unvectorize(&(&self.0 * linalg::vectorize(rho)), DIM)
    }

    /// `‖vec(I)ᵀ M‖`; zero for a trace-preserving generator.
    pub fn trace_functional_norm(&self) -> f64 {
        let id = linalg::vectorize(&linalg::identity(DIM));
        (id.transpose() * &self.0).norm_l2()
    }
}

/// Superoperator of `ρ ↦ −i[H, ρ]`.
pub fn hamiltonian_superoperator(h: &Operator) -> CMat {
    let id = linalg::identity(DIM);
    linalg::scale(
        -I,
        &(linalg::kron(&id, h) - linalg::kron(&linalg::transpose(h), &id)),
    )
}

/// Superoperator of `ρ ↦ r (2 X ρ X† − {X†X, ρ})`.
pub fn jump_superoperator(jump: &WeightedJump) -> CMat {
    let id = linalg::identity(DIM);
    let x = &jump.op;
    let xdx = linalg::dagger(x) * x;
    let m = linalg::scale(linalg::real(2.0), &linalg::kron(&linalg::conj(x), x))
        - linalg::kron(&id, &xdx)
        - linalg::kron(&linalg::transpose(&xdx), &id);
    linalg::scale(linalg::real(jump.rate), &m)
}

/// The 64×64 generator of `∂ρ = −i[H, ρ] + L_L ρ + L_R ρ` in column-stacking form.
pub fn liouvillian(params: &ModelParams, baths: &BathSpec) -> Result<Superoperator> {
    let mut m = hamiltonian_superoperator(&model::hamiltonian(params));
    for jump in all_jumps(params, baths)? {
        m += jump_superoperator(&jump);
    }
    Ok(Superoperator(m))
}

/// `‖(M ρ)† − M(ρ†)‖`; zero when the generator preserves Hermiticity.
pub fn hermiticity_preservation_defect(m: &Superoperator, rho: &Operator) -> f64 {
    let out = m.apply(rho);
    let out_dag = m.apply(&linalg::dagger(rho));
    linalg::norm(&(linalg::dagger(&out) - out_dag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{analytic_eigensystem, hamiltonian, sigma_minus};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn params() -> ModelParams {
        ModelParams::new(3.0, 0.5, 2.5).unwrap()
    }

    #[test]
    fn bose_values() {
        // 1/(e^2 - 1)
        assert!((bose_occupation(1.0, 0.5).unwrap() - 0.156_517_642_749_665_6).abs() < 1e-15);
        assert!(bose_occupation(1.0, 1e-3).unwrap() == 0.0);
        let hot = bose_occupation(1.0, 1e6).unwrap();
        assert!((hot - 1e6).abs() / 1e6 < 1e-5);
        assert!(matches!(bose_occupation(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bose_occupation(-1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn signed_rates() {
        let up = spectral_rate(1.0, 0.5, 1.0).unwrap();
        let down = spectral_rate(-1.0, 0.5, 1.0).unwrap();
        assert!((up - 0.156_517_642_749_665_6).abs() < 1e-15);
        assert!((down - 1.156_517_642_749_665_6).abs() < 1e-14);
        assert!((down - 2f64.exp() * up).abs() < 1e-9);
        assert_eq!(spectral_rate(1.0, 1e-3, 0.7).unwrap(), 0.0);
        assert!((spectral_rate(-1.0, 1e-3, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!(matches!(
            spectral_rate(1e-8, 1.0, 1.0),
            Err(Error::RateSingularity { .. })
        ));
    }

    #[test]
    fn eigenoperator_contract() {
        let p = params();
        let h = hamiltonian(&p);
        for side in [Side::Left, Side::Right] {
            let set = eigenoperators(&p, side).unwrap();
            for c in &set.components {
                let lhs =
                    linalg::commutator(&h, &c.op) + linalg::scale(linalg::real(c.omega), &c.op);
                assert!(linalg::norm(&lhs) <= 1e-10);
            }
            assert!(linalg::norm(&(set.sum() - sigma_minus(side.site()))) <= 1e-12);
        }
    }

    #[test]
    fn projection_coefficients_depend_on_theta() {
        let p = params();
        let (s, c) = p.theta().sin_cos();
        let eig = analytic_eigensystem(&p);
        let left = eigenoperators(&p, Side::Left).unwrap();
        let el = |mu: usize, a: usize, b: usize| {
            linalg::matrix_element(eig.vector(a), &left.components[mu].op, eig.vector(b)).re
        };
        assert!((el(0, 3, 1) - FRAC_1_SQRT_2 * c).abs() < 1e-14);
        assert!((el(1, 4, 1) + s).abs() < 1e-14);
        assert!((el(0, 6, 4) + FRAC_1_SQRT_2 * c).abs() < 1e-14);
    }

    #[test]
    fn negative_bohr_frequency_is_allowed() {
        // J = sqrt(2) > epsilon = 1, so epsilon - J < 0.
        let p = ModelParams::new(1.0, 1.0, 1.0).unwrap();
        let set = eigenoperators(&p, Side::Left).unwrap();
        assert!(set.components[2].omega < 0.0);
        let jumps = bath_jumps(&p, Side::Left, 0.3, 0.05).unwrap();
        assert!(jumps.iter().all(|j| j.rate >= 0.0));
    }

    #[test]
    fn resonance_is_a_rate_singularity() {
        let p = ModelParams::new(5.0, 3.0, 4.0).unwrap();
        let baths = BathSpec::with_default_gamma(0.5, 0.5).unwrap();
        let err = liouvillian(&p, &baths).unwrap_err();
        assert!(err.is_rate_singularity());
    }

    #[test]
    fn bath_spec_validation() {
        assert!(BathSpec::new(0.0, 1.0, 0.1, 0.1).is_err());
        assert!(BathSpec::new(1.0, 1.0, 0.1, -0.1).is_err());
        assert!(BathSpec::from_mean_difference(0.4, 0.8, 0.1, 0.1).is_err());
        let b = BathSpec::from_mean_difference(0.5, -0.4, 0.1, 0.2).unwrap();
        assert!((b.t_left() - 0.3).abs() < 1e-15 && (b.t_right() - 0.7).abs() < 1e-15);
        assert_eq!(b.mirrored().gamma_left(), 0.2);
    }

    #[test]
    fn superoperator_matches_direct_generator() {
        let p = params();
        let baths = BathSpec::new(0.3, 0.9, 0.05, 0.08).unwrap();
        let m = liouvillian(&p, &baths).unwrap();
        let rho = Mat::from_fn(DIM, DIM, |i, j| {
            faer::c64::new((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2)
        });
        let direct = generator_apply(&rho, &p, &baths).unwrap();
        assert!(linalg::norm(&(m.apply(&rho) - direct)) <= 1e-12);
        assert!(m.trace_functional_norm() <= 1e-12);
    }
}
