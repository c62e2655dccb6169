//! The three-site XX chain: parameters, Pauli algebra on the 8-dimensional
//! product space, the Hamiltonian, and its closed-form eigensystem.
//!
//! Basis convention: `|1⟩` is the `σ^z = +1` state and `|q1 q2 q3⟩` has index
//! `4·q1 + 2·q2 + q3`, so site 1 is the most significant bit.

use std::f64::consts::FRAC_1_SQRT_2;

use faer::{c64, Col, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ONE, ZERO};

/// Dimension of the chain's Hilbert space.
pub const DIM: usize = 8;

/// Number of sites.
pub const SITES: usize = 3;

/// Distance from zero below which a Bohr frequency is treated as singular.
pub const DEFAULT_FREQ_TOL: f64 = 1e-6;

/// An 8×8 matrix in the computational basis.
pub type Operator = CMat;

/// Level splitting and nearest-neighbour couplings, with the derived
/// total coupling `J = √(J1² + J2²)` and mixing angle `tan θ = J2/J1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    epsilon: f64,
    j1: f64,
    j2: f64,
    j_total: f64,
    theta: f64,
    near_resonance: bool,
}

impl ModelParams {
    pub fn new(epsilon: f64, j1: f64, j2: f64) -> Result<Self> {
        Self::with_freq_tol(epsilon, j1, j2, DEFAULT_FREQ_TOL)
    }

    pub fn with_freq_tol(epsilon: f64, j1: f64, j2: f64, freq_tol: f64) -> Result<Self> {
        for (name, v) in [("epsilon", epsilon), ("j1", j1), ("j2", j2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let j_total = j1.hypot(j2);
        let theta = j2.atan2(j1);
        let near_resonance = (epsilon - j_total).abs() < freq_tol;
        if near_resonance {
            log::warn!(
                "epsilon = {epsilon} is within {freq_tol:e} of J = {j_total}; the epsilon - J Bohr frequency is singular"
            );
        }
        Ok(Self {
            epsilon,
            j1,
            j2,
            j_total,
            theta,
            near_resonance,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn j2(&self) -> f64 {
        self.j2
    }

    pub fn j_total(&self) -> f64 {
        self.j_total
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Set when `|ε − J|` is below the frequency tolerance.
    pub fn near_resonance(&self) -> bool {
        self.near_resonance
    }

    /// Parameters of the site-reflected chain (J1 ↔ J2).
    pub fn mirrored(&self) -> Self {
        Self::new(self.epsilon, self.j2, self.j1).expect("mirror of valid parameters is valid")
    }
}

pub fn basis_index(bits: [u8; SITES]) -> usize {
    bits.iter().fold(0, |acc, &b| {
        assert!(b <= 1, "qubit value must be 0 or 1");
        2 * acc + b as usize
    })
}

pub fn basis_ket(bits: [u8; SITES]) -> Col<c64> {
    let k = basis_index(bits);
    Col::from_fn(DIM, |i| if i == k { ONE } else { ZERO })
}

fn embed(single: &CMat, site: usize) -> Operator {
    assert!((1..=SITES).contains(&site), "site index must be 1, 2 or 3");
    let id = linalg::identity(2);
    let factors: Vec<&CMat> = (1..=SITES)
        .map(|s| if s == site { single } else { &id })
        .collect();
    linalg::kron(&linalg::kron(factors[0], factors[1]), factors[2])
}

/// `σ^z` on `site` (1-based).
pub fn sigma_z(site: usize) -> Operator {
    let mut m = Mat::zeros(2, 2);
    m[(0, 0)] = -ONE;
    m[(1, 1)] = ONE;
    embed(&m, site)
}

/// `σ^+ = |1⟩⟨0|` on `site` (1-based).
pub fn sigma_plus(site: usize) -> Operator {
    let mut m = Mat::zeros(2, 2);
    m[(1, 0)] = ONE;
    embed(&m, site)
}

/// `σ^- = |0⟩⟨1|` on `site` (1-based).
pub fn sigma_minus(site: usize) -> Operator {
    let mut m = Mat::zeros(2, 2);
    m[(0, 1)] = ONE;
    embed(&m, site)
}

/// Total excitation number `Σ (σ^z_n + 1)/2`.
pub fn excitation_number() -> Operator {
    Mat::from_fn(DIM, DIM, |i, j| {
        if i == j {
            linalg::real(i.count_ones() as f64)
        } else {
            ZERO
        }
    })
}

/// Permutation exchanging sites 1 and 3.
pub fn site_reflection() -> Operator {
    let mirror = |k: usize| ((k & 1) << 2) | (k & 2) | ((k >> 2) & 1);
    Mat::from_fn(DIM, DIM, |i, j| if i == mirror(j) { ONE } else { ZERO })
}

fn hopping(a: usize, b: usize) -> Operator {
    &sigma_plus(a) * &sigma_minus(b) + &sigma_minus(a) * &sigma_plus(b)
}

pub fn hamiltonian(params: &ModelParams) -> Operator {
    let zeeman = (1..=SITES).fold(Mat::zeros(DIM, DIM), |acc, n| acc + sigma_z(n));
    linalg::scale(linalg::real(params.epsilon / 2.0), &zeeman)
        + linalg::scale(linalg::real(params.j1), &hopping(1, 2))
        + linalg::scale(linalg::real(params.j2), &hopping(2, 3))
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Col<c64>,
}

/// The eight eigenpairs `(λ_i, |s_i⟩)` in their conventional order `i = 1..=8`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pairs: Vec<EigenPair>,
}

impl EigenSystem {
    /// Eigenvalue `λ_i`, 1-based.
    pub fn value(&self, i: usize) -> f64 {
        self.pairs[i - 1].value
    }

    /// Eigenvector `|s_i⟩`, 1-based.
    pub fn vector(&self, i: usize) -> &Col<c64> {
        &self.pairs[i - 1].vector
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    /// `|s_i⟩⟨s_j|`, 1-based.
    pub fn transition(&self, i: usize, j: usize) -> Operator {
        linalg::outer(self.vector(i), self.vector(j))
    }

    /// Unitary whose columns are `|s_1⟩ … |s_8⟩`.
    pub fn basis_matrix(&self) -> Operator {
        Mat::from_fn(DIM, DIM, |r, c| self.pairs[c].vector[r])
    }

    /// Gram matrix deviation from the identity, Frobenius norm.
    pub fn orthonormality_defect(&self) -> f64 {
        let u = self.basis_matrix();
        linalg::norm(&(u.adjoint() * &u - linalg::identity(DIM)))
    }
}

/// Closed-form eigensystem of the chain, built from `J` and `θ`.
pub fn analytic_eigensystem(params: &ModelParams) -> EigenSystem {
    let (s, c) = params.theta.sin_cos();
    let e = params.epsilon;
    let j = params.j_total;
    let h = FRAC_1_SQRT_2;
    let ket = |bits: [u8; 3]| basis_ket(bits);
    let combo = |terms: &[(f64, [u8; 3])]| {
        terms.iter().fold(Col::<c64>::zeros(DIM), |acc, (w, b)| {
            acc + faer::Scale(linalg::real(*w)) * ket(*b)
        })
    };
    let pairs = vec![
        EigenPair {
            value: 1.5 * e,
            vector: ket([1, 1, 1]),
        },
        EigenPair {
            value: -1.5 * e,
            vector: ket([0, 0, 0]),
        },
        EigenPair {
            value: 0.5 * e - j,
            vector: combo(&[(h * s, [1, 1, 0]), (-h, [1, 0, 1]), (h * c, [0, 1, 1])]),
        },
        EigenPair {
            value: 0.5 * e,
            vector: combo(&[(c, [1, 1, 0]), (-s, [0, 1, 1])]),
        },
        EigenPair {
            value: 0.5 * e + j,
            vector: combo(&[(h * s, [1, 1, 0]), (h, [1, 0, 1]), (h * c, [0, 1, 1])]),
        },
        EigenPair {
            value: -0.5 * e - j,
            vector: combo(&[(h * c, [1, 0, 0]), (-h, [0, 1, 0]), (h * s, [0, 0, 1])]),
        },
        EigenPair {
            value: -0.5 * e,
            vector: combo(&[(s, [1, 0, 0]), (-c, [0, 0, 1])]),
        },
        EigenPair {
            value: -0.5 * e + j,
            vector: combo(&[(h * c, [1, 0, 0]), (h, [0, 1, 0]), (h * s, [0, 0, 1])]),
        },
    ];
    EigenSystem { pairs }
}

/// Residual tolerance used by [`verify_spectrum`].
pub const SPECTRUM_TOL: f64 = 1e-10;

/// Largest `‖H|s_i⟩ − λ_i|s_i⟩‖` over the closed-form eigensystem. Also
/// checks that the closed-form eigenvalues match a numeric diagonalization.
pub fn verify_spectrum(params: &ModelParams) -> Result<f64> {
    let h = hamiltonian(params);
    let eig = analytic_eigensystem(params);
    let residual = eig
        .pairs()
        .iter()
        .map(|p| (&h * &p.vector - faer::Scale(linalg::real(p.value)) * &p.vector).norm_l2())
        .fold(0.0, f64::max);
    if residual > SPECTRUM_TOL {
        return Err(Error::Consistency(format!(
            "eigenpair residual {residual:e}"
        )));
    }
    let mut analytic = eig.values();
    analytic.sort_by(f64::total_cmp);
    let numeric = linalg::hermitian_eigenvalues(&h)?;
    let mismatch = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if mismatch > SPECTRUM_TOL {
        return Err(Error::Consistency(format!(
            "eigenvalue multiset mismatch {mismatch:e}"
        )));
    }
    Ok(residual)
}
