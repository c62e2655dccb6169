//! Pairwise entanglement of the chain's state: two-site reductions, the Wootters
//! concurrence, energy-eigenstate populations, and the Gibbs reference state.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, ZERO};
use crate::model::{EigenSystem, Operator, DIM};
use crate::state::DensityMatrix;

/// Eigenvalues of the spin-flip product above this negative value are round-off.
pub const FLIP_EIGENVALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    /// Kept sites, 1-based, in ascending order.
    pub fn sites(self) -> (usize, usize) {
        match self {
            Pair::P12 => (1, 2),
            Pair::P13 => (1, 3),
            Pair::P23 => (2, 3),
        }
    }

    pub fn traced_site(self) -> usize {
        6 - self.sites().0 - self.sites().1
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::P12 => "12",
            Pair::P13 => "13",
            Pair::P23 => "23",
        }
    }
}

/// Reduced state of two sites, basis `|q_a q_b⟩` with index `2·q_a + q_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    pub pair: Pair,
    pub matrix: CMat,
}

fn bit(index: usize, site: usize) -> usize {
    (index >> (3 - site)) & 1
}

fn compose(bits: [(usize, usize); 3]) -> usize {
    bits.iter().map(|&(site, b)| b << (3 - site)).sum()
}

pub fn partial_trace(rho: &DensityMatrix, pair: Pair) -> PairState {
    let m = rho.matrix();
    let (a, b) = pair.sites();
    let c = pair.traced_site();
    let matrix = Mat::from_fn(4, 4, |r, s| {
        (0..2)
            .map(|k| {
                let row = compose([(a, r >> 1), (b, r & 1), (c, k)]);
                let col = compose([(a, s >> 1), (b, s & 1), (c, k)]);
                m[(row, col)]
            })
            .sum::<c64>()
    });
    PairState { pair, matrix }
}

/// Single-site reduction `Tr_{others} ρ` (site 1-based).
pub fn single_site(rho: &DensityMatrix, site: usize) -> CMat {
    let m = rho.matrix();
    let mut out = Mat::zeros(2, 2);
    for i in 0..DIM {
        for j in 0..DIM {
            let same_elsewhere = (1..=3)
                .filter(|&s| s != site)
                .all(|s| bit(i, s) == bit(j, s));
            if same_elsewhere {
                out[(bit(i, site), bit(j, site))] += m[(i, j)];
            }
        }
    }
    out
}

impl PairState {
    /// Reduction of the pair onto its first (`0`) or second (`1`) site.
    pub fn marginal(&self, which: usize) -> CMat {
        Mat::from_fn(2, 2, |r, s| {
            (0..2)
                .map(|k| {
                    let (row, col) = if which == 0 {
                        (2 * r + k, 2 * s + k)
                    } else {
                        (2 * k + r, 2 * k + s)
                    };
                    self.matrix[(row, col)]
                })
                .sum()
        })
    }
}

fn sigma_y_sigma_y() -> CMat {
    // σ^y ⊗ σ^y is real: anti-diagonal (−1, 1, 1, −1).
    Mat::from_fn(4, 4, |r, c| {
        if r + c == 3 {
            linalg::real(if r == 0 || r == 3 { -1.0 } else { 1.0 })
        } else {
            ZERO
        }
    })
}

/// Eigenvalues of a reduced state at or below this are treated as exact zeros
/// before taking the matrix square root.
const RANK_TOL: f64 = 1e-14;

/// Wootters concurrence `max(0, √λ1 − √λ2 − √λ3 − √λ4)`, `λ_k` the descending
/// eigenvalues of `ρ (σ^y⊗σ^y) ρ* (σ^y⊗σ^y)`.
///
/// The `λ_k` coincide with the eigenvalues of the Hermitian `√ρ ρ̃ √ρ`, and
/// `√λ_k` are the singular values of `√ρ √ρ̃`, which is what gets evaluated.
pub fn concurrence(state: &PairState) -> Result<f64> {
    let rho = linalg::hermitian_part(&state.matrix);
    let yy = sigma_y_sigma_y();
    let root = linalg::hermitian_function(&rho, |x| if x > RANK_TOL { x.sqrt() } else { 0.0 })?;
    let root_flipped = &yy * linalg::conj(&root) * &yy;
    let a = &root * &root_flipped;
    let r = linalg::hermitian_part(&(&a * a.adjoint()));
    let smallest = linalg::hermitian_eigenvalues(&r)?[0];
    if smallest < -FLIP_EIGENVALUE_TOL {
        return Err(Error::NumericalDegradation(smallest));
    }
    let s = a.singular_values().map_err(|_| Error::Eigen)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceTriple {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
}

impl ConcurrenceTriple {
    pub fn get(&self, pair: Pair) -> f64 {
        match pair {
            Pair::P12 => self.c12,
            Pair::P13 => self.c13,
            Pair::P23 => self.c23,
        }
    }
}

pub fn pairwise_concurrences(rho: &DensityMatrix) -> Result<ConcurrenceTriple> {
    let c = |pair| concurrence(&partial_trace(rho, pair));
    Ok(ConcurrenceTriple {
        c12: c(Pair::P12)?,
        c13: c(Pair::P13)?,
        c23: c(Pair::P23)?,
    })
}

/// `p_i = ⟨s_i|ρ|s_i⟩` for `i = 1..=8`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationDistribution(pub [f64; DIM]);

impl PopulationDistribution {
    /// `p_i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// 1-based index of the largest population among levels `from..=to`.
    pub fn argmax_in(&self, from: usize, to: usize) -> usize {
        (from..=to)
            .max_by(|&a, &b| self.get(a).total_cmp(&self.get(b)))
            .expect("nonempty range")
    }
}

pub fn eigenstate_populations(
    rho: &DensityMatrix,
    eigensystem: &EigenSystem,
) -> PopulationDistribution {
    let mut p = [0.0; DIM];
    for (slot, pair) in p.iter_mut().zip(eigensystem.pairs()) {
        *slot = linalg::matrix_element(&pair.vector, rho.matrix(), &pair.vector).re;
    }
    PopulationDistribution(p)
}

/// `e^{−H/T} / Tr e^{−H/T}` from a numeric eigendecomposition of `H`.
pub fn gibbs_state(hamiltonian: &Operator, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    let (values, _) = linalg::hermitian_eigen(hamiltonian)?;
    let ground = values[0];
    let boltzmann =
        linalg::hermitian_function(hamiltonian, |e| (-(e - ground) / temperature).exp())?;
    DensityMatrix::normalized_unchecked(&boltzmann)
}
