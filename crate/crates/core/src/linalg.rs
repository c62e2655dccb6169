//! Small dense complex matrix helpers shared by the model, the generator and the solvers.
//!
//! Operators on the chain are 8×8, superoperators 64×64. Vectorization is column
//! stacking: `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`, so entry `(r, c)` of an `n×n` matrix
//! lands at index `r + n·c`.

use faer::{c64, Col, Mat, Side};

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

#[inline]
pub fn real(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn transpose(a: &CMat) -> CMat {
    a.transpose().to_owned()
}

/// Elementwise complex conjugate (no transpose).
pub fn conj(a: &CMat) -> CMat {
    a.conjugate().to_owned()
}

pub fn scale(s: c64, a: &CMat) -> CMat {
    faer::Scale(s) * a
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = Mat::zeros(a.nrows() * b.nrows(), a.ncols() * b.ncols());
    faer::linalg::kron::kron(out.as_mut(), a.as_ref(), b.as_ref());
    out
}

/// Frobenius norm.
pub fn norm(a: &CMat) -> f64 {
    a.norm_l2()
}

pub fn trace(a: &CMat) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `‖A − A†‖_F`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    norm(&(a - a.adjoint()))
}

pub fn hermitian_part(a: &CMat) -> CMat {
    scale(real(0.5), &(a + a.adjoint()))
}

pub fn vectorize(a: &CMat) -> Col<c64> {
    let n = a.nrows();
    Col::from_fn(n * a.ncols(), |k| a[(k % n, k / n)])
}

pub fn unvectorize(v: &Col<c64>, n: usize) -> CMat {
    assert_eq!(v.nrows(), n * n, "vector length is not a square");
    Mat::from_fn(n, n, |r, c| v[r + n * c])
}

pub fn outer(a: &Col<c64>, b: &Col<c64>) -> CMat {
    a * b.adjoint()
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &Col<c64>, b: &Col<c64>) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `⟨a|M|b⟩`.
pub fn matrix_element(a: &Col<c64>, m: &CMat, b: &Col<c64>) -> c64 {
    inner(a, &(m * b))
}

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
/// Only the lower triangle is read.
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Eigen)?;
    let values = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((values, evd.U().to_owned()))
}

pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    a.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Eigen)
}

/// `½ Σ |λ_i(A − B)|` for Hermitian `A`, `B`.
pub fn trace_distance(a: &CMat, b: &CMat) -> Result<f64> {
    let diff = hermitian_part(&(a - b));
    Ok(0.5
        * hermitian_eigenvalues(&diff)?
            .iter()
            .map(|x| x.abs())
            .sum::<f64>())
}

/// Maps a real function over the spectrum of a Hermitian matrix.
pub fn hermitian_function(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (values, u) = hermitian_eigen(a)?;
    let d = Mat::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            real(f(values[i]))
        } else {
            ZERO
        }
    });
    Ok(&u * &d * u.adjoint())
}
