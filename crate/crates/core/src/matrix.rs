//! Dense complex linear algebra on operators of `B(H)` and `B(H) ⊗ B(H)`.
//!
//! Everything is expressed against the canonical basis `{e_i}`. Kronecker
//! products use the row-major layout `(a ⊗ b)[(i,k),(j,l)] = a[i,j] * b[k,l]`,
//! i.e. the composite index of `(i, k)` is `i * d2 + k`. Every other module
//! relies on this single convention.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar.
pub type C64 = Complex64;
/// Dense complex matrix; the carrier for operators, states and Choi matrices.
pub type ComplexMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type ComplexVector = DVector<C64>;

/// Default relative tolerance for every positivity decision in the crate.
pub const PSD_TOL: f64 = 1e-9;
/// Default relative singular-value cutoff for pseudo-inverses.
pub const PINV_CUTOFF: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Outcome of a positive-semidefiniteness test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
    /// Largest absolute eigenvalue of the Hermitian part.
    pub spectral_norm: f64,
}

impl PsdReport {
    /// Threshold the minimum eigenvalue was compared against.
    pub fn threshold(&self) -> f64 {
        -self.tolerance_used * (1.0 + self.spectral_norm)
    }
}

/// Spectral data of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i).into_owned()
    }

    /// `Σ f(λ_i) u_i u_i*`.
    pub fn reassemble(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (i, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            for r in 0..n {
                scaled[(r, i)] *= s;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

pub(crate) fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(a.nrows())
}

pub(crate) fn ensure_factorization(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    let n = ensure_square(a)?;
    if d1 == 0 || d2 == 0 || n != d1 * d2 {
        return Err(Error::Factorization { size: n, d1, d2 });
    }
    Ok(())
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Matrix unit `e_kl` of size `d`.
pub fn matrix_unit(d: usize, k: usize, l: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(k, l)] = ONE;
    m
}

/// Canonical basis vector `e_k` of length `d`.
pub fn basis_vector(d: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[k] = ONE;
    v
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert–Schmidt inner product `Tr(a* b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `max |a_ij - conj(a_ji)|`.
pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    let n = a.nrows().min(a.ncols());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(a + a*) / 2`.
pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Conjugation `J` in the canonical basis: entrywise complex conjugate.
pub fn conj_j(v: &ComplexVector) -> ComplexVector {
    v.map(|z| z.conj())
}

/// Transposition `t(a) = J a* J` with respect to the canonical basis.
pub fn transpose_t(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(a)?;
    Ok(a.transpose())
}

/// The operator `v ⊗ w̄`, acting as `z ↦ (z, w) v`.
pub fn rank_one(v: &ComplexVector, w: &ComplexVector) -> Result<ComplexMatrix> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch(format!("rank_one: |v| = {}, |w| = {}", v.len(), w.len())));
    }
    Ok(v * w.adjoint())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn kron_vec(x: &ComplexVector, y: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(x.len() * y.len());
    for i in 0..x.len() {
        for k in 0..y.len() {
            out[i * y.len() + k] = x[i] * y[k];
        }
    }
    out
}

/// `Tr_(2)`: partial trace over the second tensor factor.
pub fn partial_trace_2(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    let mut out = ComplexMatrix::zeros(d1, d1);
    for i in 0..d1 {
        for j in 0..d1 {
            let mut acc = ZERO;
            for k in 0..d2 {
                acc += a[(i * d2 + k, j * d2 + k)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// `Tr_(1)`: partial trace over the first tensor factor.
pub fn partial_trace_1(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    let mut out = ComplexMatrix::zeros(d2, d2);
    for k in 0..d2 {
        for l in 0..d2 {
            let mut acc = ZERO;
            for i in 0..d1 {
                acc += a[(i * d2 + k, i * d2 + l)];
            }
            out[(k, l)] = acc;
        }
    }
    Ok(out)
}

/// `(id ⊗ t)(a)`: `A_kl ⊗ e_kl ↦ A_kl ⊗ e_lk`.
pub fn partial_transpose(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    Ok(pt_unchecked(a, d1, d2))
}

pub(crate) fn pt_unchecked(a: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(i * d2 + k, j * d2 + l)] = a[(i * d2 + l, j * d2 + k)];
                }
            }
        }
    }
    out
}

/// `(t ⊗ id)(a)`: transposes the first tensor factor.
pub fn partial_transpose_first(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(i * d2 + k, j * d2 + l)] = a[(j * d2 + k, i * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Swap operator `F (x ⊗ y) = y ⊗ x` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = ONE;
        }
    }
    f
}

/// Exchanges the tensor factors of `a` on `C^d1 ⊗ C^d2`, giving an operator
/// on `C^d2 ⊗ C^d1`.
pub fn swap_factors(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(k * d1 + i, l * d1 + j)] = a[(i * d2 + k, j * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Realignment `R(a)[(i,j),(k,l)] = a[(i,k),(j,l)]`, a `d1² × d2²` matrix.
pub fn realign(a: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    ensure_factorization(a, d1, d2)?;
    let mut out = ComplexMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(i * d1 + j, k * d2 + l)] = a[(i * d2 + k, j * d2 + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of the Hermitian part of `a`, eigenvalues ascending.
pub fn hermitian_eigen(a: &ComplexMatrix) -> HermitianEigen {
    let h = hermitian_part(a);
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

pub fn eigenvalues_hermitian(a: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigen(a).values
}

/// Singular values, descending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().sum()
}

pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Positive-semidefiniteness of the Hermitian part `(a + a*)/2`.
///
/// `is_psd` holds iff `λ_min ≥ -tol · (1 + ‖a‖)` where `‖a‖` is the largest
/// absolute eigenvalue.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> PsdReport {
    if a.nrows() == 0 {
        return PsdReport { is_psd: true, min_eigenvalue: 0.0, tolerance_used: tol, spectral_norm: 0.0 };
    }
    let eig = hermitian_eigen(a);
    psd_report_from(&eig, tol)
}

pub(crate) fn psd_report_from(eig: &HermitianEigen, tol: f64) -> PsdReport {
    let min = eig.min();
    let norm = eig.min().abs().max(eig.max().abs());
    PsdReport { is_psd: min >= -tol * (1.0 + norm), min_eigenvalue: min, tolerance_used: tol, spectral_norm: norm }
}

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
pub fn psd_part(a: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eigen(a).reassemble(|l| l.max(0.0))
}

/// Square root of the PSD part of `a`.
pub fn psd_sqrt(a: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eigen(a).reassemble(|l| l.max(0.0).sqrt())
}

fn spectral_cutoff(eig: &HermitianEigen, cutoff: f64) -> f64 {
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    cutoff * scale
}

/// Moore–Penrose pseudo-inverse of a Hermitian matrix; eigenvalues below
/// `cutoff × max|λ|` are treated as zero.
pub fn pinv_hermitian(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let eig = hermitian_eigen(a);
    let thr = spectral_cutoff(&eig, cutoff);
    eig.reassemble(|l| if l.abs() > thr { 1.0 / l } else { 0.0 })
}

/// `(A⁺)^{1/2}` for PSD `A`.
pub fn pinv_sqrt_psd(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let eig = hermitian_eigen(a);
    let thr = spectral_cutoff(&eig, cutoff);
    eig.reassemble(|l| if l > thr { 1.0 / l.sqrt() } else { 0.0 })
}

/// Orthogonal projector onto the range of Hermitian `a`.
pub fn range_projector(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let eig = hermitian_eigen(a);
    let thr = spectral_cutoff(&eig, cutoff);
    eig.reassemble(|l| if l.abs() > thr { 1.0 } else { 0.0 })
}

/// Relative residual of the range condition `Ran X ⊆ Ran A`:
/// `‖(I - P_A) X‖_F / max(1, ‖X‖_F)`.
pub fn range_residual(a: &ComplexMatrix, x: &ComplexMatrix, cutoff: f64) -> f64 {
    let p = range_projector(a, cutoff);
    let n = a.nrows();
    let off = (identity(n) - p) * x;
    frobenius(&off) / frobenius(x).max(1.0)
}

/// Schur complement `B - X* A⁺ X` of the block matrix `[[A, X], [X*, B]]`.
///
/// Fails with [`Error::RangeCondition`] when `Ran X ⊄ Ran A^{1/2}` beyond
/// `1e-8`, since the pseudo-inverse formula is then meaningless.
pub fn schur_complement(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    pinv_cutoff: f64,
) -> Result<ComplexMatrix> {
    let d = ensure_square(a)?;
    let db = ensure_square(b)?;
    if x.nrows() != d || x.ncols() != db {
        return Err(Error::DimensionMismatch(format!(
            "schur_complement: A is {d}x{d}, B is {db}x{db}, X is {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    let residual = range_residual(a, x, pinv_cutoff);
    if residual > 1e-8 {
        return Err(Error::RangeCondition { residual });
    }
    let ap = pinv_hermitian(a, pinv_cutoff);
    Ok(b - x.adjoint() * ap * x)
}

/// Number of singular values above `tol × σ_max`.
pub fn operator_rank(v: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(v);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Vector `Σ_k e_k ⊗ e_k` (unnormalized maximally entangled vector).
pub fn max_entangled_vector(d: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d * d);
    for k in 0..d {
        v[k * d + k] = ONE;
    }
    v
}

/// `Σ_kl e_kl ⊗ e_kl`.
pub fn max_entangled_projector(d: usize) -> ComplexMatrix {
    let v = max_entangled_vector(d);
    &v * v.adjoint()
}

/// Max entrywise modulus.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs(&(a - b))
}
