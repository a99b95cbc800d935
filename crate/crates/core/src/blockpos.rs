//! Positivity of 2×2 operator block matrices `[[A, X], [X*, B]]`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ChoiBlockMatrix;
use crate::cones::{cd_accepts, sample_cd};
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{
    self, c, commutator, frobenius, hermitian_deviation, identity, ComplexMatrix, ComplexVector, PINV_CUTOFF, PSD_TOL,
};
use crate::random::{random_hermitian, random_psd, random_unit_vector, stream};
use crate::separability::{separable_approx, GilbertOptions};
use crate::stats::{Histogram, Summary};

const HERMITIAN_TOL: f64 = 1e-12;

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL * (1.0 + matrix::max_abs(m)) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `[[A, X], [X*, B]]` with Hermitian `A`, `B`; Hermitian by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix2 {
    #[serde(with = "json::square")]
    a: ComplexMatrix,
    #[serde(with = "json::square")]
    b: ComplexMatrix,
    #[serde(with = "json::square")]
    x: ComplexMatrix,
}

impl BlockMatrix2 {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, x: ComplexMatrix) -> Result<Self> {
        let d = matrix::ensure_square(&a)?;
        if matrix::ensure_square(&b)? != d || matrix::ensure_square(&x)? != d {
            return Err(Error::DimensionMismatch(format!(
                "blocks must all be {d}x{d}, got B {}x{} and X {}x{}",
                b.nrows(),
                b.ncols(),
                x.nrows(),
                x.ncols()
            )));
        }
        check_hermitian(&a)?;
        check_hermitian(&b)?;
        Ok(Self { a, b, x })
    }

    /// Splits a Hermitian `2d × 2d` matrix into its four `d × d` blocks.
    pub fn from_assembled(m: &ComplexMatrix) -> Result<Self> {
        let n = matrix::ensure_square(m)?;
        if n % 2 != 0 {
            return Err(Error::Factorization { size: n, d1: 2, d2: n / 2 });
        }
        check_hermitian(m)?;
        let d = n / 2;
        Self::new(
            m.view((0, 0), (d, d)).into_owned(),
            m.view((d, d), (d, d)).into_owned(),
            m.view((0, d), (d, d)).into_owned(),
        )
    }

    /// Block grid `[A_ij]` of an element of `M_2 ⊗ M_2` in Choi layout.
    pub fn from_tensor(m: &ComplexMatrix) -> Result<Self> {
        Self::from_assembled(&ChoiBlockMatrix::new(m.clone(), 2)?.block_grid())
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(2 * d, 2 * d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.a);
        m.view_mut((d, d), (d, d)).copy_from(&self.b);
        m.view_mut((0, d), (d, d)).copy_from(&self.x);
        m.view_mut((d, 0), (d, d)).copy_from(&self.x.adjoint());
        m
    }

    /// `[[B, X*], [X, A]]`, unitarily similar to `self`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), x: self.x.adjoint() }
    }

    /// Same diagonal, off-diagonal block replaced.
    pub fn with_offdiagonal(&self, x: ComplexMatrix) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), x)
    }

    /// Off-diagonal replaced by `(X + X*)/2` and by `(X - X*)/(2i)`.
    pub fn hermitian_reductions(&self) -> (Self, Self) {
        let xa = self.x.adjoint();
        let re = (&self.x + &xa) * c(0.5, 0.0);
        let im = (&self.x - &xa) * c(0.0, -0.5);
        (Self { a: self.a.clone(), b: self.b.clone(), x: re }, Self { a: self.a.clone(), b: self.b.clone(), x: im })
    }
}

/// Random block matrix: half Gram-built (PSD, random rank), half a random
/// Hermitian matrix shifted by one of its own eigenvalues.
pub fn random_block_matrix(d: usize, rng: &mut impl Rng) -> BlockMatrix2 {
    let n = 2 * d;
    let m = if rng.random_bool(0.5) {
        random_psd(n, rng.random_range(1..=n), rng)
    } else {
        let h = random_hermitian(n, rng);
        let shift = matrix::eigenvalues_hermitian(&h)[rng.random_range(0..n)];
        matrix::hermitian_part(&(h - identity(n) * c(shift, 0.0)))
    };
    BlockMatrix2::from_assembled(&m).expect("Hermitian 2d x 2d")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PsdEquivalenceReport {
    /// (1) `M ⪰ 0`.
    pub direct: bool,
    pub direct_min_eigenvalue: f64,
    /// (2) `A, B ⪰ 0` and `|(f, X g)|² ≤ (f, A f)(g, B g)` on every probe.
    pub cauchy_schwarz: bool,
    /// Largest `|(f, X g)|² - (f, A f)(g, B g)` over probes, unit `f`, `g`.
    pub cauchy_schwarz_violation: f64,
    pub probes: usize,
    /// (3) `B ⪰ X* A⁻¹ X`; evaluated only when `λ_min(A) > 1e-6`.
    pub schur: Option<bool>,
    pub schur_min_eigenvalue: Option<f64>,
    /// (4) `[[B, X*], [X, A]] ⪰ 0`.
    pub swapped: bool,
    pub swapped_min_eigenvalue: f64,
    /// All evaluated conditions coincide.
    pub agree: bool,
}

/// Schur test threshold on `λ_min(A)`.
pub const SCHUR_MIN_EIGENVALUE: f64 = 1e-6;

struct Probe<'a> {
    m: &'a BlockMatrix2,
    worst: f64,
    count: usize,
}

impl Probe<'_> {
    fn test(&mut self, f: &ComplexVector, g: &ComplexVector) {
        let (nf, ng) = (f.norm(), g.norm());
        if nf == 0.0 || ng == 0.0 {
            return;
        }
        let (f, g) = (f / c(nf, 0.0), g / c(ng, 0.0));
        let fxg = f.dotc(&(&self.m.x * &g)).norm_sqr();
        let faf = f.dotc(&(&self.m.a * &f)).re;
        let gbg = g.dotc(&(&self.m.b * &g)).re;
        self.worst = self.worst.max(fxg - faf * gbg);
        self.count += 1;
    }
}

/// Evaluates the four equivalent positivity conditions for `M`.
///
/// The Cauchy–Schwarz probes are the top singular pair of
/// `A^{+1/2} X B^{+1/2}` (mapped back through the square roots), kernel
/// vectors of `A` and `B` paired with their images under `X*` and `X`, and
/// `n_probe` random unit pairs from `seed`.
pub fn psd_equivalence_report(m: &BlockMatrix2, n_probe: usize, seed: u64) -> PsdEquivalenceReport {
    let tol = PSD_TOL;
    let full = matrix::is_psd(&m.assemble(), tol);
    let swapped = matrix::is_psd(&m.swapped().assemble(), tol);
    let scale = 1.0 + full.spectral_norm;

    let eig_a = matrix::hermitian_eigen(&m.a);
    let eig_b = matrix::hermitian_eigen(&m.b);
    let diag_ok = matrix::psd_report_from(&eig_a, tol).is_psd && matrix::psd_report_from(&eig_b, tol).is_psd;

    let mut probe = Probe { m, worst: f64::NEG_INFINITY, count: 0 };
    let ra = matrix::pinv_sqrt_psd(&m.a, PINV_CUTOFF);
    let rb = matrix::pinv_sqrt_psd(&m.b, PINV_CUTOFF);
    let k = &ra * &m.x * &rb;
    let svd = k.svd(true, true);
    if let (Some(u), Some(vt)) = (&svd.u, &svd.v_t) {
        let top = svd.singular_values.imax();
        let f = &ra * u.column(top);
        let g = &rb * vt.row(top).adjoint();
        probe.test(&f, &g);
    }
    for (eig, other, forward) in [(&eig_a, &m.x, false), (&eig_b, &m.x, true)] {
        let cut = PINV_CUTOFF * eig.min().abs().max(eig.max().abs());
        for (i, &lam) in eig.values.iter().enumerate() {
            if lam > cut {
                continue;
            }
            let v = eig.vector(i);
            if forward {
                probe.test(&(other * &v), &v);
            } else {
                probe.test(&v, &(other.adjoint() * &v));
            }
        }
    }
    let d = m.dim();
    for i in 0..n_probe {
        let mut rng = stream(seed, i as u64);
        let f = random_unit_vector(d, &mut rng);
        let g = random_unit_vector(d, &mut rng);
        probe.test(&f, &g);
    }
    let violation = if probe.count == 0 { 0.0 } else { probe.worst };
    let cauchy_schwarz = diag_ok && violation <= tol * scale * scale;

    let (schur, schur_min_eigenvalue) = if eig_a.min() > SCHUR_MIN_EIGENVALUE {
        match matrix::schur_complement(&m.a, &m.b, &m.x, PINV_CUTOFF) {
            Ok(s) => {
                let r = matrix::is_psd(&matrix::hermitian_part(&s), tol);
                (Some(r.is_psd), Some(r.min_eigenvalue))
            }
            Err(_) => (Some(false), None),
        }
    } else {
        (None, None)
    };

    let agree =
        full.is_psd == cauchy_schwarz && full.is_psd == swapped.is_psd && schur.is_none_or(|s| s == full.is_psd);
    PsdEquivalenceReport {
        direct: full.is_psd,
        direct_min_eigenvalue: full.min_eigenvalue,
        cauchy_schwarz,
        cauchy_schwarz_violation: violation,
        probes: probe.count,
        schur,
        schur_min_eigenvalue,
        swapped: swapped.is_psd,
        swapped_min_eigenvalue: swapped.min_eigenvalue,
        agree,
    }
}

/// `M = M_1 + M_2` with `M_1 = [[A, X], [X*, X* A⁺ X]]`, `M_2 = [[0, 0], [0, B - X* A⁺ X]]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockSplit {
    pub m1: BlockMatrix2,
    pub m2: BlockMatrix2,
    /// `‖(I - P_A) X‖_F / max(1, ‖X‖_F)`; the split factorises only when this vanishes.
    pub range_residual: f64,
    pub range_ok: bool,
    /// `max |M_1 + M_2 - M|`.
    pub reassembly_error: f64,
}

/// Splits `M` along the Schur complement of a PSD `A`.
///
/// `M_1` is PSD whenever `Ran X ⊆ Ran A`, and `M_2` is PSD iff the Schur
/// complement is; for Hermitian `X` this is the split `[[A, X], [X, X A⁺ X]]`.
pub fn m1_m2_split(m: &BlockMatrix2, pinv_cutoff: f64) -> Result<BlockSplit> {
    let report = matrix::is_psd(&m.a, PSD_TOL);
    if !report.is_psd {
        return Err(Error::NotPsd { min_eigenvalue: report.min_eigenvalue });
    }
    let d = m.dim();
    let ap = matrix::pinv_hermitian(&m.a, pinv_cutoff);
    let corner = matrix::hermitian_part(&(m.x.adjoint() * ap * &m.x));
    let rest = &m.b - &corner;
    let m1 = BlockMatrix2 { a: m.a.clone(), b: corner, x: m.x.clone() };
    let m2 = BlockMatrix2 { a: ComplexMatrix::zeros(d, d), b: rest, x: ComplexMatrix::zeros(d, d) };
    let reassembly_error = matrix::max_abs_diff(&(m1.assemble() + m2.assemble()), &m.assemble());
    let range_residual = matrix::range_residual(&m.a, &m.x, pinv_cutoff);
    Ok(BlockSplit { m1, m2, range_residual, range_ok: range_residual <= 1e-8, reassembly_error })
}

/// `‖[A^{1/2}, (A⁺)^{1/2} X]‖_F`; zero when the pair commutes.
pub fn tomiyama_commutator(a: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let root = matrix::psd_sqrt(a);
    let inv_root = matrix::pinv_sqrt_psd(a, PINV_CUTOFF);
    frobenius(&commutator(&root, &(inv_root * x)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TomiyamaRecord {
    pub index: usize,
    pub commutator: f64,
    /// `commutator / (‖A^{1/2}‖_F ‖(A⁺)^{1/2} X‖_F)`.
    pub relative: f64,
    /// `‖[A, X]‖_F`.
    pub ax_commutator: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TomiyamaReport {
    pub seed: u64,
    pub n: usize,
    pub commutator: Summary,
    pub relative: Summary,
    pub ax_commutator: Summary,
    pub histogram: Histogram,
    /// Samples with relative commutator above `1e-6`.
    pub noncommuting: usize,
    pub records: Vec<TomiyamaRecord>,
}

/// Commutator statistics over `d = 2` block matrices `[[A, X], [X, B]]` with
/// `X = X*` such that the matrix and its blockwise transpose are PSD.
///
/// Samples are `C_d` elements with the off-diagonal block replaced by its
/// Hermitian part, which keeps both block matrices PSD.
pub fn tomiyama_statistics(n: usize, seed: u64) -> TomiyamaReport {
    let records: Vec<TomiyamaRecord> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream(seed, index as u64);
            let (x, _) = sample_cd(2, &mut rng);
            let grid = BlockMatrix2::from_tensor(&x).expect("4x4 Hermitian");
            let (m, _) = grid.hermitian_reductions();
            let commutator_norm = tomiyama_commutator(&m.a, &m.x);
            let scale =
                frobenius(&matrix::psd_sqrt(&m.a)) * frobenius(&(matrix::pinv_sqrt_psd(&m.a, PINV_CUTOFF) * &m.x));
            TomiyamaRecord {
                index,
                commutator: commutator_norm,
                relative: if scale > 0.0 { commutator_norm / scale } else { 0.0 },
                ax_commutator: frobenius(&commutator(&m.a, &m.x)),
            }
        })
        .collect();
    let values: Vec<f64> = records.iter().map(|r| r.commutator).collect();
    let relative: Vec<f64> = records.iter().map(|r| r.relative).collect();
    let ax: Vec<f64> = records.iter().map(|r| r.ax_commutator).collect();
    TomiyamaReport {
        seed,
        n,
        commutator: Summary::of(&values),
        relative: Summary::of(&relative),
        ax_commutator: Summary::of(&ax),
        histogram: Histogram::decades(-12, 0, &relative),
        noncommuting: relative.iter().filter(|&&r| r > 1e-6).count(),
        records,
    }
}

/// Distance threshold for the two-dimensional `C_d = C_p` experiment.
pub const CD_CP_DISTANCE_TOL: f64 = 1e-5;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CdCpFailure {
    pub index: usize,
    pub distance: f64,
    pub iterations: usize,
    #[serde(with = "json::square")]
    pub element: ComplexMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CdCpReport {
    pub seed: u64,
    pub n: usize,
    pub max_distance: f64,
    pub histogram: Histogram,
    pub failures: Vec<CdCpFailure>,
    pub iterations: Summary,
    pub sampler_attempts: usize,
    /// The sampler's acceptance rule rejects the maximally entangled projector.
    pub sampler_rejects_entangled: bool,
    pub passed: bool,
}

/// Samples `n` elements of `C_d` at `d = 2` and approximates each by a
/// separable decomposition; passes when every distance is below
/// [`CD_CP_DISTANCE_TOL`].
pub fn two_dim_cd_eq_cp_experiment(n: usize, seed: u64) -> CdCpReport {
    let opts = GilbertOptions { seed, ..GilbertOptions::default() };
    let rows: Vec<(f64, usize, usize, ComplexMatrix)> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream(seed, index as u64);
            let (x, stats) = sample_cd(2, &mut rng);
            let approx = separable_approx(&x, 2, 2, opts).expect("PSD 4x4 input");
            (approx.distance, approx.iterations, stats.attempts, x)
        })
        .collect();
    let distances: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let iterations: Vec<f64> = rows.iter().map(|r| r.1 as f64).collect();
    let failures: Vec<CdCpFailure> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.0.is_nan() || r.0 >= CD_CP_DISTANCE_TOL)
        .map(|(index, r)| CdCpFailure { index, distance: r.0, iterations: r.1, element: r.3.clone() })
        .collect();
    let sampler_rejects_entangled = !cd_accepts(&matrix::max_entangled_projector(2), 2);
    CdCpReport {
        seed,
        n,
        max_distance: distances.iter().copied().fold(0.0, f64::max),
        histogram: Histogram::decades(-12, -5, &distances),
        iterations: Summary::of(&iterations),
        sampler_attempts: rows.iter().map(|r| r.2).sum(),
        passed: failures.is_empty() && sampler_rejects_entangled,
        failures,
        sampler_rejects_entangled,
    }
}
