//! Blockwise self-duality of `C_cp` and the abelian-coefficient diagnostic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, c, commutator, frobenius, ComplexMatrix, ComplexVector, PSD_TOL};
use crate::random::{ginibre, random_psd, random_unit_vector, stream};
use crate::verdict::{Certificate, Status, Verdict};

use super::TensorElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfDualityReport {
    pub n_blocks: usize,
    pub block_dim: usize,
    pub n_samples: usize,
    pub direct_psd: bool,
    pub direct_min_eigenvalue: f64,
    /// Minimum of `Σ_ij Tr(ρ_ji A_ij)` over Gram probes.
    pub gram_min: f64,
    /// Minimum over the random rank-one family `A_ij = a_i x (a_j x)*`.
    pub rank_one_min: f64,
    /// Value on the rank-one probe built from the lowest eigenvector, when negative.
    pub targeted_value: Option<f64>,
    pub verdict: Verdict,
    /// Sampled verdict agrees with the direct PSD test.
    pub agrees: bool,
}

/// `Σ_ij Tr(ρ_ji A_ij) = Tr(R A)` for block matrices `R = [ρ_ij]`, `A = [A_ij]`.
fn functional(r: &ComplexMatrix, a: &ComplexMatrix) -> f64 {
    matrix::trace_product(r, a).re
}

/// Rank-one block matrix `[a_i x (a_j x)*]`.
fn rank_one_probe(a: &[ComplexMatrix], x: &ComplexVector) -> ComplexMatrix {
    let d = x.len();
    let v = ComplexVector::from_fn(a.len() * d, |idx, _| (&a[idx / d] * x)[idx % d]);
    &v * v.adjoint()
}

/// Tests positivity of `R = [ρ_ij]` through the functional `A ↦ Σ Tr(ρ_ji A_ij)`
/// on PSD block matrices `A`: Gram probes, the rank-one family
/// `A_ij = a_i x ⊗ (a_j x)‾`, and the rank-one probe with `a_i x = u_i` from the
/// lowest eigenvector `u` of `R`.
///
/// A negative probe gives `certified_no` with the probe as witness; otherwise
/// `numeric_yes`.
pub fn blockwise_selfduality_check(
    rho_blocks: &ComplexMatrix,
    block_dim: usize,
    n_samples: usize,
    seed: u64,
) -> Result<SelfDualityReport> {
    let n = matrix::ensure_square(rho_blocks)?;
    if block_dim == 0 || n % block_dim != 0 {
        return Err(Error::Factorization { size: n, d1: n / block_dim.max(1), d2: block_dim });
    }
    let k = n / block_dim;
    let d = block_dim;
    let r = matrix::hermitian_part(rho_blocks);
    let eig = matrix::hermitian_eigen(&r);
    let report = matrix::psd_report_from(&eig, PSD_TOL);
    let threshold = report.threshold();

    let mut worst: Option<(f64, ComplexMatrix)> = None;
    let consider = |value: f64, probe: ComplexMatrix, worst: &mut Option<(f64, ComplexMatrix)>| {
        if worst.as_ref().is_none_or(|(w, _)| value < *w) {
            *worst = Some((value, probe));
        }
    };

    let mut gram_min = f64::INFINITY;
    let mut rank_one_min = f64::INFINITY;
    for i in 0..n_samples {
        let mut rng = stream(seed, i as u64);
        let g = random_psd(n, 1 + i % n, &mut rng);
        let g = &g / c(matrix::trace(&g).re, 0.0);
        let vg = functional(&r, &g);
        gram_min = gram_min.min(vg);
        consider(vg, g, &mut worst);

        let a: Vec<ComplexMatrix> = (0..k).map(|_| ginibre(d, d, &mut rng)).collect();
        let x = random_unit_vector(d, &mut rng);
        let p = rank_one_probe(&a, &x);
        let p = &p / c(matrix::trace(&p).re, 0.0);
        let vp = functional(&r, &p);
        rank_one_min = rank_one_min.min(vp);
        consider(vp, p, &mut worst);
    }

    let targeted_value = if report.min_eigenvalue < 0.0 {
        let u = eig.vector(0);
        let x = matrix::basis_vector(d, 0);
        let a: Vec<ComplexMatrix> = (0..k)
            .map(|i| {
                let ui = ComplexVector::from_fn(d, |p, _| u[i * d + p]);
                matrix::rank_one(&ui, &x).expect("same length")
            })
            .collect();
        let p = rank_one_probe(&a, &x);
        let v = functional(&r, &p);
        consider(v, p, &mut worst);
        Some(v)
    } else {
        None
    };

    let verdict = match worst {
        Some((value, probe)) if value < threshold => {
            Verdict::certified_no(value, Certificate::BlockWitness { blocks: probe, value })
        }
        Some((value, _)) => Verdict::numeric(Status::NumericYes, value, None),
        None => Verdict::numeric(Status::NumericYes, 0.0, None).with_note("no probes"),
    };
    let agrees = verdict.is_yes() == report.is_psd;
    Ok(SelfDualityReport {
        n_blocks: k,
        block_dim: d,
        n_samples,
        direct_psd: report.is_psd,
        direct_min_eigenvalue: report.min_eigenvalue,
        gram_min: if n_samples == 0 { 0.0 } else { gram_min },
        rank_one_min: if n_samples == 0 { 0.0 } else { rank_one_min },
        targeted_value,
        verdict,
        agrees,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianReport {
    pub terms: usize,
    /// Largest `‖[𝒜^i_kl, 𝒜^i_mn]‖_F` within any single term.
    pub per_term_max: f64,
    /// Largest `‖[A_kl, A_mn]‖_F` among the assembled blocks.
    pub assembled_max: f64,
    /// `‖A_00 A_01 - A_01 A_00‖_F`.
    pub first_pair: f64,
}

fn max_pairwise_commutator(blocks: &[ComplexMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            worst = worst.max(frobenius(&commutator(a, b)));
        }
    }
    worst
}

/// Block coefficients of a `C_p` presentation `Σ_i a_i ⊗ b_i`:
/// per term `𝒜^i_kl = Tr(b_i e_lk) a_i` are multiples of one matrix and commute,
/// while the assembled `A_kl = Σ_i 𝒜^i_kl` generally do not.
pub fn abelian_coefficient_diagnostic(x: &TensorElement) -> Result<AbelianReport> {
    let d = x.dim();
    for (a, b) in x.factors() {
        for m in [a, b] {
            let rep = matrix::is_psd(m, PSD_TOL);
            if !rep.is_psd || matrix::hermitian_deviation(m) > 1e-10 * (1.0 + matrix::max_abs(m)) {
                return Err(Error::NotPsd { min_eigenvalue: rep.min_eigenvalue });
            }
        }
    }
    let mut per_term_max: f64 = 0.0;
    let mut assembled = vec![ComplexMatrix::zeros(d, d); d * d];
    for (a, b) in x.factors() {
        let blocks: Vec<ComplexMatrix> = (0..d * d).map(|idx| a * b[(idx / d, idx % d)]).collect();
        per_term_max = per_term_max.max(max_pairwise_commutator(&blocks));
        for (acc, blk) in assembled.iter_mut().zip(&blocks) {
            *acc += blk;
        }
    }
    Ok(AbelianReport {
        terms: x.factors().len(),
        per_term_max,
        assembled_max: max_pairwise_commutator(&assembled),
        first_pair: frobenius(&commutator(&assembled[0], &assembled[1])),
    })
}
