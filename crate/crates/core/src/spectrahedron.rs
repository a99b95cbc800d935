//! First-order solvers over `PSD ∩ (id⊗t)PSD` and the decomposable cone
//! `PSD + (id⊗t)PSD`.
//!
//! Duality used throughout: for Hermitian `x`,
//! `min { Tr(x w) : w ⪰ 0, w^Γ ⪰ 0, Tr w = 1 } = max { s : x - s·1 ∈ PSD + Γ PSD }`,
//! so a feasible `w` with `Tr(x w) < 0` proves `x` is not decomposable.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{
    self, c, ensure_factorization, frobenius, hermitian_eigen, identity, pt_unchecked, trace, ComplexMatrix, PSD_TOL,
};
use crate::verdict::{Certificate, Status, Verdict};

/// Euclidean projection of `v` onto `{u ≥ 0, Σ u = s}`.
fn simplex_projection(v: &[f64], s: f64) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cum += u;
        let t = (cum - s) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&u| (u - theta).max(0.0)).collect()
}

/// Nearest density matrix (Frobenius) to the Hermitian part of `a`.
pub fn project_density(a: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eigen(a);
    let p = simplex_projection(&eig.values, 1.0);
    let mut k = 0;
    eig.reassemble(|_| {
        let v = p[k];
        k += 1;
        v
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DykstraOptions {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        Self { max_iters: 2000, tol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct DykstraOutcome {
    pub point: ComplexMatrix,
    pub iterations: usize,
    /// `max(0, -λ_min(point))` relative to `1 + ‖point‖_F`; `point^Γ` is PSD exactly.
    pub residual: f64,
    pub converged: bool,
}

fn alternate_dykstra(
    x0: &ComplexMatrix,
    proj_a: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    proj_b: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    violation: impl Fn(&ComplexMatrix) -> f64,
    opts: DykstraOptions,
) -> DykstraOutcome {
    let n = x0.nrows();
    let mut y = x0.clone();
    let mut p = ComplexMatrix::zeros(n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    let mut residual = violation(&y);
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let u = proj_a(&(&y + &p));
        p = &y + &p - &u;
        let next = proj_b(&(&u + &q));
        q = &u + &q - &next;
        let step = frobenius(&(&next - &y));
        y = next;
        residual = violation(&y);
        if residual < opts.tol && step < opts.tol * (1.0 + frobenius(&y)) {
            break;
        }
    }
    DykstraOutcome { converged: residual < opts.tol, point: y, iterations, residual }
}

/// Dykstra projection of a Hermitian `x` onto `PSD ∩ (id⊗t)PSD`.
pub fn project_ppt(x: &ComplexMatrix, d1: usize, d2: usize, opts: DykstraOptions) -> Result<DykstraOutcome> {
    ensure_factorization(x, d1, d2)?;
    let x = matrix::hermitian_part(x);
    Ok(alternate_dykstra(
        &x,
        matrix::psd_part,
        |m| pt_unchecked(&matrix::psd_part(&pt_unchecked(m, d1, d2)), d1, d2),
        |m| (-hermitian_eigen(m).min()).max(0.0) / (1.0 + frobenius(m)),
        opts,
    ))
}

/// Projection onto `{w ⪰ 0, w^Γ ⪰ 0, Tr w = 1}`.
fn project_spectrahedron(x: &ComplexMatrix, d1: usize, d2: usize, inner: DykstraOptions) -> ComplexMatrix {
    alternate_dykstra(
        x,
        project_density,
        |m| pt_unchecked(&project_density(&pt_unchecked(m, d1, d2)), d1, d2),
        |m| (-hermitian_eigen(m).min()).max(0.0),
        inner,
    )
    .point
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SdpParams {
    /// Outer projected-gradient iterations.
    pub max_iters: usize,
    /// Witness values below `-tol · ‖x‖_2` certify non-decomposability.
    pub tol: f64,
    pub psd_tol: f64,
    /// Budget for the primal `P + Q^Γ` split search.
    pub split_iters: usize,
    pub inner_iters: usize,
}

impl Default for SdpParams {
    fn default() -> Self {
        Self { max_iters: 5000, tol: 1e-9, psd_tol: PSD_TOL, split_iters: 1500, inner_iters: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessSearch {
    /// Feasible witness, cleaned so both `w` and `w^Γ` are PSD.
    pub witness: ComplexMatrix,
    /// `Tr(x · witness)`.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub last_step: f64,
}

/// Shift `w` by a multiple of the identity until both `w` and `w^Γ` are PSD, then renormalise.
pub fn clean_witness(w: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    let w = matrix::hermitian_part(w);
    let lo = hermitian_eigen(&w).min().min(hermitian_eigen(&pt_unchecked(&w, d1, d2)).min());
    let n = w.nrows();
    let shifted = if lo < 0.0 { &w + identity(n) * c(-lo, 0.0) } else { w };
    let tr = trace(&shifted).re;
    shifted / c(tr, 0.0)
}

/// Projected gradient for `min Tr(x w)` over the PPT density matrices.
pub fn min_ppt_pairing(x: &ComplexMatrix, d1: usize, d2: usize, params: &SdpParams) -> Result<WitnessSearch> {
    ensure_factorization(x, d1, d2)?;
    let n = d1 * d2;
    let x = matrix::hermitian_part(x);
    let scale = matrix::spectral_norm(&x).max(f64::MIN_POSITIVE);
    let grad = &x / c(scale, 0.0);
    let inner = DykstraOptions { max_iters: params.inner_iters, tol: 1e-13 };
    let mut w = identity(n) / c(n as f64, 0.0);
    let mut best = w.clone();
    let mut best_value = trace(&(&x * &w)).re;
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;
    let mut converged = false;
    while iterations < params.max_iters {
        iterations += 1;
        let next = project_spectrahedron(&(&w - &grad), d1, d2, inner);
        last_step = frobenius(&(&next - &w));
        w = next;
        if iterations % 10 == 0 || last_step < 1e-10 {
            let cleaned = clean_witness(&w, d1, d2);
            let v = trace(&(&x * &cleaned)).re;
            if v < best_value {
                best_value = v;
                best = cleaned;
            }
            if best_value < -params.tol * scale * 10.0 {
                break;
            }
        }
        if last_step < 1e-10 {
            converged = true;
            break;
        }
    }
    Ok(WitnessSearch { witness: best, value: best_value, iterations, converged, last_step })
}

/// Search for `x = P + Q^Γ` with `P, Q ⪰ 0`, by alternating projections in `Q`
/// between `{Q ⪰ δ}` and `{Q : x - Q^Γ ⪰ δ}` for a decreasing margin `δ`.
pub fn decomposable_split(
    x: &ComplexMatrix,
    d1: usize,
    d2: usize,
    iters: usize,
    psd_tol: f64,
) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    ensure_factorization(x, d1, d2)?;
    let n = d1 * d2;
    let x = matrix::hermitian_part(x);
    let s = trace(&x).re.abs().max(matrix::spectral_norm(&x)) / n as f64;
    let margins = [1e-3 * s, 1e-6 * s, 0.0];
    let per = (iters / margins.len()).max(1);
    let mut q = ComplexMatrix::zeros(n, n);
    for &delta in &margins {
        let shift = identity(n) * c(delta, 0.0);
        for _ in 0..per {
            // Q ⪰ δ
            q = &shift + matrix::psd_part(&(&q - &shift));
            let p = &x - pt_unchecked(&q, d1, d2);
            if matrix::is_psd(&p, psd_tol).is_psd && matrix::is_psd(&q, psd_tol).is_psd {
                return Ok(Some((p, q)));
            }
            // Z = Q^Γ ⪯ x - δ
            let z = pt_unchecked(&q, d1, d2);
            let gap = &x - &shift - &z;
            let z = &x - &shift - matrix::psd_part(&gap);
            q = pt_unchecked(&z, d1, d2);
            let p = &x - &z;
            if matrix::is_psd(&p, psd_tol).is_psd && matrix::is_psd(&q, psd_tol).is_psd {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

fn split_certificate(x: &ComplexMatrix, p: ComplexMatrix, q: ComplexMatrix, d1: usize, d2: usize) -> Certificate {
    let residual = frobenius(&(x - &p - pt_unchecked(&q, d1, d2)));
    Certificate::DecomposableSplit { p, q, residual }
}

/// Membership of `x` in `PSD + (id⊗t)PSD`.
///
/// Certified yes with an explicit split, certified no with a PPT witness,
/// numeric yes when the witness search converges at a value `≥ -tol`.
pub fn decomposable_verdict(x: &ComplexMatrix, d1: usize, d2: usize, params: &SdpParams) -> Result<Verdict> {
    ensure_factorization(x, d1, d2)?;
    let x = matrix::hermitian_part(x);
    let direct = matrix::is_psd(&x, params.psd_tol);
    if direct.is_psd {
        let n = x.nrows();
        let cert = split_certificate(&x, x.clone(), ComplexMatrix::zeros(n, n), d1, d2);
        return Ok(Verdict::certified_yes(direct.min_eigenvalue, cert));
    }
    let xg = pt_unchecked(&x, d1, d2);
    let co = matrix::is_psd(&xg, params.psd_tol);
    if co.is_psd {
        let n = x.nrows();
        let cert = split_certificate(&x, ComplexMatrix::zeros(n, n), xg, d1, d2);
        return Ok(Verdict::certified_yes(co.min_eigenvalue, cert));
    }
    if let Some((p, q)) = decomposable_split(&x, d1, d2, params.split_iters, params.psd_tol)? {
        let cert = split_certificate(&x, p, q, d1, d2);
        return Ok(Verdict::certified_yes(0.0, cert));
    }
    let search = min_ppt_pairing(&x, d1, d2, params)?;
    let scale = matrix::spectral_norm(&x);
    if search.value < -params.tol * scale {
        let cert = Certificate::ConeWitness { witness: search.witness, value: search.value };
        return Ok(Verdict::certified_no(search.value, cert));
    }
    if search.converged {
        return Ok(Verdict::numeric(Status::NumericYes, search.value, None));
    }
    Ok(Verdict::inconclusive(search.value).with_note(format!(
        "witness search stopped after {} iterations; best value {:.3e}, last step {:.3e}",
        search.iterations, search.value, search.last_step
    )))
}

/// Independent check of a cone witness: `w ⪰ 0`, `w^Γ ⪰ 0` and `Tr(x w) < 0`.
pub fn verify_witness(x: &ComplexMatrix, w: &ComplexMatrix, d1: usize, d2: usize, psd_tol: f64) -> Result<Option<f64>> {
    ensure_factorization(w, d1, d2)?;
    let ok = matrix::is_psd(w, psd_tol).is_psd && matrix::is_psd(&pt_unchecked(w, d1, d2), psd_tol).is_psd;
    let value = matrix::trace_product(x, w).re;
    Ok((ok && value < 0.0).then_some(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{is_psd, max_abs_diff, max_entangled_projector, swap_operator};
    use crate::random::{random_psd, seeded};

    #[test]
    fn simplex_projection_examples() {
        assert_eq!(simplex_projection(&[0.5, 0.5], 1.0), vec![0.5, 0.5]);
        assert_eq!(simplex_projection(&[2.0, 0.0], 1.0), vec![1.0, 0.0]);
        let p = simplex_projection(&[0.3, -0.2, 0.4], 1.0);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn ppt_projection_lands_in_both_cones() {
        let mut rng = seeded(21);
        for d in [2usize, 3] {
            let x = random_psd(d * d, d * d, &mut rng);
            let out = project_ppt(&x, d, d, DykstraOptions::default()).unwrap();
            assert!(out.converged, "residual {}", out.residual);
            assert!(is_psd(&pt_unchecked(&out.point, d, d), 1e-9).is_psd);
            assert!(is_psd(&out.point, 1e-9).is_psd);
        }
        // already inside: fixed point
        let x = identity(4);
        let out = project_ppt(&x, 2, 2, DykstraOptions::default()).unwrap();
        assert!(max_abs_diff(&out.point, &x) < 1e-12);
    }

    #[test]
    fn split_and_verdict_on_easy_cases() {
        let bell = max_entangled_projector(2);
        let v = decomposable_verdict(&bell, 2, 2, &SdpParams::default()).unwrap();
        assert_eq!(v.status, Status::CertifiedYes);
        let v = decomposable_verdict(&swap_operator(3), 3, 3, &SdpParams::default()).unwrap();
        assert_eq!(v.status, Status::CertifiedYes);
        // genuine mixture P + Q^Γ with both parts entangled
        let x = max_entangled_projector(3) + pt_unchecked(&max_entangled_projector(3), 3, 3);
        let v = decomposable_verdict(&x, 3, 3, &SdpParams::default()).unwrap();
        assert_eq!(v.status, Status::CertifiedYes, "{v:?}");
        if let Some(Certificate::DecomposableSplit { p, q, residual }) = &v.certificate {
            assert!(*residual < 1e-9);
            assert!(is_psd(p, 1e-9).is_psd && is_psd(q, 1e-9).is_psd);
        } else {
            panic!("missing split");
        }
    }

    #[test]
    fn witness_for_negative_shift() {
        // Tr(-1 · w) = -1 for every normalised witness
        let x = -identity(4);
        let v = decomposable_verdict(&x, 2, 2, &SdpParams::default()).unwrap();
        assert_eq!(v.status, Status::CertifiedNo);
        if let Some(Certificate::ConeWitness { witness, value }) = &v.certificate {
            assert!((value + 1.0).abs() < 1e-9);
            assert!(verify_witness(&x, witness, 2, 2, 1e-9).unwrap().is_some());
        } else {
            panic!("missing witness");
        }
    }
}
