//! Classification of maps by properties of their Choi matrix.
//!
//! | class          | Choi condition                         | certainty          |
//! |----------------|----------------------------------------|--------------------|
//! | CP             | `C ⪰ 0`                                | certified          |
//! | CCP            | `C^Γ ⪰ 0`                              | certified          |
//! | PPT            | both                                   | certified          |
//! | decomposable   | `C ∈ PSD + Γ PSD`                      | split or witness   |
//! | EB             | `C` separable                          | separability policy|
//! | positive       | `<x⊗y, C x⊗y> ≥ 0` on products         | heuristic for d≥3  |

use serde::{Deserialize, Serialize};

use crate::matrix::{self, c, max_abs, rank_one, ComplexMatrix, PSD_TOL};
use crate::separability::{self, product_opt, OptMode, ProductOptions, SeparabilityPolicy, SeparableDecomposition};
use crate::spectrahedron::{self, SdpParams};
use crate::verdict::{Certificate, Status, Verdict};

use super::{max_map_difference, KrausChannel, LinearMap};

fn spectrum_verdict(m: &ComplexMatrix, tol: f64) -> Verdict {
    let eig = matrix::hermitian_eigen(m);
    let report = matrix::psd_report_from(&eig, tol);
    if report.is_psd {
        Verdict::certified_yes(
            report.min_eigenvalue,
            Certificate::Spectrum { min_eigenvalue: report.min_eigenvalue, eigenvector: None },
        )
    } else {
        Verdict::certified_no(
            report.min_eigenvalue,
            Certificate::Spectrum { min_eigenvalue: report.min_eigenvalue, eigenvector: Some(eig.vector(0)) },
        )
    }
}

/// Completely positive ⇔ Choi matrix PSD.
pub fn is_cp(map: &dyn LinearMap) -> Verdict {
    spectrum_verdict(map.choi().matrix(), PSD_TOL)
}

/// Completely copositive ⇔ partial transpose of the Choi matrix PSD.
pub fn is_ccp(map: &dyn LinearMap) -> Verdict {
    spectrum_verdict(map.choi().partial_transpose().matrix(), PSD_TOL)
}

/// CP and CCP; equivalently `[A_ij] ⪰ 0` and `[A_ji] ⪰ 0`.
pub fn is_ppt_map(map: &dyn LinearMap) -> Verdict {
    let choi = map.choi();
    let cp = spectrum_verdict(choi.matrix(), PSD_TOL);
    if !cp.is_yes() {
        return cp;
    }
    let ccp = spectrum_verdict(choi.partial_transpose().matrix(), PSD_TOL);
    if !ccp.is_yes() {
        return ccp;
    }
    Verdict::certified_yes(
        cp.residual.min(ccp.residual),
        Certificate::PptSpectra { min_eigenvalue: cp.residual, partial_transpose_min_eigenvalue: ccp.residual },
    )
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PositivityParams {
    pub multistarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Relative to `1 + max|C_ij|`.
    pub tol: f64,
}

impl Default for PositivityParams {
    fn default() -> Self {
        Self { multistarts: 16, iters: 100, seed: 0, tol: 1e-9 }
    }
}

/// Positivity via `min_{f,g} <f, T(g g*) f> = min <f⊗ḡ, C f⊗ḡ>`.
///
/// A negative minimum yields `numeric_no` with the witness pair `(f, g)`.
/// Otherwise `numeric_yes`, upgraded to `certified_yes` only for `d ≤ 2` when
/// the map is decomposable with an explicit split.
pub fn is_positive_map(map: &dyn LinearMap, params: &PositivityParams) -> Verdict {
    let d = map.dim();
    let choi = map.choi();
    let m = choi.matrix();
    let opts = ProductOptions { multistarts: params.multistarts, iters: params.iters, seed: params.seed };
    let opt =
        product_opt(m, d, d, OptMode::Min, opts).expect("Choi matrices of Hermiticity-preserving maps are Hermitian");
    let threshold = params.tol * (1.0 + max_abs(m));
    if opt.value < -threshold {
        let g = opt.y.map(|z| z.conj());
        return Verdict::numeric(
            Status::NumericNo,
            opt.value,
            Some(Certificate::ProductWitness { x: opt.x, y: g, value: opt.value }),
        )
        .with_note("witness (x, y) = (f, g) with <f, T(g g*) f> = value");
    }
    if d <= 2 {
        let split = spectrahedron::decomposable_verdict(m, d, d, &SdpParams::default());
        if let Ok(v) = split {
            if v.status == Status::CertifiedYes {
                return Verdict::certified_yes(opt.value, v.certificate.expect("certified"))
                    .with_note("decomposable in dimension 2");
            }
        }
    }
    Verdict::numeric(Status::NumericYes, opt.value, None)
}

/// Rank-one Kraus operators `V_k = √w_k x_k y_kᵀ` realising a separable Choi decomposition.
pub fn rank_one_kraus(decomposition: &SeparableDecomposition) -> Vec<ComplexMatrix> {
    decomposition
        .terms
        .iter()
        .map(|t| {
            let y_bar = t.y.map(|z| z.conj());
            rank_one(&t.x, &y_bar).expect("equal lengths") * c(t.weight.sqrt(), 0.0)
        })
        .collect()
}

fn decomposition_of(cert: &Certificate) -> Option<&SeparableDecomposition> {
    match cert {
        Certificate::Separable { decomposition, .. } => Some(decomposition),
        Certificate::PptExactness { decomposition, .. } => decomposition.as_ref(),
        _ => None,
    }
}

/// Entanglement breaking ⇔ separable Choi matrix.
///
/// A yes verdict carries a rank-one Kraus certificate whenever a separable
/// decomposition is available, with its reconstruction error on the
/// matrix-unit basis.
pub fn is_entanglement_breaking(map: &dyn LinearMap, policy: &SeparabilityPolicy) -> Verdict {
    let d = map.dim();
    let choi = map.choi();
    let m = choi.matrix();
    let cp = spectrum_verdict(m, policy.psd_tol);
    if !cp.is_yes() {
        return cp.with_note("not completely positive");
    }
    if matrix::trace(m).re <= 0.0 {
        let zero = SeparableDecomposition { d1: d, d2: d, terms: vec![] };
        return Verdict::certified_yes(0.0, Certificate::Separable { decomposition: zero, distance: 0.0 })
            .with_note("zero map");
    }
    let sep = match separability::is_separable(m, d, d, policy) {
        Ok(v) => v,
        Err(e) => return Verdict::inconclusive(f64::NAN).with_note(e.to_string()),
    };
    if !sep.is_yes() {
        return sep;
    }
    let Some(cert) = sep.certificate.clone() else { return sep };
    let Some(decomposition) = decomposition_of(&cert).cloned() else { return sep };
    if decomposition.terms.is_empty() {
        return sep;
    }
    let kraus = rank_one_kraus(&decomposition);
    let rebuilt = KrausChannel::new(kraus.clone()).expect("non-empty square operators");
    let reconstruction_error = max_map_difference(&rebuilt, map);
    let rank_one = Certificate::RankOneKraus { kraus, reconstruction_error, decomposition: None };
    Verdict { certificate: Some(Certificate::Composite { parts: vec![cert, rank_one] }), ..sep }
}

/// Relative singular-value cut-off under which a Kraus operator counts as rank one.
pub const RANK_ONE_TOL: f64 = 1e-10;

/// Entanglement breaking of a Kraus channel. Rank-one Kraus operators certify
/// directly; otherwise the Choi matrix goes through [`is_entanglement_breaking`].
pub fn is_entanglement_breaking_kraus(channel: &KrausChannel, policy: &SeparabilityPolicy) -> Verdict {
    let ops = channel.kraus_ops();
    if ops.iter().all(|v| matrix::operator_rank(v, RANK_ONE_TOL) <= 1) {
        let kraus: Vec<ComplexMatrix> = ops.iter().map(nearest_rank_one).collect();
        let rebuilt = KrausChannel::new(kraus.clone()).expect("non-empty square operators");
        let reconstruction_error = max_map_difference(&rebuilt, channel);
        return Verdict::certified_yes(
            0.0,
            Certificate::RankOneKraus { kraus, reconstruction_error, decomposition: None },
        )
        .with_note("every Kraus operator has rank one");
    }
    is_entanglement_breaking(channel, policy)
}

fn nearest_rank_one(v: &ComplexMatrix) -> ComplexMatrix {
    let svd = v.clone().svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let k = (0..svd.singular_values.len())
        .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap_or(0);
    u.column(k) * c(svd.singular_values[k], 0.0) * vt.row(k)
}

/// Decomposable ⇔ Choi matrix in `PSD + (id⊗t) PSD`.
pub fn is_decomposable(map: &dyn LinearMap, params: &SdpParams) -> Verdict {
    let d = map.dim();
    match spectrahedron::decomposable_verdict(map.choi().matrix(), d, d, params) {
        Ok(v) => v,
        Err(e) => Verdict::inconclusive(f64::NAN).with_note(e.to_string()),
    }
}

/// The six classification verdicts of one map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub positive: Verdict,
    pub cp: Verdict,
    pub ccp: Verdict,
    pub ppt: Verdict,
    pub decomposable: Verdict,
    pub entanglement_breaking: Verdict,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyParams {
    pub positivity: PositivityParams,
    pub sdp: SdpParams,
    pub separability: SeparabilityPolicy,
}

pub fn classify(map: &dyn LinearMap, params: &ClassifyParams) -> Classification {
    Classification {
        positive: is_positive_map(map, &params.positivity),
        cp: is_cp(map),
        ccp: is_ccp(map),
        ppt: is_ppt_map(map),
        decomposable: is_decomposable(map, &params.sdp),
        entanglement_breaking: is_entanglement_breaking(map, &params.separability),
    }
}

impl Classification {
    pub fn rows(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("positive", &self.positive),
            ("cp", &self.cp),
            ("ccp", &self.ccp),
            ("ppt", &self.ppt),
            ("decomposable", &self.decomposable),
            ("entanglement_breaking", &self.entanglement_breaking),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::super::library::*;
    use super::super::{co_conjugate, compose};
    use super::*;
    use crate::matrix::{c, ComplexVector};
    use crate::random::{ginibre, seeded};

    #[test]
    fn rank_one_kraus_shortcut() {
        let mut rng = seeded(21);
        let eb = crate::channels::sampling::random_eb_channel(3, 4, &mut rng);
        let v = is_entanglement_breaking_kraus(&compose(&eb, &eb).unwrap(), &SeparabilityPolicy::default());
        assert_eq!(v.status, Status::CertifiedYes);
        let Some(Certificate::RankOneKraus { reconstruction_error, .. }) = v.certificate else { panic!() };
        assert!(reconstruction_error < 1e-12);
        let id = is_entanglement_breaking_kraus(&identity_channel(2), &SeparabilityPolicy::default());
        assert_eq!(id.status, Status::CertifiedNo);
    }

    #[test]
    fn transposition_ground_truth() {
        for d in 2..4 {
            let t = transpose_map(d);
            let cp = is_cp(&t);
            assert_eq!(cp.status, Status::CertifiedNo);
            assert!((cp.residual + 1.0).abs() < 1e-12);
            assert_eq!(is_ccp(&t).status, Status::CertifiedYes);
            assert!(is_positive_map(&t, &PositivityParams::default()).is_yes());
            assert_eq!(is_decomposable(&t, &SdpParams::default()).status, Status::CertifiedYes);
        }
    }

    #[test]
    fn identity_ground_truth() {
        for d in 2..4 {
            let id = identity_channel(d);
            assert_eq!(is_cp(&id).status, Status::CertifiedYes);
            assert_eq!(is_ccp(&id).status, Status::CertifiedNo);
            assert_eq!(is_ppt_map(&id).status, Status::CertifiedNo);
            assert_eq!(is_entanglement_breaking(&id, &SeparabilityPolicy::default()).status, Status::CertifiedNo);
        }
    }

    #[test]
    fn depolarizing_ground_truth() {
        for d in 2..4 {
            let dep = depolarizing(d);
            let cls = classify(&dep, &ClassifyParams::default());
            for (name, v) in cls.rows() {
                assert!(v.is_yes(), "{name} at d={d}: {v:?}");
            }
            let eb = &cls.entanglement_breaking;
            assert_eq!(eb.status, Status::CertifiedYes);
            let Some(Certificate::Composite { parts }) = &eb.certificate else { panic!("no Kraus certificate") };
            let Certificate::RankOneKraus { kraus, reconstruction_error, .. } = &parts[1] else { panic!() };
            assert!(*reconstruction_error < 1e-12);
            for v in kraus {
                assert_eq!(matrix::operator_rank(v, 1e-9), 1);
            }
        }
    }

    #[test]
    fn conjugate_pair_channel_is_ppt_and_eb() {
        let t = conjugate_pair_channel(&conjugate_pair_unital_vector()).unwrap();
        assert_eq!(is_ppt_map(&t).status, Status::CertifiedYes);
        let policy = SeparabilityPolicy { decompose_exact: true, ..Default::default() };
        let eb = is_entanglement_breaking(&t, &policy);
        assert_eq!(eb.status, Status::CertifiedYes);
        let Some(Certificate::Composite { parts }) = &eb.certificate else { panic!("{eb:?}") };
        let Certificate::RankOneKraus { kraus, reconstruction_error, .. } = &parts[1] else { panic!() };
        assert!(*reconstruction_error < 1e-6);
        for v in kraus {
            assert_eq!(matrix::operator_rank(v, 1e-6), 1);
        }
        // composing EB channels stays EB
        let tt = compose(&t, &t).unwrap();
        assert!(is_entanglement_breaking(&tt, &SeparabilityPolicy::default()).is_yes());
    }

    #[test]
    fn reduction_map_is_positive() {
        let r = ReductionMap { dim: 2 };
        let v = is_positive_map(&r, &PositivityParams::default());
        assert!(v.is_yes());
        assert!(v.residual.abs() < 1e-9, "minimum over pure states is 0, got {}", v.residual);
        assert_eq!(is_cp(&r).status, Status::CertifiedNo);
        let r3 = ReductionMap { dim: 3 };
        assert_eq!(is_positive_map(&r3, &PositivityParams::default()).status, Status::NumericYes);
    }

    #[test]
    fn kraus_channels_are_positive() {
        let mut rng = seeded(31);
        let ch = KrausChannel::new(vec![ginibre(3, 3, &mut rng), ginibre(3, 3, &mut rng)]).unwrap();
        assert_eq!(is_positive_map(&ch, &PositivityParams::default()).status, Status::NumericYes);
        assert_eq!(is_decomposable(&ch, &SdpParams::default()).status, Status::CertifiedYes);
    }

    #[test]
    fn negative_map_has_witness() {
        // a ↦ -a is not positive
        let neg = KrausChannel::new(vec![matrix::identity(2)]).unwrap();
        let minus = super::super::linear_combination(&[(-1.0, &neg as &dyn LinearMap)]).unwrap();
        let v = is_positive_map(&minus, &PositivityParams::default());
        assert_eq!(v.status, Status::NumericNo);
        let Some(Certificate::ProductWitness { x, y, value }) = &v.certificate else { panic!() };
        let g: ComplexVector = y.clone();
        let img = minus.image(&(&g * g.adjoint()));
        let direct = (x.adjoint() * img * x)[(0, 0)];
        assert!((direct - c(*value, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn choi_map_is_not_decomposable() {
        let phi = choi_map_d3();
        assert!(is_positive_map(&phi, &PositivityParams::default()).is_yes());
        let v = is_decomposable(&phi, &SdpParams::default());
        assert_eq!(v.status, Status::CertifiedNo, "{v:?}");
        let Some(Certificate::ConeWitness { witness, value }) = &v.certificate else { panic!() };
        assert!(*value < -1e-8);
        let check = spectrahedron::verify_witness(phi.choi().matrix(), witness, 3, 3, 1e-9).unwrap();
        assert!(check.unwrap() < -1e-8);
    }

    #[test]
    fn ppt_is_symmetric_under_co_conjugation() {
        let t = conjugate_pair_channel(&conjugate_pair_unital_vector()).unwrap();
        assert_eq!(is_ppt_map(&co_conjugate(&t)).status, Status::CertifiedYes);
    }
}
