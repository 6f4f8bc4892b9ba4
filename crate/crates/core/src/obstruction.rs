//! Grading shifts of decorated link cobordisms, link Floer homology of thin
//! links from their Alexander polynomial, and the grading obstruction that
//! forces the pair-of-pants map to vanish when a capping disk meets the
//! boundary link once.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cabled::{enumerate_relations, truncated_quotient, CabledConfig, CabledError};
use crate::graded::{GradedError, GradedModule, MultiGrading};
pub use crate::laurent::LaurentMV;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("Maslov shift {numerator}/4 is not an integer")]
    NonIntegralShift { numerator: i64 },
    #[error("Maslov grading |h| - 1 is not an integer for doubled exponents {0:?}")]
    NonIntegralGrading(Vec<i64>),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Cabled(#[from] CabledError),
}

/// Surface and 4-manifold data entering the grading change of a cobordism map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CobordismGradingData {
    /// Euler characteristic of the type-w subsurface.
    pub chi_w: i64,
    /// Euler characteristic of the type-z subsurface.
    pub chi_z: i64,
    /// Number of w basepoints on the incoming link.
    pub w1_count: i64,
    /// Number of w basepoints on the outgoing link.
    pub w2_count: i64,
    pub c1_sq: i64,
    /// Euler characteristic of the 4-manifold.
    pub chi_w4: i64,
    /// Signature of the 4-manifold.
    pub sigma_w4: i64,
    /// Number of incoming 3-sphere boundary components.
    pub spheres_in: i64,
    /// Number of outgoing 3-sphere boundary components.
    pub spheres_out: i64,
}

impl CobordismGradingData {
    /// A cobordism inside `S^3 x I` with the given surface data.
    pub fn product(chi_w: i64, chi_z: i64, w1_count: i64, w2_count: i64) -> Self {
        CobordismGradingData { chi_w, chi_z, w1_count, w2_count, spheres_in: 1, spheres_out: 1, ..Default::default() }
    }

    /// The identity cylinder over a link with `w` basepoint pairs: each pair
    /// contributes one w strip and one z strip.
    pub fn identity(w: i64) -> Self {
        Self::product(w, w, w, w)
    }

    /// Data of the concatenation `self` then `next`. Surfaces are glued along
    /// the middle link, one w arc and one z arc per basepoint pair.
    pub fn then(&self, next: &CobordismGradingData) -> CobordismGradingData {
        let mid = self.w2_count;
        debug_assert_eq!(mid, next.w1_count);
        CobordismGradingData {
            chi_w: self.chi_w + next.chi_w - mid,
            chi_z: self.chi_z + next.chi_z - mid,
            w1_count: self.w1_count,
            w2_count: next.w2_count,
            c1_sq: self.c1_sq + next.c1_sq,
            chi_w4: self.chi_w4 + next.chi_w4,
            sigma_w4: self.sigma_w4 + next.sigma_w4,
            spheres_in: self.spheres_in,
            spheres_out: next.spheres_out,
        }
    }
}

/// Change of the Maslov grading.
///
/// The absolute w-grading changes by `(c1^2 - 2 chi(W) - 3 sigma(W))/4 +
/// chi(Sigma_w) - (|w1| + |w2|)/2`, and on a union of `s` spheres with `|w|`
/// basepoints it sits `(|w| - s)/2` above the Maslov grading used here.
pub fn maslov_shift(d: &CobordismGradingData) -> Result<i64, ObstructionError> {
    let numerator = d.c1_sq - 2 * d.chi_w4 - 3 * d.sigma_w4 + 4 * d.chi_w - 4 * d.w2_count
        + 2 * (d.spheres_out - d.spheres_in);
    if numerator % 4 != 0 {
        return Err(ObstructionError::NonIntegralShift { numerator });
    }
    Ok(numerator / 4)
}

/// Doubled change of the Alexander grading, `chi(Sigma_w) - chi(Sigma_z)`.
pub fn alexander_shift(d: &CobordismGradingData) -> i64 {
    d.chi_w - d.chi_z
}

/// Multiplies `delta` by `prod (x_i^{1/2} - x_i^{-1/2})` and places `|a_h|`
/// generators at multi-grading `h` with Maslov grading `|h| - 1`.
pub fn thin_link_homology(delta: &LaurentMV, n_components: usize) -> Result<GradedModule, ObstructionError> {
    assert_eq!(delta.arity(), n_components, "one variable per component");
    let p = (0..n_components).fold(delta.clone(), |acc, i| acc.mul(&LaurentMV::half_binomial(n_components, i)));
    let mut m = GradedModule::new(n_components);
    let mut label = 0;
    for (h, &a) in p.terms() {
        let s: i64 = h.iter().sum();
        if s % 2 != 0 {
            return Err(ObstructionError::NonIntegralGrading(h.clone()));
        }
        for _ in 0..a.unsigned_abs() {
            m.push(format!("g{label}"), MultiGrading::new(s / 2 - 1, h.clone()))?;
            label += 1;
        }
    }
    Ok(m)
}

/// `Δ(L2) = x1^{1/2} - x1^{-1/2}` in three variables.
pub fn l2_alexander() -> LaurentMV {
    LaurentMV::half_binomial(3, 0)
}

/// Alexander slot groups for `(A1, A2)`: `A2` collapses the two new cable copies.
pub const L2_GROUPS: [&[usize]; 2] = [&[0], &[1, 2]];

pub fn l2_groups() -> Vec<Vec<usize>> {
    L2_GROUPS.iter().map(|g| g.to_vec()).collect()
}

/// The thin-formula model of `HFL(L2)`, collapsed to `(A1, A2)`.
pub fn l2_thin_module() -> Result<GradedModule, ObstructionError> {
    Ok(thin_link_homology(&l2_alexander(), 3)?.collapse_alexander(&l2_groups())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub map: String,
    pub data: CobordismGradingData,
    pub maslov_shift: i64,
    /// Doubled shift per collapsed Alexander slot.
    pub alexander_shift: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub description: String,
    pub source: MultiGrading,
    pub steps: Vec<CertificateStep>,
    pub composed_shift: MultiGrading,
    pub target: MultiGrading,
    pub target_dim: usize,
    pub provenance: String,
}

impl VanishingCertificate {
    pub fn is_valid(&self) -> bool {
        self.target_dim == 0 && self.source.add(&self.composed_shift) == self.target
    }
}

/// Certifies `F'_P(B) = F^z_B(T^+(B)) = 0` by showing the target grading of
/// `HFL(L2)` is empty. `l2_module` must carry the collapsed `(A1, A2)` slots.
pub fn pants_vanishing_certificate(
    l2_module: &GradedModule,
    provenance: &str,
) -> Result<VanishingCertificate, ObstructionError> {
    if l2_module.alex_arity() != 2 {
        return Err(ObstructionError::InvalidCertificate(format!(
            "expected the (A1, A2) collapsed module, got arity {}",
            l2_module.alex_arity()
        )));
    }
    // B in HFL(L1): M = -1, A = 0.
    let source = MultiGrading::new(-1, vec![0, 0]);
    // T^+ on U: one strip per pair on the L side; on U one pair becomes two,
    // with the new w region a single disk.
    let t_plus = CobordismGradingData::product(1 + 1, 1 + 2, 2, 3);
    // The band lies in the z region of U: w disks are untouched, the z side
    // loses one from the band.
    let band = CobordismGradingData::product(3, 2, 3, 3);
    let mut steps = Vec::new();
    let mut shift = MultiGrading::zero(2);
    for (name, data) in [("T+", t_plus), ("F^z_B", band)] {
        let dm = maslov_shift(&data)?;
        let da = vec![0, alexander_shift(&data)];
        shift = shift.add(&MultiGrading::new(dm, da.clone()));
        steps.push(CertificateStep { map: name.into(), data, maslov_shift: dm, alexander_shift: da });
    }
    let target = source.add(&shift);
    let target_dim = l2_module.dim_at(&target);
    let cert = VanishingCertificate {
        description: "F'_P(B) = F^z_B(T+(B)) lands in an empty grading of HFL(L2)".into(),
        source,
        steps,
        composed_shift: shift,
        target,
        target_dim,
        provenance: provenance.into(),
    };
    if !cert.is_valid() {
        return Err(ObstructionError::InvalidCertificate(format!(
            "HFL(L2) has dimension {} at {}",
            cert.target_dim, cert.target
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingQuotient {
    pub trace: Vec<String>,
    /// Per truncation, the sum of all quotient dimensions.
    pub total_dims: Vec<(usize, usize)>,
    pub vanishes: bool,
}

/// Injects `v ~ F'_P(B) ⊗ v = 0` at every level and recomputes the quotient.
pub fn vanishing_quotient(
    certificate: &VanishingCertificate,
    truncations: &[usize],
) -> Result<VanishingQuotient, ObstructionError> {
    if !certificate.is_valid() {
        return Err(ObstructionError::InvalidCertificate(format!(
            "target {} has dimension {}",
            certificate.target, certificate.target_dim
        )));
    }
    let mut trace = vec![
        "pair of pants splits as a connected sum: F_P = F'_P ⊗ id".to_string(),
        format!(
            "F'_P(B) has grading {} + {} = {} where HFL(L2) has dimension 0 ({})",
            certificate.source, certificate.composed_shift, certificate.target, certificate.provenance
        ),
        "so F'_P(B) = 0 and the relation v ~ F'_P(B) ⊗ v becomes v ~ 0".to_string(),
    ];
    let mut total_dims = Vec::new();
    for &n in truncations {
        let mut p = enumerate_relations(n, CabledConfig::default())?;
        p.inject_vanishing_everywhere();
        let total: usize = truncated_quotient(&p).values().sum();
        trace.push(format!("N={n}: {} generators, quotient dimension {total}", p.ambient_dim()));
        total_dims.push((n, total));
    }
    let vanishes = total_dims.iter().all(|&(_, d)| d == 0);
    Ok(VanishingQuotient { trace, total_dims, vanishes })
}
