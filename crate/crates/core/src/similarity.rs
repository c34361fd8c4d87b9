//! Landscape cosine similarity between persistence diagrams and its relatives.
//!
//! With φ the landscape map and ‖·‖ the landscape 2-norm:
//!
//! * cosine similarity ς = ⟨φ(D₁), φ(D₂)⟩ / (‖φ(D₁)‖ ‖φ(D₂)‖), cosine distance ς* = 1 − ς;
//! * ρ = 2⟨φ(D₁), φ(D₂)⟩ / (‖φ(D₁)‖² + ‖φ(D₂)‖²), ρ* = 1 − ρ
//!   = ‖φ(D₁) − φ(D₂)‖² / (‖φ(D₁)‖² + ‖φ(D₂)‖²);
//! * D₁ and D₂ are orthogonal when ⟨φ(D₁), φ(D₂)⟩ = 0, which happens exactly
//!   when no open interval (b, d) of one diagram meets one of the other.
//!
//! Only the finite parts of the diagrams enter; essential classes have no landscape.

use alloc::format;

use crate::diagram::{distance_to_empty, wasserstein};
use crate::error::{invalid, Error, Result};
use crate::landscape::{build_landscape, inner_product, p_norm, subtract, support_union, PersistenceLandscape};
use crate::math::sqrt;
use crate::persistence::PersistenceDiagram;

/// Rounding slack allowed when clamping a similarity into [0, 1].
pub const CLAMP_SLACK: f64 = 1e-14;

/// Default relative tolerance of [`is_orthogonal`].
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimilarityKind {
    CosineSimilarity,
    CosineDistance,
    RhoSimilarity,
    RhoDistance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityResult {
    pub value: f64,
    pub kind: SimilarityKind,
}

/// Evaluates one indicator.
pub fn compare(kind: SimilarityKind, d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<SimilarityResult> {
    let value = match kind {
        SimilarityKind::CosineSimilarity => cosine_similarity(d1, d2)?,
        SimilarityKind::CosineDistance => cosine_distance(d1, d2)?,
        SimilarityKind::RhoSimilarity => rho_similarity(d1, d2)?,
        SimilarityKind::RhoDistance => rho_distance(d1, d2)?,
    };
    Ok(SimilarityResult { value, kind })
}

/// Landscape, squared 2-norm and 2-norm of a diagram.
struct Embedded {
    landscape: PersistenceLandscape,
    norm_sq: f64,
    norm: f64,
}

fn embed(d: &PersistenceDiagram) -> Embedded {
    let landscape = build_landscape(d);
    let norm_sq = inner_product(&landscape, &landscape);
    Embedded {
        norm: sqrt(norm_sq),
        landscape,
        norm_sq,
    }
}

/// Clamps `x` into [0, 1] if it is outside by at most [`CLAMP_SLACK`].
fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&x) {
        return Err(Error::InternalConsistency(format!("{what} = {x} is outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn cosine_of(a: &Embedded, b: &Embedded) -> Result<f64> {
    // sqrt of the product rather than the product of the norms, so that
    // identical landscapes give exactly 1
    let s = inner_product(&a.landscape, &b.landscape) / sqrt(a.norm_sq * b.norm_sq);
    clamp_unit(s, "cosine similarity")
}

fn require_non_empty(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<()> {
    if d1.is_empty() || d2.is_empty() {
        Err(invalid("cosine similarity needs two non-empty diagrams"))
    } else {
        Ok(())
    }
}

/// Landscape cosine similarity ς ∈ [0, 1]. Both diagrams must have finite points.
pub fn cosine_similarity(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    require_non_empty(d1, d2)?;
    cosine_of(&embed(d1), &embed(d2))
}

/// Cosine distance ς* = 1 − ς.
pub fn cosine_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    Ok(1.0 - cosine_similarity(d1, d2)?)
}

fn rho_parts(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<(Embedded, Embedded, f64)> {
    if d1.is_empty() && d2.is_empty() {
        return Err(invalid("rho needs at least one non-empty diagram"));
    }
    let (a, b) = (embed(d1), embed(d2));
    let denom = a.norm_sq + b.norm_sq;
    Ok((a, b, denom))
}

/// ρ = 2⟨φ(D₁), φ(D₂)⟩ / (‖φ(D₁)‖² + ‖φ(D₂)‖²). Defined when at least one
/// diagram is non-empty; zero when exactly one is.
pub fn rho_similarity(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    let (a, b, denom) = rho_parts(d1, d2)?;
    clamp_unit(2.0 * inner_product(&a.landscape, &b.landscape) / denom, "rho")
}

/// ρ* = 1 − ρ, cross-checked against ‖φ(D₁) − φ(D₂)‖² / (‖φ(D₁)‖² + ‖φ(D₂)‖²).
pub fn rho_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    let (a, b, denom) = rho_parts(d1, d2)?;
    let rho = clamp_unit(2.0 * inner_product(&a.landscape, &b.landscape) / denom, "rho")?;
    let gap = p_norm(&subtract(&a.landscape, &b.landscape), 2.0)?;
    let quotient = gap * gap / denom;
    let by_complement = 1.0 - rho;
    if (quotient - by_complement).abs() > 1e-12 {
        return Err(Error::InternalConsistency(format!(
            "rho distance disagrees: 1 - rho = {by_complement}, quotient = {quotient}"
        )));
    }
    Ok(by_complement)
}

/// True iff ⟨φ(D₁), φ(D₂)⟩ ≤ `tolerance` · ‖φ(D₁)‖ ‖φ(D₂)‖. Empty diagrams are
/// orthogonal to everything.
pub fn is_orthogonal(d1: &PersistenceDiagram, d2: &PersistenceDiagram, tolerance: f64) -> Result<bool> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(invalid("tolerance must be non-negative"));
    }
    let (a, b) = (embed(d1), embed(d2));
    Ok(inner_product(&a.landscape, &b.landscape) <= tolerance * a.norm * b.norm)
}

/// True iff no open interval `(b, d)` of `d1` meets an open interval of `d2`.
/// Exact: no tolerance involved.
pub fn is_orthogonal_by_intervals(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> bool {
    let (u, v) = (support_union(d1), support_union(d2));
    let (mut i, mut j) = (0, 0);
    while i < u.len() && j < v.len() {
        let (a, b) = u[i];
        let (c, d) = v[j];
        if a.max(c) < b.min(d) {
            return false;
        }
        if b <= d {
            i += 1;
        } else {
            j += 1;
        }
    }
    true
}

/// Both sides of the perturbation bound for ς, with the constants used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// |ς(D̃₁, D̃₂) − ς(D₁, D₂)|
    pub lhs: f64,
    /// c₁ W₂(D₁, D̃₁) + c₂ W₂(D₂, D̃₂)
    pub rhs: f64,
    pub c1: f64,
    pub c2: f64,
    /// Admissible perturbation radius.
    pub eta: f64,
    /// W₂(D₁, D̃₁) and W₂(D₂, D̃₂).
    pub w2: [f64; 2],
    /// Both perturbations are within `eta`; only then is `lhs <= rhs` guaranteed.
    pub within_eta: bool,
    /// ‖φ(D̃ᵢ) − φ(Dᵢ)‖² for i = 1, 2.
    pub landscape_gap: [f64; 2],
    /// 2 (W∞(Dᵢ, ∅) + 1/3) W₂(Dᵢ, D̃ᵢ)², which bounds `landscape_gap[i]` when W₂ ≤ 1.
    pub landscape_bound: [f64; 2],
}

impl StabilityReport {
    /// `lhs <= rhs` (up to rounding) whenever the perturbations are admissible.
    pub fn bound_holds(&self) -> bool {
        !self.within_eta || self.lhs <= self.rhs + 1e-12
    }

    /// The landscape/Wasserstein bound holds for every diagram with W₂ ≤ 1.
    pub fn landscape_bound_holds(&self) -> bool {
        (0..2).all(|i| self.w2[i] > 1.0 || self.landscape_gap[i] <= self.landscape_bound[i] * (1.0 + 1e-9) + 1e-15)
    }
}

/// Evaluates the perturbation bound |ς(D̃₁, D̃₂) − ς(D₁, D₂)| ≤ c₁ W₂(D₁, D̃₁) + c₂ W₂(D₂, D̃₂).
///
/// Notation: aᵢ = ‖φ(Dᵢ)‖, ãᵢ = ‖φ(D̃ᵢ)‖, e = ‖φ(D₁) − φ(D₂)‖, ẽ likewise,
/// Wᵢ = W₂(Dᵢ, D̃ᵢ) and Kᵢ = √(2 (W∞(Dᵢ, ∅) + 1/3)), so that for Wᵢ ≤ 1
///
/// ```text
///   ‖φ(D̃ᵢ) − φ(Dᵢ)‖ ≤ Kᵢ Wᵢ        and hence   |ãᵢ − aᵢ| ≤ Kᵢ Wᵢ.
/// ```
///
/// η² = min{1, a₁²/(8(W∞(D₁,∅)+1/3)), a₂²/(8(W∞(D₂,∅)+1/3))} makes Kᵢ η ≤ aᵢ/2,
/// so aᵢ/2 ≤ ãᵢ ≤ 3aᵢ/2 for admissible perturbations.
pub fn check_stability_bound(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    d1_pert: &PersistenceDiagram,
    d2_pert: &PersistenceDiagram,
) -> Result<StabilityReport> {
    require_non_empty(d1, d2)?;
    require_non_empty(d1_pert, d2_pert)?;
    let (d1, d2) = (d1.finite_part(), d2.finite_part());
    let (t1, t2) = (d1_pert.finite_part(), d2_pert.finite_part());
    let (e1, e2) = (embed(&d1), embed(&d2));
    let (f1, f2) = (embed(&t1), embed(&t2));
    let (a1, a2) = (e1.norm, e2.norm);

    let reach1 = distance_to_empty(&d1, f64::INFINITY)? + 1.0 / 3.0;
    let reach2 = distance_to_empty(&d2, f64::INFINITY)? + 1.0 / 3.0;
    let eta = sqrt(1f64.min(e1.norm_sq / (8.0 * reach1)).min(e2.norm_sq / (8.0 * reach2)));
    let k1 = sqrt(2.0 * reach1);
    let k2 = sqrt(2.0 * reach2);

    let gap = p_norm(&subtract(&e1.landscape, &e2.landscape), 2.0)?;

    // 2ς = a₁/a₂ + a₂/a₁ − e²/(a₁a₂), so 2|Δς| is bounded by three moduli.
    //
    // (i)   |ã₁/ã₂ − a₁/a₂| ≤ (a₂|ã₁−a₁| + a₁|ã₂−a₂|)/(ã₂a₂)
    //                       ≤ (2K₁/a₂) W₁ + (2a₁K₂/a₂²) W₂
    // (ii)  |ã₂/ã₁ − a₂/a₁| ≤ (2a₂K₁/a₁²) W₁ + (2K₂/a₁) W₂
    // (iii) |ẽ²/(ã₁ã₂) − e²/(a₁a₂)|
    //         ≤ |ẽ² − e²|/(ã₁ã₂) + e²|a₁a₂ − ã₁ã₂|/(ã₁ã₂a₁a₂)
    //   with |ẽ² − e²| = |ẽ − e|(ẽ + e) ≤ (K₁W₁ + K₂W₂)(3a₁/2 + 3a₂/2 + e)
    //   and  a₁a₂ − ã₁ã₂ = a₁(a₂ − ã₂) + ã₂(a₁ − ã₁), giving
    //         ≤ 4S/(a₁a₂) (K₁W₁ + K₂W₂) + (4e²K₂/(a₁a₂²)) W₂ + (2e²K₁/(a₁²a₂)) W₁
    //   where S = 3a₁/2 + 3a₂/2 + e.
    let s = 1.5 * a1 + 1.5 * a2 + gap;
    let e2sq = gap * gap;
    let c1 = 0.5 * k1 * (2.0 / a2 + 2.0 * a2 / (a1 * a1) + 4.0 * s / (a1 * a2) + 2.0 * e2sq / (a1 * a1 * a2));
    let c2 = 0.5 * k2 * (2.0 * a1 / (a2 * a2) + 2.0 / a1 + 4.0 * s / (a1 * a2) + 4.0 * e2sq / (a1 * a2 * a2));

    let w1 = wasserstein(&d1, &t1, 2.0)?;
    let w2 = wasserstein(&d2, &t2, 2.0)?;
    let lhs = (cosine_of(&f1, &f2)? - cosine_of(&e1, &e2)?).abs();

    let gap1 = p_norm(&subtract(&f1.landscape, &e1.landscape), 2.0)?;
    let gap2 = p_norm(&subtract(&f2.landscape, &e2.landscape), 2.0)?;
    Ok(StabilityReport {
        lhs,
        rhs: c1 * w1 + c2 * w2,
        c1,
        c2,
        eta,
        w2: [w1, w2],
        within_eta: w1 <= eta && w2 <= eta,
        landscape_gap: [gap1 * gap1, gap2 * gap2],
        landscape_bound: [2.0 * reach1 * w1 * w1, 2.0 * reach2 * w2 * w2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{bottleneck, trivial_matching_cost};
    use crate::landscape::sup_norm;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn diag(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs.to_vec()).unwrap()
    }

    fn shifted_copy(n: usize) -> (PersistenceDiagram, PersistenceDiagram) {
        let d1: Vec<_> = (0..n).map(|t| (t as f64, t as f64 + 1.0)).collect();
        let mut d2 = d1.clone();
        d2.push((n as f64, n as f64 + 1.0));
        (diag(&d1), diag(&d2))
    }

    fn separated_intervals(m: usize, n: usize) -> (PersistenceDiagram, PersistenceDiagram) {
        let h = 0.5 / m as f64;
        let make = |start: usize| -> Vec<(f64, f64)> {
            (start..start + n)
                .map(|t| (t as f64 + 0.5 - h, t as f64 + 0.5 + h))
                .collect()
        };
        (diag(&make(0)), diag(&make(2 * n)))
    }

    #[test]
    fn shifted_copy_values() {
        let (a, b) = shifted_copy(3);
        let s = cosine_similarity(&a, &b).unwrap();
        assert!((s - 3.0 / 12f64.sqrt()).abs() < 1e-12);
        assert!((cosine_distance(&a, &b).unwrap() - (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-12);
        assert!((rho_similarity(&a, &b).unwrap() - 6.0 / 7.0).abs() < 1e-12);
        assert!((rho_distance(&a, &b).unwrap() - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn self_similarity() {
        let (a, _) = shifted_copy(4);
        assert_eq!(cosine_similarity(&a, &a).unwrap(), 1.0);
        assert_eq!(cosine_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(rho_similarity(&a, &a).unwrap(), 1.0);
        assert_eq!(rho_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn separated_intervals_is_orthogonal() {
        for m in 1..=3 {
            for n in 1..=3 {
                let (a, b) = separated_intervals(m, n);
                assert_eq!(cosine_similarity(&a, &b).unwrap(), 0.0);
                assert_eq!(cosine_distance(&a, &b).unwrap(), 1.0);
                assert_eq!(rho_similarity(&a, &b).unwrap(), 0.0);
                assert_eq!(rho_distance(&a, &b).unwrap(), 1.0);
                assert!(is_orthogonal(&a, &b, ORTHOGONALITY_TOLERANCE).unwrap());
                assert!(is_orthogonal_by_intervals(&a, &b));
            }
        }
    }

    #[test]
    fn empty_diagram_policy() {
        let e = PersistenceDiagram::empty(1);
        let a = diag(&[(0.0, 1.0)]);
        assert!(cosine_similarity(&a, &e).is_err());
        assert!(cosine_distance(&e, &a).is_err());
        assert_eq!(rho_similarity(&a, &e).unwrap(), 0.0);
        assert_eq!(rho_distance(&e, &a).unwrap(), 1.0);
        assert!(rho_similarity(&e, &e).is_err());
        assert!(is_orthogonal(&a, &e, 1e-12).unwrap());
        assert!(is_orthogonal_by_intervals(&a, &e));
        assert!(is_orthogonal(&a, &a, -1.0).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let (a, b) = (diag(&[(0.0, 2.0)]), diag(&[(1.0, 3.0)]));
        assert!(!is_orthogonal(&a, &b, ORTHOGONALITY_TOLERANCE).unwrap());
        assert!(!is_orthogonal_by_intervals(&a, &b));
        let (a, b) = (diag(&[(0.0, 1.0)]), diag(&[(1.0, 2.0)]));
        assert!(is_orthogonal_by_intervals(&a, &b));
        assert!(is_orthogonal(&a, &b, 0.0).unwrap());
    }

    #[test]
    fn compare_dispatch() {
        let (a, b) = shifted_copy(2);
        let r = compare(SimilarityKind::RhoDistance, &a, &b).unwrap();
        assert_eq!(r.kind, SimilarityKind::RhoDistance);
        assert!((r.value - rho_distance(&a, &b).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn unperturbed_stability_is_tight() {
        let (a, b) = shifted_copy(3);
        let r = check_stability_bound(&a, &b, &a, &b).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.within_eta && r.bound_holds() && r.landscape_bound_holds());
        assert!(check_stability_bound(&a, &PersistenceDiagram::empty(1), &a, &b).is_err());
    }

    #[test]
    fn shifted_birth_respects_landscape_bound() {
        let a = diag(&[(0.0, 1.5), (0.4, 2.0), (1.0, 1.3)]);
        let shifted = diag(&[(0.01, 1.5), (0.4, 2.0), (1.0, 1.3)]);
        let r = check_stability_bound(&a, &a, &shifted, &a).unwrap();
        // W₂ is at most the cost of moving the one point
        assert!(r.w2[0] <= 0.01 + 1e-15);
        assert!(r.landscape_bound_holds());
        assert!(r.bound_holds());
    }

    fn lattice_diagram(max: usize) -> impl Strategy<Value = PersistenceDiagram> {
        prop::collection::vec((0u32..40, 1u32..12), 1..=max).prop_map(|v| {
            diag(
                &v.into_iter()
                    .map(|(b, l)| (b as f64 / 4.0, (b + l) as f64 / 4.0))
                    .collect::<Vec<_>>(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ranges_and_symmetry(a in lattice_diagram(6), b in lattice_diagram(6)) {
            let s = cosine_similarity(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!((s - cosine_similarity(&b, &a).unwrap()).abs() < 1e-15);
            let r = rho_similarity(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
            prop_assert!((r - rho_similarity(&b, &a).unwrap()).abs() < 1e-15);
            prop_assert!(r <= s + 1e-15);
            let rd = rho_distance(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&rd));
        }

        #[test]
        fn self_similarity_is_exact(a in lattice_diagram(12), scale in 1e-3f64..1e3) {
            let scaled: Vec<_> = a.pairs().iter().map(|&(b, d)| (b * scale, d * scale)).collect();
            let a = diag(&scaled);
            prop_assert_eq!(cosine_similarity(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(rho_similarity(&a, &a).unwrap(), 1.0);
            prop_assert_eq!(cosine_distance(&a, &a).unwrap(), 0.0);
        }

        #[test]
        fn orthogonality_characterizations_agree(a in lattice_diagram(5), b in lattice_diagram(5)) {
            let by_ip = is_orthogonal(&a, &b, ORTHOGONALITY_TOLERANCE).unwrap();
            prop_assert_eq!(by_ip, is_orthogonal_by_intervals(&a, &b));
            if by_ip {
                let (la, lb) = (build_landscape(&a), build_landscape(&b));
                let diff = subtract(&la, &lb);
                prop_assert!((sup_norm(&diff) - sup_norm(la.layers()).max(sup_norm(lb.layers()))).abs() < 1e-10);
                let trivial = trivial_matching_cost(&a, &b, f64::INFINITY).unwrap();
                prop_assert!((bottleneck(&a, &b).unwrap() - trivial).abs() < 1e-10);
                let trivial2 = trivial_matching_cost(&a, &b, 2.0).unwrap();
                prop_assert!((wasserstein(&a, &b, 2.0).unwrap() - trivial2).abs() < 1e-10);
            }
        }
    }
}
