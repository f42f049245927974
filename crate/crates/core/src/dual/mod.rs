//! Points of the unitary dual `Ĝ₀ ≃ Γ₀ ⊔ Γ₁ ⊔ Γ₂` and Fell-topology
//! convergence of sequences.
//!
//! A point of `Γ₀` or `Γ₁` is a pair `(ρ, H)` with `ρ` an irrep of the
//! stabilizer `K_H`; `Γ₂` points are K-types `τ_λ` (the `H = 0` stratum).
//! Convergence is decided with the neighborhood basis
//! `{(ρ', H') : |H − H'| < ε, [ρ|_{K_{H'}} : ρ'] > 0}` on dominant data.

mod convergence;

use serde::{Deserialize, Serialize};

use crate::group::{restriction_multiplicity, IrrepLabel};
use crate::pair::{ChamberStratum, InstanceName, StabilizerDescriptor, SymmetricPairDescriptor, WeylElement};
use crate::{Error, Result};

pub use convergence::{converges, ConvergenceCertificate, ConvergenceOptions, EvidenceRecord, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stratum {
    /// `Γ₀`: regular `H`, stabilizer `M`.
    Generic,
    /// `Γ₁`: `H ≠ 0` on a wall of the chamber.
    Wall,
    /// `Γ₂ = K̂`.
    KType,
}

/// Unvalidated dual-point data as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawDualPoint {
    pub h: Vec<f64>,
    pub label: IrrepLabel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub instance: InstanceName,
    pub stratum: Stratum,
    /// `a`-coordinates of `H`; dominant unless produced by a Weyl action.
    pub h: Vec<f64>,
    /// Irrep of `K_H` (or of `K` for `Γ₂`).
    pub label: IrrepLabel,
}

impl DualPoint {
    pub fn is_induced(&self) -> bool {
        self.stratum != Stratum::KType
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Validates raw data and replaces `H` by its dominant representative; the
/// stratum is derived from `H`, the label is read as an irrep of the
/// stabilizer of the dominant `H`.
pub fn make_dual_point(pair: &SymmetricPairDescriptor, raw: &RawDualPoint) -> Result<DualPoint> {
    if raw.h.len() != pair.rank {
        return Err(Error::InvalidInput(format!("H has {} coordinates, rank is {}", raw.h.len(), pair.rank)));
    }
    if raw.h.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite H coordinate".into()));
    }
    let cp = pair.classify_chamber_point(&raw.h);
    let stab = StabilizerDescriptor::for_walls(pair, &cp.walls(pair.rank));
    stab.check_label(pair, &raw.label)?;
    let (stratum, h) = match cp.stratum {
        ChamberStratum::Regular => (Stratum::Generic, cp.coords),
        ChamberStratum::Wall(_) => (Stratum::Wall, cp.coords),
        ChamberStratum::Zero => (Stratum::KType, vec![0.0; pair.rank]),
    };
    Ok(DualPoint { instance: pair.name, stratum, h, label: raw.label.clone() })
}

/// Stabilizer of the point's `H` (all of `K` on `Γ₂`).
pub fn stabilizer_of(pair: &SymmetricPairDescriptor, p: &DualPoint) -> StabilizerDescriptor {
    match p.stratum {
        Stratum::KType => StabilizerDescriptor::for_walls(pair, &(0..pair.rank).collect::<Vec<_>>()),
        _ => pair.stabilizer(&p.h),
    }
}

/// Dominant `H` and the label transported to the stabilizer of that `H`.
pub fn canonical(pair: &SymmetricPairDescriptor, p: &DualPoint) -> (Vec<f64>, IrrepLabel) {
    if p.stratum == Stratum::KType {
        return (vec![0.0; pair.rank], p.label.clone());
    }
    let (h, w) = pair.dominant_representative(&p.h);
    let label = stabilizer_of(pair, p).conjugate_label(pair, &w, &p.label);
    (h, label)
}

/// Whether two dual points name the same equivalence class.
pub fn equivalent(pair: &SymmetricPairDescriptor, p1: &DualPoint, p2: &DualPoint) -> bool {
    if p1.instance != p2.instance || p1.stratum != p2.stratum {
        return false;
    }
    let (h1, l1) = canonical(pair, p1);
    let (h2, l2) = canonical(pair, p2);
    distance(&h1, &h2) <= 1e-12 && l1 == l2
}

/// `w·(ρ, H) = (w·ρ, w·H)`.
pub fn weyl_action_on_pairs(pair: &SymmetricPairDescriptor, w: &WeylElement, p: &DualPoint) -> DualPoint {
    if p.stratum == Stratum::KType {
        return p.clone();
    }
    let label = stabilizer_of(pair, p).conjugate_label(pair, w, &p.label);
    DualPoint { instance: p.instance, stratum: p.stratum, h: w.apply(&p.h), label }
}

/// `[ρ_base|_{K_{H_cand}} : ρ_cand]`, or `None` when `K_{H_cand} ⊄ K_{H_base}`.
pub(crate) fn restricted_multiplicity(
    pair: &SymmetricPairDescriptor,
    base: &DualPoint,
    cand: &DualPoint,
) -> Result<Option<u32>> {
    let (_, lb) = canonical(pair, base);
    let (_, lc) = canonical(pair, cand);
    let sb = stabilizer_of(pair, base);
    let sc = stabilizer_of(pair, cand);
    if !sb.contains(&sc) {
        return Ok(None);
    }
    restriction_multiplicity(&pair.k, &sb.embedding, &lb, &sc.embedding, &lc).map(Some)
}

/// Membership of `candidate` in the basic neighborhood of `base` of radius `ε`.
pub fn in_neighborhood(
    pair: &SymmetricPairDescriptor,
    base: &DualPoint,
    epsilon: f64,
    candidate: &DualPoint,
) -> Result<bool> {
    let (hb, _) = canonical(pair, base);
    let (hc, _) = canonical(pair, candidate);
    let wall_distance = pair.distance_to_other_walls(&hb);
    if epsilon > wall_distance {
        return Err(Error::EpsilonTooLarge { epsilon, wall_distance });
    }
    if distance(&hb, &hc) >= epsilon {
        return Ok(false);
    }
    Ok(restricted_multiplicity(pair, base, candidate)?.is_some_and(|m| m > 0))
}
