use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SymmetricPairDescriptor, WeylElement};
use crate::group::{CompactGroup, Embedding, GroupElement, IrrepLabel};
use crate::{Error, Result};

/// Isomorphism type of a stabilizer `K_H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerStructure {
    Trivial,
    Torus(u32),
    So3,
    ProductOfFactors(Vec<StabilizerStructure>),
}

impl fmt::Display for StabilizerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerStructure::Trivial => write!(f, "Trivial"),
            StabilizerStructure::Torus(d) => write!(f, "Torus({d})"),
            StabilizerStructure::So3 => write!(f, "SO3"),
            StabilizerStructure::ProductOfFactors(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" × "))
            }
        }
    }
}

/// The connected group `K_H` together with its embedding in `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilizerDescriptor {
    pub structure: StabilizerStructure,
    pub embedding: Embedding,
    /// Positive roots vanishing at `H`; the stabilizer depends only on this set.
    pub walls: Vec<usize>,
}

impl StabilizerDescriptor {
    pub(crate) fn for_walls(pair: &SymmetricPairDescriptor, walls: &[usize]) -> Self {
        use super::InstanceName::*;
        let all = walls.len() == pair.rank;
        let (structure, embedding) = match pair.name {
            M2 if all => (StabilizerStructure::Torus(1), Embedding::Whole),
            M2 => (StabilizerStructure::Trivial, Embedding::Point),
            M3 if all => (StabilizerStructure::So3, Embedding::Whole),
            M3 => (StabilizerStructure::Torus(1), Embedding::AxisCircle),
            M2xM2 => {
                let (s, e): (Vec<_>, Vec<_>) = (0..2)
                    .map(|i| {
                        if walls.contains(&i) {
                            (StabilizerStructure::Torus(1), Embedding::Whole)
                        } else {
                            (StabilizerStructure::Trivial, Embedding::Point)
                        }
                    })
                    .unzip();
                (StabilizerStructure::ProductOfFactors(s), Embedding::Factors(e))
            }
        };
        StabilizerDescriptor { structure, embedding, walls: walls.to_vec() }
    }

    /// The stabilizer as an abstract group.
    pub fn group(&self, pair: &SymmetricPairDescriptor) -> CompactGroup {
        self.embedding.subgroup(&pair.k)
    }

    pub fn embed(&self, pair: &SymmetricPairDescriptor, s: &GroupElement) -> GroupElement {
        self.embedding.embed(&pair.k, s)
    }

    /// `K_{self} ⊇ K_{other}` as subgroups of `K`.
    pub fn contains(&self, other: &StabilizerDescriptor) -> bool {
        self.embedding.contains(&other.embedding)
    }

    pub fn check_label(&self, pair: &SymmetricPairDescriptor, label: &IrrepLabel) -> Result<()> {
        let g = self.group(pair);
        if g.admits(label) {
            Ok(())
        } else {
            Err(Error::StratumMismatch { label: label.to_string(), stabilizer: self.structure.to_string() })
        }
    }

    /// `w·ρ`: the irrep `s ↦ ρ(n_w⁻¹ s n_w)` of the conjugate stabilizer.
    pub fn conjugate_label(&self, pair: &SymmetricPairDescriptor, w: &WeylElement, label: &IrrepLabel) -> IrrepLabel {
        if w.is_identity() {
            return label.clone();
        }
        let host = &pair.k;
        let g = self.group(pair);
        let n = pair.weyl_representative(w);
        let n_inv = host.inverse(&n);
        let pull_back = |s: &GroupElement| {
            let k = host.multiply(&host.multiply(&n_inv, &self.embed(pair, s)), &n);
            self.embedding.local(host, &k)
        };
        let probes: Vec<GroupElement> = [0.37, -1.21, 2.03]
            .iter()
            .map(|&t| {
                let v: Vec<f64> = (0..g.tangent_dim()).map(|i| t * (1.0 + 0.31 * i as f64)).collect();
                g.exp(&v)
            })
            .collect();
        let target: Vec<_> = probes.iter().map(|s| g.character(label, &pull_back(s))).collect();
        g.irreps(label.weight())
            .into_iter()
            .find(|cand| {
                g.dim(cand) == g.dim(label)
                    && probes.iter().zip(&target).all(|(s, t)| (g.character(cand, s) - t).norm() < 1e-9)
            })
            .expect("conjugate of an irrep is an irrep of the same weight")
    }
}
