//! Riemannian-pair data for the shipped Cartan motion groups.
//!
//! `M2 = SO(2) ⋉ ℝ²`, `M3 = SO(3) ⋉ ℝ³` and the product `M2xM2`. Each
//! descriptor carries `K`, `p`, an orthonormal basis of the maximal abelian
//! `a ⊂ p`, the positive restricted roots as functionals on `a`-coordinates,
//! and the Weyl group as sign flips of those coordinates.

mod section;
mod stabilizer;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::group::{CompactGroup, GroupElement};
use crate::{Error, Result};

pub use section::{adjoint_orbit_section, OrbitSection};
pub use stabilizer::{StabilizerDescriptor, StabilizerStructure};

/// Default absolute tolerance on `α(H)` for wall detection.
pub const WALL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InstanceName {
    M2,
    M3,
    M2xM2,
}

impl FromStr for InstanceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M2" => Ok(InstanceName::M2),
            "M3" => Ok(InstanceName::M3),
            "M2xM2" => Ok(InstanceName::M2xM2),
            other => Err(Error::UnknownInstance(other.to_string())),
        }
    }
}

impl fmt::Display for InstanceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceName::M2 => "M2",
            InstanceName::M3 => "M3",
            InstanceName::M2xM2 => "M2xM2",
        };
        f.write_str(s)
    }
}

/// An element of the Weyl group, acting on `a`-coordinates by sign flips.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement { signs: vec![1; rank] }
    }

    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        h.iter().zip(&self.signs).map(|(x, s)| x * f64::from(*s)).collect()
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement { signs: self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect() }
    }

    pub fn inverse(&self) -> WeylElement {
        self.clone()
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }
}

/// Where `H` sits relative to the closed positive chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChamberStratum {
    Regular,
    /// Indices into `positive_roots` of the roots vanishing at `H`.
    Wall(Vec<usize>),
    Zero,
}

/// A dominant element of `a` together with its stratum.
///
/// The linear form is `φ_H(X) = ⟨H, X⟩`; the character `e^{iφ_H}` is not
/// stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberPoint {
    pub coords: Vec<f64>,
    pub stratum: ChamberStratum,
}

impl ChamberPoint {
    /// Indices of the positive roots vanishing at the point.
    pub fn walls(&self, rank: usize) -> Vec<usize> {
        match &self.stratum {
            ChamberStratum::Regular => vec![],
            ChamberStratum::Wall(w) => w.clone(),
            ChamberStratum::Zero => (0..rank).collect(),
        }
    }
}

/// Concrete `(K, p, a, Σ⁺, W)` package.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricPairDescriptor {
    pub name: InstanceName,
    pub k: CompactGroup,
    pub dim_p: usize,
    pub rank: usize,
    /// Orthonormal basis of `a` inside `p`.
    pub a_basis: Vec<Vec<f64>>,
    /// `α(H) = Σ_i c_i H_i` in `a`-coordinates.
    pub positive_roots: Vec<Vec<f64>>,
    pub weyl_group: Vec<WeylElement>,
    pub wall_tolerance: f64,
}

/// Builds one of the shipped instances by name.
pub fn build_instance(name: &str) -> Result<SymmetricPairDescriptor> {
    Ok(SymmetricPairDescriptor::new(name.parse()?))
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn sign_group(rank: usize) -> Vec<WeylElement> {
    (0..1usize << rank)
        .map(|bits| WeylElement { signs: (0..rank).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect() })
        .collect()
}

impl SymmetricPairDescriptor {
    pub fn new(name: InstanceName) -> Self {
        let (k, dim_p, a_basis) = match name {
            InstanceName::M2 => (CompactGroup::Circle, 2, vec![unit(2, 0)]),
            InstanceName::M3 => (CompactGroup::So3, 3, vec![unit(3, 2)]),
            InstanceName::M2xM2 => (
                CompactGroup::Product(vec![CompactGroup::Circle, CompactGroup::Circle]),
                4,
                vec![unit(4, 0), unit(4, 2)],
            ),
        };
        let rank = a_basis.len();
        SymmetricPairDescriptor {
            name,
            k,
            dim_p,
            rank,
            a_basis,
            positive_roots: (0..rank).map(|i| unit(rank, i)).collect(),
            weyl_group: sign_group(rank),
            wall_tolerance: WALL_TOLERANCE,
        }
    }

    pub fn with_wall_tolerance(mut self, tol: f64) -> Self {
        self.wall_tolerance = tol;
        self
    }

    /// The `Ad(K)`-invariant inner product on `p` (Euclidean in the stored
    /// coordinates).
    pub fn inner_product(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner_product(x, x).sqrt()
    }

    pub fn root_value(&self, root: usize, h: &[f64]) -> f64 {
        self.positive_roots[root].iter().zip(h).map(|(c, x)| c * x).sum()
    }

    /// `a`-coordinates → vector in `p`.
    pub fn embed_a(&self, h: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_p];
        for (c, b) in h.iter().zip(&self.a_basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Orthogonal projection of a vector of `p` onto `a`, in `a`-coordinates.
    pub fn project_a(&self, x: &[f64]) -> Vec<f64> {
        self.a_basis.iter().map(|b| self.inner_product(b, x)).collect()
    }

    /// `Ad(k)X`.
    pub fn adjoint_action(&self, k: &GroupElement, x: &[f64]) -> Vec<f64> {
        fn rot2(t: f64, x: f64, y: f64) -> [f64; 2] {
            let (s, c) = t.sin_cos();
            [c * x - s * y, s * x + c * y]
        }
        match (self.name, k) {
            (InstanceName::M2, GroupElement::Angle(t)) => rot2(*t, x[0], x[1]).to_vec(),
            (InstanceName::M3, GroupElement::Rotation(q)) => {
                let v = q * Vector3::new(x[0], x[1], x[2]);
                vec![v.x, v.y, v.z]
            }
            (InstanceName::M2xM2, GroupElement::Tuple(ts)) => {
                let a = rot2(ts[0].angle().expect("angle"), x[0], x[1]);
                let b = rot2(ts[1].angle().expect("angle"), x[2], x[3]);
                vec![a[0], a[1], b[0], b[1]]
            }
            _ => panic!("element does not belong to K of {}", self.name),
        }
    }

    /// A representative `n_w ∈ N_K(a)` of `w`.
    pub fn weyl_representative(&self, w: &WeylElement) -> GroupElement {
        let ang = |s: i8| if s < 0 { PI } else { 0.0 };
        match self.name {
            InstanceName::M2 => GroupElement::Angle(ang(w.signs[0])),
            InstanceName::M3 => GroupElement::Rotation(UnitQuaternion::from_axis_angle(&Vector3::x_axis(), ang(w.signs[0]))),
            InstanceName::M2xM2 => GroupElement::Tuple(w.signs.iter().map(|&s| GroupElement::Angle(ang(s))).collect()),
        }
    }

    /// `(H_dom, w)` with `H_dom = w·H` in the closed positive chamber.
    pub fn dominant_representative(&self, h: &[f64]) -> (Vec<f64>, WeylElement) {
        let w = WeylElement { signs: h.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect() };
        (w.apply(h), w)
    }

    /// Classifies the dominant representative of `H`.
    pub fn classify_chamber_point(&self, h: &[f64]) -> ChamberPoint {
        let (coords, _) = self.dominant_representative(h);
        let walls: Vec<usize> = (0..self.positive_roots.len())
            .filter(|&i| self.root_value(i, &coords).abs() <= self.wall_tolerance)
            .collect();
        let stratum = if walls.len() == self.positive_roots.len() && self.norm(&coords) <= self.wall_tolerance {
            ChamberStratum::Zero
        } else if walls.is_empty() {
            ChamberStratum::Regular
        } else {
            ChamberStratum::Wall(walls)
        };
        ChamberPoint { coords, stratum }
    }

    /// The Weyl orbit of `H`, deduplicated at `1e-12`.
    pub fn weyl_orbit(&self, h: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for w in &self.weyl_group {
            let p = w.apply(h);
            if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-12)) {
                out.push(p);
            }
        }
        out
    }

    /// Whether `H` lies in the closed positive chamber.
    pub fn is_dominant(&self, h: &[f64]) -> bool {
        (0..self.positive_roots.len()).all(|i| self.root_value(i, h) >= 0.0)
    }

    /// Distance from `H` to the nearest root hyperplane not containing it.
    pub fn distance_to_other_walls(&self, h: &[f64]) -> f64 {
        (0..self.positive_roots.len())
            .map(|i| {
                let v = self.root_value(i, h).abs();
                let n = self.norm(&self.positive_roots[i]);
                (v, v / n)
            })
            .filter(|(v, _)| *v > self.wall_tolerance)
            .map(|(_, d)| d)
            .fold(f64::INFINITY, f64::min)
    }

    /// Stabilizer `K_H = Z_K(H)` of a dominant `H`.
    pub fn stabilizer(&self, h: &[f64]) -> StabilizerDescriptor {
        let cp = self.classify_chamber_point(h);
        StabilizerDescriptor::for_walls(self, &cp.walls(self.rank))
    }

    /// `M = Z_K(a)`.
    pub fn centralizer_of_a(&self) -> StabilizerDescriptor {
        StabilizerDescriptor::for_walls(self, &[])
    }
}
