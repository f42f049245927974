use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CompactGroup, GroupElement};
use nalgebra::{UnitQuaternion, Vector3};

/// How a closed subgroup sits inside a host group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    /// The subgroup is the whole host.
    Whole,
    /// The trivial subgroup.
    Point,
    /// Rotations about the `e₃` axis inside SO(3).
    AxisCircle,
    /// Factorwise embedding into a product host.
    Factors(Vec<Embedding>),
}

impl Embedding {
    /// The subgroup as an abstract group.
    pub fn subgroup(&self, host: &CompactGroup) -> CompactGroup {
        match (self, host) {
            (Embedding::Whole, h) => h.clone(),
            (Embedding::Point, _) => CompactGroup::Trivial,
            (Embedding::AxisCircle, CompactGroup::So3) => CompactGroup::Circle,
            (Embedding::Factors(es), CompactGroup::Product(hs)) => {
                CompactGroup::Product(es.iter().zip(hs).map(|(e, h)| e.subgroup(h)).collect())
            }
            _ => panic!("embedding {self:?} incompatible with host {host}"),
        }
    }

    /// Image of a subgroup element in the host.
    pub fn embed(&self, host: &CompactGroup, s: &GroupElement) -> GroupElement {
        match (self, host, s) {
            (Embedding::Whole, _, s) => s.clone(),
            (Embedding::Point, h, _) => h.identity(),
            (Embedding::AxisCircle, CompactGroup::So3, GroupElement::Angle(t)) => {
                GroupElement::Rotation(UnitQuaternion::from_axis_angle(&Vector3::z_axis(), *t))
            }
            (Embedding::Factors(es), CompactGroup::Product(hs), GroupElement::Tuple(xs)) => {
                GroupElement::Tuple(es.iter().zip(hs).zip(xs).map(|((e, h), x)| e.embed(h, x)).collect())
            }
            _ => panic!("embedding {self:?} incompatible with host {host}"),
        }
    }

    /// Subgroup coordinates of a host element lying in the image.
    pub fn local(&self, host: &CompactGroup, k: &GroupElement) -> GroupElement {
        match (self, host, k) {
            (Embedding::Whole, _, k) => k.clone(),
            (Embedding::Point, _, _) => GroupElement::Identity,
            (Embedding::AxisCircle, CompactGroup::So3, GroupElement::Rotation(q)) => {
                GroupElement::Angle(2.0 * q.k.atan2(q.w))
            }
            (Embedding::Factors(es), CompactGroup::Product(hs), GroupElement::Tuple(xs)) => {
                GroupElement::Tuple(es.iter().zip(hs).zip(xs).map(|((e, h), x)| e.local(h, x)).collect())
            }
            _ => panic!("embedding {self:?} incompatible with host {host}"),
        }
    }

    /// `image(other) ⊆ image(self)`.
    pub fn contains(&self, other: &Embedding) -> bool {
        match (self, other) {
            (Embedding::Whole, _) | (_, Embedding::Point) => true,
            (Embedding::AxisCircle, Embedding::AxisCircle) => true,
            (Embedding::Factors(a), Embedding::Factors(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.contains(y))
            }
            (Embedding::Factors(a), Embedding::Whole) => a.iter().all(|x| matches!(x, Embedding::Whole)),
            _ => false,
        }
    }
}

/// `∫_G a(s)·conj(b(s)) ds` for two class functions under a Haar rule.
pub(crate) fn character_pairing(
    group: &CompactGroup,
    order: usize,
    a: impl Fn(&GroupElement) -> Complex64,
    b: impl Fn(&GroupElement) -> Complex64,
) -> Complex64 {
    group.haar_quadrature(order).iter().map(|(s, w)| a(s) * b(s).conj() * w).sum()
}
