//! Compact groups, their irreducible representations and Haar quadrature.
//!
//! Every group the crate needs (the `K` of each instance and every stabilizer
//! `K_H`) is a product of circles, copies of SO(3) and the trivial group, so a
//! small closed enum covers them all.

mod branching;
mod embedding;
mod peter_weyl;
mod quadrature;
pub mod wigner;

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{UnitQuaternion, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CMatrix;

pub use branching::{
    branching_multiplicity, conjugated_multiplicity, multiplicity_from_integral, restriction_multiplicity,
};
pub use embedding::Embedding;
pub use peter_weyl::{peter_weyl_basis, BasisBlock, PeterWeylBasis};
pub use quadrature::{gauss_legendre, QuadratureRule};

/// A compact connected Lie group from the closed family used by the instances.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactGroup {
    Trivial,
    /// SO(2) ≅ U(1), elements are angles.
    Circle,
    So3,
    Product(Vec<CompactGroup>),
}

/// An element of a [`CompactGroup`].
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Identity,
    Angle(f64),
    Rotation(UnitQuaternion<f64>),
    Tuple(Vec<GroupElement>),
}

/// Label of an irreducible unitary representation.
///
/// Circles carry an integer charge `m` (`e^{imθ}`), SO(3) a spin `ℓ ≥ 0`,
/// products a tuple of factor labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrrepLabel {
    Trivial,
    Charge(i64),
    Spin(u32),
    Tuple(Vec<IrrepLabel>),
}

impl IrrepLabel {
    /// Size of the label: `|m|`, `ℓ`, or the max over factors.
    pub fn weight(&self) -> u32 {
        match self {
            IrrepLabel::Trivial => 0,
            IrrepLabel::Charge(m) => m.unsigned_abs() as u32,
            IrrepLabel::Spin(l) => *l,
            IrrepLabel::Tuple(v) => v.iter().map(IrrepLabel::weight).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Trivial => write!(f, "1"),
            IrrepLabel::Charge(m) => write!(f, "m={m}"),
            IrrepLabel::Spin(l) => write!(f, "l={l}"),
            IrrepLabel::Tuple(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for CompactGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactGroup::Trivial => write!(f, "{{e}}"),
            CompactGroup::Circle => write!(f, "SO(2)"),
            CompactGroup::So3 => write!(f, "SO(3)"),
            CompactGroup::Product(v) => {
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "×")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl CompactGroup {
    pub fn identity(&self) -> GroupElement {
        match self {
            CompactGroup::Trivial => GroupElement::Identity,
            CompactGroup::Circle => GroupElement::Angle(0.0),
            CompactGroup::So3 => GroupElement::Rotation(UnitQuaternion::identity()),
            CompactGroup::Product(v) => GroupElement::Tuple(v.iter().map(|g| g.identity()).collect()),
        }
    }

    /// Dimension of the group manifold.
    pub fn tangent_dim(&self) -> usize {
        match self {
            CompactGroup::Trivial => 0,
            CompactGroup::Circle => 1,
            CompactGroup::So3 => 3,
            CompactGroup::Product(v) => v.iter().map(CompactGroup::tangent_dim).sum(),
        }
    }

    /// Exponential of a tangent vector at the identity.
    pub fn exp(&self, v: &[f64]) -> GroupElement {
        match self {
            CompactGroup::Trivial => GroupElement::Identity,
            CompactGroup::Circle => GroupElement::Angle(wrap_angle(v[0])),
            CompactGroup::So3 => {
                GroupElement::Rotation(UnitQuaternion::from_scaled_axis(Vector3::new(v[0], v[1], v[2])))
            }
            CompactGroup::Product(gs) => {
                let mut off = 0;
                let mut out = Vec::with_capacity(gs.len());
                for g in gs {
                    let n = g.tangent_dim();
                    out.push(g.exp(&v[off..off + n]));
                    off += n;
                }
                GroupElement::Tuple(out)
            }
        }
    }

    /// All irreps with `weight ≤ cutoff`, sorted.
    pub fn irreps(&self, cutoff: u32) -> Vec<IrrepLabel> {
        let mut out = match self {
            CompactGroup::Trivial => vec![IrrepLabel::Trivial],
            CompactGroup::Circle => (-(cutoff as i64)..=cutoff as i64).map(IrrepLabel::Charge).collect(),
            CompactGroup::So3 => (0..=cutoff).map(IrrepLabel::Spin).collect(),
            CompactGroup::Product(gs) => {
                let mut acc: Vec<Vec<IrrepLabel>> = vec![vec![]];
                for g in gs {
                    let factor = g.irreps(cutoff);
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            factor.iter().map(move |l| {
                                let mut p = prefix.clone();
                                p.push(l.clone());
                                p
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(IrrepLabel::Tuple).collect()
            }
        };
        out.sort();
        out
    }

    /// Whether `label` names an irrep of this group.
    pub fn admits(&self, label: &IrrepLabel) -> bool {
        match (self, label) {
            (CompactGroup::Trivial, IrrepLabel::Trivial) => true,
            (CompactGroup::Circle, IrrepLabel::Charge(_)) => true,
            (CompactGroup::So3, IrrepLabel::Spin(_)) => true,
            (CompactGroup::Product(gs), IrrepLabel::Tuple(ls)) => {
                gs.len() == ls.len() && gs.iter().zip(ls).all(|(g, l)| g.admits(l))
            }
            _ => false,
        }
    }

    pub fn dim(&self, label: &IrrepLabel) -> usize {
        match label {
            IrrepLabel::Trivial | IrrepLabel::Charge(_) => 1,
            IrrepLabel::Spin(l) => 2 * *l as usize + 1,
            IrrepLabel::Tuple(ls) => match self {
                CompactGroup::Product(gs) => gs.iter().zip(ls).map(|(g, l)| g.dim(l)).product(),
                _ => ls.iter().map(|l| CompactGroup::Trivial.dim(l)).product(),
            },
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (CompactGroup::Trivial, _, _) => GroupElement::Identity,
            (CompactGroup::Circle, GroupElement::Angle(x), GroupElement::Angle(y)) => {
                GroupElement::Angle(wrap_angle(x + y))
            }
            (CompactGroup::So3, GroupElement::Rotation(p), GroupElement::Rotation(q)) => {
                GroupElement::Rotation(p * q)
            }
            (CompactGroup::Product(gs), GroupElement::Tuple(xs), GroupElement::Tuple(ys)) => {
                GroupElement::Tuple(gs.iter().zip(xs.iter().zip(ys)).map(|(g, (x, y))| g.multiply(x, y)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (CompactGroup::Trivial, _) => GroupElement::Identity,
            (CompactGroup::Circle, GroupElement::Angle(x)) => GroupElement::Angle(wrap_angle(-x)),
            (CompactGroup::So3, GroupElement::Rotation(q)) => GroupElement::Rotation(q.inverse()),
            (CompactGroup::Product(gs), GroupElement::Tuple(xs)) => {
                GroupElement::Tuple(gs.iter().zip(xs).map(|(g, x)| g.inverse(x)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Unitary matrix of the irrep `label` at `k`.
    pub fn irrep_matrix(&self, label: &IrrepLabel, k: &GroupElement) -> CMatrix {
        match (self, label, k) {
            (CompactGroup::Trivial, _, _) | (_, IrrepLabel::Trivial, _) => CMatrix::identity(1, 1),
            (CompactGroup::Circle, IrrepLabel::Charge(m), GroupElement::Angle(t)) => {
                CMatrix::from_element(1, 1, Complex64::from_polar(1.0, *m as f64 * t))
            }
            (CompactGroup::So3, IrrepLabel::Spin(l), GroupElement::Rotation(q)) => wigner::big_d(*l, q),
            (CompactGroup::Product(gs), IrrepLabel::Tuple(ls), GroupElement::Tuple(xs)) => {
                let mut acc = CMatrix::identity(1, 1);
                for ((g, l), x) in gs.iter().zip(ls).zip(xs) {
                    acc = acc.kronecker(&g.irrep_matrix(l, x));
                }
                acc
            }
            _ => panic!("label {label} or element incompatible with {self}"),
        }
    }

    /// Matrices of every label in `labels` at `k`, sharing the Wigner
    /// recurrence across spins.
    pub fn irrep_matrices(&self, labels: &[IrrepLabel], k: &GroupElement) -> Vec<CMatrix> {
        if let (CompactGroup::So3, GroupElement::Rotation(q)) = (self, k) {
            let lmax = labels.iter().map(IrrepLabel::weight).max().unwrap_or(0);
            let all = wigner::big_d_all(lmax, q);
            return labels.iter().map(|l| all[l.weight() as usize].clone()).collect();
        }
        labels.iter().map(|l| self.irrep_matrix(l, k)).collect()
    }

    pub fn character(&self, label: &IrrepLabel, k: &GroupElement) -> Complex64 {
        match (self, label, k) {
            (CompactGroup::Product(gs), IrrepLabel::Tuple(ls), GroupElement::Tuple(xs)) => gs
                .iter()
                .zip(ls)
                .zip(xs)
                .map(|((g, l), x)| g.character(l, x))
                .product(),
            _ => self.irrep_matrix(label, k).trace(),
        }
    }

    /// Product Haar rule exact for matrix coefficients of weight `< order`.
    pub fn haar_quadrature(&self, order: usize) -> QuadratureRule {
        QuadratureRule::haar(self, order)
    }
}

impl GroupElement {
    /// Rotation matrix of an SO(3) element, or `None` otherwise.
    pub fn rotation(&self) -> Option<&UnitQuaternion<f64>> {
        match self {
            GroupElement::Rotation(q) => Some(q),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GroupElement::Angle(t) => Some(*t),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::wigner::rotation_from_zyz;
    use super::*;

    fn rot(a: f64, b: f64, g: f64) -> GroupElement {
        GroupElement::Rotation(rotation_from_zyz(a, b, g))
    }

    #[test]
    fn enumerate_small_cases() {
        let c = CompactGroup::Circle.irreps(2);
        assert_eq!(c, (-2..=2).map(IrrepLabel::Charge).collect::<Vec<_>>());
        let s = CompactGroup::So3.irreps(2);
        let dims: Vec<usize> = s.iter().map(|l| CompactGroup::So3.dim(l)).collect();
        assert_eq!(dims, vec![1, 3, 5]);
        let p = CompactGroup::Product(vec![CompactGroup::Circle, CompactGroup::Circle]).irreps(1);
        assert_eq!(p.len(), 9);
    }

    #[test]
    fn circle_matrix_and_character() {
        let m = CompactGroup::Circle.irrep_matrix(&IrrepLabel::Charge(3), &GroupElement::Angle(0.4));
        assert!((m[(0, 0)] - Complex64::from_polar(1.0, 1.2)).norm() < 1e-15);
    }

    #[test]
    fn spin_one_identity_and_trace() {
        let g = CompactGroup::So3;
        let id = g.irrep_matrix(&IrrepLabel::Spin(1), &g.identity());
        assert!((id - CMatrix::identity(3, 3)).camax() < 1e-15);
        for &theta in &[0.2, 1.0, 2.5, 3.1] {
            // rotation by theta about the x axis
            let k = GroupElement::Rotation(UnitQuaternion::from_axis_angle(&Vector3::x_axis(), theta));
            let tr = g.character(&IrrepLabel::Spin(1), &k);
            assert!((tr.re - (1.0 + 2.0 * f64::cos(theta))).abs() < 1e-12);
            assert!(tr.im.abs() < 1e-12);
        }
    }

    #[test]
    fn spin_character_matches_weight_sum() {
        let g = CompactGroup::So3;
        for l in 0..8u32 {
            for &theta in &[0.3, 1.7, 2.9] {
                let k = GroupElement::Rotation(UnitQuaternion::from_axis_angle(
                    &nalgebra::Unit::new_normalize(Vector3::new(1.0, -2.0, 0.5)),
                    theta,
                ));
                // oracle: Σ_{m=-ℓ..ℓ} e^{imθ}
                let oracle: f64 = (-(l as i64)..=l as i64).map(|m| (m as f64 * theta).cos()).sum();
                let closed = ((l as f64 + 0.5) * theta).sin() / (theta / 2.0).sin();
                assert!((oracle - closed).abs() < 1e-10);
                assert!((g.character(&IrrepLabel::Spin(l), &k).re - oracle).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wigner_is_unitary_and_multiplicative() {
        let g = CompactGroup::So3;
        let a = rot(0.4, 1.3, -2.0);
        let b = rot(-1.1, 2.7, 0.3);
        let ab = g.multiply(&a, &b);
        for l in [0u32, 1, 2, 5, 12, 25, 40] {
            let lab = IrrepLabel::Spin(l);
            let (da, db, dab) = (g.irrep_matrix(&lab, &a), g.irrep_matrix(&lab, &b), g.irrep_matrix(&lab, &ab));
            let n = da.nrows();
            assert!((da.adjoint() * &da - CMatrix::identity(n, n)).camax() < 1e-10, "unitary l={l}");
            assert!((&da * &db - dab).camax() < 1e-9, "homomorphism l={l}");
        }
    }

    #[test]
    fn product_matrices_are_kronecker() {
        let g = CompactGroup::Product(vec![CompactGroup::Circle, CompactGroup::So3]);
        let k = GroupElement::Tuple(vec![GroupElement::Angle(0.5), rot(0.1, 0.2, 0.3)]);
        let lab = IrrepLabel::Tuple(vec![IrrepLabel::Charge(-2), IrrepLabel::Spin(1)]);
        let m = g.irrep_matrix(&lab, &k);
        assert_eq!(m.nrows(), 3);
        let chi = g.character(&lab, &k);
        assert!((chi - m.trace()).norm() < 1e-12);
    }
}
