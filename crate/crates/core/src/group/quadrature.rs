use std::f64::consts::PI;

use super::wigner::rotation_from_zyz;
use super::{CompactGroup, GroupElement};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Nodes in a group with positive weights summing to one.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<GroupElement>,
    pub weights: Vec<f64>,
    /// Matrix coefficients of weight `< degree` are integrated exactly.
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, f64)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    pub(crate) fn haar(group: &CompactGroup, order: usize) -> Self {
        let order = order.max(1);
        match group {
            CompactGroup::Trivial => QuadratureRule { nodes: vec![GroupElement::Identity], weights: vec![1.0], degree: usize::MAX },
            CompactGroup::Circle => QuadratureRule {
                nodes: (0..order).map(|j| GroupElement::Angle(2.0 * PI * j as f64 / order as f64)).collect(),
                weights: vec![1.0 / order as f64; order],
                degree: order,
            },
            CompactGroup::So3 => {
                // equispaced in α and γ, Gauss–Legendre in cos β
                let n_gl = order / 2 + 1;
                let (xs, ws) = gauss_legendre(n_gl);
                let mut nodes = Vec::with_capacity(order * order * n_gl);
                let mut weights = Vec::with_capacity(nodes.capacity());
                let w_ang = 1.0 / (order * order) as f64;
                for a in 0..order {
                    let alpha = 2.0 * PI * a as f64 / order as f64;
                    for (x, wx) in xs.iter().zip(&ws) {
                        let beta = x.clamp(-1.0, 1.0).acos();
                        for g in 0..order {
                            let gamma = 2.0 * PI * g as f64 / order as f64;
                            nodes.push(GroupElement::Rotation(rotation_from_zyz(alpha, beta, gamma)));
                            weights.push(w_ang * wx / 2.0);
                        }
                    }
                }
                QuadratureRule { nodes, weights, degree: order }
            }
            CompactGroup::Product(gs) => {
                let mut nodes: Vec<Vec<GroupElement>> = vec![vec![]];
                let mut weights = vec![1.0];
                for g in gs {
                    let r = QuadratureRule::haar(g, order);
                    let mut nn = Vec::with_capacity(nodes.len() * r.len());
                    let mut nw = Vec::with_capacity(nn.capacity());
                    for (prefix, pw) in nodes.iter().zip(&weights) {
                        for (x, w) in r.iter() {
                            let mut p = prefix.clone();
                            p.push(x.clone());
                            nn.push(p);
                            nw.push(pw * w);
                        }
                    }
                    nodes = nn;
                    weights = nw;
                }
                QuadratureRule { nodes: nodes.into_iter().map(GroupElement::Tuple).collect(), weights, degree: order }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IrrepLabel;
    use num_complex::Complex64;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        for deg in 0..12 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn circle_rule_shape() {
        let r = CompactGroup::Circle.haar_quadrature(8);
        assert_eq!(r.len(), 8);
        assert!(r.weights.iter().all(|&w| (w - 0.125).abs() < 1e-16));
    }

    #[test]
    fn weights_sum_to_one() {
        for g in [
            CompactGroup::Circle,
            CompactGroup::So3,
            CompactGroup::Product(vec![CompactGroup::Circle, CompactGroup::Circle]),
        ] {
            let s: f64 = g.haar_quadrature(7).weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn so3_order_six_spin_one_norm() {
        let g = CompactGroup::So3;
        let r = g.haar_quadrature(6);
        let v: f64 = r
            .iter()
            .map(|(k, w)| w * g.irrep_matrix(&IrrepLabel::Spin(1), k)[(1, 1)].norm_sqr())
            .sum();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_rule_is_tensor() {
        let g = CompactGroup::Product(vec![CompactGroup::Circle, CompactGroup::Circle]);
        let r = g.haar_quadrature(5);
        assert_eq!(r.len(), 25);
        assert!((r.weights[3] - 1.0 / 25.0).abs() < 1e-16);
        let lab = IrrepLabel::Tuple(vec![IrrepLabel::Charge(1), IrrepLabel::Charge(-2)]);
        let s: Complex64 = r.iter().map(|(k, w)| g.character(&lab, k) * w).sum();
        assert!(s.norm() < 1e-14);
    }
}
