//! Numerical section of the adjoint orbits: for `X ∈ p`, find `k ∈ K` with
//! `Ad(k)X` in the closed positive chamber of `a`.

use nalgebra::{DMatrix, DVector};

use super::SymmetricPairDescriptor;
use crate::group::GroupElement;

#[derive(Clone, Debug)]
pub struct OrbitSection {
    pub k: GroupElement,
    /// `a`-coordinates of the reached chamber point.
    pub h: Vec<f64>,
    /// Distance from `Ad(k)X` to the closed chamber.
    pub residual: f64,
}

fn chamber_residual(pair: &SymmetricPairDescriptor, y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let h: Vec<f64> = pair.project_a(y).into_iter().map(|c| c.max(0.0)).collect();
    let e = pair.embed_a(&h);
    (y.iter().zip(&e).map(|(a, b)| a - b).collect(), h)
}

/// Minimizes `dist(Ad(k)X, C̄⁺)` over a Haar grid of `K`, then refines with
/// damped Gauss–Newton steps in left-translated exponential coordinates.
pub fn adjoint_orbit_section(pair: &SymmetricPairDescriptor, x: &[f64], grid_order: usize) -> OrbitSection {
    let group = &pair.k;
    let eval = |k: &GroupElement| chamber_residual(pair, &pair.adjoint_action(k, x));
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();

    let rule = group.haar_quadrature(grid_order);
    let mut k = rule
        .nodes
        .iter()
        .min_by(|a, b| norm(&eval(a).0).total_cmp(&norm(&eval(b).0)))
        .cloned()
        .unwrap_or_else(|| group.identity());
    let (mut r, _) = eval(&k);
    let dim = group.tangent_dim();
    let mut damping = 1e-6;
    let step = 1e-6;
    for _ in 0..200 {
        let rn = norm(&r);
        if rn < 1e-15 || dim == 0 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(r.len(), dim);
        for j in 0..dim {
            let mut v = vec![0.0; dim];
            v[j] = step;
            let kp = group.multiply(&group.exp(&v), &k);
            v[j] = -step;
            let km = group.multiply(&group.exp(&v), &k);
            let (rp, rm) = (eval(&kp).0, eval(&km).0);
            for i in 0..r.len() {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * step);
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jt = jac.transpose();
        let mut improved = false;
        for _ in 0..30 {
            let lhs = &jt * &jac + DMatrix::identity(dim, dim) * damping;
            let Some(delta) = lhs.lu().solve(&(-(&jt * &rv))) else {
                damping *= 10.0;
                continue;
            };
            let cand = group.multiply(&group.exp(delta.as_slice()), &k);
            let (rc, _) = eval(&cand);
            if norm(&rc) < rn {
                k = cand;
                r = rc;
                damping = (damping * 0.1).max(1e-15);
                improved = true;
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let (r, h) = eval(&k);
    OrbitSection { k, h, residual: norm(&r) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::{InstanceName, SymmetricPairDescriptor};

    #[test]
    fn reaches_chamber_on_every_instance() {
        for name in [InstanceName::M2, InstanceName::M3, InstanceName::M2xM2] {
            let pair = SymmetricPairDescriptor::new(name);
            let x: Vec<f64> = (0..pair.dim_p).map(|i| (1.7 * i as f64 + 0.4).sin()).collect();
            let s = adjoint_orbit_section(&pair, &x, 6);
            assert!(s.residual < 1e-8, "{name}: {}", s.residual);
            assert!(pair.is_dominant(&s.h));
        }
    }

    #[test]
    fn m3_section_has_norm_of_x() {
        let pair = SymmetricPairDescriptor::new(InstanceName::M3);
        let x = [0.3, -2.0, -0.9];
        let s = adjoint_orbit_section(&pair, &x, 6);
        assert!((s.h[0] - pair.norm(&x)).abs() < 1e-10);
    }
}
