//! Numerical estimate of `‖f̂²‖_∞` for test functions.
//!
//! Terms sharing one spatial factor reduce to `sup_K |U| · ‖ĝ‖_∞`; otherwise
//! a joint grid over Haar nodes and `ξ` seeds a compass search.

use std::collections::BTreeMap;

use super::TestFunction;
use crate::group::{CompactGroup, GroupElement};
use crate::Complex64;

const SEEDS: usize = 6;

fn compass(dim: usize, start_step: f64, mut value: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut x = vec![0.0; dim];
    let mut best = value(&x);
    let mut step = start_step;
    while step > 1e-10 {
        let mut moved = false;
        for i in 0..dim {
            for s in [step, -step] {
                x[i] += s;
                let v = value(&x);
                if v > best {
                    best = v;
                    moved = true;
                    break;
                }
                x[i] -= s;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

fn top_indices(values: &[f64], n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|a, b| values[*b].total_cmp(&values[*a]));
    idx.truncate(n);
    idx
}

type TermRef<'a> = (Complex64, &'a crate::group::IrrepLabel, usize, usize);

fn trig_value(group: &CompactGroup, terms: &[TermRef<'_>], k: &GroupElement) -> Complex64 {
    terms.iter().map(|(c, l, r, s)| c * group.irrep_matrix(l, k)[(*r, *s)]).sum()
}

/// `sup_K |Σ c D_{rs}|`.
fn sup_on_group(group: &CompactGroup, terms: &[TermRef<'_>], band: u32) -> f64 {
    let rule = group.haar_quadrature((2 * band as usize + 6).max(8));
    let values: Vec<f64> = rule.nodes.iter().map(|k| trig_value(group, terms, k).norm()).collect();
    let dim = group.tangent_dim();
    top_indices(&values, SEEDS)
        .into_iter()
        .map(|i| {
            let k0 = &rule.nodes[i];
            compass(dim, 0.2, |v| trig_value(group, terms, &group.multiply(k0, &group.exp(v))).norm())
        })
        .fold(0.0, f64::max)
}

pub(crate) fn estimate(f: &TestFunction) -> f64 {
    let group = &f.pair().k;
    let mut by_spatial: BTreeMap<&[u32], Vec<TermRef<'_>>> = BTreeMap::new();
    for t in f.terms() {
        by_spatial.entry(&t.exponents).or_default().push((t.coefficient, &t.lambda, t.row, t.col));
    }
    if by_spatial.len() == 1 {
        let (exps, terms) = by_spatial.into_iter().next().expect("one group");
        return sup_on_group(group, &terms, f.bandlimit()) * f.spatial_fourier_sup(exps);
    }
    joint(f, group)
}

fn joint(f: &TestFunction, group: &CompactGroup) -> f64 {
    use super::PartialFourier;
    let n = f.pair().dim_p;
    let m = match n {
        1 => 41,
        2 => 17,
        3 => 9,
        _ => 7,
    };
    let ts: Vec<f64> = (0..m).map(|i| -4.0 + 8.0 * i as f64 / (m - 1) as f64).collect();
    let mut xis = vec![vec![]];
    for _ in 0..n {
        xis = xis
            .into_iter()
            .flat_map(|p| ts.iter().map(move |t| [p.clone(), vec![t / f.sigma()]].concat()))
            .collect();
    }
    let rule = group.haar_quadrature((2 * f.bandlimit() as usize + 4).max(6));
    let terms = f.terms();
    let u: Vec<Vec<Complex64>> = rule
        .nodes
        .iter()
        .map(|k| terms.iter().map(|t| t.coefficient * group.irrep_matrix(&t.lambda, k)[(t.row, t.col)]).collect())
        .collect();
    let g: Vec<Vec<Complex64>> =
        xis.iter().map(|xi| terms.iter().map(|t| f.spatial_fourier(&t.exponents, xi)).collect()).collect();
    let mut values = Vec::with_capacity(u.len() * g.len());
    for uk in &u {
        for gx in &g {
            values.push(uk.iter().zip(gx).map(|(a, b)| a * b).sum::<Complex64>().norm());
        }
    }
    let dim_k = group.tangent_dim();
    top_indices(&values, SEEDS)
        .into_iter()
        .map(|idx| {
            let (k0, xi0) = (&rule.nodes[idx / g.len()], &xis[idx % g.len()]);
            compass(dim_k + n, 0.2, |v| {
                let k = group.multiply(k0, &group.exp(&v[..dim_k]));
                let xi: Vec<f64> = xi0.iter().zip(&v[dim_k..]).map(|(a, b)| a + b / f.sigma()).collect();
                PartialFourier::eval(f, &k, &xi).norm()
            })
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Term;
    use crate::group::IrrepLabel;
    use crate::pair::build_instance;

    #[test]
    fn single_entry_sup_is_product_of_sups() {
        let p = build_instance("M3").unwrap();
        let f = TestFunction::new(&p, 1.0, vec![TestFunction::gaussian_term(&p, 3.0.into(), IrrepLabel::Spin(2), 2, 2)])
            .unwrap();
        let expected = 3.0 * (2.0 * std::f64::consts::PI).powf(1.5);
        assert!((f.sup_norm() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn cosine_factor_peaks_at_one() {
        let p = build_instance("M2").unwrap();
        let t = |c: f64, m: i64| TestFunction::gaussian_term(&p, c.into(), IrrepLabel::Charge(m), 0, 0);
        let f = TestFunction::new(&p, 1.0, vec![t(0.5, 1), t(0.5, -1), t(0.25, 2), t(-0.25, -2)]).unwrap();
        // |cos θ + (i/2) sin 2θ| on the circle, maximized by brute force
        let k_sup = (0..200_000)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / 200_000.0;
                Complex64::new(th.cos(), 0.5 * (2.0 * th).sin()).norm()
            })
            .fold(0.0, f64::max);
        let g_sup = 2.0 * std::f64::consts::PI;
        assert!((f.sup_norm() - k_sup * g_sup).abs() < 1e-8);
        assert!(f.sup_norm() < f.sup_norm_bound());
    }

    #[test]
    fn joint_search_respects_the_bound_and_finds_the_peak() {
        let p = build_instance("M2").unwrap();
        let f = TestFunction::new(
            &p,
            1.0,
            vec![
                TestFunction::gaussian_term(&p, 1.0.into(), IrrepLabel::Charge(0), 0, 0),
                Term { coefficient: 1.0.into(), lambda: IrrepLabel::Charge(1), row: 0, col: 0, exponents: vec![1, 0] },
            ],
        )
        .unwrap();
        let est = f.sup_norm();
        assert!(est <= f.sup_norm_bound());
        // brute force over a dense grid
        let mut brute: f64 = 0.0;
        for i in 0..64 {
            let k = GroupElement::Angle(2.0 * std::f64::consts::PI * i as f64 / 64.0);
            for a in -40..=40 {
                for b in -40..=40 {
                    let xi = [a as f64 * 0.1, b as f64 * 0.1];
                    brute = brute.max(crate::fourier::PartialFourier::eval(&f, &k, &xi).norm());
                }
            }
        }
        assert!(est >= brute - 1e-9, "{est} < {brute}");
    }
}
