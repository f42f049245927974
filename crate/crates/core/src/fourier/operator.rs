//! Kernels and truncated matrices of `π_{(μ,H)}(f)`, `τ_λ(f)`, `π_{μ,0}(f)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PartialFourier, TestFunction};
use crate::dual::{stabilizer_of, DualPoint, Stratum};
use crate::group::{peter_weyl_basis, GroupElement, IrrepLabel, PeterWeylBasis, QuadratureRule};
use crate::pair::SymmetricPairDescriptor;
use crate::{CMatrix, Complex64, Error, Result};

/// Number of quadrature nodes summed per parallel task; fixed so that the
/// floating-point summation order does not depend on the thread count.
const CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSettings {
    /// K-type cutoff `Λmax` of the Peter–Weyl basis.
    pub lambda_max: u32,
    /// Haar quadrature order; [`default_order`] when absent.
    #[serde(default)]
    pub order: Option<usize>,
    /// Recompute at `order + 4` and reject deviations above the tolerance.
    #[serde(default = "yes")]
    pub refinement_check: bool,
    #[serde(default = "refinement_tolerance")]
    pub refinement_tolerance: f64,
}

fn yes() -> bool {
    true
}

fn refinement_tolerance() -> f64 {
    1e-6
}

impl Default for FourierSettings {
    fn default() -> Self {
        Self { lambda_max: 6, order: None, refinement_check: true, refinement_tolerance: refinement_tolerance() }
    }
}

impl FourierSettings {
    pub fn with_lambda_max(lambda_max: u32) -> Self {
        Self { lambda_max, ..Self::default() }
    }
}

/// `max(2(b + Λ) + 4, 2Λ + b + deg + 2)` for bandlimit `b` and `ξ`-degree `deg`.
pub fn default_order(f: &dyn PartialFourier, lambda_max: u32) -> usize {
    let (b, d, l) = (f.k_bandlimit() as usize, f.xi_degree() as usize, lambda_max as usize);
    (2 * (b + l) + 4).max(2 * l + b + d + 2)
}

/// A square matrix on a truncated representation space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncatedOperator {
    pub lambda_max: u32,
    pub order: usize,
    /// K-type of every basis vector.
    pub labels: Vec<IrrepLabel>,
    #[serde(with = "complex_matrix")]
    pub matrix: CMatrix,
    #[serde(skip)]
    pub basis: Option<Arc<PeterWeylBasis>>,
}

impl PartialEq for TruncatedOperator {
    fn eq(&self, other: &Self) -> bool {
        self.lambda_max == other.lambda_max
            && self.order == other.order
            && self.labels == other.labels
            && self.matrix == other.matrix
    }
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn hs_norm(&self) -> f64 {
        hs_norm(&self.matrix)
    }

    /// K-type weight of every basis vector.
    pub fn weights(&self) -> Vec<u32> {
        self.labels.iter().map(IrrepLabel::weight).collect()
    }

    /// Same space and metadata with a different matrix.
    pub fn with_matrix(&self, matrix: CMatrix) -> Self {
        assert_eq!(matrix.shape(), self.matrix.shape());
        Self { matrix, ..self.clone() }
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Frobenius norm.
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.norm()
}

pub(crate) mod complex_matrix {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::{CMatrix, Complex64};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> =
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(CMatrix::from_fn(n, m, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}

fn check_instance(f: &dyn PartialFourier, pair: &SymmetricPairDescriptor) -> Result<()> {
    if f.instance() != pair.name {
        return Err(Error::MixedInstance(f.instance().to_string(), pair.name.to_string()));
    }
    Ok(())
}

/// `f_{μ,H}(h, k) = ∫_{K_H} f̂²(hsk⁻¹, Ad(h)H) ρ_μ(s) ds` for `H` given in
/// `a`-coordinates.
pub fn kernel(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    mu: &IrrepLabel,
    h_coords: &[f64],
    h: &GroupElement,
    k: &GroupElement,
) -> Result<CMatrix> {
    check_instance(f, pair)?;
    let stab = pair.stabilizer(h_coords);
    stab.check_label(pair, mu)?;
    let sub = stab.group(pair);
    let rule = sub.haar_quadrature((f.k_bandlimit() + mu.weight()) as usize + 2);
    let xi = pair.adjoint_action(h, &pair.embed_a(h_coords));
    let ki = pair.k.inverse(k);
    let d = sub.dim(mu);
    let mut out = CMatrix::zeros(d, d);
    for (s, w) in rule.iter() {
        let g = pair.k.multiply(&pair.k.multiply(h, &stab.embed(pair, s)), &ki);
        out += sub.irrep_matrix(mu, s) * (f.eval(&g, &xi) * w);
    }
    Ok(out)
}

/// Truncated `π_{(μ,H)}(f)` at a point of `Γ₀ ⊔ Γ₁`. The point's `H` is
/// used as stored, so Weyl-translated points give the conjugated model.
pub fn pi_matrix(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    point: &DualPoint,
    settings: &FourierSettings,
) -> Result<TruncatedOperator> {
    if point.stratum == Stratum::KType {
        return Err(Error::InvalidInput("π_(μ,H) needs a point of Γ₀ or Γ₁; use tau_matrix".into()));
    }
    check_instance(f, pair)?;
    let stab = stabilizer_of(pair, point);
    let basis = Arc::new(peter_weyl_basis(&pair.k, &stab.embedding, &point.label, settings.lambda_max)?);
    pi_matrix_at(f, pair, &basis, &pair.embed_a(&point.h), settings)
}

/// Matrix of `Ψ(h) ↦ ∫_K f̂²(hk⁻¹, Ad(h)X)Ψ(k) dk` on a given basis for any
/// `X ∈ p`; at `X = 0` this is `π_{μ,0}(f)`.
pub fn pi_matrix_at(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    basis: &Arc<PeterWeylBasis>,
    x: &[f64],
    settings: &FourierSettings,
) -> Result<TruncatedOperator> {
    let order = settings.order.unwrap_or_else(|| default_order(f, basis.lambda_max));
    let m = assemble(f, pair, basis, x, order);
    if settings.refinement_check {
        let finer = assemble(f, pair, basis, x, order + 4);
        let deviation = (&m - &finer).camax();
        if deviation > settings.refinement_tolerance {
            return Err(Error::QuadratureOrderTooLow { order, deviation });
        }
    }
    Ok(TruncatedOperator {
        lambda_max: basis.lambda_max,
        order,
        labels: basis.block_index().into_iter().map(|(l, _, _)| l).collect(),
        matrix: m,
        basis: Some(basis.clone()),
    })
}

fn assemble(f: &dyn PartialFourier, pair: &SymmetricPairDescriptor, basis: &PeterWeylBasis, x: &[f64], order: usize) -> CMatrix {
    let rule = pair.k.haar_quadrature(order);
    match f.as_test_function() {
        Some(tf) => assemble_separable(tf, pair, basis, x, &rule),
        None => assemble_general(f, pair, basis, x, &rule),
    }
}

/// Sums `task(range)` over fixed chunks of `0..n` in index order.
fn ordered_sum<T: Send>(n: usize, task: impl Fn(std::ops::Range<usize>) -> T + Sync, add: impl Fn(&mut T, T)) -> Option<T> {
    let parts: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| task(c * CHUNK..((c + 1) * CHUNK).min(n)))
        .collect();
    let mut it = parts.into_iter();
    let mut acc = it.next()?;
    for p in it {
        add(&mut acc, p);
    }
    Some(acc)
}

/// Uses `D^λ_{rs}(hk⁻¹) = Σ_p D^λ_{rp}(h) conj D^λ_{sp}(k)` to split the double
/// integral of each term into two single integrals, each a matrix product
/// over a chunk of quadrature nodes.
fn assemble_separable(
    tf: &TestFunction,
    pair: &SymmetricPairDescriptor,
    basis: &PeterWeylBasis,
    x: &[f64],
    rule: &QuadratureRule,
) -> CMatrix {
    let n = basis.len();
    let dm = basis.d_mu;
    let terms = tf.terms();
    if terms.is_empty() {
        return CMatrix::zeros(n, n);
    }
    // basis K-types first, so that a prefix of the evaluated matrices feeds `evaluate_with`
    let mut labels = basis.k_types().to_vec();
    for t in terms {
        if !labels.contains(&t.lambda) {
            labels.push(t.lambda.clone());
        }
    }
    let nb = basis.k_types().len();
    let term_label: Vec<usize> = terms.iter().map(|t| labels.iter().position(|l| *l == t.lambda).expect("listed")).collect();
    let dims: Vec<usize> = terms.iter().map(|t| pair.k.dim(&t.lambda)).collect();
    let zero_parts = || -> Vec<(CMatrix, CMatrix)> {
        dims.iter().map(|&d| (CMatrix::zeros(n, d * dm), CMatrix::zeros(d * dm, n))).collect()
    };
    let parts = ordered_sum(
        rule.len(),
        |range| {
            let c = range.len();
            let mut stack = CMatrix::zeros(c * dm, n);
            let mut rs: Vec<CMatrix> = dims.iter().map(|&d| CMatrix::zeros(c * dm, d * dm)).collect();
            let mut ss = rs.clone();
            for (ci, idx) in range.enumerate() {
                let (k, w) = (&rule.nodes[idx], rule.weights[idx]);
                let taus = pair.k.irrep_matrices(&labels, k);
                stack.rows_mut(ci * dm, dm).copy_from(&basis.evaluate_with(&taus[..nb]));
                let xi = pair.adjoint_action(k, x);
                for (ti, t) in terms.iter().enumerate() {
                    let d = &taus[term_label[ti]];
                    let g = tf.spatial_fourier(&t.exponents, &xi) * w;
                    for p in 0..dims[ti] {
                        let (a, b) = (d[(t.row, p)] * g, d[(t.col, p)].conj() * w);
                        for q in 0..dm {
                            rs[ti][(ci * dm + q, p * dm + q)] = a;
                            ss[ti][(ci * dm + q, p * dm + q)] = b;
                        }
                    }
                }
            }
            let adj = stack.adjoint();
            rs.iter().zip(&ss).map(|(r, s)| (&adj * r, s.transpose() * &stack)).collect::<Vec<_>>()
        },
        |acc, part| {
            for ((a, b), (pa, pb)) in acc.iter_mut().zip(part) {
                *a += pa;
                *b += pb;
            }
        },
    )
    .unwrap_or_else(zero_parts);
    let mut m = CMatrix::zeros(n, n);
    for (t, (a, b)) in terms.iter().zip(parts) {
        m += a * b * t.coefficient;
    }
    m
}

/// Expands `g ↦ f̂²(g, ξ)` in matrix coefficients,
/// `f̂²(g, ξ) = Σ_λ d_λ Σ_{rs} c^λ_{rs}(ξ) D^λ_{rs}(g)`, which reduces the
/// double integral to the separable case with `ξ`-dependent coefficients.
fn assemble_general(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    basis: &PeterWeylBasis,
    x: &[f64],
    rule: &QuadratureRule,
) -> CMatrix {
    let n = basis.len();
    let dm = basis.d_mu;
    let lambdas = pair.k.irreps(f.k_bandlimit());
    let dims: Vec<usize> = lambdas.iter().map(|l| pair.k.dim(l)).collect();
    let inner = pair.k.haar_quadrature(2 * f.k_bandlimit() as usize + 1);
    let inner_d: Vec<Vec<CMatrix>> = inner.nodes.iter().map(|g| pair.k.irrep_matrices(&lambdas, g)).collect();
    // A^λ with column index (s, p, a) and B^λ with row index (s, p, a)
    let zero_parts = || -> Vec<(CMatrix, CMatrix)> {
        dims.iter().map(|&d| (CMatrix::zeros(n, d * d * dm), CMatrix::zeros(d * d * dm, n))).collect()
    };
    let parts = ordered_sum(
        rule.len(),
        |range| {
            let mut acc = zero_parts();
            for idx in range {
                let (k, w) = (&rule.nodes[idx], rule.weights[idx]);
                let psi = basis.evaluate(k);
                let psi_adj = psi.adjoint();
                let xi = pair.adjoint_action(k, x);
                let ds = pair.k.irrep_matrices(&lambdas, k);
                let fv: Vec<Complex64> = inner.iter().map(|(g, wg)| f.eval(g, &xi) * wg).collect();
                for (li, (a, b)) in acc.iter_mut().enumerate() {
                    let d = dims[li];
                    let mut c = CMatrix::zeros(d, d);
                    for (gi, v) in fv.iter().enumerate() {
                        c += inner_d[gi][li].map(|z| z.conj()) * *v;
                    }
                    // (cᵀ D(k))_{sp} = Σ_r c_{rs} D_{rp}(k)
                    let cd = c.transpose() * &ds[li];
                    for sx in 0..d {
                        for p in 0..d {
                            let col = (sx * d + p) * dm;
                            let mut ac = a.columns_mut(col, dm);
                            ac += &psi_adj * (cd[(sx, p)] * w);
                            let mut br = b.rows_mut(col, dm);
                            br += &psi * (ds[li][(sx, p)].conj() * w);
                        }
                    }
                }
            }
            acc
        },
        |acc, part| {
            for ((a, b), (pa, pb)) in acc.iter_mut().zip(part) {
                *a += pa;
                *b += pb;
            }
        },
    )
    .unwrap_or_else(zero_parts);
    let mut m = CMatrix::zeros(n, n);
    for ((a, b), &d) in parts.into_iter().zip(&dims) {
        m += a * b * Complex64::from(d as f64);
    }
    m
}

/// Literal double quadrature `Σ_{h,k} w_h w_k Ψ(h)* f̂²(hk⁻¹, Ad(h)X) Ψ(k)`.
#[cfg(test)]
pub(crate) fn assemble_direct(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    basis: &PeterWeylBasis,
    x: &[f64],
    order: usize,
) -> CMatrix {
    let rule = pair.k.haar_quadrature(order);
    let n = basis.len();
    let psis: Vec<CMatrix> = rule.nodes.iter().map(|k| basis.evaluate(k)).collect();
    let mut m = CMatrix::zeros(n, n);
    for (i, h) in rule.nodes.iter().enumerate() {
        let xi = pair.adjoint_action(h, x);
        let mut g = CMatrix::zeros(basis.d_mu, n);
        for (j, k) in rule.nodes.iter().enumerate() {
            g += &psis[j] * (f.eval(&pair.k.multiply(h, &pair.k.inverse(k)), &xi) * rule.weights[j]);
        }
        m += psis[i].adjoint() * g * Complex64::from(rule.weights[i]);
    }
    m
}

/// `τ_λ(f) = ∫_K f̂²(k, 0) τ_λ(k) dk`.
pub fn tau_matrix(f: &dyn PartialFourier, pair: &SymmetricPairDescriptor, lambda: &IrrepLabel) -> Result<TruncatedOperator> {
    check_instance(f, pair)?;
    if !pair.k.admits(lambda) {
        return Err(Error::InvalidInput(format!("{lambda} is not an irrep of {}", pair.k)));
    }
    let order = (f.k_bandlimit() + lambda.weight()) as usize + 2;
    let rule = pair.k.haar_quadrature(order);
    let zero = vec![0.0; pair.dim_p];
    let d = pair.k.dim(lambda);
    let mut m = CMatrix::zeros(d, d);
    for (k, w) in rule.iter() {
        m += pair.k.irrep_matrix(lambda, k) * (f.eval(k, &zero) * w);
    }
    Ok(TruncatedOperator {
        lambda_max: lambda.weight(),
        order,
        labels: vec![lambda.clone(); d],
        matrix: m,
        basis: None,
    })
}

/// `π_{μ,0}(f) = ⊕_{λ≥μ} τ_λ(f)` on the Peter–Weyl basis of `point`'s
/// `(K_H, μ)`: every block copy of `τ_λ` carries `τ_λ(f)`.
pub fn pi_mu0_matrix(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    point: &DualPoint,
    lambda_max: u32,
) -> Result<TruncatedOperator> {
    if point.stratum == Stratum::KType {
        return Err(Error::InvalidInput("π_(μ,0) needs a stabilizer irrep from Γ₀ or Γ₁".into()));
    }
    let stab = stabilizer_of(pair, point);
    let basis = Arc::new(peter_weyl_basis(&pair.k, &stab.embedding, &point.label, lambda_max)?);
    pi_mu0_on_basis(f, pair, &basis)
}

pub(crate) fn pi_mu0_on_basis(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    basis: &Arc<PeterWeylBasis>,
) -> Result<TruncatedOperator> {
    let taus = basis.k_types().iter().map(|l| tau_matrix(f, pair, l)).collect::<Result<Vec<_>>>()?;
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for b in &basis.blocks {
        let t = &taus[basis.k_types().iter().position(|l| *l == b.lambda).expect("block label listed")];
        m.view_mut((b.offset, b.offset), (b.dim(), b.dim())).copy_from(&t.matrix);
    }
    Ok(TruncatedOperator {
        lambda_max: basis.lambda_max,
        order: taus.iter().map(|t| t.order).max().unwrap_or(0),
        labels: basis.block_index().into_iter().map(|(l, _, _)| l).collect(),
        matrix: m,
        basis: Some(basis.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{make_dual_point, RawDualPoint};
    use crate::fourier::{Adjoint, Combination, Term};
    use crate::pair::build_instance;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    /// Hides the separable structure so that the general assembly runs.
    struct Opaque<'a>(&'a TestFunction);

    impl PartialFourier for Opaque<'_> {
        fn instance(&self) -> crate::pair::InstanceName {
            self.0.instance()
        }
        fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
            PartialFourier::eval(self.0, k, xi)
        }
        fn k_bandlimit(&self) -> u32 {
            self.0.k_bandlimit()
        }
        fn xi_degree(&self) -> u32 {
            self.0.xi_degree()
        }
        fn sup_norm(&self) -> f64 {
            self.0.sup_norm()
        }
        fn describe(&self) -> String {
            "opaque".into()
        }
    }

    fn point(pair: &SymmetricPairDescriptor, h: &[f64], label: IrrepLabel) -> DualPoint {
        make_dual_point(pair, &RawDualPoint { h: h.to_vec(), label }).unwrap()
    }

    fn term(c: Complex64, lambda: IrrepLabel, row: usize, col: usize, exponents: &[u32]) -> Term {
        Term { coefficient: c, lambda, row, col, exponents: exponents.to_vec() }
    }

    fn m3_function(pair: &SymmetricPairDescriptor) -> TestFunction {
        TestFunction::new(
            pair,
            0.6,
            vec![
                term(Complex64::new(1.0, 0.3), IrrepLabel::Spin(1), 0, 2, &[1, 0, 0]),
                term(Complex64::new(-0.4, 0.0), IrrepLabel::Spin(2), 1, 1, &[0, 0, 0]),
                term(Complex64::new(0.2, -0.7), IrrepLabel::Spin(0), 0, 0, &[0, 1, 1]),
            ],
        )
        .unwrap()
    }

    fn random_rotation(pair: &SymmetricPairDescriptor, rng: &mut impl Rng) -> GroupElement {
        let v: Vec<f64> = (0..pair.k.tangent_dim()).map(|_| rng.gen_range(-PI..PI)).collect();
        pair.k.exp(&v)
    }

    #[test]
    fn norm_examples() {
        let id = CMatrix::identity(3, 3);
        assert!((operator_norm(&id) - 1.0).abs() < 1e-14);
        assert!((hs_norm(&id) - 3f64.sqrt()).abs() < 1e-14);
        let u = CMatrix::from_fn(3, 1, |i, _| Complex64::new(i as f64 + 1.0, -0.5));
        let v = CMatrix::from_fn(4, 1, |i, _| Complex64::new(0.3, i as f64));
        let r = &u * v.adjoint();
        let expected = u.norm() * v.norm();
        assert!((operator_norm(&r) - expected).abs() < 1e-12);
        assert!((hs_norm(&r) - expected).abs() < 1e-12);
        assert_eq!(operator_norm(&CMatrix::zeros(0, 0)), 0.0);
    }

    #[test]
    fn norms_are_unitarily_invariant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let a = CMatrix::from_fn(5, 5, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let z = CMatrix::from_fn(5, 5, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = z.qr().q();
        let b = &q * &a * q.adjoint();
        assert!((operator_norm(&a) - operator_norm(&b)).abs() < 1e-12);
        assert!((hs_norm(&a) - hs_norm(&b)).abs() < 1e-12);
    }

    /// `∫∫ conj ψ_i(h) f̂²(h − k, Ad(h)H) ψ_j(k)` with `ψ_m(θ) = e^{−imθ}` on a
    /// uniform grid, exact for trigonometric polynomials of low degree.
    fn m2_oracle(f: &TestFunction, h: f64, lambda_max: i64) -> CMatrix {
        let n = 96;
        let modes: Vec<i64> = (-lambda_max..=lambda_max).collect();
        let mut m = CMatrix::zeros(modes.len(), modes.len());
        for a in 0..n {
            let th = 2.0 * PI * a as f64 / n as f64;
            let xi = [h * th.cos(), h * th.sin()];
            for b in 0..n {
                let tk = 2.0 * PI * b as f64 / n as f64;
                let v = PartialFourier::eval(f, &GroupElement::Angle(th - tk), &xi) / (n * n) as f64;
                for (i, mi) in modes.iter().enumerate() {
                    for (j, mj) in modes.iter().enumerate() {
                        m[(i, j)] += Complex64::from_polar(1.0, *mi as f64 * th - *mj as f64 * tk) * v;
                    }
                }
            }
        }
        m
    }

    #[test]
    fn m2_character_times_radial_is_rank_one() {
        let pair = build_instance("M2").unwrap();
        let n = 2;
        let f = TestFunction::new(&pair, 0.8, vec![term(1.0.into(), IrrepLabel::Charge(n), 0, 0, &[0, 0])]).unwrap();
        let p = point(&pair, &[1.3], IrrepLabel::Trivial);
        let op = pi_matrix(&f, &pair, &p, &FourierSettings::with_lambda_max(4)).unwrap();
        let oracle = m2_oracle(&f, 1.3, 4);
        assert!((&op.matrix - &oracle).camax() < 1e-12);
        let idx = op.labels.iter().position(|l| *l == IrrepLabel::Charge(-n)).unwrap();
        let g = f.spatial_fourier(&[0, 0], &[1.3, 0.0]);
        for i in 0..op.dim() {
            for j in 0..op.dim() {
                let expect = if i == idx && j == idx { g } else { Complex64::new(0.0, 0.0) };
                assert!((op.matrix[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn m2_angular_spatial_factor_shifts_the_selected_mode() {
        let pair = build_instance("M2").unwrap();
        // e^{inθ(k)} (x + iy) e^{−|X|²/(2σ²)}: convolution in k selects the mode
        // e^{inθ}, the transform of x + iy multiplies it by e^{iθ}
        let n = 1;
        let f = TestFunction::new(
            &pair,
            0.8,
            vec![
                term(1.0.into(), IrrepLabel::Charge(n), 0, 0, &[1, 0]),
                term(Complex64::i(), IrrepLabel::Charge(n), 0, 0, &[0, 1]),
            ],
        )
        .unwrap();
        let p = point(&pair, &[1.3], IrrepLabel::Trivial);
        let op = pi_matrix(&f, &pair, &p, &FourierSettings::with_lambda_max(4)).unwrap();
        assert!((&op.matrix - m2_oracle(&f, 1.3, 4)).camax() < 1e-12);
        let at = |m: i64| op.labels.iter().position(|l| *l == IrrepLabel::Charge(m)).unwrap();
        let (row, col) = (at(-n - 1), at(-n));
        for i in 0..op.dim() {
            for j in 0..op.dim() {
                let v = op.matrix[(i, j)].norm();
                if (i, j) == (row, col) {
                    assert!(v > 1e-2);
                } else {
                    assert!(v < 1e-12);
                }
            }
        }
    }

    #[test]
    fn m2_kernel_is_the_scalar_transform() {
        let pair = build_instance("M2").unwrap();
        let f = TestFunction::new(&pair, 0.8, vec![term(1.0.into(), IrrepLabel::Charge(1), 0, 0, &[1, 0])]).unwrap();
        let (h, k) = (GroupElement::Angle(0.4), GroupElement::Angle(-1.1));
        let kv = kernel(&f, &pair, &IrrepLabel::Trivial, &[0.9], &h, &k).unwrap();
        let xi = pair.adjoint_action(&h, &pair.embed_a(&[0.9]));
        let direct = PartialFourier::eval(&f, &GroupElement::Angle(1.5), &xi);
        assert_eq!(kv.shape(), (1, 1));
        assert!((kv[(0, 0)] - direct).norm() < 1e-14);
    }

    #[test]
    fn kernel_vanishes_outside_the_stabilizer_types() {
        let pair = build_instance("M3").unwrap();
        let f = TestFunction::new(&pair, 0.7, vec![term(1.0.into(), IrrepLabel::Spin(2), 1, 3, &[0, 0, 0])]).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let (h, k) = (random_rotation(&pair, &mut rng), random_rotation(&pair, &mut rng));
            let inside = kernel(&f, &pair, &IrrepLabel::Charge(1), &[1.0], &h, &k).unwrap();
            let outside = kernel(&f, &pair, &IrrepLabel::Charge(3), &[1.0], &h, &k).unwrap();
            assert!(outside.norm() < 1e-12);
            assert!(inside.norm() <= f.sup_norm() + 1e-9);
        }
    }

    #[test]
    fn hs_bound_on_m3() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        let sup = f.sup_norm();
        for mu in -2..=2 {
            for h in [0.3, 1.0, 2.5] {
                let op = pi_matrix(&f, &pair, &point(&pair, &[h], IrrepLabel::Charge(mu)), &FourierSettings::with_lambda_max(4))
                    .unwrap();
                assert!(op.hs_norm().powi(2) <= sup * sup * (1.0 + 1e-6));
            }
        }
    }

    #[test]
    fn separable_and_general_assembly_agree() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        let p = point(&pair, &[0.8], IrrepLabel::Charge(1));
        let s = FourierSettings::with_lambda_max(2);
        let fast = pi_matrix(&f, &pair, &p, &s).unwrap();
        let general = pi_matrix(&Opaque(&f), &pair, &p, &s).unwrap();
        assert!((&fast.matrix - &general.matrix).camax() < 1e-11);
        let basis = fast.basis.clone().unwrap();
        let direct = assemble_direct(&f, &pair, &basis, &pair.embed_a(&p.h), 10);
        assert!((&fast.matrix - &direct).camax() < 1e-11);
    }

    #[test]
    fn adjoint_gives_the_conjugate_transpose() {
        let pair = build_instance("M3").unwrap();
        let f = TestFunction::new(
            &pair,
            0.6,
            vec![
                term(Complex64::new(1.0, 0.3), IrrepLabel::Spin(1), 0, 2, &[1, 0, 0]),
                term(Complex64::new(0.2, -0.7), IrrepLabel::Spin(0), 0, 0, &[0, 0, 0]),
            ],
        )
        .unwrap();
        let p = point(&pair, &[1.1], IrrepLabel::Charge(-1));
        let s = FourierSettings::with_lambda_max(2);
        let a = pi_matrix(&f, &pair, &p, &s).unwrap();
        let star = Adjoint::new(&pair, &f);
        let b = pi_matrix(&star, &pair, &p, &s).unwrap();
        assert!((&b.matrix - a.matrix.adjoint()).camax() < 1e-9);
        let sym = Combination { a: 1.0.into(), f: &f, b: 1.0.into(), g: &star };
        let c = pi_matrix(&sym, &pair, &p, &s).unwrap();
        assert!((&c.matrix - c.matrix.adjoint()).camax() < 1e-9);
    }

    #[test]
    fn pi_mu0_is_the_h_zero_operator() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        for mu in [0, 2] {
            let p = point(&pair, &[1.0], IrrepLabel::Charge(mu));
            let direct = pi_mu0_matrix(&f, &pair, &p, 4).unwrap();
            let basis = direct.basis.clone().unwrap();
            let at_zero = pi_matrix_at(&f, &pair, &basis, &[0.0; 3], &FourierSettings::with_lambda_max(4)).unwrap();
            assert!((&direct.matrix - &at_zero.matrix).camax() < 1e-12);
            let spins: Vec<u32> = basis.k_types().iter().map(IrrepLabel::weight).collect();
            assert_eq!(spins, (mu as u32..=4).collect::<Vec<_>>());
        }
    }

    #[test]
    fn tau_examples() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        for l in 3..6 {
            assert!(tau_matrix(&f, &pair, &IrrepLabel::Spin(l)).unwrap().matrix.camax() < 1e-10);
        }
        let t0 = tau_matrix(&f, &pair, &IrrepLabel::Spin(0)).unwrap();
        let rule = pair.k.haar_quadrature(12);
        let scalar: Complex64 = rule.iter().map(|(k, w)| PartialFourier::eval(&f, k, &[0.0; 3]) * w).sum();
        assert!((t0.matrix[(0, 0)] - scalar).norm() < 1e-12);
        for l in 0..4 {
            assert!(tau_matrix(&f, &pair, &IrrepLabel::Spin(l)).unwrap().operator_norm() <= f.l1_norm_bound());
        }
    }

    #[test]
    fn low_order_is_detected() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        let p = point(&pair, &[1.0], IrrepLabel::Charge(0));
        let s = FourierSettings { lambda_max: 4, order: Some(3), ..Default::default() };
        assert!(matches!(pi_matrix(&f, &pair, &p, &s), Err(Error::QuadratureOrderTooLow { order: 3, .. })));
    }

    #[test]
    fn empty_basis_is_reported() {
        let pair = build_instance("M3").unwrap();
        let f = m3_function(&pair);
        let p = point(&pair, &[1.0], IrrepLabel::Charge(5));
        let e = pi_matrix(&f, &pair, &p, &FourierSettings::with_lambda_max(3));
        assert!(matches!(e, Err(Error::EmptyBasis { .. })));
    }

    #[test]
    fn operator_json_uses_pairs() {
        let pair = build_instance("M2").unwrap();
        let f = TestFunction::new(&pair, 1.0, vec![term(Complex64::new(0.0, 1.0), IrrepLabel::Charge(0), 0, 0, &[0, 0])]).unwrap();
        let t = tau_matrix(&f, &pair, &IrrepLabel::Charge(0)).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        let entry = &v["matrix"][0][0];
        assert!(entry[0].as_f64().unwrap().abs() < 1e-14);
        assert!((entry[1].as_f64().unwrap() - 2.0 * PI).abs() < 1e-12);
        let back: TruncatedOperator = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
