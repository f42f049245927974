//! Group Fourier transform of `G₀`: partial Fourier transforms `f̂²`,
//! operator kernels, and truncated matrices of `π_{(μ,H)}(f)`, `τ_λ(f)` and
//! `π_{μ,0}(f)` in Peter–Weyl bases.
//!
//! Conventions: `f̂²(k, ξ) = ∫_p f(k, X) e^{i⟨ξ,X⟩} dX`, Haar measure of `K`
//! normalized to total mass one, and
//! `π_{(μ,H)}(f)Ψ(h) = ∫_K f̂²(hk⁻¹, Ad(h)H) Ψ(k) dk`.

mod operator;
mod sample;
mod sup;
mod test_function;

use crate::group::{GroupElement, QuadratureRule};
use crate::pair::{InstanceName, SymmetricPairDescriptor};
use crate::Complex64;

pub use operator::{
    default_order, hs_norm, kernel, operator_norm, pi_matrix, pi_matrix_at, pi_mu0_matrix, tau_matrix,
    FourierSettings, TruncatedOperator,
};
pub use sample::{sample_field, FieldEntry, FieldMetadata, OperatorFieldSample};
pub use test_function::{hermite_all, hermite_gaussian_sup, Term, TestFunction, TestFunctionSpec};

/// A function on `K × p*` playing the role of `f̂²`.
pub trait PartialFourier: Sync {
    fn instance(&self) -> InstanceName;

    /// `f̂²(k, ξ)`.
    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64;

    /// Largest K-type weight of `k ↦ f̂²(k, ξ)`.
    fn k_bandlimit(&self) -> u32;

    /// Polynomial degree in `ξ` after removing Ad-invariant Gaussian factors;
    /// bounds the K-weight of `h ↦ f̂²(k, Ad(h)ξ)`.
    fn xi_degree(&self) -> u32;

    /// Estimate of `‖f̂²‖_∞`.
    fn sup_norm(&self) -> f64;

    /// Separable representation, enabling the factorized assembly.
    fn as_test_function(&self) -> Option<&TestFunction> {
        None
    }

    fn describe(&self) -> String;
}

impl<T: PartialFourier + ?Sized> PartialFourier for &T {
    fn instance(&self) -> InstanceName {
        (**self).instance()
    }
    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
        (**self).eval(k, xi)
    }
    fn k_bandlimit(&self) -> u32 {
        (**self).k_bandlimit()
    }
    fn xi_degree(&self) -> u32 {
        (**self).xi_degree()
    }
    fn sup_norm(&self) -> f64 {
        (**self).sup_norm()
    }
    fn as_test_function(&self) -> Option<&TestFunction> {
        (**self).as_test_function()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// `f*` with `f*(k, X) = conj f(k⁻¹, −Ad(k⁻¹)X)`, so that
/// `(f*)^²(k, ξ) = conj f̂²(k⁻¹, Ad(k⁻¹)ξ)`.
pub struct Adjoint<F> {
    inner: F,
    pair: SymmetricPairDescriptor,
}

impl<F: PartialFourier> Adjoint<F> {
    pub fn new(pair: &SymmetricPairDescriptor, inner: F) -> Self {
        Self { inner, pair: pair.clone() }
    }
}

impl<F: PartialFourier> PartialFourier for Adjoint<F> {
    fn instance(&self) -> InstanceName {
        self.inner.instance()
    }
    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
        let ki = self.pair.k.inverse(k);
        let rotated = self.pair.adjoint_action(&ki, xi);
        self.inner.eval(&ki, &rotated).conj()
    }
    fn k_bandlimit(&self) -> u32 {
        self.inner.k_bandlimit() + self.inner.xi_degree()
    }
    fn xi_degree(&self) -> u32 {
        self.inner.xi_degree()
    }
    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }
    fn describe(&self) -> String {
        format!("({})*", self.inner.describe())
    }
}

/// Convolution on `G₀`:
/// `(f∗g)^²(k, ξ) = ∫_K f̂²(k', ξ) ĝ²(k'⁻¹k, Ad(k'⁻¹)ξ) dk'`.
pub struct Convolution<A, B> {
    left: A,
    right: B,
    pair: SymmetricPairDescriptor,
    rule: QuadratureRule,
}

impl<A: PartialFourier, B: PartialFourier> Convolution<A, B> {
    /// Inner quadrature exact for the bandlimited integrand.
    pub fn new(pair: &SymmetricPairDescriptor, left: A, right: B) -> Self {
        let order = (left.k_bandlimit() + right.k_bandlimit() + right.xi_degree()) as usize + 2;
        Self { rule: pair.k.haar_quadrature(order), left, right, pair: pair.clone() }
    }
}

impl<A: PartialFourier, B: PartialFourier> PartialFourier for Convolution<A, B> {
    fn instance(&self) -> InstanceName {
        self.left.instance()
    }
    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
        self.rule
            .iter()
            .map(|(kp, w)| {
                let kpi = self.pair.k.inverse(kp);
                let a = self.left.eval(kp, xi);
                let b = self.right.eval(&self.pair.k.multiply(&kpi, k), &self.pair.adjoint_action(&kpi, xi));
                a * b * w
            })
            .sum()
    }
    fn k_bandlimit(&self) -> u32 {
        self.right.k_bandlimit()
    }
    fn xi_degree(&self) -> u32 {
        self.left.xi_degree() + self.right.xi_degree()
    }
    fn sup_norm(&self) -> f64 {
        self.left.sup_norm() * self.right.sup_norm()
    }
    fn describe(&self) -> String {
        format!("({}) * ({})", self.left.describe(), self.right.describe())
    }
}

/// `a·f + b·g`.
pub struct Combination<A, B> {
    pub a: Complex64,
    pub f: A,
    pub b: Complex64,
    pub g: B,
}

impl<A: PartialFourier, B: PartialFourier> PartialFourier for Combination<A, B> {
    fn instance(&self) -> InstanceName {
        self.f.instance()
    }
    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
        self.a * self.f.eval(k, xi) + self.b * self.g.eval(k, xi)
    }
    fn k_bandlimit(&self) -> u32 {
        self.f.k_bandlimit().max(self.g.k_bandlimit())
    }
    fn xi_degree(&self) -> u32 {
        self.f.xi_degree().max(self.g.xi_degree())
    }
    fn sup_norm(&self) -> f64 {
        self.a.norm() * self.f.sup_norm() + self.b.norm() * self.g.sup_norm()
    }
    fn describe(&self) -> String {
        format!("{}·({}) + {}·({})", self.a, self.f.describe(), self.b, self.g.describe())
    }
}
