//! Test functions `f(k, X) = Σ c · D^λ_{rs}(k) · X^α e^{−|X|²/(2σ²)}` with
//! closed-form partial Fourier transforms.

use serde::{Deserialize, Serialize};

use super::PartialFourier;
use crate::group::{GroupElement, IrrepLabel};
use crate::pair::{InstanceName, SymmetricPairDescriptor};
use crate::{Complex64, Error, Result};

/// One separable summand `c · D^λ_{row,col}(k) · X^α e^{−|X|²/(2σ²)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Complex64,
    pub lambda: IrrepLabel,
    pub row: usize,
    pub col: usize,
    /// Monomial exponents in the coordinates of `p`.
    pub exponents: Vec<u32>,
}

/// Serialized form; `sigma = null` describes a function constant in `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub instance: InstanceName,
    pub sigma: Option<f64>,
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TestFunctionSpec", into = "TestFunctionSpec")]
pub struct TestFunction {
    pair: SymmetricPairDescriptor,
    sigma: f64,
    terms: Vec<Term>,
    description: Option<String>,
    /// Distinct K-types of the terms and the index of each term's K-type.
    lambdas: Vec<IrrepLabel>,
    term_lambda: Vec<usize>,
}

impl TryFrom<TestFunctionSpec> for TestFunction {
    type Error = Error;

    fn try_from(spec: TestFunctionSpec) -> Result<Self> {
        let pair = SymmetricPairDescriptor::new(spec.instance);
        let sigma = spec
            .sigma
            .ok_or_else(|| Error::NotIntegrable("f is constant in X and not in L¹".into()))?;
        let mut f = TestFunction::new(&pair, sigma, spec.terms)?;
        f.description = spec.description;
        Ok(f)
    }
}

impl From<TestFunction> for TestFunctionSpec {
    fn from(f: TestFunction) -> Self {
        TestFunctionSpec { instance: f.pair.name, sigma: Some(f.sigma), terms: f.terms, description: f.description }
    }
}

/// `He_n(t)` for `n = 0..=n_max`.
pub fn hermite_all(n_max: u32, t: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    if n_max >= 1 {
        out.push(t);
    }
    for n in 1..n_max as usize {
        out.push(t * out[n] - n as f64 * out[n - 1]);
    }
    out
}

/// `sup_t |He_n(t)| e^{−t²/2}`.
pub fn hermite_gaussian_sup(n: u32) -> f64 {
    let g = |t: f64| hermite_all(n, t)[n as usize].abs() * (-0.5 * t * t).exp();
    let top = 2.0 * (n as f64 + 1.0).sqrt() + 2.0;
    let steps = 4000;
    let (mut best_t, mut best) = (0.0, g(0.0));
    for i in 1..=steps {
        let t = top * i as f64 / steps as f64;
        let v = g(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let h = top / steps as f64;
    let (mut a, mut b) = ((best_t - h).max(0.0), best_t + h);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(g(0.5 * (a + b)))
}

/// `Γ((a+1)/2)` for a non-negative integer `a`.
fn half_gamma(a: u32) -> f64 {
    let mut z = if a % 2 == 0 { 0.5 } else { 1.0 };
    let mut v = if a % 2 == 0 { std::f64::consts::PI.sqrt() } else { 1.0 };
    while z < (a as f64 + 1.0) / 2.0 - 1e-12 {
        v *= z;
        z += 1.0;
    }
    v
}

impl TestFunction {
    pub fn new(pair: &SymmetricPairDescriptor, sigma: f64, terms: Vec<Term>) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::NotIntegrable("f is constant in X and not in L¹".into()));
        }
        if sigma <= 0.0 {
            return Err(Error::InvalidInput(format!("decay scale must be positive, got {sigma}")));
        }
        for t in &terms {
            if !pair.k.admits(&t.lambda) {
                return Err(Error::InvalidInput(format!("{} is not an irrep of {}", t.lambda, pair.k)));
            }
            let d = pair.k.dim(&t.lambda);
            if t.row >= d || t.col >= d {
                return Err(Error::InvalidInput(format!("entry ({}, {}) outside a {d}-dimensional irrep", t.row, t.col)));
            }
            if t.exponents.len() != pair.dim_p {
                return Err(Error::InvalidInput(format!(
                    "{} exponents given, p has dimension {}",
                    t.exponents.len(),
                    pair.dim_p
                )));
            }
            if !t.coefficient.re.is_finite() || !t.coefficient.im.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
        }
        let mut lambdas: Vec<IrrepLabel> = terms.iter().map(|t| t.lambda.clone()).collect();
        lambdas.sort();
        lambdas.dedup();
        let term_lambda = terms.iter().map(|t| lambdas.binary_search(&t.lambda).expect("listed")).collect();
        Ok(Self { pair: pair.clone(), sigma, terms, description: None, lambdas, term_lambda })
    }

    /// `c · D^λ_{row,col}(k) · e^{−|X|²/(2σ²)}`.
    pub fn gaussian_term(pair: &SymmetricPairDescriptor, coefficient: Complex64, lambda: IrrepLabel, row: usize, col: usize) -> Term {
        Term { coefficient, lambda, row, col, exponents: vec![0; pair.dim_p] }
    }

    pub fn zero(pair: &SymmetricPairDescriptor) -> Self {
        Self {
            pair: pair.clone(),
            sigma: 1.0,
            terms: Vec::new(),
            description: Some("zero".into()),
            lambdas: Vec::new(),
            term_lambda: Vec::new(),
        }
    }

    /// `f + g` for test functions sharing the instance and decay scale.
    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        if self.pair.name != other.pair.name {
            return Err(Error::MixedInstance(self.pair.name.to_string(), other.pair.name.to_string()));
        }
        if (self.sigma - other.sigma).abs() > 0.0 && !(self.terms.is_empty() || other.terms.is_empty()) {
            return Err(Error::InvalidInput(format!("decay scales differ: {} and {}", self.sigma, other.sigma)));
        }
        let sigma = if self.terms.is_empty() { other.sigma } else { self.sigma };
        TestFunction::new(&self.pair, sigma, [self.terms.clone(), other.terms.clone()].concat())
    }

    /// `c · f`.
    pub fn scaled(&self, c: Complex64) -> TestFunction {
        let terms = self.terms.iter().map(|t| Term { coefficient: t.coefficient * c, ..t.clone() }).collect();
        TestFunction::new(&self.pair, self.sigma, terms).expect("scaling keeps a valid function")
    }

    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = Some(text.into());
        self
    }

    pub fn pair(&self) -> &SymmetricPairDescriptor {
        &self.pair
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn description(&self) -> String {
        self.description.clone().unwrap_or_else(|| format!("{} terms, sigma = {}", self.terms.len(), self.sigma))
    }

    /// Largest K-type weight among the terms.
    pub fn bandlimit(&self) -> u32 {
        self.terms.iter().map(|t| t.lambda.weight()).max().unwrap_or(0)
    }

    /// Total polynomial degree of the spatial factors.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exponents.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// `ĝ(ξ) = ∫ X^α e^{−|X|²/(2σ²)} e^{i⟨ξ,X⟩} dX`.
    pub fn spatial_fourier(&self, exponents: &[u32], xi: &[f64]) -> Complex64 {
        let s = self.sigma;
        let mut v = Complex64::from((2.0 * std::f64::consts::PI).sqrt().powi(xi.len() as i32) * s.powi(xi.len() as i32));
        let mut r2 = 0.0;
        for (&a, &x) in exponents.iter().zip(xi) {
            let t = s * x;
            r2 += t * t;
            if a > 0 {
                v *= Complex64::new(0.0, s).powu(a) * hermite_all(a, t)[a as usize];
            }
        }
        v * (-0.5 * r2).exp()
    }

    /// `X^α e^{−|X|²/(2σ²)}`.
    pub fn spatial(&self, exponents: &[u32], x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        exponents.iter().zip(x).map(|(&a, &v)| v.powi(a as i32)).product::<f64>()
            * (-r2 / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// `f(k, X)`.
    pub fn value(&self, k: &GroupElement, x: &[f64]) -> Complex64 {
        let ds = self.pair.k.irrep_matrices(&self.lambdas, k);
        self.terms
            .iter()
            .zip(&self.term_lambda)
            .map(|(t, &li)| t.coefficient * ds[li][(t.row, t.col)] * self.spatial(&t.exponents, x))
            .sum()
    }

    /// `Σ |c| · ‖D_{rs}‖_∞ · ‖ĝ‖_∞`, an upper bound for `‖f̂²‖_∞`.
    pub fn sup_norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm() * self.spatial_fourier_sup(&t.exponents)).sum()
    }

    /// `‖ĝ‖_∞` for the spatial factor with the given exponents.
    pub fn spatial_fourier_sup(&self, exponents: &[u32]) -> f64 {
        let s = self.sigma;
        let n = exponents.len() as i32;
        (2.0 * std::f64::consts::PI).sqrt().powi(n)
            * s.powi(n)
            * exponents.iter().map(|&a| s.powi(a as i32) * hermite_gaussian_sup(a)).product::<f64>()
    }

    /// Upper bound for `‖f‖_{L¹(G₀)}` from `|D_{rs}| ≤ 1`.
    pub fn l1_norm_bound(&self) -> f64 {
        let s = self.sigma;
        self.terms
            .iter()
            .map(|t| {
                t.coefficient.norm()
                    * t.exponents
                        .iter()
                        .map(|&a| (2.0 * s * s).powf((a as f64 + 1.0) / 2.0) * half_gamma(a))
                        .product::<f64>()
            })
            .sum()
    }

    /// Estimate of `‖f̂²‖_∞` from a grid search with local refinement; a
    /// lower bound for the true value that never exceeds
    /// [`sup_norm_bound`](Self::sup_norm_bound).
    pub fn sup_norm(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        super::sup::estimate(self).min(self.sup_norm_bound())
    }
}

impl PartialFourier for TestFunction {
    fn instance(&self) -> InstanceName {
        self.pair.name
    }

    fn eval(&self, k: &GroupElement, xi: &[f64]) -> Complex64 {
        let ds = self.pair.k.irrep_matrices(&self.lambdas, k);
        self.terms
            .iter()
            .zip(&self.term_lambda)
            .map(|(t, &li)| t.coefficient * ds[li][(t.row, t.col)] * self.spatial_fourier(&t.exponents, xi))
            .sum()
    }

    fn k_bandlimit(&self) -> u32 {
        self.bandlimit()
    }

    fn xi_degree(&self) -> u32 {
        self.degree()
    }

    fn sup_norm(&self) -> f64 {
        TestFunction::sup_norm(self)
    }

    fn as_test_function(&self) -> Option<&TestFunction> {
        Some(self)
    }

    fn describe(&self) -> String {
        self.description()
    }
}
