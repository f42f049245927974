//! Adversarial fields, one per condition, and the bundled test functions.
//!
//! Every fixture edits a Fourier sample only on grid points that the other
//! conditions of the default plans never read, so each one breaks exactly
//! its own condition.

use crate::dual::{DualPoint, Stratum};
use crate::fourier::{OperatorFieldSample, Term, TestFunction};
use crate::group::IrrepLabel;
use crate::pair::{InstanceName, SymmetricPairDescriptor};
use crate::{CMatrix, Complex64, Result};

fn same_h(p: &DualPoint, h: &[f64]) -> bool {
    p.is_induced() && p.h.len() == h.len() && p.h.iter().zip(h).all(|(a, b)| (a - b).abs() <= 1e-12)
}

fn edit(sample: &OperatorFieldSample, select: impl Fn(&DualPoint) -> bool, matrix: impl Fn(&CMatrix) -> CMatrix) -> OperatorFieldSample {
    let mut out = sample.clone();
    for e in out.entries.iter_mut().filter(|e| select(&e.point)) {
        e.operator = e.operator.with_matrix(matrix(&e.operator.matrix));
    }
    out.metadata.description = format!("{} (edited)", sample.metadata.description);
    out
}

fn unit_corner(m: &CMatrix) -> CMatrix {
    let mut e = CMatrix::zeros(m.nrows(), m.ncols());
    if !e.is_empty() {
        e[(0, 0)] = Complex64::new(1.0, 0.0);
    }
    e
}

/// Identity at every `Γ₀ ⊔ Γ₁` point over `h`: not compact.
pub fn identity_field(sample: &OperatorFieldSample, h: &[f64]) -> OperatorFieldSample {
    edit(sample, |p| same_h(p, h), |m| CMatrix::identity(m.nrows(), m.ncols()))
}

/// Adds `size · E₀₀` at the single point `(label, h)`.
pub fn jump_field(sample: &OperatorFieldSample, h: &[f64], label: &IrrepLabel, size: f64) -> OperatorFieldSample {
    edit(sample, |p| same_h(p, h) && p.label == *label, |m| m + unit_corner(m) * Complex64::new(size, 0.0))
}

/// `E₀₀` for every stabilizer irrep over `h`: norm one for all `μ`.
pub fn constant_mu_field(sample: &OperatorFieldSample, h: &[f64]) -> OperatorFieldSample {
    edit(sample, |p| same_h(p, h), unit_corner)
}

/// Identity on every K-type of weight above `above`.
pub fn constant_lambda_field(sample: &OperatorFieldSample, above: u32) -> OperatorFieldSample {
    edit(
        sample,
        |p| p.stratum == Stratum::KType && p.label.weight() > above,
        |m| CMatrix::identity(m.nrows(), m.ncols()),
    )
}

/// `f(k,X) = c·e^{−|X|²/(2σ²)}` with `c` chosen so that `f̂²(k,0) = 1`.
///
/// For large `σ` the transform is a narrow bump at `ξ = 0`, so
/// `π_{(μ,H)}(f)` drops to zero long before `H` reaches the ladder's end
/// while `π_{μ,0}(f)` keeps norm one on the trivial K-type.
pub fn sharp_bump(pair: &SymmetricPairDescriptor, sigma: f64) -> Result<TestFunction> {
    let c = ((2.0 * std::f64::consts::PI).sqrt() * sigma).powi(-(pair.dim_p as i32));
    let trivial = pair.k.irreps(0).into_iter().next().expect("trivial K-type");
    Ok(TestFunction::new(pair, sigma, vec![TestFunction::gaussian_term(pair, c.into(), trivial, 0, 0)])?
        .with_description(format!("sharp bump σ={sigma}")))
}

fn term(coefficient: f64, lambda: IrrepLabel, row: usize, col: usize, exponents: Vec<u32>) -> Term {
    Term { coefficient: Complex64::new(coefficient, 0.0), lambda, row, col, exponents }
}

/// Gaussian × trigonometric test functions shipped with each instance.
pub fn bundled_test_functions(pair: &SymmetricPairDescriptor) -> Result<Vec<TestFunction>> {
    use IrrepLabel::*;
    let mk = |sigma: f64, terms: Vec<Term>, name: &str| -> Result<TestFunction> {
        Ok(TestFunction::new(pair, sigma, terms)?.with_description(name))
    };
    match pair.name {
        InstanceName::M2 => Ok(vec![
            mk(0.4, vec![term(1.0, Charge(0), 0, 0, vec![0, 0]), term(0.5, Charge(1), 0, 0, vec![0, 0])], "m2 gaussian")?,
            mk(
                0.4,
                vec![term(1.0, Charge(2), 0, 0, vec![1, 0]), term(0.3, Charge(-1), 0, 0, vec![0, 1])],
                "m2 hermite charge 2",
            )?,
        ]),
        InstanceName::M3 => Ok(vec![
            mk(0.4, vec![term(1.0, Spin(0), 0, 0, vec![0, 0, 0]), term(0.5, Spin(1), 1, 1, vec![0, 0, 0])], "m3 gaussian")?,
            mk(
                0.4,
                vec![term(1.0, Spin(1), 0, 2, vec![0, 0, 1]), term(0.4, Spin(2), 2, 1, vec![1, 0, 0])],
                "m3 hermite spin 2",
            )?,
            mk(
                0.5,
                vec![term(1.0, Spin(3), 3, 3, vec![0, 0, 0]), term(0.5, Spin(2), 1, 2, vec![0, 0, 1])],
                "m3 bandlimit 3",
            )?,
        ]),
        InstanceName::M2xM2 => Ok(vec![
            mk(
                0.4,
                vec![
                    term(1.0, Tuple(vec![Charge(0), Charge(0)]), 0, 0, vec![0, 0, 0, 0]),
                    term(0.5, Tuple(vec![Charge(1), Charge(0)]), 0, 0, vec![0, 0, 0, 0]),
                ],
                "m2xm2 gaussian",
            )?,
            mk(
                0.4,
                vec![
                    term(1.0, Tuple(vec![Charge(0), Charge(1)]), 0, 0, vec![0, 0, 1, 0]),
                    term(0.3, Tuple(vec![Charge(-1), Charge(1)]), 0, 0, vec![1, 0, 0, 0]),
                ],
                "m2xm2 hermite",
            )?,
        ]),
    }
}
