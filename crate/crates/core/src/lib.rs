//! Harmonic analysis on Cartan motion groups `G₀ = K ⋉ p`.
//!
//! The crate builds the three shipped symmetric-pair instances (`M2`, `M3`,
//! `M2xM2`), the representation theory of `K` and of the stabilizers `K_H`,
//! the stratified unitary dual with its Fell-topology convergence test, and
//! truncated operator matrices of the group Fourier transform. The verifier
//! checks the defining conditions of the operator-field algebra on sampled
//! fields.
//!
//! Module map:
//!
//! * [`group`]: compact groups, irreducible representations, Haar quadrature,
//!   branching multiplicities, Peter–Weyl bases of induced spaces.
//! * [`pair`]: symmetric-pair descriptors, Weyl chambers, orbits, stabilizers.
//! * [`dual`]: dual points `Γ₀ ⊔ Γ₁ ⊔ Γ₂` and sequence convergence.
//! * [`fourier`]: test functions, kernels, `π(f)`, `τ_λ(f)`, `π_{μ,0}(f)`.
//! * [`verifier`]: the five operator-field conditions and membership reports.

pub mod dual;
pub mod error;
pub mod fourier;
pub mod group;
pub mod pair;
pub mod verifier;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex dense matrix used for every operator in the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;

pub use dual::{converges, make_dual_point, ConvergenceCertificate, DualPoint, RawDualPoint, Stratum};
pub use fourier::{pi_matrix, sample_field, FourierSettings, OperatorFieldSample, PartialFourier, TestFunction, TruncatedOperator};
pub use group::{CompactGroup, GroupElement, IrrepLabel};
pub use pair::{build_instance, InstanceName, SymmetricPairDescriptor};
pub use verifier::{verify_field, verify_membership, ConditionReport, MembershipReport, Thresholds, VerificationPlan};
