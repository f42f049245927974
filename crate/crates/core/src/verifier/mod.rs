//! Numerical membership test for the operator-field algebra `𝒟`.
//!
//! A field `F` on the dual belongs to `𝒟` when
//!
//! 1. every `F(μ,H)` on `Γ₀ ⊔ Γ₁` is compact;
//! 2. `F` is norm continuous on each stratum;
//! 3. `‖F(μ,H)‖ → 0` as `|μ| → ∞` for fixed `H`;
//! 4. `‖F(μ,H) − F(μ,0)‖ → 0` as `H → 0`, uniformly in `μ`, where
//!    `F(μ,0) = ⊕_{λ≥μ} F(λ)`;
//! 5. `‖F(λ)‖ → 0` as `|λ| → ∞` on `Γ₂`.
//!
//! Sampled fields are checked against finite proxies of these conditions
//! with the thresholds in [`Thresholds`].

mod checks;
mod fixtures;
mod plan;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_compactness_proxy, check_continuity, check_h_to_zero, check_lambda_decay, check_mu_decay, field_at_zero,
    is_in_d0, path_points,
};
pub use fixtures::{bundled_test_functions, constant_lambda_field, constant_mu_field, identity_field, jump_field, sharp_bump};
pub use plan::{verify_field, verify_membership, ContinuityPath, HToZeroLadder, MembershipReport, MuDecayGrid, VerificationPlan};

/// All verdict thresholds in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Relative slack in `‖F‖²_HS ≤ d_μ ‖f̂²‖²_∞`.
    pub hs_slack: f64,
    /// Largest admissible HS-mass fraction in the top K-type band.
    pub tail_fraction: f64,
    /// Factor applied to the coarse Lipschitz estimate and halving ratio.
    pub continuity_factor: f64,
    /// `‖F(μ,H)‖` bound beyond `μ*`.
    pub mu_decay: f64,
    /// Bound on the final `δ_J` of an `H → 0` ladder.
    pub h_to_zero: f64,
    /// `‖F(λ)‖` bound beyond the bandlimit.
    pub lambda_decay_bandlimited: f64,
    /// Final `‖F(λ)‖` bound when no bandlimit is known.
    pub lambda_decay_general: f64,
    /// Norm below which a `Γ₂` entry counts as zero.
    pub d0: f64,
    /// Absolute tolerance added to difference inequalities.
    pub abs_floor: f64,
    /// Slack in monotonicity comparisons.
    pub monotone_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            hs_slack: 1e-6,
            tail_fraction: 1e-3,
            continuity_factor: 1.5,
            mu_decay: 1e-3,
            h_to_zero: 1e-2,
            lambda_decay_bandlimited: 1e-6,
            lambda_decay_general: 1e-3,
            d0: 1e-10,
            abs_floor: 1e-9,
            monotone_slack: 1e-12,
        }
    }
}

impl Thresholds {
    /// Sets a threshold by field name.
    pub fn set(&mut self, key: &str, value: f64) -> crate::Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(crate::Error::InvalidInput(format!("threshold {key} must be positive, got {value}")));
        }
        let slot = match key {
            "hs_slack" => &mut self.hs_slack,
            "tail_fraction" => &mut self.tail_fraction,
            "continuity_factor" => &mut self.continuity_factor,
            "mu_decay" => &mut self.mu_decay,
            "h_to_zero" => &mut self.h_to_zero,
            "lambda_decay_bandlimited" => &mut self.lambda_decay_bandlimited,
            "lambda_decay_general" => &mut self.lambda_decay_general,
            "d0" => &mut self.d0,
            "abs_floor" => &mut self.abs_floor,
            "monotone_slack" => &mut self.monotone_slack,
            _ => return Err(crate::Error::InvalidInput(format!("unknown threshold {key}"))),
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionVerdict {
    Pass,
    Fail,
}

/// One measured quantity and the inequality it must satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub quantity: String,
    /// Grid point or parameter description.
    pub at: String,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

impl Witness {
    pub fn at_most(quantity: &str, at: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { quantity: quantity.into(), at: at.into(), value, bound, holds: value <= bound }
    }
}

/// `(parameter, value)` series for plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub parameter: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub name: String,
    pub verdict: ConditionVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub witnesses: Vec<Witness>,
    pub thresholds: Vec<(String, f64)>,
    #[serde(default)]
    pub curves: Vec<Curve>,
}

impl ConditionReport {
    /// Verdict is `Pass` exactly when every witness holds.
    pub fn new(condition: u8, witnesses: Vec<Witness>, thresholds: Vec<(&str, f64)>) -> Self {
        let verdict =
            if witnesses.iter().all(|w| w.holds) { ConditionVerdict::Pass } else { ConditionVerdict::Fail };
        Self {
            condition,
            name: condition_name(condition).into(),
            verdict,
            note: None,
            witnesses,
            thresholds: thresholds.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            curves: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == ConditionVerdict::Pass
    }

    pub fn failing_witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.holds)
    }

    /// Merges reports of the same condition.
    pub fn merge(mut self, other: ConditionReport) -> Self {
        debug_assert_eq!(self.condition, other.condition);
        self.witnesses.extend(other.witnesses);
        self.curves.extend(other.curves);
        self.note = match (self.note.take(), other.note) {
            (Some(a), Some(b)) if a != b => Some(format!("{a}; {b}")),
            (a, b) => a.or(b),
        };
        self.verdict =
            if self.witnesses.iter().all(|w| w.holds) { ConditionVerdict::Pass } else { ConditionVerdict::Fail };
        self
    }
}

pub fn condition_name(id: u8) -> &'static str {
    match id {
        1 => "compactness",
        2 => "continuity",
        3 => "mu_decay",
        4 => "h_to_zero",
        5 => "lambda_decay",
        _ => "unknown",
    }
}
