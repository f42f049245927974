//! Verification plans: which grids feed which condition, and the
//! end-to-end membership report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{self, path_points};
use super::{ConditionReport, ConditionVerdict, Thresholds};
use crate::dual::{make_dual_point, DualPoint, RawDualPoint, Stratum};
use crate::fourier::{sample_field, FourierSettings, OperatorFieldSample, PartialFourier};
use crate::group::IrrepLabel;
use crate::pair::{InstanceName, SymmetricPairDescriptor};
use crate::{Error, Result};

/// Straight path `start → end` sampled at `points` equispaced points with a
/// fixed stabilizer irrep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityPath {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub points: usize,
    pub label: IrrepLabel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuDecayGrid {
    pub h: Vec<f64>,
    pub labels: Vec<IrrepLabel>,
}

/// `H_j = H₀ 2^{−j}` for `j = 0..=levels`, evaluated at truncation
/// `lambda_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HToZeroLadder {
    pub h0: Vec<f64>,
    pub levels: u32,
    pub labels: Vec<IrrepLabel>,
    pub lambda_max: u32,
}

impl HToZeroLadder {
    pub fn heights(&self) -> Vec<Vec<f64>> {
        (0..=self.levels).map(|j| self.h0.iter().map(|x| x * 0.5f64.powi(j as i32)).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationPlan {
    pub instance: InstanceName,
    /// Truncation for the condition 1–3 grids.
    pub lambda_max: u32,
    pub compactness: Vec<RawDualPoint>,
    pub continuity: Vec<ContinuityPath>,
    pub mu_decay: Vec<MuDecayGrid>,
    pub h_to_zero: Vec<HToZeroLadder>,
    /// `Γ₂` grid: every K-type of weight at most this.
    pub lambda_decay_max: u32,
    /// Use the field's bandlimit in condition 5 when it is known.
    #[serde(default = "yes")]
    pub use_bandlimit: bool,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// Quadrature order for every induced grid; `None` picks it from the
    /// field and the truncation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

fn yes() -> bool {
    true
}

fn charges(range: std::ops::RangeInclusive<i64>) -> Vec<IrrepLabel> {
    range.map(IrrepLabel::Charge).collect()
}

fn wall_charges(range: std::ops::RangeInclusive<i64>) -> Vec<IrrepLabel> {
    range.map(|a| IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Charge(a)])).collect()
}

impl VerificationPlan {
    /// Default grids for each shipped instance.
    pub fn default_for(instance: InstanceName) -> Self {
        let raw = |h: Vec<f64>, label: IrrepLabel| RawDualPoint { h, label };
        match instance {
            InstanceName::M2 => Self {
                instance,
                lambda_max: 6,
                compactness: [0.5, 1.0, 1.5, 2.0, 2.5].iter().map(|h| raw(vec![*h], IrrepLabel::Trivial)).collect(),
                continuity: vec![ContinuityPath { start: vec![1.0], end: vec![2.0], points: 9, label: IrrepLabel::Trivial }],
                mu_decay: vec![MuDecayGrid { h: vec![3.0], labels: vec![IrrepLabel::Trivial] }],
                h_to_zero: vec![HToZeroLadder { h0: vec![1.0], levels: 8, labels: vec![IrrepLabel::Trivial], lambda_max: 5 }],
                lambda_decay_max: 8,
                use_bandlimit: true,
                thresholds: Thresholds::default(),
                order: None,
            },
            InstanceName::M3 => Self {
                instance,
                lambda_max: 8,
                compactness: [0.5, 2.5]
                    .iter()
                    .flat_map(|h| charges(-3..=3).into_iter().map(move |l| raw(vec![*h], l)))
                    .collect(),
                continuity: vec![ContinuityPath { start: vec![1.0], end: vec![2.0], points: 9, label: IrrepLabel::Charge(1) }],
                mu_decay: vec![MuDecayGrid { h: vec![3.0], labels: charges(-6..=6) }],
                h_to_zero: vec![HToZeroLadder { h0: vec![1.0], levels: 8, labels: charges(0..=4), lambda_max: 5 }],
                lambda_decay_max: 8,
                use_bandlimit: true,
                thresholds: Thresholds::default(),
                order: None,
            },
            InstanceName::M2xM2 => {
                let regular = IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Trivial]);
                let mut compactness = vec![raw(vec![0.5, 0.7], regular.clone()), raw(vec![2.5, 1.5], regular.clone())];
                compactness.extend(wall_charges(-2..=2).into_iter().map(|l| raw(vec![2.5, 0.0], l)));
                Self {
                    instance,
                    lambda_max: 3,
                    compactness,
                    continuity: vec![
                        ContinuityPath { start: vec![1.0, 0.5], end: vec![2.0, 1.0], points: 9, label: regular.clone() },
                        ContinuityPath {
                            start: vec![1.0, 0.0],
                            end: vec![2.0, 0.0],
                            points: 9,
                            label: IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Charge(1)]),
                        },
                    ],
                    mu_decay: vec![MuDecayGrid { h: vec![3.0, 0.0], labels: wall_charges(-3..=3) }],
                    h_to_zero: vec![
                        HToZeroLadder { h0: vec![1.0, 0.5], levels: 8, labels: vec![regular], lambda_max: 3 },
                        HToZeroLadder { h0: vec![1.0, 0.0], levels: 8, labels: wall_charges(0..=1), lambda_max: 3 },
                    ],
                    lambda_decay_max: 4,
                    use_bandlimit: true,
                    thresholds: Thresholds::default(),
                    order: None,
                }
            }
        }
    }

    /// Dual points per truncation: `(Λ, points)` groups for `Γ₀ ⊔ Γ₁`, then
    /// the `Γ₂` grid.
    pub fn grids(&self, pair: &SymmetricPairDescriptor) -> Result<(Vec<(u32, Vec<DualPoint>)>, Vec<DualPoint>)> {
        if pair.name != self.instance {
            return Err(Error::MixedInstance(pair.name.to_string(), self.instance.to_string()));
        }
        let mut groups: Vec<(u32, Vec<DualPoint>)> = Vec::new();
        let mut push = |lambda_max: u32, p: DualPoint| {
            if !p.is_induced() {
                return;
            }
            let slot = match groups.iter().position(|(l, _)| *l == lambda_max) {
                Some(i) => &mut groups[i].1,
                None => {
                    groups.push((lambda_max, Vec::new()));
                    &mut groups.last_mut().expect("just pushed").1
                }
            };
            if !slot.contains(&p) {
                slot.push(p);
            }
        };
        for raw in &self.compactness {
            push(self.lambda_max, make_dual_point(pair, raw)?);
        }
        for path in &self.continuity {
            for (_, p) in path_points(pair, path)? {
                push(self.lambda_max, p);
            }
        }
        for grid in &self.mu_decay {
            for label in &grid.labels {
                push(self.lambda_max, make_dual_point(pair, &RawDualPoint { h: grid.h.clone(), label: label.clone() })?);
            }
        }
        for ladder in &self.h_to_zero {
            for h in ladder.heights() {
                for label in &ladder.labels {
                    push(ladder.lambda_max, make_dual_point(pair, &RawDualPoint { h: h.clone(), label: label.clone() })?);
                }
            }
        }
        let lambda_top = self.h_to_zero.iter().map(|l| l.lambda_max).fold(self.lambda_decay_max, u32::max);
        let gamma2 = pair
            .k
            .irreps(lambda_top)
            .into_iter()
            .map(|label| DualPoint { instance: pair.name, stratum: Stratum::KType, h: vec![0.0; pair.rank], label })
            .collect();
        Ok((groups, gamma2))
    }

    /// Samples `𝓕(f)` on every grid of the plan.
    pub fn sample(&self, f: &dyn PartialFourier, pair: &SymmetricPairDescriptor) -> Result<OperatorFieldSample> {
        let (groups, gamma2) = self.grids(pair)?;
        let settings = |lambda_max| FourierSettings { order: self.order, ..FourierSettings::with_lambda_max(lambda_max) };
        let mut sample = sample_field(f, pair, &gamma2, &settings(self.lambda_max))?;
        for (lambda_max, points) in groups {
            let part = sample_field(f, pair, &points, &settings(lambda_max))?;
            sample.entries.extend(part.entries);
        }
        Ok(sample)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub instance: InstanceName,
    pub description: String,
    pub verdict: ConditionVerdict,
    /// Ordered by condition id.
    pub reports: Vec<ConditionReport>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.verdict == ConditionVerdict::Pass
    }

    pub fn condition(&self, id: u8) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.condition == id)
    }

    /// Ids of the failing conditions.
    pub fn failed_conditions(&self) -> Vec<u8> {
        self.reports.iter().filter(|r| !r.passed()).map(|r| r.condition).collect()
    }
}

fn merge_all(id: u8, reports: Vec<ConditionReport>, thresholds: &Thresholds) -> ConditionReport {
    reports.into_iter().reduce(ConditionReport::merge).unwrap_or_else(|| {
        let mut r = ConditionReport::new(id, vec![], vec![("abs_floor", thresholds.abs_floor)]);
        r.note = Some("no grid points for this condition".into());
        r
    })
}

fn run_condition(
    id: u8,
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    plan: &VerificationPlan,
) -> Result<ConditionReport> {
    let t = &plan.thresholds;
    let l = Some(plan.lambda_max);
    let reports = match id {
        1 => {
            let points = plan.compactness.iter().map(|r| make_dual_point(pair, r)).collect::<Result<Vec<_>>>()?;
            vec![checks::check_compactness_proxy(pair, sample, &points, l, t)?]
        }
        2 => plan.continuity.iter().map(|p| checks::check_continuity(pair, sample, p, l, t)).collect::<Result<_>>()?,
        3 => plan.mu_decay.iter().map(|g| checks::check_mu_decay(pair, sample, g, l, t)).collect::<Result<_>>()?,
        4 => plan.h_to_zero.iter().map(|g| checks::check_h_to_zero(pair, sample, g, t)).collect::<Result<_>>()?,
        5 => {
            let bandlimit = plan.use_bandlimit.then_some(sample.metadata.bandlimit);
            vec![checks::check_lambda_decay(pair, sample, plan.lambda_decay_max, bandlimit, t)?]
        }
        _ => unreachable!("condition ids are 1..=5"),
    };
    Ok(merge_all(id, reports, t))
}

/// Runs all five conditions on a sampled field; the checks run in parallel
/// and are reported in condition order.
pub fn verify_field(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    plan: &VerificationPlan,
) -> Result<MembershipReport> {
    if sample.instance != plan.instance || pair.name != plan.instance {
        return Err(Error::MixedInstance(plan.instance.to_string(), sample.instance.to_string()));
    }
    let reports =
        (1..=5u8).into_par_iter().map(|id| run_condition(id, pair, sample, plan)).collect::<Result<Vec<_>>>()?;
    let verdict = if reports.iter().all(ConditionReport::passed) { ConditionVerdict::Pass } else { ConditionVerdict::Fail };
    Ok(MembershipReport { instance: plan.instance, description: sample.metadata.description.clone(), verdict, reports })
}

/// Samples `𝓕(f)` on the plan's grids and verifies it.
pub fn verify_membership(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    plan: &VerificationPlan,
) -> Result<(MembershipReport, OperatorFieldSample)> {
    let sample = plan.sample(f, pair)?;
    let report = verify_field(pair, &sample, plan)?;
    Ok((report, sample))
}
