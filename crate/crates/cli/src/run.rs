//! Executes a validated scenario: membership verification and convergence
//! queries.

use anyhow::Context;
use cartan_core::dual::{converges, ConvergenceCertificate, Verdict};
use cartan_core::{verify_membership, DualPoint, MembershipReport, OperatorFieldSample};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Scenario;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub name: String,
    pub limit: DualPoint,
    pub expect: Option<Verdict>,
    pub certificate: ConvergenceCertificate,
    pub as_expected: bool,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub scenario: String,
    pub report: MembershipReport,
    pub sample: OperatorFieldSample,
    pub convergence: Vec<ConvergenceRecord>,
}

impl RunOutcome {
    /// Membership passed and every convergence query met its expectation.
    pub fn passed(&self) -> bool {
        self.report.passed() && self.convergence.iter().all(|c| c.as_expected)
    }
}

pub fn execute(scenario: &Scenario) -> anyhow::Result<RunOutcome> {
    let (report, sample) = verify_membership(&scenario.function, &scenario.pair, &scenario.plan)
        .with_context(|| format!("verifying {:?}", scenario.function.description()))?;
    let convergence = scenario
        .queries
        .par_iter()
        .map(|q| {
            let options = q.query.options.unwrap_or_default();
            let certificate = converges(&scenario.pair, &q.sequence, &q.limit, &options)
                .with_context(|| format!("convergence query {:?}", q.query.name))?;
            let as_expected = q.query.expect.is_none_or(|v| v == certificate.verdict);
            Ok(ConvergenceRecord {
                name: q.query.name.clone(),
                limit: q.limit.clone(),
                expect: q.query.expect,
                certificate,
                as_expected,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(RunOutcome { scenario: scenario.config.name.clone(), report, sample, convergence })
}
