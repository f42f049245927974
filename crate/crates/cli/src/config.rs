//! Scenario files: a versioned JSON document naming an instance, a test
//! function, grids, cutoffs and tolerance overrides.

use std::collections::BTreeMap;
use std::fmt;

use cartan_core::dual::ConvergenceOptions;
use cartan_core::fourier::Term;
use cartan_core::verifier::{path_points, ContinuityPath, HToZeroLadder, MuDecayGrid};
use cartan_core::{
    build_instance, make_dual_point, verifier::bundled_test_functions, DualPoint, RawDualPoint,
    SymmetricPairDescriptor, TestFunction, VerificationPlan,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Either a shipped test function, by description, or explicit terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionConfig {
    Bundled(String),
    Explicit {
        sigma: f64,
        terms: Vec<Term>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        description: Option<String>,
    },
}

/// Grid overrides; an absent field keeps the instance default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compactness: Option<Vec<RawDualPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<Vec<ContinuityPath>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_decay: Option<Vec<MuDecayGrid>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_to_zero: Option<Vec<HToZeroLadder>>,
    /// Top K-type weight of the `Γ₂` grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_decay_max: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cutoffs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_order: Option<usize>,
}

/// A finite sequence of dual points and a candidate limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceQuery {
    pub name: String,
    pub sequence: Vec<RawDualPoint>,
    pub limit: RawDualPoint,
    /// Expected verdict; a mismatch fails the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<cartan_core::dual::Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<ConvergenceOptions>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    /// Instance name as written; checked during validation.
    pub instance: String,
    pub test_function: FunctionConfig,
    #[serde(default)]
    pub grids: GridConfig,
    #[serde(default)]
    pub cutoffs: Cutoffs,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceQuery>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

/// Every problem found in a config, each prefixed by its field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<String>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario:")?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

/// A validated query with its points in canonical form.
#[derive(Clone, Debug)]
pub struct ResolvedQuery {
    pub query: ConvergenceQuery,
    pub sequence: Vec<DualPoint>,
    pub limit: DualPoint,
}

/// A config that passed validation, ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub pair: SymmetricPairDescriptor,
    pub function: TestFunction,
    pub plan: VerificationPlan,
    pub queries: Vec<ResolvedQuery>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks instance, test function, grid points, cutoffs and tolerances,
    /// collecting every error rather than stopping at the first.
    pub fn validate(&self) -> Result<Scenario, ValidationErrors> {
        let mut errs = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errs.push(format!("schema_version: expected {SCHEMA_VERSION}, got {}", self.schema_version));
        }
        let pair = match build_instance(&self.instance) {
            Ok(p) => p,
            Err(e) => {
                errs.push(format!("instance: {e}"));
                return Err(ValidationErrors(errs));
            }
        };
        let function = self.resolve_function(&pair, &mut errs);
        let plan = self.resolve_plan(&pair, &mut errs);
        let queries = self.resolve_queries(&pair, &mut errs);
        if !errs.is_empty() {
            return Err(ValidationErrors(errs));
        }
        Ok(Scenario {
            config: self.clone(),
            pair,
            function: function.expect("no errors"),
            plan,
            queries,
        })
    }

    fn resolve_function(&self, pair: &SymmetricPairDescriptor, errs: &mut Vec<String>) -> Option<TestFunction> {
        match &self.test_function {
            FunctionConfig::Bundled(name) => {
                let all = bundled_test_functions(pair).expect("bundled functions build");
                let found = all.iter().find(|f| f.description() == *name).cloned();
                if found.is_none() {
                    let names: Vec<String> = all.iter().map(|f| format!("{:?}", f.description())).collect();
                    errs.push(format!(
                        "test_function.bundled: no function {name:?} for {}; available: {}",
                        pair.name,
                        names.join(", ")
                    ));
                }
                found
            }
            FunctionConfig::Explicit { sigma, terms, description } => {
                match TestFunction::new(pair, *sigma, terms.clone()) {
                    Ok(f) => Some(match description {
                        Some(d) => f.with_description(d.clone()),
                        None => f,
                    }),
                    Err(e) => {
                        errs.push(format!("test_function.explicit: {e}"));
                        None
                    }
                }
            }
        }
    }

    fn resolve_plan(&self, pair: &SymmetricPairDescriptor, errs: &mut Vec<String>) -> VerificationPlan {
        let mut plan = VerificationPlan::default_for(pair.name);
        let g = &self.grids;
        if let Some(v) = &g.compactness {
            plan.compactness = v.clone();
        }
        if let Some(v) = &g.continuity {
            plan.continuity = v.clone();
        }
        if let Some(v) = &g.mu_decay {
            plan.mu_decay = v.clone();
        }
        if let Some(v) = &g.h_to_zero {
            plan.h_to_zero = v.clone();
        }
        if let Some(l) = g.lambda_decay_max {
            positive(errs, "grids.lambda_decay_max", l as f64);
            plan.lambda_decay_max = l;
        }
        if let Some(l) = self.cutoffs.lambda_max {
            positive(errs, "cutoffs.lambda_max", l as f64);
            plan.lambda_max = l;
        }
        if let Some(o) = self.cutoffs.quadrature_order {
            positive(errs, "cutoffs.quadrature_order", o as f64);
            plan.order = Some(o);
        }
        for (key, value) in &self.tolerances {
            if let Err(e) = plan.thresholds.set(key, *value) {
                errs.push(format!("tolerances.{key}: {e}"));
            }
        }
        let point = |errs: &mut Vec<String>, field: String, raw: &RawDualPoint| {
            if let Err(e) = make_dual_point(pair, raw) {
                errs.push(format!("{field}: {e}"));
            }
        };
        for (i, raw) in plan.compactness.iter().enumerate() {
            point(errs, format!("grids.compactness[{i}]"), raw);
        }
        for (i, path) in plan.continuity.iter().enumerate() {
            if let Err(e) = path_points(pair, path) {
                errs.push(format!("grids.continuity[{i}]: {e}"));
            }
        }
        for (i, grid) in plan.mu_decay.iter().enumerate() {
            if grid.labels.is_empty() {
                errs.push(format!("grids.mu_decay[{i}].labels: at least one label is required"));
            }
            for (j, label) in grid.labels.iter().enumerate() {
                point(errs, format!("grids.mu_decay[{i}].labels[{j}]"), &RawDualPoint { h: grid.h.clone(), label: label.clone() });
            }
        }
        for (i, ladder) in plan.h_to_zero.iter().enumerate() {
            positive(errs, &format!("grids.h_to_zero[{i}].lambda_max"), ladder.lambda_max as f64);
            positive(errs, &format!("grids.h_to_zero[{i}].levels"), ladder.levels as f64);
            if ladder.labels.is_empty() {
                errs.push(format!("grids.h_to_zero[{i}].labels: at least one label is required"));
            }
            if ladder.h0.iter().all(|x| x.abs() <= pair.wall_tolerance) {
                errs.push(format!("grids.h_to_zero[{i}].h0: must be nonzero"));
                continue;
            }
            for (j, label) in ladder.labels.iter().enumerate() {
                for h in ladder.heights() {
                    let before = errs.len();
                    point(errs, format!("grids.h_to_zero[{i}].labels[{j}]"), &RawDualPoint { h, label: label.clone() });
                    if errs.len() > before {
                        break;
                    }
                }
            }
        }
        plan
    }

    fn resolve_queries(&self, pair: &SymmetricPairDescriptor, errs: &mut Vec<String>) -> Vec<ResolvedQuery> {
        let mut out = Vec::new();
        for (i, q) in self.convergence.iter().enumerate() {
            let before = errs.len();
            if q.sequence.is_empty() {
                errs.push(format!("convergence[{i}].sequence: must not be empty"));
            }
            let sequence: Vec<DualPoint> = q
                .sequence
                .iter()
                .enumerate()
                .filter_map(|(j, raw)| match make_dual_point(pair, raw) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        errs.push(format!("convergence[{i}].sequence[{j}]: {e}"));
                        None
                    }
                })
                .collect();
            let limit = make_dual_point(pair, &q.limit).map_err(|e| errs.push(format!("convergence[{i}].limit: {e}")));
            if let Some(o) = &q.options {
                positive(errs, &format!("convergence[{i}].options.distance_tol"), o.distance_tol);
                if !(o.monotone_slack >= 0.0) {
                    errs.push(format!("convergence[{i}].options.monotone_slack: must be non-negative"));
                }
            }
            if let (Ok(limit), true) = (limit, errs.len() == before) {
                out.push(ResolvedQuery { query: q.clone(), sequence, limit });
            }
        }
        out
    }
}

fn positive(errs: &mut Vec<String>, field: &str, value: f64) {
    if !(value > 0.0) || !value.is_finite() {
        errs.push(format!("{field}: must be positive, got {value}"));
    }
}

/// Parses `key=value` from the command line.
pub fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("{:?} is not a number", v.trim()))?;
    Ok((k.trim().to_string(), v))
}
