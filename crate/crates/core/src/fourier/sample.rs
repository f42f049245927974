//! Sampled operator fields `γ ↦ 𝓕(f)(γ)` on finite grids of the dual.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pi_matrix, tau_matrix, FourierSettings, PartialFourier, TruncatedOperator};
use crate::dual::{DualPoint, Stratum};
use crate::pair::{InstanceName, SymmetricPairDescriptor};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldEntry {
    pub point: DualPoint,
    pub operator: TruncatedOperator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMetadata {
    pub description: String,
    pub lambda_max: u32,
    pub order: Option<usize>,
    pub bandlimit: u32,
    /// `‖f̂²‖_∞` estimate, or `None` for hand-built fields.
    pub sup_norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFieldSample {
    pub instance: InstanceName,
    pub entries: Vec<FieldEntry>,
    pub metadata: FieldMetadata,
}

impl OperatorFieldSample {
    pub fn get(&self, point: &DualPoint) -> Option<&TruncatedOperator> {
        self.entries.iter().find(|e| e.point == *point).map(|e| &e.operator)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn operator_norms(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.operator.operator_norm()).collect()
    }
}

/// Evaluates `𝓕(f)` on every grid point: `π_{(μ,H)}(f)` on `Γ₀ ⊔ Γ₁`,
/// `τ_λ(f)` on `Γ₂`.
pub fn sample_field(
    f: &dyn PartialFourier,
    pair: &SymmetricPairDescriptor,
    grid: &[DualPoint],
    settings: &FourierSettings,
) -> Result<OperatorFieldSample> {
    if let Some(p) = grid.iter().find(|p| p.instance != pair.name) {
        return Err(Error::MixedInstance(pair.name.to_string(), p.instance.to_string()));
    }
    let entries = grid
        .par_iter()
        .map(|p| {
            let operator = match p.stratum {
                Stratum::KType => tau_matrix(f, pair, &p.label)?,
                _ => pi_matrix(f, pair, p, settings)?,
            };
            Ok(FieldEntry { point: p.clone(), operator })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorFieldSample {
        instance: pair.name,
        entries,
        metadata: FieldMetadata {
            description: f.describe(),
            lambda_max: settings.lambda_max,
            order: settings.order,
            bandlimit: f.k_bandlimit(),
            sup_norm: Some(f.sup_norm()),
        },
    })
}
