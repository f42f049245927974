//! The five condition checkers on sampled fields.

use std::sync::Arc;

use super::plan::{ContinuityPath, HToZeroLadder, MuDecayGrid};
use super::{ConditionReport, Curve, Thresholds, Witness};
use crate::dual::{make_dual_point, stabilizer_of, DualPoint, RawDualPoint, Stratum};
use crate::fourier::{operator_norm, OperatorFieldSample, TruncatedOperator};
use crate::group::{peter_weyl_basis, CompactGroup, IrrepLabel, PeterWeylBasis};
use crate::pair::{ChamberStratum, SymmetricPairDescriptor};
use crate::{CMatrix, Error, Result};

fn describe(p: &DualPoint) -> String {
    let h: Vec<String> = p.h.iter().map(|x| format!("{x:.6}")).collect();
    format!("H=[{}] {}", h.join(","), p.label)
}

/// The sample's operator at `point`, restricted to truncation `lambda_max`
/// when given.
fn lookup<'a>(
    sample: &'a OperatorFieldSample,
    point: &DualPoint,
    lambda_max: Option<u32>,
) -> Result<&'a TruncatedOperator> {
    sample
        .entries
        .iter()
        .find(|e| e.point == *point && lambda_max.is_none_or(|l| e.operator.lambda_max == l))
        .map(|e| &e.operator)
        .ok_or_else(|| match point.stratum {
            Stratum::KType => Error::MissingGamma2Data(point.label.to_string()),
            _ => Error::InvalidInput(format!("field has no entry at {}", describe(point))),
        })
}

fn check_instance(pair: &SymmetricPairDescriptor, sample: &OperatorFieldSample) -> Result<()> {
    if sample.instance != pair.name {
        return Err(Error::MixedInstance(pair.name.to_string(), sample.instance.to_string()));
    }
    Ok(())
}

/// `‖F(μ,H)‖²_HS ≤ d_μ ‖f̂²‖²_∞` on every listed point (when the sup norm is
/// known) and HS mass in the top K-type band below `tail_fraction` of the
/// total.
pub fn check_compactness_proxy(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    points: &[DualPoint],
    lambda_max: Option<u32>,
    thresholds: &Thresholds,
) -> Result<ConditionReport> {
    check_instance(pair, sample)?;
    let mut witnesses = Vec::new();
    for p in points.iter().filter(|p| p.is_induced()) {
        let op = lookup(sample, p, lambda_max)?;
        let hs2 = op.hs_norm().powi(2);
        if let Some(sup) = sample.metadata.sup_norm {
            let d_mu = stabilizer_of(pair, p).group(pair).dim(&p.label) as f64;
            witnesses.push(Witness::at_most("hs_squared", describe(p), hs2, d_mu * sup * sup * (1.0 + thresholds.hs_slack)));
        }
        let weights = op.weights();
        let top = weights.iter().copied().max().unwrap_or(0);
        let mut tail = 0.0;
        for (i, wi) in weights.iter().enumerate() {
            for (j, wj) in weights.iter().enumerate() {
                if *wi == top || *wj == top {
                    tail += op.matrix[(i, j)].norm_sqr();
                }
            }
        }
        let floor = thresholds.abs_floor * thresholds.abs_floor;
        witnesses.push(Witness::at_most("top_band_mass", describe(p), tail, thresholds.tail_fraction * hs2 + floor));
    }
    Ok(ConditionReport::new(
        1,
        witnesses,
        vec![("hs_slack", thresholds.hs_slack), ("tail_fraction", thresholds.tail_fraction)],
    ))
}

/// Validated path points; the raw path may not touch another stratum.
pub fn path_points(pair: &SymmetricPairDescriptor, path: &ContinuityPath) -> Result<Vec<(Vec<f64>, DualPoint)>> {
    if path.points < 3 || path.points % 2 == 0 {
        return Err(Error::InvalidInput(format!("continuity path needs an odd number ≥ 3 of points, got {}", path.points)));
    }
    if path.start.len() != pair.rank || path.end.len() != pair.rank {
        return Err(Error::InvalidInput("continuity path endpoints have the wrong rank".into()));
    }
    let n = path.points;
    let raws: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            path.start.iter().zip(&path.end).map(|(a, b)| a + t * (b - a)).collect()
        })
        .collect();
    let stratum_of = |h: &[f64]| pair.classify_chamber_point(h).stratum;
    let signs = |h: &[f64]| -> Vec<i8> {
        (0..pair.positive_roots.len())
            .map(|r| {
                let v = pair.root_value(r, h);
                if v.abs() < pair.wall_tolerance {
                    0
                } else {
                    v.signum() as i8
                }
            })
            .collect()
    };
    let first = stratum_of(&raws[0]);
    let first_signs = signs(&raws[0]);
    for (i, h) in raws.iter().enumerate() {
        let same_stratum = match (&first, &stratum_of(h)) {
            (ChamberStratum::Regular, ChamberStratum::Regular) => true,
            (ChamberStratum::Wall(a), ChamberStratum::Wall(b)) => a == b,
            _ => false,
        };
        if !same_stratum || signs(h) != first_signs {
            return Err(Error::PathCrossesStrata { index: i });
        }
    }
    raws.into_iter()
        .map(|h| {
            let p = make_dual_point(pair, &RawDualPoint { h: h.clone(), label: path.label.clone() })?;
            Ok((h, p))
        })
        .collect()
}

fn difference_norm(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<f64> {
    if a.matrix.shape() != b.matrix.shape() {
        return Err(Error::InvalidInput("operators on different truncations".into()));
    }
    Ok(operator_norm(&(&a.matrix - &b.matrix)))
}

/// Two-scale Lipschitz test on a path of `2n+1` points.
///
/// The coarse slopes `‖F(p_{2i+2}) − F(p_{2i})‖ / |p_{2i+2} − p_{2i}|` give an
/// estimate `L`. Every fine slope must stay below `factor·L`, and every fine
/// difference below `factor` times half the coarse difference it refines.
pub fn check_continuity(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    path: &ContinuityPath,
    lambda_max: Option<u32>,
    thresholds: &Thresholds,
) -> Result<ConditionReport> {
    check_instance(pair, sample)?;
    let pts = path_points(pair, path)?;
    let ops = pts.iter().map(|(_, p)| lookup(sample, p, lambda_max)).collect::<Result<Vec<_>>>()?;
    let step = |i: usize, j: usize| -> f64 {
        pts[i].0.iter().zip(&pts[j].0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    let n = pts.len();
    let fine = (0..n - 1).map(|i| difference_norm(ops[i + 1], ops[i])).collect::<Result<Vec<_>>>()?;
    let coarse = (0..(n - 1) / 2).map(|i| difference_norm(ops[2 * i + 2], ops[2 * i])).collect::<Result<Vec<_>>>()?;
    let lipschitz = coarse.iter().enumerate().map(|(i, d)| d / step(2 * i, 2 * i + 2)).fold(0.0, f64::max);
    let c = thresholds.continuity_factor;
    let mut witnesses = Vec::new();
    let mut curve = Vec::new();
    for (i, d) in fine.iter().enumerate() {
        let s = step(i, i + 1);
        let at = format!("{} → {}", describe(&pts[i].1), describe(&pts[i + 1].1));
        witnesses.push(Witness::at_most("fine_slope", at.clone(), d / s, c * lipschitz + thresholds.abs_floor / s));
        witnesses.push(Witness::at_most("halving", at, *d, c * coarse[i / 2] / 2.0 + thresholds.abs_floor));
        curve.push([i as f64 + 0.5, d / s]);
    }
    let mut report = ConditionReport::new(
        2,
        witnesses,
        vec![("continuity_factor", c), ("abs_floor", thresholds.abs_floor)],
    );
    report.curves.push(Curve { name: format!("path {}", describe(&pts[0].1)), parameter: "segment".into(), points: curve });
    Ok(report)
}

/// Peak-then-decay test of `ℓ ↦ max_{|μ|=ℓ} ‖F(μ,H)‖` at fixed `H`.
///
/// With `μ*` the smallest level from which every sampled norm is below
/// `mu_decay`, the check requires that `μ*` exists within the grid and that
/// the level maxima never increase after their peak.
pub fn check_mu_decay(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    grid: &MuDecayGrid,
    lambda_max: Option<u32>,
    thresholds: &Thresholds,
) -> Result<ConditionReport> {
    check_instance(pair, sample)?;
    let thresholds_used = vec![("mu_decay", thresholds.mu_decay), ("abs_floor", thresholds.abs_floor)];
    let stab = pair.stabilizer(&grid.h);
    let stab_group = stab.group(pair);
    if stab_group == CompactGroup::Trivial || stab_group.irreps(1).len() <= 1 {
        let mut report = ConditionReport::new(3, vec![], thresholds_used);
        report.note = Some("stabilizer is trivial; condition holds vacuously".into());
        return Ok(report);
    }
    let mut levels: Vec<(u32, f64)> = Vec::new();
    for label in &grid.labels {
        let p = make_dual_point(pair, &RawDualPoint { h: grid.h.clone(), label: label.clone() })?;
        let norm = lookup(sample, &p, lambda_max)?.operator_norm();
        match levels.iter_mut().find(|(l, _)| *l == label.weight()) {
            Some(slot) => slot.1 = slot.1.max(norm),
            None => levels.push((label.weight(), norm)),
        }
    }
    if levels.is_empty() {
        return Err(Error::InvalidInput("μ-decay grid has no labels".into()));
    }
    levels.sort_by_key(|(l, _)| *l);
    let at = |l: u32| {
        let h: Vec<String> = grid.h.iter().map(|x| format!("{x:.6}")).collect();
        format!("H=[{}] |μ|={l}", h.join(","))
    };
    let mut witnesses = Vec::new();
    let peak = levels.iter().enumerate().fold(0, |best, (i, (_, n))| if *n > levels[best].1 { i } else { best });
    for w in levels[peak..].windows(2) {
        witnesses.push(Witness::at_most("monotone_after_peak", at(w[1].0), w[1].1, w[0].1 + thresholds.abs_floor));
    }
    let (top_level, top_norm) = *levels.last().expect("non-empty");
    witnesses.push(Witness::at_most("tail_norm", at(top_level), top_norm, thresholds.mu_decay));
    let mu_star = levels
        .iter()
        .rposition(|(_, n)| *n >= thresholds.mu_decay)
        .map_or(Some(levels[0].0), |i| levels.get(i + 1).map(|(l, _)| *l));
    let mut report = ConditionReport::new(3, witnesses, thresholds_used);
    report.note = Some(match mu_star {
        Some(m) => format!("μ* = {m}"),
        None => "no μ* within the sampled range".into(),
    });
    report.curves.push(Curve {
        name: at(0).replace("|μ|=0", "level maxima"),
        parameter: "|mu|".into(),
        points: levels.iter().map(|(l, n)| [*l as f64, *n]).collect(),
    });
    Ok(report)
}

/// `F(μ,0) = ⊕_{λ≥μ} F(λ)` on the Peter–Weyl basis of `point`, assembled
/// from the sample's own `Γ₂` entries; also returns its norm.
pub fn field_at_zero(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    point: &DualPoint,
    lambda_max: u32,
) -> Result<(TruncatedOperator, f64)> {
    check_instance(pair, sample)?;
    if !point.is_induced() {
        return Err(Error::InvalidInput("F(μ,0) needs a stabilizer irrep from Γ₀ or Γ₁".into()));
    }
    let stab = stabilizer_of(pair, point);
    let basis: Arc<PeterWeylBasis> = Arc::new(peter_weyl_basis(&pair.k, &stab.embedding, &point.label, lambda_max)?);
    let mut m = CMatrix::zeros(basis.len(), basis.len());
    let mut norm: f64 = 0.0;
    let mut order = 0;
    for lambda in basis.k_types() {
        let p = DualPoint { instance: pair.name, stratum: Stratum::KType, h: vec![0.0; pair.rank], label: lambda.clone() };
        let tau = lookup(sample, &p, None)?;
        let d = pair.k.dim(lambda);
        if tau.matrix.shape() != (d, d) {
            return Err(Error::InvalidInput(format!("Γ₂ entry at {lambda} has the wrong size")));
        }
        norm = norm.max(tau.operator_norm());
        order = order.max(tau.order);
        for b in basis.blocks.iter().filter(|b| b.lambda == *lambda) {
            m.view_mut((b.offset, b.offset), (d, d)).copy_from(&tau.matrix);
        }
    }
    let labels: Vec<IrrepLabel> = basis.block_index().into_iter().map(|(l, _, _)| l).collect();
    Ok((TruncatedOperator { lambda_max, order, labels, matrix: m, basis: Some(basis) }, norm))
}

/// `δ_j = ‖F(μ,H_j) − F(μ,0)‖` along `H_j = H₀ 2^{−j}` must be
/// non-increasing and end below `h_to_zero` for every sampled `μ`.
pub fn check_h_to_zero(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    ladder: &HToZeroLadder,
    thresholds: &Thresholds,
) -> Result<ConditionReport> {
    check_instance(pair, sample)?;
    let mut witnesses = Vec::new();
    let mut curves = Vec::new();
    let mut worst: f64 = 0.0;
    for label in &ladder.labels {
        let mut deltas = Vec::new();
        for (j, h) in ladder.heights().into_iter().enumerate() {
            let p = make_dual_point(pair, &RawDualPoint { h, label: label.clone() })?;
            if !p.is_induced() {
                return Err(Error::InvalidInput(format!("ladder point {j} lies in Γ₂; raise wall_tolerance or shorten the ladder")));
            }
            let op = lookup(sample, &p, Some(ladder.lambda_max))?;
            let (zero, _) = field_at_zero(pair, sample, &p, ladder.lambda_max)?;
            deltas.push((p, difference_norm(op, &zero)?));
        }
        for w in deltas.windows(2) {
            witnesses.push(Witness::at_most("non_increasing", describe(&w[1].0), w[1].1, w[0].1 + thresholds.monotone_slack));
        }
        let (last_p, last) = deltas.last().expect("ladder has points");
        witnesses.push(Witness::at_most("final_delta", describe(last_p), *last, thresholds.h_to_zero));
        worst = worst.max(*last);
        curves.push(Curve {
            name: format!("{label}"),
            parameter: "H".into(),
            points: deltas.iter().map(|(p, d)| [p.h.iter().map(|x| x * x).sum::<f64>().sqrt(), *d]).collect(),
        });
    }
    witnesses.push(Witness::at_most("uniform_final_delta", "max over μ", worst, thresholds.h_to_zero));
    let mut report = ConditionReport::new(
        4,
        witnesses,
        vec![("h_to_zero", thresholds.h_to_zero), ("monotone_slack", thresholds.monotone_slack)],
    );
    report.curves = curves;
    Ok(report)
}

/// `‖F(λ)‖` on all K-types up to `lambda_max`: below
/// `lambda_decay_bandlimited` beyond a known bandlimit, otherwise level
/// maxima non-increasing after their peak and ending below
/// `lambda_decay_general`.
pub fn check_lambda_decay(
    pair: &SymmetricPairDescriptor,
    sample: &OperatorFieldSample,
    lambda_max: u32,
    bandlimit: Option<u32>,
    thresholds: &Thresholds,
) -> Result<ConditionReport> {
    check_instance(pair, sample)?;
    let mut levels: Vec<(u32, f64)> = Vec::new();
    let mut witnesses = Vec::new();
    for lambda in pair.k.irreps(lambda_max) {
        let p = DualPoint { instance: pair.name, stratum: Stratum::KType, h: vec![0.0; pair.rank], label: lambda.clone() };
        let norm = lookup(sample, &p, None)?.operator_norm();
        if let Some(b) = bandlimit.filter(|b| lambda.weight() > *b) {
            witnesses.push(Witness::at_most(
                "beyond_bandlimit",
                format!("{lambda} (bandlimit {b})"),
                norm,
                thresholds.lambda_decay_bandlimited,
            ));
        }
        match levels.iter_mut().find(|(l, _)| *l == lambda.weight()) {
            Some(slot) => slot.1 = slot.1.max(norm),
            None => levels.push((lambda.weight(), norm)),
        }
    }
    levels.sort_by_key(|(l, _)| *l);
    if bandlimit.is_none() {
        let peak = levels.iter().enumerate().fold(0, |best, (i, (_, n))| if *n > levels[best].1 { i } else { best });
        for w in levels[peak..].windows(2) {
            witnesses.push(Witness::at_most(
                "monotone_after_peak",
                format!("|λ|={}", w[1].0),
                w[1].1,
                w[0].1 + thresholds.abs_floor,
            ));
        }
        if let Some((l, n)) = levels.last() {
            witnesses.push(Witness::at_most("tail_norm", format!("|λ|={l}"), *n, thresholds.lambda_decay_general));
        }
    }
    let mut report = ConditionReport::new(
        5,
        witnesses,
        vec![
            ("lambda_decay_bandlimited", thresholds.lambda_decay_bandlimited),
            ("lambda_decay_general", thresholds.lambda_decay_general),
        ],
    );
    report.curves.push(Curve {
        name: "K-type level maxima".into(),
        parameter: "|lambda|".into(),
        points: levels.iter().map(|(l, n)| [*l as f64, *n]).collect(),
    });
    Ok(report)
}

/// Whether every sampled `Γ₂` entry vanishes, i.e. the field lies in the
/// ideal `D₀` of fields vanishing on `Γ₂`.
pub fn is_in_d0(sample: &OperatorFieldSample, tolerance: f64) -> bool {
    sample.entries.iter().filter(|e| e.point.stratum == Stratum::KType).all(|e| e.operator.operator_norm() < tolerance)
}
