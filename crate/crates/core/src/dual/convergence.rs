//! Fell-topology convergence certificates for finite sequences of dual points.
//!
//! A finite prefix stands in for the infinite sequence. The label clause
//! (`[ρ|_{K_{H_n}} : ρ_n] > 0`, `K_{H_n} ⊆ K_H`) must hold on the final half,
//! and `H_n → H` is read as: the mean distance over the final quarter is
//! below `distance_tol` and distances are non-increasing there.

use serde::{Deserialize, Serialize};

use super::{canonical, distance, restricted_multiplicity, DualPoint};
use crate::pair::SymmetricPairDescriptor;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOptions {
    pub distance_tol: f64,
    /// Slack when comparing consecutive distances.
    pub monotone_slack: f64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self { distance_tol: 1e-6, monotone_slack: 1e-15 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub index: usize,
    /// `|H_n − H|` on dominant representatives.
    pub distance: f64,
    /// `[ρ|_{K_{H_n}} : ρ_n]`, `None` when `K_{H_n} ⊄ K_H`.
    pub multiplicity: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub verdict: Verdict,
    /// First index from which every element meets the label clause and
    /// distances are non-increasing.
    pub tail_index: Option<usize>,
    pub evidence: Vec<EvidenceRecord>,
}

pub fn converges(
    pair: &SymmetricPairDescriptor,
    sequence: &[DualPoint],
    limit: &DualPoint,
    options: &ConvergenceOptions,
) -> Result<ConvergenceCertificate> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    for p in sequence.iter().chain(std::iter::once(limit)) {
        if p.instance != pair.name {
            return Err(Error::MixedInstance(pair.name.to_string(), p.instance.to_string()));
        }
    }
    let (h_lim, _) = canonical(pair, limit);
    let evidence = sequence
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let (h, _) = canonical(pair, p);
            Ok(EvidenceRecord {
                index,
                distance: distance(&h, &h_lim),
                multiplicity: restricted_multiplicity(pair, limit, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = evidence.len();
    let label_ok = |r: &EvidenceRecord| r.multiplicity.is_some_and(|m| m > 0);
    let half = n / 2;
    let quarter = n - n.div_ceil(4);
    let labels = evidence[half..].iter().all(label_ok);
    let tail = &evidence[quarter..];
    let mean = tail.iter().map(|r| r.distance).sum::<f64>() / tail.len() as f64;
    let monotone = tail.windows(2).all(|w| w[1].distance <= w[0].distance + options.monotone_slack);
    let verdict = if labels && monotone && mean < options.distance_tol {
        Verdict::Converges
    } else {
        Verdict::Diverges
    };

    let mut tail_index = None;
    if verdict == Verdict::Converges {
        let mut start = n - 1;
        while start > 0
            && label_ok(&evidence[start - 1])
            && evidence[start].distance <= evidence[start - 1].distance + options.monotone_slack
        {
            start -= 1;
        }
        tail_index = Some(start);
    }
    Ok(ConvergenceCertificate { verdict, tail_index, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{in_neighborhood, make_dual_point, RawDualPoint};
    use crate::group::IrrepLabel;
    use crate::pair::build_instance;

    fn pt(pair: &SymmetricPairDescriptor, h: &[f64], label: IrrepLabel) -> DualPoint {
        make_dual_point(pair, &RawDualPoint { h: h.to_vec(), label }).unwrap()
    }

    fn geometric(pair: &SymmetricPairDescriptor, h: f64, labels: impl Fn(usize) -> IrrepLabel) -> Vec<DualPoint> {
        (0..40).map(|j| pt(pair, &[h + 0.5f64.powi(j as i32)], labels(j))).collect()
    }

    #[test]
    fn generic_limit_needs_the_same_label() {
        let m3 = build_instance("M3").unwrap();
        let lim = pt(&m3, &[1.0], IrrepLabel::Charge(1));
        let ok = converges(&m3, &geometric(&m3, 1.0, |_| IrrepLabel::Charge(1)), &lim, &Default::default()).unwrap();
        assert_eq!(ok.verdict, Verdict::Converges);
        assert_eq!(ok.tail_index, Some(0));
        let bad = converges(&m3, &geometric(&m3, 1.0, |_| IrrepLabel::Charge(2)), &lim, &Default::default()).unwrap();
        assert_eq!(bad.verdict, Verdict::Diverges);
        assert_eq!(bad.tail_index, None);
    }

    #[test]
    fn sequence_approaching_zero_reaches_k_types() {
        let m3 = build_instance("M3").unwrap();
        let seq: Vec<_> = (0..29).map(|j| pt(&m3, &[0.5f64.powi(j)], IrrepLabel::Charge(2))).collect();
        for (l, expect) in [(1, Verdict::Diverges), (2, Verdict::Converges), (5, Verdict::Converges)] {
            let lim = pt(&m3, &[0.0], IrrepLabel::Spin(l));
            assert_eq!(converges(&m3, &seq, &lim, &Default::default()).unwrap().verdict, expect, "l={l}");
        }
    }

    #[test]
    fn eventual_label_change_is_allowed() {
        let m3 = build_instance("M3").unwrap();
        let lim = pt(&m3, &[1.0], IrrepLabel::Charge(-3));
        let seq = geometric(&m3, 1.0, |j| if j < 5 { IrrepLabel::Charge(7) } else { IrrepLabel::Charge(-3) });
        let c = converges(&m3, &seq, &lim, &Default::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Converges);
        assert_eq!(c.tail_index, Some(5));
        for r in &c.evidence[5..] {
            assert!(r.multiplicity == Some(1));
        }
    }

    #[test]
    fn k_type_sequence_cannot_approach_generic_point() {
        let m3 = build_instance("M3").unwrap();
        let lim = pt(&m3, &[1.0], IrrepLabel::Charge(0));
        let seq: Vec<_> = (0..8).map(|_| pt(&m3, &[0.0], IrrepLabel::Spin(0))).collect();
        assert_eq!(converges(&m3, &seq, &lim, &Default::default()).unwrap().verdict, Verdict::Diverges);
    }

    #[test]
    fn errors() {
        let m3 = build_instance("M3").unwrap();
        let m2 = build_instance("M2").unwrap();
        let lim = pt(&m3, &[1.0], IrrepLabel::Charge(0));
        assert!(matches!(converges(&m3, &[], &lim, &Default::default()), Err(Error::EmptySequence)));
        let other = pt(&m2, &[1.0], IrrepLabel::Trivial);
        assert!(matches!(
            converges(&m3, &[other], &lim, &Default::default()),
            Err(Error::MixedInstance(..))
        ));
    }

    #[test]
    fn agrees_with_neighborhood_membership_on_the_tail() {
        let p = build_instance("M2xM2").unwrap();
        let t = |a: i64| IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Charge(a)]);
        let lim = pt(&p, &[1.0, 0.0], t(3));
        for label in [3, 4] {
            let seq: Vec<_> = (0..40)
                .map(|j| pt(&p, &[1.0 + 0.5f64.powi(j), 0.0], t(label)))
                .collect();
            let cert = converges(&p, &seq, &lim, &Default::default()).unwrap();
            let brute = [0.5, 1e-2, 1e-4].iter().all(|&eps| {
                seq[30..].iter().all(|s| in_neighborhood(&p, &lim, eps, s).unwrap())
            });
            assert_eq!(cert.verdict == Verdict::Converges, brute);
        }
    }
}
