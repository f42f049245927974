//! Invariants of the dual parametrization and of the neighborhood basis.

use cartan_core::dual::{
    converges, equivalent, in_neighborhood, make_dual_point, weyl_action_on_pairs, DualPoint, RawDualPoint, Stratum,
    Verdict,
};
use cartan_core::group::IrrepLabel;
use cartan_core::pair::{build_instance, SymmetricPairDescriptor, WeylElement};
use proptest::prelude::*;

fn pt(pair: &SymmetricPairDescriptor, h: &[f64], label: IrrepLabel) -> DualPoint {
    make_dual_point(pair, &RawDualPoint { h: h.to_vec(), label }).unwrap()
}

fn m2xm2_label(h: &[f64], a: i64, b: i64) -> IrrepLabel {
    let f = |x: f64, c: i64| if x.abs() > 1e-9 { IrrepLabel::Trivial } else { IrrepLabel::Charge(c) };
    IrrepLabel::Tuple(vec![f(h[0], a), f(h[1], b)])
}

proptest! {
    #[test]
    fn weyl_translates_are_equivalent_m3(h in 0.01f64..5.0, m in -6i64..=6, flip in any::<bool>()) {
        let m3 = build_instance("M3").unwrap();
        let p = pt(&m3, &[h], IrrepLabel::Charge(m));
        let w = WeylElement { signs: vec![if flip { -1 } else { 1 }] };
        let q = weyl_action_on_pairs(&m3, &w, &p);
        prop_assert!(equivalent(&m3, &p, &q));
        prop_assert!(equivalent(&m3, &q, &p));
        let back = weyl_action_on_pairs(&m3, &w.inverse(), &q);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn weyl_translates_are_equivalent_m2xm2(
        pick in 0usize..3, x in 0.1f64..3.0, y in 0.1f64..3.0, a in -4i64..=4, b in -4i64..=4,
        s0 in any::<bool>(), s1 in any::<bool>(),
    ) {
        let p2 = build_instance("M2xM2").unwrap();
        let h = match pick { 0 => vec![x, y], 1 => vec![x, 0.0], _ => vec![0.0, y] };
        let p = pt(&p2, &h, m2xm2_label(&h, a, b));
        let w = WeylElement { signs: vec![if s0 { -1 } else { 1 }, if s1 { -1 } else { 1 }] };
        prop_assert!(equivalent(&p2, &p, &weyl_action_on_pairs(&p2, &w, &p)));
    }

    #[test]
    fn k_types_are_isolated_from_each_other(l1 in 0u32..6, l2 in 0u32..6, eps in 1e-6f64..10.0) {
        let m3 = build_instance("M3").unwrap();
        let a = pt(&m3, &[0.0], IrrepLabel::Spin(l1));
        let b = pt(&m3, &[0.0], IrrepLabel::Spin(l2));
        prop_assert_eq!(a.stratum, Stratum::KType);
        prop_assert_eq!(in_neighborhood(&m3, &a, eps, &b).unwrap(), l1 == l2);
    }

    #[test]
    fn generic_limits_reduce_to_eventual_label_equality(
        h in 0.5f64..4.0, m in -3i64..=3, m_tail in -3i64..=3, switch in 0usize..10,
    ) {
        let m3 = build_instance("M3").unwrap();
        let lim = pt(&m3, &[h], IrrepLabel::Charge(m));
        let seq: Vec<_> = (0..40)
            .map(|j| {
                let lab = if j < switch { IrrepLabel::Charge(m + 7) } else { IrrepLabel::Charge(m_tail) };
                pt(&m3, &[h - 0.5f64.powi(j as i32 + 1)], lab)
            })
            .collect();
        let cert = converges(&m3, &seq, &lim, &Default::default()).unwrap();
        prop_assert_eq!(cert.verdict == Verdict::Converges, m == m_tail);
        if let Some(t) = cert.tail_index {
            prop_assert!(t <= switch);
            for r in &cert.evidence[t..] {
                prop_assert_eq!(r.multiplicity, Some(1));
            }
        }
    }
}
