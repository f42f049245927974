//! A config serialized from a parsed config parses back to the same value.

use std::collections::BTreeMap;

use cartan_cli::config::{ConvergenceQuery, Cutoffs, FunctionConfig, GridConfig, ScenarioConfig};
use cartan_cli::BUNDLED;
use cartan_core::dual::Verdict;
use cartan_core::fourier::Term;
use cartan_core::verifier::{ContinuityPath, HToZeroLadder, MuDecayGrid};
use cartan_core::{Complex64, IrrepLabel, RawDualPoint};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = IrrepLabel> {
    let leaf = prop_oneof![
        Just(IrrepLabel::Trivial),
        (-6i64..=6).prop_map(IrrepLabel::Charge),
        (0u32..=6).prop_map(IrrepLabel::Spin),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| prop::collection::vec(inner, 2).prop_map(IrrepLabel::Tuple))
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..=2)
}

fn raw() -> impl Strategy<Value = RawDualPoint> {
    (coords(), label()).prop_map(|(h, label)| RawDualPoint { h, label })
}

fn function() -> impl Strategy<Value = FunctionConfig> {
    let term = (-3.0f64..3.0, -3.0f64..3.0, label(), 0usize..3, 0usize..3, prop::collection::vec(0u32..3, 2..=3))
        .prop_map(|(re, im, lambda, row, col, exponents)| Term { coefficient: Complex64::new(re, im), lambda, row, col, exponents });
    prop_oneof![
        "[a-z0-9 ]{1,16}".prop_map(FunctionConfig::Bundled),
        (0.1f64..3.0, prop::collection::vec(term, 0..3), proptest::option::of("[a-z ]{1,8}"))
            .prop_map(|(sigma, terms, description)| FunctionConfig::Explicit { sigma, terms, description }),
    ]
}

fn grids() -> impl Strategy<Value = GridConfig> {
    let path = (coords(), coords(), 3usize..12, label()).prop_map(|(start, end, points, label)| ContinuityPath { start, end, points, label });
    let mu = (coords(), prop::collection::vec(label(), 0..4)).prop_map(|(h, labels)| MuDecayGrid { h, labels });
    let ladder = (coords(), 1u32..10, prop::collection::vec(label(), 0..3), 1u32..8)
        .prop_map(|(h0, levels, labels, lambda_max)| HToZeroLadder { h0, levels, labels, lambda_max });
    (
        proptest::option::of(prop::collection::vec(raw(), 0..3)),
        proptest::option::of(prop::collection::vec(path, 0..2)),
        proptest::option::of(prop::collection::vec(mu, 0..2)),
        proptest::option::of(prop::collection::vec(ladder, 0..2)),
        proptest::option::of(1u32..10),
    )
        .prop_map(|(compactness, continuity, mu_decay, h_to_zero, lambda_decay_max)| GridConfig {
            compactness,
            continuity,
            mu_decay,
            h_to_zero,
            lambda_decay_max,
        })
}

fn query() -> impl Strategy<Value = ConvergenceQuery> {
    (
        "[a-z ]{1,10}",
        prop::collection::vec(raw(), 1..4),
        raw(),
        proptest::option::of(prop_oneof![Just(Verdict::Converges), Just(Verdict::Diverges)]),
    )
        .prop_map(|(name, sequence, limit, expect)| ConvergenceQuery { name, sequence, limit, expect, options: None })
}

fn config() -> impl Strategy<Value = ScenarioConfig> {
    (
        "[a-z0-9-]{1,12}",
        prop_oneof![Just("M2"), Just("M3"), Just("M2xM2"), Just("bogus")],
        function(),
        grids(),
        (proptest::option::of(1u32..12), proptest::option::of(1usize..40)),
        prop::collection::btree_map("[a-z_]{1,10}", 1e-12f64..1.0, 0..3),
        prop::collection::vec(query(), 0..2),
        proptest::option::of("[a-z/]{1,10}"),
    )
        .prop_map(|(name, instance, test_function, grids, (lambda_max, quadrature_order), tolerances, convergence, output_dir)| {
            ScenarioConfig {
                schema_version: 1,
                name,
                instance: instance.into(),
                test_function,
                grids,
                cutoffs: Cutoffs { lambda_max, quadrature_order },
                tolerances: tolerances.into_iter().collect::<BTreeMap<_, _>>(),
                convergence,
                output_dir,
            }
        })
}

proptest! {
    #[test]
    fn serialized_configs_parse_back(c in config()) {
        let text = c.to_json();
        let back = ScenarioConfig::from_json(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_json(), text);
    }
}

#[test]
fn bundled_scenarios_round_trip() {
    for (name, text) in BUNDLED {
        let parsed = ScenarioConfig::from_json(text).unwrap();
        let again = ScenarioConfig::from_json(&parsed.to_json()).unwrap();
        assert_eq!(parsed, again, "{name}");
        let a = parsed.validate().unwrap();
        let b = again.validate().unwrap();
        assert_eq!(a.plan, b.plan);
        assert_eq!(a.function, b.function);
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let mut v: serde_json::Value = serde_json::from_str(BUNDLED[0].1).unwrap();
    v["grids"] = serde_json::json!({ "mu_range": [] });
    let e = ScenarioConfig::from_json(&v.to_string()).unwrap_err();
    assert!(e.to_string().contains("mu_range"));
}
