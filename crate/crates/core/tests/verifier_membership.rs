use cartan_core::dual::Stratum;
use cartan_core::verifier::{
    bundled_test_functions, constant_lambda_field, constant_mu_field, identity_field, jump_field, sharp_bump,
    ConditionVerdict,
};
use cartan_core::{build_instance, verify_field, verify_membership, IrrepLabel, VerificationPlan};

fn wall_label(a: i64) -> IrrepLabel {
    IrrepLabel::Tuple(vec![IrrepLabel::Trivial, IrrepLabel::Charge(a)])
}

#[test]
fn bundled_functions_pass_on_the_abelian_instances() {
    for name in ["M2", "M2xM2"] {
        let pair = build_instance(name).unwrap();
        let plan = VerificationPlan::default_for(pair.name);
        for f in bundled_test_functions(&pair).unwrap() {
            let (report, _) = verify_membership(&f, &pair, &plan).unwrap();
            assert!(report.passed(), "{name} {}: {:?}", report.description, report.failed_conditions());
            assert_eq!(report.reports.iter().map(|r| r.condition).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        }
    }
}

#[test]
fn m2_mu_decay_is_vacuous() {
    let pair = build_instance("M2").unwrap();
    let plan = VerificationPlan::default_for(pair.name);
    let f = &bundled_test_functions(&pair).unwrap()[0];
    let (report, _) = verify_membership(f, &pair, &plan).unwrap();
    let c3 = report.condition(3).unwrap();
    assert_eq!(c3.verdict, ConditionVerdict::Pass);
    assert!(c3.note.as_deref().unwrap().contains("vacuous"));
}

#[test]
fn wall_path_is_exercised_on_the_product_instance() {
    let pair = build_instance("M2xM2").unwrap();
    let plan = VerificationPlan::default_for(pair.name);
    let f = &bundled_test_functions(&pair).unwrap()[1];
    let (report, sample) = verify_membership(f, &pair, &plan).unwrap();
    assert!(report.passed());
    let walls = sample.entries.iter().filter(|e| e.point.stratum == Stratum::Wall).count();
    assert!(walls >= 9 + 5 + 7);
    let c2 = report.condition(2).unwrap();
    assert!(c2.witnesses.iter().any(|w| w.at.contains("(1,m=1)")));
    // The wall path carries a nonzero field, so the Lipschitz test is not trivially met.
    assert!(c2.curves.iter().any(|c| c.points.iter().any(|p| p[1] > 1e-3)));
}

#[test]
fn each_fixture_fails_exactly_its_condition() {
    let pair = build_instance("M2xM2").unwrap();
    let plan = VerificationPlan::default_for(pair.name);
    let f = &bundled_test_functions(&pair).unwrap()[1];
    let sample = plan.sample(f, &pair).unwrap();
    let cases = [
        (identity_field(&sample, &[2.5, 0.0]), 1u8),
        (jump_field(&sample, &[1.5, 0.0], &wall_label(1), 1.0), 2),
        (constant_mu_field(&sample, &[3.0, 0.0]), 3),
        (constant_lambda_field(&sample, 3), 5),
    ];
    for (field, id) in cases {
        let report = verify_field(&pair, &field, &plan).unwrap();
        assert_eq!(report.failed_conditions(), vec![id]);
    }
    let bump = sharp_bump(&pair, 4096.0).unwrap();
    let (report, _) = verify_membership(&bump, &pair, &plan).unwrap();
    assert_eq!(report.failed_conditions(), vec![4]);
}

#[test]
fn reports_round_trip_through_json() {
    let pair = build_instance("M2").unwrap();
    let plan = VerificationPlan::default_for(pair.name);
    let f = &bundled_test_functions(&pair).unwrap()[1];
    let (report, _) = verify_membership(f, &pair, &plan).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    assert_eq!(serde_json::from_str::<cartan_core::MembershipReport>(&text).unwrap(), report);
    let plan_text = serde_json::to_string(&plan).unwrap();
    assert_eq!(serde_json::from_str::<VerificationPlan>(&plan_text).unwrap(), plan);
}
