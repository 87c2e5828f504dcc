use symtan::qcatalog::{QAssignment, ScalarProfile, StructureProfile};
use symtan::symspace::SpaceId;
use symtan::verify::*;

fn ctx(id: SpaceId) -> SpaceContext {
    SpaceContext::build(id, 0).unwrap()
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

fn tanh() -> QAssignment {
    QAssignment::Function(ScalarProfile::tanh())
}

fn show(r: &VerificationReport) -> String {
    format!("{} {:?} failures {:?} {:?}", r.check_id, r.verdict, r.failures(), r.residuals)
}

#[test]
fn contact_on_su_so3() {
    let c = ctx(SpaceId::SuSo(3));
    let r = check_contact(&c, &StructureProfile::contact(tanh(), 1.0), 1.0, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{}", show(&r));
    assert!(r.residuals["contact"].value <= 1e-9);
    assert!(r.residuals["perturbed_10pct"].value >= 1e-3);
}

#[test]
fn tashiro_standard_and_rectified() {
    let c = ctx(SpaceId::Sphere(3));
    let half = check_contact(&c, &StructureProfile::standard(Some(0.5)), 0.5, &opts()).unwrap();
    assert_eq!(half.verdict, Verdict::Pass, "{}", show(&half));
    let one = check_contact(&c, &StructureProfile::standard(Some(1.0)), 1.0, &opts()).unwrap();
    assert_eq!(one.verdict, Verdict::ExpectedFailConfirmed, "{}", show(&one));
    for r in [0.5, 1.0, 2.0] {
        let rep = check_contact(&c, &rectified_standard(r), r, &opts()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{}", show(&rep));
    }
}

#[test]
fn killing_examples() {
    let s4 = check_killing(&ctx(SpaceId::Sphere(4)), &StructureProfile::standard(Some(1.0)), 1.0, &opts()).unwrap();
    assert_eq!(s4.verdict, Verdict::Pass, "{}", show(&s4));
    let cp = ctx(SpaceId::Cp(2));
    for r in [0.5, 1.0, 2.0] {
        let rep = check_killing(&cp, &StructureProfile::standard(Some(r)), r, &opts()).unwrap();
        assert_eq!(rep.verdict, Verdict::ExpectedFailConfirmed, "{}", show(&rep));
        assert_eq!(rep.parameters["standard_killing"], "false");
    }
    let su = check_killing(&ctx(SpaceId::SuSo(3)), &StructureProfile::contact(tanh(), 1.0), 1.0, &opts()).unwrap();
    assert_eq!(su.verdict, Verdict::ExpectedFailConfirmed, "{}", show(&su));
    assert!(su.residuals["lie_xi_g_yp_component"].value <= 1e-8);
}

#[test]
fn rank_one_classification_examples() {
    let cp = check_rank1_classification(&ctx(SpaceId::Cp(2)), 1.0, &[1.0], 1.0, &opts()).unwrap();
    assert_eq!(cp.verdict, Verdict::Pass, "{}", show(&cp));
    assert_eq!(cp.parameters["class"], "sasakian");
    let s3 = check_rank1_classification(&ctx(SpaceId::Sphere(3)), 2.0, &[3.0], 1.0, &opts()).unwrap();
    assert_eq!(s3.verdict, Verdict::Pass, "{}", show(&s3));
    assert_eq!(s3.parameters["k_contact"], "false");
    let hp = check_rank1_classification(&ctx(SpaceId::Hp(1)), 1.0, &[1.0], 1.0, &opts()).unwrap();
    assert_eq!(hp.verdict, Verdict::Pass, "{}", show(&hp));
    assert!(check_rank1_classification(&ctx(SpaceId::SuSo(3)), 1.0, &[1.0], 1.0, &opts()).is_err());
}

#[test]
fn almost_kahler_examples() {
    let c = ctx(SpaceId::SuSo(3));
    let t = check_almost_kahler(&c, &ScalarProfile::tanh(), 1.0, &opts()).unwrap();
    assert_eq!(t.verdict, Verdict::Pass, "{}", show(&t));
    assert_eq!(t.parameters["kahler"], "true");
    let id = check_almost_kahler(&c, &ScalarProfile::identity(), 1.0, &opts()).unwrap();
    assert_eq!(id.verdict, Verdict::Pass, "{}", show(&id));
    assert_eq!(id.parameters["kahler"], "false");
    let coth = check_almost_kahler(&c, &"coth".parse().unwrap(), 1.0, &opts()).unwrap();
    assert_eq!(coth.verdict, Verdict::ExpectedFailConfirmed, "{}", show(&coth));
    assert!(coth.residuals["riccati"].value <= 1e-12);
    assert_eq!(coth.parameters["extends"], "false");
    assert_eq!(coth.discrepancies.len(), 1);
}

#[test]
fn normality_examples_agree_with_killing() {
    for (id, q, r) in [
        (SpaceId::Sphere(3), 1.0, 1.0),
        (SpaceId::Sphere(3), 2.0, 1.0),
        (SpaceId::SuSo(3), 1.0, 0.5),
        (SpaceId::Cp(2), 1.0, 0.5),
    ] {
        let c = ctx(id);
        let sp = StructureProfile::contact(QAssignment::PerRoot(vec![q]), r);
        let n = check_normality(&c, &sp, r, &opts()).unwrap();
        assert_eq!(n.verdict, Verdict::Pass, "{}", show(&n));
        let k = check_killing(&c, &sp, r, &opts()).unwrap();
        let killing_verdict = k.verdict == Verdict::Pass;
        assert_eq!(n.parameters["killing"], killing_verdict.to_string(), "{id}");
        let all_true = id.rank() == 1 && q == 1.0;
        assert_eq!(n.parameters["normal"], all_true.to_string(), "{id}");
    }
}

#[test]
fn tables_and_decomposition() {
    let t = check_catalog_tables(&opts()).unwrap();
    assert_eq!(t.verdict, Verdict::Pass, "{}", show(&t));
    assert_eq!(t.parameters["m[hp2]"], "3,4");
    assert_eq!(t.parameters["m[sphere5]"], "4,0");
    assert_eq!(t.discrepancies.len(), 1);
    let d = check_decomposition(&ctx(SpaceId::Grass(3)), &opts()).unwrap();
    assert_eq!(d.verdict, Verdict::Pass, "{}", show(&d));
}

#[test]
fn full_suite_has_no_unexpected_verdicts() {
    let specs = full_suite();
    let report = run_suite(&specs, &opts());
    let bad: Vec<String> = report.reports.iter().filter(|r| !r.verdict.is_success()).map(show).collect();
    assert!(bad.is_empty(), "{} failing:\n{}", bad.len(), bad.join("\n"));
    let mut keys: Vec<String> = specs.iter().map(|s| s.key()).collect();
    keys.sort();
    let ids: Vec<String> = report.reports.iter().map(|r| r.check_id.clone()).collect();
    assert_eq!(keys, ids);
}
