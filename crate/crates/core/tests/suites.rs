use hyperbolic_heat::checks::{run_all, run_groups, SuiteGroup};
use hyperbolic_heat::kernel::QuadratureConfig;

/// Suites whose predictions do not hold: the large-time ratio diverges for
/// |k| > 1/2, and the negative-argument D_{-2} ratio grows without bound.
fn expected_red(name: &str) -> bool {
    name == "tails.d_minus2_asymptotic"
        || (name.starts_with("asymptotics.large_t[")
            && (name.ends_with(",k=1]") || name.ends_with(",k=2]")))
}

#[test]
fn all_suites_pass_except_known_failures() {
    let reports = run_all(&QuadratureConfig::default());
    assert!(reports.len() > 60);
    for r in &reports {
        assert_eq!(r.passed, !expected_red(&r.suite), "{r}");
        assert!(r.cases_run > 0 || !r.passed, "{r}");
    }
    assert_eq!(reports.iter().filter(|r| !r.passed).count(), 7);
}

#[test]
fn loose_tolerance_keeps_verdicts() {
    let loose = run_all(&QuadratureConfig::with_rel_tol(1e-2));
    for r in &loose {
        assert_eq!(r.passed, !expected_red(&r.suite), "{r}");
    }
}

#[test]
fn runs_are_deterministic_and_grouped() {
    let cfg = QuadratureConfig::default();
    let a = run_groups(&[SuiteGroup::Tails, SuiteGroup::Tcheb], &cfg);
    let b = run_groups(&[SuiteGroup::Tails, SuiteGroup::Tcheb], &cfg);
    assert_eq!(a, b);
    let first_tcheb = a.iter().position(|r| r.group() == "tcheb").unwrap();
    assert!(a[..first_tcheb].iter().all(|r| r.group() == "tails"));
    assert!(a[first_tcheb..].iter().all(|r| r.group() == "tcheb"));
}

#[test]
fn quasi_random_suites_record_their_seed() {
    let reports = run_groups(
        &[SuiteGroup::Bracket, SuiteGroup::Monotone],
        &QuadratureConfig::default(),
    );
    let bracket = reports
        .iter()
        .find(|r| r.suite == "bracket.equivalence")
        .unwrap();
    assert_eq!(bracket.cases_run, 10_000);
    assert!(bracket.seed.is_some());
    let ineq = reports
        .iter()
        .find(|r| r.suite == "monotone.integrand_inequality")
        .unwrap();
    assert!(ineq.seed.is_some());
}
