use logsym::experiments::DEFAULT_MASTER_SEED;
use logsym::{
    run_benchmark, run_rate_table, DistributionSpec, Error, Procedure, SimulationPlan, StudyMode,
};

fn plan(tests: Vec<Procedure>, n: Vec<usize>, dists: Vec<DistributionSpec>) -> SimulationPlan {
    let mut p = SimulationPlan::new(tests, n, vec![0.05], dists);
    p.master_seed = DEFAULT_MASTER_SEED;
    p
}

#[test]
fn weibull_power_t1() {
    let weibull = DistributionSpec::Weibull {
        shape: 2.0,
        scale: 1.0,
    };
    let t = Procedure::t1(1.0).unwrap();
    let table = run_rate_table(&plan(vec![t], vec![25], vec![weibull]), StudyMode::Power).unwrap();
    let rate = table.value(&weibull, 25, Some(0.05), &t).unwrap();
    assert!((rate - 0.9992).abs() <= 0.01, "{rate}");
}

#[test]
fn log_laplace_size_t2() {
    let lap = DistributionSpec::LogLaplace { mu: 0.0, b: 1.0 };
    let t = Procedure::t2(1.0).unwrap();
    let table = run_rate_table(&plan(vec![t], vec![50], vec![lap]), StudyMode::Type1).unwrap();
    let rate = table.value(&lap, 50, Some(0.05), &t).unwrap();
    assert!((rate - 0.0493).abs() <= 0.012, "{rate}");
}

#[test]
fn every_test_holds_its_level_under_lognormal() {
    let ln = DistributionSpec::STANDARD_LOG_NORMAL;
    let tests = Procedure::standard_lineup();
    let table = run_rate_table(&plan(tests.clone(), vec![50], vec![ln]), StudyMode::Type1).unwrap();
    for t in &tests {
        let rate = table.value(&ln, 50, Some(0.05), t).unwrap();
        assert!((0.035..=0.065).contains(&rate), "{t}: {rate}");
    }
}

#[test]
fn gamma_power_grows_with_n() {
    let gamma = DistributionSpec::Gamma {
        shape: 2.0,
        rate: 1.0,
    };
    let t = Procedure::t1(1.0).unwrap();
    let table =
        run_rate_table(&plan(vec![t], vec![10, 50], vec![gamma]), StudyMode::Power).unwrap();
    let r10 = table.value(&gamma, 10, Some(0.05), &t).unwrap();
    let r50 = table.value(&gamma, 50, Some(0.05), &t).unwrap();
    assert!(r50 >= r10, "n=10 {r10}, n=50 {r50}");
}

#[test]
fn same_seed_same_table() {
    let mut p = plan(
        vec![Procedure::t1(0.5).unwrap(), Procedure::ratio()],
        vec![10, 20],
        vec![
            DistributionSpec::Maxwell { scale: 2.0 },
            DistributionSpec::STANDARD_LOG_LOGISTIC,
        ],
    );
    p.mc_replications = 500;
    let a = run_rate_table(&p, StudyMode::Power).unwrap();
    let b = run_rate_table(&p, StudyMode::Power).unwrap();
    assert_eq!(a, b);
    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    a.write_csv(&mut csv_a).unwrap();
    b.write_csv(&mut csv_b).unwrap();
    assert_eq!(csv_a, csv_b);
}

#[test]
fn empty_plan_is_rejected() {
    let p = plan(vec![Procedure::t1(1.0).unwrap()], vec![10], vec![]);
    assert!(matches!(
        run_rate_table(&p, StudyMode::Type1),
        Err(Error::Config(_))
    ));
}

#[test]
fn minmax_is_slower_than_pwm() {
    let table = run_benchmark(&[Procedure::pwm(3), Procedure::minmax(3)], 50, 10, 1).unwrap();
    let pwm = table.rows[0].value.clone().unwrap();
    let minmax = table.rows[1].value.clone().unwrap();
    assert!(minmax > pwm, "pwm {pwm}, minmax {minmax}");
    assert!(matches!(
        run_benchmark(&[Procedure::pwm(3)], 50, 0, 1),
        Err(Error::Config(_))
    ));
}
