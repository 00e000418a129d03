use rayon::ThreadPoolBuilder;
use robprem_core::montecarlo::evaluate_sample;
use robprem_core::rng::replication_stream;
use robprem_core::{
    hill_estimator, run_replication, run_study, t_hill_asymptotic_variance, t_hill_estimator,
    LossModel, SimulationStudy, StudyEstimator, SupportVariant,
};

fn small(study: SimulationStudy) -> SimulationStudy {
    SimulationStudy {
        sizes: vec![100, 300],
        replications: 40,
        seed: 99,
        ..study
    }
}

#[test]
fn report_independent_of_thread_count() {
    let study = small(SimulationStudy::table2());
    let on = |threads| {
        ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_study(&study).unwrap())
    };
    let one = on(1);
    assert_eq!(one, on(4));
    assert_eq!(one, on(7));
    assert_eq!(one, run_study(&study).unwrap());
}

#[test]
fn zero_contamination_reproduces_baseline() {
    let base = small(SimulationStudy::table1());
    let mixed = SimulationStudy {
        model: LossModel::Mixture {
            gamma1: 0.6,
            gamma2: 2.0,
            eps: 0.0,
            support: SupportVariant::Lomax,
        },
        eps_grid: vec![0.0],
        ..base.clone()
    };
    let a = run_study(&base).unwrap();
    let b = run_study(&mixed).unwrap();
    assert_eq!(a.truth_premium, b.truth_premium);
    assert_eq!(a.cells, b.cells);
}

#[test]
fn adding_sizes_keeps_existing_cells() {
    let base = small(SimulationStudy::table1());
    let wider = SimulationStudy {
        sizes: vec![50, 100, 300, 400],
        ..base.clone()
    };
    let a = run_study(&base).unwrap();
    let b = run_study(&wider).unwrap();
    for c in &a.cells {
        assert_eq!(Some(c), b.cell(c.n, c.eps, c.estimator));
    }
}

#[test]
fn single_replication_cells_equal_record() {
    let study = SimulationStudy {
        sizes: vec![200],
        replications: 1,
        keep_records: true,
        ..SimulationStudy::table1()
    };
    let report = run_study(&study).unwrap();
    let rec = &report.records.as_ref().unwrap()[0];
    assert_eq!(
        *rec,
        run_replication(&study, &study.model, 0.0, 200, 0).unwrap()
    );
    let g = report.cell(200, 0.0, StudyEstimator::ThillGamma).unwrap();
    assert_eq!(g.bias, rec.thill.gamma_hat.unwrap() - 0.6);
    assert_eq!(g.rmse, g.bias.abs());
    assert_eq!(g.k_star_mean, rec.thill.k_star.unwrap() as f64);
}

#[test]
fn replication_matches_direct_evaluation() {
    let study = SimulationStudy::table1();
    let (n, rep) = (500, 17);
    let rec = run_replication(&study, &study.model, 0.0, n, rep).unwrap();
    let s = study
        .model
        .sample(n, &mut replication_stream(study.seed, n, rep))
        .unwrap();
    let (thill, hill) = evaluate_sample(&s, study.rho, study.theta);
    assert_eq!((rec.thill, rec.hill), (thill, hill));
}

#[test]
fn cells_satisfy_invariants() {
    let report = run_study(&small(SimulationStudy::table2())).unwrap();
    assert_eq!(report.cells.len(), 2 * 4 * 2);
    for c in &report.cells {
        assert!(c.rmse * c.rmse - c.bias * c.bias >= -1e-12);
        assert!(c.failures + c.successes == 40);
    }
}

#[test]
fn estimators_consistent_on_strict_pareto() {
    let (gamma, n, reps) = (0.6, 5000, 500);
    let k = (n as f64).powf(0.6).floor() as usize;
    let model = LossModel::StrictPareto { gamma };
    let mut t = Vec::with_capacity(reps);
    let mut h = Vec::with_capacity(reps);
    for rep in 0..reps {
        let s = model
            .sample(n, &mut replication_stream(31, n, rep))
            .unwrap();
        t.push(t_hill_estimator(&s, k).unwrap().gamma_hat);
        h.push(hill_estimator(&s, k).unwrap().gamma_hat);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!((mean(&t) - gamma).abs() < 0.05);
    assert!((mean(&h) - gamma).abs() < 0.05);
    let m = mean(&t);
    let var = t.iter().map(|g| k as f64 * (g - m).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let target = t_hill_asymptotic_variance(gamma).unwrap();
    assert!((var / target - 1.0).abs() < 0.15, "{var} vs {target}");
}

#[test]
fn lomax_replication_k_star_plausible() {
    let study = SimulationStudy::table1();
    let rec = run_replication(&study, &study.model, 0.0, 1000, 0).unwrap();
    for p in [&rec.thill, &rec.hill] {
        let k = p.k_star.unwrap();
        assert!((2..1000).contains(&k));
    }
}
