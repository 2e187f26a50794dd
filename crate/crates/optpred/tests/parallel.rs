use optpred::Parallel;
use optpred_core::chebyshev::Degree;
use optpred_core::design::{optimize_support, OptimizerOptions};
use optpred_core::measure::DiscreteMeasure;
use optpred_core::polynomial::NodeSet;
use optpred_core::regression::{mc_predictor_variance, RegressionPlan};
use optpred_core::Complex64;

#[test]
fn monte_carlo_is_bit_identical_to_sequential() {
    let mu = DiscreteMeasure::new(
        NodeSet::new(vec![-1.0, 0.0, 1.0]).unwrap(),
        vec![1.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0],
    )
    .unwrap();
    let plan = RegressionPlan::new(mu, 300, 1.0, vec![0.2, -1.0, 0.4]).unwrap();
    for &z0 in &[Complex64::new(2.0, 0.0), Complex64::new(0.3, 1.1)] {
        let seq = mc_predictor_variance(&plan, z0, 5000, 42).unwrap();
        for threads in [Some(1), Some(3), None] {
            let par = Parallel::with_threads(threads)
                .mc_predictor_variance(&plan, z0, 5000, 42)
                .unwrap();
            assert_eq!(par, seq, "threads {threads:?}");
        }
    }
    assert!(Parallel::with_threads(Some(2))
        .mc_predictor_variance(&plan, Complex64::new(2.0, 0.0), 999, 0)
        .is_err());
}

#[test]
fn optimizer_is_identical_to_sequential() {
    let opts = OptimizerOptions {
        seed: 3,
        ..OptimizerOptions::default()
    };
    let runner = Parallel::with_threads(Some(4));
    assert_eq!(runner.threads(), 4);
    for &(n, re, im) in &[(3, 0.0, 1.0), (5, 1.2, 0.3), (6, -2.0, 0.0)] {
        let d = Degree::new(n).unwrap();
        let z0 = Complex64::new(re, im);
        let seq = optimize_support(d, z0, &opts).unwrap();
        let par = runner.optimize_support(d, z0, &opts).unwrap();
        assert_eq!(seq.nodes(), par.nodes());
        assert_eq!(seq.weights(), par.weights());
        assert_eq!(seq.k_value, par.k_value);
    }
}
