//! Scaled eMSE of the full MLE as the event rate falls with n: E(n1)·eMSE stays
//! flat while n·eMSE grows.

use rarelogit::simulation::{run_experiment, ExperimentConfig, ExperimentDesign};
use rarelogit::{EstimatorKind, SolverSettings};

fn main() -> rarelogit::Result<()> {
    println!("{:>8} {:>6} {:>14} {:>14} {:>12} {:>12}", "n", "E(n1)", "E(n1)eMSE(a)", "E(n1)eMSE(b)", "n eMSE(a)", "n eMSE(b)");
    for (n, rate) in [(1_000usize, 0.02), (10_000, 0.004), (100_000, 0.0008)] {
        let config = ExperimentConfig {
            design: ExperimentDesign::ConditionalGaussian { mu1: 1.0, mu0: 0.0, sigma: 1.0, target_rate: rate },
            n,
            replications: 100,
            estimators: vec![EstimatorKind::Full],
            base_seed: 7,
            solver: SolverSettings::default(),
            threads: None,
        };
        let e = &run_experiment(&config)?.summaries[0].emse;
        let m = n as f64 * rate;
        println!(
            "{n:>8} {m:>6.0} {:>14.3} {:>14.3} {:>12.1} {:>12.1}",
            m * e.alpha,
            m * e.beta[0],
            n as f64 * e.alpha,
            n as f64 * e.beta[0]
        );
    }
    Ok(())
}
