//! A small seeded Monte Carlo comparison of all five estimators.

use rarelogit::simulation::{run_experiment, CovariateLaw, ExperimentConfig, ExperimentDesign};
use rarelogit::{Coefficients, EstimatorKind, SolverSettings};

fn main() -> rarelogit::Result<()> {
    let config = ExperimentConfig {
        design: ExperimentDesign::MarginalLogistic {
            theta_t: Coefficients::new(-6.0, vec![1.0]),
            law: CovariateLaw::standard_normal(1),
        },
        n: 100_000,
        replications: 50,
        estimators: vec![
            EstimatorKind::Full,
            EstimatorKind::UnderWeighted { pi0: 0.01 },
            EstimatorKind::UnderBiasCorrected { pi0: 0.01 },
            EstimatorKind::OverWeighted { lambda: 3.48 },
            EstimatorKind::OverBiasCorrected { lambda: 3.48 },
        ],
        base_seed: 6,
        solver: SolverSettings::default(),
        threads: None,
    };
    let report = run_experiment(&config)?;
    println!("{:<18} {:>12} {:>10} {:>8}", "estimator", "eMSE x 1e3", "mean n1", "failed");
    for s in &report.summaries {
        println!("{:<18} {:>12.4} {:>10.1} {:>8}", s.kind.to_string(), 1e3 * s.emse.total, s.mean_n1, s.failed);
    }
    Ok(())
}
