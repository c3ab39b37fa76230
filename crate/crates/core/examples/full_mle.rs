//! Fit the full-data MLE to a rare-events sample and inspect the solver diagnostics.

use rarelogit::estimators::full_mle;
use rarelogit::model::predict_prob;
use rarelogit::rng::stream;
use rarelogit::simulation::{generate_marginal, CovariateLaw};
use rarelogit::{Coefficients, SolverSettings};

fn main() -> rarelogit::Result<()> {
    let truth = Coefficients::new(-6.0, vec![1.0]);
    let data = generate_marginal(100_000, &truth, &CovariateLaw::standard_normal(1), &mut stream(1, &[]))?;
    println!("n = {}, cases = {}, controls = {}", data.n(), data.n1(), data.n0());

    let fit = full_mle(&data, &SolverSettings::default())?;
    println!("alpha = {:.4}, beta = {:.4}", fit.theta.alpha, fit.theta.beta[0]);
    println!(
        "converged = {} after {} Newton steps, |grad|max = {:.2e}",
        fit.converged, fit.iterations, fit.grad_max_norm
    );
    println!("log-likelihood trace: {:?}", fit.objective_trace);
    println!("Pr(y=1 | x=2) = {:.5}", predict_prob(&fit.theta, &[2.0])?);
    Ok(())
}
