//! Keep every case and a Bernoulli(pi0) share of the controls, then compare the
//! inverse-probability weighted fit with the bias-corrected unweighted fit.

use rarelogit::estimators::{full_mle, under_bias_corrected, under_unweighted, under_weighted};
use rarelogit::rng::stream;
use rarelogit::sampling::undersample;
use rarelogit::simulation::{generate_marginal, CovariateLaw};
use rarelogit::{Coefficients, SolverSettings};

fn main() -> rarelogit::Result<()> {
    let truth = Coefficients::new(-6.0, vec![1.0]);
    let data = generate_marginal(100_000, &truth, &CovariateLaw::standard_normal(1), &mut stream(2, &[]))?;
    let settings = SolverSettings::default();
    let full = full_mle(&data, &settings)?.theta;
    println!("full data ({} rows): {:?}", data.n(), full);

    for pi0 in [0.005, 0.05, 0.5] {
        let design = undersample(&data, pi0, &mut stream(2, &[1]))?;
        let weighted = under_weighted(&data, &design, &settings)?.theta;
        let raw = under_unweighted(&data, &design, &settings)?.theta;
        let corrected = under_bias_corrected(&data, &design, &settings)?.theta;
        println!("pi0 = {pi0}: kept {} rows", design.effective_sample_size());
        println!("  weighted         {weighted:?}");
        println!("  unweighted       {raw:?}  (intercept off by about log pi0 = {:.3})", pi0.ln());
        println!("  bias-corrected   {corrected:?}");
    }
    Ok(())
}
