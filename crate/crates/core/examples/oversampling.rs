//! Replicate each case 1 + Poisson(lambda) times and fit the weighted and the
//! bias-corrected estimators.

use rarelogit::estimators::{over_bias_corrected, over_weighted};
use rarelogit::rng::stream;
use rarelogit::sampling::oversample;
use rarelogit::simulation::{generate_marginal, CovariateLaw};
use rarelogit::{Coefficients, SolverSettings};

fn main() -> rarelogit::Result<()> {
    let truth = Coefficients::new(-6.0, vec![1.0]);
    let data = generate_marginal(100_000, &truth, &CovariateLaw::standard_normal(1), &mut stream(3, &[]))?;
    let settings = SolverSettings::default();

    for lambda in [0.0, 3.48, 53.6] {
        let design = oversample(&data, lambda, &mut stream(3, &[1]))?;
        let copies: u32 = (0..data.n()).filter(|&i| data.label(i) == 1).map(|i| design.indicators()[i]).sum();
        let ow = over_weighted(&data, &design, &settings)?.theta;
        let obc = over_bias_corrected(&data, &design, &settings)?.theta;
        println!("lambda = {lambda}: {} cases carry {copies} copies", data.n1());
        println!("  weighted        {ow:?}");
        println!("  bias-corrected  {obc:?}");
    }
    Ok(())
}
