//! Intercepts for a target event rate: by quadrature for a marginal design, and in
//! closed form for the conditional Gaussian design.

use rarelogit::simulation::{calibrate_intercept, conditional_truth, expected_event_rate, CovariateLaw};

fn main() -> rarelogit::Result<()> {
    let law = CovariateLaw::standard_normal(1);
    println!("E p at (-6, 1): {:.7}", expected_event_rate(-6.0, &[1.0], &law)?);
    for rate in [0.02, 0.004, 0.0008] {
        let alpha = calibrate_intercept(&[1.0], &law, rate, 1e-12)?;
        println!("rate {rate}: calibrated alpha {alpha:.5}, small-p guess {:.5}", rate.ln() - 0.5);
    }

    let two = CovariateLaw::gaussian(vec![0.0, 1.0], vec![1.0, 0.5])?;
    println!("two covariates, rate 0.01: alpha {:.5}", calibrate_intercept(&[0.5, -1.0], &two, 0.01, 1e-12)?);

    for rate in [0.02, 0.004, 0.0008, 0.00016] {
        let t = conditional_truth(rate, 1.0, 0.0, 1.0)?;
        println!("N(1,1) cases vs N(0,1) controls at rate {rate}: alpha_t {:.2}, beta_t {}", t.alpha, t.beta[0]);
    }
    Ok(())
}
