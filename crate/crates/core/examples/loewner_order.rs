//! Efficiency comparisons in the Loewner order: the bias-corrected estimator
//! beats the weighted one under under-sampling, and loses under over-sampling.

use nalgebra::DMatrix;
use rarelogit::asymptotics::{
    loewner_ge, min_eigenvalue, proposition1_check, v_over_bc, v_over_weighted, v_under_bc, v_under_weighted,
    LOEWNER_TOL,
};
use rarelogit::rng::stream;
use rarelogit::simulation::CovariateLaw;

fn main() -> rarelogit::Result<()> {
    let xs = CovariateLaw::standard_normal(1).sample(100_000, &mut stream(5, &[]));
    let beta = [1.0];
    for c in [0.0, 0.1, 1.0, 5.0] {
        let w = v_under_weighted(&xs, &beta, c)?.v;
        let bc = v_under_bc(&xs, &beta, c)?.v;
        let ow = v_over_weighted(&xs, &beta, 3.48)?.v;
        let obc = v_over_bc(&xs, &beta, 3.48, c)?.v;
        println!(
            "c = {c}: V_w >= V_bc {} (gap {:.2e}), V_obc >= V_ow {} (gap {:.2e})",
            loewner_ge(&w, &bc, LOEWNER_TOL)?,
            min_eigenvalue(&(&w - &bc)),
            loewner_ge(&obc, &ow, LOEWNER_TOL)?,
            min_eigenvalue(&(&obc - &ow)),
        );
    }

    // the same ordering through the general inequality, with v = e^{x/2} z and h = 1 + c e^x
    let c = 1.0;
    let mut vs = DMatrix::zeros(xs.n_rows(), 2);
    let mut hs = Vec::with_capacity(xs.n_rows());
    for (i, x) in xs.rows().enumerate() {
        let e = x[0].exp();
        vs[(i, 0)] = e.sqrt();
        vs[(i, 1)] = e.sqrt() * x[0];
        hs.push(1.0 + c * e);
    }
    println!("inequality holds on the sample: {}", proposition1_check(&vs, &hs, 1e-8)?);
    Ok(())
}
