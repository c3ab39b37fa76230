//! Plug-in asymptotic covariances of all five estimators on a Gaussian covariate
//! sample, with their limit constants.

use rarelogit::asymptotics::{
    limit_constants, oversampling_factor, v_full, v_over_bc, v_over_weighted, v_under_bc, v_under_weighted,
};
use rarelogit::rng::stream;
use rarelogit::simulation::CovariateLaw;

fn main() -> rarelogit::Result<()> {
    let xs = CovariateLaw::standard_normal(1).sample(1_000_000, &mut stream(4, &[]));
    let beta = [1.0];
    let (alpha_t, pi0, lambda) = (-6.0, 0.01, 53.6);
    let k = limit_constants(alpha_t, Some(pi0), Some(lambda))?;
    let (c, c_o) = (k.c.unwrap(), k.c_o.unwrap());
    println!("c = {c:.6}, c_o = {c_o:.6}, inflation factor = {:.6}", oversampling_factor(lambda));

    let reports = [
        v_full(&xs, &beta)?,
        v_under_weighted(&xs, &beta, c)?,
        v_under_bc(&xs, &beta, c)?,
        v_over_weighted(&xs, &beta, lambda)?,
        v_over_bc(&xs, &beta, lambda, c_o)?,
    ];
    for r in &reports {
        let rows: Vec<String> =
            r.v.row_iter().map(|row| row.iter().map(|v| format!("{v:8.4}")).collect::<Vec<_>>().join(" ")).collect();
        println!("{:<9} condition {:>8.2}  V = [{}]", r.family.tag(), r.condition, rows.join(" ;"));
    }
    Ok(())
}
