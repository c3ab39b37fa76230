//! Write a dataset to CSV, read it back bit-for-bit, and fit it.

use rarelogit::cli::{read_dataset, write_dataset};
use rarelogit::estimators::full_mle;
use rarelogit::rng::stream;
use rarelogit::simulation::{generate_marginal, CovariateLaw};
use rarelogit::{Coefficients, SolverSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = Coefficients::new(-3.0, vec![1.0, -0.5]);
    let data = generate_marginal(2_000, &truth, &CovariateLaw::standard_normal(2), &mut stream(8, &[]))?;
    let path = std::env::temp_dir().join("rarelogit-example.csv");
    write_dataset(&path, &data)?;
    let back = read_dataset(&path)?;
    println!("wrote {}; identical after reading back: {}", path.display(), back == data);
    println!("{:?}", full_mle(&back, &SolverSettings::default())?.theta);
    Ok(())
}
