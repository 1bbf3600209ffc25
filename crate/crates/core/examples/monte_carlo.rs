//! Seeded Monte Carlo of simulate-then-fit for the reference RINAR(4) model.
//!
//! `cargo run --release --example monte_carlo -- 500` runs the full 500
//! replications; the default is 100.

use rinar::{monte_carlo, McConfig, Parallelism};

fn main() -> rinar::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let config = McConfig { reps, ..McConfig::reference_rinar4() };
    let summary = monte_carlo(&config, Parallelism::Max)?;

    println!("{:<8} {:>8} {:>8} {:>8}", "param", "truth", "mean", "sd");
    for s in &summary.per_parameter {
        println!("{:<8} {:>8.4} {:>8.4} {:>8.4}", s.name, s.truth, s.mean, s.sd.unwrap_or(f64::NAN));
    }
    println!("{} completed, {} failed", summary.reps_completed, summary.failures);
    Ok(())
}
