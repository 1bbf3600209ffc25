//! Simulate a RINAR(2) path and compare its mean with the stationary level.

use rinar::{sample_mean, simulate, InnovationSpec, RinarParams, SimulateOptions};

fn main() -> rinar::Result<()> {
    let theta = RinarParams::new(vec![0.5, -0.2], 1.5)?;
    let noise = InnovationSpec::poisson_difference(1.0)?;
    let series = simulate(&theta, &noise, &SimulateOptions::new(2000, 7))?;

    println!("first 20: {:?}", &series.values()[..20]);
    let level = theta.lambda() / (1.0 - theta.alphas().iter().sum::<f64>());
    println!("sample mean {:.3}, lambda / (1 - sum alpha) = {level:.3}", sample_mean(&series));
    Ok(())
}
