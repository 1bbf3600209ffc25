//! Least-squares fit of a RINAR(4) model started from Yule-Walker.

use rinar::{fit, simulate, FitOptions, InnovationSpec, RinarParams, SimulateOptions};

fn main() -> rinar::Result<()> {
    let truth = RinarParams::new(vec![0.12, 0.375, 0.2, -0.25], 2.5)?;
    let noise = InnovationSpec::poisson_difference(1.0)?;
    let series = simulate(&truth, &noise, &SimulateOptions::new(2000, 2024))?;

    let r = fit(&series, 4, &FitOptions::default())?;
    println!("truth        {:?}", truth.to_vec());
    println!("yule-walker  {:.3?}", r.yw_init.to_vec());
    println!("fitted       {:.3?}", r.theta_hat.to_vec());
    println!(
        "contrast {:.4} -> {:.4} in {} sweeps (converged: {})",
        r.initial_objective, r.objective, r.outer_iterations, r.converged
    );
    Ok(())
}
