//! Fit on a training prefix, then score rolling one-step forecasts on the rest.

use rinar::{fit, rolling_forecast, simulate, FitOptions, InnovationSpec, RinarParams, SimulateOptions};

fn main() -> rinar::Result<()> {
    let theta = RinarParams::new(vec![0.6, -0.2], 0.6)?;
    let noise = InnovationSpec::poisson_difference(0.5)?;
    let series = simulate(&theta, &noise, &SimulateOptions::new(505, 9))?;

    let split = 400;
    let fitted = fit(&series.head(split)?, 2, &FitOptions::default())?.theta_hat;
    let report = rolling_forecast(&fitted, &series, split)?;
    println!("fitted {:.3?}", fitted.to_vec());
    for i in 0..5 {
        println!(
            "t={:>3} actual {:>2} predicted {:>2}",
            report.targets[i] + 1,
            report.actuals[i],
            report.predictions[i]
        );
    }
    println!("MAE over {} forecasts: {:.3}", report.predictions.len(), report.mae);
    Ok(())
}
