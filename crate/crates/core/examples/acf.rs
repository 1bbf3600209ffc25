//! Sample autocorrelations, partial autocorrelations and the Yule-Walker solution.

use rinar::{sample_acf, sample_pacf, simulate, yule_walker, InnovationSpec, RinarParams, SimulateOptions};

fn main() -> rinar::Result<()> {
    let theta = RinarParams::new(vec![0.7], 1.0)?;
    let noise = InnovationSpec::poisson_difference(1.0)?;
    let series = simulate(&theta, &noise, &SimulateOptions::new(1000, 1))?;

    let acf = sample_acf(&series, 6)?;
    let pacf = sample_pacf(&series, 6)?;
    let band = 2.0 / (series.len() as f64).sqrt();
    println!("lag      acf     pacf");
    for lag in 1..=6 {
        let mark = if pacf[lag - 1].abs() > band { "*" } else { "" };
        println!("{lag:>3} {:>8.3} {:>8.3}{mark}", acf.at(lag), pacf[lag - 1]);
    }
    let yw = yule_walker(&series, 1)?;
    println!("Yule-Walker: alpha = {:.3}, lambda0 = {:.3}", yw.alphas[0], yw.lambda0);
    Ok(())
}
