//! Exact identifiability analysis: the lattice step nu0 and the interval of
//! intercepts that produce the same conditional law.

use rinar::{identify, Fraction, RationalParams};

fn main() -> rinar::Result<()> {
    let cases: [(&[&str], &str); 3] = [
        (&["3/25", "3/8", "1/5", "-1/4"], "5/2"),
        (&["1/2", "1/3"], "7/4"),
        (&["2/5"], "1/2"),
    ];
    for (alphas, lambda) in cases {
        let alphas = alphas.iter().map(|s| s.parse()).collect::<Result<Vec<Fraction>, _>>()?;
        let report = identify(&RationalParams::new(alphas, lambda.parse()?)?)?;
        println!("{}", report.e0_description());
        println!(
            "  nu0 = {}, |I0| = {}, closed-form length {} ({})",
            report.nu0,
            report.i0_length,
            report.predicted_length,
            report.case_label.map_or("-".to_string(), |c| c.to_string())
        );
    }
    Ok(())
}
