//! The rounding operator and its decomposition into integer and fractional parts.

use rinar::rounding::{frac_part, int_part, round_nearest, sign};

fn main() -> rinar::Result<()> {
    println!("{:>6} {:>4} {:>4} {:>6} {:>3}", "x", "<x>", "[x]", "{x}", "s");
    for x in [2.5, 2.4, -0.5, -2.5, -2.7, 0.0, 7.25] {
        println!(
            "{x:>6} {:>4} {:>4} {:>6.3} {:>3}",
            round_nearest(x)?,
            int_part(x)?,
            frac_part(x)?,
            sign(x)?
        );
    }
    Ok(())
}
