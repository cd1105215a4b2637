//! Sweep the A3 witness of the nonlinear coherent states across amplitudes
//! and print one line per point.

use isonlcs::fockspace::TruncatedBasis;
use isonlcs::states::nlcs_build;
use isonlcs::witnesses::{a3_parameter, moment_set, WitnessOperators};
use num_complex::Complex64;

fn main() -> Result<(), isonlcs::Error> {
    let basis = TruncatedBasis::new(200)?;
    let ops = WitnessOperators::build(&basis);
    println!("r,A3");
    for k in 1..=20 {
        let r = k as f64 * 0.5;
        let state = nlcs_build(Complex64::new(r, 0.0), &basis)?;
        let report = a3_parameter(&moment_set(&state, &ops)?)?;
        assert!(report.a3 > -1.0 && report.a3 < 0.0);
        println!("{r},{}", report.a3);
    }
    Ok(())
}
