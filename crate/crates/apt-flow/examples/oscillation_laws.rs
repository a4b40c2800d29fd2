//! Detected oscillation period and amplitude versus their closed forms
//! pi/(s*sqrt(lambda^2-1)) and 2/(lambda^2+1) across the broken regime.

use apt_flow::observables::oscillation_metrics;
use apt_flow::Result;

fn main() -> Result<()> {
    let s = 3.0;
    println!("{:>8} {:>14} {:>14} {:>12} {:>12}", "lambda", "period", "period law", "amplitude", "amp law");
    for lambda in [1.05, 1.1, 1.3, 1.5, 2.0, 3.0, 5.0] {
        let metrics = oscillation_metrics(s, lambda)?;
        let period_law = std::f64::consts::PI / (s * (lambda * lambda - 1.0f64).sqrt());
        let amp_law = 2.0 / (lambda * lambda + 1.0);
        println!(
            "{lambda:>8} {:>14.8} {period_law:>14.8} {:>12.8} {amp_law:>12.8}",
            metrics.period.unwrap(),
            metrics.amplitude.unwrap()
        );
    }

    println!();
    for lambda in [1.0, 0.5] {
        let metrics = oscillation_metrics(s, lambda)?;
        println!(
            "lambda = {lambda}: regime {}, no period (d_min = {:.4}, d_max = {:.4})",
            metrics.regime, metrics.d_min, metrics.d_max
        );
    }
    Ok(())
}
