//! Monte Carlo fluctuation bands: every gate's rotation angle is scaled by
//! 1 + a*delta and its phase offset by p*delta*pi with fresh uniform draws
//! per gate and trial; bands are the min/max over trials.

use apt_flow::nmr::{noise_monte_carlo, ExperimentConfig};
use apt_flow::Result;

fn main() -> Result<()> {
    let config = ExperimentConfig {
        lambdas: vec![2.0, 0.5],
        n_trials: 100,
        noise_fraction: 0.05,
        seed: 7,
        ..ExperimentConfig::default()
    };

    for band in noise_monte_carlo(&config)? {
        println!(
            "lambda = {} (delta = {}, {} trials, seed {})",
            band.lambda, config.noise_fraction, config.n_trials, config.seed
        );
        println!("{:>8} {:>12} {:>12} {:>12}", "t", "lower", "nominal", "upper");
        for k in 0..band.times.len() {
            println!(
                "{:>8.3} {:>12.6} {:>12.6} {:>12.6}{}",
                band.times[k],
                band.lower[k],
                band.nominal[k],
                band.upper[k],
                if k == 0 { "   (unperturbed reference)" } else { "" }
            );
        }
        println!();
    }
    Ok(())
}
