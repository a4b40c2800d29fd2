//! Full noiseless protocol run: the four-qubit circuit at each grid time,
//! post-selection, reduced work-qubit states, and the derived observables.

use apt_flow::nmr::{run_experiment, ExperimentConfig};
use apt_flow::Result;

fn main() -> Result<()> {
    let config = ExperimentConfig::default();
    println!(
        "s = {}, lambdas = {:?}, {} points over (0, {}] plus the t = 0 reference",
        config.s, config.lambdas, config.n_points, config.t_final
    );

    for run in run_experiment(&config)? {
        let trace = &run.trace;
        let success = trace.success_probability.as_ref().expect("success column");
        let purity = trace.purity.as_ref().expect("purity column");
        println!("\nlambda = {}", run.lambda);
        println!("{:>8} {:>12} {:>14} {:>12}", "t", "D", "success prob", "purity");
        for k in 0..trace.times.len() {
            println!(
                "{:>8.3} {:>12.6} {:>14.6} {:>12.6}",
                trace.times[k], trace.distinguishability[k], success[k], purity[k]
            );
        }
    }
    Ok(())
}
