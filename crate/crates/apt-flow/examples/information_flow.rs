//! Distinguishability of two initially orthogonal states over time: periodic
//! full recovery in the broken regime, monotone loss in the unbroken one.

use apt_flow::observables::{backflow_witness, distinguishability_series};
use apt_flow::{AptHamiltonian, Result};

fn main() -> Result<()> {
    let times: Vec<f64> = (0..=24).map(|k| k as f64 / 16.0).collect();

    for lambda in [2.0, 1.5, 1.01, 0.5] {
        let h = AptHamiltonian::from_lambda(3.0, lambda)?;
        let trace = distinguishability_series(&h, &times)?;
        let witness = backflow_witness(&trace)?;

        println!("lambda = {lambda} ({})", h.spectrum().regime);
        print!("  D(t): ");
        for (t, d) in times.iter().zip(&trace.distinguishability) {
            if (t * 4.0).fract() == 0.0 {
                print!("{d:.3} @ t={t:.2}   ");
            }
        }
        println!();
        println!(
            "  backflow: {} (total increase {:.4})",
            witness.has_backflow, witness.total_backflow
        );
        println!();
    }
    Ok(())
}
