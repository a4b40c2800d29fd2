//! Synthesizes a controlled-rotation tree that loads an arbitrary weight
//! vector into register amplitudes, the general form of the ancilla
//! preparation used by the dilation circuits.

use apt_flow::circuit::simulate;
use apt_flow::lcu::prepare_lcu_state;
use apt_flow::{Result, C64};

fn main() -> Result<()> {
    let weights = [
        C64::new(1.0, 0.0),
        C64::new(-0.5, 0.5),
        C64::new(0.0, 2.0),
        C64::new(0.25, 0.0),
        C64::new(0.0, -1.0),
    ];
    let circuit = prepare_lcu_state(&weights)?;
    println!(
        "{} weights -> {} qubits, {} gates",
        weights.len(),
        circuit.n_qubits(),
        circuit.len()
    );

    let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
    input[0] = C64::new(1.0, 0.0);
    let state = simulate(&circuit, &input)?;

    let norm = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    println!("{:>6} {:>22} {:>22}", "index", "prepared amplitude", "target amplitude");
    for (index, amplitude) in state.iter().enumerate() {
        let target = weights.get(index).map_or(C64::new(0.0, 0.0), |w| w / norm);
        println!("{index:>6} {:>22} {:>22}", format!("{amplitude:+.6}"), format!("{target:+.6}"));
    }
    Ok(())
}
