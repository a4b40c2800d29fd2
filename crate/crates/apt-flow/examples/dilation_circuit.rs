//! Runs the three-qubit dilation circuit and compares its post-selected
//! work-qubit state with direct non-unitary evolution.

use apt_flow::circuit::{post_select, simulate};
use apt_flow::lcu::{build_circuit, DilationScheme};
use apt_flow::{AptHamiltonian, DensityMatrix, Result, C64};

fn main() -> Result<()> {
    let h = AptHamiltonian::from_lambda(3.0, 2.0)?;
    println!("three-qubit dilation of exp(-iHt), post-selected on ancilla |00>:");
    println!("{:>6} {:>10} {:>14} {:>18}", "t", "gates", "success prob", "fidelity vs direct");

    for t in [0.0, 0.15, 0.3023, 0.45, 0.6046] {
        let circuit = build_circuit(&h, t, DilationScheme::ThreeQubit)?;
        let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
        input[0] = C64::new(1.0, 0.0);
        let output = simulate(&circuit, &input)?;
        let (work, probability) = post_select(&output, &[0, 1], "00")?;

        let direct = h.evolve(&DensityMatrix::basis_state(2, 0)?, t)?;
        let mut fidelity = 0.0;
        for (i, wi) in work.iter().enumerate() {
            for (j, wj) in work.iter().enumerate() {
                fidelity += (wi.conj() * direct.matrix().get(i, j) * wj).re;
            }
        }
        println!(
            "{t:>6} {:>10} {probability:>14.6} {fidelity:>18.12}",
            circuit.len()
        );
    }

    let four = build_circuit(&h, 0.3, DilationScheme::FourQubitExperimental)?;
    println!(
        "\nfour-qubit variant: {} gates, first gate flips the second work qubit",
        four.len()
    );
    Ok(())
}
