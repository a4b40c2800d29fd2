//! Ensemble pipeline: the uniform background of a pseudo-pure state passes
//! through the circuit untouched, and the renormalized deviation block
//! reproduces the pure-state distinguishability.

use apt_flow::circuit::{post_select, simulate};
use apt_flow::lcu::{build_circuit, DilationScheme};
use apt_flow::nmr::{
    pseudo_pure, pseudo_pure_joint_state, reduced_distinguishability, state_fidelity,
};
use apt_flow::{AptHamiltonian, DensityMatrix, Result, C64};

fn main() -> Result<()> {
    let epsilon = 1e-5;
    let pps = pseudo_pure(epsilon)?;
    println!(
        "pseudo-pure state with polarization {epsilon}: purity = {:.9} (mixed floor 1/16 = {:.9})",
        pps.matrix().purity(),
        1.0 / 16.0
    );

    let h = AptHamiltonian::from_lambda(3.0, 2.0)?;
    println!("\ndeviation pipeline vs pure-state pipeline, lambda = 2:");
    println!("{:>6} {:>14} {:>14} {:>12}", "t", "D (deviation)", "D (pure)", "gap");
    for t in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let d_pps = reduced_distinguishability(&pseudo_pure_joint_state(&h, t, epsilon)?)?;

        let circuit = build_circuit(&h, t, DilationScheme::FourQubitExperimental)?;
        let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
        input[0] = C64::new(1.0, 0.0);
        let output = simulate(&circuit, &input)?;
        let (joint, _) = post_select(&output, &[0, 1], "00")?;
        let d_pure = reduced_distinguishability(&DensityMatrix::from_pure(&joint)?)?;

        println!("{t:>6} {d_pps:>14.9} {d_pure:>14.9} {:>12.3e}", (d_pps - d_pure).abs());
    }

    let zero = DensityMatrix::basis_state(2, 0)?;
    let one = DensityMatrix::basis_state(2, 1)?;
    let mixed = DensityMatrix::maximally_mixed(2)?;
    println!("\noverlap fidelity fixtures:");
    println!("  identical states   {:.9}", state_fidelity(&zero, &zero)?);
    println!("  orthogonal states  {:.9}", state_fidelity(&zero, &one)?);
    println!("  pure vs mixed      {:.9} (1/sqrt(2) = {:.9})", state_fidelity(&zero, &mixed)?, 1.0 / 2.0f64.sqrt());
    Ok(())
}
