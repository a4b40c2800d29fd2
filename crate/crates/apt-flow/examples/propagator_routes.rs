//! Cross-checks the closed-form propagator against the series matrix
//! exponential, the determinant law, and the nilpotent short-circuit at the
//! exceptional point.

use apt_flow::numerics::expm_oracle;
use apt_flow::{AptHamiltonian, ComplexMatrix, Result, C64};

fn main() -> Result<()> {
    let h = AptHamiltonian::new(1.2, 0.4, 2.5, -1.1)?;
    println!("generic Hamiltonian, two evaluation routes for exp(-iHt):");
    for t in [0.1, 0.5, 1.3] {
        let closed = h.propagator(t)?;
        let series = expm_oracle(&h.matrix(), t)?;
        let gap = (&closed - &series).max_abs_entry();
        let det = closed.get(0, 0) * closed.get(1, 1) - closed.get(0, 1) * closed.get(1, 0);
        let det_law = (2.0 * 1.2 * 0.4f64.sin() * t).exp();
        println!(
            "  t = {t:<4}  |closed - series| = {gap:.3e}   |det| = {:.9} (law {det_law:.9})",
            det.norm()
        );
    }

    // At the exceptional point the shifted Hamiltonian squares to zero, so
    // the exponential truncates after the linear term.
    let ep = AptHamiltonian::from_lambda(3.0, 1.0)?;
    let t = 0.8;
    let linear = &ComplexMatrix::identity(2) - &ep.matrix().scale(C64::new(0.0, t));
    let gap = (&ep.propagator(t)? - &linear).max_abs_entry();
    println!("\nexceptional point: |exp(-iHt) - (I - iHt)| = {gap:.3e} at t = {t}");
    Ok(())
}
