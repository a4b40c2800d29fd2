//! Classifies Hamiltonians across the three spectral regimes and checks the
//! defining symmetry relations.

use apt_flow::{AptHamiltonian, Result};

fn main() -> Result<()> {
    let cases = [
        ("broken (real gap)", AptHamiltonian::from_lambda(3.0, 2.0)?),
        ("exceptional point", AptHamiltonian::from_lambda(3.0, 1.0)?),
        ("unbroken (imaginary gap)", AptHamiltonian::from_lambda(3.0, 0.5)?),
        ("generic off-family", AptHamiltonian::new(1.5, 0.7, 2.0, -0.4)?),
    ];

    for (label, h) in &cases {
        let spectrum = h.spectrum();
        let symmetry = h.symmetry_check();
        println!("{label}");
        println!("  eigenvalues      {:+.6} and {:+.6}", spectrum.eps_plus, spectrum.eps_minus);
        println!("  gap w            {:+.6} (w^2 = {:+.6})", spectrum.w, spectrum.w_squared);
        println!("  regime           {}", spectrum.regime);
        println!("  sigma_x H* sigma_x = -H^T   {}", symmetry.negative_transpose);
        println!("  anti-commutes with parity-time   {}", symmetry.anti_commutes);
        println!();
    }
    Ok(())
}
