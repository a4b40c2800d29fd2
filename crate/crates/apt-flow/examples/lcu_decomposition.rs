//! Splits the propagator into a Pauli combination and derives the ancilla
//! rotation angles that load its coefficients.

use apt_flow::lcu::{angle_plan, lcu_coefficients};
use apt_flow::{AptHamiltonian, Result};

fn main() -> Result<()> {
    let h = AptHamiltonian::from_lambda(3.0, 2.0)?;
    // Quarter period of the lambda = 2 family.
    let t = 0.25 * std::f64::consts::PI / (3.0 * 3.0f64.sqrt());

    let dec = lcu_coefficients(&h, t)?;
    println!("exp(-iHt) ~ sum of weighted Paulis at t = {t:.6}:");
    for (alpha, label) in &dec.terms {
        println!("  {label}: {alpha:+.6}");
    }
    println!("one-norm {:.6}", dec.one_norm);
    print!("normalized column:");
    for entry in &dec.normalized_column {
        print!(" {entry:+.6}");
    }
    println!("\nsquared weights (branch probabilities before interference):");
    for (entry, label) in dec.normalized_column.iter().zip(["I", "X", "Y", "Z"]) {
        println!("  |c_{label}|^2 = {:.6}", entry.norm_sqr());
    }

    let plan = angle_plan(&dec);
    println!("\nancilla preparation angles:");
    println!("  theta0 = {:.6}", plan.theta0);
    println!("  theta1 = {:.6}", plan.theta1);
    println!("  theta2 = {:.6}", plan.theta2);
    Ok(())
}
