//! Purity of the work qubit after tracing out the dilation ancillas: full
//! revivals at period multiples in the broken regime, decay toward the
//! maximally mixed value 1/2 in the unbroken regime.

use apt_flow::circuit::simulate;
use apt_flow::lcu::{build_circuit, environment_view, DilationScheme};
use apt_flow::{AptHamiltonian, Result, C64};

fn purity_at(h: &AptHamiltonian, t: f64) -> Result<f64> {
    let circuit = build_circuit(h, t, DilationScheme::ThreeQubit)?;
    let mut input = vec![C64::new(0.0, 0.0); circuit.dim()];
    input[0] = C64::new(1.0, 0.0);
    let output = simulate(&circuit, &input)?;
    Ok(environment_view(&output, &[0, 1])?.purity())
}

fn main() -> Result<()> {
    let broken = AptHamiltonian::from_lambda(3.0, 2.0)?;
    let period = std::f64::consts::PI / (3.0 * 3.0f64.sqrt());
    println!("lambda = 2 (broken): purity dips and revives every T = {period:.6}");
    for k in 0..=8 {
        let t = k as f64 * period / 4.0;
        println!("  t = {t:.4}  purity = {:.9}", purity_at(&broken, t)?);
    }

    let unbroken = AptHamiltonian::from_lambda(3.0, 0.5)?;
    println!("\nlambda = 0.5 (unbroken): purity decays toward 1/2");
    for t in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        println!("  t = {t:.1}  purity = {:.9}", purity_at(&unbroken, t)?);
    }
    Ok(())
}
