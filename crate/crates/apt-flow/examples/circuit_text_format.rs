//! Serializes a dilation circuit to the line-oriented text format and parses
//! it back.

use apt_flow::circuit::{export_circuit, parse_circuit};
use apt_flow::lcu::{build_circuit, DilationScheme};
use apt_flow::{AptHamiltonian, Result};

fn main() -> Result<()> {
    let h = AptHamiltonian::from_lambda(3.0, 2.0)?;
    let circuit = build_circuit(&h, 0.2, DilationScheme::ThreeQubit)?;

    let text = export_circuit(&circuit);
    println!("--- exported ---");
    print!("{text}");
    println!("----------------");

    let parsed = parse_circuit(&text)?;
    println!("round trip identical: {}", circuit.approx_eq(&parsed, 0.0));

    // The parser reports the offending line on malformed input.
    let bad = "qubits 2\nry q0\n";
    match parse_circuit(bad) {
        Err(e) => println!("malformed input rejected: {e}"),
        Ok(_) => println!("unexpectedly parsed"),
    }
    Ok(())
}
