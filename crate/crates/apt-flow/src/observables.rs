//! Information-flow metrics: trace distance, distinguishability time series,
//! oscillation period and amplitude extraction, purity, and a backflow
//! witness.

use crate::apt::{AptHamiltonian, ExperimentalFamily, PhaseRegime};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, DensityMatrix};

/// Distinguishability increments above this threshold count as backflow.
pub const BACKFLOW_TOL: f64 = 1e-9;
/// Numeric slack allowed above the exact distinguishability ceiling of 1.
pub const DISTINGUISHABILITY_CEILING_SLACK: f64 = 1e-10;
/// Grid points per formula period (or per scan horizon) in the oscillation
/// search.
const SCAN_POINTS: usize = 1000;
/// Golden-section iterations; the bracket shrinks below double resolution
/// long before this.
const GOLDEN_ITERS: usize = 90;

/// Trace distance ½·tr|ρ₁ − ρ₂|. The difference is Hermitian, so |·|
/// reduces to absolute eigenvalues.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Dimension(format!(
            "trace distance needs equal dims, got {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let diff = rho1.matrix() - rho2.matrix();
    let eigen = hermitian_eigen(&diff)?;
    Ok(0.5 * eigen.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// tr(ρ²); 1 for pure states, 1/dim for the maximally mixed state.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Sampled evolution of a pair of initial states and the derived
/// distinguishability, with optional per-sample purity and post-selection
/// success probability.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub rho_a: Vec<DensityMatrix>,
    pub rho_b: Vec<DensityMatrix>,
    pub distinguishability: Vec<f64>,
    pub purity: Option<Vec<f64>>,
    pub success_probability: Option<Vec<f64>>,
}

impl EvolutionTrace {
    /// Validates lengths, strictly increasing times, and the
    /// distinguishability range [0, 1 + slack].
    pub fn new(
        times: Vec<f64>,
        rho_a: Vec<DensityMatrix>,
        rho_b: Vec<DensityMatrix>,
        distinguishability: Vec<f64>,
        purity: Option<Vec<f64>>,
        success_probability: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = times.len();
        let lengths_ok = rho_a.len() == n
            && rho_b.len() == n
            && distinguishability.len() == n
            && purity.as_ref().map_or(true, |p| p.len() == n)
            && success_probability.as_ref().map_or(true, |p| p.len() == n);
        if !lengths_ok {
            return Err(Error::Dimension("trace columns have mismatched lengths".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("times must be strictly increasing".into()));
        }
        if distinguishability
            .iter()
            .any(|&d| !(-0.0..=1.0 + DISTINGUISHABILITY_CEILING_SLACK).contains(&d))
        {
            return Err(Error::Domain("distinguishability outside [0, 1]".into()));
        }
        Ok(Self { times, rho_a, rho_b, distinguishability, purity, success_probability })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Evolves |0⟩⟨0| and |1⟩⟨1| under the Hamiltonian and records their trace
/// distance at each sample time.
pub fn distinguishability_series(h: &AptHamiltonian, times: &[f64]) -> Result<EvolutionTrace> {
    let zero = DensityMatrix::basis_state(2, 0)?;
    let one = DensityMatrix::basis_state(2, 1)?;
    let mut rho_a = Vec::with_capacity(times.len());
    let mut rho_b = Vec::with_capacity(times.len());
    let mut d = Vec::with_capacity(times.len());
    for &t in times {
        let a = h.evolve(&zero, t)?;
        let b = h.evolve(&one, t)?;
        d.push(trace_distance(&a, &b)?);
        rho_a.push(a);
        rho_b.push(b);
    }
    EvolutionTrace::new(times.to_vec(), rho_a, rho_b, d, None, None)
}

/// Oscillation data of the distinguishability for one family point. Period
/// and amplitude are present exactly in the broken phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationMetrics {
    pub regime: PhaseRegime,
    pub period: Option<f64>,
    pub amplitude: Option<f64>,
    pub d_min: f64,
    pub d_max: f64,
}

/// Detects the distinguishability oscillation numerically for the
/// experimental family at (s, λ).
///
/// Broken phase: the first full recovery of D after t = 0 is located by a
/// grid scan at step T/1000 (T from the gap formula) and sharpened by
/// golden-section search; d_min comes from a golden-section minimization on
/// one period and amplitude = d_max − d_min. Unbroken phase and exceptional
/// point: D never recovers, so period and amplitude are absent and d_min is
/// the grid infimum over a horizon of 10 decay times.
pub fn oscillation_metrics(s: f64, lambda: f64) -> Result<OscillationMetrics> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("energy scale s must be positive, got {s}")));
    }
    let family = ExperimentalFamily::new(s, lambda)?;
    let h = family.hamiltonian();
    let regime = h.spectrum().regime;
    let d_of = |t: f64| -> Result<f64> {
        let zero = DensityMatrix::basis_state(2, 0)?;
        let one = DensityMatrix::basis_state(2, 1)?;
        trace_distance(&h.evolve(&zero, t)?, &h.evolve(&one, t)?)
    };

    match regime {
        PhaseRegime::Broken => {
            let t_formula = family.period_formula().expect("broken phase has a period");
            let step = t_formula / SCAN_POINTS as f64;
            // D starts at 1 and dips; bracket the first local maximum after
            // the dip, then polish it.
            let mut prev = d_of(0.0)?;
            let mut rising = false;
            let mut bracket = None;
            for k in 1..=(2 * SCAN_POINTS) {
                let t = k as f64 * step;
                let d = d_of(t)?;
                if d > prev {
                    rising = true;
                } else if rising && d < prev {
                    bracket = Some(((k - 2) as f64 * step, t));
                    break;
                }
                prev = d;
            }
            let (lo, hi) = bracket.ok_or_else(|| {
                Error::Domain("no distinguishability recovery found in two formula periods".into())
            })?;
            let (period, d_max) = golden_max(&d_of, lo, hi)?;
            let (_, d_min) = golden_min(&d_of, 0.0, period)?;
            Ok(OscillationMetrics {
                regime,
                period: Some(period),
                amplitude: Some(d_max - d_min),
                d_min,
                d_max,
            })
        }
        PhaseRegime::Unbroken | PhaseRegime::ExceptionalPoint => {
            let gap = (1.0 - lambda * lambda).max(1e-6);
            let horizon = 10.0 / (s * gap);
            let mut d_min = f64::INFINITY;
            for k in 0..=SCAN_POINTS {
                let t = horizon * k as f64 / SCAN_POINTS as f64;
                d_min = d_min.min(d_of(t)?);
            }
            Ok(OscillationMetrics { regime, period: None, amplitude: None, d_min, d_max: d_of(0.0)? })
        }
    }
}

/// Scans a distinguishability series for strictly positive increments.
/// `has_backflow` requires an increment above [`BACKFLOW_TOL`];
/// `total_backflow` sums every positive increment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackflowWitness {
    pub has_backflow: bool,
    pub total_backflow: f64,
}

pub fn backflow_witness(trace: &EvolutionTrace) -> Result<BackflowWitness> {
    if trace.len() < 2 {
        return Err(Error::Domain("backflow witness needs at least two samples".into()));
    }
    let mut has = false;
    let mut total = 0.0;
    for w in trace.distinguishability.windows(2) {
        let inc = w[1] - w[0];
        if inc > BACKFLOW_TOL {
            has = true;
        }
        if inc > 0.0 {
            total += inc;
        }
    }
    Ok(BackflowWitness { has_backflow: has, total_backflow: total })
}

fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

fn golden_max(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let neg = |t: f64| f(t).map(|v| -v);
    let (t, v) = golden_min(&neg, a, b)?;
    Ok((t, -v))
}
