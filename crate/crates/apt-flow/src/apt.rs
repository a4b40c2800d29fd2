//! The anti-PT-symmetric qubit Hamiltonian: parameters, spectrum, phase
//! classification, and exact closed-form time evolution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexMatrix, DensityMatrix};

/// Radicand tolerance separating the broken and unbroken phases from the
/// exceptional point.
pub const REGIME_TOL: f64 = 1e-12;
/// Below this value of |w·t/2| the trigonometric/hyperbolic forms hand over
/// to a Taylor series in (w·t/2)^2.
pub const SERIES_SWITCH: f64 = 1e-4;
/// Entrywise tolerance for the symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Hyperbolic argument beyond which the normalized evolution switches to an
/// exponentially rescaled propagator to avoid overflow.
const SCALED_EVOLUTION_THRESHOLD: f64 = 300.0;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Symmetry phase of the Hamiltonian, decided by the sign of the radicand
/// r²cos²θ − μs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegime {
    /// Real eigenvalue gap; oscillatory dynamics.
    Broken,
    /// Imaginary eigenvalue gap; monotone exponential dynamics.
    Unbroken,
    /// Coalesced eigenvalues and eigenvectors.
    ExceptionalPoint,
}

impl std::fmt::Display for PhaseRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseRegime::Broken => "Broken",
            PhaseRegime::Unbroken => "Unbroken",
            PhaseRegime::ExceptionalPoint => "ExceptionalPoint",
        })
    }
}

/// Eigenvalue data of an [`AptHamiltonian`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub eps_plus: C64,
    pub eps_minus: C64,
    /// Gap eps_plus − eps_minus; real in the broken phase, imaginary in the
    /// unbroken phase.
    pub w: C64,
    /// w² = 4·(r²cos²θ − μs), always real.
    pub w_squared: f64,
    pub regime: PhaseRegime,
}

/// Outcome of the anti-PT symmetry test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryCheck {
    /// (PT)Ĥ(PT)⁻¹ = −Ĥᵀ with P = σ_x and T = complex conjugation; holds
    /// for every parameter choice.
    pub negative_transpose: bool,
    /// {Ĥ, PT} = 0, which additionally needs Ĥᵀ = Ĥ; holds iff s = μ.
    pub anti_commutes: bool,
}

/// Non-Hermitian single-qubit Hamiltonian
/// [[r·e^{iθ}, i·s], [i·μ, −r·e^{−iθ}]], with ℏ = 1 so time carries inverse
/// energy units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AptHamiltonian {
    r: f64,
    theta: f64,
    s: f64,
    mu: f64,
}

impl AptHamiltonian {
    /// Builds the Hamiltonian; every parameter must be finite.
    pub fn new(r: f64, theta: f64, s: f64, mu: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("theta", theta), ("s", s), ("mu", mu)] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("parameter {name} is not finite")));
            }
        }
        Ok(Self { r, theta, s, mu })
    }

    /// Experimental one-parameter family θ=0, r=λs, μ=s, i.e.
    /// H = s·(i·σ_x + λ·σ_z).
    pub fn from_lambda(s: f64, lambda: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain(format!("energy scale s must be finite and >= 0, got {s}")));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Self::new(lambda * s, 0.0, s, s)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// The 2×2 matrix [[r·e^{iθ}, i·s], [i·μ, −r·e^{−iθ}]].
    pub fn matrix(&self) -> ComplexMatrix {
        let e_plus = Complex64::from_polar(self.r, self.theta);
        ComplexMatrix::from2x2(
            e_plus,
            c(0.0, self.s),
            c(0.0, self.mu),
            -e_plus.conj(),
        )
    }

    /// Radicand r²cos²θ − μs; its sign selects the phase regime.
    pub fn radicand(&self) -> f64 {
        let rc = self.r * self.theta.cos();
        rc * rc - self.mu * self.s
    }

    /// Eigenvalues, gap, and phase classification. The square root takes the
    /// principal branch: positive real for a positive radicand, positive
    /// imaginary for a negative one. Downstream physics depends only on w².
    pub fn spectrum(&self) -> SpectralData {
        let kappa = self.radicand();
        let root = if kappa >= 0.0 { c(kappa.sqrt(), 0.0) } else { c(0.0, (-kappa).sqrt()) };
        let drift = c(0.0, self.r * self.theta.sin());
        let regime = if kappa < -REGIME_TOL {
            PhaseRegime::Unbroken
        } else if kappa > REGIME_TOL {
            PhaseRegime::Broken
        } else {
            PhaseRegime::ExceptionalPoint
        };
        SpectralData {
            eps_plus: drift + root,
            eps_minus: drift - root,
            w: root.scale(2.0),
            w_squared: 4.0 * kappa,
            regime,
        }
    }

    /// Tests the anti-PT structure at the matrix level.
    pub fn symmetry_check(&self) -> SymmetryCheck {
        let h = self.matrix();
        let sigma_x = ComplexMatrix::from2x2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        // (PT) H (PT)^{-1} = sigma_x · conj(H) · sigma_x.
        let conjugated = &(&sigma_x * &h.conj()) * &sigma_x;
        let minus_transpose = h.transpose().scale(c(-1.0, 0.0));
        let minus_h = h.scale(c(-1.0, 0.0));
        SymmetryCheck {
            negative_transpose: conjugated.approx_eq(&minus_transpose, SYMMETRY_TOL),
            anti_commutes: conjugated.approx_eq(&minus_h, SYMMETRY_TOL),
        }
    }

    /// The pair (f₁, f₂) with
    /// exp(−iĤt) = e^{r·sinθ·t}·[f₁·I − i·f₂·(Ĥ − i·r·sinθ·I)],
    /// i.e. f₁ = cos(wt/2) and f₂ = sin(wt/2)/(w/2) evaluated as entire
    /// functions of w²; both are always real.
    pub fn propagator_weights(&self, t: f64) -> (f64, f64) {
        entire_pair(self.radicand(), t)
    }

    /// Closed-form exp(−iĤt).
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        if !t.is_finite() {
            return Err(Error::Domain("non-finite time".into()));
        }
        let (f1, f2) = self.propagator_weights(t);
        let prefactor = (self.r * self.theta.sin() * t).exp();
        Ok(self.propagator_from_parts(f1, f2).scale(c(prefactor, 0.0)))
    }

    /// f₁·I − i·f₂·(Ĥ − i·r·sinθ·I), the traceless-generator part of the
    /// propagator.
    fn propagator_from_parts(&self, f1: f64, f2: f64) -> ComplexMatrix {
        let rc = self.r * self.theta.cos();
        // H − i·r·sinθ·I = [[r·cosθ, i·s], [i·μ, −r·cosθ]].
        ComplexMatrix::from2x2(
            c(f1, -f2 * rc),
            c(f2 * self.s, 0.0),
            c(f2 * self.mu, 0.0),
            c(f1, f2 * rc),
        )
    }

    /// Normalized non-unitary evolution
    /// ρ(t) = e^{−iĤt} ρ₀ e^{iĤ†t} / tr[e^{−iĤt} ρ₀ e^{iĤ†t}].
    ///
    /// Positive scalar factors of the propagator cancel, so the global
    /// e^{r·sinθ·t} is dropped and deep in the unbroken phase the weight
    /// pair is exponentially rescaled, keeping the computation finite for
    /// arbitrarily long times.
    pub fn evolve(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if !t.is_finite() {
            return Err(Error::Domain("non-finite time".into()));
        }
        if rho0.dim() != 2 {
            return Err(Error::Dimension(format!(
                "evolution is defined on one qubit, got dim {}",
                rho0.dim()
            )));
        }
        let kappa = self.radicand();
        let (f1, f2) = if kappa < 0.0 && (-kappa).sqrt() * t.abs() > SCALED_EVOLUTION_THRESHOLD {
            scaled_hyperbolic_pair(kappa, t)
        } else {
            entire_pair(kappa, t)
        };
        let u = self.propagator_from_parts(f1, f2);
        let raw = &(&u * rho0.matrix()) * &u.adjoint();
        let norm = raw.trace().re;
        if !(norm > 1e-300) || !raw.all_finite() {
            return Err(Error::Domain(format!(
                "evolution normalization degenerated (trace {norm:.3e})"
            )));
        }
        DensityMatrix::new(raw.scale(c(1.0 / norm, 0.0)))
    }
}

/// (f₁, f₂) = (cos(wt/2), sin(wt/2)/(w/2)) as entire functions of the
/// radicand κ = (w/2)², with z = κ·t²:
/// trigonometric for κ > 0, hyperbolic for κ < 0, Taylor for |z| < 1e-8.
fn entire_pair(kappa: f64, t: f64) -> (f64, f64) {
    let z = kappa * t * t;
    if z.abs() < SERIES_SWITCH * SERIES_SWITCH {
        // cos(√z) and t·sin(√z)/√z expanded in z; six terms keep the
        // truncation error far below double precision at |z| < 1e-8.
        let f1 = 1.0
            + z * (-1.0 / 2.0
                + z * (1.0 / 24.0
                    + z * (-1.0 / 720.0 + z * (1.0 / 40320.0 + z * (-1.0 / 3628800.0)))));
        let f2 = 1.0
            + z * (-1.0 / 6.0
                + z * (1.0 / 120.0
                    + z * (-1.0 / 5040.0 + z * (1.0 / 362880.0 + z * (-1.0 / 39916800.0)))));
        (f1, t * f2)
    } else if kappa > 0.0 {
        let half_w = kappa.sqrt();
        ((half_w * t).cos(), (half_w * t).sin() / half_w)
    } else {
        let om = (-kappa).sqrt();
        ((om * t).cosh(), (om * t).sinh() / om)
    }
}

/// Hyperbolic pair times e^{−|om·t|}, used when cosh would overflow. Valid
/// only where positive rescaling cancels (the normalized evolution).
fn scaled_hyperbolic_pair(kappa: f64, t: f64) -> (f64, f64) {
    let om = (-kappa).sqrt();
    let x = om * t;
    let damp = (-2.0 * x.abs()).exp();
    let f1 = (1.0 + damp) / 2.0;
    let f2 = x.signum() * (1.0 - damp) / (2.0 * om);
    (f1, f2)
}

/// One-parameter experimental family: θ = 0, r = λs, μ = s, so that
/// H = s·(i·σ_x + λ·σ_z). λ < 1 is unbroken, λ > 1 broken, λ = 1 the
/// exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentalFamily {
    s: f64,
    lambda: f64,
}

impl ExperimentalFamily {
    pub fn new(s: f64, lambda: f64) -> Result<Self> {
        // Delegates validation: same domain as from_lambda.
        AptHamiltonian::from_lambda(s, lambda)?;
        Ok(Self { s, lambda })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn hamiltonian(&self) -> AptHamiltonian {
        AptHamiltonian::from_lambda(self.s, self.lambda)
            .expect("parameters validated at construction")
    }

    /// Oscillation rate Ω = s·√(λ²−1) in the broken phase, or the decay
    /// rate Ω̃ = s·√(1−λ²) in the unbroken phase.
    pub fn rate(&self) -> f64 {
        self.s * (self.lambda * self.lambda - 1.0).abs().sqrt()
    }

    /// Full-recovery period T = π/(s·√(λ²−1)); defined in the broken phase
    /// only.
    pub fn period_formula(&self) -> Option<f64> {
        let h = self.hamiltonian();
        match h.spectrum().regime {
            PhaseRegime::Broken => Some(std::f64::consts::PI / self.rate()),
            _ => None,
        }
    }
}
