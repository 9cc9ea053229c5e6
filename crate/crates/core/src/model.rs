//! Catalog of factorizing scattering models and their minimal solutions,
//! evaluated on the shifted line `F_min(θ + iπ)` for real rapidity θ.
//!
//! Conventions:
//!
//! * Free boson: `F_min ≡ 1`.
//! * Ising: `F_min(ζ) = -i sinh(ζ/2)`, so `F_min(θ + iπ) = cosh(θ/2)`.
//! * Sinh-Gordon with coupling `B ∈ (0, 2)`:
//!
//!   ```text
//!   F_min(θ + iπ) = exp( 8 ∫₀^∞ dt/t · sinh(tB/4) sinh(t(2−B)/4) sinh(t/2) / sinh²(t)
//!                                      · sin²(tθ / 2π) )
//!   ```
//!
//!   This is the Fring–Mussardo–Simonetti integral representation evaluated at
//!   `ζ = θ + iπ` with the normalisation constant fixed by `F_min(iπ) = 1`, so
//!   that `F_P(0) = P(1) = 1` reproduces the Hamiltonian. The large-rapidity
//!   limit is then `exp(4 ∫₀^∞ h(t) dt)` with `h` the prefactor of the
//!   `sin²` term divided by `t`; it exceeds 1 and is invariant under `B ↦ 2 − B`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::AdaptiveIntegrator;
use crate::scalar::Scalar;

/// Large-rapidity behaviour of `F_min(θ + iπ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Asymptotics<T> {
    Finite(T),
    Unbounded,
}

impl<T: Copy> Asymptotics<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Asymptotics::Finite(v) => Some(v),
            Asymptotics::Unbounded => None,
        }
    }
}

/// Anything that can supply a shifted minimal solution to the kernel.
///
/// New models (for instance non-Lagrangian deformations of sinh-Gordon) only
/// need to implement this trait.
pub trait MinimalSolution<T: Scalar>: Send + Sync {
    /// `F_min(θ + iπ)`.
    fn fmin_shifted(&self, theta: T) -> Result<T>;

    /// `lim_{θ→∞} F_min(θ + iπ)`, or `Unbounded`.
    fn asymptotic_constant(&self) -> Result<Asymptotics<T>>;

    /// Exponent `k` with `F_min(θ + iπ) ~ e^{kθ}` as `θ → ∞`.
    fn growth_order(&self) -> T;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelFamily {
    Free,
    Ising,
    SinhGordon,
}

impl ModelFamily {
    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Free => "free",
            ModelFamily::Ising => "ising",
            ModelFamily::SinhGordon => "sinh-gordon",
        }
    }
}

impl std::str::FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(ModelFamily::Free),
            "ising" => Ok(ModelFamily::Ising),
            "sinh-gordon" => Ok(ModelFamily::SinhGordon),
            other => Err(invalid(
                "model",
                format!("unknown model `{other}` (expected free, ising or sinh-gordon)"),
            )),
        }
    }
}

/// A named scattering model with particle mass `μ` and, for sinh-Gordon,
/// coupling `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringModel<T> {
    family: ModelFamily,
    mass: T,
    sinh_gordon: Option<SinhGordon<T>>,
}

impl<T: Scalar> ScatteringModel<T> {
    pub fn free(mass: T) -> Result<Self> {
        Ok(Self {
            family: ModelFamily::Free,
            mass: check_mass(mass)?,
            sinh_gordon: None,
        })
    }

    pub fn ising(mass: T) -> Result<Self> {
        Ok(Self {
            family: ModelFamily::Ising,
            mass: check_mass(mass)?,
            sinh_gordon: None,
        })
    }

    pub fn sinh_gordon(mass: T, coupling: T) -> Result<Self> {
        Ok(Self {
            family: ModelFamily::SinhGordon,
            mass: check_mass(mass)?,
            sinh_gordon: Some(SinhGordon::new(coupling)?),
        })
    }

    /// Builds a model from its family; `coupling` is required exactly for
    /// sinh-Gordon.
    pub fn from_parts(family: ModelFamily, mass: T, coupling: Option<T>) -> Result<Self> {
        match (family, coupling) {
            (ModelFamily::Free, None) => Self::free(mass),
            (ModelFamily::Ising, None) => Self::ising(mass),
            (ModelFamily::SinhGordon, Some(b)) => Self::sinh_gordon(mass, b),
            (ModelFamily::SinhGordon, None) => {
                Err(invalid("coupling", "required for the sinh-gordon model"))
            }
            (_, Some(_)) => Err(invalid(
                "coupling",
                format!(
                    "only the sinh-gordon model takes a coupling, not {}",
                    family.name()
                ),
            )),
        }
    }

    pub fn family(&self) -> ModelFamily {
        self.family
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn coupling(&self) -> Option<T> {
        self.sinh_gordon.as_ref().map(|s| s.coupling)
    }
}

impl<T: Scalar> MinimalSolution<T> for ScatteringModel<T> {
    fn fmin_shifted(&self, theta: T) -> Result<T> {
        if !theta.is_finite() {
            return Err(invalid("theta", "rapidity must be finite"));
        }
        match self.family {
            ModelFamily::Free => Ok(T::one()),
            ModelFamily::Ising => Ok((theta * T::lit(0.5)).cosh()),
            ModelFamily::SinhGordon => self
                .sinh_gordon
                .as_ref()
                .expect("sinh-gordon model carries its coupling")
                .fmin_shifted(theta),
        }
    }

    fn asymptotic_constant(&self) -> Result<Asymptotics<T>> {
        match self.family {
            ModelFamily::Free => Ok(Asymptotics::Finite(T::one())),
            ModelFamily::Ising => Ok(Asymptotics::Unbounded),
            ModelFamily::SinhGordon => self
                .sinh_gordon
                .as_ref()
                .expect("sinh-gordon model carries its coupling")
                .asymptotic_constant(),
        }
    }

    fn growth_order(&self) -> T {
        match self.family {
            ModelFamily::Ising => T::lit(0.5),
            ModelFamily::Free | ModelFamily::SinhGordon => T::zero(),
        }
    }
}

fn check_mass<T: Scalar>(mass: T) -> Result<T> {
    if mass.is_finite() && mass > T::zero() {
        Ok(mass)
    } else {
        Err(invalid(
            "mass",
            format!("must be positive and finite, got {mass}"),
        ))
    }
}

/// Sinh-Gordon minimal solution evaluated by adaptive quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct SinhGordon<T> {
    coupling: T,
    /// Absolute tolerance on the exponent integral.
    pub tolerance: T,
    /// Integrand envelope below which the tail is discarded.
    pub tail_cutoff: T,
    /// Successive-difference threshold for the asymptotic constant.
    pub cauchy_tolerance: T,
}

impl<T: Scalar> SinhGordon<T> {
    pub fn new(coupling: T) -> Result<Self> {
        if !(coupling > T::zero() && coupling < T::lit(2.0)) {
            return Err(invalid(
                "coupling",
                format!("sinh-gordon coupling must lie in (0, 2), got {coupling}"),
            ));
        }
        Ok(Self {
            coupling,
            tolerance: T::lit(1e-14).max(T::epsilon() * T::lit(50.0)),
            tail_cutoff: T::lit(1e-16),
            cauchy_tolerance: T::lit(1e-8).max(T::epsilon() * T::lit(100.0)),
        })
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    /// `sinh(tB/4) sinh(t(2−B)/4) sinh(t/2) / (t sinh²t)`, with its finite
    /// limit `B(2−B)/32` at `t = 0`.
    pub fn weight(&self, t: T) -> T {
        let b = self.coupling;
        let quarter = T::lit(0.25);
        if t == T::zero() {
            return b * (T::lit(2.0) - b) / T::lit(32.0);
        }
        // All four hyperbolic sines from two expm1 calls:
        // x1 = tB/4, x2 = t(2−B)/4, x1 + x2 = t/2, 2(x1 + x2) = t.
        let e1 = (t * b * quarter).exp_m1();
        let e2 = (t * (T::lit(2.0) - b) * quarter).exp_m1();
        let e3 = e1 + e2 + e1 * e2;
        let e4 = e3 * (e3 + T::lit(2.0));
        let sinh = |e: T| e * (e + T::lit(2.0)) / (T::lit(2.0) * (e + T::one()));
        let s = sinh(e4);
        sinh(e1) / t * sinh(e2) * sinh(e3) / (s * s)
    }

    /// Upper integration limit: first integer `t ≥ 1` past which
    /// `8·weight(t)` stays below the tail cutoff.
    pub fn truncation_point(&self) -> T {
        let mut t = T::one();
        while T::lit(8.0) * self.weight(t) >= self.tail_cutoff && t < T::lit(200.0) {
            t = t + T::one();
        }
        t
    }

    fn integrator(&self) -> AdaptiveIntegrator<T> {
        AdaptiveIntegrator::new(self.tolerance, T::zero())
    }

    /// Panel boundaries: split at t = 1, then half-periods of the `sin²`
    /// factor so every panel sees at most one oscillation.
    fn breakpoints(&self, theta: T, upper: T) -> Vec<T> {
        let mut breaks = vec![T::zero(), T::one()];
        let width = if theta == T::zero() {
            T::one()
        } else {
            T::one().min(T::PI() * T::PI() / theta.abs())
        };
        let mut t = T::one();
        while t < upper {
            t = (t + width).min(upper);
            breaks.push(t);
        }
        breaks
    }

    pub fn fmin_shifted(&self, theta: T) -> Result<T> {
        if theta == T::zero() {
            return Ok(T::one());
        }
        let upper = self.truncation_point();
        let freq = theta / (T::lit(2.0) * T::PI());
        let eight = T::lit(8.0);
        let integrand = |t: T| {
            let s = (t * freq).sin();
            eight * self.weight(t) * s * s
        };
        let est = self
            .integrator()
            .integrate_breakpoints(integrand, &self.breakpoints(theta, upper))?;
        Ok(est.value.exp())
    }

    /// Samples `F_min(θ + iπ)` at θ = 10, 20, 40, … until successive values
    /// agree to `cauchy_tolerance` and returns the last sample.
    pub fn asymptotic_constant(&self) -> Result<Asymptotics<T>> {
        let mut theta = T::lit(10.0);
        let mut prev = self.fmin_shifted(theta)?;
        let mut last_diff = T::infinity();
        for _ in 0..6 {
            theta = theta * T::lit(2.0);
            let next = self.fmin_shifted(theta)?;
            last_diff = (next - prev).abs();
            if last_diff < self.cauchy_tolerance {
                return Ok(Asymptotics::Finite(next));
            }
            prev = next;
        }
        Err(Error::ExtrapolationFailure {
            last_difference: last_diff.to_f64_lossy(),
            tolerance: self.cauchy_tolerance.to_f64_lossy(),
        })
    }
}
