//! One-particle kernel of the smeared stress-energy tensor,
//!
//! ```text
//! F^{αβ}(θ, η) = F^{αβ}_free(θ, η) · F_P(θ − η) · g̃²(μ cosh θ − μ cosh η),
//! F_P(θ)       = P(cosh θ) · F_min(θ + iπ).
//! ```

use num_complex::Complex;

use crate::discretize::{CellPairRule, StepWavefunction};
use crate::error::{invalid, Error, Result};
use crate::model::{MinimalSolution, ScatteringModel};
use crate::scalar::Scalar;

/// Real polynomial `P(x) = Σ c_k x^k` normalised by `P(1) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialP<T> {
    coefficients: Vec<T>,
}

impl<T: Scalar> PolynomialP<T> {
    /// Accepts `c_0..c_d`; rejects an empty list, non-finite entries, or
    /// `|P(1) − 1| > 1e-12`.
    pub fn new(coefficients: Vec<T>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(invalid("polynomial", "needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(invalid("polynomial", "coefficients must be finite"));
        }
        let at_one = coefficients.iter().fold(T::zero(), |acc, &c| acc + c);
        let tol = T::lit(1e-12).max(T::epsilon() * T::from_count(4 * coefficients.len()));
        if (at_one - T::one()).abs() > tol {
            return Err(invalid(
                "polynomial",
                format!("coefficients must sum to 1 (P(1) = 1), got {at_one}"),
            ));
        }
        Ok(Self { coefficients })
    }

    /// `P ≡ 1`.
    pub fn one() -> Self {
        Self {
            coefficients: vec![T::one()],
        }
    }

    /// `P(x) = (1 − α) + α x`.
    pub fn linear(alpha: T) -> Result<Self> {
        Self::new(vec![T::one() - alpha, alpha])
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// Index of the highest non-zero coefficient (0 for constants).
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| *c != T::zero())
            .unwrap_or(0)
    }

    pub fn leading_coefficient(&self) -> T {
        self.coefficients[self.degree()]
    }

    pub fn eval(&self, x: T) -> T {
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }
}

/// Gaussian smearing `g(t) = π^{-1/4} √(μ/2σ) exp(−(μt)²/8σ²)`,
/// normalised so that `∫ g² dt = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmearingFunction<T> {
    sigma: T,
    mass: T,
}

impl<T: Scalar> SmearingFunction<T> {
    pub fn gaussian(sigma: T, mass: T) -> Result<Self> {
        if !(sigma.is_finite() && sigma > T::zero()) {
            return Err(invalid(
                "sigma",
                format!("must be positive and finite, got {sigma}"),
            ));
        }
        if !(mass.is_finite() && mass > T::zero()) {
            return Err(invalid(
                "mass",
                format!("must be positive and finite, got {mass}"),
            ));
        }
        Ok(Self { sigma, mass })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// `g(t)`.
    pub fn g(&self, t: T) -> T {
        let mt = self.mass * t;
        let norm = T::PI().powf(T::lit(-0.25)) * (self.mass / (T::lit(2.0) * self.sigma)).sqrt();
        norm * (-(mt * mt) / (T::lit(8.0) * self.sigma * self.sigma)).exp()
    }

    /// `g̃²(ω) = ∫ g²(t) e^{iωt} dt = exp(−σ²ω²/μ²)`.
    pub fn gtilde_sq(&self, omega: T) -> T {
        let x = self.sigma * omega / self.mass;
        (-(x * x)).exp()
    }
}

/// Tensor index pair `(α, β) ∈ {0, 1}²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ComponentPair {
    alpha: u8,
    beta: u8,
}

impl ComponentPair {
    pub const ENERGY_DENSITY: Self = Self { alpha: 0, beta: 0 };

    pub fn new(alpha: u8, beta: u8) -> Result<Self> {
        if alpha > 1 || beta > 1 {
            return Err(invalid(
                "component",
                format!("tensor indices must be 0 or 1, got ({alpha}, {beta})"),
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(self) -> u8 {
        self.alpha
    }

    pub fn beta(self) -> u8 {
        self.beta
    }
}

/// Everything needed to evaluate one component of the kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<T> {
    pub model: ScatteringModel<T>,
    pub poly: PolynomialP<T>,
    pub smearing: SmearingFunction<T>,
    pub component: ComponentPair,
}

impl<T: Scalar> KernelSpec<T> {
    /// The smearing function shares the model mass.
    pub fn new(
        model: ScatteringModel<T>,
        poly: PolynomialP<T>,
        sigma: T,
        component: ComponentPair,
    ) -> Result<Self> {
        let smearing = SmearingFunction::gaussian(sigma, model.mass())?;
        Ok(Self {
            model,
            poly,
            smearing,
            component,
        })
    }

    /// `T^{00}` spec.
    pub fn energy_density(
        model: ScatteringModel<T>,
        poly: PolynomialP<T>,
        sigma: T,
    ) -> Result<Self> {
        Self::new(model, poly, sigma, ComponentPair::ENERGY_DENSITY)
    }

    pub fn with_component(&self, component: ComponentPair) -> Self {
        Self {
            component,
            ..self.clone()
        }
    }

    pub fn mass(&self) -> T {
        self.model.mass()
    }

    /// `F_P(θ) = P(cosh θ) · F_min(θ + iπ)`.
    pub fn f_p(&self, theta: T) -> Result<T> {
        Ok(self.poly.eval(theta.cosh()) * self.model.fmin_shifted(theta)?)
    }

    /// `F^{αβ}(θ, η)` for this spec's component.
    pub fn kernel_value(&self, theta: T, eta: T) -> Result<T> {
        let fp = self.f_p(theta - eta)?;
        Ok(self.dressed_value(theta, eta, fp))
    }

    /// Kernel value with `F_P(θ − η)` supplied by the caller.
    pub(crate) fn dressed_value(&self, theta: T, eta: T, fp: T) -> T {
        let mu = self.mass();
        let free = free_kernel(mu, self.component.alpha, self.component.beta, theta, eta);
        free * fp * self.smearing.gtilde_sq(mu * theta.cosh() - mu * eta.cosh())
    }
}

/// Free-boson kernel
/// `(μ²/2π) [[cosh²((θ+η)/2), ½ sinh(θ+η)], [½ sinh(θ+η), sinh²((θ+η)/2)]]`.
///
/// Indices other than 0 and 1 are treated as 1.
pub fn free_kernel<T: Scalar>(mu: T, alpha: u8, beta: u8, theta: T, eta: T) -> T {
    let pref = mu * mu / (T::lit(2.0) * T::PI());
    let s = theta + eta;
    let half = s * T::lit(0.5);
    let entry = match (alpha, beta) {
        (0, 0) => {
            let c = half.cosh();
            c * c
        }
        (0, _) | (_, 0) => T::lit(0.5) * s.sinh(),
        _ => {
            let sh = half.sinh();
            sh * sh
        }
    };
    pref * entry
}

/// `⟨φ, T ψ⟩` for step-function wavefunctions on the same grid.
///
/// Uses the same cell-pair rule as matrix assembly, so for basis vectors
/// `⟨φ_j, T φ_k⟩` reproduces the matrix entry `M_jk` bit for bit.
pub fn matrix_element<T: Scalar>(
    spec: &KernelSpec<T>,
    bra: &StepWavefunction<T>,
    ket: &StepWavefunction<T>,
) -> Result<Complex<T>> {
    if bra.grid() != ket.grid() {
        return Err(invalid(
            "wavefunction",
            "bra and ket live on different grids",
        ));
    }
    let support = |psi: &StepWavefunction<T>| -> Vec<usize> {
        psi.coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != T::zero() || c.im != T::zero())
            .map(|(j, _)| j)
            .collect()
    };
    let (rows, cols) = (support(bra), support(ket));
    let rule = CellPairRule::new(spec, bra.grid())?;
    let (b, k) = (bra.coefficients(), ket.coefficients());
    let mut acc = Complex::new(T::zero(), T::zero());
    for &j in &rows {
        for &l in &cols {
            acc = acc + b[j].conj() * k[l] * rule.entry(j, l);
        }
    }
    Ok(acc)
}

/// `⟨φ, T(g²) φ⟩`, complex-valued; rejects a zero wavefunction.
pub fn expectation_complex<T: Scalar>(
    spec: &KernelSpec<T>,
    psi: &StepWavefunction<T>,
) -> Result<Complex<T>> {
    if psi.norm_sqr() == T::zero() {
        return Err(Error::ZeroNorm);
    }
    matrix_element(spec, psi, psi)
}

/// Real part of [`expectation_complex`]; fails if the imaginary part is not
/// negligible (`> 1e-10` relative to the norm-weighted kernel scale).
pub fn expectation<T: Scalar>(spec: &KernelSpec<T>, psi: &StepWavefunction<T>) -> Result<T> {
    let value = expectation_complex(spec, psi)?;
    let scale = value.re.abs().max(psi.norm_sqr() * spec.mass());
    if value.im.abs() > T::lit(1e-10).max(T::epsilon() * T::lit(1e3)) * scale {
        return Err(invalid(
            "wavefunction",
            format!("expectation has non-negligible imaginary part {}", value.im),
        ));
    }
    Ok(value.re)
}
