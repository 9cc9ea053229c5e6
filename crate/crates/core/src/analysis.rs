//! Executable versions of the one-particle QEI criteria: growth
//! classification of `F_P`, the admissible window for linear `P`, detection
//! of negative-energy witnesses, and cutoff / coupling scans of the lowest
//! eigenvalue.

use rayon::prelude::*;
use serde::Serialize;

use crate::discretize::{assemble_matrix, DiscretizationGrid};
use crate::error::{invalid, Result};
use crate::kernel::{KernelSpec, PolynomialP};
use crate::model::{Asymptotics, MinimalSolution, ScatteringModel};
use crate::scalar::Scalar;
use crate::spectral::lowest_eigenpair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `ρ < ½ − margin`: a state-independent bound exists.
    QeiHolds,
    /// `ρ > ½ + margin` or unbounded: no lower bound.
    NoGo,
    /// Too close to `ρ = ½`, or the ratio samples did not settle.
    Borderline,
}

/// Where and how finely `|F_P(θ)| / cosh θ` is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthProbe<T> {
    pub theta_min: T,
    pub theta_max: T,
    pub samples: usize,
    pub margin: T,
    /// Successive ratio samples must agree to this for a finite verdict.
    pub cauchy_tolerance: T,
}

impl<T: Scalar> Default for GrowthProbe<T> {
    fn default() -> Self {
        Self {
            theta_min: T::lit(10.0),
            theta_max: T::lit(30.0),
            samples: 5,
            margin: T::lit(0.02),
            cauchy_tolerance: T::lit(1e-3),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthClassification<T> {
    pub verdict: Verdict,
    /// `ρ = lim sup |F_P(θ)| / cosh θ`.
    pub ratio: Asymptotics<T>,
    /// Exponential growth order of `F_P`: `deg P` plus that of `F_min`.
    pub growth_order: T,
    pub probe_range: (T, T),
    pub margin: T,
    /// `(θ, |F_P(θ)|/cosh θ)` at the probe points.
    pub samples: Vec<(T, T)>,
    pub diagnostic: Option<String>,
}

/// Geometrically spaced points from `lo` to `hi` inclusive.
fn geometric_points<T: Scalar>(lo: T, hi: T, count: usize) -> Vec<T> {
    if count <= 1 {
        return vec![hi];
    }
    let ratio = (hi / lo).ln() / T::from_count(count - 1);
    (0..count)
        .map(|i| lo * (ratio * T::from_count(i)).exp())
        .collect()
}

/// Ratio `|F_P(θ)|/cosh θ` computed without overflowing `cosh` for the
/// polynomial part: `P(cosh θ)/cosh θ` is evaluated as `Σ c_k cosh^{k-1} θ`.
fn growth_ratio<T: Scalar>(spec: &KernelSpec<T>, theta: T) -> Result<T> {
    let c = theta.cosh();
    let poly_over_cosh = spec
        .poly
        .coefficients()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &ck)| acc + ck * c.powi(k as i32 - 1));
    Ok((poly_over_cosh * spec.model.fmin_shifted(theta)?).abs())
}

/// Compares the large-rapidity growth of `F_P` with `½ cosh θ`.
///
/// Growth order above 1 is flagged unbounded analytically; order below 1
/// gives `ρ = 0`; order exactly 1 is resolved from the probe samples.
pub fn classify_growth<T: Scalar>(
    spec: &KernelSpec<T>,
    probe: &GrowthProbe<T>,
) -> Result<GrowthClassification<T>> {
    if !(probe.theta_min > T::zero() && probe.theta_max > probe.theta_min) || probe.samples == 0 {
        return Err(invalid(
            "probe",
            "need 0 < theta_min < theta_max and at least one sample",
        ));
    }
    let order = T::from_count(spec.poly.degree()) + spec.model.growth_order();
    let points = geometric_points(probe.theta_min, probe.theta_max, probe.samples);
    let samples = points
        .iter()
        .map(|&t| Ok((t, growth_ratio(spec, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let half = T::lit(0.5);
    let tol = T::epsilon() * T::lit(64.0);
    let mut diagnostic = None;

    let (ratio, verdict) = if order > T::one() + tol {
        (Asymptotics::Unbounded, Verdict::NoGo)
    } else if order < T::one() - tol {
        (Asymptotics::Finite(T::zero()), Verdict::QeiHolds)
    } else {
        let last = samples.last().expect("at least one sample").1;
        let settled = samples
            .windows(2)
            .last()
            .is_none_or(|w| (w[1].1 - w[0].1).abs() <= probe.cauchy_tolerance);
        let verdict = if !settled {
            diagnostic = Some("ratio samples not Cauchy over the probe range".to_owned());
            Verdict::Borderline
        } else if last < half - probe.margin {
            Verdict::QeiHolds
        } else if last > half + probe.margin {
            Verdict::NoGo
        } else {
            diagnostic = Some("ratio within margin of 1/2".to_owned());
            Verdict::Borderline
        };
        (Asymptotics::Finite(last), verdict)
    };
    Ok(GrowthClassification {
        verdict,
        ratio,
        growth_order: order,
        probe_range: (probe.theta_min, probe.theta_max),
        margin: probe.margin,
        samples,
        diagnostic,
    })
}

/// Admissible `α` for `P(x) = (1 − α) + α x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaWindow<T> {
    /// Open interval `(−w, w)` with `w = 1 / (2 F_min(∞ + iπ))`.
    Interval { lower: T, upper: T },
    /// `F_min` grows without bound: only `P ≡ 1` (α = 0) is admissible.
    TrivialOnly,
}

impl<T: Scalar> AlphaWindow<T> {
    pub fn contains(&self, alpha: T) -> bool {
        match *self {
            AlphaWindow::Interval { lower, upper } => alpha > lower && alpha < upper,
            AlphaWindow::TrivialOnly => alpha == T::zero(),
        }
    }
}

pub fn admissible_alpha_window<T: Scalar, M: MinimalSolution<T> + ?Sized>(
    model: &M,
) -> Result<AlphaWindow<T>> {
    Ok(match model.asymptotic_constant()? {
        Asymptotics::Finite(limit) => {
            let w = T::one() / (T::lit(2.0) * limit.abs());
            AlphaWindow::Interval {
                lower: -w,
                upper: w,
            }
        }
        Asymptotics::Unbounded => AlphaWindow::TrivialOnly,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NegativityWitness<T> {
    Present { theta_p: T, fp_value: T },
    Absent,
}

impl<T> NegativityWitness<T> {
    pub fn is_present(&self) -> bool {
        matches!(self, NegativityWitness::Present { .. })
    }
}

/// Samples `|F_P|` on `samples + 1` equally spaced points of `[a, b]` and
/// bisects the first crossing of `1 + 1e-9`. The returned rapidity always
/// satisfies `|F_P(θ_P)| > 1`.
pub fn find_negativity_witness<T: Scalar>(
    spec: &KernelSpec<T>,
    range: (T, T),
    samples: usize,
) -> Result<NegativityWitness<T>> {
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite() && b > a) || samples == 0 {
        return Err(invalid(
            "search range",
            "need finite a < b and at least one step",
        ));
    }
    let threshold = T::one() + T::lit(1e-9);
    let exceeds = |t: T| -> Result<(bool, T)> {
        let v = spec.f_p(t)?;
        Ok((v.abs() > threshold, v))
    };
    let step = (b - a) / T::from_count(samples);
    let mut prev = a;
    let (hit, value) = exceeds(a)?;
    if hit {
        return Ok(NegativityWitness::Present {
            theta_p: a,
            fp_value: value,
        });
    }
    for i in 1..=samples {
        let t = if i == samples {
            b
        } else {
            a + step * T::from_count(i)
        };
        let (hit, value) = exceeds(t)?;
        if hit {
            let (mut lo, mut hi, mut hi_val) = (prev, t, value);
            for _ in 0..200 {
                let mid = (lo + hi) * T::lit(0.5);
                if mid <= lo || mid >= hi {
                    break;
                }
                let (m_hit, m_val) = exceeds(mid)?;
                if m_hit {
                    hi = mid;
                    hi_val = m_val;
                } else {
                    lo = mid;
                }
            }
            return Ok(NegativityWitness::Present {
                theta_p: hi,
                fp_value: hi_val,
            });
        }
        prev = t;
    }
    Ok(NegativityWitness::Absent)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffPoint<T> {
    pub cutoff: T,
    pub cells: usize,
    pub lambda_min: T,
    pub residual: T,
}

/// Lowest eigenvalue for each cutoff at fixed cell width `h`.
pub fn scan_cutoff<T: Scalar>(
    spec: &KernelSpec<T>,
    cutoffs: &[T],
    cell_width: T,
    quadrature_order: usize,
) -> Result<Vec<CutoffPoint<T>>> {
    if cutoffs.is_empty() {
        return Err(invalid("R_list", "must not be empty"));
    }
    if cutoffs.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return Err(invalid("R_list", "cutoffs must be strictly increasing"));
    }
    cutoffs
        .par_iter()
        .map(|&r| {
            let grid = DiscretizationGrid::with_cell_width(r, cell_width, quadrature_order)?;
            let spectrum = lowest_eigenpair(&assemble_matrix(spec, &grid)?)?;
            Ok(CutoffPoint {
                cutoff: r,
                cells: grid.cells(),
                lambda_min: spectrum.lowest_eigenvalue,
                residual: spectrum.residual,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingPoint<T> {
    pub coupling: T,
    pub lambda_min: T,
    pub residual: T,
}

/// Lowest eigenvalue of the sinh-Gordon energy density for each coupling.
pub fn scan_coupling<T: Scalar>(
    couplings: &[T],
    mass: T,
    grid: &DiscretizationGrid<T>,
    sigma: T,
    poly: &PolynomialP<T>,
) -> Result<Vec<CouplingPoint<T>>> {
    if couplings.is_empty() {
        return Err(invalid("B_list", "must not be empty"));
    }
    let models = couplings
        .iter()
        .map(|&b| ScatteringModel::sinh_gordon(mass, b))
        .collect::<Result<Vec<_>>>()?;
    models
        .into_par_iter()
        .zip(couplings.par_iter())
        .map(|(model, &b)| {
            let spec = KernelSpec::energy_density(model, poly.clone(), sigma)?;
            let spectrum = lowest_eigenpair(&assemble_matrix(&spec, grid)?)?;
            Ok(CouplingPoint {
                coupling: b,
                lambda_min: spectrum.lowest_eigenvalue,
                residual: spectrum.residual,
            })
        })
        .collect()
}

/// Shape of a sequence of lowest eigenvalues under growing cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffTrend {
    /// Successive differences shrink and the last is below tolerance.
    Converging,
    /// Strictly decreasing with non-shrinking steps.
    Diverging,
    Inconclusive,
}

/// Successive differences `v[i+1] − v[i]`.
pub fn successive_differences<T: Scalar>(values: &[T]) -> Vec<T> {
    values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Classifies `values` (ordered by increasing cutoff). A converging verdict
/// requires the final step to be below `rel_tol · |last value|`.
pub fn cutoff_trend<T: Scalar>(values: &[T], rel_tol: T) -> CutoffTrend {
    let diffs = successive_differences(values);
    let (Some(first), Some(last), Some(&final_value)) =
        (diffs.first(), diffs.last(), values.last())
    else {
        return CutoffTrend::Inconclusive;
    };
    let strictly_decreasing = diffs.iter().all(|d| *d < T::zero());
    if strictly_decreasing && last.abs() > first.abs() {
        return CutoffTrend::Diverging;
    }
    let floor = rel_tol * final_value.abs();
    let shrinking = diffs
        .windows(2)
        .all(|w| w[1].abs() <= w[0].abs().max(floor));
    if shrinking && last.abs() < floor {
        CutoffTrend::Converging
    } else {
        CutoffTrend::Inconclusive
    }
}
