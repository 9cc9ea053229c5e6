//! One-particle energy density in factorizing scattering models.
//!
//! The crate assembles the integral kernel of the time-smeared energy
//! density `T^{00}(g²)` between one-particle states for the free boson,
//! Ising and sinh-Gordon models, discretises it on a rapidity cutoff
//! `[−R, R]` with an orthonormal step basis, and computes the lowest
//! eigenvalue, i.e. the best constant in a one-particle quantum energy
//! inequality. The [`analysis`] module classifies polynomial choices by the
//! growth of `F_P` and runs cutoff and coupling scans.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the usual double-precision instantiation.

pub mod analysis;
pub mod discretize;
pub mod error;
pub mod kernel;
pub mod model;
pub mod quadrature;
pub mod scalar;
pub mod spectral;

pub use analysis::{
    admissible_alpha_window, classify_growth, cutoff_trend, find_negativity_witness, scan_coupling,
    scan_cutoff, AlphaWindow, CouplingPoint, CutoffPoint, CutoffTrend, GrowthClassification,
    GrowthProbe, NegativityWitness, Verdict,
};
pub use discretize::{
    assemble_matrix, BasisFunction, DiscretizationGrid, KernelMatrix, StepWavefunction,
};
pub use error::{Error, Result};
pub use kernel::{
    expectation, expectation_complex, free_kernel, matrix_element, ComponentPair, KernelSpec,
    PolynomialP, SmearingFunction,
};
pub use model::{Asymptotics, MinimalSolution, ModelFamily, ScatteringModel, SinhGordon};
pub use scalar::Scalar;
pub use spectral::{full_spectrum, lowest_eigenpair, SpectrumResult, SymmetricEigen};

pub type ScatteringModel64 = ScatteringModel<f64>;
pub type PolynomialP64 = PolynomialP<f64>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type DiscretizationGrid64 = DiscretizationGrid<f64>;
pub type KernelMatrix64 = KernelMatrix<f64>;
pub type SpectrumResult64 = SpectrumResult<f64>;

pub type ScatteringModel32 = ScatteringModel<f32>;
pub type KernelSpec32 = KernelSpec<f32>;
pub type KernelMatrix32 = KernelMatrix<f32>;
