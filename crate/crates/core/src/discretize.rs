//! Step-function discretisation of the kernel on `[−R, R]`.
//!
//! Cell `j` is `[−R + jh, −R + (j+1)h)` with `h = 2R/N`, and
//! `φ_j = h^{-1/2} · 1_{cell j}`. Matrix entries
//! `M_jk = (1/h) ∬_{cell j × cell k} F(θ, η) dθ dη` are integrated with a
//! tensor-product Gauss–Legendre rule of order `q` per axis, then
//! symmetrised.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::kernel::{free_kernel, KernelSpec};
use crate::quadrature::GaussLegendre;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationGrid<T> {
    cutoff: T,
    cells: usize,
    quadrature_order: usize,
}

impl<T: Scalar> DiscretizationGrid<T> {
    pub fn new(cutoff: T, cells: usize, quadrature_order: usize) -> Result<Self> {
        if !(cutoff.is_finite() && cutoff > T::zero()) {
            return Err(invalid(
                "cutoff",
                format!("must be positive and finite, got {cutoff}"),
            ));
        }
        if cells == 0 {
            return Err(invalid("cells", "need at least one cell"));
        }
        if quadrature_order == 0 {
            return Err(invalid("quadrature_order", "must be at least 1"));
        }
        Ok(Self {
            cutoff,
            cells,
            quadrature_order,
        })
    }

    /// Grid on `[−R, R]` whose cell count is chosen so the width is as close
    /// as possible to `cell_width`.
    pub fn with_cell_width(cutoff: T, cell_width: T, quadrature_order: usize) -> Result<Self> {
        if !(cell_width.is_finite() && cell_width > T::zero()) {
            return Err(invalid("cell_width", "must be positive and finite"));
        }
        let n = (T::lit(2.0) * cutoff / cell_width)
            .round()
            .to_usize()
            .ok_or_else(|| invalid("cell_width", "cell count not representable"))?;
        Self::new(cutoff, n.max(1), quadrature_order)
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn cell_width(&self) -> T {
        T::lit(2.0) * self.cutoff / T::from_count(self.cells)
    }

    pub fn lower_edge(&self, j: usize) -> T {
        -self.cutoff + T::from_count(j) * self.cell_width()
    }

    pub fn midpoint(&self, j: usize) -> T {
        -self.cutoff + (T::from_count(j) + T::lit(0.5)) * self.cell_width()
    }

    pub fn midpoints(&self) -> Vec<T> {
        (0..self.cells).map(|j| self.midpoint(j)).collect()
    }

    /// Cell bounds and amplitude of `φ_j`.
    pub fn basis_function(&self, j: usize) -> Result<BasisFunction<T>> {
        if j >= self.cells {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.cells,
            });
        }
        let h = self.cell_width();
        let lower = self.lower_edge(j);
        Ok(BasisFunction {
            index: j,
            lower,
            upper: if j + 1 == self.cells {
                self.cutoff
            } else {
                lower + h
            },
            amplitude: T::one() / h.sqrt(),
        })
    }

    /// Index of the cell containing `theta`, if inside `[−R, R]`.
    pub fn cell_of(&self, theta: T) -> Option<usize> {
        if theta < -self.cutoff || theta > self.cutoff {
            return None;
        }
        let j = ((theta + self.cutoff) / self.cell_width())
            .floor()
            .to_usize()?;
        Some(j.min(self.cells - 1))
    }
}

/// `φ_j(θ) = amplitude` on `[lower, upper)`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction<T> {
    pub index: usize,
    pub lower: T,
    pub upper: T,
    pub amplitude: T,
}

impl<T: Scalar> BasisFunction<T> {
    pub fn eval(&self, theta: T) -> T {
        if theta >= self.lower && theta < self.upper {
            self.amplitude
        } else {
            T::zero()
        }
    }

    /// `⟨φ_j, φ_k⟩` evaluated from the supports.
    pub fn inner(&self, other: &Self) -> T {
        let lo = self.lower.max(other.lower);
        let hi = self.upper.min(other.upper);
        if hi > lo {
            self.amplitude * other.amplitude * (hi - lo)
        } else {
            T::zero()
        }
    }
}

/// One-particle wavefunction `Σ_j c_j φ_j` in the step basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWavefunction<T> {
    grid: DiscretizationGrid<T>,
    coefficients: Vec<Complex<T>>,
}

impl<T: Scalar> StepWavefunction<T> {
    pub fn new(grid: DiscretizationGrid<T>, coefficients: Vec<Complex<T>>) -> Result<Self> {
        if coefficients.len() != grid.cells() {
            return Err(invalid(
                "wavefunction",
                format!(
                    "{} coefficients for {} cells",
                    coefficients.len(),
                    grid.cells()
                ),
            ));
        }
        if coefficients
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(invalid("wavefunction", "coefficients must be finite"));
        }
        Ok(Self { grid, coefficients })
    }

    pub fn from_real(grid: DiscretizationGrid<T>, coefficients: &[T]) -> Result<Self> {
        Self::new(
            grid,
            coefficients
                .iter()
                .map(|&c| Complex::new(c, T::zero()))
                .collect(),
        )
    }

    /// Basis vector `φ_j`.
    pub fn basis(grid: DiscretizationGrid<T>, j: usize) -> Result<Self> {
        grid.basis_function(j)?;
        let mut c = vec![Complex::new(T::zero(), T::zero()); grid.cells()];
        c[j] = Complex::new(T::one(), T::zero());
        Self::new(grid, c)
    }

    /// Projection of `f` onto the step basis, with `⟨φ_j, f⟩` approximated
    /// by `h^{1/2} f(θ_mid)`.
    pub fn sample<F: Fn(T) -> Complex<T>>(grid: DiscretizationGrid<T>, f: F) -> Result<Self> {
        let root_h = grid.cell_width().sqrt();
        let c = (0..grid.cells())
            .map(|j| f(grid.midpoint(j)) * root_h)
            .collect();
        Self::new(grid, c)
    }

    /// Normalised indicator of `[a, b]`, projected exactly onto the cells.
    pub fn indicator(grid: DiscretizationGrid<T>, a: T, b: T) -> Result<Self> {
        if a.is_nan() || b.is_nan() || b <= a {
            return Err(invalid(
                "wavefunction",
                "indicator interval must have b > a",
            ));
        }
        let height = T::one() / (b - a).sqrt();
        let mut c = Vec::with_capacity(grid.cells());
        for j in 0..grid.cells() {
            let phi = grid.basis_function(j)?;
            let overlap = (phi.upper.min(b) - phi.lower.max(a)).max(T::zero());
            c.push(Complex::new(phi.amplitude * height * overlap, T::zero()));
        }
        Self::new(grid, c)
    }

    pub fn grid(&self) -> &DiscretizationGrid<T> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn norm_sqr(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }
}

/// Tensor-product Gauss–Legendre rule over cell pairs, shared by matrix
/// assembly and [`crate::kernel::expectation`].
///
/// `F_P` only depends on `θ − η = (j − k + (x_a − x_b)/2) h`, so it is
/// tabulated once over that lattice.
pub(crate) struct CellPairRule<'a, T> {
    spec: &'a KernelSpec<T>,
    cells: usize,
    order: usize,
    cell_width: T,
    weights: Vec<T>,
    nodes: Vec<T>,
    cosh_nodes: Vec<T>,
    fp_table: Vec<T>,
}

impl<'a, T: Scalar> CellPairRule<'a, T> {
    pub(crate) fn new(spec: &'a KernelSpec<T>, grid: &DiscretizationGrid<T>) -> Result<Self> {
        let rule = GaussLegendre::<T>::new(grid.quadrature_order())?;
        let (n, q) = (grid.cells(), grid.quadrature_order());
        let h = grid.cell_width();
        let half = T::lit(0.5);
        let mut nodes = Vec::with_capacity(n * q);
        for j in 0..n {
            let lower = grid.lower_edge(j);
            for &x in rule.nodes() {
                nodes.push(lower + h * half * (T::one() + x));
            }
        }
        let cosh_nodes = nodes.iter().map(|t| t.cosh()).collect();
        let offsets: Vec<T> = (0..(2 * n - 1) * q * q)
            .map(|idx| {
                let b = idx % q;
                let a = (idx / q) % q;
                let shift = T::from_count(idx / (q * q)) - T::from_count(n - 1);
                (shift + (rule.nodes()[a] - rule.nodes()[b]) * half) * h
            })
            .collect();
        // Offsets for (k, a, b) and (−k, b, a) are exact negatives and F_P is
        // even, so only the non-negative half is evaluated.
        let mirror = |idx: usize| {
            let b = idx % q;
            let a = (idx / q) % q;
            let shift = idx / (q * q);
            ((2 * (n - 1) - shift) * q + b) * q + a
        };
        let half_table = (0..offsets.len())
            .into_par_iter()
            .map(|idx| {
                if offsets[idx] >= T::zero() {
                    spec.f_p(offsets[idx]).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<Option<T>>>>()?;
        let fp_table = (0..offsets.len())
            .map(|idx| {
                half_table[idx]
                    .or(half_table[mirror(idx)])
                    .expect("one of a mirrored pair is non-negative")
            })
            .collect();
        Ok(Self {
            spec,
            cells: n,
            order: q,
            cell_width: h,
            weights: rule.weights().to_vec(),
            nodes,
            cosh_nodes,
            fp_table,
        })
    }

    fn raw(&self, j: usize, k: usize) -> T {
        let q = self.order;
        let mu = self.spec.mass();
        let (alpha, beta) = (self.spec.component.alpha(), self.spec.component.beta());
        let row = (j + self.cells - 1 - k) * q * q;
        let mut acc = T::zero();
        for a in 0..q {
            let theta = self.nodes[j * q + a];
            let ch_t = self.cosh_nodes[j * q + a];
            let mut inner = T::zero();
            for b in 0..q {
                let eta = self.nodes[k * q + b];
                let ch_e = self.cosh_nodes[k * q + b];
                let fp = self.fp_table[row + a * q + b];
                let value = free_kernel(mu, alpha, beta, theta, eta)
                    * fp
                    * self.spec.smearing.gtilde_sq(mu * ch_t - mu * ch_e);
                inner = inner + self.weights[b] * value;
            }
            acc = acc + self.weights[a] * inner;
        }
        // (1/h)(h/2)² Σ w_a w_b F
        acc * self.cell_width * T::lit(0.25)
    }

    /// Symmetrised entry `(raw(j,k) + raw(k,j)) / 2`.
    pub(crate) fn entry(&self, j: usize, k: usize) -> T {
        if j == k {
            self.raw(j, j)
        } else {
            (self.raw(j, k) + self.raw(k, j)) * T::lit(0.5)
        }
    }
}

/// Dense symmetric `N × N` matrix `M_jk = ⟨φ_j, T(g²) φ_k⟩`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix<T> {
    entries: Vec<T>,
    grid: DiscretizationGrid<T>,
    spec: KernelSpec<T>,
}

impl<T: Scalar> KernelMatrix<T> {
    pub fn dim(&self) -> usize {
        self.grid.cells()
    }

    pub fn get(&self, j: usize, k: usize) -> T {
        self.entries[j * self.dim() + k]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn grid(&self) -> &DiscretizationGrid<T> {
        &self.grid
    }

    pub fn spec(&self) -> &KernelSpec<T> {
        &self.spec
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, j| acc + self.get(j, j))
    }

    pub fn row(&self, j: usize) -> &[T] {
        let n = self.dim();
        &self.entries[j * n..(j + 1) * n]
    }
}

/// Assembles `M_jk` for every cell pair.
pub fn assemble_matrix<T: Scalar>(
    spec: &KernelSpec<T>,
    grid: &DiscretizationGrid<T>,
) -> Result<KernelMatrix<T>> {
    let rule = CellPairRule::new(spec, grid)?;
    let n = grid.cells();
    let upper: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|j| (j..n).map(|k| rule.entry(j, k)).collect())
        .collect();
    let mut entries = vec![T::zero(); n * n];
    for (j, row) in upper.into_iter().enumerate() {
        for (offset, value) in row.into_iter().enumerate() {
            let k = j + offset;
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { row: j, col: k });
            }
            entries[j * n + k] = value;
            entries[k * n + j] = value;
        }
    }
    Ok(KernelMatrix {
        entries,
        grid: *grid,
        spec: spec.clone(),
    })
}
