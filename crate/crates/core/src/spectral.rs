//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by implicitly shifted QL iteration.

use crate::discretize::{DiscretizationGrid, KernelMatrix};
use crate::error::{invalid, Error, Result};
use crate::kernel::KernelSpec;
use crate::scalar::Scalar;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues in ascending order and, optionally, the matching unit
/// eigenvectors stored row by row (`vectors[i*n..(i+1)*n]` belongs to
/// `values[i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<T>>,
    n: usize,
}

impl<T: Scalar> SymmetricEigen<T> {
    /// Decomposes the row-major `n × n` symmetric matrix `a`. Only the lower
    /// triangle is read.
    pub fn new(a: &[T], n: usize, want_vectors: bool) -> Result<Self> {
        if a.len() != n * n {
            return Err(invalid(
                "matrix",
                format!("expected {} entries, got {}", n * n, a.len()),
            ));
        }
        if n == 0 {
            return Ok(Self {
                values: Vec::new(),
                vectors: want_vectors.then(Vec::new),
                n,
            });
        }
        if let Some(pos) = a.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: pos / n,
                col: pos % n,
            });
        }
        let mut v = a.to_vec();
        let mut d = vec![T::zero(); n];
        let mut e = vec![T::zero(); n];
        tridiagonalize(&mut v, n, &mut d, &mut e);
        // rows of z are eigenvectors after QL
        let mut z = transpose(&v, n);
        ql_implicit(&mut d, &mut e, n, want_vectors.then_some(z.as_mut_slice()))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = want_vectors.then(|| {
            let mut out = Vec::with_capacity(n * n);
            for &i in &order {
                out.extend_from_slice(&z[i * n..(i + 1) * n]);
            }
            out
        });
        Ok(Self { values, vectors, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vector(&self, i: usize) -> Option<&[T]> {
        self.vectors
            .as_ref()
            .map(|v| &v[i * self.n..(i + 1) * self.n])
    }
}

fn transpose<T: Scalar>(a: &[T], n: usize) -> Vec<T> {
    let mut t = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

/// Householder tridiagonalisation (EISPACK `tred2`). On return `d` holds the
/// diagonal, `e[1..]` the subdiagonal and `v` the accumulated orthogonal
/// transform (columns).
fn tridiagonalize<T: Scalar>(v: &mut [T], n: usize, d: &mut [T], e: &mut [T]) {
    let zero = T::zero();
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for dk in d.iter().take(i) {
            scale = scale + dk.abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
                v[idx(j, i)] = zero;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }
            for j in 0..i {
                let f = d[j];
                v[idx(j, i)] = f;
                let mut g = e[j] + v[idx(j, j)] * f;
                for k in j + 1..i {
                    g = g + v[idx(k, j)] * d[k];
                    e[k] = e[k] + v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[idx(k, j)] = v[idx(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = zero;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] = v[idx(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = zero;
    }
    v[idx(n - 1, n - 1)] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal `(d, e)` (EISPACK `tql2`). If `z` is given
/// its rows are rotated along, turning them into eigenvectors.
fn ql_implicit<T: Scalar>(
    d: &mut [T],
    e: &mut [T],
    n: usize,
    mut z: Option<&mut [T]>,
) -> Result<()> {
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::EigenNonConvergence {
                        iterations: iter - 1,
                        residual: e[l].abs().to_f64_lossy(),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        let (head, tail) = z.split_at_mut((i + 1) * n);
                        let zi = &mut head[i * n..];
                        let zi1 = &mut tail[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }
    Ok(())
}

/// `‖A v − λ v‖₂` for row-major `a`.
pub fn residual_norm<T: Scalar>(a: &[T], n: usize, lambda: T, v: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        let av = row.iter().zip(v).fold(T::zero(), |s, (&x, &y)| s + x * y);
        let r = av - lambda * v[i];
        acc = acc + r * r;
    }
    acc.sqrt()
}

/// Maximum absolute row sum.
pub fn infinity_norm<T: Scalar>(a: &[T], n: usize) -> T {
    (0..n)
        .map(|i| {
            a[i * n..(i + 1) * n]
                .iter()
                .fold(T::zero(), |s, x| s + x.abs())
        })
        .fold(T::zero(), |m, x| m.max(x))
}

/// Flips `v` so its largest-magnitude component (first on ties) is positive.
pub fn fix_sign<T: Scalar>(v: &mut [T]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < T::zero()) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Lowest eigenpair of a plain symmetric matrix with its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair<T> {
    pub value: T,
    pub vector: Vec<T>,
    pub residual: T,
}

/// Default residual tolerance relative to `‖M‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Lowest eigenpair of a row-major symmetric matrix, normalised,
/// sign-fixed and residual-certified against `RESIDUAL_TOLERANCE · ‖A‖∞`.
pub fn lowest_eigenpair_dense<T: Scalar>(a: &[T], n: usize) -> Result<Eigenpair<T>> {
    if n == 0 {
        return Err(invalid("matrix", "empty matrix has no eigenpair"));
    }
    let eig = SymmetricEigen::new(a, n, true)?;
    let mut vector = eig.vector(0).expect("vectors requested").to_vec();
    let norm = vector.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
    for x in vector.iter_mut() {
        *x = *x / norm;
    }
    fix_sign(&mut vector);
    let value = eig.values[0];
    let residual = residual_norm(a, n, value, &vector);
    let tolerance =
        T::lit(RESIDUAL_TOLERANCE).max(T::epsilon() * T::from_count(10 * n)) * infinity_norm(a, n);
    if residual > tolerance {
        return Err(Error::ResidualTooLarge {
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    Ok(Eigenpair {
        value,
        vector,
        residual,
    })
}

/// Lowest eigenvalue and eigenvector of an assembled kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    /// In units of the particle mass.
    pub lowest_eigenvalue: T,
    /// Coefficients in the step basis, unit norm.
    pub eigenvector: Vec<T>,
    pub residual: T,
    pub grid: DiscretizationGrid<T>,
    pub spec: KernelSpec<T>,
}

impl<T: Scalar> SpectrumResult<T> {
    /// `(θ_mid, component)` pairs for plotting.
    pub fn eigenvector_samples(&self) -> Vec<(T, T)> {
        self.grid
            .midpoints()
            .into_iter()
            .zip(self.eigenvector.iter().copied())
            .collect()
    }
}

pub fn lowest_eigenpair<T: Scalar>(m: &KernelMatrix<T>) -> Result<SpectrumResult<T>> {
    let pair = lowest_eigenpair_dense(m.entries(), m.dim())?;
    Ok(SpectrumResult {
        lowest_eigenvalue: pair.value,
        eigenvector: pair.vector,
        residual: pair.residual,
        grid: *m.grid(),
        spec: m.spec().clone(),
    })
}

/// All eigenvalues, ascending.
pub fn full_spectrum<T: Scalar>(m: &KernelMatrix<T>) -> Result<Vec<T>> {
    Ok(SymmetricEigen::new(m.entries(), m.dim(), false)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_and_swap() {
        let p = lowest_eigenpair_dense(&[1.0, 0.0, 0.0, 1.0], 2).unwrap();
        assert_eq!(p.value, 1.0);
        assert_eq!(p.residual, 0.0);

        let p = lowest_eigenpair_dense(&[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        assert_relative_eq!(p.value, -1.0, epsilon = 1e-15);
        let r = 0.5f64.sqrt();
        // tie in magnitude: the first component is made positive
        assert_relative_eq!(p.vector[0], r, epsilon = 1e-15);
        assert_relative_eq!(p.vector[1], -r, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let a = [3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        assert_eq!(
            SymmetricEigen::new(&a, 3, false).unwrap().values,
            vec![1.0, 2.0, 3.0]
        );
        let a = [5.0, 0.0, 0.0, -2.0];
        assert_eq!(
            SymmetricEigen::new(&a, 2, true).unwrap().values,
            vec![-2.0, 5.0]
        );
    }

    #[test]
    fn one_by_one_and_errors() {
        let p = lowest_eigenpair_dense(&[-4.0], 1).unwrap();
        assert_eq!(p.value, -4.0);
        assert_eq!(p.vector, vec![1.0]);
        assert!(lowest_eigenpair_dense::<f64>(&[], 0).is_err());
        assert!(SymmetricEigen::new(&[1.0, 2.0], 2, false).is_err());
        assert!(matches!(
            SymmetricEigen::new(&[1.0, f64::NAN, f64::NAN, 1.0], 2, false),
            Err(Error::NonFiniteEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn vectors_are_orthonormal() {
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] =
                    1.0 / (1.0 + i as f64 + j as f64) + if i == j { (i as f64).sin() } else { 0.0 };
            }
        }
        let eig = SymmetricEigen::new(&a, n, true).unwrap();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = eig
                    .vector(i)
                    .unwrap()
                    .iter()
                    .zip(eig.vector(j).unwrap())
                    .map(|(x, y)| x * y)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
            assert!(residual_norm(&a, n, eig.values[i], eig.vector(i).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn single_precision_solver() {
        let a: [f32; 4] = [2.0, 1.0, 1.0, 2.0];
        let p = lowest_eigenpair_dense(&a, 2).unwrap();
        assert!((p.value - 1.0).abs() < 1e-6);
    }
}
