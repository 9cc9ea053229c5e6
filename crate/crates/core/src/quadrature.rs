//! Gauss–Legendre rules and a globally error-controlled adaptive integrator.

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Gauss–Legendre rule of a fixed order on the reference interval [-1, 1].
///
/// Nodes are stored in ascending order together with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Computes the `order`-point rule by Newton iteration on the Legendre
    /// polynomial, seeded with the asymptotic root estimates.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("order", "Gauss–Legendre order must be at least 1"));
        }
        let n = order;
        let one = T::one();
        let two = T::lit(2.0);
        let tol = T::epsilon() * T::lit(4.0);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let guess =
                T::PI() * (T::from_count(i) + T::lit(0.75)) / (T::from_count(n) + T::lit(0.5));
            let mut x = guess.cos();
            let mut dp = one;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= tol {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = two / ((one - x * x) * dp * dp);
            // roots come out descending from +1
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Applies the rule to `f` on [a, b].
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative<T: Scalar>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf - one) * x * p1 - (kf - one) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (one, T::zero());
    }
    let nf = T::from_count(n);
    let dp = nf * (x * p1 - p0) / (x * x - one);
    (p1, dp)
}

/// Integral estimate together with its accumulated error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

/// Adaptive bisection integrator.
///
/// Each panel is integrated once whole and once as two halves with the same
/// Gauss–Legendre rule; the difference is the panel's error estimate. The
/// panel with the largest error is split until the summed error drops below
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone)]
pub struct AdaptiveIntegrator<T> {
    rule: GaussLegendre<T>,
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> AdaptiveIntegrator<T> {
    pub fn new(abs_tol: T, rel_tol: T) -> Self {
        Self {
            rule: GaussLegendre::new(10).expect("order 10 is valid"),
            abs_tol,
            rel_tol,
            max_panels: 4096,
        }
    }

    pub fn with_order(mut self, order: usize) -> Result<Self> {
        self.rule = GaussLegendre::new(order)?;
        Ok(self)
    }

    fn panel<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> Panel<T> {
        let mid = (a + b) * T::lit(0.5);
        let whole = self.rule.integrate(f, a, b);
        let split = self.rule.integrate(f, a, mid) + self.rule.integrate(f, mid, b);
        Panel {
            a,
            b,
            value: split,
            error: (whole - split).abs(),
        }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> Result<Estimate<T>> {
        self.integrate_breakpoints(f, &[a, b])
    }

    /// Integrates `f` over consecutive panels delimited by `breaks`
    /// (at least two ascending points). Panel boundaries are kept fixed.
    pub fn integrate_breakpoints<F: Fn(T) -> T>(&self, f: F, breaks: &[T]) -> Result<Estimate<T>> {
        if breaks.len() < 2 {
            return Err(invalid("breaks", "need at least two breakpoints"));
        }
        let mut panels: Vec<Panel<T>> = breaks
            .windows(2)
            .map(|w| self.panel(&f, w[0], w[1]))
            .collect();
        loop {
            let (value, error) = totals(&panels);
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(Estimate { value, error });
            }
            if panels.len() >= self.max_panels {
                return Err(Error::QuadratureNonConvergence {
                    tolerance: target.to_f64_lossy(),
                    achieved: error.to_f64_lossy(),
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |best, (i, p)| {
                    if p.error > best.1 {
                        (i, p.error)
                    } else {
                        best
                    }
                })
                .0;
            let p = &panels[worst];
            let (a, b) = (p.a, p.b);
            let mid = (a + b) * T::lit(0.5);
            if mid <= a || mid >= b {
                // panel cannot be split further in this precision
                let (_, error) = totals(&panels);
                return Err(Error::QuadratureNonConvergence {
                    tolerance: target.to_f64_lossy(),
                    achieved: error.to_f64_lossy(),
                });
            }
            let left = self.panel(&f, a, mid);
            let right = self.panel(&f, mid, b);
            panels[worst] = left;
            panels.insert(worst + 1, right);
        }
    }
}

// Summed in panel order so results do not depend on refinement history.
fn totals<T: Scalar>(panels: &[Panel<T>]) -> (T, T) {
    panels.iter().fold((T::zero(), T::zero()), |(v, e), p| {
        (v + p.value, e + p.error)
    })
}
