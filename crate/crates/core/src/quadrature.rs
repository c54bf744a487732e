//! Gauss–Legendre and Gauss–Jacobi rules on the reference interval [−1, 1].

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::special::gamma;

/// Nodes and weights of an n-point rule on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// n-point Gauss–Legendre rule, nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Domain(
            "Gauss-Legendre rule needs at least one point".into(),
        ));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess, refined by Newton on Pₙ.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Rule { nodes, weights })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// n-point Gauss–Jacobi rule for the weight (1 − ξ)^a (1 + ξ)^b on [−1, 1],
/// computed by the Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if n == 0 {
        return Err(Error::Domain(
            "Gauss-Jacobi rule needs at least one point".into(),
        ));
    }
    if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "Gauss-Jacobi exponents must exceed -1, got a={a}, b={b}"
        )));
    }
    let ab = a + b;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jacobi[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let beta = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let t = 2.0 * m + ab;
                4.0 * m * (m + a) * (m + b) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0))
            };
            let off = beta.sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0)? * gamma(b + 1.0)? / gamma_general(ab + 2.0)?;
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Γ for arguments above the (0, 2] range, via downward recurrence.
fn gamma_general(z: f64) -> Result<f64> {
    let mut z = z;
    let mut scale = 1.0;
    while z > 2.0 {
        z -= 1.0;
        scale *= z;
    }
    Ok(scale * gamma(z)?)
}

/// ∫ₐᵇ f using a reference rule mapped affinely onto [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(rule: &Rule, a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// ∫ₐᵇ (t − a)^(−alpha) f(t) dt with `rule` built by
/// `gauss_jacobi(n, 0.0, -alpha)`.
pub fn integrate_left_singular<F: FnMut(f64) -> f64>(
    rule: &Rule,
    alpha: f64,
    a: f64,
    b: f64,
    mut f: F,
) -> f64 {
    let half = 0.5 * (b - a);
    let sum: f64 = rule.iter().map(|(x, w)| w * f(a + half * (1.0 + x))).sum();
    sum * half.powf(1.0 - alpha)
}
