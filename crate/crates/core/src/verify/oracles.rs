//! Reference computations that deliberately avoid the production paths.
//!
//! * The VO-RC derivative by adaptive Gauss–Jacobi/Gauss–Legendre quadrature
//!   of point-sampled field derivatives (production: closed-form segment
//!   antiderivatives).
//! * The Riesz integral by a power-law substitution and dense Gauss–Legendre
//!   (production: graded panels with a Gauss–Jacobi inner panel).
//! * Dense stiffness matrices from per-basis-function Gauss–Jacobi exact
//!   integration (production: banded assembly of closed-form rows).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operators::{Horizon, PiecewiseField};
use crate::quadrature::{gauss_jacobi, gauss_legendre, integrate, integrate_left_singular, Rule};

const ADAPTIVE_POINTS: usize = 10;
const MAX_DEPTH: usize = 30;
/// Relative tolerances below this are lost in rounding.
const TOL_FLOOR: f64 = 4.0 * f64::EPSILON;

/// VO-RC derivative by adaptive quadrature; requires 0 < α < 1.
pub fn rc_derivative_quadrature(
    field: &PiecewiseField,
    x: f64,
    alpha: f64,
    horizon: &Horizon,
    tol: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(
            "quadrature oracle needs 0 < alpha < 1".into(),
        ));
    }
    let (l_minus, l_plus) = horizon.truncated_lengths(x)?;
    let gj = gauss_jacobi(ADAPTIVE_POINTS, 0.0, -alpha)?;
    let gl = gauss_legendre(ADAPTIVE_POINTS)?;
    let nodes = field.nodes();
    let probe = 1e-9 * horizon.length();

    let mut total = 0.0;
    for (dir, l) in [(-1.0f64, l_minus), (1.0, l_plus)] {
        if l <= 0.0 {
            // one-sided derivative from the segment on the other side
            total += 0.5 * field.derivative(x - dir * probe);
            continue;
        }
        let deriv = |t: f64| field.derivative(x + dir * t);
        // pieces aligned with field nodes
        let mut cuts: Vec<f64> = nodes
            .iter()
            .map(|&n| (n - x) * dir)
            .filter(|&t| t > 0.0 && t < l)
            .collect();
        cuts.push(0.0);
        cuts.push(l);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut side = 0.0;
        for (i, w) in cuts.windows(2).enumerate() {
            side += adaptive(&deriv, &gj, &gl, alpha, w[0], w[1], i == 0, tol, 0);
        }
        total += 0.5 * (1.0 - alpha) * l.powf(alpha - 1.0) * side;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    gj: &Rule,
    gl: &Rule,
    alpha: f64,
    a: f64,
    b: f64,
    singular: bool,
    tol: f64,
    depth: usize,
) -> f64 {
    let estimate = |lo: f64, hi: f64, sing: bool| -> f64 {
        if sing {
            integrate_left_singular(gj, alpha, lo, hi, f)
        } else {
            integrate(gl, lo, hi, |t| f(t) * t.powf(-alpha))
        }
    };
    let whole = estimate(a, b, singular);
    let mid = 0.5 * (a + b);
    let halves = estimate(a, mid, singular) + estimate(mid, b, false);
    if (whole - halves).abs() <= tol.max(TOL_FLOOR) * halves.abs().max(1.0) || depth >= MAX_DEPTH {
        return halves;
    }
    adaptive(f, gj, gl, alpha, a, mid, singular, 0.5 * tol, depth + 1)
        + adaptive(f, gj, gl, alpha, mid, b, false, 0.5 * tol, depth + 1)
}

/// Riesz integral by t = T·u^m with m = 2/(1 − α(x)), which turns the
/// endpoint singularity into a vanishing factor, then `panels` panels of 8-point Gauss–Legendre per
/// side. Requires α < 1 at `x`.
pub fn riesz_integral_substitution<F, A>(
    field: F,
    x: f64,
    alpha: A,
    horizon: &Horizon,
    panels: usize,
) -> f64
where
    F: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    let length = horizon.length();
    let lf = horizon.lf();
    let gl = gauss_legendre(8).expect("8-point rule");
    let m = 2.0 / (1.0 - alpha(x));
    let mut total = 0.0;
    for dir in [-1.0f64, 1.0] {
        let extent = if dir < 0.0 {
            x.min(lf)
        } else {
            (length - x).min(lf)
        };
        let kink = if dir < 0.0 { x - (length - lf) } else { lf - x };
        let integrand = |u: f64| -> f64 {
            let t = extent * u.powf(m);
            let dt = extent * m * u.powf(m - 1.0);
            let xp = x + dir * t;
            let a = alpha(xp);
            let scale = if dir < 0.0 {
                (length - xp).min(lf)
            } else {
                xp.min(lf)
            };
            (1.0 - a) * scale.powf(a - 1.0) * field(xp) * t.powf(-a) * dt
        };
        let mut cuts = vec![0.0, 1.0];
        if kink > 0.0 && kink < extent {
            cuts.push((kink / extent).powf(1.0 / m));
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let width = (w[1] - w[0]) / panels as f64;
            for p in 0..panels {
                let a = w[0] + p as f64 * width;
                total += integrate(&gl, a, a + width, integrand);
            }
        }
    }
    0.5 * total
}

/// Which discrete field the oracle stiffness acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTarget {
    /// linear shapes, one dof per node
    Axial,
    /// Hermite shapes, (w, θ) per node, operator applied to θ = w′
    Bending,
}

/// Dense stiffness `scale · Σ_g w_g D(φ_i)(x_g) D(φ_j)(x_g)` on a uniform
/// mesh, with every D(φ_i)(x_g) integrated separately by Gauss–Jacobi.
pub fn dense_stiffness<A: Fn(f64) -> f64>(
    elements: usize,
    horizon: &Horizon,
    alpha: A,
    target: OracleTarget,
    gauss_order: usize,
    scale: f64,
) -> Result<DMatrix<f64>> {
    let length = horizon.length();
    let lf = horizon.lf();
    let h = length / elements as f64;
    let nodes: Vec<f64> = (0..=elements).map(|i| i as f64 * h).collect();
    let ndof = match target {
        OracleTarget::Axial => elements + 1,
        OracleTarget::Bending => 2 * (elements + 1),
    };
    let gauss = gauss_legendre(gauss_order)?;
    let mut k = DMatrix::<f64>::zeros(ndof, ndof);
    let mut row = vec![0.0; ndof];

    for e in 0..elements {
        for (xi, wi) in gauss.iter() {
            let xg = nodes[e] + 0.5 * h * (1.0 + xi);
            let wg = 0.5 * h * wi;
            let a = alpha(xg);
            row.iter_mut().for_each(|r| *r = 0.0);
            if a >= 1.0 {
                for (dof, d) in basis_derivatives(target, &nodes, e, xg) {
                    row[dof] += d;
                }
            } else {
                let gj = gauss_jacobi(4, 0.0, -a)?;
                let sides = [(-1.0f64, xg.min(lf)), (1.0, (length - xg).min(lf))];
                for (dir, l) in sides {
                    let factor = 0.5 * (1.0 - a) * l.powf(a - 1.0);
                    for el in 0..elements {
                        let (sa, sb) = (nodes[el], nodes[el + 1]);
                        // t-interval of this element on the current side
                        let (t_lo, t_hi) = if dir < 0.0 {
                            ((xg - sb).max(0.0), (xg - sa).min(l))
                        } else {
                            ((sa - xg).max(0.0), (sb - xg).min(l))
                        };
                        if t_hi <= t_lo {
                            continue;
                        }
                        for local in 0..local_dofs(target) {
                            let dof = global_dof(target, el, local);
                            let g =
                                |t: f64| basis_derivative(target, &nodes, el, local, xg + dir * t);
                            let upper = integrate_left_singular(&gj, a, 0.0, t_hi, g);
                            let lower = if t_lo > 0.0 {
                                integrate_left_singular(&gj, a, 0.0, t_lo, g)
                            } else {
                                0.0
                            };
                            row[dof] += factor * (upper - lower);
                        }
                    }
                }
            }
            for i in 0..ndof {
                if row[i] == 0.0 {
                    continue;
                }
                for j in 0..ndof {
                    k[(i, j)] += scale * wg * row[i] * row[j];
                }
            }
        }
    }
    Ok(k)
}

fn local_dofs(target: OracleTarget) -> usize {
    match target {
        OracleTarget::Axial => 2,
        OracleTarget::Bending => 4,
    }
}

fn global_dof(target: OracleTarget, element: usize, local: usize) -> usize {
    match target {
        OracleTarget::Axial => element + local,
        OracleTarget::Bending => 2 * element + local,
    }
}

/// Derivative of the operand of D^α for one local basis function of
/// `element`, extended polynomially outside the element: u′ for linear
/// shapes, w″ for Hermite shapes.
fn basis_derivative(
    target: OracleTarget,
    nodes: &[f64],
    element: usize,
    local: usize,
    s: f64,
) -> f64 {
    let h = nodes[element + 1] - nodes[element];
    match target {
        OracleTarget::Axial => {
            if local == 0 {
                -1.0 / h
            } else {
                1.0 / h
            }
        }
        OracleTarget::Bending => {
            let xi = (s - nodes[element]) / h;
            match local {
                0 => (-6.0 + 12.0 * xi) / (h * h),
                1 => (-4.0 + 6.0 * xi) / h,
                2 => (6.0 - 12.0 * xi) / (h * h),
                _ => (-2.0 + 6.0 * xi) / h,
            }
        }
    }
}

fn basis_derivatives(
    target: OracleTarget,
    nodes: &[f64],
    element: usize,
    s: f64,
) -> Vec<(usize, f64)> {
    (0..local_dofs(target))
        .map(|l| {
            (
                global_dof(target, element, l),
                basis_derivative(target, nodes, element, l, s),
            )
        })
        .collect()
}

/// Dense consistent load for a uniform transverse load `q` on Hermite shapes.
pub fn dense_uniform_load(elements: usize, length: f64, q: f64) -> DVector<f64> {
    let h = length / elements as f64;
    let mut f = DVector::<f64>::zeros(2 * (elements + 1));
    for e in 0..elements {
        f[2 * e] += q * h / 2.0;
        f[2 * e + 1] += q * h * h / 12.0;
        f[2 * e + 2] += q * h / 2.0;
        f[2 * e + 3] -= q * h * h / 12.0;
    }
    f
}

/// Solve `K u = f` with the listed dofs fixed at zero, by removing them and
/// factoring the reduced dense matrix.
pub fn dense_constrained_solve(
    k: &DMatrix<f64>,
    f: &DVector<f64>,
    fixed: &[usize],
) -> Result<DVector<f64>> {
    let n = k.nrows();
    let free: Vec<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
    let kr = DMatrix::from_fn(free.len(), free.len(), |i, j| k[(free[i], free[j])]);
    let fr = DVector::from_fn(free.len(), |i, _| f[free[i]]);
    let chol = kr
        .cholesky()
        .ok_or_else(|| Error::Singular("dense oracle matrix is not positive definite".into()))?;
    let ur = chol.solve(&fr);
    let mut u = DVector::<f64>::zeros(n);
    for (i, &dof) in free.iter().enumerate() {
        u[dof] = ur[i];
    }
    Ok(u)
}
