use super::{Horizon, ALPHA_CLAMP};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_jacobi, gauss_legendre, integrate, integrate_left_singular};

/// Panel layout for the Riesz integral.
///
/// Each side of the evaluation point is split into panels graded
/// geometrically toward the singular endpoint, a uniform outer subdivision,
/// and any caller-supplied breakpoints (mesh nodes of a piecewise field).
/// The innermost panel uses Gauss–Jacobi with the endpoint exponent α(x);
/// all others use Gauss–Legendre.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszQuadrature {
    pub order: usize,
    pub grading_ratio: f64,
    pub grading_levels: usize,
    pub uniform_panels: usize,
    pub breakpoints: Vec<f64>,
}

impl Default for RieszQuadrature {
    fn default() -> Self {
        Self {
            order: 16,
            grading_ratio: 0.25,
            grading_levels: 16,
            uniform_panels: 8,
            breakpoints: Vec::new(),
        }
    }
}

impl RieszQuadrature {
    pub fn with_breakpoints(mut self, breakpoints: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints = breakpoints.into_iter().collect();
        self
    }
}

/// VO Riesz fractional integral of `field` at `x` with kernel order α(x′).
///
/// The left part integrates over x′ ∈ (x − l₋(x), x) with weight
/// l₊(x′)^(α(x′)−1), the right part over (x, x + l₊(x)) with weight
/// l₋(x′)^(α(x′)−1): the points x′ whose own horizon reaches `x`. This is
/// the exact adjoint of the VO-RC derivative. Both parts diverge at the beam
/// ends, so `x` must lie strictly inside the domain.
pub fn vo_riesz_integral<F, A>(field: F, x: f64, alpha: A, horizon: &Horizon) -> Result<f64>
where
    F: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    vo_riesz_integral_with(field, x, alpha, horizon, &RieszQuadrature::default())
}

pub fn vo_riesz_integral_with<F, A>(
    field: F,
    x: f64,
    alpha: A,
    horizon: &Horizon,
    quad: &RieszQuadrature,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    let length = horizon.length();
    if !(x > 0.0 && x < length) {
        return Err(Error::Domain(format!(
            "Riesz integral requires 0 < x < {length}, got {x}"
        )));
    }
    let lf = horizon.lf();
    let order_at = |s: f64| -> Result<f64> {
        let a = alpha(s);
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Domain(format!(
                "order {a} at x′ = {s} outside (0, 1]"
            )));
        }
        Ok(a.min(ALPHA_CLAMP))
    };
    let alpha0 = order_at(x)?;
    let gl = gauss_legendre(quad.order)?;
    let gj = gauss_jacobi(quad.order, 0.0, -alpha0)?;

    let mut total = 0.0;
    for dir in [-1.0f64, 1.0] {
        let extent = if dir < 0.0 {
            x.min(lf)
        } else {
            (length - x).min(lf)
        };
        // Length scale of x′ on the side facing x.
        let scale = |xp: f64| -> f64 {
            if dir < 0.0 {
                (length - xp).min(lf)
            } else {
                xp.min(lf)
            }
        };
        let kink = if dir < 0.0 { x - (length - lf) } else { lf - x };
        let panels = panel_edges(extent, quad, x, dir, kink);

        let mut err = None;
        let mut density = |t: f64, with_kernel: bool| -> f64 {
            let xp = x + dir * t;
            let a = match order_at(xp) {
                Ok(a) => a,
                Err(e) => {
                    err.get_or_insert(e);
                    return 0.0;
                }
            };
            let base = (1.0 - a) * scale(xp).powf(a - 1.0) * field(xp);
            if with_kernel {
                base * t.powf(-a)
            } else {
                // The Jacobi weight carries t^(−α0).
                base * t.powf(alpha0 - a)
            }
        };

        let mut side = 0.0;
        for (i, w) in panels.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            side += if i == 0 {
                integrate_left_singular(&gj, alpha0, a, b, |t| density(t, false))
            } else {
                integrate(&gl, a, b, |t| density(t, true))
            };
        }
        if let Some(e) = err {
            return Err(e);
        }
        total += side;
    }
    Ok(0.5 * total)
}

fn panel_edges(extent: f64, quad: &RieszQuadrature, x: f64, dir: f64, kink: f64) -> Vec<f64> {
    let mut edges = vec![0.0, extent];
    let mut t = extent;
    for _ in 0..quad.grading_levels {
        t *= quad.grading_ratio;
        edges.push(t);
    }
    for j in 1..quad.uniform_panels {
        edges.push(extent * j as f64 / quad.uniform_panels as f64);
    }
    for &b in &quad.breakpoints {
        edges.push((b - x) * dir);
    }
    edges.push(kink);
    edges.retain(|&e| (0.0..=extent).contains(&e));
    edges.sort_by(f64::total_cmp);
    let min_gap = 1e-14 * extent;
    let mut out: Vec<f64> = Vec::with_capacity(edges.len());
    for e in edges {
        match out.last() {
            Some(&last) if e - last <= min_gap => {}
            _ => out.push(e),
        }
    }
    if let Some(last) = out.last_mut() {
        *last = extent;
    }
    out
}

/// R-RL derivative: central difference of the Riesz integral with step `fd_step`.
pub fn riesz_rl_derivative<F, A>(
    field: F,
    x: f64,
    alpha: A,
    horizon: &Horizon,
    fd_step: f64,
    quad: &RieszQuadrature,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {fd_step}"
        )));
    }
    if !(x - fd_step > 0.0 && x + fd_step < horizon.length()) {
        return Err(Error::Domain(format!(
            "x = {x} is within fd_step = {fd_step} of a domain end"
        )));
    }
    let ahead = vo_riesz_integral_with(&field, x + fd_step, &alpha, horizon, quad)?;
    let behind = vo_riesz_integral_with(&field, x - fd_step, &alpha, horizon, quad)?;
    Ok((ahead - behind) / (2.0 * fd_step))
}
