use super::{check_order, Horizon, PiecewiseField};
use crate::error::{Error, Result};

/// Weight of one segment in the discrete VO-RC derivative at a point.
///
/// If the field derivative on segment `segment` is `c0 + c1 (s − s_a)`, the
/// segment contributes `m0 · c0 + m1 · c1`. A segment can appear twice (once
/// per side of the evaluation point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentWeight {
    pub segment: usize,
    pub m0: f64,
    pub m1: f64,
}

/// Segment weights of D^α at `x` for a field on `nodes` with truncated
/// lengths `l_minus`, `l_plus`.
///
/// Each side is the normalized Caputo integral
/// `(1−α) l^(α−1) ∫₀ˡ f′(x ∓ t) t^(−α) dt`, integrated exactly for
/// derivatives of degree ≤ 1. A side of zero length, and both sides when
/// α = 1, reduce to the one-sided local derivative.
pub fn segment_weights(
    nodes: &[f64],
    x: f64,
    alpha: f64,
    l_minus: f64,
    l_plus: f64,
    out: &mut Vec<SegmentWeight>,
) {
    out.clear();
    let left_home = left_segment(nodes, x);
    let right_home = right_segment(nodes, x);

    if alpha >= 1.0 || l_minus <= 0.0 {
        out.push(local(nodes, left_home, x));
    } else {
        left_side(nodes, x, alpha, l_minus, left_home, out);
    }
    if alpha >= 1.0 || l_plus <= 0.0 {
        out.push(local(nodes, right_home, x));
    } else {
        right_side(nodes, x, alpha, l_plus, right_home, out);
    }
}

fn local(nodes: &[f64], k: usize, x: f64) -> SegmentWeight {
    SegmentWeight {
        segment: k,
        m0: 0.5,
        m1: 0.5 * (x - nodes[k]),
    }
}

/// Segment with s_a < x ≤ s_b, or the first segment at the left end.
fn left_segment(nodes: &[f64], x: f64) -> usize {
    nodes
        .partition_point(|&n| n < x)
        .saturating_sub(1)
        .min(nodes.len() - 2)
}

/// Segment with s_a ≤ x < s_b, or the last segment at the right end.
fn right_segment(nodes: &[f64], x: f64) -> usize {
    nodes
        .partition_point(|&n| n <= x)
        .saturating_sub(1)
        .min(nodes.len() - 2)
}

fn left_side(nodes: &[f64], x: f64, alpha: f64, l: f64, home: usize, out: &mut Vec<SegmentWeight>) {
    let beta = 1.0 - alpha;
    let q_scale = l * beta / (1.0 + beta);
    let start = x - l;
    let first = nodes.partition_point(|&n| n <= start).saturating_sub(1);
    for k in first..=home {
        let (sa, sb) = (nodes[k], nodes[k + 1]);
        let s_lo = sa.max(start);
        let s_hi = sb.min(x);
        if s_hi <= s_lo {
            continue;
        }
        // t = x − s runs from x − s_hi to x − s_lo.
        let t_lo = x - s_hi;
        let t_hi = if sa <= start { l } else { x - sa };
        let (r_lo, r_hi) = (t_lo / l, t_hi / l);
        let p = r_hi.powf(beta) - r_lo.powf(beta);
        let q = q_scale * (r_hi.powf(1.0 + beta) - r_lo.powf(1.0 + beta));
        out.push(SegmentWeight {
            segment: k,
            m0: 0.5 * p,
            m1: 0.5 * ((x - sa) * p - q),
        });
    }
}

fn right_side(
    nodes: &[f64],
    x: f64,
    alpha: f64,
    l: f64,
    home: usize,
    out: &mut Vec<SegmentWeight>,
) {
    let beta = 1.0 - alpha;
    let q_scale = l * beta / (1.0 + beta);
    let end = x + l;
    let last = nodes
        .partition_point(|&n| n < end)
        .saturating_sub(1)
        .min(nodes.len() - 2);
    for k in home..=last {
        let (sa, sb) = (nodes[k], nodes[k + 1]);
        let s_lo = sa.max(x);
        let s_hi = sb.min(end);
        if s_hi <= s_lo {
            continue;
        }
        let t_lo = s_lo - x;
        let t_hi = if sb >= end { l } else { sb - x };
        let (r_lo, r_hi) = (t_lo / l, t_hi / l);
        let p = r_hi.powf(beta) - r_lo.powf(beta);
        let q = q_scale * (r_hi.powf(1.0 + beta) - r_lo.powf(1.0 + beta));
        out.push(SegmentWeight {
            segment: k,
            m0: 0.5 * p,
            m1: 0.5 * ((x - sa) * p + q),
        });
    }
}

/// VO Riesz–Caputo derivative of `field` at `x` with order `alpha = α(x)`.
pub fn vo_rc_derivative(
    field: &PiecewiseField,
    x: f64,
    alpha: f64,
    horizon: &Horizon,
) -> Result<f64> {
    check_order(alpha)?;
    let (l_minus, l_plus) = horizon.truncated_lengths(x)?;
    let nodes = field.nodes();
    let slack = 1e-12 * horizon.length();
    if x - l_minus < nodes[0] - slack || x + l_plus > nodes[nodes.len() - 1] + slack {
        return Err(Error::Domain(format!(
            "field on [{}, {}] does not cover the horizon ({}, {}) of x = {x}",
            nodes[0],
            nodes[nodes.len() - 1],
            x - l_minus,
            x + l_plus
        )));
    }
    let mut weights = Vec::new();
    segment_weights(nodes, x, alpha, l_minus, l_plus, &mut weights);
    Ok(weights
        .iter()
        .map(|w| {
            let (c0, c1) = field.segment_derivative(w.segment);
            w.m0 * c0 + w.m1 * c1
        })
        .sum())
}
