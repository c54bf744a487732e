use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Mesh;
use crate::error::{Error, Result};
use crate::operators::{segment_weights, Horizon};
use crate::quadrature::gauss_legendre;

/// Which strain operand a table discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// D^α u₀ with linear shapes; dof i is u₀ at node i.
    Axial,
    /// D^α θ₀ with θ₀ = w₀′ and Hermite shapes; dofs 2i, 2i+1 are w₀, θ₀ at node i.
    Bending,
}

impl Target {
    pub fn dofs_per_node(self) -> usize {
        match self {
            Target::Axial => 1,
            Target::Bending => 2,
        }
    }
}

/// The fractional strain operator at one Gauss point, as a contiguous run of
/// coefficients over the global dofs.
#[derive(Debug, Clone, PartialEq)]
pub struct FracRow {
    pub x: f64,
    /// Gauss weight including the element Jacobian.
    pub weight: f64,
    pub alpha: f64,
    pub first_dof: usize,
    pub coeffs: Vec<f64>,
    /// First and last element contributing to this row.
    pub element_span: (usize, usize),
}

impl FracRow {
    /// D^α of the field with dof vector `dofs` at this point.
    pub fn apply(&self, dofs: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(&dofs[self.first_dof..self.first_dof + self.coeffs.len()])
            .map(|(c, d)| c * d)
            .sum()
    }
}

/// Rows of the fractional strain operator at every Gauss point, ordered by
/// element and then by Gauss point.
#[derive(Debug, Clone, PartialEq)]
pub struct FracBTable {
    pub target: Target,
    pub dof_count: usize,
    pub rows: Vec<FracRow>,
}

impl FracBTable {
    /// Half-bandwidth of the stiffness assembled from this table.
    pub fn bandwidth(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.coeffs.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// D^α at every Gauss point.
    pub fn apply(&self, dofs: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.apply(dofs)).collect()
    }
}

/// Tabulate the fractional strain operator at `gauss_order` points per element.
///
/// Row coefficients are multiplied by `kernel_scale` (1 for the correct
/// operator). Orders outside (0, 1] at any Gauss point are rejected.
pub fn build_frac_b<A>(
    mesh: &Mesh,
    alpha: A,
    horizon: &Horizon,
    target: Target,
    gauss_order: usize,
    kernel_scale: f64,
) -> Result<FracBTable>
where
    A: Fn(f64) -> f64 + Sync,
{
    if gauss_order < 2 {
        return Err(Error::Input(format!(
            "gauss order must be at least 2, got {gauss_order}"
        )));
    }
    if (horizon.length() - mesh.length()).abs() > 1e-12 * mesh.length() {
        return Err(Error::Input(format!(
            "horizon domain length {} differs from mesh length {}",
            horizon.length(),
            mesh.length()
        )));
    }
    let rule = gauss_legendre(gauss_order)?;
    let nodes = mesh.nodes();
    let h = mesh.element_size();
    let dof_count = mesh.node_count() * target.dofs_per_node();

    let rows = (0..mesh.elements() * gauss_order)
        .into_par_iter()
        .map_init(Vec::new, |buf, idx| {
            let e = idx / gauss_order;
            let g = idx % gauss_order;
            let (xi, wg) = (rule.nodes[g], rule.weights[g]);
            let (xa, xb) = (nodes[e], nodes[e + 1]);
            let x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * xi;
            let a = alpha(x);
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::ProfileValidity(format!(
                    "order {a} at Gauss point x = {x}"
                )));
            }
            let (lm, lp) = horizon.truncated_lengths(x)?;
            segment_weights(&nodes, x, a, lm, lp, buf);
            Ok(row_from_weights(
                buf,
                target,
                x,
                0.5 * h * wg,
                a,
                h,
                kernel_scale,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FracBTable {
        target,
        dof_count,
        rows,
    })
}

fn row_from_weights(
    weights: &[crate::operators::SegmentWeight],
    target: Target,
    x: f64,
    weight: f64,
    alpha: f64,
    h: f64,
    scale: f64,
) -> FracRow {
    let lo = weights.iter().map(|w| w.segment).min().unwrap_or(0);
    let hi = weights.iter().map(|w| w.segment).max().unwrap_or(0);
    let per = target.dofs_per_node();
    let first_dof = per * lo;
    let mut coeffs = vec![0.0; per * (hi + 2 - lo)];
    for sw in weights {
        let base = per * (sw.segment - lo);
        let (m0, m1) = (sw.m0 * scale, sw.m1 * scale);
        match target {
            Target::Axial => {
                coeffs[base] -= m0 / h;
                coeffs[base + 1] += m0 / h;
            }
            Target::Bending => {
                let (h2, h3) = (h * h, h * h * h);
                coeffs[base] += -6.0 * m0 / h2 + 12.0 * m1 / h3;
                coeffs[base + 1] += -4.0 * m0 / h + 6.0 * m1 / h2;
                coeffs[base + 2] += 6.0 * m0 / h2 - 12.0 * m1 / h3;
                coeffs[base + 3] += -2.0 * m0 / h + 6.0 * m1 / h2;
            }
        }
    }
    FracRow {
        x,
        weight,
        alpha,
        first_dof,
        coeffs,
        element_span: (lo, hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{vo_rc_derivative, PiecewiseField};

    #[test]
    fn bending_rows_match_operator_on_hermite_field() {
        let mesh = Mesh::new(1.0, 20).unwrap();
        let horizon = Horizon::new(0.2, 1.0).unwrap();
        let law = |x: f64| 0.8 + 0.1 * x;
        let table = build_frac_b(&mesh, law, &horizon, Target::Bending, 4, 1.0).unwrap();
        let nodes = mesh.nodes();
        let w: Vec<f64> = nodes.iter().map(|x| (3.0 * x).sin()).collect();
        let th: Vec<f64> = nodes.iter().map(|x| 3.0 * (3.0 * x).cos()).collect();
        let dofs: Vec<f64> = w.iter().zip(&th).flat_map(|(a, b)| [*a, *b]).collect();
        let field = PiecewiseField::hermite_slope(nodes, w, th).unwrap();
        for row in &table.rows {
            let expect = vo_rc_derivative(&field, row.x, law(row.x), &horizon).unwrap();
            assert!((row.apply(&dofs) - expect).abs() < 1e-10 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn axial_rows_match_operator_on_linear_field() {
        let mesh = Mesh::new(1.0, 16).unwrap();
        let horizon = Horizon::new(0.3, 1.0).unwrap();
        let law = |_x: f64| 0.75;
        let table = build_frac_b(&mesh, law, &horizon, Target::Axial, 3, 1.0).unwrap();
        let nodes = mesh.nodes();
        let u: Vec<f64> = nodes.iter().map(|x| x * x * x).collect();
        let field = PiecewiseField::linear(nodes, u.clone()).unwrap();
        for row in &table.rows {
            let expect = vo_rc_derivative(&field, row.x, 0.75, &horizon).unwrap();
            assert!((row.apply(&u) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_span_horizon_only() {
        let mesh = Mesh::new(1.0, 100).unwrap();
        let horizon = Horizon::new(0.2, 1.0).unwrap();
        let table = build_frac_b(&mesh, |_| 0.9, &horizon, Target::Bending, 4, 1.0).unwrap();
        let h = mesh.element_size();
        for row in &table.rows {
            let (lo, hi) = row.element_span;
            let reach = ((horizon.lf() / h).ceil() as usize) + 1;
            let e = (row.x / h) as usize;
            assert!(e - lo <= reach && hi - e <= reach);
        }
    }

    #[test]
    fn invalid_order_and_gauss_order() {
        let mesh = Mesh::new(1.0, 10).unwrap();
        let horizon = Horizon::new(0.2, 1.0).unwrap();
        assert!(matches!(
            build_frac_b(&mesh, |x| 0.5 + x, &horizon, Target::Axial, 4, 1.0),
            Err(Error::ProfileValidity(_))
        ));
        assert!(build_frac_b(&mesh, |_| 0.9, &horizon, Target::Axial, 1, 1.0).is_err());
    }
}
