use crate::error::{Error, Result};

/// How nodal data describe the field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    /// Piecewise-linear interpolant of nodal values; the derivative is
    /// piecewise constant.
    Linear { values: Vec<f64> },
    /// The slope field w′ of the cubic Hermite interpolant of (w, w′) nodal
    /// pairs; its derivative w″ is piecewise linear.
    HermiteSlope { values: Vec<f64>, slopes: Vec<f64> },
}

/// A scalar field on ordered nodes whose derivative is a polynomial of
/// degree ≤ 1 on every segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseField {
    nodes: Vec<f64>,
    kind: FieldKind,
}

impl PiecewiseField {
    pub fn linear(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if values.len() != nodes.len() {
            return Err(Error::Input(format!(
                "{} values for {} nodes",
                values.len(),
                nodes.len()
            )));
        }
        Ok(Self {
            nodes,
            kind: FieldKind::Linear { values },
        })
    }

    pub fn hermite_slope(nodes: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if values.len() != nodes.len() || slopes.len() != nodes.len() {
            return Err(Error::Input(format!(
                "Hermite field needs 2 coefficients per node: {} nodes, {} values, {} slopes",
                nodes.len(),
                values.len(),
                slopes.len()
            )));
        }
        Ok(Self {
            nodes,
            kind: FieldKind::HermiteSlope { values, slopes },
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Index of the segment used to evaluate at `x` (right-continuous).
    pub fn segment_of(&self, x: f64) -> usize {
        let k = self.nodes.partition_point(|&n| n <= x);
        k.saturating_sub(1).min(self.segment_count() - 1)
    }

    /// Coefficients `(c0, c1)` such that the field derivative on segment `k`
    /// equals `c0 + c1 (s − nodes[k])`.
    pub fn segment_derivative(&self, k: usize) -> (f64, f64) {
        let (xa, xb) = (self.nodes[k], self.nodes[k + 1]);
        let h = xb - xa;
        match &self.kind {
            FieldKind::Linear { values } => ((values[k + 1] - values[k]) / h, 0.0),
            FieldKind::HermiteSlope { values, slopes } => {
                let (wa, wb, ta, tb) = (values[k], values[k + 1], slopes[k], slopes[k + 1]);
                let c0 = (-6.0 * wa - 4.0 * h * ta + 6.0 * wb - 2.0 * h * tb) / (h * h);
                let c1 = (12.0 * (wa - wb) + 6.0 * h * (ta + tb)) / (h * h * h);
                (c0, c1)
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let k = self.segment_of(x);
        let (xa, xb) = (self.nodes[k], self.nodes[k + 1]);
        let h = xb - xa;
        let xi = (x - xa) / h;
        match &self.kind {
            FieldKind::Linear { values } => values[k] + (values[k + 1] - values[k]) * xi,
            FieldKind::HermiteSlope { values, slopes } => {
                let (wa, wb, ta, tb) = (values[k], values[k + 1], slopes[k], slopes[k + 1]);
                let d1 = (-6.0 * xi + 6.0 * xi * xi) / h;
                let d2 = 1.0 - 4.0 * xi + 3.0 * xi * xi;
                let d3 = (6.0 * xi - 6.0 * xi * xi) / h;
                let d4 = -2.0 * xi + 3.0 * xi * xi;
                d1 * wa + d2 * ta + d3 * wb + d4 * tb
            }
        }
    }

    /// Field derivative at `x`, taken from the segment [`segment_of`] picks.
    ///
    /// [`segment_of`]: Self::segment_of
    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.segment_of(x);
        let (c0, c1) = self.segment_derivative(k);
        c0 + c1 * (x - self.nodes[k])
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::Input(
            "a piecewise field needs at least two nodes".into(),
        ));
    }
    if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input(
            "field nodes must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}
