use super::{BandMatrix, FracBTable, Mesh, Target};
use crate::error::{Error, Result};
use crate::model::{BoundaryConditions, DistributedLoad, Support};
use crate::quadrature::gauss_legendre;

/// K = scale · Σ_g w_g B_gᵀ B_g over the rows of `table`.
///
/// `scale` is EA for the axial table and EI for the bending table.
pub fn assemble_stiffness(table: &FracBTable, scale: f64) -> BandMatrix {
    let mut k = BandMatrix::zeros(table.dof_count, table.bandwidth());
    for row in &table.rows {
        let f = scale * row.weight;
        let d0 = row.first_dof;
        for (a, ca) in row.coeffs.iter().enumerate() {
            let fa = f * ca;
            for (b, cb) in row.coeffs.iter().enumerate() {
                k.add(d0 + a, d0 + b, fa * cb);
            }
        }
    }
    k
}

/// Consistent nodal load vector of a distributed load, 4-point Gauss per element.
pub fn assemble_load(mesh: &Mesh, load: &DistributedLoad, target: Target) -> Vec<f64> {
    let rule = gauss_legendre(4).expect("4-point rule");
    let per = target.dofs_per_node();
    let mut f = vec![0.0; mesh.node_count() * per];
    if load.is_zero() {
        return f;
    }
    let h = mesh.element_size();
    for e in 0..mesh.elements() {
        let xa = mesh.node(e);
        for (xi, wg) in rule.iter() {
            let r = 0.5 * (1.0 + xi);
            let q = load.value(xa + r * h, mesh.length()) * 0.5 * h * wg;
            match target {
                Target::Axial => {
                    f[e] += q * (1.0 - r);
                    f[e + 1] += q * r;
                }
                Target::Bending => {
                    let (r2, r3) = (r * r, r * r * r);
                    f[2 * e] += q * (1.0 - 3.0 * r2 + 2.0 * r3);
                    f[2 * e + 1] += q * h * (r - 2.0 * r2 + r3);
                    f[2 * e + 2] += q * (3.0 * r2 - 2.0 * r3);
                    f[2 * e + 3] += q * h * (r3 - r2);
                }
            }
        }
    }
    f
}

/// Stiffness and right-hand side of one of the two uncoupled problems.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: BandMatrix,
    pub rhs: Vec<f64>,
}

/// Prescribed dof values for one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraints {
    pub target: Target,
    pub dofs: Vec<(usize, f64)>,
}

impl Constraints {
    /// Homogeneous essential conditions implied by the supports.
    pub fn from_supports(bcs: &BoundaryConditions, mesh: &Mesh, target: Target) -> Self {
        let last = mesh.node_count() - 1;
        let mut dofs = Vec::new();
        for (support, node) in [(bcs.left, 0), (bcs.right, last)] {
            match (target, support) {
                (_, Support::Free) => {}
                (Target::Axial, _) => dofs.push((node, 0.0)),
                (Target::Bending, Support::Pinned) => dofs.push((2 * node, 0.0)),
                (Target::Bending, Support::Clamped) => {
                    dofs.push((2 * node, 0.0));
                    dofs.push((2 * node + 1, 0.0));
                }
            }
        }
        Self { target, dofs }
    }

    /// Arbitrary prescribed values, e.g. an imposed rigid motion.
    pub fn prescribed(target: Target, dofs: Vec<(usize, f64)>) -> Self {
        Self { target, dofs }
    }

    /// Enough constraints to remove the rigid modes of the target problem.
    fn check_sufficient(&self) -> Result<()> {
        let ok = match self.target {
            Target::Axial => !self.dofs.is_empty(),
            Target::Bending => {
                let w_count = self.dofs.iter().filter(|(d, _)| d % 2 == 0).count();
                w_count >= 1 && self.dofs.len() >= 2
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Singular(format!(
                "{:?} problem has rigid modes: {} constrained dof(s)",
                self.target,
                self.dofs.len()
            )))
        }
    }
}

/// Impose essential conditions by symmetric elimination.
///
/// The known value times the stiffness column is moved to the right-hand
/// side, the row and column are zeroed, and a unit diagonal carries the
/// prescribed value.
pub fn apply_essential_bcs(system: &mut LinearSystem, constraints: &Constraints) -> Result<()> {
    constraints.check_sufficient()?;
    let n = system.matrix.size();
    let bw = system.matrix.bandwidth();
    for &(d, v) in &constraints.dofs {
        if d >= n {
            return Err(Error::Input(format!("constrained dof {d} out of range")));
        }
        if v != 0.0 {
            for i in d.saturating_sub(bw)..=(d + bw).min(n - 1) {
                system.rhs[i] -= system.matrix.get(i, d) * v;
            }
        }
        system.matrix.zero_row_and_column(d);
        system.matrix.set(d, d, 1.0);
        system.rhs[d] = v;
    }
    Ok(())
}
