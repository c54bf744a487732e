use serde::{Deserialize, Serialize};

use super::{
    apply_essential_bcs, assemble_load, assemble_stiffness, build_frac_b, Constraints, FracBTable,
    LinearSystem, Mesh, Target,
};
use crate::error::Result;
use crate::model::BeamModel;

/// Discretization controls shared by every solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    pub elements: usize,
    pub gauss_order: usize,
    /// Multiplies every fractional-row coefficient; 1 for the true operator.
    pub kernel_scale: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            elements: 200,
            gauss_order: 4,
            kernel_scale: 1.0,
        }
    }
}

/// Stress resultants at one Gauss point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resultant {
    pub x: f64,
    pub alpha: f64,
    /// D^α u₀
    pub axial_strain: f64,
    /// D^α θ₀
    pub curvature: f64,
    /// N = EA D^α u₀
    pub n: f64,
    /// M = −EI D^α θ₀
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSolution {
    pub x: Vec<f64>,
    pub u0: Vec<f64>,
    pub w0: Vec<f64>,
    pub theta0: Vec<f64>,
    pub resultants: Vec<Resultant>,
}

impl BeamSolution {
    pub fn max_deflection(&self) -> f64 {
        self.w0.iter().fold(0.0, |m: f64, w| m.max(w.abs()))
    }
}

/// Nodal deflection and rotation of the bending problem alone.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseResponse {
    pub x: Vec<f64>,
    pub w0: Vec<f64>,
    pub theta0: Vec<f64>,
}

/// Factor and solve a constrained system.
pub fn solve_system(system: &LinearSystem) -> Result<Vec<f64>> {
    Ok(system.matrix.cholesky()?.solve(&system.rhs))
}

fn solve_target(
    model: &BeamModel,
    mesh: &Mesh,
    opts: &SolverOptions,
    target: Target,
) -> Result<(FracBTable, Vec<f64>)> {
    let law = model.profile.law(model.length());
    let table = build_frac_b(
        mesh,
        law,
        &model.horizon,
        target,
        opts.gauss_order,
        opts.kernel_scale,
    )?;
    let (scale, load) = match target {
        Target::Axial => (model.axial_rigidity(), &model.loads.axial),
        Target::Bending => (model.bending_rigidity(), &model.loads.transverse),
    };
    let mut system = LinearSystem {
        matrix: assemble_stiffness(&table, scale),
        rhs: assemble_load(mesh, load, target),
    };
    apply_essential_bcs(
        &mut system,
        &Constraints::from_supports(&model.bcs, mesh, target),
    )?;
    let dofs = solve_system(&system)?;
    Ok((table, dofs))
}

/// Axial and transverse static response with stress resultants.
pub fn solve_static(model: &BeamModel, opts: &SolverOptions) -> Result<BeamSolution> {
    let mesh = Mesh::new(model.length(), opts.elements)?;
    let (axial, u0) = solve_target(model, &mesh, opts, Target::Axial)?;
    let (bending, wt) = solve_target(model, &mesh, opts, Target::Bending)?;
    let resultants = postprocess_resultants(
        &axial,
        &bending,
        &u0,
        &wt,
        model.axial_rigidity(),
        model.bending_rigidity(),
    );
    Ok(BeamSolution {
        x: mesh.nodes(),
        u0,
        w0: wt.iter().step_by(2).copied().collect(),
        theta0: wt.iter().skip(1).step_by(2).copied().collect(),
        resultants,
    })
}

/// Bending problem only.
pub fn solve_transverse(model: &BeamModel, opts: &SolverOptions) -> Result<TransverseResponse> {
    let mesh = Mesh::new(model.length(), opts.elements)?;
    let (_, wt) = solve_target(model, &mesh, opts, Target::Bending)?;
    Ok(TransverseResponse {
        x: mesh.nodes(),
        w0: wt.iter().step_by(2).copied().collect(),
        theta0: wt.iter().skip(1).step_by(2).copied().collect(),
    })
}

/// N and M at the Gauss points of the two tables, which must share a mesh
/// and Gauss order.
pub fn postprocess_resultants(
    axial: &FracBTable,
    bending: &FracBTable,
    u0: &[f64],
    w_theta: &[f64],
    axial_rigidity: f64,
    bending_rigidity: f64,
) -> Vec<Resultant> {
    axial
        .rows
        .iter()
        .zip(&bending.rows)
        .map(|(ra, rb)| {
            let axial_strain = ra.apply(u0);
            let curvature = rb.apply(w_theta);
            Resultant {
                x: rb.x,
                alpha: rb.alpha,
                axial_strain,
                curvature,
                n: axial_rigidity * axial_strain,
                m: -bending_rigidity * curvature,
            }
        })
        .collect()
}
