//! Fractional finite-element discretization of the nonlocal beam.
//!
//! The axial displacement uses linear shapes and the deflection cubic
//! Hermite shapes. At every Gauss point the VO-RC derivative of the strain
//! operand (u₀ for axial, θ = w₀′ for bending) is a sparse row over the
//! global dofs; stiffness is the weighted sum of row outer products. The two
//! problems are uncoupled and solved independently.

mod assembly;
mod banded;
mod export;
mod frac_b;
mod mesh;
mod solve;

pub use assembly::{
    apply_essential_bcs, assemble_load, assemble_stiffness, Constraints, LinearSystem,
};
pub use banded::{BandCholesky, BandMatrix};
pub use export::{read_solution_csv, write_resultants_csv, write_solution_csv};
pub use frac_b::{build_frac_b, FracBTable, FracRow, Target};
pub use mesh::{Mesh, MIN_ELEMENTS};
pub use solve::{
    postprocess_resultants, solve_static, solve_system, solve_transverse, BeamSolution, Resultant,
    SolverOptions, TransverseResponse,
};
