use fracbeam::fem::{
    apply_essential_bcs, assemble_load, assemble_stiffness, build_frac_b, solve_static,
    solve_system, Constraints, LinearSystem, Mesh, SolverOptions, Target,
};
use fracbeam::model::{BeamModel, BoundaryConditions, DistributedLoad, Support, VoProfile};
use fracbeam::operators::Horizon;
use fracbeam::verify::oracles::{
    dense_constrained_solve, dense_stiffness, dense_uniform_load, OracleTarget,
};
use proptest::prelude::*;

fn opts(elements: usize) -> SolverOptions {
    SolverOptions {
        elements,
        ..Default::default()
    }
}

/// Midspan deflection of the dense per-basis assembly, M = 20.
const DENSE_MIDSPAN_ALPHA_09: f64 = 6.962_838_934_887_038e-3;
const DENSE_MIDSPAN_ALPHA_08: f64 = 7.394_034_073_641_124e-3;

#[test]
fn frozen_dense_oracle_midspan() {
    for (a, frozen) in [(0.9, DENSE_MIDSPAN_ALPHA_09), (0.8, DENSE_MIDSPAN_ALPHA_08)] {
        let model = BeamModel::benchmark(VoProfile::Constant { value: a }).unwrap();
        let sol = solve_static(&model, &opts(20)).unwrap();
        assert!((sol.w0[10] - frozen).abs() <= 1e-3 * frozen, "alpha {a}");
        assert!((sol.w0[10] - frozen).abs() <= 1e-10 * frozen, "alpha {a}");
    }
}

#[test]
fn variable_order_matches_dense_oracle() {
    let profile = VoProfile::Linear { a0: 0.75, a1: 0.95 };
    let model = BeamModel::benchmark(profile.clone()).unwrap();
    let sol = solve_static(&model, &opts(20)).unwrap();
    let law = profile.law(1.0);
    let k = dense_stiffness(20, &model.horizon, law, OracleTarget::Bending, 4, 0.4).unwrap();
    let f = dense_uniform_load(20, 1.0, 1.0);
    let u = dense_constrained_solve(&k, &f, &[0, 1, 40, 41]).unwrap();
    for i in 0..=20 {
        assert!((sol.w0[i] - u[2 * i]).abs() <= 1e-9 * sol.max_deflection());
        assert!((sol.theta0[i] - u[2 * i + 1]).abs() <= 1e-9 * 0.03);
    }
}

#[test]
fn local_limit_midspan_moment() {
    let model = BeamModel::benchmark(VoProfile::Constant { value: 1.0 }).unwrap();
    let sol = solve_static(&model, &opts(200)).unwrap();
    let mid = sol
        .resultants
        .iter()
        .min_by(|a, b| (a.x - 0.5).abs().total_cmp(&(b.x - 0.5).abs()))
        .unwrap();
    let expect = 1.0 / 24.0;
    assert!((mid.m - expect).abs() <= 0.01 * expect, "M = {}", mid.m);
    assert!(sol.resultants.iter().all(|r| r.n == 0.0));
}

#[test]
fn fractional_deflection_exceeds_local() {
    let local = solve_static(
        &BeamModel::benchmark(VoProfile::Constant { value: 1.0 }).unwrap(),
        &opts(100),
    )
    .unwrap();
    let frac = solve_static(
        &BeamModel::benchmark(VoProfile::Constant { value: 0.8 }).unwrap(),
        &opts(100),
    )
    .unwrap();
    assert!(frac.max_deflection() > local.max_deflection());
}

#[test]
fn rigid_motion_is_strain_free() {
    let mesh = Mesh::new(1.0, 30).unwrap();
    let horizon = Horizon::new(0.2, 1.0).unwrap();
    let law = |x: f64| 0.8 + 0.15 * x;
    let (a, b) = (0.01, -0.003);
    let table = build_frac_b(&mesh, law, &horizon, Target::Bending, 4, 1.0).unwrap();
    let k = assemble_stiffness(&table, 0.4);
    let last = mesh.node_count() - 1;
    let prescribed = Constraints::prescribed(
        Target::Bending,
        vec![(0, a), (1, b), (2 * last, a + b), (2 * last + 1, b)],
    );
    let mut sys = LinearSystem {
        matrix: k,
        rhs: vec![0.0; table.dof_count],
    };
    apply_essential_bcs(&mut sys, &prescribed).unwrap();
    let dofs = solve_system(&sys).unwrap();
    for i in 0..=last {
        let x = mesh.node(i);
        assert!((dofs[2 * i] - (a + b * x)).abs() < 1e-12);
        assert!((dofs[2 * i + 1] - b).abs() < 1e-12);
    }
    assert!(table.apply(&dofs).iter().all(|d| d.abs() < 1e-10));

    let axial = build_frac_b(&mesh, law, &horizon, Target::Axial, 4, 1.0).unwrap();
    let shift = vec![0.25; axial.dof_count];
    let coeff_scale = 1.0 / mesh.element_size();
    assert!(axial
        .apply(&shift)
        .iter()
        .all(|d| d.abs() <= 1e-13 * coeff_scale));
}

#[test]
fn residual_and_load_balance() {
    let mesh = Mesh::new(1.0, 40).unwrap();
    let horizon = Horizon::new(0.2, 1.0).unwrap();
    let table = build_frac_b(
        &mesh,
        |x| 0.85 + 0.1 * (3.0 * x).sin(),
        &horizon,
        Target::Bending,
        4,
        1.0,
    )
    .unwrap();
    let k = assemble_stiffness(&table, 0.4);
    let load = DistributedLoad::Linear {
        start: 1.0,
        end: 3.0,
    };
    let f = assemble_load(&mesh, &load, Target::Bending);
    let total: f64 = f.iter().step_by(2).sum();
    assert!((total - 2.0).abs() < 1e-13);
    let bcs = BoundaryConditions {
        left: Support::Clamped,
        right: Support::Pinned,
    };
    let constraints = Constraints::from_supports(&bcs, &mesh, Target::Bending);
    let mut sys = LinearSystem {
        matrix: k.clone(),
        rhs: f.clone(),
    };
    apply_essential_bcs(&mut sys, &constraints).unwrap();
    let u = solve_system(&sys).unwrap();
    let r = k.mul_vec(&u);
    let fixed: Vec<usize> = constraints.dofs.iter().map(|(d, _)| *d).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for i in (0..u.len()).filter(|i| !fixed.contains(i)) {
        num += (r[i] - f[i]).powi(2);
        den += f[i].powi(2);
    }
    assert!((num / den).sqrt() < 1e-9);
    for d in fixed {
        assert_eq!(u[d], 0.0);
    }
}

#[test]
fn axial_load_produces_axial_response() {
    let mut model = BeamModel::benchmark(VoProfile::Constant { value: 0.9 }).unwrap();
    model.loads.axial = DistributedLoad::Uniform(100.0);
    let sol = solve_static(&model, &opts(50)).unwrap();
    assert_eq!(sol.u0[0], 0.0);
    assert_eq!(sol.u0[50], 0.0);
    assert!(sol.u0[25].abs() > 0.0);
    // Symmetric axial load on a symmetric bar: antisymmetric axial force.
    let n = &sol.resultants;
    let (first, last) = (n[0].n, n[n.len() - 1].n);
    assert!((first + last).abs() < 1e-6 * first.abs());
}

#[test]
fn solves_are_bitwise_deterministic() {
    let model = BeamModel::benchmark(VoProfile::Tanh {}).unwrap();
    let a = solve_static(&model, &opts(100)).unwrap();
    let b = solve_static(&model, &opts(100)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cantilever_is_solvable_and_free_free_is_not() {
    let mesh = Mesh::new(1.0, 20).unwrap();
    let cant = BoundaryConditions {
        left: Support::Clamped,
        right: Support::Free,
    };
    assert_eq!(
        Constraints::from_supports(&cant, &mesh, Target::Bending)
            .dofs
            .len(),
        2
    );
    let mut model = BeamModel::benchmark(VoProfile::Constant { value: 0.9 }).unwrap();
    model.bcs = cant;
    let sol = solve_static(&model, &opts(20)).unwrap();
    assert!(sol.w0[20] > sol.w0[10]);

    let free = BoundaryConditions {
        left: Support::Free,
        right: Support::Free,
    };
    assert!(model.with_profile(model.profile.clone()).is_ok());
    let mut bad = model.clone();
    bad.bcs = free;
    assert!(solve_static(&bad, &opts(20)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stiffness_is_symmetric_for_linear_profiles(a0 in 0.7f64..=1.0, a1 in 0.7f64..=1.0, m in 10usize..40) {
        let mesh = Mesh::new(1.0, m).unwrap();
        let horizon = Horizon::new(0.2, 1.0).unwrap();
        for target in [Target::Axial, Target::Bending] {
            let table = build_frac_b(&mesh, |x| (a1 - a0) * x + a0, &horizon, target, 4, 1.0).unwrap();
            let k = assemble_stiffness(&table, 1.0);
            prop_assert!(k.asymmetry_norm() <= 1e-12 * k.frobenius_norm());
        }
    }

    #[test]
    fn energy_is_non_negative(values in proptest::collection::vec(-1.0f64..1.0, 42)) {
        let mesh = Mesh::new(1.0, 20).unwrap();
        let horizon = Horizon::new(0.2, 1.0).unwrap();
        let table = build_frac_b(&mesh, |x| 0.75 + 0.2 * x, &horizon, Target::Bending, 4, 1.0).unwrap();
        let k = assemble_stiffness(&table, 1.0);
        let energy = k.quadratic_form(&values);
        let direct: f64 = table.rows.iter().map(|r| r.weight * r.apply(&values).powi(2)).sum();
        prop_assert!(energy >= -1e-12 * direct.abs().max(1.0));
        prop_assert!((energy - direct).abs() <= 1e-9 * direct.abs().max(1e-12));
    }
}
