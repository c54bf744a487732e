//! Self-checks of the discretization against closed forms, independent
//! oracles and structural invariants, collected into a JSON report.

pub mod oracles;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{
    audit_records, generate_dataset, read_manifest, read_records, sample_profile, DatasetFamily,
};
use crate::error::Result;
use crate::fem::{
    assemble_stiffness, build_frac_b, solve_static, Constraints, Mesh, SolverOptions, Target,
};
use crate::inverse::{identify_vo_lsq, InverseConfig, Observation};
use crate::model::{BeamModel, VoProfile};
use crate::operators::{vo_rc_derivative, Horizon, PiecewiseField};
use oracles::{dense_stiffness, rc_derivative_quadrature, OracleTarget};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Multiplies the fractional kernel in every solver-based check; values
    /// other than 1 inject a fault the report must catch.
    pub kernel_scale: f64,
    pub seed: u64,
    /// Profiles used by the self-adjointness and definiteness checks.
    pub random_profiles: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            kernel_scale: 1.0,
            seed: 2024,
            random_profiles: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Check = fn(&VerifyOptions) -> Result<CheckResult>;

/// Every check, in report order.
pub const CHECKS: [(&str, Check); 9] = [
    ("local_limit_deflection", check_local_limit),
    ("self_adjointness", check_self_adjointness),
    ("positive_definiteness", check_positive_definiteness),
    ("operator_exactness", check_operator_exactness),
    ("oracle_equivalence", check_oracle_equivalence),
    ("mesh_convergence", check_mesh_convergence),
    ("symmetry", check_symmetry),
    ("inverse_round_trip", check_inverse_round_trip),
    ("dataset_determinism", check_dataset_determinism),
];

pub fn run_checks(opts: &VerifyOptions) -> VerifyReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .map(|(name, f)| run_one(name, *f, opts))
        .collect();
    VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Run a single check, turning an error into a failed result.
pub fn run_one(name: &'static str, check: Check, opts: &VerifyOptions) -> CheckResult {
    let start = Instant::now();
    let mut result = check(opts).unwrap_or_else(|e| CheckResult {
        name,
        passed: false,
        measured: f64::NAN,
        tolerance: f64::NAN,
        detail: format!("error: {e}"),
        seconds: 0.0,
    });
    result.seconds = start.elapsed().as_secs_f64();
    result
}

fn result(
    name: &'static str,
    measured: f64,
    tolerance: f64,
    passed: bool,
    detail: String,
) -> CheckResult {
    CheckResult {
        name,
        passed,
        measured,
        tolerance,
        detail,
        seconds: 0.0,
    }
}

fn solver(opts: &VerifyOptions, elements: usize) -> SolverOptions {
    SolverOptions {
        elements,
        kernel_scale: opts.kernel_scale,
        ..Default::default()
    }
}

fn random_profiles(opts: &VerifyOptions) -> Vec<VoProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.random_profiles)
        .map(|i| sample_profile(DatasetFamily::ALL[i % 4], &mut rng, 1.0, 201))
        .collect()
}

/// α ≡ 1 benchmark against q L⁴ / (384 E I).
pub fn check_local_limit(opts: &VerifyOptions) -> Result<CheckResult> {
    let model = BeamModel::benchmark(VoProfile::Constant { value: 1.0 })?;
    let start = Instant::now();
    let sol = solve_static(&model, &solver(opts, 200))?;
    let elapsed = start.elapsed().as_secs_f64();
    let exact = 1.0 / (384.0 * model.bending_rigidity());
    let rel = (sol.max_deflection() - exact).abs() / exact;
    Ok(result(
        "local_limit_deflection",
        rel,
        5e-3,
        rel <= 5e-3 && elapsed < 1.0,
        format!(
            "max w0 = {:.6e} m, closed form {exact:.6e} m, solve {elapsed:.3} s",
            sol.max_deflection()
        ),
    ))
}

fn stiffness(
    model: &BeamModel,
    target: Target,
    opts: &SolverOptions,
) -> Result<(Mesh, crate::fem::BandMatrix)> {
    let mesh = Mesh::new(model.length(), opts.elements)?;
    let law = model.profile.law(model.length());
    let table = build_frac_b(
        &mesh,
        law,
        &model.horizon,
        target,
        opts.gauss_order,
        opts.kernel_scale,
    )?;
    let scale = match target {
        Target::Axial => model.axial_rigidity(),
        Target::Bending => model.bending_rigidity(),
    };
    Ok((mesh, assemble_stiffness(&table, scale)))
}

/// ‖K − Kᵀ‖_F / ‖K‖_F for axial and bending stiffness of random profiles.
pub fn check_self_adjointness(opts: &VerifyOptions) -> Result<CheckResult> {
    let so = solver(opts, 200);
    let profiles = random_profiles(opts);
    let worst = profiles
        .par_iter()
        .map(|p| {
            let model = BeamModel::benchmark(p.clone())?;
            let mut worst: f64 = 0.0;
            for target in [Target::Axial, Target::Bending] {
                let (_, k) = stiffness(&model, target, &so)?;
                worst = worst.max(k.asymmetry_norm() / k.frobenius_norm());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(result(
        "self_adjointness",
        worst,
        1e-10,
        worst <= 1e-10,
        format!("{} profiles, axial and bending, M = 200", profiles.len()),
    ))
}

/// Smallest eigenvalue of the free-dof block of the transverse stiffness.
pub fn check_positive_definiteness(opts: &VerifyOptions) -> Result<CheckResult> {
    let so = solver(opts, 200);
    let profiles = random_profiles(opts);
    let smallest = profiles
        .par_iter()
        .map(|p| {
            let model = BeamModel::benchmark(p.clone())?;
            let (mesh, k) = stiffness(&model, Target::Bending, &so)?;
            let fixed = Constraints::from_supports(&model.bcs, &mesh, Target::Bending);
            let free: Vec<usize> = (0..k.size())
                .filter(|d| !fixed.dofs.iter().any(|(f, _)| f == d))
                .collect();
            let reduced = k.principal_submatrix(&free);
            // Relative to the diagonal scale so the threshold is unit-free.
            let diag = (0..reduced.size())
                .map(|i| reduced.get(i, i))
                .fold(0.0, f64::max);
            Ok(reduced.smallest_eigenvalue()? / diag)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(result(
        "positive_definiteness",
        smallest,
        0.0,
        smallest > 0.0,
        format!(
            "{} profiles; smallest constrained eigenvalue / max diagonal = {smallest:.3e}",
            profiles.len()
        ),
    ))
}

fn random_field(rng: &mut ChaCha8Rng, hermite: bool) -> Result<PiecewiseField> {
    let segments = rng.gen_range(10..40);
    let mut nodes: Vec<f64> = (0..=segments)
        .map(|i| {
            i as f64 / segments as f64
                + if i > 0 && i < segments {
                    rng.gen_range(-0.2..0.2) / segments as f64
                } else {
                    0.0
                }
        })
        .collect();
    nodes[segments] = 1.0;
    let values: Vec<f64> = (0..=segments).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if hermite {
        let slopes = (0..=segments).map(|_| rng.gen_range(-3.0..3.0)).collect();
        PiecewiseField::hermite_slope(nodes, values, slopes)
    } else {
        PiecewiseField::linear(nodes, values)
    }
}

/// D^α of constants vanishes exactly; D^α of c·x equals c.
pub fn check_operator_exactness(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0e);
    let horizon = Horizon::new(0.2, 1.0)?;
    let mut constant_max: f64 = 0.0;
    let mut linear_max: f64 = 0.0;
    for _ in 0..200 {
        let base = random_field(&mut rng, false)?;
        let nodes = base.nodes().to_vec();
        let c = rng.gen_range(-5.0..5.0);
        let k = rng.gen_range(-5.0..5.0);
        let constant = PiecewiseField::linear(nodes.clone(), vec![k; nodes.len()])?;
        let ramp =
            PiecewiseField::linear(nodes.clone(), nodes.iter().map(|x| c * x + k).collect())?;
        let x = rng.gen_range(0.0..=1.0);
        let a = rng.gen_range(0.05..=1.0);
        constant_max = constant_max.max(vo_rc_derivative(&constant, x, a, &horizon)?.abs());
        for alpha in [0.7, 0.8, 0.9, 1.0] {
            let xi = rng.gen_range(0.01..0.99);
            let d = vo_rc_derivative(&ramp, xi, alpha, &horizon)?;
            linear_max = linear_max.max((d - c).abs() / c.abs().max(1.0));
        }
    }
    Ok(result(
        "operator_exactness",
        linear_max,
        1e-12,
        constant_max == 0.0 && linear_max <= 1e-12,
        format!(
            "max |D(const)| = {constant_max:e}, max |D(c·x) − c| / max(1, |c|) = {linear_max:e}"
        ),
    ))
}

/// Closed-form segment weights against adaptive quadrature, and banded
/// assembly against dense per-basis assembly.
pub fn check_oracle_equivalence(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0c);
    let horizon = Horizon::new(0.2, 1.0)?;
    let mut op_err: f64 = 0.0;
    for i in 0..100 {
        let field = random_field(&mut rng, i % 2 == 1)?;
        let x = rng.gen_range(0.0..=1.0);
        let a = rng.gen_range(0.6..0.99);
        let closed = vo_rc_derivative(&field, x, a, &horizon)?;
        let oracle = rc_derivative_quadrature(&field, x, a, &horizon, 1e-13)?;
        op_err = op_err.max((closed - oracle).abs() / oracle.abs().max(1.0));
    }

    let mut k_err: f64 = 0.0;
    let so = solver(opts, 20);
    let profile = VoProfile::Sinusoidal {
        b0: 0.75,
        b1: 0.6,
        b2: 0.3,
    };
    let model = BeamModel::benchmark(profile)?;
    for (target, oracle_target) in [
        (Target::Axial, OracleTarget::Axial),
        (Target::Bending, OracleTarget::Bending),
    ] {
        let (_, banded) = stiffness(&model, target, &so)?;
        let scale = match target {
            Target::Axial => model.axial_rigidity(),
            Target::Bending => model.bending_rigidity(),
        };
        let law = model.profile.law(1.0);
        let dense = dense_stiffness(
            20,
            &model.horizon,
            law,
            oracle_target,
            so.gauss_order,
            scale,
        )?;
        let diff = (banded.to_dense() - &dense).abs().max();
        k_err = k_err.max(diff / dense.abs().max());
    }
    let tol_op = 1e-9;
    let tol_k = 1e-10;
    Ok(result(
        "oracle_equivalence",
        (op_err / tol_op).max(k_err / tol_k),
        1.0,
        op_err <= tol_op && k_err <= tol_k,
        format!(
            "operator vs quadrature {op_err:.3e} (tol {tol_op:e}); banded vs dense stiffness {k_err:.3e} (tol {tol_k:e}); measured is the larger error/tolerance ratio"
        ),
    ))
}

/// α ≡ 0.8 maximum deflection, M = 100 against M = 200.
pub fn check_mesh_convergence(opts: &VerifyOptions) -> Result<CheckResult> {
    let model = BeamModel::benchmark(VoProfile::Constant { value: 0.8 })?;
    let coarse = solve_static(&model, &solver(opts, 100))?.max_deflection();
    let fine = solve_static(&model, &solver(opts, 200))?.max_deflection();
    let change = (fine - coarse).abs() / fine;
    Ok(result(
        "mesh_convergence",
        change,
        5e-3,
        change < 5e-3,
        format!("max w0: M=100 {coarse:.8e}, M=200 {fine:.8e}"),
    ))
}

/// Mirror-symmetric profiles give mirror-symmetric deflection and
/// antisymmetric rotation.
pub fn check_symmetry(opts: &VerifyOptions) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5e);
    let mut half: Vec<f64> = (0..11).map(|_| rng.gen_range(0.7..=1.0)).collect();
    let mirrored: Vec<f64> = half.iter().rev().skip(1).copied().collect();
    half.extend(mirrored);
    let profiles = [
        VoProfile::Constant { value: 0.85 },
        VoProfile::CustomNodal { values: half },
        VoProfile::Polynomial10 {
            c: vec![0.9, 0.2, -0.2],
        },
    ];
    let mut worst: f64 = 0.0;
    for p in profiles {
        let model = BeamModel::benchmark(p)?;
        let sol = solve_static(&model, &solver(opts, 200))?;
        let n = sol.w0.len();
        let wmax = sol.max_deflection();
        let tmax = sol.theta0.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        for i in 0..n {
            let j = n - 1 - i;
            worst = worst.max((sol.w0[i] - sol.w0[j]).abs() / wmax);
            worst = worst.max((sol.theta0[i] + sol.theta0[j]).abs() / tmax);
        }
    }
    Ok(result(
        "symmetry",
        worst,
        1e-8,
        worst <= 1e-8,
        "constant, symmetric nodal and symmetric quadratic profiles, M = 200".into(),
    ))
}

/// Noise-free recovery of a constant and a linear profile.
pub fn check_inverse_round_trip(opts: &VerifyOptions) -> Result<CheckResult> {
    let so = solver(opts, 200);
    let cfg = InverseConfig::default();
    let mut errors = Vec::new();
    for p in [
        VoProfile::Constant { value: 0.9 },
        VoProfile::Linear { a0: 0.75, a1: 0.95 },
    ] {
        let model = BeamModel::benchmark(p.clone())?;
        let sol = solve_static(&model, &so)?;
        let truth: Vec<f64> = sol.x.iter().map(|x| p.order_at(*x, 1.0)).collect();
        let obs = Observation {
            w: sol.w0,
            theta: sol.theta0,
        };
        let res = identify_vo_lsq(&obs, &model, &cfg, &so)?;
        let abs: Vec<f64> = res
            .alpha
            .iter()
            .zip(&truth)
            .map(|(a, t)| (a - t).abs())
            .collect();
        errors.push((
            abs.iter().cloned().fold(0.0, f64::max),
            abs.iter().sum::<f64>() / abs.len() as f64,
            res.iterations,
        ));
    }
    let (const_max, _, const_it) = errors[0];
    let (_, lin_mean, lin_it) = errors[1];
    Ok(result(
        "inverse_round_trip",
        (const_max / 0.01).max(lin_mean / 0.02),
        1.0,
        const_max <= 0.01 && lin_mean <= 0.02,
        format!(
            "constant 0.9: max nodal error {const_max:.3e} ({const_it} iterations); linear 0.75→0.95: mean abs error {lin_mean:.3e} ({lin_it} iterations); measured is the larger error/tolerance ratio"
        ),
    ))
}

/// Two generations with the same seed, on different thread counts, are
/// byte-identical; stored responses re-solve to 1e-10.
pub fn check_dataset_determinism(opts: &VerifyOptions) -> Result<CheckResult> {
    let dir = tempfile::tempdir()?;
    let so = solver(opts, 200);
    let n_per_family = 25;
    let paths = [dir.path().join("a.ndjson"), dir.path().join("b.ndjson")];
    for (path, threads) in paths.iter().zip([0, 1]) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::Error::Input(e.to_string()))?;
        pool.install(|| generate_dataset(n_per_family, opts.seed, path, &so))?;
    }
    let sorted_lines = |p: &std::path::Path| -> Result<Vec<String>> {
        let records = read_records(p)?;
        let text = std::fs::read_to_string(p)?;
        let mut lines: Vec<(u64, String)> = records
            .iter()
            .map(|r| r.id)
            .zip(text.lines().map(str::to_owned))
            .collect();
        lines.sort_by_key(|(id, _)| *id);
        Ok(lines.into_iter().map(|(_, l)| l).collect())
    };
    let identical = sorted_lines(&paths[0])? == sorted_lines(&paths[1])?
        && read_manifest(&paths[0])? == read_manifest(&paths[1])?;

    let records = read_records(&paths[0])?;
    let round_trip = records.iter().all(|r| {
        serde_json::to_string(r)
            .ok()
            .and_then(|s| serde_json::from_str::<crate::dataset::SampleRecord>(&s).ok())
            .as_ref()
            == Some(r)
    });
    let audit = audit_records(&records, 0.01, opts.seed, &so)?;
    Ok(result(
        "dataset_determinism",
        audit.max_relative_error,
        1e-10,
        identical && round_trip && audit.max_relative_error <= 1e-10,
        format!(
            "{} records; byte-identical after id sort: {identical}; record round-trip: {round_trip}; audited ids {:?}",
            records.len(),
            audit.checked
        ),
    ))
}
