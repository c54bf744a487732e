//! Benchmark beam data model: material, geometry, fractional-order profiles,
//! loads and supports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationIssue};
use crate::operators::Horizon;
use crate::special::bessel_j;

/// Points used to check that a profile stays inside (0, 1].
pub const PROFILE_SCAN_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    /// Young's modulus, Pa.
    #[serde(rename = "E")]
    pub youngs_modulus: f64,
    /// Poisson ratio; the 1D equations do not use it.
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "b")]
    pub width: f64,
    #[serde(rename = "h")]
    pub thickness: f64,
}

impl Geometry {
    pub fn area(&self) -> f64 {
        self.width * self.thickness
    }

    /// I = b h³ / 12
    pub fn second_moment(&self) -> f64 {
        self.width * self.thickness.powi(3) / 12.0
    }
}

/// Spatial law of the fractional order α(x).
///
/// Serialized as `{"family": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum VoProfile {
    Constant {
        value: f64,
    },
    /// α = (a₁ − a₀) x + a₀
    Linear {
        a0: f64,
        a1: f64,
    },
    /// α = b₀ + 0.1 |sin(b₁x/L) + cos(b₂x/L)|
    Sinusoidal {
        b0: f64,
        b1: f64,
        b2: f64,
    },
    /// α = Σ cₖ xᵏ, k = 0..=10
    Polynomial10 {
        c: Vec<f64>,
    },
    /// Nodal values on equally spaced nodes, linear in between.
    RandomNodal {
        values: Vec<f64>,
    },
    /// α = 0.428 J₅(10x) + 0.820
    Bessel {},
    /// α = 0.102 tanh(6x − 2) + 0.848
    Tanh {},
    CustomNodal {
        values: Vec<f64>,
    },
}

impl VoProfile {
    pub fn family_name(&self) -> &'static str {
        match self {
            VoProfile::Constant { .. } => "constant",
            VoProfile::Linear { .. } => "linear",
            VoProfile::Sinusoidal { .. } => "sinusoidal",
            VoProfile::Polynomial10 { .. } => "polynomial10",
            VoProfile::RandomNodal { .. } => "random_nodal",
            VoProfile::Bessel {} => "bessel",
            VoProfile::Tanh {} => "tanh",
            VoProfile::CustomNodal { .. } => "custom_nodal",
        }
    }

    /// Family formula at `x` on a beam of length `length`, without range checks.
    pub fn order_at(&self, x: f64, length: f64) -> f64 {
        match self {
            VoProfile::Constant { value } => *value,
            VoProfile::Linear { a0, a1 } => (a1 - a0) * x + a0,
            VoProfile::Sinusoidal { b0, b1, b2 } => {
                b0 + 0.1 * ((b1 * x / length).sin() + (b2 * x / length).cos()).abs()
            }
            VoProfile::Polynomial10 { c } => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            VoProfile::RandomNodal { values } | VoProfile::CustomNodal { values } => {
                nodal_interpolate(values, x / length)
            }
            VoProfile::Bessel {} => 0.428 * bessel_j(5, 10.0 * x) + 0.820,
            VoProfile::Tanh {} => 0.102 * (6.0 * x - 2.0).tanh() + 0.848,
        }
    }

    /// α(x), rejecting values outside (0, 1].
    pub fn eval(&self, x: f64, length: f64) -> Result<f64> {
        if !(x >= 0.0 && x <= length) {
            return Err(Error::Domain(format!("x = {x} outside [0, {length}]")));
        }
        let a = self.order_at(x, length);
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::ProfileValidity(format!(
                "{} profile gives {a} at x = {x}",
                self.family_name()
            )));
        }
        Ok(a)
    }

    /// The profile as a closure over `[0, length]`.
    pub fn law(&self, length: f64) -> impl Fn(f64) -> f64 + Sync + '_ {
        move |x| self.order_at(x, length)
    }

    /// Minimum and maximum over an evenly spaced scan of `points` samples.
    pub fn scan_range(&self, length: f64, points: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..points {
            let x = length * i as f64 / (points - 1) as f64;
            let a = self.order_at(x, length);
            // NaN propagates into both bounds
            if a.is_nan() {
                return (f64::NAN, f64::NAN);
            }
            lo = lo.min(a);
            hi = hi.max(a);
        }
        (lo, hi)
    }

    fn structural_issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        match self {
            VoProfile::Polynomial10 { c } if c.is_empty() || c.len() > 11 => {
                issues.push(ValidationIssue::new(
                    "vo.params.c",
                    format!("expected 1 to 11 coefficients, got {}", c.len()),
                ));
            }
            VoProfile::RandomNodal { values } | VoProfile::CustomNodal { values }
                if values.len() < 2 =>
            {
                issues.push(ValidationIssue::new(
                    "vo.params.values",
                    "nodal profiles need at least two values",
                ));
            }
            _ => {}
        }
        issues
    }
}

/// `values` sampled at equally spaced points of [0, 1]; `u` ∈ [0, 1].
fn nodal_interpolate(values: &[f64], u: f64) -> f64 {
    let n = values.len();
    if n == 1 {
        return values[0];
    }
    let pos = (u * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
    let i = (pos.floor() as usize).min(n - 2);
    let frac = pos - i as f64;
    values[i] + (values[i + 1] - values[i]) * frac
}

/// α(x) with range checking; see [`VoProfile::eval`].
pub fn eval_profile(profile: &VoProfile, x: f64, length: f64) -> Result<f64> {
    profile.eval(x, length)
}

/// Distributed load intensity along the beam, N/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributedLoad {
    Uniform(f64),
    /// Linear variation from `start` at x = 0 to `end` at x = L.
    Linear {
        start: f64,
        end: f64,
    },
}

impl DistributedLoad {
    pub fn value(&self, x: f64, length: f64) -> f64 {
        match *self {
            DistributedLoad::Uniform(q) => q,
            DistributedLoad::Linear { start, end } => start + (end - start) * x / length,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            DistributedLoad::Uniform(q) => q == 0.0,
            DistributedLoad::Linear { start, end } => start == 0.0 && end == 0.0,
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            DistributedLoad::Uniform(q) => q.is_finite(),
            DistributedLoad::Linear { start, end } => start.is_finite() && end.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadCase {
    pub transverse: DistributedLoad,
    pub axial: DistributedLoad,
}

impl Default for LoadCase {
    fn default() -> Self {
        Self {
            transverse: DistributedLoad::Uniform(1.0),
            axial: DistributedLoad::Uniform(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    /// w₀ = θ₀ = 0 and u₀ = 0
    Clamped,
    /// w₀ = 0 and u₀ = 0
    Pinned,
    Free,
}

impl Support {
    fn transverse_constraints(self) -> usize {
        match self {
            Support::Clamped => 2,
            Support::Pinned => 1,
            Support::Free => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConditions {
    pub left: Support,
    pub right: Support,
}

impl BoundaryConditions {
    pub const CLAMPED_CLAMPED: Self = Self {
        left: Support::Clamped,
        right: Support::Clamped,
    };
}

/// A validated beam problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamModel {
    pub material: Material,
    pub geometry: Geometry,
    pub horizon: Horizon,
    pub profile: VoProfile,
    pub loads: LoadCase,
    pub bcs: BoundaryConditions,
}

impl BeamModel {
    /// Clamped-clamped beam, E = 30 MPa, ν = 0.3, L = 1 m, b = h = 0.02 m,
    /// lf = 0.2 m, uniform transverse load 1 N/m.
    pub fn benchmark(profile: VoProfile) -> Result<Self> {
        validate_model(
            Material {
                youngs_modulus: 30e6,
                nu: 0.3,
            },
            Geometry {
                length: 1.0,
                width: 0.02,
                thickness: 0.02,
            },
            0.2,
            profile,
            LoadCase::default(),
            BoundaryConditions::CLAMPED_CLAMPED,
        )
    }

    pub fn length(&self) -> f64 {
        self.geometry.length
    }

    /// E·b·h
    pub fn axial_rigidity(&self) -> f64 {
        self.material.youngs_modulus * self.geometry.area()
    }

    /// E·b·h³/12
    pub fn bending_rigidity(&self) -> f64 {
        self.material.youngs_modulus * self.geometry.second_moment()
    }

    pub fn with_profile(&self, profile: VoProfile) -> Result<Self> {
        validate_model(
            self.material,
            self.geometry,
            self.horizon.lf(),
            profile,
            self.loads,
            self.bcs,
        )
    }
}

/// Check every model invariant and assemble the model, or report all
/// violations at once.
pub fn validate_model(
    material: Material,
    geometry: Geometry,
    lf: f64,
    profile: VoProfile,
    loads: LoadCase,
    bcs: BoundaryConditions,
) -> Result<BeamModel> {
    let mut issues = Vec::new();
    let positive = |v: f64| v.is_finite() && v > 0.0;

    if !positive(material.youngs_modulus) {
        issues.push(ValidationIssue::new(
            "material.E",
            "must be positive and finite",
        ));
    }
    if !(material.nu >= 0.0 && material.nu < 0.5) {
        issues.push(ValidationIssue::new(
            "material.nu",
            "must satisfy 0 <= nu < 0.5",
        ));
    }
    for (path, v) in [
        ("geometry.L", geometry.length),
        ("geometry.b", geometry.width),
        ("geometry.h", geometry.thickness),
    ] {
        if !positive(v) {
            issues.push(ValidationIssue::new(path, "must be positive and finite"));
        }
    }
    if positive(geometry.length) && positive(geometry.thickness) {
        let ratio = geometry.thickness / geometry.length;
        if ratio > 0.1 {
            log::warn!(
                "h/L = {ratio:.3} exceeds 0.1; Euler-Bernoulli kinematics may be inaccurate"
            );
        }
    }
    let horizon = match Horizon::new(lf, geometry.length) {
        Ok(h) => Some(h),
        Err(_) => {
            if positive(geometry.length) {
                issues.push(ValidationIssue::new(
                    "horizon.lf",
                    "must satisfy 0 < lf <= L",
                ));
            }
            None
        }
    };

    let structural = profile.structural_issues();
    let structurally_ok = structural.is_empty();
    issues.extend(structural);
    if structurally_ok && positive(geometry.length) {
        let (lo, hi) = profile.scan_range(geometry.length, PROFILE_SCAN_POINTS);
        if !(lo > 0.0 && hi <= 1.0) {
            issues.push(ValidationIssue::new(
                "vo",
                format!(
                    "profile-validity: {} profile ranges over [{lo}, {hi}], outside (0, 1]",
                    profile.family_name()
                ),
            ));
        }
    }

    if !loads.transverse.is_finite() {
        issues.push(ValidationIssue::new("load.Ft", "must be finite"));
    }
    if !loads.axial.is_finite() {
        issues.push(ValidationIssue::new("load.Fa", "must be finite"));
    }
    let constraints = bcs.left.transverse_constraints() + bcs.right.transverse_constraints();
    if constraints < 2 {
        issues.push(ValidationIssue::new(
            "bc",
            format!("{constraints} transverse constraint(s); at least 2 are needed to remove rigid modes"),
        ));
    }

    match (issues.is_empty(), horizon) {
        (true, Some(horizon)) => Ok(BeamModel {
            material,
            geometry,
            horizon,
            profile,
            loads,
            bcs,
        }),
        _ => Err(Error::Validation(issues)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table1() -> (Material, Geometry) {
        (
            Material {
                youngs_modulus: 30e6,
                nu: 0.3,
            },
            Geometry {
                length: 1.0,
                width: 0.02,
                thickness: 0.02,
            },
        )
    }

    #[test]
    fn closed_form_profiles() {
        assert_relative_eq!(VoProfile::Bessel {}.eval(0.0, 1.0).unwrap(), 0.820);
        assert_eq!(
            VoProfile::Constant { value: 0.9 }.eval(0.37, 1.0).unwrap(),
            0.9
        );
        let tanh0 = VoProfile::Tanh {}.eval(0.0, 1.0).unwrap();
        assert_relative_eq!(tanh0, 0.848 + 0.102 * (-2.0f64).tanh(), epsilon = 1e-15);
        assert_relative_eq!(tanh0, 0.749_669_186_832_266_7, epsilon = 1e-12);
        let lin = VoProfile::Linear { a0: 0.75, a1: 0.95 };
        assert_relative_eq!(lin.eval(0.5, 1.0).unwrap(), 0.85, epsilon = 1e-15);
        let poly = VoProfile::Polynomial10 {
            c: vec![0.8, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05],
        };
        assert_relative_eq!(poly.eval(1.0, 1.0).unwrap(), 0.95, epsilon = 1e-15);
    }

    #[test]
    fn sinusoidal_degenerates_to_constant() {
        let p = VoProfile::Sinusoidal {
            b0: 0.75,
            b1: 0.0,
            b2: 0.0,
        };
        for i in 0..=10 {
            assert_relative_eq!(p.eval(i as f64 / 10.0, 1.0).unwrap(), 0.85, epsilon = 1e-15);
        }
    }

    #[test]
    fn nodal_profiles_interpolate_linearly() {
        let p = VoProfile::RandomNodal {
            values: vec![0.7, 0.9, 0.8],
        };
        assert_relative_eq!(p.eval(0.25, 2.0).unwrap(), 0.75, epsilon = 1e-15);
        assert_relative_eq!(p.eval(1.0, 2.0).unwrap(), 0.9, epsilon = 1e-15);
        assert_relative_eq!(p.eval(2.0, 2.0).unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn eval_rejects_out_of_range_orders() {
        let p = VoProfile::Constant { value: 1.2 };
        assert!(matches!(p.eval(0.5, 1.0), Err(Error::ProfileValidity(_))));
        assert!(VoProfile::Constant { value: 0.0 }.eval(0.5, 1.0).is_err());
    }

    #[test]
    fn benchmark_model_is_valid() {
        let m = BeamModel::benchmark(VoProfile::Constant { value: 1.0 }).unwrap();
        assert_relative_eq!(m.bending_rigidity(), 0.4, max_relative = 1e-12);
        assert_relative_eq!(m.axial_rigidity(), 12_000.0, max_relative = 1e-12);
    }

    #[test]
    fn negative_modulus_names_the_field() {
        let (mut mat, geo) = table1();
        mat.youngs_modulus = -1.0;
        let err = validate_model(
            mat,
            geo,
            0.2,
            VoProfile::Constant { value: 0.9 },
            LoadCase::default(),
            BoundaryConditions::CLAMPED_CLAMPED,
        )
        .unwrap_err();
        match err {
            Error::Validation(issues) => {
                assert_eq!(issues.len(), 1);
                assert_eq!(issues[0].path, "material.E");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn sinusoid_exceeding_one_is_rejected() {
        let (mat, geo) = table1();
        let err = validate_model(
            mat,
            geo,
            0.2,
            VoProfile::Sinusoidal {
                b0: 0.95,
                b1: 0.5,
                b2: 0.5,
            },
            LoadCase::default(),
            BoundaryConditions::CLAMPED_CLAMPED,
        )
        .unwrap_err();
        let Error::Validation(issues) = err else {
            panic!("expected validation error")
        };
        assert!(issues
            .iter()
            .any(|i| i.path == "vo" && i.message.contains("profile-validity")));
    }

    #[test]
    fn all_violations_are_reported() {
        let err = validate_model(
            Material {
                youngs_modulus: 1.0,
                nu: 0.6,
            },
            Geometry {
                length: 1.0,
                width: 0.0,
                thickness: 0.02,
            },
            2.0,
            VoProfile::Polynomial10 { c: vec![] },
            LoadCase::default(),
            BoundaryConditions {
                left: Support::Pinned,
                right: Support::Free,
            },
        )
        .unwrap_err();
        let Error::Validation(issues) = err else {
            panic!()
        };
        let paths: Vec<&str> = issues.iter().map(|i| i.path.as_str()).collect();
        for p in [
            "material.nu",
            "geometry.b",
            "horizon.lf",
            "vo.params.c",
            "bc",
        ] {
            assert!(paths.contains(&p), "missing {p} in {paths:?}");
        }
    }

    #[test]
    fn profile_serialization_shape() {
        let p = VoProfile::Linear { a0: 0.7, a1: 0.9 };
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["family"], "linear");
        assert_eq!(v["params"]["a0"], 0.7);
        let b: VoProfile = serde_json::from_str(r#"{"family":"bessel","params":{}}"#).unwrap();
        assert_eq!(b, VoProfile::Bessel {});
    }
}
