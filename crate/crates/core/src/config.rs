//! JSON run configuration. Every section is optional and defaults to the
//! clamped-clamped benchmark beam.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationIssue};
use crate::fem::SolverOptions;
use crate::inverse::InverseConfig;
use crate::model::{
    validate_model, BeamModel, BoundaryConditions, DistributedLoad, Geometry, LoadCase, Material,
    Support, VoProfile,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub material: Material,
    pub geometry: Geometry,
    pub horizon: HorizonConfig,
    pub vo: VoProfile,
    pub load: LoadConfig,
    pub bc: BoundaryConditions,
    pub mesh: MeshConfig,
    pub output: OutputConfig,
    pub inverse: InverseConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            material: Material {
                youngs_modulus: 30e6,
                nu: 0.3,
            },
            geometry: Geometry {
                length: 1.0,
                width: 0.02,
                thickness: 0.02,
            },
            horizon: HorizonConfig { lf: 0.2 },
            vo: VoProfile::Constant { value: 0.9 },
            load: LoadConfig::default(),
            bc: BoundaryConditions {
                left: Support::Clamped,
                right: Support::Clamped,
            },
            mesh: MeshConfig::default(),
            output: OutputConfig::default(),
            inverse: InverseConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonConfig {
    pub lf: f64,
}

/// A load given either as a uniform intensity or as end values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LoadSpec {
    Uniform(f64),
    Linear { start: f64, end: f64 },
}

impl From<LoadSpec> for DistributedLoad {
    fn from(l: LoadSpec) -> Self {
        match l {
            LoadSpec::Uniform(q) => DistributedLoad::Uniform(q),
            LoadSpec::Linear { start, end } => DistributedLoad::Linear { start, end },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LoadConfig {
    #[serde(rename = "Ft")]
    pub transverse: LoadSpec,
    #[serde(rename = "Fa")]
    pub axial: LoadSpec,
}

impl Default for LoadConfig {
    fn default() -> Self {
        Self {
            transverse: LoadSpec::Uniform(1.0),
            axial: LoadSpec::Uniform(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub elements: usize,
    pub gauss_order: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            elements: d.elements,
            gauss_order: d.gauss_order,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::from("solution.csv"),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    /// Parse a JSON document; schema problems become validation issues.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let path = if e.is_syntax() || e.is_eof() {
                "json"
            } else {
                "schema"
            };
            Error::Validation(vec![ValidationIssue::new(path, e.to_string())])
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn model(&self) -> Result<BeamModel> {
        let mut issues = Vec::new();
        if self.mesh.elements < crate::fem::MIN_ELEMENTS {
            issues.push(ValidationIssue::new(
                "mesh.elements",
                format!("must be at least {}", crate::fem::MIN_ELEMENTS),
            ));
        }
        if self.mesh.gauss_order < 2 {
            issues.push(ValidationIssue::new(
                "mesh.gauss_order",
                "must be at least 2",
            ));
        }
        let model = validate_model(
            self.material,
            self.geometry,
            self.horizon.lf,
            self.vo.clone(),
            LoadCase {
                transverse: self.load.transverse.into(),
                axial: self.load.axial.into(),
            },
            self.bc,
        );
        match model {
            Ok(m) if issues.is_empty() => Ok(m),
            Ok(_) => Err(Error::Validation(issues)),
            Err(Error::Validation(mut more)) => {
                more.extend(issues);
                Err(Error::Validation(more))
            }
            Err(e) => Err(e),
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            elements: self.mesh.elements,
            gauss_order: self.mesh.gauss_order,
            ..Default::default()
        }
    }
}
