//! Labeled (order profile, response) corpora for identification methods.
//!
//! Records are NDJSON lines sorted by id, with a sibling manifest holding the
//! seed, per-family count, skip count, train/holdout split and a hash of the
//! solver configuration. Every sample draws from its own RNG stream, so the
//! output does not depend on scheduling.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fem::{solve_transverse, SolverOptions};
use crate::model::{BeamModel, VoProfile, PROFILE_SCAN_POINTS};

pub const ALPHA_MIN: f64 = 0.7;
pub const ALPHA_MAX: f64 = 1.0;
pub const DEFAULT_SPLIT: (f64, f64) = (0.85, 0.15);

/// Stream reserved for the train/holdout shuffle; sample streams are their ids.
const SPLIT_STREAM: u64 = u64::MAX;
const POLY_DEGREE: usize = 10;
/// Polynomials are checked on this finer grid so that values between
/// Gauss points cannot leave the admissible band.
const POLY_SCAN_POINTS: usize = 8 * (PROFILE_SCAN_POINTS - 1) + 1;
const POLY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFamily {
    Random,
    Linear,
    Sinusoidal,
    Polynomial,
}

impl DatasetFamily {
    /// Generation order; ids are family-major in this order.
    pub const ALL: [DatasetFamily; 4] = [
        DatasetFamily::Random,
        DatasetFamily::Linear,
        DatasetFamily::Sinusoidal,
        DatasetFamily::Polynomial,
    ];

    fn profile_tag(self) -> &'static str {
        match self {
            DatasetFamily::Random => "random_nodal",
            DatasetFamily::Linear => "linear",
            DatasetFamily::Sinusoidal => "sinusoidal",
            DatasetFamily::Polynomial => "polynomial10",
        }
    }
}

/// Draw a profile of `family` on a beam of length `length` with `nodes` nodes.
pub fn sample_profile<R: Rng>(
    family: DatasetFamily,
    rng: &mut R,
    length: f64,
    nodes: usize,
) -> VoProfile {
    let unit = |rng: &mut R| rng.gen_range(ALPHA_MIN..=ALPHA_MAX);
    match family {
        DatasetFamily::Random => VoProfile::RandomNodal {
            values: (0..nodes).map(|_| unit(rng)).collect(),
        },
        DatasetFamily::Linear => VoProfile::Linear {
            a0: unit(rng),
            a1: unit(rng),
        },
        DatasetFamily::Sinusoidal => VoProfile::Sinusoidal {
            b0: rng.gen_range(0.7..=0.8),
            b1: rng.gen_range(0.0..=1.0),
            b2: rng.gen_range(0.0..=1.0),
        },
        DatasetFamily::Polynomial => {
            let controls: Vec<f64> = (0..=POLY_DEGREE).map(|_| unit(rng)).collect();
            VoProfile::Polynomial10 {
                c: polynomial_through_chebyshev(&controls, length),
            }
        }
    }
}

/// Monomial coefficients of the degree-10 interpolant of `controls` at the
/// Chebyshev abscissae of [0, L], affinely rescaled into [0.7, 1.0] if it
/// overshoots.
fn polynomial_through_chebyshev(controls: &[f64], length: f64) -> Vec<f64> {
    let n = controls.len();
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
            0.5 * length * (1.0 - theta.cos())
        })
        .collect();
    let vander = DMatrix::from_fn(n, n, |i, j| xs[i].powi(j as i32));
    let mut c: Vec<f64> = vander
        .lu()
        .solve(&DVector::from_column_slice(controls))
        .expect("Chebyshev abscissae are distinct")
        .iter()
        .copied()
        .collect();

    let (lo, hi) = VoProfile::Polynomial10 { c: c.clone() }.scan_range(length, POLY_SCAN_POINTS);
    let (lo_ok, hi_ok) = (ALPHA_MIN + POLY_MARGIN, ALPHA_MAX - POLY_MARGIN);
    if lo < lo_ok || hi > hi_ok {
        // a ↦ lo_ok + (a − lo)·s, or a shift when the range already fits.
        let s = ((hi_ok - lo_ok) / (hi - lo)).min(1.0);
        let offset = if s < 1.0 {
            lo_ok - lo * s
        } else if lo < lo_ok {
            lo_ok - lo
        } else {
            hi_ok - hi
        };
        c.iter_mut().for_each(|ck| *ck *= s);
        c[0] += offset;
    }
    c
}

/// One dataset entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub id: u64,
    pub family: DatasetFamily,
    pub params: serde_json::Value,
    pub x: Vec<f64>,
    pub alpha: Vec<f64>,
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
}

impl SampleRecord {
    /// The profile the record was generated from.
    pub fn profile(&self) -> Result<VoProfile> {
        let tagged = serde_json::json!({
            "family": self.family.profile_tag(),
            "params": self.params,
        });
        Ok(serde_json::from_value(tagged)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Split {
    pub train: Vec<u64>,
    pub holdout: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub seed: u64,
    pub n_per_family: usize,
    pub skipped: usize,
    pub split: Split,
    pub solver_config_hash: String,
}

/// Path of the manifest that accompanies `records_path`.
pub fn manifest_path(records_path: &Path) -> PathBuf {
    records_path.with_extension("manifest.json")
}

/// SHA-256 of the benchmark model parameters and solver options.
pub fn solver_config_hash(opts: &SolverOptions) -> String {
    let fingerprint = serde_json::json!({
        "model": "clamped-clamped benchmark, E=30e6, nu=0.3, L=1, b=h=0.02, lf=0.2, Ft=1, Fa=0",
        "solver": opts,
    });
    hex::encode(Sha256::digest(fingerprint.to_string().as_bytes()))
}

/// Build one record; `None` with a log entry if the solve fails.
pub fn generate_record(
    id: u64,
    family: DatasetFamily,
    seed: u64,
    opts: &SolverOptions,
) -> Option<SampleRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    let profile = sample_profile(family, &mut rng, 1.0, opts.elements + 1);
    match solve_record(id, family, profile, opts) {
        Ok(r) => Some(r),
        Err(e) => {
            log::warn!("sample {id} ({family:?}) skipped: {e}");
            None
        }
    }
}

fn solve_record(
    id: u64,
    family: DatasetFamily,
    profile: VoProfile,
    opts: &SolverOptions,
) -> Result<SampleRecord> {
    let model = BeamModel::benchmark(profile)?;
    let resp = solve_transverse(&model, opts)?;
    let alpha = resp
        .x
        .iter()
        .map(|&x| model.profile.order_at(x, model.length()))
        .collect();
    let mut params = serde_json::to_value(&model.profile)?;
    let params = params
        .get_mut("params")
        .map(serde_json::Value::take)
        .unwrap_or_default();
    Ok(SampleRecord {
        id,
        family,
        params,
        x: resp.x,
        alpha,
        w: resp.w0,
        theta: resp.theta0,
    })
}

/// Generate `n_per_family` samples of every family, write them to `out` as
/// NDJSON sorted by id, and write the manifest next to it.
pub fn generate_dataset(
    n_per_family: usize,
    seed: u64,
    out: &Path,
    opts: &SolverOptions,
) -> Result<DatasetManifest> {
    if n_per_family == 0 {
        return Err(Error::Input("n_per_family must be at least 1".into()));
    }
    let total = (n_per_family * DatasetFamily::ALL.len()) as u64;
    let records: Vec<Option<SampleRecord>> = (0..total)
        .into_par_iter()
        .map(|id| {
            let family = DatasetFamily::ALL[(id / n_per_family as u64) as usize];
            generate_record(id, family, seed, opts)
        })
        .collect();

    let mut writer = BufWriter::new(File::create(out)?);
    let mut ids = Vec::with_capacity(records.len());
    for record in records.iter().flatten() {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
        ids.push(record.id);
    }
    writer.flush()?;

    let (train, holdout) = split_dataset(&ids, seed, DEFAULT_SPLIT)?;
    let manifest = DatasetManifest {
        seed,
        n_per_family,
        skipped: total as usize - ids.len(),
        split: Split { train, holdout },
        solver_config_hash: solver_config_hash(opts),
    };
    let mut mw = BufWriter::new(File::create(manifest_path(out))?);
    serde_json::to_writer_pretty(&mut mw, &manifest)?;
    mw.write_all(b"\n")?;
    mw.flush()?;
    Ok(manifest)
}

/// Deterministic shuffle of `ids` by `seed`, cut at round(n · train fraction).
///
/// Both returned lists are sorted.
pub fn split_dataset(
    ids: &[u64],
    seed: u64,
    fractions: (f64, f64),
) -> Result<(Vec<u64>, Vec<u64>)> {
    let (train_f, holdout_f) = fractions;
    if !(train_f >= 0.0 && holdout_f >= 0.0 && (train_f + holdout_f - 1.0).abs() <= 1e-12) {
        return Err(Error::Input(format!(
            "split fractions must be non-negative and sum to 1, got ({train_f}, {holdout_f})"
        )));
    }
    let mut shuffled = ids.to_vec();
    shuffled.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SPLIT_STREAM);
    shuffled.shuffle(&mut rng);
    let cut = ((ids.len() as f64) * train_f).round() as usize;
    let mut train = shuffled[..cut].to_vec();
    let mut holdout = shuffled[cut..].to_vec();
    train.sort_unstable();
    holdout.sort_unstable();
    Ok((train, holdout))
}

pub fn read_records(path: &Path) -> Result<Vec<SampleRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(records)
}

pub fn read_manifest(records_path: &Path) -> Result<DatasetManifest> {
    let file = File::open(manifest_path(records_path))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub checked: Vec<u64>,
    /// Largest of max|Δw|/max|w| and max|Δθ|/max|θ| over the checked records.
    pub max_relative_error: f64,
}

/// Re-solve a random `fraction` of the records (at least one) from their
/// stored family and parameters and compare with the stored response.
pub fn audit_records(
    records: &[SampleRecord],
    fraction: f64,
    seed: u64,
    opts: &SolverOptions,
) -> Result<AuditReport> {
    if records.is_empty() {
        return Err(Error::Input("no records to audit".into()));
    }
    let count = ((records.len() as f64 * fraction).ceil() as usize).clamp(1, records.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SPLIT_STREAM - 1);
    let picked: Vec<&SampleRecord> = records.choose_multiple(&mut rng, count).collect();
    let errors = picked
        .par_iter()
        .map(|r| {
            let again = solve_record(r.id, r.family, r.profile()?, opts)?;
            Ok(relative_max_error(&again.w, &r.w).max(relative_max_error(&again.theta, &r.theta)))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(AuditReport {
        checked: picked.iter().map(|r| r.id).collect(),
        max_relative_error: errors.into_iter().fold(0.0, f64::max),
    })
}

fn relative_max_error(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn degenerate_linear_and_sinusoid() {
        let lin = VoProfile::Linear { a0: 0.85, a1: 0.85 };
        assert_eq!(lin.scan_range(1.0, 101), (0.85, 0.85));
        let sin = VoProfile::Sinusoidal {
            b0: 0.75,
            b1: 0.0,
            b2: 0.0,
        };
        let (lo, hi) = sin.scan_range(1.0, 101);
        assert!((lo - 0.85).abs() < 1e-15 && (hi - 0.85).abs() < 1e-15);
    }

    #[test]
    fn sampled_profiles_stay_in_band() {
        let mut r = rng(42);
        for family in DatasetFamily::ALL {
            for _ in 0..50 {
                let p = sample_profile(family, &mut r, 1.0, 201);
                let (lo, hi) = p.scan_range(1.0, PROFILE_SCAN_POINTS);
                assert!(
                    lo >= ALPHA_MIN && hi <= ALPHA_MAX,
                    "{family:?}: [{lo}, {hi}]"
                );
            }
        }
    }

    #[test]
    fn polynomial_seed_42_within_band() {
        let p = sample_profile(DatasetFamily::Polynomial, &mut rng(42), 1.0, 201);
        let VoProfile::Polynomial10 { c } = &p else {
            panic!()
        };
        assert_eq!(c.len(), 11);
        let (lo, hi) = p.scan_range(1.0, 100_001);
        assert!(lo >= ALPHA_MIN && hi <= ALPHA_MAX, "[{lo}, {hi}]");
    }

    #[test]
    fn polynomial_reproduces_controls_without_overshoot() {
        let controls = [0.85; 11];
        let c = polynomial_through_chebyshev(&controls, 1.0);
        let (lo, hi) = VoProfile::Polynomial10 { c }.scan_range(1.0, 1001);
        assert!((lo - 0.85).abs() < 1e-8 && (hi - 0.85).abs() < 1e-8);
    }

    #[test]
    fn split_sizes_and_determinism() {
        let ids: Vec<u64> = (0..100).collect();
        let (tr, ho) = split_dataset(&ids, 5, (0.85, 0.15)).unwrap();
        assert_eq!((tr.len(), ho.len()), (85, 15));
        assert_eq!(
            split_dataset(&ids, 5, (0.85, 0.15)).unwrap(),
            (tr.clone(), ho.clone())
        );
        let mut all = [tr, ho].concat();
        all.sort_unstable();
        assert_eq!(all, ids);
        let (tr, ho) = split_dataset(&ids, 5, (1.0, 0.0)).unwrap();
        assert_eq!((tr.len(), ho.len()), (100, 0));
        assert!(split_dataset(&ids, 5, (0.8, 0.1)).is_err());
    }

    #[test]
    fn record_profile_round_trip() {
        let opts = SolverOptions {
            elements: 20,
            ..Default::default()
        };
        for (id, family) in DatasetFamily::ALL.into_iter().enumerate() {
            let r = generate_record(id as u64, family, 3, &opts).unwrap();
            assert_eq!(r.x.len(), 21);
            let p = r.profile().unwrap();
            for (x, a) in r.x.iter().zip(&r.alpha) {
                assert_eq!(p.order_at(*x, 1.0), *a);
            }
            let line = serde_json::to_string(&r).unwrap();
            let back: SampleRecord = serde_json::from_str(&line).unwrap();
            assert_eq!(back, r);
        }
    }
}
