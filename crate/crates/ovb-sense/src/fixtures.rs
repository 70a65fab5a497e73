//! Oracle fixtures: synthetic datasets with a sidecar JSON manifest holding
//! the seed, the generating configuration and the brute-force quantities.

use std::path::{Path, PathBuf};

use ovb_core::oracle::{generate, oracle_all, oracle_rv, oracle_rv_alpha, DgpConfig, OracleQuantities};
use ovb_core::{ModelSpec, SignCase};
use serde::Serialize;

use crate::io::write_csv;
use crate::SenseError;

/// Name of the confounder column in every fixture.
pub const CONFOUNDER: &str = "z";

/// Sidecar manifest written next to each fixture CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    /// Fixture name, also the file stem.
    pub name: String,
    /// Seed passed to the generator.
    pub seed: u64,
    /// Generating configuration.
    pub config: DgpConfig,
    /// Restricted model.
    pub model: ModelSpec,
    /// Confounder column.
    pub confounder: String,
    /// Quantities computed by explicit regressions.
    pub expected: OracleQuantities,
    /// `RV_1` by bisection.
    pub rv_q1: f64,
    /// `RV_{1,0.05}` by bisection.
    pub rv_q1_alpha05: f64,
}

/// The exported fixture set: one dataset per sign regime, one without
/// confounding and one with an orthogonalized confounder.
pub fn fixture_configs() -> Vec<(&'static str, DgpConfig)> {
    let base = DgpConfig::default();
    vec![
        (
            "null",
            DgpConfig {
                confounder_treatment_strength: 0.0,
                confounder_outcome_strength: 0.0,
                ..base.clone()
            },
        ),
        (
            "increase",
            DgpConfig {
                sign_regime: Some(SignCase::Increase),
                ..base.clone()
            },
        ),
        (
            "reduce_opposite_sign",
            DgpConfig {
                sign_regime: Some(SignCase::ReduceOppositeSign),
                ..base.clone()
            },
        ),
        (
            "reduce_same_sign",
            DgpConfig {
                sign_regime: Some(SignCase::ReduceSameSign),
                ..base.clone()
            },
        ),
        (
            "orthogonal",
            DgpConfig {
                orthogonalize_z: true,
                covariate_confounder_correlation: 0.5,
                ..base
            },
        ),
    ]
}

/// Builds the manifest for one fixture without touching the filesystem.
pub fn build(name: &str, cfg: &DgpConfig, seed: u64) -> Result<(ovb_core::Dataset, Manifest), SenseError> {
    let data = generate(cfg, seed)?;
    let model = cfg.model_spec();
    let expected = oracle_all(&data, &model, CONFOUNDER)?;
    let rv_q1 = oracle_rv(expected.t_res, expected.df_res, 1.0)?;
    let rv_q1_alpha05 = oracle_rv_alpha(expected.t_res, expected.df_res, 1.0, 0.05)?;
    let manifest = Manifest {
        name: name.to_string(),
        seed,
        config: cfg.clone(),
        model,
        confounder: CONFOUNDER.to_string(),
        expected,
        rv_q1,
        rv_q1_alpha05,
    };
    Ok((data, manifest))
}

/// Writes `<name>.csv` and `<name>.json` for every fixture into `dir`,
/// creating it if needed. Returns the paths written.
pub fn export(seed: u64, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, SenseError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| SenseError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, cfg) in fixture_configs() {
        let (data, manifest) = build(name, &cfg, seed)?;
        let csv_path = dir.join(format!("{name}.csv"));
        write_csv(&data, &csv_path)?;
        let json_path = dir.join(format!("{name}.json"));
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        std::fs::write(&json_path, json).map_err(|e| SenseError::io(&json_path, e))?;
        written.push(csv_path);
        written.push(json_path);
    }
    Ok(written)
}
