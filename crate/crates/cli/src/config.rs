//! JSON run configuration. Every key mirrors a command-line flag; flags win.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct FileConfig {
    pub command: Option<String>,
    pub dim: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,

    pub L: Option<f64>,
    pub T: Option<f64>,
    pub S: Option<f64>,
    pub t_b_on: Option<f64>,

    pub mode: Option<String>,
    pub T_min: Option<f64>,
    pub T_max: Option<f64>,
    pub steps: Option<usize>,

    pub lambda: Option<f64>,
    pub omega_a: Option<f64>,
    pub omega_b: Option<f64>,
    pub alpha_a: Option<f64>,
    pub beta_a_re: Option<f64>,
    pub beta_a_im: Option<f64>,
    pub alpha_b: Option<f64>,
    pub beta_b_re: Option<f64>,
    pub beta_b_im: Option<f64>,
    pub method: Option<String>,

    pub model: Option<String>,
    pub geometry: Option<String>,
    pub grid_n: Option<usize>,

    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub epsilon: Option<f64>,
    pub resolution: Option<f64>,

    pub timescales: Option<Vec<f64>>,
    pub width: Option<f64>,
    pub half_width: Option<f64>,
    pub spatial_width: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag value if given, else the file value.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
