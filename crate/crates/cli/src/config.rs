//! Run configuration: a TOML document with one table per stage.
//!
//! Every key has a default, so an empty file is a valid radial LG01 run.
//! `section.key=value` overrides from the command line are applied on top.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub beam: Beam,
    pub grid: GridCfg,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub masks: Option<MaskFiles>,
    pub slm: Slm,
    pub chain: Chain,
    pub polarizer: Polarizer,
    pub stokes: Stokes,
    pub squeezing: Squeezing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Beam {
    /// Input waist at the SLM, metres.
    pub w0: f64,
    pub wavelength: f64,
}

impl Default for Beam {
    fn default() -> Self {
        Self { w0: 1e-3, wavelength: 1.56e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridCfg {
    pub n: usize,
    /// Side length in units of `w0`.
    pub extent_w0: f64,
}

impl Default for GridCfg {
    fn default() -> Self {
        Self { n: 512, extent_w0: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorCfg {
    Radial,
    Azimuthal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Mode {
    pub p: i32,
    pub l: i32,
    pub flavor: FlavorCfg,
    /// Kinoform focal length in metres; 0 disables the lens.
    pub kinoform_f: f64,
    /// Phase quantization levels; 0 keeps masks continuous.
    pub levels: u32,
}

impl Default for Mode {
    fn default() -> Self {
        Self { p: 0, l: 1, flavor: FlavorCfg::Radial, kinoform_f: 0.0, levels: 0 }
    }
}

/// Explicit mask images instead of the preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskFiles {
    pub mask_a: PathBuf,
    pub mask_b: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Slm {
    pub eta_mod: f64,
}

impl Default for Slm {
    fn default() -> Self {
        Self { eta_mod: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Chain {
    pub inter_half_distance: f64,
    pub hwp_angle_deg: f64,
    pub qwp_angle_deg: f64,
    pub observation_distance: f64,
    pub padding: usize,
    pub band_limit: bool,
}

impl Default for Chain {
    fn default() -> Self {
        Self {
            inter_half_distance: 0.0,
            hwp_angle_deg: 45.0,
            qwp_angle_deg: 45.0,
            observation_distance: 0.0,
            padding: 2,
            band_limit: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Polarizer {
    pub angles_deg: Vec<f64>,
    /// Analysis ring radii in units of `w0`.
    pub ring_inner_w0: f64,
    pub ring_outer_w0: f64,
}

impl Default for Polarizer {
    fn default() -> Self {
        Self { angles_deg: vec![0.0, 45.0, 90.0, 135.0], ring_inner_w0: 0.5, ring_outer_w0: 1.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Stokes {
    pub frames: usize,
    /// Field to scan in `stokes-sim`; the converter output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<PathBuf>,
    /// Frame directory for `stokes-analyze`.
    pub frames_dir: PathBuf,
    pub manifest: String,
    pub dark_floor: f64,
}

impl Default for Stokes {
    fn default() -> Self {
        Self {
            frames: 16,
            field: None,
            frames_dir: PathBuf::from("frames"),
            manifest: "manifest.txt".into(),
            dark_floor: vecbeam::polarimetry::DEFAULT_DARK_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Squeezing {
    pub input_db: f64,
    pub uncertainty_db: f64,
    pub transmissions: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_db: Option<f64>,
}

impl Default for Squeezing {
    fn default() -> Self {
        Self { input_db: -3.4, uncertainty_db: 0.1, transmissions: vec![0.36], target_db: None }
    }
}

/// A parsed configuration together with the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: Config,
    pub base: PathBuf,
}

impl Loaded {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

pub fn parse(text: &str) -> Result<Config, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

pub fn to_toml(cfg: &Config) -> String {
    toml::to_string(cfg).expect("configuration always serializes")
}

/// Reads `path` (if any) and applies `key=value` overrides.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Loaded, CliError> {
    let (text, base) = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (text, base)
        }
        None => (String::new(), PathBuf::new()),
    };
    if overrides.is_empty() {
        // Deserializing the text directly keeps line numbers in error messages.
        let config = parse(&text).map_err(|e| in_file(path, e))?;
        return Ok(Loaded { config, base });
    }
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| in_file(path, CliError::Config(e.to_string())))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let config = Config::deserialize(toml::Value::Table(table)).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Loaded { config, base })
}

fn in_file(path: Option<&Path>, e: CliError) -> CliError {
    match (path, e) {
        (Some(p), CliError::Config(msg)) => CliError::Config(format!("{}: {msg}", p.display())),
        (_, e) => e,
    }
}

/// Sets `a.b.c = value`; the value is read as a TOML literal, falling back to a bare string.
pub fn apply_override(table: &mut toml::Table, arg: &str) -> Result<(), CliError> {
    let (key, raw) = arg
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {arg:?} is not of the form key=value")))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad override key {key:?}")));
    }
    let value = parse_value(raw.trim());
    let (last, path) = parts.split_last().expect("non-empty key");
    let mut cur = table;
    for p in path {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {key:?}: {p:?} is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
