//! JSON configuration: strict parsing and full validation.
//!
//! Parsing is strict — unknown keys are rejected — and validation collects
//! every violation instead of stopping at the first. All frequencies in
//! config files are linear MHz; the one and only 2π conversion to angular
//! rad/µs happens in [`Config::system_rates`].

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use cqed_core::SystemRates;

/// Known rate presets: (g, κ, γ) in linear MHz.
pub const PRESETS: &[(&str, (f64, f64, f64))] = &[
    ("paper-apparatus", (2.0, 2.6, 6.0)),
    ("paper-fig1", (2.0, 2.65, 6.0)),
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config:\n{}", .0.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    rates: RawRates,
    #[serde(default)]
    job: Option<RawJob>,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRates {
    #[serde(default)]
    preset: Option<String>,
    #[serde(default, rename = "g_MHz")]
    g_mhz: Option<f64>,
    #[serde(default, rename = "kappa_MHz")]
    kappa_mhz: Option<f64>,
    #[serde(default, rename = "gamma_MHz")]
    gamma_mhz: Option<f64>,
    #[serde(default)]
    n_atoms: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    kind: String,
    #[serde(default)]
    c_list: Option<Vec<f64>>,
    #[serde(default)]
    c_grid: Option<RawCGrid>,
    #[serde(default)]
    n_list: Option<Vec<u32>>,
    #[serde(default)]
    omega_grid: Option<RawGrid>,
    #[serde(default)]
    y_list: Option<Vec<f64>>,
    #[serde(default)]
    oracle: Option<RawOracle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCGrid {
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default, rename = "min_MHz")]
    min_mhz: Option<f64>,
    #[serde(default, rename = "max_MHz")]
    max_mhz: Option<f64>,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    #[serde(default = "default_true")]
    enabled: bool,
    #[serde(default)]
    n_max: Option<usize>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    directory: Option<String>,
    #[serde(default)]
    formats: Option<Vec<String>>,
}

/// What a sweep produces on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// The five job kinds the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobKind {
    Fig1,
    Inset,
    Fig4,
    Spectrum,
    OracleCompare,
}

impl JobKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fig1" => Some(Self::Fig1),
            "inset" => Some(Self::Inset),
            "fig4" => Some(Self::Fig4),
            "spectrum" => Some(Self::Spectrum),
            "oracle-compare" => Some(Self::OracleCompare),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Inset => "inset",
            Self::Fig4 => "fig4",
            Self::Spectrum => "spectrum",
            Self::OracleCompare => "oracle-compare",
        }
    }
}

/// Detuning grid request, linear MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min_mhz: Option<f64>,
    pub max_mhz: Option<f64>,
    pub count: usize,
}

/// Validated job block. `c_list` holds either the explicit list or the
/// expanded dense `c_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub kind: JobKind,
    pub c_list: Option<Vec<f64>>,
    pub n_list: Option<Vec<u32>>,
    pub omega_grid: Option<GridSpec>,
    pub y_list: Vec<f64>,
    pub oracle_enabled: bool,
    pub oracle_n_max: usize,
}

/// Validated output block.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: Option<PathBuf>,
    pub formats: Vec<Format>,
}

/// Fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// (g, κ, γ) in linear MHz, exactly as configured or resolved from a
    /// preset.
    pub rates_mhz: (f64, f64, f64),
    pub n_atoms: u32,
    pub job: Option<JobSpec>,
    pub output: OutputSpec,
}

pub const DEFAULT_ORACLE_N_MAX: usize = 4;
pub const DEFAULT_Y_LIST: [f64; 2] = [0.02, 0.05];

impl Config {
    /// Angular-frequency rates for a given atom number.
    pub fn system_rates(&self, n_atoms: u32) -> SystemRates {
        let (g, kappa, gamma) = self.rates_mhz;
        // Validation guarantees positivity, so this cannot fail.
        SystemRates::from_linear_mhz(g, kappa, gamma, n_atoms).expect("validated rates")
    }

    /// Canonical JSON form: presets resolved to explicit rates, dense
    /// grids expanded, defaults materialized. Parsing it back yields the
    /// same `Config`.
    pub fn to_json(&self) -> serde_json::Value {
        let (g, kappa, gamma) = self.rates_mhz;
        let mut root = serde_json::json!({
            "rates": {
                "g_MHz": g,
                "kappa_MHz": kappa,
                "gamma_MHz": gamma,
                "n_atoms": self.n_atoms,
            }
        });
        if let Some(job) = &self.job {
            let mut j = serde_json::json!({
                "kind": job.kind.name(),
                "y_list": job.y_list,
                "oracle": { "enabled": job.oracle_enabled, "n_max": job.oracle_n_max },
            });
            if let Some(c) = &job.c_list {
                j["c_list"] = serde_json::json!(c);
            }
            if let Some(n) = &job.n_list {
                j["n_list"] = serde_json::json!(n);
            }
            if let Some(grid) = &job.omega_grid {
                let mut g = serde_json::json!({ "count": grid.count });
                if let Some(min) = grid.min_mhz {
                    g["min_MHz"] = serde_json::json!(min);
                }
                if let Some(max) = grid.max_mhz {
                    g["max_MHz"] = serde_json::json!(max);
                }
                j["omega_grid"] = g;
            }
            root["job"] = j;
        }
        let mut output = serde_json::json!({
            "formats": self.output.formats.iter().map(|f| match f {
                Format::Csv => "csv",
                Format::Json => "json",
                Format::Svg => "svg",
            }).collect::<Vec<_>>(),
        });
        if let Some(dir) = &self.output.directory {
            output["directory"] = serde_json::json!(dir.display().to_string());
        }
        root["output"] = output;
        root
    }
}

/// Parse and validate a config from JSON text.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut violations: Vec<String> = Vec::new();

    let rates_mhz = validate_rates(&raw.rates, &mut violations);
    let job = match &raw.job {
        Some(raw_job) => validate_job(raw_job, &mut violations),
        None => None,
    };
    let output = validate_output(raw.output.as_ref(), &mut violations);

    if !violations.is_empty() {
        return Err(ConfigError::Invalid(violations));
    }
    Ok(Config {
        rates_mhz: rates_mhz.expect("no violations"),
        n_atoms: raw.rates.n_atoms.unwrap_or(1),
        job,
        output,
    })
}

fn validate_rates(raw: &RawRates, violations: &mut Vec<String>) -> Option<(f64, f64, f64)> {
    let explicit = [raw.g_mhz, raw.kappa_mhz, raw.gamma_mhz];
    let any_explicit = explicit.iter().any(Option::is_some);
    let all_explicit = explicit.iter().all(Option::is_some);
    match (&raw.preset, any_explicit) {
        (Some(_), true) => {
            violations.push(
                "rates: give exactly one of `preset` or explicit g_MHz/kappa_MHz/gamma_MHz, not both"
                    .into(),
            );
            None
        }
        (Some(name), false) => match PRESETS.iter().find(|(p, _)| p == name) {
            Some((_, triple)) => Some(*triple),
            None => {
                let known: Vec<&str> = PRESETS.iter().map(|(p, _)| *p).collect();
                violations.push(format!(
                    "rates.preset: unknown preset `{name}` (known: {})",
                    known.join(", ")
                ));
                None
            }
        },
        (None, _) => {
            if !all_explicit {
                violations.push(
                    "rates: either a `preset` or all three of g_MHz, kappa_MHz, gamma_MHz are required"
                        .into(),
                );
                return None;
            }
            let mut ok = true;
            for (name, value) in [
                ("g_MHz", raw.g_mhz.unwrap()),
                ("kappa_MHz", raw.kappa_mhz.unwrap()),
                ("gamma_MHz", raw.gamma_mhz.unwrap()),
            ] {
                if !(value > 0.0 && value.is_finite()) {
                    violations.push(format!(
                        "rates.{name}: must be positive and finite, got {value}"
                    ));
                    ok = false;
                }
            }
            ok.then(|| (raw.g_mhz.unwrap(), raw.kappa_mhz.unwrap(), raw.gamma_mhz.unwrap()))
        }
    }
}

fn validate_job(raw: &RawJob, violations: &mut Vec<String>) -> Option<JobSpec> {
    let kind = JobKind::parse(&raw.kind);
    if kind.is_none() {
        violations.push(format!(
            "job.kind: unknown kind `{}` (known: fig1, inset, fig4, spectrum, oracle-compare)",
            raw.kind
        ));
    }

    let mut c_list = raw.c_list.clone();
    if let Some(grid) = &raw.c_grid {
        if !(grid.min >= 0.0 && grid.min < grid.max && grid.max.is_finite()) || grid.count < 2 {
            violations.push(format!(
                "job.c_grid: need 0 <= min < max and count >= 2, got [{}, {}] x {}",
                grid.min, grid.max, grid.count
            ));
        } else if raw.c_list.is_none() {
            let step = (grid.max - grid.min) / (grid.count - 1) as f64;
            c_list = Some((0..grid.count).map(|i| grid.min + i as f64 * step).collect());
        }
    }
    if let Some(list) = &c_list {
        if list.is_empty() {
            violations.push("job.c_list: must not be empty".into());
        }
        if list.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            violations.push("job.c_list: entries must be finite and >= 0".into());
        }
        if list.windows(2).any(|w| w[0] >= w[1]) {
            violations.push("job.c_list: entries must be strictly increasing".into());
        }
    }
    if let Some(n_list) = &raw.n_list {
        if n_list.is_empty() {
            violations.push("job.n_list: must not be empty".into());
        }
        if n_list.windows(2).any(|w| w[0] >= w[1]) {
            violations.push("job.n_list: entries must be strictly increasing".into());
        }
    }
    let given = [raw.c_list.is_some(), raw.c_grid.is_some(), raw.n_list.is_some()];
    if given.iter().filter(|g| **g).count() > 1 {
        violations.push("job: give at most one of c_list, c_grid and n_list".into());
    }

    let needs_c = matches!(
        kind,
        Some(JobKind::Fig1) | Some(JobKind::Inset) | Some(JobKind::Fig4) | Some(JobKind::Spectrum)
    );
    if needs_c && c_list.is_none() && raw.n_list.is_none() {
        violations.push(format!("job: kind `{}` needs c_list, c_grid or n_list", raw.kind));
    }
    if kind == Some(JobKind::OracleCompare) {
        match &raw.n_list {
            None => violations.push("job: oracle-compare needs n_list (integer atom numbers)".into()),
            Some(list) if list.iter().any(|&n| n == 0 || n > 4) => {
                violations.push("job.n_list: oracle-compare supports 1..=4 atoms".into())
            }
            Some(_) => {}
        }
    }

    let omega_grid = raw.omega_grid.as_ref().map(|g| GridSpec {
        min_mhz: g.min_mhz,
        max_mhz: g.max_mhz,
        count: g.count,
    });
    if let Some(grid) = &omega_grid {
        if grid.count < 3 || grid.count % 2 == 0 {
            violations.push(format!(
                "job.omega_grid.count: must be odd and >= 3 so the grid samples Ω = 0, got {}",
                grid.count
            ));
        }
        match (grid.min_mhz, grid.max_mhz) {
            (Some(min), Some(max)) => {
                if min >= max || !min.is_finite() || !max.is_finite() {
                    violations.push(format!(
                        "job.omega_grid: need finite min_MHz < max_MHz, got [{min}, {max}]"
                    ));
                }
            }
            (None, None) => {
                if kind != Some(JobKind::OracleCompare) {
                    violations.push(
                        "job.omega_grid: min_MHz and max_MHz are required (only oracle-compare defaults to ±2g√N)"
                            .into(),
                    );
                }
            }
            _ => violations
                .push("job.omega_grid: give both min_MHz and max_MHz, or neither".into()),
        }
    } else if matches!(kind, Some(JobKind::Fig1) | Some(JobKind::Spectrum)) {
        violations.push(format!("job: kind `{}` needs omega_grid", raw.kind));
    }

    let y_list = raw.y_list.clone().unwrap_or_else(|| DEFAULT_Y_LIST.to_vec());
    if y_list.is_empty() {
        violations.push("job.y_list: must not be empty".into());
    }
    if y_list.iter().any(|y| !(y.is_finite() && *y >= 0.0)) {
        violations.push("job.y_list: entries must be finite and >= 0".into());
    }
    if y_list.windows(2).any(|w| w[0] >= w[1]) {
        violations.push("job.y_list: entries must be strictly increasing".into());
    }

    let (oracle_enabled, oracle_n_max) = match &raw.oracle {
        Some(o) => (o.enabled, o.n_max.unwrap_or(DEFAULT_ORACLE_N_MAX)),
        None => (true, DEFAULT_ORACLE_N_MAX),
    };
    if !(1..=12).contains(&oracle_n_max) {
        violations.push(format!(
            "job.oracle.n_max: must be in 1..=12, got {oracle_n_max}"
        ));
    }

    kind.map(|kind| JobSpec {
        kind,
        c_list,
        n_list: raw.n_list.clone(),
        omega_grid,
        y_list,
        oracle_enabled,
        oracle_n_max,
    })
}

fn validate_output(raw: Option<&RawOutput>, violations: &mut Vec<String>) -> OutputSpec {
    let mut formats = Vec::new();
    let mut directory = None;
    if let Some(raw) = raw {
        directory = raw.directory.as_ref().map(PathBuf::from);
        if let Some(list) = &raw.formats {
            if list.is_empty() {
                violations.push("output.formats: must not be empty when given".into());
            }
            for f in list {
                let parsed = match f.as_str() {
                    "csv" => Some(Format::Csv),
                    "json" => Some(Format::Json),
                    "svg" => Some(Format::Svg),
                    other => {
                        violations.push(format!(
                            "output.formats: unknown format `{other}` (known: csv, json, svg)"
                        ));
                        None
                    }
                };
                if let Some(p) = parsed {
                    if formats.contains(&p) {
                        violations.push(format!("output.formats: duplicate entry `{f}`"));
                    } else {
                        formats.push(p);
                    }
                }
            }
        }
    }
    if formats.is_empty() {
        formats = vec![Format::Csv, Format::Svg];
    }
    OutputSpec { directory, formats }
}
