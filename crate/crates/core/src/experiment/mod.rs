//! Named experiment presets, their configuration, and the runner that writes
//! `<out>/<preset>.csv` and `<out>/<preset>.summary`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::{strategy_names, SearchDomain};
use crate::diagnostics::Thresholds;
use crate::error::{Error, Result};
use crate::kernels::{FieldSpec, Kernel, KernelSpec};
use crate::point::Point;

mod presets;

pub use presets::{box_sequence, random_probability, BoxSequence};

/// What a config file may contain. Every field is optional; missing values
/// take the preset defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    pub kernel: Option<KernelSpec>,
    pub dim: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub xi: Option<Vec<f64>>,
    pub strategy: Option<String>,
    pub step: Option<f64>,
    pub field: Option<FieldSpec>,
    pub thresholds: Option<Thresholds>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub n_max: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: String,
    pub kernel: KernelSpec,
    pub dim: usize,
    pub n_max: usize,
    pub seed: u64,
    pub trials: usize,
    pub xi: Vec<f64>,
    pub strategy: String,
    pub step: Option<f64>,
    pub field: Option<FieldSpec>,
    pub thresholds: Thresholds,
    pub out: PathBuf,
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    /// Merges file and flags, fills defaults, and validates. Every failure is
    /// reported as [`Error::Config`].
    pub fn resolve(file: ConfigFile, flags: Overrides) -> Result<Self> {
        let preset = flags.preset.or(file.preset).ok_or_else(|| {
            Error::Config("no preset given (use --preset or `preset = ...`)".into())
        })?;
        let found = find_preset(&preset).ok_or_else(|| {
            Error::Config(format!(
                "unknown preset `{preset}` (known: {})",
                preset_names().join(", ")
            ))
        })?;
        let dim = match (file.dim, &file.kernel) {
            (Some(d), _) => d,
            (None, Some(k)) => k.dim(),
            (None, None) => 1,
        };
        if dim == 0 {
            return Err(Error::Config("dim must be >= 1".into()));
        }
        let kernel = match file.kernel {
            Some(k) => k,
            None => KernelSpec::gaussian(1.0, dim),
        };
        if kernel.dim() != dim {
            return Err(Error::Config(format!(
                "kernel dimension {} does not match dim = {dim}",
                kernel.dim()
            )));
        }
        let n_max = flags.n_max.or(file.n_max).unwrap_or(64);
        if n_max < 2 {
            return Err(Error::Config(format!("n_max must be >= 2 (got {n_max})")));
        }
        let trials = file.trials.unwrap_or(100);
        if trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        let xi = file.xi.unwrap_or_else(|| vec![0.0; dim]);
        if xi.len() != dim {
            return Err(Error::Config(format!(
                "xi has {} coordinates, expected {dim}",
                xi.len()
            )));
        }
        Point::new(xi.clone()).map_err(config_err)?;
        let strategy = file.strategy.unwrap_or_else(|| "ray".into());
        if !strategy_names().contains(&strategy.as_str()) {
            return Err(Error::Config(format!(
                "unknown strategy `{strategy}` (known: {})",
                strategy_names().join(", ")
            )));
        }
        let seed = flags.seed.or(file.seed);
        if strategy == "random" && seed.is_none() {
            return Err(Error::Config("strategy `random` requires a seed".into()));
        }
        let thresholds = file.thresholds.unwrap_or_default();
        thresholds.validate().map_err(config_err)?;
        let cfg = ExperimentConfig {
            preset,
            kernel,
            dim,
            n_max,
            seed: seed.unwrap_or(0),
            trials,
            xi,
            strategy,
            step: file.step,
            field: file.field,
            thresholds,
            out: flags
                .out
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("out")),
        };
        cfg.base_kernel()?;
        cfg.domain()?;
        found.validate(&cfg).map_err(config_err)?;
        Ok(cfg)
    }

    /// Defaults only: `preset` with `n_max` and everything else at its default.
    pub fn for_preset(preset: &str, n_max: usize) -> Result<Self> {
        Self::resolve(
            ConfigFile::default(),
            Overrides {
                preset: Some(preset.into()),
                n_max: Some(n_max),
                ..Overrides::default()
            },
        )
    }

    pub fn base_kernel(&self) -> Result<Kernel> {
        Kernel::from_spec(&self.kernel).map_err(config_err)
    }

    pub fn xi_point(&self) -> Point {
        Point::new(self.xi.clone()).expect("validated in resolve")
    }

    pub fn domain(&self) -> Result<SearchDomain> {
        SearchDomain::by_name(&self.strategy, self.dim, self.seed, self.step).map_err(config_err)
    }
}

/// Everything a preset produced, before it is written out.
#[derive(Debug, Clone, Default)]
pub struct PresetOutput {
    pub csv: Vec<u8>,
    pub verdicts: Vec<(String, bool)>,
    pub facts: Vec<(String, String)>,
}

pub trait Preset: Send + Sync {
    fn name(&self) -> &'static str;
    /// Short label of the result the preset reproduces.
    fn reference(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn expected(&self) -> &'static [(&'static str, bool)];

    /// Preset-specific checks on top of the generic ones.
    fn validate(&self, _cfg: &ExperimentConfig) -> Result<()> {
        Ok(())
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<PresetOutput>;
}

pub fn registry() -> &'static [&'static dyn Preset] {
    presets::REGISTRY
}

pub fn find_preset(name: &str) -> Option<&'static dyn Preset> {
    registry().iter().copied().find(|p| p.name() == name)
}

pub fn preset_names() -> Vec<&'static str> {
    registry().iter().map(|p| p.name()).collect()
}

fn fmt_expected(p: &dyn Preset) -> String {
    p.expected()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One row per preset: name, reference, expected verdicts.
pub fn list_presets() -> String {
    let mut s = String::new();
    for p in registry() {
        let _ = writeln!(
            s,
            "{:<20} → {:<9} {}",
            p.name(),
            p.reference(),
            fmt_expected(*p)
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub verdict: String,
    pub expected: bool,
    pub actual: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub preset: String,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub verdicts: Vec<(String, bool)>,
    pub mismatches: Vec<Mismatch>,
    pub wall_time_ms: u128,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.success() {
            0
        } else {
            1
        }
    }

    pub fn diff(&self) -> String {
        let mut s = String::new();
        for m in &self.mismatches {
            let actual = m.actual.map_or("missing".to_string(), |b| b.to_string());
            let _ = writeln!(
                s,
                "{}: expected {} actual {}",
                m.verdict, m.expected, actual
            );
        }
        s
    }
}

const RULE: &str = "converges iff final value <= threshold and every trailing-half step grows by at most growth_slack (relative) + abs_floor, where the MMD trace uses max(abs_floor, its round-off resolution); verdicts are finite-trace evidence";

/// The CSV a preset produces, with its check lines appended. Contains no
/// timings, so identical configs give identical bytes.
pub fn render_csv(cfg: &ExperimentConfig) -> Result<(Vec<u8>, PresetOutput)> {
    let preset = find_preset(&cfg.preset)
        .ok_or_else(|| Error::Config(format!("unknown preset `{}`", cfg.preset)))?;
    let out = preset.run(cfg)?;
    let mut csv = out.csv.clone();
    writeln!(csv, "# preset: {} ({})", preset.name(), preset.reference())?;
    for (k, v) in &out.verdicts {
        writeln!(csv, "# check {k}={v}")?;
    }
    Ok((csv, out))
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let preset = find_preset(&cfg.preset)
        .ok_or_else(|| Error::Config(format!("unknown preset `{}`", cfg.preset)))?;
    let start = Instant::now();
    let (csv, out) = render_csv(cfg)?;
    let wall_time_ms = start.elapsed().as_millis();

    let mismatches: Vec<Mismatch> = preset
        .expected()
        .iter()
        .filter_map(|&(name, expected)| {
            let actual = out
                .verdicts
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, v)| *v);
            (actual != Some(expected)).then(|| Mismatch {
                verdict: name.to_string(),
                expected,
                actual,
            })
        })
        .collect();

    fs::create_dir_all(&cfg.out)?;
    let csv_path = cfg.out.join(format!("{}.csv", preset.name()));
    let summary_path = cfg.out.join(format!("{}.summary", preset.name()));
    fs::write(&csv_path, &csv)?;

    let th = &cfg.thresholds;
    let kernel_json =
        serde_json::to_string(&cfg.kernel).map_err(|e| Error::Config(e.to_string()))?;
    let mut s = String::new();
    let _ = writeln!(s, "preset={}", preset.name());
    let _ = writeln!(s, "paper_ref={}", preset.reference());
    let _ = writeln!(s, "description={}", preset.description());
    let _ = writeln!(s, "rule={RULE}");
    let _ = writeln!(s, "kernel={kernel_json}");
    let _ = writeln!(s, "dim={}", cfg.dim);
    let _ = writeln!(s, "n_max={}", cfg.n_max);
    let _ = writeln!(s, "seed={}", cfg.seed);
    let _ = writeln!(s, "trials={}", cfg.trials);
    let _ = writeln!(s, "strategy={}", cfg.strategy);
    let _ = writeln!(s, "thresholds.mmd={:e}", th.mmd);
    let _ = writeln!(s, "thresholds.discrepancy={:e}", th.discrepancy);
    let _ = writeln!(s, "thresholds.growth_slack={}", th.growth_slack);
    let _ = writeln!(s, "thresholds.abs_floor={:e}", th.abs_floor);
    let _ = writeln!(s, "thresholds.escape_deficit={}", th.escape_deficit);
    for (k, v) in &out.verdicts {
        let _ = writeln!(s, "verdict.{k}={v}");
    }
    for (k, v) in preset.expected() {
        let _ = writeln!(s, "expected.{k}={v}");
    }
    for (k, v) in &out.facts {
        let _ = writeln!(s, "{k}={v}");
    }
    let _ = writeln!(
        s,
        "status={}",
        if mismatches.is_empty() {
            "ok"
        } else {
            "mismatch"
        }
    );
    let _ = writeln!(s, "wall_time_ms={wall_time_ms}");
    fs::write(&summary_path, s)?;

    Ok(RunOutcome {
        preset: preset.name().to_string(),
        csv_path,
        summary_path,
        verdicts: out.verdicts,
        mismatches,
        wall_time_ms,
    })
}
