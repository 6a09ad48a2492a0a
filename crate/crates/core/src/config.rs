//! Run configuration: a TOML file with one section per module, overridden
//! field by field by command-line flags.
//!
//! ```toml
//! [model]
//! family = "tanh6"
//! B0 = 24.0
//! p = 0.35
//!
//! [solver]
//! grid_points = 32000
//!
//! [output]
//! dir = "out"
//! format = "csv"
//!
//! [table]
//! methods = ["nde", "wkb"]
//! replicate_above_asymptote = true
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{Method, ReportFormat};
use crate::model::ModelParams;
use crate::numerics::SolverConfig;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub table: TableSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub family: Option<String>,
    #[serde(rename = "B0")]
    pub b0: Option<f64>,
    pub p: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub half_width: Option<f64>,
    pub grid_points: Option<usize>,
    pub energy_tol: Option<f64>,
    pub root_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub quad_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSection {
    pub methods: Option<Vec<String>>,
    pub replicate_above_asymptote: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config file: {e}")))
    }

    /// Reads and parses a file; I/O failures are returned separately from
    /// syntax errors so callers can map them to different exit codes.
    pub fn load(path: &Path) -> std::result::Result<Result<Self>, std::io::Error> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub family: Option<String>,
    pub b0: Option<f64>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub omega: Option<f64>,
    pub half_width: Option<f64>,
    pub grid_points: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub methods: Option<Vec<String>>,
    /// Flags can only switch this on.
    pub replicate_above_asymptote: bool,
}

/// Effective, validated configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub solver: SolverConfig,
    pub out_dir: PathBuf,
    pub format: ReportFormat,
    pub methods: Vec<Method>,
    pub replicate_above_asymptote: bool,
}

impl RunConfig {
    /// Combines file and flags (flags win) and validates the result.
    /// `default_params` supplies the model when no family is named.
    pub fn resolve(file: &FileConfig, flags: &Overrides, default_params: ModelParams) -> Result<Self> {
        let m = &file.model;
        let family = flags.family.clone().or_else(|| m.family.clone());
        let pick = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
        let base = match family.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None => default_params,
            Some("tanh6") => ModelParams::default(),
            Some("scarf2") | Some("scarfii") => ModelParams::ScarfII { a: 7.0, b: 4.0, p: 1.0 },
            Some("oscillator") => ModelParams::HarmonicOscillatorOracle { omega: 1.0 },
            Some(other) => {
                return Err(Error::InvalidArgument(format!(
                    "unknown family {other:?} (expected tanh6, scarf2 or oscillator)"
                )))
            }
        };
        let params = match base {
            ModelParams::Tanh6 { b0, p } => ModelParams::tanh6(pick(flags.b0, m.b0, b0), pick(flags.p, m.p, p))?,
            ModelParams::ScarfII { a, b, p } => ModelParams::scarf2(
                pick(flags.a, m.a, a),
                pick(flags.b, m.b, b),
                pick(flags.p, m.p, p),
            )?,
            ModelParams::HarmonicOscillatorOracle { omega } => {
                ModelParams::oscillator(pick(flags.omega, m.omega, omega))?
            }
        };

        let s = &file.solver;
        let d = SolverConfig::for_model(&params);
        let solver = SolverConfig {
            half_width: flags.half_width.or(s.half_width).unwrap_or(d.half_width),
            grid_points: flags.grid_points.or(s.grid_points).unwrap_or(d.grid_points),
            energy_tol: s.energy_tol.unwrap_or(d.energy_tol),
            root_tol: s.root_tol.unwrap_or(d.root_tol),
            max_iter: s.max_iter.unwrap_or(d.max_iter),
            quad_tol: s.quad_tol.unwrap_or(d.quad_tol),
            allow_above_threshold: false,
        };
        solver.validate()?;

        let format = match flags.format.as_ref().or(file.output.format.as_ref()) {
            Some(f) => f.parse()?,
            None => ReportFormat::default(),
        };
        let methods = match flags.methods.as_ref().or(file.table.methods.as_ref()) {
            Some(list) => list.iter().map(|s| s.parse()).collect::<Result<Vec<Method>>>()?,
            None => Method::ALL.to_vec(),
        };
        if methods.is_empty() {
            return Err(Error::InvalidArgument("--methods needs at least one method".into()));
        }
        Ok(RunConfig {
            params,
            solver,
            out_dir: flags.out.clone().or_else(|| file.output.dir.clone()).unwrap_or_else(|| PathBuf::from(".")),
            format,
            methods,
            replicate_above_asymptote: flags.replicate_above_asymptote
                || file.table.replicate_above_asymptote.unwrap_or(false),
        })
    }

    /// The effective configuration as a single JSON object for output headers.
    pub fn provenance(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_table_scenario() {
        let rc = RunConfig::resolve(&FileConfig::default(), &Overrides::default(), ModelParams::default()).unwrap();
        assert_eq!(rc.params, ModelParams::Tanh6 { b0: 24.0, p: 0.35 });
        assert_eq!(rc.solver, SolverConfig::for_model(&rc.params));
        assert_eq!(rc.methods, Method::ALL.to_vec());
        assert!(!rc.replicate_above_asymptote);
    }

    #[test]
    fn flags_win_over_file() {
        let file = FileConfig::parse(
            "[model]\nfamily = \"scarf2\"\nA = 5.0\np = 0.5\n[solver]\ngrid_points = 1000\n[table]\nmethods = [\"wkb\"]\n",
        )
        .unwrap();
        let flags = Overrides { p: Some(1.0), grid_points: Some(2000), ..Default::default() };
        let rc = RunConfig::resolve(&file, &flags, ModelParams::default()).unwrap();
        assert_eq!(rc.params, ModelParams::ScarfII { a: 5.0, b: 4.0, p: 1.0 });
        assert_eq!(rc.solver.grid_points, 2000);
        assert_eq!(rc.methods, vec![Method::Wkb]);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(FileConfig::parse("[model]\nfamliy = \"tanh6\"\n").is_err());
        assert!(FileConfig::parse("[extra]\n").is_err());
        let flags = Overrides { p: Some(9.0), ..Default::default() };
        let err = RunConfig::resolve(&FileConfig::default(), &flags, ModelParams::default()).unwrap_err();
        assert!(err.to_string().contains("0 < p < B0/3"), "{err}");
        let flags = Overrides { family: Some("morse".into()), ..Default::default() };
        assert!(RunConfig::resolve(&FileConfig::default(), &flags, ModelParams::default()).is_err());
    }
}
