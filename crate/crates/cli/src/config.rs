use std::path::{Path, PathBuf};

use membrane_core::initdata::{datum_from_table, make_family, parse_table, FamilyParams, InitDataError};
use membrane_core::profile::Profile;
use membrane_core::solver::SolverParams;
use membrane_core::types::InitialDatum;
use membrane_core::verify::VerifyConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatumConfig {
    /// Built-in smooth-step family; every key is optional.
    Family(FamilyParams),
    /// ū sampled in a two-column text file, interpolated by a natural cubic spline.
    Table {
        path: PathBuf,
        v0: f64,
        #[serde(default = "one")]
        beta: f64,
        eta1: f64,
        eta2: f64,
    },
    /// ū(r) = value + slope·(r − r1).
    Linear {
        r1: f64,
        r2: f64,
        v0: f64,
        value: f64,
        slope: f64,
        #[serde(default = "one")]
        beta: f64,
        eta1: f64,
        eta2: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub drop: Vec<f64>,
    pub width: Vec<f64>,
    pub v0: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub datum: DatumConfig,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    /// Directory of the config file, for resolving relative table paths.
    #[serde(skip)]
    pub base: PathBuf,
}

pub enum DatumOutcome {
    Ready(InitialDatum),
    /// The built-in family refused its parameters; names the clause.
    Rejected { clause: &'static str, detail: String },
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: Config = toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.message())))?;
        cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn datum(&self) -> Result<DatumOutcome, CliError> {
        build_datum(&self.datum, &self.base)
    }
}

pub fn build_datum(d: &DatumConfig, base: &Path) -> Result<DatumOutcome, CliError> {
    match d {
        DatumConfig::Family(p) => match make_family(*p) {
            Ok(d) => Ok(DatumOutcome::Ready(d)),
            Err(InitDataError::FamilyRejected { clause, detail }) => Ok(DatumOutcome::Rejected { clause, detail }),
            Err(e) => Err(CliError::Input(e.to_string())),
        },
        DatumConfig::Table { path, v0, beta, eta1, eta2 } => {
            let full = base.join(path);
            let text = std::fs::read_to_string(&full).map_err(|e| CliError::Input(format!("{}: {e}", full.display())))?;
            let (xs, ys) = parse_table(&text).map_err(|e| CliError::Input(format!("{}: {e}", full.display())))?;
            let d = datum_from_table(xs, ys, *v0, *beta, *eta1, *eta2).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(DatumOutcome::Ready(d))
        }
        DatumConfig::Linear { r1, r2, v0, value, slope, beta, eta1, eta2 } => Ok(DatumOutcome::Ready(InitialDatum {
            r1: *r1,
            r2: *r2,
            v0: *v0,
            profile: Profile::Linear { origin: *r1, value: *value, slope: *slope },
            beta: *beta,
            eta1: *eta1,
            eta2: *eta2,
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Config, toml::de::Error> {
        toml::from_str(s)
    }

    #[test]
    fn family_defaults_fill_in() {
        let c = parse("[datum]\nkind = \"family\"\nv0 = 40.0\n").unwrap();
        match c.datum {
            DatumConfig::Family(p) => {
                assert_eq!(p.v0, 40.0);
                assert_eq!(p.drop, FamilyParams::default().drop);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(c.solver, SolverParams::default());
    }

    #[test]
    fn missing_key_is_named() {
        let e = parse("[datum]\nkind = \"table\"\nv0 = 10.0\neta1 = 1.2\neta2 = 1.4\n").unwrap_err();
        assert!(e.message().contains("path"), "{}", e.message());
        let e = parse("[solver]\ngrid_n = 128\n").unwrap_err();
        assert!(e.message().contains("datum"), "{}", e.message());
    }

    #[test]
    fn unknown_solver_key_rejected() {
        let e = parse("[datum]\nkind = \"family\"\n[solver]\ngird_n = 128\n").unwrap_err();
        assert!(e.message().contains("gird_n"), "{}", e.message());
    }

    #[test]
    fn scheme_parses_snake_case() {
        let c = parse("[datum]\nkind = \"family\"\n[solver]\nscheme = \"minmod\"\n").unwrap();
        assert_eq!(c.solver.scheme, membrane_core::solver::Scheme::Minmod);
    }
}
