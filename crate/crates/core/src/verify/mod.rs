//! Named verification suites, the `η₀` kernel tables and the exploratory
//! truncation studies.

mod eval_suite;
mod families;
pub mod kernel;
pub mod linalg;
pub mod study;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{RelationReport, Summary};
use crate::fock::Charges;
use crate::level::Level;
use crate::scalar::{parse_rational, render_rational, Rational};

pub use kernel::{kernel_dimensions, KernelRow, KernelTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteId {
    Heisenberg,
    DRelations,
    Prop31,
    Theorem31,
    Prop41,
    Prop42Eta,
    XiEtaZero,
    #[serde(rename = "prop43_finiteJ")]
    Prop43FiniteJ,
    RemarkHwCrosscheck,
    ClassicalLimit,
    EvalModule,
    Lemma51Exact,
}

impl SuiteId {
    pub const ALL: [SuiteId; 12] = [
        SuiteId::Heisenberg,
        SuiteId::DRelations,
        SuiteId::Prop31,
        SuiteId::Theorem31,
        SuiteId::Prop41,
        SuiteId::Prop42Eta,
        SuiteId::XiEtaZero,
        SuiteId::Prop43FiniteJ,
        SuiteId::RemarkHwCrosscheck,
        SuiteId::ClassicalLimit,
        SuiteId::EvalModule,
        SuiteId::Lemma51Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Heisenberg => "heisenberg",
            SuiteId::DRelations => "d_relations",
            SuiteId::Prop31 => "prop31",
            SuiteId::Theorem31 => "theorem31",
            SuiteId::Prop41 => "prop41",
            SuiteId::Prop42Eta => "prop42_eta",
            SuiteId::XiEtaZero => "xi_eta_zero",
            SuiteId::Prop43FiniteJ => "prop43_finiteJ",
            SuiteId::RemarkHwCrosscheck => "remark_hw_crosscheck",
            SuiteId::ClassicalLimit => "classical_limit",
            SuiteId::EvalModule => "eval_module",
            SuiteId::Lemma51Exact => "lemma51_exact",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Fock,
    Eval,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("invalid value for {field}: {msg}")]
    Invalid { field: &'static str, msg: String },
    #[error("{field} = {value} exceeds the limit {limit}")]
    Limit { field: &'static str, value: u64, limit: u64 },
}

fn invalid(field: &'static str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, msg: msg.into() }
}

/// Suite configuration. Every field except `suite` is optional and falls
/// back to a per-suite default.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Option<SuiteId>,
    pub backend: Option<BackendKind>,
    /// `"symbolic"` or a rational such as `"3"` or `"1/2"`.
    pub k: Option<String>,
    /// `"symbolic"` or a rational at which residuals are evaluated.
    pub hbar: Option<String>,
    /// Vacuum labels `[l, s, t]`.
    pub charges: Option<Vec<[i64; 3]>>,
    pub max_probe_weight: Option<usize>,
    pub out_weight_cap: Option<usize>,
    pub modes: Option<[i64; 2]>,
    pub n_modes: Option<[i64; 2]>,
    #[serde(rename = "J")]
    pub j: Option<Vec<u32>>,
    pub delta: Option<Vec<String>>,
    /// Evaluation-module dimensions minus one.
    pub eval_l: Option<Vec<u32>>,
    /// Largest `|a|` of `u^a` in evaluation-module probes.
    pub power_window: Option<i64>,
    /// Largest weight for kernel tables and graded-matrix checks.
    pub kernel_weight: Option<usize>,
    pub limits: Option<Limits>,
}

/// Resource limits. Requests beyond them are refused before any work starts,
/// except the time budget, which is checked by the caller afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "Limits::default_max_weight")]
    pub max_weight: usize,
    #[serde(default = "Limits::default_max_j", rename = "max_J")]
    pub max_j: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_secs: Option<u64>,
}

impl Limits {
    fn default_max_weight() -> usize {
        6
    }

    fn default_max_j() -> u32 {
        12
    }

    fn check(field: &'static str, value: u64, limit: u64) -> Result<(), ConfigError> {
        if value > limit {
            Err(ConfigError::Limit { field, value, limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_weight: Self::default_max_weight(),
            max_j: Self::default_max_j(),
            time_budget_secs: None,
        }
    }
}

/// A configuration with all defaults filled in and values parsed.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub suite: SuiteId,
    pub backend: BackendKind,
    pub level: Level,
    pub hbar: Option<Rational>,
    pub charges: Vec<Charges>,
    pub max_probe_weight: usize,
    pub out_weight_cap: usize,
    pub modes: (i64, i64),
    pub n_modes: (i64, i64),
    pub j: Vec<u32>,
    pub delta: Vec<Rational>,
    pub eval_l: Vec<u32>,
    pub power_window: i64,
    pub kernel_weight: usize,
    pub limits: Limits,
}

impl Resolved {
    pub fn modes(&self) -> impl Iterator<Item = i64> + Clone {
        self.modes.0..=self.modes.1
    }

    pub fn mode_pairs(&self) -> Vec<(i64, i64)> {
        let (lo, hi) = self.n_modes;
        self.modes().flat_map(|m| (lo..=hi).map(move |n| (m, n))).collect()
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        p.insert("backend".into(), format!("{:?}", self.backend).to_lowercase());
        p.insert("k".into(), level_text(&self.level));
        p.insert("hbar".into(), self.hbar.as_ref().map_or("symbolic".into(), render_rational));
        let charges: Vec<String> = self.charges.iter().map(|c| c.to_string()).collect();
        p.insert("charges".into(), charges.join(" "));
        p.insert("max_probe_weight".into(), self.max_probe_weight.to_string());
        p.insert("out_weight_cap".into(), self.out_weight_cap.to_string());
        p.insert("modes".into(), format!("{}..{}", self.modes.0, self.modes.1));
        p.insert("n_modes".into(), format!("{}..{}", self.n_modes.0, self.n_modes.1));
        p
    }
}

fn level_text(level: &Level) -> String {
    match level {
        Level::Symbolic => "symbolic".into(),
        Level::Value(k0) => render_rational(k0),
    }
}

fn parse_q(field: &'static str, text: &str) -> Result<Rational, ConfigError> {
    parse_rational(text).ok_or_else(|| invalid(field, format!("not a rational: {text}")))
}

fn sectors(ls: &[i64], ss: &[i64]) -> Vec<[i64; 3]> {
    ls.iter().flat_map(|&l| ss.iter().map(move |&s| [l, s, s])).collect()
}

impl SuiteConfig {
    pub fn for_suite(suite: SuiteId) -> Self {
        SuiteConfig {
            suite: Some(suite),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))
    }

    /// Fills in per-suite defaults and validates.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let suite = self.suite.ok_or_else(|| invalid("suite", "missing"))?;
        let default_backend = if suite == SuiteId::EvalModule {
            BackendKind::Eval
        } else {
            BackendKind::Fock
        };
        let backend = self.backend.unwrap_or(default_backend);
        if (suite == SuiteId::EvalModule) != (backend == BackendKind::Eval) {
            return Err(invalid("backend", format!("suite {suite} does not run on this backend")));
        }
        let level = match self.k.as_deref() {
            None | Some("symbolic") => Level::Symbolic,
            Some(text) => Level::value(parse_q("k", text)?).map_err(|e| invalid("k", e.to_string()))?,
        };
        let hbar = match self.hbar.as_deref() {
            None | Some("symbolic") => None,
            Some(text) => Some(parse_q("hbar", text)?),
        };
        let (def_charges, def_weight, def_modes) = match suite {
            SuiteId::Heisenberg => (vec![[0, 0, 0], [1, 0, 0], [1, 1, 1]], 2, (-3, 3)),
            SuiteId::Prop31 => (sectors(&[0, 1], &[0, 1]), 2, (-3, 3)),
            SuiteId::Prop43FiniteJ => (sectors(&[0, 1], &[0, 1]), 2, (-1, 1)),
            SuiteId::RemarkHwCrosscheck => (vec![[0, 0, 0], [1, 0, 0], [2, 0, 0]], 0, (0, 4)),
            SuiteId::Lemma51Exact => (sectors(&[0, 1], &[0]), 2, (-1, 1)),
            _ => (sectors(&[0, 1], &[0, 1]), 3, (-2, 2)),
        };
        let charges: Vec<Charges> = self
            .charges
            .clone()
            .unwrap_or(def_charges)
            .into_iter()
            .map(|[l, s, t]| Charges::int(l, s, t))
            .collect();
        if charges.is_empty() {
            return Err(invalid("charges", "empty"));
        }
        let limits = self.limits.clone().unwrap_or_default();
        let max_w = limits.max_weight as u64;
        let max_probe_weight = self.max_probe_weight.unwrap_or(def_weight);
        Limits::check("max_probe_weight", max_probe_weight as u64, max_w)?;
        let out_weight_cap = self.out_weight_cap.unwrap_or(match suite {
            SuiteId::Prop31 => 4,
            _ => max_probe_weight,
        });
        Limits::check("out_weight_cap", out_weight_cap as u64, max_w)?;
        let modes = self.modes.map_or(def_modes, |[a, b]| (a, b));
        let n_modes = self.n_modes.map_or(modes, |[a, b]| (a, b));
        if modes.0 > modes.1 || n_modes.0 > n_modes.1 {
            return Err(invalid("modes", "empty range"));
        }
        let def_j = match suite {
            SuiteId::Prop43FiniteJ => vec![0, 1, 2],
            _ => vec![0, 1, 2, 3],
        };
        let j = self.j.clone().unwrap_or(def_j);
        for &j in &j {
            Limits::check("J", j.into(), limits.max_j.into())?;
        }
        let delta = match &self.delta {
            None => vec![Rational::new(1.into(), 10.into()), Rational::new(1.into(), 100.into())],
            Some(ds) => ds.iter().map(|d| parse_q("delta", d)).collect::<Result<_, _>>()?,
        };
        if delta.iter().any(|d| *d <= Rational::from_integer(0.into())) {
            return Err(invalid("delta", "must be positive"));
        }
        let eval_l = self.eval_l.clone().unwrap_or_else(|| vec![1, 2, 3]);
        if eval_l.iter().any(|&l| l == 0 || l > 8) {
            return Err(invalid("eval_l", "each l must lie in 1..=8"));
        }
        let kernel_weight = self.kernel_weight.unwrap_or(4);
        Limits::check("kernel_weight", kernel_weight as u64, max_w)?;
        Ok(Resolved {
            suite,
            backend,
            level,
            hbar,
            charges,
            max_probe_weight,
            out_weight_cap,
            modes,
            n_modes,
            j,
            delta,
            eval_l,
            power_window: self.power_window.unwrap_or(3),
            kernel_weight,
            limits,
        })
    }
}

/// The outcome of one suite: one report per relation family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub relations: Vec<RelationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(cfg: &Resolved, relations: Vec<RelationReport>) -> Self {
        let mut summary = Summary::default();
        for r in &relations {
            summary.pass += r.summary.pass;
            summary.fail += r.summary.fail;
            summary.skipped += r.summary.skipped;
        }
        SuiteReport {
            suite: cfg.suite.to_string(),
            params: cfg.params(),
            relations,
            summary,
        }
    }

    /// True unless an asserted check failed.
    pub fn ok(&self) -> bool {
        self.relations.iter().all(RelationReport::ok)
    }

    /// Failures among asserted checks.
    pub fn asserted_failures(&self) -> usize {
        self.relations.iter().filter(|r| !r.ok()).map(|r| r.summary.fail).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, ConfigError> {
    let r = cfg.resolve()?;
    Ok(run_resolved(&r))
}

pub fn run_resolved(r: &Resolved) -> SuiteReport {
    let relations = match r.suite {
        SuiteId::EvalModule => eval_suite::run(r),
        _ => suites::run(r),
    };
    SuiteReport::new(r, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>(), Ok(id));
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
    }

    #[test]
    fn unknown_suite_and_keys() {
        assert_eq!("nosuch".parse::<SuiteId>(), Err(ConfigError::UnknownSuite("nosuch".into())));
        assert!(SuiteConfig::from_json(r#"{"suite":"theorem31","colour":1}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"suite":"theorem31","limits":{"max_weight":2,"extra":0}}"#).is_err());
    }

    #[test]
    fn defaults_cover_the_full_window() {
        let r = SuiteConfig::for_suite(SuiteId::Theorem31).resolve().unwrap();
        assert_eq!(r.max_probe_weight, 3);
        assert_eq!(r.modes, (-2, 2));
        assert_eq!(r.charges.len(), 4);
        assert_eq!(r.mode_pairs().len(), 25);
    }

    #[test]
    fn limits_are_resource_errors() {
        let cfg = SuiteConfig::from_json(r#"{"suite":"prop31","max_probe_weight":3,"limits":{"max_weight":2}}"#).unwrap();
        assert!(matches!(
            cfg.resolve(),
            Err(ConfigError::Limit {
                field: "max_probe_weight",
                ..
            })
        ));
        let cfg = SuiteConfig::from_json(r#"{"suite":"prop43_finiteJ","J":[13]}"#).unwrap();
        assert!(matches!(cfg.resolve(), Err(ConfigError::Limit { field: "J", .. })));
        let cfg = SuiteConfig::from_json(r#"{"suite":"theorem31","k":"-2"}"#).unwrap();
        assert!(matches!(cfg.resolve(), Err(ConfigError::Invalid { field: "k", .. })));
    }

    #[test]
    fn eval_suite_needs_eval_backend() {
        let cfg = SuiteConfig::from_json(r#"{"suite":"eval_module","backend":"fock"}"#).unwrap();
        assert!(cfg.resolve().is_err());
    }
}
