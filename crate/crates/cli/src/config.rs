//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use bnsl::ga::{ConflictPolicy, GaConfig};
use bnsl::search::{HcConfig, Init, TabuConfig};
use bnsl::ScoreKind;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hc,
    Tabu,
    Ga,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Hc, Method::Tabu, Method::Ga];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hc => "hc",
            Method::Tabu => "tabu",
            Method::Ga => "ga",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Score {
    Loglik,
    Aic,
    Bic,
}

impl Score {
    pub const ALL: [Score; 3] = [Score::Loglik, Score::Aic, Score::Bic];

    pub fn kind(self) -> ScoreKind {
        match self {
            Score::Loglik => ScoreKind::LogLik,
            Score::Aic => ScoreKind::Aic,
            Score::Bic => ScoreKind::Bic,
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Empty,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConflictRule {
    Crossed,
    Inherited,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HcSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<InitKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_edge_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart_edge_prob: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TabuSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tenure: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_improve_window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<InitKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_edge_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart_edge_prob: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tournament_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elitism_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover_conflict_policy: Option<ConflictRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
}

/// Everything a run needs. Every field may come from the file; flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<Score>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_parents: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "is_default")]
    pub hc: HcSection,
    #[serde(skip_serializing_if = "is_default")]
    pub tabu: TabuSection,
    #[serde(skip_serializing_if = "is_default")]
    pub ga: GaSection,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

pub const DEFAULT_METHOD: Method = Method::Hc;
pub const DEFAULT_SCORE: Score = Score::Bic;
pub const DEFAULT_SEED: u64 = 0;

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))
    }

    pub fn method(&self) -> Method {
        self.method.unwrap_or(DEFAULT_METHOD)
    }

    pub fn score(&self) -> Score {
        self.score.unwrap_or(DEFAULT_SCORE)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn max_parents(&self) -> usize {
        self.max_parents.unwrap_or(bnsl::scoring::DEFAULT_MAX_PARENTS)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    /// Fills the top-level choices so the echoed config replays the run
    /// without relying on defaults.
    pub fn resolved(&self) -> Self {
        RunConfig {
            method: Some(self.method()),
            score: Some(self.score()),
            seed: Some(self.seed()),
            max_parents: Some(self.max_parents()),
            ..self.clone()
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serialises")
    }

    pub fn hc_config(&self) -> Result<HcConfig, Failure> {
        let d = HcConfig::default();
        let s = &self.hc;
        Ok(HcConfig {
            max_iterations: s.max_iterations.or(d.max_iterations),
            restarts: s.restarts.unwrap_or(d.restarts),
            init: init(s.init, s.init_edge_prob, "hc")?.unwrap_or(d.init),
            restart_edge_prob: s.restart_edge_prob.or(d.restart_edge_prob),
            seed: self.seed(),
        })
    }

    pub fn tabu_config(&self) -> Result<TabuConfig, Failure> {
        let d = TabuConfig::default();
        let s = &self.tabu;
        Ok(TabuConfig {
            tenure: s.tenure.unwrap_or(d.tenure),
            no_improve_window: s.no_improve_window.or(d.no_improve_window),
            max_iterations: s.max_iterations.or(d.max_iterations),
            init: init(s.init, s.init_edge_prob, "tabu")?.unwrap_or(d.init),
            restarts: s.restarts.unwrap_or(d.restarts),
            restart_edge_prob: s.restart_edge_prob.or(d.restart_edge_prob),
            seed: self.seed(),
        })
    }

    pub fn ga_config(&self) -> Result<GaConfig, Failure> {
        let d = GaConfig::default();
        let s = &self.ga;
        let config = GaConfig {
            population_size: s.population_size.unwrap_or(d.population_size),
            generations: s.generations.unwrap_or(d.generations),
            tournament_size: s.tournament_size.unwrap_or(d.tournament_size),
            crossover_rate: s.crossover_rate.unwrap_or(d.crossover_rate),
            mutation_prob: s.mutation_prob.or(d.mutation_prob),
            elitism_count: s.elitism_count.unwrap_or(d.elitism_count),
            conflict_policy: match s.crossover_conflict_policy {
                None => d.conflict_policy,
                Some(ConflictRule::Crossed) => ConflictPolicy::Crossed,
                Some(ConflictRule::Inherited) => ConflictPolicy::Inherited,
            },
            ensemble_size: s.ensemble_size.unwrap_or(d.ensemble_size),
            seed: self.seed(),
        };
        config
            .validate()
            .map_err(|e| Failure::config(format!("[ga] {e}")))?;
        Ok(config)
    }
}

fn init(kind: Option<InitKind>, edge_prob: Option<f64>, section: &str) -> Result<Option<Init>, Failure> {
    match (kind, edge_prob) {
        (None, None) => Ok(None),
        (Some(InitKind::Empty), None) => Ok(Some(Init::Empty)),
        (Some(InitKind::Empty), Some(_)) => Err(Failure::config(format!(
            "[{section}] init_edge_prob needs init = \"random\""
        ))),
        (None | Some(InitKind::Random), p) => {
            let edge_prob = p.unwrap_or(0.5);
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(Failure::config(format!(
                    "[{section}] init_edge_prob must lie in [0, 1]"
                )));
            }
            Ok(Some(Init::Random { edge_prob }))
        }
    }
}
