//! Solver settings resolved from command-line flags, an optional JSON file and the
//! direction-dependent defaults, in that order of precedence.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

use nonmono_core::{DirectionKind, SolverConfig, TermKind};

/// A flat set of optional overrides. The JSON file uses the same keys; `N` is accepted
/// as an alias of `memory`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub rho: Option<f64>,
    pub sigma: Option<f64>,
    pub s: Option<f64>,
    pub eps: Option<f64>,
    pub maxiter: Option<usize>,
    #[serde(alias = "N")]
    pub memory: Option<usize>,
    pub eta0: Option<f64>,
    pub term: Option<String>,
    pub direction: Option<String>,
    pub lbfgs_m_cap: Option<usize>,
    pub max_backtracks: Option<usize>,
    pub alpha_min: Option<f64>,
}

impl Overrides {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid config file")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            rho: self.rho.or(lower.rho),
            sigma: self.sigma.or(lower.sigma),
            s: self.s.or(lower.s),
            eps: self.eps.or(lower.eps),
            maxiter: self.maxiter.or(lower.maxiter),
            memory: self.memory.or(lower.memory),
            eta0: self.eta0.or(lower.eta0),
            term: self.term.or(lower.term),
            direction: self.direction.or(lower.direction),
            lbfgs_m_cap: self.lbfgs_m_cap.or(lower.lbfgs_m_cap),
            max_backtracks: self.max_backtracks.or(lower.max_backtracks),
            alpha_min: self.alpha_min.or(lower.alpha_min),
        }
    }

    /// Builds the configuration for one `(term, direction)` pair. The pair's defaults
    /// apply first, then every field set here.
    pub fn apply(&self, term: TermKind, direction: DirectionKind) -> SolverConfig {
        let mut c = SolverConfig::new(term, direction);
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field {
                    c.$field = v;
                })*
            };
        }
        set!(rho, sigma, s, eps, maxiter, memory, eta0, lbfgs_m_cap, max_backtracks, alpha_min);
        c
    }
}

/// Parses a comma-separated list, e.g. `G,NM1` or `BB1,BB2`.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(anyhow::Error::from))
        .collect()
}
