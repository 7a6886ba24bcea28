//! Sweep configuration: a flat TOML document whose keys mirror the `sweep`
//! flags. Flags given on the command line override values from the file.
//!
//! ```toml
//! identity = ["heine", "q-gauss"]   # or "all"
//! samples = 200
//! seed = 42
//! q = ["0.5", "1/3"]                # omitted: q is sampled too
//! tol = 1e-10                       # omitted: per-identity default
//! format = "jsonl"                  # or "csv"
//! jobs = 4
//! real_only = false
//! depth = 20
//! max_m = 15
//! ```

use std::path::Path;

use serde::Deserialize;

use super::literal::ComplexLiteral;
use crate::exact::DEFAULT_MAX_M;
use crate::identities::{IdentityName, DEFAULT_DEPTH};

pub const DEFAULT_SAMPLES: usize = 100;
pub const JOBS_ENV: &str = "Q_HEINE_JOBS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Scalar),
    Many(Vec<Scalar>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Text(String),
    Integer(i64),
    Float(f64),
}

impl Scalar {
    fn text(self) -> String {
        match self {
            Scalar::Text(s) => s,
            Scalar::Integer(i) => i.to_string(),
            // shortest round-trip form, so 0.5 parses back to exactly 1/2
            Scalar::Float(f) => f.to_string(),
        }
    }
}

impl OneOrMany {
    fn texts(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s.text()],
            OneOrMany::Many(v) => v.into_iter().map(Scalar::text).collect(),
        }
    }
}

/// Raw file contents; every key optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    identity: Option<OneOrMany>,
    samples: Option<usize>,
    seed: Option<u64>,
    q: Option<OneOrMany>,
    tol: Option<f64>,
    format: Option<OutputFormat>,
    jobs: Option<usize>,
    real_only: Option<bool>,
    depth: Option<u32>,
    max_m: Option<u32>,
}

/// Command-line overrides; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct SweepOverrides {
    pub identity: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub q: Option<Vec<String>>,
    pub tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
    pub real_only: bool,
    pub depth: Option<u32>,
    pub max_m: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub identities: Vec<IdentityName>,
    pub samples: usize,
    pub seed: u64,
    /// Fixed bases; empty means q is drawn from the safe annulus.
    pub q: Vec<ComplexLiteral>,
    /// Pass tolerance; `None` uses each identity's default.
    pub tol: Option<f64>,
    pub format: OutputFormat,
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
    pub real_only: bool,
    pub depth: u32,
    pub max_m: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            identities: IdentityName::ALL.to_vec(),
            samples: DEFAULT_SAMPLES,
            seed: 0,
            q: Vec::new(),
            tol: None,
            format: OutputFormat::Jsonl,
            jobs: None,
            real_only: false,
            depth: DEFAULT_DEPTH,
            max_m: DEFAULT_MAX_M,
        }
    }
}

/// `all`, or a list of identity names; duplicates dropped, order kept.
pub fn parse_identities(names: &[String]) -> Result<Vec<IdentityName>, String> {
    let mut out = Vec::new();
    for name in names {
        let batch = if name.trim() == "all" {
            IdentityName::ALL.to_vec()
        } else {
            vec![name.parse::<IdentityName>().map_err(|e| e.to_string())?]
        };
        for id in batch {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        return Err("no identity selected".into());
    }
    Ok(out)
}

fn parse_bases(texts: &[String]) -> Result<Vec<ComplexLiteral>, String> {
    texts
        .iter()
        .map(|t| {
            let lit: ComplexLiteral = t.parse().map_err(|e: crate::QError| e.to_string())?;
            crate::QBase::new(lit.value).map_err(|e| format!("q = {t}: {e}"))?;
            Ok(lit)
        })
        .collect()
}

fn jobs_from_env() -> Result<Option<usize>, String> {
    match std::env::var(JOBS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{JOBS_ENV} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

impl SweepConfig {
    /// Read a config document from text.
    pub fn from_toml(text: &str) -> Result<Self, String> {
        Self::resolve(Some(text), SweepOverrides::default())
    }

    pub fn load(path: Option<&Path>, flags: SweepOverrides) -> Result<Self, String> {
        let text = match path {
            Some(p) => Some(
                std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?,
            ),
            None => None,
        };
        Self::resolve(text.as_deref(), flags)
    }

    /// Merge flags over file values over defaults, then validate.
    /// `jobs` falls back to the `Q_HEINE_JOBS` environment variable.
    pub fn resolve(file: Option<&str>, flags: SweepOverrides) -> Result<Self, String> {
        let file: FileConfig = match file {
            Some(text) => toml::from_str(text).map_err(|e| format!("invalid config: {e}"))?,
            None => FileConfig::default(),
        };
        let defaults = SweepConfig::default();

        let identities = match flags.identity.or(file.identity.map(OneOrMany::texts)) {
            Some(names) => parse_identities(&names)?,
            None => defaults.identities,
        };
        let q = match flags.q.or(file.q.map(OneOrMany::texts)) {
            Some(texts) => parse_bases(&texts)?,
            None => Vec::new(),
        };
        let tol = flags.tol.or(file.tol);
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("tol must be positive and finite, got {t}"));
            }
        }
        let depth = flags.depth.or(file.depth).unwrap_or(defaults.depth);
        if !(2..=48).contains(&depth) {
            return Err(format!("depth must lie in 2..=48, got {depth}"));
        }
        let jobs = match flags.jobs.or(file.jobs) {
            Some(j) => Some(j),
            None => jobs_from_env()?,
        };
        Ok(SweepConfig {
            identities,
            samples: flags.samples.or(file.samples).unwrap_or(defaults.samples),
            seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
            q,
            tol,
            format: flags.format.or(file.format).unwrap_or_default(),
            jobs: jobs.filter(|&j| j > 0),
            real_only: flags.real_only || file.real_only.unwrap_or(false),
            depth,
            max_m: flags.max_m.or(file.max_m).unwrap_or(defaults.max_m),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_overrides() {
        let text = r#"
            identity = ["heine", "q-gauss"]
            samples = 7
            seed = 3
            q = [0.5, "1/3"]
            format = "csv"
            real_only = true
        "#;
        let cfg = SweepConfig::from_toml(text).unwrap();
        assert_eq!(cfg.identities, vec![IdentityName::Heine, IdentityName::QGauss]);
        assert_eq!((cfg.samples, cfg.seed, cfg.format), (7, 3, OutputFormat::Csv));
        assert_eq!(cfg.q.len(), 2);
        assert_eq!(cfg.q[0].exact_real(), Some(&crate::exact::rational(1, 2)));
        assert!(cfg.real_only);

        let flags = SweepOverrides {
            samples: Some(11),
            identity: Some(vec!["abel".into()]),
            ..Default::default()
        };
        let cfg = SweepConfig::resolve(Some(text), flags).unwrap();
        assert_eq!(cfg.samples, 11);
        assert_eq!(cfg.identities, vec![IdentityName::Abel]);
        assert_eq!(cfg.seed, 3);
    }

    #[test]
    fn single_values_and_all() {
        let cfg = SweepConfig::from_toml("identity = \"all\"\nq = 0.25").unwrap();
        assert_eq!(cfg.identities.len(), IdentityName::ALL.len());
        assert_eq!(cfg.q[0].value.re, 0.25);
    }

    #[test]
    fn rejects_bad_documents() {
        for text in [
            "unknown_key = 1",
            "identity = \"nope\"",
            "q = 1.5",
            "depth = 60",
            "tol = -1.0",
            "samples = \"many\"",
        ] {
            assert!(SweepConfig::from_toml(text).is_err(), "{text}");
        }
    }
}
