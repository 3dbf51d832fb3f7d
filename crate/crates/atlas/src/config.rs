//! Experiment configuration from a flat `key=value` file overlaid with
//! command-line flags. Keys are the long flag names.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use descent_core::counter::DEFAULT_BUDGET;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?} ({reason})")]
    Value { key: String, value: String, reason: String },
    #[error("missing required setting {0}")]
    Missing(&'static str),
}

pub const KEYS: &[&str] = &[
    "field", "ext", "poly", "e", "seed", "samples", "budget", "workers", "out", "format", "timings",
    "basis", "nvars", "max-ext", "fields", "exts", "degrees", "es", "modes", "require-hypotheses",
    "qs", "rs", "ds", "kind",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    AsCurve,
    AsHyper,
    Kummer,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::AsCurve => "as-curve",
            Mode::AsHyper => "as-hyper",
            Mode::Kummer => "kummer",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "as-curve" => Ok(Mode::AsCurve),
            "as-hyper" => Ok(Mode::AsHyper),
            "kummer" => Ok(Mode::Kummer),
            _ => Err("expected as-curve, as-hyper or kummer".into()),
        }
    }
}

/// Which basis of `k_r` over `k` to descend with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChoice {
    Power,
    /// Seeded random basis.
    Random(u64),
}

impl FromStr for BasisChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "power" => Ok(BasisChoice::Power),
            None if s == "random" => Ok(BasisChoice::Random(0)),
            Some(("random", seed)) => seed.parse().map(BasisChoice::Random).map_err(|_| "bad seed".into()),
            _ => Err("expected power, random or random:<seed>".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentChoice {
    S,
    T,
    SMultivar,
}

impl FromStr for DescentChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s" | "as" => Ok(DescentChoice::S),
            "t" | "kummer" => Ok(DescentChoice::T),
            "s-multivar" | "as-multivar" => Ok(DescentChoice::SMultivar),
            _ => Err("expected s, t or s-multivar".into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub field: Option<String>,
    pub ext: u32,
    pub poly: Option<String>,
    pub e: Option<u64>,
    pub seed: u64,
    pub samples: u32,
    pub budget: u64,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
    pub basis: BasisChoice,
    pub nvars: Option<usize>,
    pub max_ext: u32,
    pub fields: Vec<String>,
    pub exts: Vec<u32>,
    pub degrees: Vec<u32>,
    /// `None`: every divisor of `q - 1`.
    pub es: Option<Vec<u64>>,
    pub modes: Vec<Mode>,
    pub require_hypotheses: bool,
    pub qs: Vec<String>,
    pub rs: Vec<u32>,
    pub ds: Vec<u32>,
    pub kind: DescentChoice,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            field: None,
            ext: 2,
            poly: None,
            e: None,
            seed: 0,
            samples: 25,
            budget: DEFAULT_BUDGET,
            workers: None,
            out: None,
            format: Format::Json,
            timings: false,
            basis: BasisChoice::Power,
            nvars: None,
            max_ext: 4,
            fields: ["2", "3", "4", "5", "7", "8", "9"].map(String::from).to_vec(),
            exts: vec![2, 3],
            degrees: vec![1, 2, 3, 4],
            es: None,
            modes: vec![Mode::AsCurve, Mode::Kummer],
            require_hypotheses: false,
            qs: ["3", "5", "7"].map(String::from).to_vec(),
            rs: vec![1, 2],
            ds: vec![2, 3, 4],
            kind: DescentChoice::S,
        }
    }
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.to_string(),
        value: v.to_string(),
        reason: e.to_string(),
    })
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| value(key, s)).collect()
}

/// Integer list accepting `a-b` ranges, e.g. `1-4` or `2,3`.
fn int_list(key: &str, v: &str) -> Result<Vec<u32>, ConfigError> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (value(key, a.trim())?, value(key, b.trim())?);
                out.extend(a..=b);
            }
            None => out.push(value(key, part)?),
        }
    }
    Ok(out)
}

fn flag(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "" | "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError::Value {
            key: key.to_string(),
            value: v.to_string(),
            reason: "expected true or false".into(),
        }),
    }
}

impl ExperimentConfig {
    /// Settings from `pairs`, later maps overriding earlier ones.
    pub fn from_layers<'a>(layers: impl IntoIterator<Item = &'a BTreeMap<String, String>>) -> Result<Self, ConfigError> {
        let mut merged = BTreeMap::new();
        for layer in layers {
            for (k, v) in layer {
                merged.insert(k.clone(), v.clone());
            }
        }
        let mut c = Self::default();
        for (k, v) in &merged {
            let v = v.as_str();
            match k.as_str() {
                "field" => c.field = Some(v.to_string()),
                "ext" => c.ext = value(k, v)?,
                "poly" => c.poly = Some(v.to_string()),
                "e" => c.e = Some(value(k, v)?),
                "seed" => c.seed = value(k, v)?,
                "samples" => c.samples = value(k, v)?,
                "budget" => c.budget = value(k, v)?,
                "workers" => c.workers = Some(value(k, v)?),
                "out" => c.out = Some(PathBuf::from(v)),
                "format" => {
                    c.format = match v {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => {
                            return Err(ConfigError::Value {
                                key: k.clone(),
                                value: v.to_string(),
                                reason: "expected json or csv".into(),
                            })
                        }
                    }
                }
                "timings" => c.timings = flag(k, v)?,
                "basis" => c.basis = value(k, v)?,
                "nvars" => c.nvars = Some(value(k, v)?),
                "max-ext" => c.max_ext = value(k, v)?,
                "fields" => c.fields = list(k, v)?,
                "exts" => c.exts = int_list(k, v)?,
                "degrees" => c.degrees = int_list(k, v)?,
                "es" => c.es = Some(list(k, v)?),
                "modes" => c.modes = list(k, v)?,
                "require-hypotheses" => c.require_hypotheses = flag(k, v)?,
                "qs" => c.qs = list(k, v)?,
                "rs" => c.rs = int_list(k, v)?,
                "ds" => c.ds = int_list(k, v)?,
                "kind" => c.kind = value(k, v)?,
                _ => return Err(ConfigError::UnknownKey(k.clone())),
            }
        }
        if c.ext == 0 {
            return Err(ConfigError::Value {
                key: "ext".into(),
                value: "0".into(),
                reason: "extension degree must be positive".into(),
            });
        }
        Ok(c)
    }

    pub fn require_field(&self) -> Result<&str, ConfigError> {
        self.field.as_deref().ok_or(ConfigError::Missing("field"))
    }

    pub fn require_poly(&self) -> Result<&str, ConfigError> {
        self.poly.as_deref().ok_or(ConfigError::Missing("poly"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_pairs("# sweep\nfield = 3^1\next=3\nseed=7 # trailing\n\ndegrees=1-3\n").unwrap();
        let mut flags = BTreeMap::new();
        flags.insert("ext".to_string(), "2".to_string());
        let c = ExperimentConfig::from_layers([&file, &flags]).unwrap();
        assert_eq!(c.field.as_deref(), Some("3^1"));
        assert_eq!(c.ext, 2);
        assert_eq!(c.seed, 7);
        assert_eq!(c.degrees, vec![1, 2, 3]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_pairs("oops"), Err(ConfigError::Syntax { line: 1, .. })));
        let bad = parse_pairs("colour=blue").unwrap();
        assert_eq!(ExperimentConfig::from_layers([&bad]), Err(ConfigError::UnknownKey("colour".into())));
        let bad = parse_pairs("format=xml").unwrap();
        assert!(ExperimentConfig::from_layers([&bad]).is_err());
        let bad = parse_pairs("modes=as-curve,weil").unwrap();
        assert!(ExperimentConfig::from_layers([&bad]).is_err());
    }

    #[test]
    fn basis_choices() {
        assert_eq!("power".parse::<BasisChoice>(), Ok(BasisChoice::Power));
        assert_eq!("random:9".parse::<BasisChoice>(), Ok(BasisChoice::Random(9)));
        assert!("random:x".parse::<BasisChoice>().is_err());
    }
}
