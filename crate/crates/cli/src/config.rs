//! Flat, line-oriented `key = value` scenario files. One scenario per file,
//! an optional `[section]` header line, `#` comments, no nesting. Every key
//! must be known and single-valued so typos surface as errors with the line
//! number attached.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use sta_thermo_core::frontier::SweepParam;
use sta_thermo_core::states::StateFamilyTag;

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        message: message.into(),
    })
}

/// Raw parsed file: key -> (value, line number).
#[derive(Debug)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl RawConfig {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue; // section header, informational only
            }
            let Some(eq) = line.find('=') else {
                return err(format!(
                    "line {line_no}: expected 'key = value', found '{line}'"
                ));
            };
            let key = line[..eq].trim().to_ascii_lowercase();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                return err(format!("line {line_no}: empty key"));
            }
            if let Some((_, first_line)) = entries.get(&key) {
                return err(format!(
                    "line {line_no}: duplicate key '{key}' (first set on line {first_line})"
                ));
            }
            entries.insert(key, (value, line_no));
        }
        Ok(Self {
            entries,
            consumed: std::cell::RefCell::new(Vec::new()),
        })
    }

    pub fn parse_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse_str(&text)
    }

    fn raw(&self, key: &str) -> Option<&(String, usize)> {
        let found = self.entries.get(key);
        if found.is_some() {
            self.consumed.borrow_mut().push(key.to_string());
        }
        found
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        self.raw(key).map(|(v, _)| v.clone())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<f64>().map(Some).or_else(|_| {
                err(format!("line {line}: key '{key}': '{v}' is not a number"))
            }),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<u64>().map(Some).or_else(|_| {
                err(format!(
                    "line {line}: key '{key}': '{v}' is not a nonnegative integer"
                ))
            }),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        Ok(self.get_u64(key)?.map(|v| v as usize))
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => match v.as_str() {
                "true" | "yes" | "on" => Ok(Some(true)),
                "false" | "no" | "off" => Ok(Some(false)),
                other => err(format!(
                    "line {line}: key '{key}': '{other}' is not a boolean"
                )),
            },
        }
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|tok| tok.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map(Some)
                .or_else(|_| {
                    err(format!(
                        "line {line}: key '{key}': expected a comma-separated number list"
                    ))
                }),
        }
    }

    /// Any keys never consumed by the scenario builder are typos.
    pub fn check_fully_consumed(&self) -> Result<(), ConfigError> {
        let consumed = self.consumed.borrow();
        for (key, (_, line)) in &self.entries {
            if !consumed.iter().any(|k| k == key) {
                return err(format!("line {line}: unknown key '{key}'"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelId {
    SingleQubit,
    TwoQubit,
}

impl ModelId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SingleQubit => "single_qubit",
            Self::TwoQubit => "two_qubit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TqdMode {
    On,
    Off,
    Both,
}

impl TqdMode {
    pub fn flags(self) -> Vec<bool> {
        match self {
            Self::On => vec![true],
            Self::Off => vec![false],
            Self::Both => vec![true, false],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierChoice {
    Diagonal,
    Pure,
    Both,
}

/// A fully resolved scenario: model parameters plus command inputs, with CLI
/// flags already folded in.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: ModelId,
    pub tau: f64,
    pub beta: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub alpha: f64,
    pub beta_aniso: f64,
    pub gamma: f64,
    pub seed: Option<u64>,
    pub steps: usize,
    pub grid: usize,
    pub plot: bool,
    pub tau_list: Vec<f64>,
    pub with_tqd: TqdMode,
    pub families: Vec<StateFamilyTag>,
    pub count: usize,
    pub frontier_family: FrontierChoice,
    pub n_points: usize,
    pub sweep_param: Option<SweepParam>,
    pub sweep_values: Option<Vec<f64>>,
}

/// CLI flags that override scenario-file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,
}

impl Scenario {
    pub fn from_raw(raw: &RawConfig, overrides: &Overrides) -> Result<Self, ConfigError> {
        let model = match raw.get_str("model").as_deref() {
            Some("single_qubit") => ModelId::SingleQubit,
            Some("two_qubit") => ModelId::TwoQubit,
            Some(other) => {
                return err(format!(
                    "key 'model': expected single_qubit or two_qubit, got '{other}'"
                ))
            }
            None => return err("missing required key 'model'"),
        };
        let tau = raw.get_f64("tau")?.unwrap_or(1.0);
        if !(tau > 0.0) {
            return err(format!("key 'tau': must be positive, got {tau}"));
        }
        let beta = raw.get_f64("beta")?.unwrap_or(1.0);
        if !(beta > 0.0) {
            return err(format!("key 'beta': must be positive, got {beta}"));
        }
        let eps1 = raw.get_f64("eps1")?.unwrap_or(1.0);
        let eps2 = raw.get_f64("eps2")?.unwrap_or(1.0);
        let alpha = raw.get_f64("alpha")?.unwrap_or(1.0);
        let beta_aniso = raw.get_f64("beta_aniso")?.unwrap_or(1.0);
        let gamma = raw.get_f64("gamma")?.unwrap_or(0.0);

        let seed = overrides.seed.or(raw.get_u64("seed")?);
        let steps = overrides.steps.or(raw.get_usize("steps")?).unwrap_or(5000);
        let grid = overrides.grid.or(raw.get_usize("grid")?).unwrap_or(2001);
        if grid < 3 || grid.is_multiple_of(2) {
            return err(format!("key 'grid': must be odd and at least 3, got {grid}"));
        }
        let plot = raw.get_bool("plot")?.unwrap_or(false);

        let tau_list = raw
            .get_f64_list("tau_list")?
            .unwrap_or_else(|| vec![0.01, 0.1, 1.0, 10.0]);
        if tau_list.iter().any(|&t| !(t > 0.0)) {
            return err("key 'tau_list': all durations must be positive");
        }
        let with_tqd = match raw.get_str("with_tqd").as_deref() {
            None | Some("both") => TqdMode::Both,
            Some("true") | Some("on") => TqdMode::On,
            Some("false") | Some("off") => TqdMode::Off,
            Some(other) => {
                return err(format!(
                    "key 'with_tqd': expected true, false or both, got '{other}'"
                ))
            }
        };

        let families = match raw.get_str("families") {
            None => vec![StateFamilyTag::HaarPure, StateFamilyTag::RandomMixed],
            Some(spec) => spec
                .split(',')
                .map(|tok| tok.trim().parse::<StateFamilyTag>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ConfigError {
                    message: format!("key 'families': {e}"),
                })?,
        };
        let count = raw.get_usize("count")?.unwrap_or(1000);
        if count < 1 {
            return err("key 'count': must be at least 1");
        }

        let frontier_family = match raw.get_str("family").as_deref() {
            None | Some("both") => FrontierChoice::Both,
            Some("diagonal") => FrontierChoice::Diagonal,
            Some("pure") => FrontierChoice::Pure,
            Some(other) => {
                return err(format!(
                    "key 'family': expected diagonal, pure or both, got '{other}'"
                ))
            }
        };
        let n_points = raw.get_usize("n_points")?.unwrap_or(101);
        if n_points < 2 {
            return err("key 'n_points': must be at least 2");
        }

        let sweep_param = match raw.get_str("param").as_deref() {
            None => None,
            Some(p) => Some(p.parse::<SweepParam>().map_err(|e| ConfigError {
                message: format!("key 'param': {e}"),
            })?),
        };
        let sweep_values = match raw.get_f64_list("param_values")? {
            Some(values) => Some(values),
            None => {
                let lo = raw.get_f64("param_min")?;
                let hi = raw.get_f64("param_max")?;
                let n = raw.get_usize("param_count")?;
                match (lo, hi, n) {
                    (None, None, None) => None,
                    (Some(lo), Some(hi), Some(n)) => {
                        if n < 2 || !(hi > lo) {
                            return err(
                                "param_min/param_max/param_count: need param_max > param_min and param_count >= 2",
                            );
                        }
                        Some(
                            (0..n)
                                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                                .collect(),
                        )
                    }
                    _ => {
                        return err(
                            "param_min, param_max and param_count must be given together",
                        )
                    }
                }
            }
        };

        raw.check_fully_consumed()?;

        Ok(Self {
            model,
            tau,
            beta,
            eps1,
            eps2,
            alpha,
            beta_aniso,
            gamma,
            seed,
            steps,
            grid,
            plot,
            tau_list,
            with_tqd,
            families,
            count,
            frontier_family,
            n_points,
            sweep_param,
            sweep_values,
        })
    }
}
