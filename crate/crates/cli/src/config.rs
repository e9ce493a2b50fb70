use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hspec_core::{RadialFunction, TransformOptions};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Which radial function the transform and check commands work on.
#[derive(Debug, Clone, PartialEq)]
pub enum InputFunction {
    Bump { support: f64 },
    TruncatedGaussian { support: f64 },
    Zero { support: f64 },
    Sampled { path: PathBuf },
}

impl InputFunction {
    pub fn build(&self) -> Result<RadialFunction, CliError> {
        let built = match self {
            InputFunction::Bump { support } => RadialFunction::bump(*support),
            InputFunction::TruncatedGaussian { support } => RadialFunction::truncated_gaussian(*support),
            InputFunction::Zero { support } => RadialFunction::zero(*support),
            InputFunction::Sampled { path } => return load_samples(path),
        };
        built.map_err(|e| CliError::Config(e.to_string()))
    }
}

impl fmt::Display for InputFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputFunction::Bump { support } => write!(f, "bump(R = {support})"),
            InputFunction::TruncatedGaussian { support } => write!(f, "gaussian(R = {support})"),
            InputFunction::Zero { support } => write!(f, "zero(R = {support})"),
            InputFunction::Sampled { path } => write!(f, "samples({})", path.display()),
        }
    }
}

/// Everything a run needs, after merging the config file with flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: u32,
    pub q: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub input: InputFunction,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Tolerance keys understood by `check` and the transforms, with defaults.
pub const TOLERANCES: [(&str, f64); 6] = [
    ("identity", 1e-10),
    ("special", 1e-9),
    ("numeric", 1e-6),
    ("transform", 1e-4),
    ("forward", 1e-13),
    ("tail", 1e-8),
];

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 4,
            q: 2.0,
            r_min: 0.0,
            r_max: 4.0,
            r_steps: 40,
            lambda_max: 20.0,
            lambda_steps: 40,
            tolerances: TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            input: InputFunction::Bump { support: 1.0 },
            format: Format::Csv,
            out: None,
        }
    }
}

/// Flat `key = value` pairs in file order.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`, got `{raw}`", index + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key or value", index + 1)));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = Self::default();
        config.apply(parse_pairs(&text)?)?;
        Ok(config)
    }

    /// Apply overrides in order; later keys win.
    pub fn apply(&mut self, pairs: impl IntoIterator<Item = (String, String)>) -> Result<(), CliError> {
        let mut function: Option<String> = None;
        let mut support: Option<f64> = None;
        let mut samples: Option<PathBuf> = None;
        for (key, value) in pairs {
            let key = key.replace('-', "_");
            match key.as_str() {
                "n" => self.n = number(&key, &value)?,
                "q" => self.q = number(&key, &value)?,
                "r_min" => self.r_min = number(&key, &value)?,
                "r_max" => self.r_max = number(&key, &value)?,
                "r_steps" => self.r_steps = number(&key, &value)?,
                "lambda_max" => self.lambda_max = number(&key, &value)?,
                "lambda_steps" => self.lambda_steps = number(&key, &value)?,
                "function" => function = Some(value),
                "support" => support = Some(number(&key, &value)?),
                "samples" => samples = Some(PathBuf::from(value)),
                "format" => self.format = value.parse()?,
                "out" => self.out = Some(PathBuf::from(value)),
                _ => match key.strip_prefix("tol.") {
                    Some(name) if TOLERANCES.iter().any(|(k, _)| *k == name) => {
                        self.tolerances.insert(name.to_string(), number(&key, &value)?);
                    }
                    _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
                },
            }
        }
        self.merge_input(function, support, samples)?;
        self.check()
    }

    fn merge_input(
        &mut self,
        function: Option<String>,
        support: Option<f64>,
        samples: Option<PathBuf>,
    ) -> Result<(), CliError> {
        let current_support = match &self.input {
            InputFunction::Bump { support } | InputFunction::TruncatedGaussian { support } | InputFunction::Zero { support } => {
                *support
            }
            InputFunction::Sampled { .. } => 1.0,
        };
        let name = match (&function, &self.input) {
            (Some(name), _) => name.as_str(),
            (None, InputFunction::Bump { .. }) => "bump",
            (None, InputFunction::TruncatedGaussian { .. }) => "gaussian",
            (None, InputFunction::Zero { .. }) => "zero",
            (None, InputFunction::Sampled { .. }) => "samples",
        };
        let support = support.unwrap_or(current_support);
        self.input = match name {
            "bump" => InputFunction::Bump { support },
            "gaussian" => InputFunction::TruncatedGaussian { support },
            "zero" => InputFunction::Zero { support },
            "samples" => match (samples, &self.input) {
                (Some(path), _) => InputFunction::Sampled { path },
                (None, InputFunction::Sampled { path }) => InputFunction::Sampled { path: path.clone() },
                (None, _) => return Err(CliError::Config("function = samples needs `samples = <path>`".into())),
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown function `{other}` (expected bump, gaussian, zero or samples)"
                )))
            }
        };
        Ok(())
    }

    /// Grids positive and ordered, tolerances positive.
    pub fn check(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.q.is_finite()) {
            return bad(format!("q must be finite, got {}", self.q));
        }
        if !(self.r_min >= 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return bad(format!("need 0 <= r_min < r_max, got [{}, {}]", self.r_min, self.r_max));
        }
        if self.r_steps == 0 || self.lambda_steps == 0 {
            return bad("grid step counts must be positive".into());
        }
        if !(self.lambda_max > 0.0 && self.lambda_max.is_finite()) {
            return bad(format!("lambda_max must be positive, got {}", self.lambda_max));
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad(format!("tolerance `{name}` must be positive, got {tol}"));
            }
        }
        if let InputFunction::Bump { support } | InputFunction::TruncatedGaussian { support } | InputFunction::Zero { support } =
            self.input
        {
            if !(support > 0.0 && support.is_finite()) {
                return bad(format!("support must be positive, got {support}"));
            }
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn transform_options(&self) -> TransformOptions {
        TransformOptions { forward_tol: self.tol("forward"), tail_tol: self.tol("tail"), ..TransformOptions::default() }
    }

    /// `r_min, ..., r_max` in `r_steps` equal intervals.
    pub fn radii(&self) -> Vec<f64> {
        let h = (self.r_max - self.r_min) / self.r_steps as f64;
        (0..=self.r_steps).map(|k| self.r_min + h * k as f64).collect()
    }

    /// `0, ..., lambda_max` in `lambda_steps` equal intervals.
    pub fn lambdas(&self) -> Vec<f64> {
        let h = self.lambda_max / self.lambda_steps as f64;
        (0..=self.lambda_steps).map(|k| h * k as f64).collect()
    }

    /// `-r_max, ..., r_max` with twice the radial resolution.
    pub fn abel_points(&self) -> Vec<f64> {
        let half = self.r_steps as f64;
        // built from signed integers so the grid is exactly symmetric
        (0..=2 * self.r_steps).map(|k| self.r_max * (k as f64 - half) / half).collect()
    }
}

/// Read `r, value` rows on a uniform grid starting at zero.
fn load_samples(path: &Path) -> Result<RadialFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read samples {}: {e}", path.display())))?;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<(f64, f64)> = match fields.as_slice() {
            [r, v] => r.parse().ok().zip(v.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((r, v)) => {
                radii.push(r);
                values.push(v);
            }
            // a header row is allowed before the data
            None if radii.is_empty() && index == 0 => continue,
            None => return Err(CliError::Config(format!("{}:{}: expected `r, value`", path.display(), index + 1))),
        }
    }
    if radii.len() < 2 || radii[0] != 0.0 {
        return Err(CliError::Config("samples must start at r = 0 and hold at least two rows".into()));
    }
    let step = radii[1] - radii[0];
    for (k, &r) in radii.iter().enumerate() {
        if (r - step * k as f64).abs() > 1e-9 * step.max(r) {
            return Err(CliError::Config(format!("samples are not uniformly spaced at row {}", k + 1)));
        }
    }
    RadialFunction::sampled(values, step).map_err(|e| CliError::Config(e.to_string()))
}
