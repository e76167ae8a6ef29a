//! Run configuration: built-in defaults, then a `key = value` file, then
//! the environment, then command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use binbound::PrecisionPolicy;

pub const ENV_PRECISION_CAP: &str = "BINENV_PRECISION_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "human" => Ok(Format::Human),
            _ => Err(format!("unknown format `{s}` (expected csv, json or human)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Human => "human",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_start: u32,
    pub precision_cap: u32,
    /// `None`: one worker per available core.
    pub workers: Option<usize>,
    /// `None`: the subcommand's own default.
    pub format: Option<Format>,
    pub seed: u64,
    /// Run the hardware-precision pass before the dyadic schedule.
    pub fast_path: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PrecisionPolicy::default();
        RunConfig {
            precision_start: p.start,
            precision_cap: p.cap,
            workers: None,
            format: None,
            seed: 0,
            fast_path: p.fast_path,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layer alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision_start: Option<u32>,
    pub precision_cap: Option<u32>,
    pub workers: Option<usize>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub fast_path: Option<bool>,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("invalid value `{v}` for `{key}`"))
}

impl RunConfig {
    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "precision_start" => self.precision_start = parse_num(k, v)?,
                "precision_cap" => self.precision_cap = parse_num(k, v)?,
                "workers" => self.workers = Some(parse_num(k, v)?),
                "format" | "output_format" => self.format = Some(v.parse()?),
                "seed" => self.seed = parse_num(k, v)?,
                "fast_path" => self.fast_path = parse_num(k, v)?,
                _ => return Err(format!("config line {}: unknown key `{k}`", i + 1)),
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        self.apply_file_text(&text)
    }

    pub fn apply_env(&mut self, cap: Option<&str>) -> Result<(), String> {
        if let Some(v) = cap {
            self.precision_cap = parse_num(ENV_PRECISION_CAP, v)?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.precision_start {
            self.precision_start = v;
        }
        if let Some(v) = o.precision_cap {
            self.precision_cap = v;
        }
        if o.workers.is_some() {
            self.workers = o.workers;
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.fast_path {
            self.fast_path = v;
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.precision_start < 2 {
            return Err(format!(
                "precision_start must be at least 2, got {}",
                self.precision_start
            ));
        }
        if self.precision_start > self.precision_cap {
            return Err(format!(
                "precision_start ({}) exceeds precision_cap ({})",
                self.precision_start, self.precision_cap
            ));
        }
        if self.workers == Some(0) {
            return Err("workers must be positive".into());
        }
        Ok(())
    }

    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy {
            fast_path: self.fast_path,
            ..PrecisionPolicy::new(self.precision_start, self.precision_cap)
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let mut c = RunConfig::default();
        c.apply_file_text("precision_cap = 512\n# comment\nseed=9\nformat = json\nfast_path = false\n")
            .unwrap();
        assert!(!c.fast_path && !c.policy().fast_path);
        assert_eq!((c.precision_cap, c.seed, c.format), (512, 9, Some(Format::Json)));
        c.apply_env(Some("256")).unwrap();
        assert_eq!(c.precision_cap, 256);
        c.apply_overrides(&Overrides {
            precision_cap: Some(1024),
            ..Default::default()
        });
        assert_eq!((c.precision_cap, c.seed), (1024, 9));
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_file_text("nonsense").is_err());
        assert!(c.apply_file_text("colour = red").is_err());
        assert!(c.apply_file_text("seed = x").is_err());
        assert!(c.apply_env(Some("lots")).is_err());
        c.precision_start = 128;
        c.precision_cap = 64;
        assert!(c.validate().is_err());
    }
}
