use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Result as TcsResult;
use crate::params::OscParams;
use crate::verify::{StateSpec, TOLERANCE_KEYS};

/// A configuration problem; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(UsageError(format!(
                "unknown format `{other}` (expected csv or json-lines)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        })
    }
}

/// `fock:N` or `coherent:RE,IM`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateArg {
    Fock(usize),
    Coherent(f64, f64),
}

impl StateArg {
    pub fn spec(self) -> StateSpec {
        match self {
            StateArg::Fock(n) => StateSpec::Fock(n),
            StateArg::Coherent(re, im) => StateSpec::Coherent(Complex64::new(re, im)),
        }
    }
}

impl FromStr for StateArg {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        let bad = || {
            UsageError(format!(
                "invalid state `{s}` (expected fock:N or coherent:RE,IM)"
            ))
        };
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "fock" => rest.trim().parse().map(StateArg::Fock).map_err(|_| bad()),
            "coherent" => {
                let (re, im) = rest.split_once(',').ok_or_else(bad)?;
                Ok(StateArg::Coherent(
                    parse_f64("state", re)?,
                    parse_f64("state", im)?,
                ))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StateArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateArg::Fock(n) => write!(f, "fock:{n}"),
            StateArg::Coherent(re, im) => write!(f, "coherent:{},{}", num(*re), num(*im)),
        }
    }
}

/// 17 significant digits; parses back to the same double.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(key: &str, v: &str) -> Result<f64, UsageError> {
    v.trim()
        .parse()
        .map_err(|_| UsageError(format!("`{key}` expects a number (got `{}`)", v.trim())))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, UsageError> {
    v.trim().parse().map_err(|_| {
        UsageError(format!(
            "`{key}` expects a non-negative integer (got `{}`)",
            v.trim()
        ))
    })
}

fn parse_bool(key: &str, v: &str) -> Result<bool, UsageError> {
    v.trim().parse().map_err(|_| {
        UsageError(format!(
            "`{key}` expects true or false (got `{}`)",
            v.trim()
        ))
    })
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub hbar: f64,
    pub b_re: f64,
    pub b_im: f64,
    pub x0: f64,
    pub p0: f64,
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
    /// `None`: twelve envelope widths around the packet.
    pub grid_halfwidth: Option<f64>,
    pub grid_n: usize,
    pub state: StateArg,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub solve_mu: Option<f64>,
    pub tol: BTreeMap<String, f64>,
    pub corrupt_branch: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            m: 1.0,
            gamma: 0.0,
            omega0: 1.0,
            hbar: 1.0,
            b_re: 0.0,
            b_im: 1.0,
            x0: 1.0,
            p0: 0.5,
            t0: 0.0,
            t1: 10.0,
            nt: 101,
            grid_halfwidth: None,
            grid_n: 1024,
            state: StateArg::Fock(0),
            format: Format::Csv,
            out: None,
            solve_mu: None,
            tol: BTreeMap::new(),
            corrupt_branch: false,
        }
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        let key = key.trim();
        match key {
            "m" => self.m = parse_f64(key, value)?,
            "gamma" => self.gamma = parse_f64(key, value)?,
            "omega0" => self.omega0 = parse_f64(key, value)?,
            "hbar" => self.hbar = parse_f64(key, value)?,
            "b-re" => self.b_re = parse_f64(key, value)?,
            "b-im" => self.b_im = parse_f64(key, value)?,
            "x0" => self.x0 = parse_f64(key, value)?,
            "p0" => self.p0 = parse_f64(key, value)?,
            "t0" => self.t0 = parse_f64(key, value)?,
            "t1" => self.t1 = parse_f64(key, value)?,
            "nt" => self.nt = parse_usize(key, value)?,
            "grid-halfwidth" => self.grid_halfwidth = Some(parse_f64(key, value)?),
            "grid-n" => self.grid_n = parse_usize(key, value)?,
            "state" => self.state = value.trim().parse()?,
            "format" => self.format = value.trim().parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "solve-mu" => self.solve_mu = Some(parse_f64(key, value)?),
            "tol" => {
                let (name, v) = parse_tol(value)?;
                self.tol.insert(name, v);
            }
            "corrupt-branch" => self.corrupt_branch = parse_bool(key, value)?,
            _ => return Err(UsageError(format!("unknown setting `{key}`"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of a config file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), UsageError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                UsageError(format!("config line {}: expected `key = value`", i + 1))
            })?;
            self.set(key, value)
                .map_err(|e| UsageError(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn parse_text(text: &str) -> Result<Self, UsageError> {
        let mut config = RunConfig::default();
        config.apply_text(text)?;
        Ok(config)
    }

    /// Every setting as `key = value` lines; [`parse_text`](Self::parse_text)
    /// reads it back to an identical config.
    pub fn to_text(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// The one-line parameter echo used in output headers.
    pub fn header(&self, command: &str) -> String {
        let fields: Vec<String> = self
            .pairs()
            .into_iter()
            .filter(|(k, _)| *k != "out")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("# tcs {command} {}", fields.join(" "))
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("m", num(self.m)),
            ("gamma", num(self.gamma)),
            ("omega0", num(self.omega0)),
            ("hbar", num(self.hbar)),
            ("b-re", num(self.b_re)),
            ("b-im", num(self.b_im)),
            ("x0", num(self.x0)),
            ("p0", num(self.p0)),
            ("t0", num(self.t0)),
            ("t1", num(self.t1)),
            ("nt", self.nt.to_string()),
        ];
        if let Some(h) = self.grid_halfwidth {
            v.push(("grid-halfwidth", num(h)));
        }
        v.push(("grid-n", self.grid_n.to_string()));
        v.push(("state", self.state.to_string()));
        v.push(("format", self.format.to_string()));
        if let Some(out) = &self.out {
            v.push(("out", out.display().to_string()));
        }
        if let Some(t) = self.solve_mu {
            v.push(("solve-mu", num(t)));
        }
        for (name, value) in &self.tol {
            v.push(("tol", format!("{name}={}", num(*value))));
        }
        v.push(("corrupt-branch", self.corrupt_branch.to_string()));
        v
    }

    /// Checks the invariants shared by every command.
    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.t1 >= self.t0) {
            return Err(UsageError(format!(
                "t1 ({}) must not be below t0 ({})",
                self.t1, self.t0
            )));
        }
        if self.nt < 1 {
            return Err(UsageError("nt must be at least 1".into()));
        }
        if self.grid_n < 2 {
            return Err(UsageError("grid-n must be at least 2".into()));
        }
        if let Some(h) = self.grid_halfwidth {
            if !(h > 0.0) {
                return Err(UsageError(format!(
                    "grid-halfwidth must be positive (got {h})"
                )));
            }
        }
        self.params().map_err(|e| UsageError(e.to_string()))?;
        Ok(())
    }

    pub fn params(&self) -> TcsResult<OscParams> {
        OscParams::new(
            self.m,
            self.gamma,
            self.omega0,
            self.hbar,
            Complex64::new(self.b_re, self.b_im),
            self.x0,
            self.p0,
        )
    }

    /// `nt` evenly spaced times on `[t0, t1]`.
    pub fn times(&self) -> Vec<f64> {
        if self.nt == 1 {
            return vec![self.t0];
        }
        (0..self.nt)
            .map(|k| self.t0 + (self.t1 - self.t0) * k as f64 / (self.nt - 1) as f64)
            .collect()
    }
}

/// `NAME=VAL` with NAME one of the known check keys.
pub fn parse_tol(s: &str) -> Result<(String, f64), UsageError> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| UsageError(format!("tolerance `{s}` must look like NAME=VAL")))?;
    let name = name.trim();
    if !TOLERANCE_KEYS.contains(&name) {
        return Err(UsageError(format!(
            "unknown tolerance `{name}` (known: {})",
            TOLERANCE_KEYS.join(", ")
        )));
    }
    let v = parse_f64(name, value)?;
    if !(v >= 0.0) {
        return Err(UsageError(format!(
            "tolerance `{name}` must be non-negative"
        )));
    }
    Ok((name.to_string(), v))
}
