//! Run parameters: a flat `key=value` file plus flag overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use ltphi_core::arith::is_prime;
use ltphi_core::fields::{make_field, FieldDesc};
use ltphi_core::localnum::{LocalInt, LocalRing, LocalRingDesc};
use ltphi_core::ltgroup::{multiplicative_series, standard_series, LTData};
use ltphi_core::ring::Ring;
use ltphi_core::series::{TruncSeries, UNBOUNDED};

use crate::error::{CliError, Result};

/// Largest residue field `k_K` accepted.
pub const MAX_RESIDUE: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FChoice {
    /// `πX + X^q`.
    Standard,
    /// `(1 + X)^p - 1`; needs `r = 1`.
    Multiplicative,
    /// Integer coefficients of `X, X^2, ...`.
    Explicit(Vec<i64>),
}

impl fmt::Display for FChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FChoice::Standard => write!(f, "standard"),
            FChoice::Multiplicative => write!(f, "multiplicative"),
            FChoice::Explicit(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FChoice {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "standard" => Ok(FChoice::Standard),
            "multiplicative" => Ok(FChoice::Multiplicative),
            other => {
                let coeffs = other
                    .split(',')
                    .map(|t| t.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| CliError::Parse(format!("bad Frobenius series '{other}'")))?;
                if coeffs.is_empty() || coeffs.iter().all(|&c| c == 0) {
                    return Err(CliError::Parse(format!("bad Frobenius series '{other}'")));
                }
                Ok(FChoice::Explicit(coeffs))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u64,
    pub r: u32,
    pub s: u32,
    pub f: FChoice,
    pub n: u32,
    pub m: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { p: 3, r: 1, s: 1, f: FChoice::Standard, n: 8, m: 6, seed: 0 }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} r={} s={} f={} N={} M={} seed={}",
            self.p, self.r, self.s, self.f, self.n, self.m, self.seed
        )
    }
}

/// Raw `key=value` pairs; later insertions win.
#[derive(Clone, Debug, Default)]
pub struct Settings(BTreeMap<String, String>);

const KEYS: [&str; 7] = ["p", "r", "s", "f", "N", "M", "seed"];

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Settings::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
            out.set(k.trim(), v.trim())?;
        }
        Ok(out)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Parse(format!("unknown config key '{key}'")));
        }
        self.0.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| CliError::Parse(format!("bad value for {key}: '{v}'")))
        }
        for (k, v) in &self.0 {
            match k.as_str() {
                "p" => cfg.p = num(k, v)?,
                "r" => cfg.r = num(k, v)?,
                "s" => cfg.s = num(k, v)?,
                "f" => cfg.f = FChoice::parse(v)?,
                "N" => cfg.n = num(k, v)?,
                "M" => cfg.m = num(k, v)?,
                "seed" => cfg.seed = num(k, v)?,
                _ => unreachable!("keys checked on insertion"),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(CliError::Usage(format!("p={} is not prime", self.p)));
        }
        if self.r == 0 || self.s == 0 {
            return Err(CliError::Usage("r and s must be at least 1".into()));
        }
        if self.residue_order().map_or(true, |q| q > MAX_RESIDUE) {
            return Err(CliError::Usage(format!("residue field p^(rs) exceeds {MAX_RESIDUE}")));
        }
        if !(2..=64).contains(&self.n) {
            return Err(CliError::Usage("N must lie in 2..=64".into()));
        }
        if !(1..=32).contains(&self.m) {
            return Err(CliError::Usage("M must lie in 1..=32".into()));
        }
        if self.f == FChoice::Multiplicative && self.r != 1 {
            return Err(CliError::Usage("the multiplicative series needs r=1".into()));
        }
        Ok(())
    }

    /// `|k_K| = p^(rs)`.
    pub fn residue_order(&self) -> Option<u64> {
        self.p.checked_pow(self.r.checked_mul(self.s)?)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }
}

/// The rings and Lubin-Tate data a configuration determines:
/// `F` unramified of degree `r` over `Q_p` with `π = p`, `K` unramified of
/// degree `s` over `F` with `ϖ = p`.
#[derive(Clone, Debug)]
pub struct Context {
    pub cfg: RunConfig,
    pub base: LocalRing,
    pub top: LocalRing,
    pub k_f: Arc<FieldDesc>,
    pub k_k: Arc<FieldDesc>,
    pub lt: LTData,
}

impl Context {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let k_f = make_field(cfg.p, cfg.r)?;
        let k_k = make_field(cfg.p, cfg.r * cfg.s)?;
        let base = LocalRing(LocalRingDesc::unramified(&k_f, cfg.m)?);
        let top = LocalRing(LocalRingDesc::unramified(&k_k, cfg.m)?);
        let f = frobenius_series(cfg, &base)?;
        let lt = LTData::new(&f, cfg.n)?;
        Ok(Context { cfg: cfg.clone(), base, top, k_f, k_k, lt })
    }

    pub fn pi(&self) -> LocalInt {
        self.lt.uniformizer().clone()
    }

    /// `|k_K|`-power Frobenius exponent over `F_p`.
    pub fn e(&self) -> u32 {
        self.cfg.r * self.cfg.s
    }

    /// Lubin-Tate data for the `ϖ`-tower over `O_K`: the standard series.
    pub fn varpi_lt(&self) -> Result<LTData> {
        let q = self.k_k.order().expect("residue field bounded");
        let varpi = self.top.from_i64(self.cfg.p as i64);
        Ok(LTData::new(&standard_series(&self.top, &varpi, q), self.cfg.n)?)
    }
}

pub fn frobenius_series(cfg: &RunConfig, ring: &LocalRing) -> Result<TruncSeries<LocalRing>> {
    Ok(match &cfg.f {
        FChoice::Standard => standard_series(ring, &ring.from_i64(cfg.p as i64), cfg.q()),
        FChoice::Multiplicative => multiplicative_series(ring),
        FChoice::Explicit(c) => TruncSeries::from_terms(
            ring,
            c.iter().enumerate().map(|(i, &v)| (i as i64 + 1, ring.from_i64(v))),
            UNBOUNDED,
        ),
    })
}
