//! Flat `key = value` scenario files.
//!
//! ```text
//! # reference scenario
//! p_t_dbm = -10
//! beta_db = 20
//! m1 = 4
//! m2 = 4
//! sim.trials = 100000
//! sim.seed = 7
//! ```
//!
//! Powers and the SINR threshold are logarithmic; everything else is linear
//! SI. Missing keys take their reference values, unknown keys are rejected.
//! The parsed document keeps the values as written, so [`ScenarioConfig::dump`]
//! followed by [`ScenarioConfig::parse`] reproduces the same parameters bit
//! for bit.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::montecarlo::{SimConfig, DEFAULT_RADIUS};
use crate::network::SystemParams;
use crate::units::{db_to_linear, dbm_to_watts, PowerDbm, RatioDb};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub p_t_dbm: f64,
    pub beta_db: f64,
    pub sigma2_dbm: f64,
    pub sigma_c2_dbm: f64,
    pub alpha: f64,
    pub lambda_per_m3: f64,
    pub d0_m: f64,
    pub m1: u32,
    pub m2: u32,
    pub gamma: f64,
    pub nu: f64,
    pub zeta: f64,
    pub sim: Option<SimSettings>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub trials: u64,
    pub radius_m: f64,
    pub seed: Option<u64>,
    pub confidence: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            trials: 100_000,
            radius_m: DEFAULT_RADIUS,
            seed: None,
            confidence: 0.95,
        }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            p_t_dbm: -10.0,
            beta_db: 20.0,
            sigma2_dbm: -130.0,
            sigma_c2_dbm: -30.0,
            alpha: 4.0,
            lambda_per_m3: 1e-4,
            d0_m: 3.0,
            m1: 4,
            m2: 4,
            gamma: 0.3,
            nu: 0.5,
            zeta: 1.0,
            sim: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Config(format!("line {line}: cannot parse {key} = {raw:?}")))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        let mut sim: Option<SimSettings> = None;
        let mut seen = std::collections::HashSet::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {line_no}: duplicate key {key}")));
            }

            macro_rules! set {
                ($field:expr) => {
                    $field = parse_value(key, value, line_no)?
                };
            }
            match key {
                "p_t_dbm" => set!(cfg.p_t_dbm),
                "beta_db" => set!(cfg.beta_db),
                "sigma2_dbm" => set!(cfg.sigma2_dbm),
                "sigma_c2_dbm" => set!(cfg.sigma_c2_dbm),
                "alpha" => set!(cfg.alpha),
                "lambda_per_m3" => set!(cfg.lambda_per_m3),
                "d0_m" => set!(cfg.d0_m),
                "m1" => set!(cfg.m1),
                "m2" => set!(cfg.m2),
                "gamma" => set!(cfg.gamma),
                "nu" => set!(cfg.nu),
                "zeta" => set!(cfg.zeta),
                "sim.trials" => set!(sim.get_or_insert_with(SimSettings::default).trials),
                "sim.radius_m" => set!(sim.get_or_insert_with(SimSettings::default).radius_m),
                "sim.seed" => {
                    sim.get_or_insert_with(SimSettings::default).seed =
                        Some(parse_value(key, value, line_no)?)
                }
                "sim.confidence" => set!(sim.get_or_insert_with(SimSettings::default).confidence),
                _ => return Err(Error::Config(format!("line {line_no}: unknown key {key}"))),
            }
        }
        cfg.sim = sim;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Writes every key, including defaulted ones.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("p_t_dbm", &self.p_t_dbm);
        kv("beta_db", &self.beta_db);
        kv("sigma2_dbm", &self.sigma2_dbm);
        kv("sigma_c2_dbm", &self.sigma_c2_dbm);
        kv("alpha", &self.alpha);
        kv("lambda_per_m3", &self.lambda_per_m3);
        kv("d0_m", &self.d0_m);
        kv("m1", &self.m1);
        kv("m2", &self.m2);
        kv("gamma", &self.gamma);
        kv("nu", &self.nu);
        kv("zeta", &self.zeta);
        if let Some(sim) = &self.sim {
            kv("sim.trials", &sim.trials);
            kv("sim.radius_m", &sim.radius_m);
            if let Some(seed) = sim.seed {
                kv("sim.seed", &seed);
            }
            kv("sim.confidence", &sim.confidence);
        }
        out
    }

    /// Linear-unit parameters. Not validated.
    pub fn params(&self) -> SystemParams {
        SystemParams {
            p_t: dbm_to_watts(PowerDbm(self.p_t_dbm)),
            alpha: self.alpha,
            lambda: self.lambda_per_m3,
            d0: self.d0_m,
            m1: self.m1,
            m2: self.m2,
            gamma: self.gamma,
            beta: db_to_linear(RatioDb(self.beta_db)),
            sigma2: dbm_to_watts(PowerDbm(self.sigma2_dbm)),
            sigma_c2: dbm_to_watts(PowerDbm(self.sigma_c2_dbm)),
            nu: self.nu,
            zeta: self.zeta,
        }
    }

    /// Simulation settings from the `sim.` keys (or their defaults) with the
    /// given seed fallback.
    pub fn sim_config(&self, fallback_seed: u64) -> SimConfig {
        let s = self.sim.clone().unwrap_or_default();
        SimConfig {
            confidence: s.confidence,
            ..SimConfig::new(s.trials, s.seed.unwrap_or(fallback_seed)).with_radius(s.radius_m)
        }
    }
}
