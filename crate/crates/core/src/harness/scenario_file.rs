//! TOML scenario files.
//!
//! ```toml
//! [detector]
//! preset = "oai"      # or "srsran", or explicit alpha/beta/gamma
//! beta = 0.24
//! delta = 12.0
//! # p_th_init defaults to noise.level
//!
//! [attacker]
//! enabled = true
//! period = 1
//! power = 51.0
//! early_start = 0
//!
//! [ue]
//! power = 56.4
//! first_attempt_ro = 0
//! max_attempts = 1
//! ramp_step = 0.0
//!
//! [noise]
//! level = 17.4
//!
//! [sim]
//! horizon = 64
//! ue_contributes_to_measurement = false
//! ```
//!
//! An optional `[meta]` table carries `name` and the PRACH configuration
//! indices (`gnb_prach_config_index`, `attacker_prach_config_index`,
//! `ue_prach_config_index`); they are recorded but never simulated.
//! Unknown keys anywhere are rejected.

use std::fmt;
use std::path::Path;

use toml::{Table, Value};

use crate::model::{AttackerConfig, DetectorConfig, DetectorPreset, PowerMetric, UpdateWeights};
use crate::sim::{Scenario, ScenarioMetadata, SimError, UeConfig, DEFAULT_HORIZON};

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioFileError {
    Io {
        path: String,
        message: String,
    },
    Syntax(String),
    /// A specific key is unknown, missing, mistyped or out of range.
    Key {
        key: String,
        message: String,
    },
    Invalid(Vec<String>),
}

impl fmt::Display for ScenarioFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioFileError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            ScenarioFileError::Syntax(m) => write!(f, "scenario syntax error: {m}"),
            ScenarioFileError::Key { key, message } => write!(f, "`{key}`: {message}"),
            ScenarioFileError::Invalid(v) => write!(f, "invalid scenario: {}", v.join("; ")),
        }
    }
}

impl std::error::Error for ScenarioFileError {}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "meta",
        &[
            "name",
            "gnb_prach_config_index",
            "attacker_prach_config_index",
            "ue_prach_config_index",
        ],
    ),
    (
        "detector",
        &["preset", "alpha", "beta", "gamma", "delta", "p_th_init"],
    ),
    ("attacker", &["enabled", "period", "power", "early_start"]),
    (
        "ue",
        &[
            "power",
            "first_attempt_ro",
            "max_attempts",
            "ramp_step",
            "attempt_period",
        ],
    ),
    ("noise", &["level"]),
    ("sim", &["horizon", "ue_contributes_to_measurement"]),
];

fn key_err(key: impl Into<String>, message: impl Into<String>) -> ScenarioFileError {
    ScenarioFileError::Key {
        key: key.into(),
        message: message.into(),
    }
}

struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
}

impl<'a> Section<'a> {
    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn has(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ScenarioFileError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(v)) if v.is_finite() => Ok(Some(*v)),
            Some(Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(_) => Err(key_err(self.path(key), "expected a finite number")),
        }
    }

    fn required_number(&self, key: &str) -> Result<f64, ScenarioFileError> {
        self.number(key)?
            .ok_or_else(|| key_err(self.path(key), "missing required key"))
    }

    fn power(&self, key: &str) -> Result<Option<PowerMetric>, ScenarioFileError> {
        Ok(self
            .number(key)?
            .map(|v| PowerMetric::new(v).expect("finite checked")))
    }

    fn required_power(&self, key: &str) -> Result<PowerMetric, ScenarioFileError> {
        self.power(key)?
            .ok_or_else(|| key_err(self.path(key), "missing required key"))
    }

    fn count(&self, key: &str, default: u32) -> Result<u32, ScenarioFileError> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(v)) => u32::try_from(*v)
                .map_err(|_| key_err(self.path(key), "expected a non-negative integer")),
            Some(_) => Err(key_err(self.path(key), "expected a non-negative integer")),
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, ScenarioFileError> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(key_err(self.path(key), "expected true or false")),
        }
    }

    fn string(&self, key: &str) -> Result<Option<&'a str>, ScenarioFileError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(key_err(self.path(key), "expected a string")),
        }
    }

    fn indices(&self, key: &str) -> Result<Vec<u32>, ScenarioFileError> {
        let bad = || key_err(self.path(key), "expected an integer or a list of integers");
        let one = |v: &Value| {
            v.as_integer()
                .and_then(|i| u32::try_from(i).ok())
                .ok_or_else(bad)
        };
        match self.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(items)) => items.iter().map(one).collect(),
            Some(v) => Ok(vec![one(v)?]),
        }
    }
}

fn check_keys(doc: &Table) -> Result<(), ScenarioFileError> {
    for (name, value) in doc {
        let Some((_, allowed)) = SECTIONS.iter().find(|(s, _)| s == name) else {
            return Err(key_err(name.as_str(), "unknown key"));
        };
        let Value::Table(table) = value else {
            return Err(key_err(name.as_str(), "expected a table"));
        };
        if let Some(unknown) = table.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(key_err(format!("{name}.{unknown}"), "unknown key"));
        }
    }
    Ok(())
}

fn section<'a>(doc: &'a Table, name: &'static str) -> Section<'a> {
    Section {
        name,
        table: doc.get(name).and_then(Value::as_table),
    }
}

fn require(s: &Section<'_>) -> Result<(), ScenarioFileError> {
    if s.table.is_none() {
        return Err(key_err(s.name, "missing required section"));
    }
    Ok(())
}

fn parse_weights(det: &Section<'_>) -> Result<UpdateWeights, ScenarioFileError> {
    let Some(preset) = det.string("preset")? else {
        return Ok(UpdateWeights {
            alpha: det.required_number("alpha")?,
            beta: det.required_number("beta")?,
            gamma: det.required_number("gamma")?,
        });
    };
    let exclusive = |keys: &[&str]| -> Result<(), ScenarioFileError> {
        match keys.iter().find(|k| det.has(k)) {
            Some(k) => Err(key_err(
                det.path(k),
                format!("cannot be combined with detector.preset = \"{preset}\""),
            )),
            None => Ok(()),
        }
    };
    let parsed = if preset.trim().eq_ignore_ascii_case("oai") {
        exclusive(&["alpha", "gamma"])?;
        DetectorPreset::Oai {
            beta: det.required_number("beta")?,
        }
    } else {
        let parsed = preset
            .parse::<DetectorPreset>()
            .map_err(|e| key_err(det.path("preset"), e.to_string()))?;
        exclusive(&["alpha", "beta", "gamma"])?;
        parsed
    };
    parsed
        .weights()
        .map_err(|e| key_err(det.path("beta"), e.to_string()))
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioFileError> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ScenarioFileError::Syntax(e.message().to_string()))?;
    check_keys(&doc)?;

    let meta_s = section(&doc, "meta");
    let det = section(&doc, "detector");
    let att = section(&doc, "attacker");
    let ue_s = section(&doc, "ue");
    let noise = section(&doc, "noise");
    let sim = section(&doc, "sim");
    for s in [&det, &ue_s, &noise] {
        require(s)?;
    }

    let p_noise = noise.required_power("level")?;
    let weights = parse_weights(&det)?;
    let detector = DetectorConfig::new(
        weights,
        det.required_power("delta")?,
        det.power("p_th_init")?.unwrap_or(p_noise),
    );

    let attacker = if att.table.is_some() {
        AttackerConfig {
            period: att.count("period", 1)?,
            power: att.required_power("power")?,
            early_start: att.count("early_start", 0)?,
            enabled: att.flag("enabled", true)?,
        }
    } else {
        AttackerConfig::disabled(p_noise)
    };

    let ue = UeConfig {
        power: ue_s.required_power("power")?,
        first_attempt_ro: ue_s.count("first_attempt_ro", 0)?,
        max_attempts: ue_s.count("max_attempts", 1)?,
        ramp_step: ue_s.power("ramp_step")?.unwrap_or(PowerMetric::ZERO),
        attempt_period: ue_s.count("attempt_period", 1)?,
    };

    let meta = ScenarioMetadata {
        name: meta_s.string("name")?.map(str::to_string),
        gnb_prach_config_index: meta_s.indices("gnb_prach_config_index")?,
        attacker_prach_config_index: meta_s.indices("attacker_prach_config_index")?,
        ue_prach_config_index: meta_s.indices("ue_prach_config_index")?,
    };

    let scenario = Scenario {
        detector,
        attacker,
        ue,
        p_noise,
        horizon: sim.count("horizon", DEFAULT_HORIZON)?,
        ue_contributes_to_measurement: sim.flag("ue_contributes_to_measurement", false)?,
        meta,
    };
    match scenario.validate() {
        Ok(_) => Ok(scenario),
        Err(SimError::Invalid(v)) => Err(ScenarioFileError::Invalid(v)),
        Err(e) => Err(ScenarioFileError::Invalid(vec![e.to_string()])),
    }
}

pub fn read_scenario(path: &Path) -> Result<Scenario, ScenarioFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenario(&text)
}
