//! Flat `key = value` scenario files.
//!
//! Lines are `key = value`; `#` starts a comment. Numbers may be written
//! as a ratio `a/b` so that spacings like `0.95/310.5` stay exact in intent.
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{KickError, Result};
use crate::states::EdgeProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SingleSlitLocalized,
    SingleSlitDelocalized,
    WhichWay,
    WhichWayViolated,
    ZAxis,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::SingleSlitLocalized,
        Experiment::SingleSlitDelocalized,
        Experiment::WhichWay,
        Experiment::WhichWayViolated,
        Experiment::ZAxis,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::SingleSlitLocalized => "single-slit-localized",
            Experiment::SingleSlitDelocalized => "single-slit-delocalized",
            Experiment::WhichWay => "which-way",
            Experiment::WhichWayViolated => "which-way-violated",
            Experiment::ZAxis => "z-axis",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = KickError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| KickError::InvalidConfig(format!("unknown experiment `{s}`")))
    }
}

/// Shape of the double-slit packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Gaussian,
    TopHat,
}

impl FromStr for ShapeKind {
    type Err = KickError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(ShapeKind::Gaussian),
            "top-hat" => Ok(ShapeKind::TopHat),
            _ => Err(KickError::InvalidConfig(format!(
                "unknown packet shape `{s}` (expected `gaussian` or `top-hat`)"
            ))),
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeKind::Gaussian => "gaussian",
            ShapeKind::TopHat => "top-hat",
        })
    }
}

/// Every parameter of every experiment; each experiment reads the subset it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub experiment: Experiment,
    pub n_particle: usize,
    pub n_device: usize,
    pub dx: f64,
    /// Half-length `L` of the incident plane-wave segment.
    pub half_length: f64,
    pub d: f64,
    pub epsilon: f64,
    pub delta_f: f64,
    pub delta_s: f64,
    /// Position spread `Δx_s` of the slit wavefunction.
    pub slit_width: f64,
    /// Strip half-width; `None` means one grid point per strip.
    pub strip_half_width: Option<f64>,
    pub packet_shape: ShapeKind,
    /// Gaussian spread or top-hat half-width of each packet.
    pub packet_width: f64,
    pub center_a: f64,
    pub center_b: f64,
    /// Spread of the detector pointer wavefunction.
    pub pointer_width: f64,
    pub detector_delta_f: f64,
    /// Modular-momentum period; `None` means the fringe spacing.
    pub kappa: Option<f64>,
    pub edge_profile: EdgeProfile,
    pub max_moment: u32,
    pub p: f64,
    pub mass: f64,
    pub slit_mass: f64,
    pub k_p: f64,
    pub k_s: f64,
    pub tau: f64,
    pub z_p: f64,
    pub z_s: f64,
    pub sweep_draws: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    /// Canonical defaults of an experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut c = ScenarioConfig {
            experiment,
            n_particle: 65536,
            n_device: 128,
            dx: 0.95 / 310.5,
            half_length: 50.0,
            d: 1.0,
            epsilon: 0.05,
            delta_f: 0.02,
            delta_s: 0.0,
            slit_width: 0.01,
            strip_half_width: None,
            packet_shape: ShapeKind::Gaussian,
            packet_width: 0.5,
            center_a: 10.0,
            center_b: -10.0,
            pointer_width: 0.25,
            detector_delta_f: 0.25,
            kappa: None,
            edge_profile: EdgeProfile::HalfCosine,
            max_moment: crate::dist::DEFAULT_MAX_MOMENT,
            p: 100.0,
            mass: 1.0,
            slit_mass: 1e3,
            k_p: 2.0,
            k_s: -1.5,
            tau: 1.0,
            z_p: 10.0,
            z_s: 0.0,
            sweep_draws: 1000,
            seed: 0,
        };
        match experiment {
            Experiment::SingleSlitLocalized | Experiment::ZAxis => {}
            Experiment::SingleSlitDelocalized => {
                c.n_particle = 2048;
                c.n_device = 1024;
                c.dx = 0.95 / 30.5;
                c.half_length = 15.0;
                c.slit_width = 1.0;
            }
            Experiment::WhichWay | Experiment::WhichWayViolated => {
                c.n_particle = 2048;
                c.n_device = 2048;
                c.dx = 0.078125;
                if experiment == Experiment::WhichWayViolated {
                    c.pointer_width = 4.0;
                }
            }
        }
        c
    }

    /// Parses a config file. The `experiment` key selects the defaults the
    /// remaining keys override; `fallback` is used when the key is absent.
    pub fn parse(text: &str, fallback: Option<Experiment>) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let experiment = match pairs.iter().find(|(k, _)| k == "experiment") {
            Some((_, v)) => v.parse()?,
            None => fallback.ok_or_else(|| {
                KickError::InvalidConfig("config does not name an `experiment`".into())
            })?,
        };
        let mut cfg = Self::defaults(experiment);
        for (k, v) in &pairs {
            if k != "experiment" {
                cfg.set(k, v)?;
            }
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| {
            KickError::InvalidConfig(format!("override `{assignment}` is not key=value"))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k == "experiment" {
            let e: Experiment = v.parse()?;
            if e != self.experiment {
                let mut fresh = Self::defaults(e);
                for (key, value) in self.to_pairs() {
                    if key != "experiment" && self.differs_from_default(&key) {
                        fresh.set(&key, &value)?;
                    }
                }
                *self = fresh;
            }
            return Ok(());
        }
        self.set(k, v)
    }

    fn differs_from_default(&self, key: &str) -> bool {
        let base = Self::defaults(self.experiment).to_pairs();
        self.to_pairs().get(key) != base.get(key)
    }

    /// Sets one parameter from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n_particle" => self.n_particle = int(key, value)?,
            "n_device" => self.n_device = int(key, value)?,
            "dx" => self.dx = num(key, value)?,
            "L" => self.half_length = num(key, value)?,
            "d" => self.d = num(key, value)?,
            "epsilon" => self.epsilon = num(key, value)?,
            "delta_f" => self.delta_f = num(key, value)?,
            "delta_s" => self.delta_s = num(key, value)?,
            "slit_width" => self.slit_width = num(key, value)?,
            "strip_half_width" => {
                self.strip_half_width = if value == "finest" { None } else { Some(num(key, value)?) }
            }
            "packet_shape" => self.packet_shape = value.parse()?,
            "packet_width" => self.packet_width = num(key, value)?,
            "center_a" => self.center_a = num(key, value)?,
            "center_b" => self.center_b = num(key, value)?,
            "pointer_width" => self.pointer_width = num(key, value)?,
            "detector_delta_f" => self.detector_delta_f = num(key, value)?,
            "kappa" => self.kappa = if value == "auto" { None } else { Some(num(key, value)?) },
            "edge_profile" => self.edge_profile = value.parse()?,
            "max_moment" => self.max_moment = int(key, value)?,
            "P" => self.p = num(key, value)?,
            "m" => self.mass = num(key, value)?,
            "M" => self.slit_mass = num(key, value)?,
            "k_p" => self.k_p = num(key, value)?,
            "k_s" => self.k_s = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "z_p" => self.z_p = num(key, value)?,
            "z_s" => self.z_s = num(key, value)?,
            "sweep_draws" => self.sweep_draws = int(key, value)?,
            "seed" => self.seed = int(key, value)?,
            _ => return Err(KickError::InvalidConfig(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// All parameters as text, keyed as in config files.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let opt = |v: Option<f64>, none: &str| v.map_or_else(|| none.to_string(), |x| x.to_string());
        [
            ("experiment", self.experiment.to_string()),
            ("n_particle", self.n_particle.to_string()),
            ("n_device", self.n_device.to_string()),
            ("dx", self.dx.to_string()),
            ("L", self.half_length.to_string()),
            ("d", self.d.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("delta_f", self.delta_f.to_string()),
            ("delta_s", self.delta_s.to_string()),
            ("slit_width", self.slit_width.to_string()),
            ("strip_half_width", opt(self.strip_half_width, "finest")),
            ("packet_shape", self.packet_shape.to_string()),
            ("packet_width", self.packet_width.to_string()),
            ("center_a", self.center_a.to_string()),
            ("center_b", self.center_b.to_string()),
            ("pointer_width", self.pointer_width.to_string()),
            ("detector_delta_f", self.detector_delta_f.to_string()),
            ("kappa", opt(self.kappa, "auto")),
            ("edge_profile", self.edge_profile.to_string()),
            ("max_moment", self.max_moment.to_string()),
            ("P", self.p.to_string()),
            ("m", self.mass.to_string()),
            ("M", self.slit_mass.to_string()),
            ("k_p", self.k_p.to_string()),
            ("k_s", self.k_s.to_string()),
            ("tau", self.tau.to_string()),
            ("z_p", self.z_p.to_string()),
            ("z_s", self.z_s.to_string()),
            ("sweep_draws", self.sweep_draws.to_string()),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    /// The subset of keys an experiment actually reads.
    pub fn relevant_keys(&self) -> &'static [&'static str] {
        match self.experiment {
            Experiment::SingleSlitLocalized => &[
                "experiment", "n_particle", "n_device", "dx", "L", "d", "epsilon", "delta_f",
                "delta_s", "slit_width", "edge_profile",
            ],
            Experiment::SingleSlitDelocalized => &[
                "experiment", "n_particle", "n_device", "dx", "L", "d", "epsilon", "delta_f",
                "delta_s", "slit_width", "strip_half_width", "edge_profile",
            ],
            Experiment::WhichWay | Experiment::WhichWayViolated => &[
                "experiment", "n_particle", "n_device", "dx", "packet_shape", "packet_width",
                "center_a", "center_b", "pointer_width", "detector_delta_f", "kappa",
                "edge_profile", "max_moment",
            ],
            Experiment::ZAxis => &[
                "experiment", "P", "m", "M", "k_p", "k_s", "tau", "z_p", "z_s", "sweep_draws", "seed",
            ],
        }
    }

    /// [`to_pairs`](Self::to_pairs) restricted to [`relevant_keys`](Self::relevant_keys).
    pub fn echo(&self) -> BTreeMap<String, String> {
        let keys = self.relevant_keys();
        self.to_pairs().into_iter().filter(|(k, _)| keys.contains(&k.as_str())).collect()
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            KickError::InvalidConfig(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(KickError::InvalidConfig(format!("line {}: empty key or value", lineno + 1)));
        }
        if out.iter().any(|(seen, _): &(String, String)| seen == k) {
            return Err(KickError::InvalidConfig(format!("line {}: duplicate key `{k}`", lineno + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn num(key: &str, value: &str) -> Result<f64> {
    let bad = || KickError::InvalidConfig(format!("`{key}`: `{value}` is not a number"));
    let x = match value.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => value.parse().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn int<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| KickError::InvalidConfig(format!("`{key}`: `{value}` is not a non-negative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_ratios_and_experiment() {
        let cfg = ScenarioConfig::parse(
            "# which-way with a wide pointer\nexperiment = which-way\npointer_width = 4 # wide\ndx = 5/64\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.experiment, Experiment::WhichWay);
        assert_eq!(cfg.pointer_width, 4.0);
        assert_eq!(cfg.dx, 0.078125);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["bogus = 1", "d = abc", "d 1", "d = 1\nd = 2", "experiment = nope"] {
            let err = ScenarioConfig::parse(text, Some(Experiment::ZAxis)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
        assert!(ScenarioConfig::parse("d = 1", None).is_err());
    }

    #[test]
    fn overrides_and_round_trip() {
        let mut cfg = ScenarioConfig::defaults(Experiment::WhichWay);
        cfg.apply_override("pointer_width=0.3").unwrap();
        cfg.apply_override("experiment=which-way-violated").unwrap();
        assert_eq!(cfg.experiment, Experiment::WhichWayViolated);
        assert_eq!(cfg.pointer_width, 0.3);
        assert!(cfg.apply_override("nokey").is_err());

        let text: String = cfg.to_pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        assert_eq!(ScenarioConfig::parse(&text, None).unwrap(), cfg);
    }
}
