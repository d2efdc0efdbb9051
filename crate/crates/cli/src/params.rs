//! `key=value` overrides from `--set` and config files.

use std::path::Path;

use parrondo::analysis::{GameAParams, GameBParams};
use parrondo::classical::GameSuite;
use parrondo::qlga::InitPhase;

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "epsilon",
    "pa",
    "p0",
    "p1",
    "steps",
    "theta",
    "crw_p",
    "mc_runs",
    "init_phase",
    "schedule_start",
];

pub fn parse_assignment(s: &str) -> Result<(String, String), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("expected key=value, got {s:?}")))?;
    let (k, v) = (k.trim(), v.trim());
    if !KNOWN_KEYS.contains(&k) {
        return Err(CliError::Validation(format!(
            "unknown override key {k:?} (known: {})",
            KNOWN_KEYS.join(", ")
        )));
    }
    Ok((k.to_string(), v.to_string()))
}

/// Reads a plain `key=value` file; blank lines and `#` comments are skipped.
pub fn load_config(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_assignment)
        .collect()
}

/// Resolved overrides. Unset fields fall back to the preset defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub epsilon: Option<f64>,
    pub pa: Option<f64>,
    pub p0: Option<f64>,
    pub p1: Option<f64>,
    pub steps: Option<u64>,
    pub theta: Option<f64>,
    pub crw_p: Option<f64>,
    pub mc_runs: Option<u64>,
    pub init_phase: Option<InitPhase>,
    pub schedule_start: Option<usize>,
    /// Assignments in the order they were applied.
    pub applied: Vec<(String, String)>,
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Validation(format!("{key}={value}: {e}")))
}

impl Params {
    pub const DEFAULT_EPSILON: f64 = 0.005;

    /// Applies assignments in order; later ones win.
    pub fn from_assignments(assignments: &[(String, String)]) -> Result<Self, CliError> {
        let mut p = Params::default();
        for (k, v) in assignments {
            match k.as_str() {
                "epsilon" => p.epsilon = Some(num(k, v)?),
                "pa" => p.pa = Some(num(k, v)?),
                "p0" => p.p0 = Some(num(k, v)?),
                "p1" => p.p1 = Some(num(k, v)?),
                "steps" => p.steps = Some(num(k, v)?),
                "theta" => p.theta = Some(num(k, v)?),
                "crw_p" => p.crw_p = Some(num(k, v)?),
                "mc_runs" => p.mc_runs = Some(num(k, v)?),
                "init_phase" => {
                    p.init_phase = Some(v.parse().map_err(CliError::Validation)?)
                }
                "schedule_start" => p.schedule_start = Some(num(k, v)?),
                other => {
                    return Err(CliError::Validation(format!("unknown override key {other:?}")))
                }
            }
            p.applied.push((k.clone(), v.clone()));
        }
        Ok(p)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(Self::DEFAULT_EPSILON)
    }

    /// Coins after the bias offset, with explicit `pa`/`p0`/`p1` taking precedence.
    pub fn suite(&self) -> Result<GameSuite, CliError> {
        let eps = self.epsilon();
        let a = GameAParams::new(self.pa.unwrap_or(0.5 - eps))?;
        let b = GameBParams::new(self.p0.unwrap_or(0.1 - eps), self.p1.unwrap_or(0.75 - eps))?;
        Ok(GameSuite::new(a, b))
    }

    pub fn steps_or(&self, default: u64) -> u64 {
        self.steps.unwrap_or(default)
    }

    pub fn overrides_string(&self) -> String {
        if self.applied.is_empty() {
            return "none".into();
        }
        self.applied
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[&str]) -> Vec<(String, String)> {
        pairs.iter().map(|s| parse_assignment(s).unwrap()).collect()
    }

    #[test]
    fn later_assignments_win() {
        let p = Params::from_assignments(&assign(&["epsilon=0", "pa=0.4", "epsilon=0.01"])).unwrap();
        assert_eq!(p.epsilon(), 0.01);
        let s = p.suite().unwrap();
        assert_eq!(s.a.pa(), 0.4);
        assert_eq!(s.b.p0(), 0.1 - 0.01);
        assert_eq!(p.overrides_string(), "epsilon=0 pa=0.4 epsilon=0.01");
    }

    #[test]
    fn unknown_key_is_validation_error() {
        let err = parse_assignment("gamma=1").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(parse_assignment("noequals").is_err());
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(Params::from_assignments(&assign(&["steps=-3"])).is_err());
        assert!(Params::from_assignments(&assign(&["init_phase=sideways"])).is_err());
        let p = Params::from_assignments(&assign(&["pa=1.5"])).unwrap();
        assert_eq!(p.suite().unwrap_err().exit_code(), 3);
    }

    #[test]
    fn config_file_round() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# sweep\nepsilon = 0.002\n\nsteps=50\n").unwrap();
        let a = load_config(&path).unwrap();
        let p = Params::from_assignments(&a).unwrap();
        assert_eq!((p.epsilon(), p.steps), (0.002, Some(50)));
        assert_eq!(load_config(&dir.path().join("missing")).unwrap_err().exit_code(), 4);
    }
}
