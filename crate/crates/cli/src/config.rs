//! Run configuration: plain `key = value` lines with `#` comments.
//!
//! Each command owns a fixed key set with explicit defaults. Keys outside that
//! set are rejected, values are validated when they are set and stored in
//! canonical form so that printing a config and reading it back is lossless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;
use crate::Cmd;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    /// float > 0
    Positive,
    /// integer ≥ 1
    Count,
    /// comma-separated positive floats, possibly empty
    List,
    /// positive float or `auto`
    PositiveOrAuto,
    Choice(&'static [&'static str]),
    Text,
}

#[derive(Debug, Clone)]
struct Entry {
    key: &'static str,
    kind: Kind,
    doc: &'static str,
    value: String,
}

const BARRIERS: &[&str] = &["hard_wall", "step"];
const ENGINES: &[&str] = &["analytic", "tdse", "both"];
const MODES: &[&str] = &["survival", "interior"];
const STATISTICS: &[&str] = &["fermionized", "boson"];

/// (50π)² in units of 1/t0
const REFERENCE_V0: &str = "24674.011002723397";

#[derive(Debug, Clone)]
pub struct RunConfig {
    command: Cmd,
    entries: Vec<Entry>,
}

fn entry(key: &'static str, kind: Kind, value: &str, doc: &'static str) -> Entry {
    Entry { key, kind, doc, value: value.to_string() }
}

fn trap_entries(barrier: &str) -> Vec<Entry> {
    vec![
        entry("barrier", Kind::Choice(BARRIERS), barrier, "right-edge barrier before release: hard_wall | step"),
        entry("v0", Kind::Positive, REFERENCE_V0, "step height (used when barrier = step)"),
        entry("a", Kind::Positive, "1", "trap width"),
        entry("mass", Kind::Positive, "1", "particle mass"),
        entry("box_length", Kind::Positive, "12", "position of the far wall L"),
        entry("grid_points", Kind::Count, "24001", "solver grid nodes on [0, L]"),
        entry("fine_dt", Kind::Positive, "1e-6", "time step up to switch_t"),
        entry("coarse_dt", Kind::Positive, "1e-5", "time step after switch_t"),
        entry("switch_t", Kind::Positive, "0.01", "time at which the step size changes"),
    ]
}

fn engine_entry(default: &str) -> Entry {
    entry("engine", Kind::Choice(ENGINES), default, "analytic | tdse | both")
}

fn curve_entries() -> Vec<Entry> {
    vec![
        entry("t_min", Kind::Positive, "1e-4", "first log-spaced sample"),
        entry("t_max", Kind::Positive, "0.01", "last log-spaced sample"),
        entry("samples", Kind::Count, "33", "log-spaced samples on [t_min, t_max]"),
        entry("t_extra", Kind::List, "0.0125,0.015,0.0175,0.02", "additional sample times"),
        entry("fit_min", Kind::Positive, "1e-3", "lower edge of the t_Z fit window"),
        entry("fit_max", Kind::Positive, "0.01", "upper edge of the t_Z fit window"),
    ]
}

impl RunConfig {
    pub fn defaults(command: Cmd) -> Self {
        let mut entries = Vec::new();
        match command {
            Cmd::Fig1 => {
                entries.extend(trap_entries("hard_wall"));
                entries.push(entry("n", Kind::Count, "1", "trap level"));
                entries.push(entry("t", Kind::Positive, "1e-3", "time after release"));
                entries.push(entry("half_width", Kind::Positive, "0.5", "profile window a ± half_width"));
                entries.push(entry("stride", Kind::Count, "10", "keep every stride-th grid node"));
                entries.push(engine_entry("both"));
            }
            Cmd::Fig2 => {
                entries.extend(trap_entries("hard_wall"));
                entries.push(entry("n", Kind::Count, "1", "trap level"));
                entries.push(entry("t", Kind::Positive, "1e-3", "time after release"));
                entries.push(entry(
                    "k_max",
                    Kind::PositiveOrAuto,
                    "auto",
                    "largest k in the table; auto = 40 (M/t)^(1/2)",
                ));
                entries.push(entry("transitions", Kind::Count, "6", "trap levels m listed in the transition rows"));
                entries.push(engine_entry("both"));
            }
            Cmd::Fig3 | Cmd::Fig4 => {
                entries.extend(trap_entries("step"));
                if command == Cmd::Fig3 {
                    entries.push(entry("particles", Kind::Count, "1", "number of fermionized atoms"));
                }
                entries.extend(curve_entries());
                entries.push(engine_entry("both"));
            }
            Cmd::Zeno => {
                entries.extend(trap_entries("hard_wall"));
                entries.push(entry("n", Kind::Count, "1", "trap level"));
                entries.push(entry(
                    "taus",
                    Kind::List,
                    "1e-5,4e-5,1.6e-4,6.4e-4",
                    "measurement intervals (at least 3)",
                ));
                entries.push(entry("cycles", Kind::Count, "20", "measurements per run"));
                entries.push(entry("mode", Kind::Choice(MODES), "survival", "projection: survival | interior"));
                entries.push(engine_entry("analytic"));
            }
            Cmd::Units => {
                entries.push(entry("species", Kind::Text, "Rb-85", "atom species (Rb-85, Rb-87, Na-23)"));
                entries.push(entry("a_meters", Kind::Positive, "8e-5", "trap width in meters"));
                entries.push(entry("particles", Kind::Count, "4", "number of atoms"));
                entries.push(entry("statistics", Kind::Choice(STATISTICS), "fermionized", "fermionized | boson"));
            }
        }
        for e in &mut entries {
            e.value = canonical(e.kind, e.key, &e.value).expect("defaults are valid");
        }
        Self { command, entries }
    }

    pub fn command(&self) -> Cmd {
        self.command
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let command = self.command;
        let e = self
            .entries
            .iter_mut()
            .find(|e| e.key == key)
            .ok_or_else(|| CliError::Config(format!("unknown key '{key}' for {}", command.name())))?;
        e.value = canonical(e.kind, key, value.trim())?;
        Ok(())
    }

    /// Applies a `key=value` pair as given on the command line.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) =
            pair.split_once('=').ok_or_else(|| CliError::Config(format!("expected key=value, got '{pair}'")))?;
        self.set(k.trim(), v)
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{origin}:{}: expected key = value", i + 1)))?;
            self.set(k.trim(), v).map_err(|e| CliError::Config(format!("{origin}:{}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    fn raw(&self, key: &str) -> &str {
        &self
            .entries
            .iter()
            .find(|e| e.key == key)
            .unwrap_or_else(|| panic!("key {key} not defined for {}", self.command.name()))
            .value
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.iter().any(|e| e.key == key)
    }

    pub fn float(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated on set")
    }

    pub fn count(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated on set")
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        let raw = self.raw(key);
        if raw.is_empty() {
            return Vec::new();
        }
        raw.split(',').map(|s| s.parse().expect("validated on set")).collect()
    }

    pub fn float_or_auto(&self, key: &str) -> Option<f64> {
        match self.raw(key) {
            "auto" => None,
            v => Some(v.parse().expect("validated on set")),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// `(key, value)` in declaration order.
    pub fn pairs(&self) -> impl Iterator<Item = (&'static str, &str)> {
        self.entries.iter().map(|e| (e.key, e.value.as_str()))
    }

    /// The config file for this command, with each key documented.
    pub fn render(&self) -> String {
        let mut out = format!("# zeno {} configuration\n", self.command.name());
        for e in &self.entries {
            let _ = writeln!(out, "{} = {}  # {}", e.key, e.value, e.doc);
        }
        out
    }
}

/// Shortest representation that parses back to the same f64.
fn float_text(x: f64) -> String {
    if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn canonical(kind: Kind, key: &str, value: &str) -> Result<String, CliError> {
    let bad = |what: &str| CliError::Config(format!("{key}: expected {what}, got '{value}'"));
    let float = |s: &str| -> Result<f64, CliError> {
        s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad("a finite number"))
    };
    let positive = |s: &str| -> Result<f64, CliError> {
        float(s).and_then(|x| if x > 0.0 { Ok(x) } else { Err(bad("a positive number")) })
    };
    Ok(match kind {
        Kind::Positive => float_text(positive(value)?),
        Kind::PositiveOrAuto if value == "auto" => "auto".to_string(),
        Kind::PositiveOrAuto => float_text(positive(value)?),
        Kind::Count => match value.parse::<usize>() {
            Ok(n) if n >= 1 => n.to_string(),
            _ => return Err(bad("a positive integer")),
        },
        Kind::List if value.is_empty() => String::new(),
        Kind::List => value.split(',').map(|s| positive(s).map(float_text)).collect::<Result<Vec<_>, _>>()?.join(","),
        Kind::Choice(options) if options.contains(&value) => value.to_string(),
        Kind::Choice(options) => return Err(bad(&options.join(" | "))),
        Kind::Text if value.is_empty() => return Err(bad("a non-empty value")),
        Kind::Text => value.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips() {
        let mut c = RunConfig::defaults(Cmd::Fig3);
        c.set("t_extra", "0.013, 0.02").unwrap();
        c.set("barrier", "hard_wall").unwrap();
        let mut d = RunConfig::defaults(Cmd::Fig3);
        d.apply_text(&c.render(), "test").unwrap();
        assert_eq!(c.render(), d.render());
        assert_eq!(d.list("t_extra"), vec![0.013, 0.02]);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut c = RunConfig::defaults(Cmd::Fig4);
        assert!(c.set("particles", "2").is_err());
        assert!(c.set("samples", "0").is_err());
        assert!(c.set("t_min", "-1").is_err());
        assert!(c.set("engine", "fast").is_err());
        assert!(c.set_pair("t_min").is_err());
        assert!(c.apply_text("t_min 1e-4\n", "x").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let mut c = RunConfig::defaults(Cmd::Zeno);
        c.apply_text("# sweep\n\ntaus = 1e-5,2e-5,3e-5 # short\n", "x").unwrap();
        assert_eq!(c.list("taus"), vec![1e-5, 2e-5, 3e-5]);
        c.set("taus", "").unwrap();
        assert!(c.list("taus").is_empty());
    }

    #[test]
    fn shortest_float_repr_is_exact() {
        let mut c = RunConfig::defaults(Cmd::Fig1);
        c.set("t", "0.1").unwrap();
        assert_eq!(c.text("t"), "0.1");
        c.set("t", "0.000001").unwrap();
        assert_eq!(c.text("t"), "1e-6");
        assert_eq!(c.float("v0"), (50.0 * std::f64::consts::PI).powi(2));
    }
}
