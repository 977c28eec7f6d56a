//! Run configuration: a sectioned `key = value` text format.
//!
//! ```text
//! [experiment]
//! kind = stabilize
//!
//! [system]
//! kappa = 1.6 MHz     # comments run to the end of the line
//! ```
//!
//! Dimensioned values need a unit suffix; everything is stored in SI with
//! frequencies as angular frequencies (rad/s).

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::{self, Write as _};

use parastab::circuit::CircuitParams;
use parastab::hamiltonian::{DriveSettings, Interaction, SystemParams};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("section [{name}] appears twice (lines {first} and {second})")]
    DuplicateSection { name: String, first: usize, second: usize },
    #[error("section [{name}] (line {line}) is not used by experiment `{kind}`")]
    UnusedSection { line: usize, name: String, kind: String },
    #[error("line {line}: unknown key `{key}` in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("key `{key}` appears twice (lines {first} and {second})")]
    DuplicateKey { key: String, first: usize, second: usize },
    #[error("missing section [{name}]")]
    MissingSection { name: String },
    #[error("line {line}: missing key `{key}` in [{section}]")]
    MissingKey { line: usize, section: String, key: String },
    #[error("line {line}: bad unit `{unit}` for `{key}` (expected one of: {expected})")]
    BadUnit {
        line: usize,
        key: String,
        unit: String,
        expected: String,
    },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    BadValue { line: usize, key: String, message: String },
}

impl ConfigError {
    /// Line the error points at, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Syntax { line, .. }
            | ConfigError::UnknownSection { line, .. }
            | ConfigError::UnusedSection { line, .. }
            | ConfigError::UnknownKey { line, .. }
            | ConfigError::MissingKey { line, .. }
            | ConfigError::BadUnit { line, .. }
            | ConfigError::BadValue { line, .. } => Some(*line),
            ConfigError::DuplicateSection { second, .. } | ConfigError::DuplicateKey { second, .. } => Some(*second),
            ConfigError::MissingSection { .. } => None,
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quantity {
    Frequency,
    Time,
    Inductance,
    Capacitance,
    Angle,
    Flux,
    Number,
    Count,
    Text,
}

impl Quantity {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Quantity::Frequency => &[
                ("Hz", TAU),
                ("kHz", TAU * 1e3),
                ("MHz", TAU * 1e6),
                ("GHz", TAU * 1e9),
                ("rad/s", 1.0),
                ("1/s", 1.0),
                ("/s", 1.0),
            ],
            Quantity::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9), ("ps", 1e-12)],
            Quantity::Inductance => &[("H", 1.0), ("mH", 1e-3), ("uH", 1e-6), ("nH", 1e-9), ("pH", 1e-12)],
            Quantity::Capacitance => &[("F", 1.0), ("uF", 1e-6), ("nF", 1e-9), ("pF", 1e-12), ("fF", 1e-15)],
            Quantity::Angle => &[("rad", 1.0), ("deg", PI / 180.0)],
            Quantity::Flux => &[("", 1.0), ("Phi0", 1.0)],
            Quantity::Number | Quantity::Count | Quantity::Text => &[("", 1.0)],
        }
    }

    /// Unit used by the canonical serializer (scale 1).
    fn canonical_unit(self) -> &'static str {
        match self {
            Quantity::Frequency => "rad/s",
            Quantity::Time => "s",
            Quantity::Inductance => "H",
            Quantity::Capacitance => "F",
            Quantity::Angle => "rad",
            Quantity::Flux => "Phi0",
            Quantity::Number | Quantity::Count | Quantity::Text => "",
        }
    }
}

use Quantity::*;

const EXPERIMENT_KEYS: &[(&str, Quantity)] = &[
    ("kind", Text),
    ("format", Text),
    ("output", Text),
    ("workers", Count),
    ("interactions", Text),
];

const SYSTEM_KEYS: &[(&str, Quantity)] = &[
    ("omega_q", Frequency),
    ("omega_r", Frequency),
    ("chi", Frequency),
    ("chi_prime", Frequency),
    ("alpha", Frequency),
    ("kappa", Frequency),
    ("gamma", Frequency),
    ("gamma_phi", Frequency),
    ("n_fock", Count),
];

const CIRCUIT_KEYS: &[(&str, Quantity)] = &[
    ("l_q", Inductance),
    ("l_r", Inductance),
    ("l_g0", Inductance),
    ("c_q", Capacitance),
    ("c_r", Capacitance),
    ("c_g", Capacitance),
    ("phi_ext", Flux),
];

const DRIVE_KEYS: &[(&str, Quantity)] = &[
    ("omega_x", Frequency),
    ("omega_z", Frequency),
    ("phase_phi", Angle),
    ("omega_b", Frequency),
    ("omega_r_sb", Frequency),
    ("omega_p_sb", Frequency),
    ("omega_l", Frequency),
    ("delta", Frequency),
    ("probe_eps", Frequency),
    ("probe_detuning", Frequency),
];

const SOLVER_KEYS: &[(&str, Quantity)] = &[
    ("rtol", Number),
    ("atol", Number),
    ("settle", Number),
    ("rel_tol", Number),
];

const GRID_KEYS: &[(&str, Quantity)] = &[("start", Number), ("stop", Number), ("count", Count)];

/// Grid sections and the quantity of their `start`/`stop`.
const GRIDS: &[(&str, Quantity)] = &[
    ("theta", Angle),
    ("flux", Flux),
    ("probe", Frequency),
    ("modulation", Frequency),
    ("time", Time),
];

fn section_keys(name: &str) -> Option<Vec<(&'static str, Quantity)>> {
    let fixed = match name {
        "experiment" => EXPERIMENT_KEYS,
        "system" => SYSTEM_KEYS,
        "circuit" => CIRCUIT_KEYS,
        "drive" => DRIVE_KEYS,
        "solver" => SOLVER_KEYS,
        _ => {
            let grid = name.strip_prefix("grid.")?;
            let (_, q) = GRIDS.iter().find(|(g, _)| *g == grid)?;
            return Some(
                GRID_KEYS
                    .iter()
                    .map(|&(k, kq)| (k, if kq == Number { *q } else { kq }))
                    .collect(),
            );
        }
    };
    Some(fixed.to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Quantize,
    FluxSweep,
    Stabilize,
    Compare,
    Spectroscopy,
    VacuumRabi,
    Rates,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Quantize,
        ExperimentKind::FluxSweep,
        ExperimentKind::Stabilize,
        ExperimentKind::Compare,
        ExperimentKind::Spectroscopy,
        ExperimentKind::VacuumRabi,
        ExperimentKind::Rates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Quantize => "quantize",
            ExperimentKind::FluxSweep => "flux-sweep",
            ExperimentKind::Stabilize => "stabilize",
            ExperimentKind::Compare => "compare",
            ExperimentKind::Spectroscopy => "spectroscopy",
            ExperimentKind::VacuumRabi => "vacuum-rabi",
            ExperimentKind::Rates => "rates",
        }
    }

    /// Sections the experiment needs besides `[experiment]`, and optional ones.
    fn sections(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            ExperimentKind::Quantize => (&["circuit"], &[]),
            ExperimentKind::FluxSweep => (&["circuit", "grid.flux"], &[]),
            ExperimentKind::Stabilize => (&["system", "drive", "grid.theta"], &[]),
            ExperimentKind::Compare => (&["system", "drive", "grid.theta"], &[]),
            ExperimentKind::Spectroscopy => (&["system", "drive", "grid.probe", "grid.modulation"], &["solver"]),
            ExperimentKind::VacuumRabi => (&["system", "drive", "grid.time"], &["solver"]),
            ExperimentKind::Rates => (&["system", "grid.theta"], &[]),
        }
    }

    /// Required `[system]` keys.
    fn system_keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Rates => &["gamma", "gamma_phi"],
            _ => &["omega_q", "omega_r", "chi", "kappa", "gamma", "gamma_phi", "n_fock"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Evenly spaced axis, `count >= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        parastab::experiments::linspace(self.start, self.stop, self.count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverSettings {
    pub rtol: f64,
    pub atol: f64,
    /// Spectroscopy settling time in units of `1/kappa`.
    pub settle: f64,
    /// Spectroscopy period-to-period convergence threshold.
    pub rel_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            settle: 15.0,
            rel_tol: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub format: OutputFormat,
    /// Output file stem.
    pub output: String,
    pub workers: Option<usize>,
    pub interactions: Vec<Interaction>,
    pub system: Option<SystemParams<f64>>,
    pub circuit: Option<CircuitParams<f64>>,
    pub drive: Option<DriveSettings<f64>>,
    pub grids: BTreeMap<String, Grid>,
    pub solver: SolverSettings,
}

impl RunConfig {
    pub fn grid(&self, name: &str) -> Option<&Grid> {
        self.grids.get(name)
    }
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    message: "section header must end with `]`".into(),
                })?
                .trim()
                .to_string();
            if section_keys(&name).is_none() {
                return Err(ConfigError::UnknownSection { line, name });
            }
            if let Some(prev) = sections.get(&name) {
                return Err(ConfigError::DuplicateSection {
                    name,
                    first: prev.line,
                    second: line,
                });
            }
            sections.insert(
                name.clone(),
                Section {
                    name: name.clone(),
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name);
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, got `{body}`"),
        })?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key".into(),
            });
        }
        let Some(name) = current.as_ref() else {
            return Err(ConfigError::Syntax {
                line,
                message: format!("key `{key}` appears before any section header"),
            });
        };
        let section = sections.get_mut(name).expect("current section exists");
        let known = section_keys(name).expect("validated section");
        if !known.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::UnknownKey {
                line,
                section: name.clone(),
                key,
            });
        }
        if let Some(prev) = section.entries.get(&key) {
            return Err(ConfigError::DuplicateKey {
                key,
                first: prev.line,
                second: line,
            });
        }
        section.entries.insert(key, Entry { value, line });
    }
    Ok(sections)
}

/// Splits `4.343 GHz` / `4.343GHz` into number text and unit.
fn split_unit(value: &str) -> (&str, &str) {
    let v = value.trim();
    let mut end = 0;
    let bytes = v.as_bytes();
    while end < bytes.len() {
        let c = bytes[end] as char;
        let exp_sign = (c == '+' || c == '-') && end > 0 && matches!(bytes[end - 1] as char, 'e' | 'E');
        let exp = (c == 'e' || c == 'E')
            && end > 0
            && bytes.get(end + 1).is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+');
        if c.is_ascii_digit() || c == '.' || (end == 0 && (c == '-' || c == '+')) || exp_sign || exp {
            end += 1;
        } else {
            break;
        }
    }
    (&v[..end], v[end..].trim())
}

impl Section {
    fn quantity(&self, key: &str) -> Quantity {
        section_keys(&self.name)
            .and_then(|k| k.iter().find(|(n, _)| *n == key).map(|(_, q)| *q))
            .expect("key belongs to section")
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError::MissingKey {
            line: self.line,
            section: self.name.clone(),
            key: key.to_string(),
        }
    }

    fn text(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|e| (e.value.as_str(), e.line))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        let q = self.quantity(key);
        let (num, unit) = split_unit(&e.value);
        if num.is_empty() {
            return Err(ConfigError::BadValue {
                line: e.line,
                key: key.to_string(),
                message: format!("`{}` is not a number", e.value),
            });
        }
        let units = q.units();
        let Some(&(_, scale)) = units.iter().find(|(u, _)| *u == unit) else {
            let expected = units
                .iter()
                .map(|(u, _)| if u.is_empty() { "(none)" } else { u })
                .collect::<Vec<_>>()
                .join(", ");
            return Err(ConfigError::BadUnit {
                line: e.line,
                key: key.to_string(),
                unit: unit.to_string(),
                expected,
            });
        };
        let x: f64 = num.parse().map_err(|_| ConfigError::BadValue {
            line: e.line,
            key: key.to_string(),
            message: format!("`{}` is not a number", e.value),
        })?;
        if !x.is_finite() {
            return Err(ConfigError::BadValue {
                line: e.line,
                key: key.to_string(),
                message: "must be finite".into(),
            });
        }
        Ok(Some(if scale == 1.0 { x } else { x * scale }))
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?.ok_or_else(|| self.missing(key))
    }

    fn or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn count(&self, key: &str) -> Result<Option<usize>> {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.value.trim().parse::<usize>().map(Some).map_err(|_| ConfigError::BadValue {
            line: e.line,
            key: key.to_string(),
            message: format!("`{}` is not a non-negative integer", e.value),
        })
    }

    fn bad(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            line: self.entries.get(key).map_or(self.line, |e| e.line),
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let sections = parse_sections(text)?;
    let exp = sections.get("experiment").ok_or(ConfigError::MissingSection {
        name: "experiment".into(),
    })?;
    let (kind_text, kind_line) = exp.text("kind").ok_or_else(|| exp.missing("kind"))?;
    let kind = ExperimentKind::ALL
        .into_iter()
        .find(|k| k.name() == kind_text)
        .ok_or_else(|| ConfigError::BadValue {
            line: kind_line,
            key: "kind".into(),
            message: format!(
                "unknown experiment `{kind_text}` (expected one of: {})",
                ExperimentKind::ALL.map(|k| k.name()).join(", ")
            ),
        })?;
    let format = match exp.text("format") {
        None | Some(("csv", _)) => OutputFormat::Csv,
        Some(("json", _)) => OutputFormat::Json,
        Some((other, _)) => return Err(exp.bad("format", format!("`{other}` is not csv or json"))),
    };
    let output = match exp.text("output") {
        None => kind.name().to_string(),
        Some((o, _)) => {
            if o.is_empty() || o.contains(['/', '\\']) || o.starts_with('.') {
                return Err(exp.bad("output", "must be a plain file stem"));
            }
            o.to_string()
        }
    };
    let workers = exp.count("workers")?;
    if workers == Some(0) {
        return Err(exp.bad("workers", "must be at least 1"));
    }
    let interactions = match exp.text("interactions") {
        None => Interaction::ALL.to_vec(),
        Some((list, _)) => {
            let mut out = Vec::new();
            for item in list.split(',').map(str::trim) {
                let k: Interaction = item.parse().map_err(|e: String| exp.bad("interactions", e))?;
                if out.contains(&k) {
                    return Err(exp.bad("interactions", format!("`{item}` listed twice")));
                }
                out.push(k);
            }
            out
        }
    };
    if exp.entries.contains_key("interactions") && kind != ExperimentKind::Compare {
        return Err(exp.bad("interactions", "only used by experiment `compare`"));
    }

    let (required, optional) = kind.sections();
    for name in required {
        if !sections.contains_key(*name) {
            return Err(ConfigError::MissingSection { name: name.to_string() });
        }
    }
    for (name, s) in &sections {
        if name != "experiment" && !required.contains(&name.as_str()) && !optional.contains(&name.as_str()) {
            return Err(ConfigError::UnusedSection {
                line: s.line,
                name: name.clone(),
                kind: kind.name().into(),
            });
        }
    }

    let system = match sections.get("system") {
        None => None,
        Some(s) => {
            for key in kind.system_keys() {
                if !s.entries.contains_key(*key) {
                    return Err(s.missing(key));
                }
            }
            let chi = s.or("chi", 0.0)?;
            let n_fock = s.count("n_fock")?.unwrap_or(2);
            if n_fock < 2 {
                return Err(s.bad("n_fock", "Fock cutoff must be at least 2"));
            }
            let sys = SystemParams {
                omega_q: s.or("omega_q", 0.0)?,
                omega_r: s.or("omega_r", 0.0)?,
                chi,
                chi_prime: s.or("chi_prime", chi)?,
                alpha: s.or("alpha", 0.0)?,
                kappa: s.or("kappa", 0.0)?,
                gamma: s.required("gamma")?,
                gamma_phi: s.required("gamma_phi")?,
                n_fock,
            };
            for key in ["kappa", "gamma", "gamma_phi"] {
                if s.number(key)?.is_some_and(|v| v < 0.0) {
                    return Err(s.bad(key, "rates must be non-negative"));
                }
            }
            Some(sys)
        }
    };

    let circuit = match sections.get("circuit") {
        None => None,
        Some(s) => {
            let p = CircuitParams {
                l_q: s.required("l_q")?,
                l_r: s.required("l_r")?,
                l_g0: s.required("l_g0")?,
                c_q: s.required("c_q")?,
                c_r: s.required("c_r")?,
                c_g: s.required("c_g")?,
                phi_ext: s.or("phi_ext", 0.0)?,
            };
            for key in ["l_q", "l_r", "l_g0", "c_q", "c_r"] {
                if s.required(key)? <= 0.0 {
                    return Err(s.bad(key, "must be positive"));
                }
            }
            if p.c_g < 0.0 {
                return Err(s.bad("c_g", "must be non-negative"));
            }
            Some(p)
        }
    };

    let drive = match sections.get("drive") {
        None => None,
        Some(s) => Some(DriveSettings {
            omega_x: s.or("omega_x", 0.0)?,
            omega_z: s.or("omega_z", 0.0)?,
            phase_phi: s.or("phase_phi", 0.0)?,
            omega_b: s.or("omega_b", 0.0)?,
            omega_r_sb: s.or("omega_r_sb", 0.0)?,
            omega_p_sb: s.or("omega_p_sb", 0.0)?,
            omega_l: s.or("omega_l", 0.0)?,
            delta: s.or("delta", 0.0)?,
            probe_eps: s.or("probe_eps", 0.0)?,
            probe_detuning: s.or("probe_detuning", 0.0)?,
        }),
    };

    let mut grids = BTreeMap::new();
    for (g, _) in GRIDS {
        let Some(s) = sections.get(&format!("grid.{g}")) else {
            continue;
        };
        let grid = Grid {
            start: s.required("start")?,
            stop: s.required("stop")?,
            count: s.count("count")?.ok_or_else(|| s.missing("count"))?,
        };
        if grid.count == 0 {
            return Err(s.bad("count", "grid needs at least one point"));
        }
        grids.insert(g.to_string(), grid);
    }

    let solver = match sections.get("solver") {
        None => SolverSettings::default(),
        Some(s) => {
            let d = SolverSettings::default();
            let out = SolverSettings {
                rtol: s.or("rtol", d.rtol)?,
                atol: s.or("atol", d.atol)?,
                settle: s.or("settle", d.settle)?,
                rel_tol: s.or("rel_tol", d.rel_tol)?,
            };
            for (key, v) in [
                ("rtol", out.rtol),
                ("atol", out.atol),
                ("settle", out.settle),
                ("rel_tol", out.rel_tol),
            ] {
                if v <= 0.0 {
                    return Err(s.bad(key, "must be positive"));
                }
            }
            out
        }
    };

    Ok(RunConfig {
        kind,
        format,
        output,
        workers,
        interactions,
        system,
        circuit,
        drive,
        grids,
        solver,
    })
}

fn put(out: &mut String, key: &str, q: Quantity, v: f64) {
    let unit = q.canonical_unit();
    if unit.is_empty() {
        let _ = writeln!(out, "{key} = {v:e}");
    } else {
        let _ = writeln!(out, "{key} = {v:e} {unit}");
    }
}

/// Canonical text form: every key spelled out, SI units, shortest
/// round-trip number formatting. `parse_config(&to_config_text(c)) == c`.
pub fn to_config_text(cfg: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str("[experiment]\n");
    let _ = writeln!(out, "kind = {}", cfg.kind);
    let _ = writeln!(out, "format = {}", cfg.format.extension());
    let _ = writeln!(out, "output = {}", cfg.output);
    if let Some(w) = cfg.workers {
        let _ = writeln!(out, "workers = {w}");
    }
    if cfg.kind == ExperimentKind::Compare {
        let names: Vec<&str> = cfg.interactions.iter().map(|k| k.name()).collect();
        let _ = writeln!(out, "interactions = {}", names.join(", "));
    }
    if let Some(s) = &cfg.system {
        out.push_str("\n[system]\n");
        for (k, v) in [
            ("omega_q", s.omega_q),
            ("omega_r", s.omega_r),
            ("chi", s.chi),
            ("chi_prime", s.chi_prime),
            ("alpha", s.alpha),
            ("kappa", s.kappa),
            ("gamma", s.gamma),
            ("gamma_phi", s.gamma_phi),
        ] {
            put(&mut out, k, Frequency, v);
        }
        let _ = writeln!(out, "n_fock = {}", s.n_fock);
    }
    if let Some(c) = &cfg.circuit {
        out.push_str("\n[circuit]\n");
        put(&mut out, "l_q", Inductance, c.l_q);
        put(&mut out, "l_r", Inductance, c.l_r);
        put(&mut out, "l_g0", Inductance, c.l_g0);
        put(&mut out, "c_q", Capacitance, c.c_q);
        put(&mut out, "c_r", Capacitance, c.c_r);
        put(&mut out, "c_g", Capacitance, c.c_g);
        put(&mut out, "phi_ext", Flux, c.phi_ext);
    }
    if let Some(d) = &cfg.drive {
        out.push_str("\n[drive]\n");
        for (k, v) in [
            ("omega_x", d.omega_x),
            ("omega_z", d.omega_z),
            ("phase_phi", d.phase_phi),
            ("omega_b", d.omega_b),
            ("omega_r_sb", d.omega_r_sb),
            ("omega_p_sb", d.omega_p_sb),
            ("omega_l", d.omega_l),
            ("delta", d.delta),
            ("probe_eps", d.probe_eps),
            ("probe_detuning", d.probe_detuning),
        ] {
            put(&mut out, k, if k == "phase_phi" { Angle } else { Frequency }, v);
        }
    }
    for (g, q) in GRIDS {
        if let Some(grid) = cfg.grids.get(*g) {
            let _ = write!(out, "\n[grid.{g}]\n");
            put(&mut out, "start", *q, grid.start);
            put(&mut out, "stop", *q, grid.stop);
            let _ = writeln!(out, "count = {}", grid.count);
        }
    }
    let (_, optional) = cfg.kind.sections();
    if optional.contains(&"solver") {
        out.push_str("\n[solver]\n");
        put(&mut out, "rtol", Number, cfg.solver.rtol);
        put(&mut out, "atol", Number, cfg.solver.atol);
        put(&mut out, "settle", Number, cfg.solver.settle);
        put(&mut out, "rel_tol", Number, cfg.solver.rel_tol);
    }
    out
}
