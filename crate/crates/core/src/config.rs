//! Flat `key=value` run configuration.
//!
//! Entries are separated by whitespace or newlines; `#` starts a comment.
//! Unknown keys, malformed values and out-of-range settings are rejected
//! with the offending key and its line.
//!
//! State values come in three forms:
//!
//! ```text
//! initial=495                 basis label
//! initial={0,4}               set of excited qubits
//! initial=5:0.6,9:0:0.8       index:re[:im] amplitude pairs
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitudes::AmplitudeVector;
use crate::detection::Iterations;
use crate::evolution::{EvolutionConfig, SweepDirection};
use crate::gates::{make_gate, GateKind};
use crate::lattice::{BasisIndex, LatticeTopology};
use crate::MAX_QUBITS;

/// Tolerance on the norm of pair-specified states before they are rescaled.
pub const INITIAL_NORM_TOL: f64 = 1e-6;

const KEYS: &[&str] = &[
    "n",
    "gate",
    "theta",
    "steps",
    "renormalize",
    "snapshot_every",
    "direction",
    "initial",
    "seed",
    "out",
    "orbit_states",
    "orbit_period",
    "a",
    "b",
    "superpose",
    "target",
    "dim",
    "iterations",
    "trials",
];

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: `{key}`: {message}")]
pub struct ParseError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Basis(usize),
    Excited(Vec<usize>),
    Pairs(Vec<(usize, Complex64)>),
}

impl StateSpec {
    pub fn to_state(&self, num_qubits: usize) -> crate::Result<AmplitudeVector> {
        match self {
            StateSpec::Basis(i) => AmplitudeVector::basis(num_qubits, *i),
            StateSpec::Excited(qs) => {
                let idx = BasisIndex::from_excited(qs.iter().copied(), num_qubits)?;
                AmplitudeVector::basis(num_qubits, idx.value())
            }
            StateSpec::Pairs(p) => AmplitudeVector::from_pairs(num_qubits, p.iter().copied()),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Basis(i) => write!(f, "{i}"),
            StateSpec::Excited(qs) => {
                let parts: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            StateSpec::Pairs(p) => {
                let parts: Vec<String> = p
                    .iter()
                    .map(|(i, a)| format!("{i}:{}:{}", a.re, a.im))
                    .collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// What drives the evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum Driver {
    Gate(GateKind),
    /// Injected periodic orbit over pairs of basis states.
    Orbit {
        states: Vec<usize>,
        period: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub driver: Driver,
    pub theta: f64,
    pub steps: usize,
    pub renormalize: bool,
    pub snapshot_every: usize,
    pub direction: SweepDirection,
    pub initial: StateSpec,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub a: f64,
    pub b: f64,
    pub superpose: Option<StateSpec>,
    pub target: Option<StateSpec>,
    /// Search-space dimension for detection; defaults to `2^(n²)`.
    pub dim: Option<usize>,
    pub iterations: Iterations,
    pub trials: usize,
    /// Notes produced while validating (e.g. rescaled initial amplitudes).
    pub warnings: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let kind = GateKind::CprimeExact;
        Self {
            n: 3,
            driver: Driver::Gate(kind),
            theta: 0.01,
            steps: 1000,
            renormalize: kind.renormalize_by_default(),
            snapshot_every: 0,
            direction: SweepDirection::default(),
            initial: StateSpec::Basis(495),
            seed: None,
            out: None,
            a: std::f64::consts::FRAC_1_SQRT_2,
            b: std::f64::consts::FRAC_1_SQRT_2,
            superpose: None,
            target: None,
            dim: None,
            iterations: Iterations::Auto,
            trials: 1000,
            warnings: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn num_qubits(&self) -> usize {
        self.n * self.n
    }

    pub fn topology(&self) -> crate::Result<LatticeTopology> {
        LatticeTopology::new(self.n)
    }

    pub fn initial_state(&self) -> crate::Result<AmplitudeVector> {
        self.initial.to_state(self.num_qubits())
    }

    /// Sweep configuration; fails for orbit-driven runs.
    pub fn evolution(&self) -> crate::Result<EvolutionConfig> {
        let Driver::Gate(kind) = self.driver else {
            return Err(crate::Error::Invalid(
                "orbit runs have no sweep configuration".into(),
            ));
        };
        Ok(
            EvolutionConfig::new(self.topology()?, make_gate(kind, self.theta)?)
                .with_steps(self.steps)
                .with_renormalize(self.renormalize)
                .with_snapshot_every(self.snapshot_every)
                .with_direction(self.direction),
        )
    }

    /// Label written into snapshot headers.
    pub fn driver_label(&self) -> String {
        match &self.driver {
            Driver::Gate(k) => k.name().to_string(),
            Driver::Orbit { .. } => "orbit".to_string(),
        }
    }
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            key: self.key.to_string(),
            message: message.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.value
            .parse()
            .map_err(|_| self.err(format!("expected {what}, got `{}`", self.value)))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ParseError> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        for token in content.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(|| ParseError {
                line,
                key: token.to_string(),
                message: "expected key=value".into(),
            })?;
            if !KEYS.contains(&key) {
                return Err(ParseError {
                    line,
                    key: key.to_string(),
                    message: "unknown key".into(),
                });
            }
            if let Some(prev) = entries.get(key) {
                return Err(ParseError {
                    line,
                    key: key.to_string(),
                    message: format!("duplicate key (first set on line {})", prev.line),
                });
            }
            entries.insert(key, Entry { line, key, value });
        }
    }

    let mut cfg = RunConfig::default();
    if let Some(e) = entries.get("n") {
        cfg.n = e.parse("an integer")?;
        if cfg.n < 2 || cfg.n * cfg.n > MAX_QUBITS {
            return Err(e.err(format!(
                "n^2 = {} must be between 4 and {MAX_QUBITS} qubits",
                cfg.n * cfg.n
            )));
        }
    }
    let nq = cfg.num_qubits();

    let is_orbit = entries.get("gate").is_some_and(|e| e.value == "orbit");
    if let Some(e) = entries.get("gate").filter(|_| !is_orbit) {
        let kind: GateKind = e
            .value
            .parse()
            .map_err(|err: crate::Error| e.err(err.to_string()))?;
        cfg.driver = Driver::Gate(kind);
    }
    if let Some(e) = entries.get("theta") {
        cfg.theta = e.parse("a number")?;
    }
    if let Driver::Gate(kind) = cfg.driver {
        cfg.renormalize = kind.renormalize_by_default();
        let line = entries.get("theta").or(entries.get("gate"));
        if let Err(err) = make_gate(kind, cfg.theta) {
            return Err(match line {
                Some(e) => e.err(err.to_string()),
                None => ParseError {
                    line: 0,
                    key: "theta".into(),
                    message: err.to_string(),
                },
            });
        }
    }
    if is_orbit {
        let states_entry = entries
            .get("orbit_states")
            .ok_or_else(|| entries["gate"].err("gate=orbit requires orbit_states"))?;
        let states = parse_list(states_entry)?;
        for &s in &states {
            check_index(states_entry, s, nq)?;
        }
        if states.is_empty() || states.len() % 2 != 0 {
            return Err(states_entry.err("orbit_states needs an even, non-zero count"));
        }
        let mut sorted = states.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != states.len() {
            return Err(states_entry.err("orbit_states must be distinct"));
        }
        let period_entry = entries
            .get("orbit_period")
            .ok_or_else(|| entries["gate"].err("gate=orbit requires orbit_period"))?;
        let period: usize = period_entry.parse("an integer")?;
        if period < 2 {
            return Err(period_entry.err("orbit period must be at least 2"));
        }
        cfg.driver = Driver::Orbit { states, period };
        cfg.renormalize = false;
    } else {
        for key in ["orbit_states", "orbit_period"] {
            if let Some(e) = entries.get(key) {
                return Err(e.err("only valid with gate=orbit"));
            }
        }
    }

    if let Some(e) = entries.get("steps") {
        cfg.steps = e.parse("a non-negative integer")?;
    }
    if let Some(e) = entries.get("renormalize") {
        cfg.renormalize = match e.value {
            "true" | "yes" | "1" | "on" => true,
            "false" | "no" | "0" | "off" => false,
            other => return Err(e.err(format!("expected a boolean, got `{other}`"))),
        };
    }
    if let Some(e) = entries.get("snapshot_every") {
        cfg.snapshot_every = e.parse("a non-negative integer")?;
    }
    if let Some(e) = entries.get("direction") {
        cfg.direction = match e.value {
            "neighbors_on_node" => SweepDirection::NeighborsOnNode,
            "node_on_neighbors" => SweepDirection::NodeOnNeighbors,
            other => {
                return Err(e.err(format!(
                    "expected neighbors_on_node or node_on_neighbors, got `{other}`"
                )))
            }
        };
    }
    if let Some(e) = entries.get("initial") {
        cfg.initial = parse_state(e, nq, &mut cfg.warnings)?;
    }
    if let Some(e) = entries.get("seed") {
        cfg.seed = Some(e.parse("an unsigned 64-bit integer")?);
    }
    if let Some(e) = entries.get("out") {
        cfg.out = Some(PathBuf::from(e.value));
    }
    for (key, slot) in [("a", &mut cfg.a), ("b", &mut cfg.b)] {
        if let Some(e) = entries.get(key) {
            *slot = e.parse("a number")?;
            if !slot.is_finite() {
                return Err(e.err("must be finite"));
            }
        }
    }
    if let Some(e) = entries.get("superpose") {
        cfg.superpose = Some(parse_state(e, nq, &mut cfg.warnings)?);
    }
    if let Some(e) = entries.get("dim") {
        let dim: usize = e.parse("an integer")?;
        if dim < 2 || !dim.is_power_of_two() || dim > 1 << MAX_QUBITS {
            return Err(e.err(format!(
                "dim must be a power of two between 2 and 2^{MAX_QUBITS}"
            )));
        }
        cfg.dim = Some(dim);
    }
    let search_qubits = cfg.dim.map_or(nq, |d| d.trailing_zeros() as usize);
    if let Some(e) = entries.get("target") {
        cfg.target = Some(parse_state(e, search_qubits, &mut cfg.warnings)?);
    }
    if let Some(e) = entries.get("iterations") {
        cfg.iterations = if e.value.eq_ignore_ascii_case("auto") {
            Iterations::Auto
        } else {
            Iterations::Fixed(e.parse("an integer or `auto`")?)
        };
    }
    if let Some(e) = entries.get("trials") {
        cfg.trials = e.parse("an integer")?;
        if cfg.trials == 0 {
            return Err(e.err("trials must be at least 1"));
        }
    }
    for w in &cfg.warnings {
        log::warn!("{w}");
    }
    Ok(cfg)
}

fn check_index(e: &Entry, index: usize, num_qubits: usize) -> Result<(), ParseError> {
    if index >> num_qubits != 0 {
        return Err(e.err(format!(
            "basis index {index} out of range for {num_qubits} qubits"
        )));
    }
    Ok(())
}

fn parse_list(e: &Entry) -> Result<Vec<usize>, ParseError> {
    e.value
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| e.err(format!("expected an integer, got `{s}`")))
        })
        .collect()
}

fn parse_state(
    e: &Entry,
    num_qubits: usize,
    warnings: &mut Vec<String>,
) -> Result<StateSpec, ParseError> {
    let v = e.value;
    if let Some(inner) = v.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let qubits: Vec<usize> = inner
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| e.err(format!("expected a qubit index, got `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        if let Some(&q) = qubits.iter().find(|&&q| q >= num_qubits) {
            return Err(e.err(format!("qubit {q} out of range for {num_qubits} qubits")));
        }
        return Ok(StateSpec::Excited(qubits));
    }
    if !v.contains(':') {
        let index: usize = e.parse("a basis index, {qubits} set or index:amplitude pairs")?;
        check_index(e, index, num_qubits)?;
        return Ok(StateSpec::Basis(index));
    }
    let mut pairs = Vec::new();
    for part in v.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(e.err(format!("expected index:re[:im], got `{part}`")));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| e.err(format!("bad index `{}`", fields[0])))?;
        check_index(e, index, num_qubits)?;
        let num = |s: &str| -> Result<f64, ParseError> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| e.err(format!("bad amplitude `{s}`")))
        };
        let re = num(fields[1])?;
        let im = fields.get(2).map(|s| num(s)).transpose()?.unwrap_or(0.0);
        pairs.push((index, Complex64::new(re, im)));
    }
    let norm = AmplitudeVector::from_pairs(num_qubits, pairs.iter().copied())
        .map_err(|err| e.err(err.to_string()))?
        .norm();
    if norm == 0.0 {
        return Err(e.err("state has zero norm"));
    }
    if (norm - 1.0).abs() > INITIAL_NORM_TOL {
        warnings.push(format!(
            "line {}: `{}` had norm {norm:.9}; renormalized",
            e.line, e.key
        ));
        for (_, a) in pairs.iter_mut() {
            *a /= norm;
        }
    }
    Ok(StateSpec::Pairs(pairs))
}
