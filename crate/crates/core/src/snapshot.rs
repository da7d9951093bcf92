//! Text snapshot files.
//!
//! ```text
//! qlattice-snapshot
//! version 1
//! n 3
//! gate cprime_exact
//! theta 1.0000000000000000e-2
//! steps 1000
//! norm 1.0000000000000000e0
//! floor 9.9999999999999998e-13
//! records 2
//! 5 7.0710678118654757e-1 0.0000000000000000e0
//! 9 7.0710678118654757e-1 0.0000000000000000e0
//! ```
//!
//! Header lines appear in exactly this order. Each record is
//! `index re im`; only amplitudes with magnitude above `floor` are kept, in
//! increasing index order. Floats carry 17 significant digits so that
//! reading a file back reproduces every stored amplitude bit for bit.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::amplitudes::AmplitudeVector;
use crate::MAX_QUBITS;

pub const SNAPSHOT_VERSION: u32 = 1;
pub const DEFAULT_FLOOR: f64 = 1e-12;
const MAGIC: &str = "qlattice-snapshot";
const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("unsupported snapshot version {found} (expected {SNAPSHOT_VERSION})")]
    Version { found: u32 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub n: usize,
    pub gate: String,
    pub theta: f64,
    pub steps: usize,
    pub norm: f64,
    pub floor: f64,
    pub records: Vec<(usize, Complex64)>,
}

impl SnapshotFile {
    /// Captures `state` (an `n x n` lattice state) with the default floor.
    pub fn from_state(
        n: usize,
        gate: &str,
        theta: f64,
        steps: usize,
        state: &AmplitudeVector,
    ) -> Self {
        Self::with_floor(n, gate, theta, steps, state, DEFAULT_FLOOR)
    }

    pub fn with_floor(
        n: usize,
        gate: &str,
        theta: f64,
        steps: usize,
        state: &AmplitudeVector,
        floor: f64,
    ) -> Self {
        let records = state
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > floor)
            .map(|(i, a)| (i, *a))
            .collect();
        Self {
            n,
            gate: gate.to_string(),
            theta,
            steps,
            norm: state.norm(),
            floor,
            records,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n * self.n
    }

    /// Dense state with every dropped amplitude set to zero.
    pub fn to_state(&self) -> crate::Result<AmplitudeVector> {
        AmplitudeVector::from_pairs(self.num_qubits(), self.records.iter().copied())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(MAGIC);
        s.push('\n');
        s.push_str(&format!("version {SNAPSHOT_VERSION}\n"));
        s.push_str(&format!("n {}\n", self.n));
        s.push_str(&format!("gate {}\n", self.gate));
        s.push_str(&format!("theta {}\n", fmt_f64(self.theta)));
        s.push_str(&format!("steps {}\n", self.steps));
        s.push_str(&format!("norm {}\n", fmt_f64(self.norm)));
        s.push_str(&format!("floor {}\n", fmt_f64(self.floor)));
        s.push_str(&format!("records {}\n", self.records.len()));
        for (i, a) in &self.records {
            s.push_str(&format!("{i} {} {}\n", fmt_f64(a.re), fmt_f64(a.im)));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, SnapshotError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| SnapshotError::Format {
                line: 0,
                message: format!("unexpected end of file, expected {what}"),
            })
        };

        let (line, magic) = next("magic line")?;
        if magic != MAGIC {
            return Err(format_err(line, format!("expected `{MAGIC}`")));
        }
        let version: u32 = header(next("version")?, "version")?;
        if version != SNAPSHOT_VERSION {
            return Err(SnapshotError::Version { found: version });
        }
        let n_line = next("n")?;
        let n: usize = header(n_line, "n")?;
        if n < 2 || n * n > MAX_QUBITS {
            return Err(format_err(
                n_line.0,
                format!("unsupported lattice side {n}"),
            ));
        }
        let (line, gate_line) = next("gate")?;
        let gate = gate_line
            .strip_prefix("gate ")
            .filter(|g| !g.is_empty() && !g.contains(char::is_whitespace))
            .ok_or_else(|| format_err(line, "expected `gate <label>`"))?
            .to_string();
        let theta: f64 = header(next("theta")?, "theta")?;
        let steps: usize = header(next("steps")?, "steps")?;
        let norm_line = next("norm")?;
        let norm: f64 = header(norm_line, "norm")?;
        let floor: f64 = header(next("floor")?, "floor")?;
        let count_line = next("records")?;
        let count: usize = header(count_line, "records")?;

        let dim = 1usize << (n * n);
        let mut records = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, rec) = next("record")?;
            let mut fields = rec.split(' ');
            let (Some(i), Some(re), Some(im), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(format_err(line, "expected `index re im`"));
            };
            let index: usize = i.parse().map_err(|_| format_err(line, "bad index"))?;
            if index >= dim {
                return Err(format_err(line, format!("index {index} >= {dim}")));
            }
            if let Some(&(prev, _)) = records.last() {
                if index <= prev {
                    return Err(format_err(line, "indices must be strictly increasing"));
                }
            }
            let re: f64 = re.parse().map_err(|_| format_err(line, "bad real part"))?;
            let im: f64 = im
                .parse()
                .map_err(|_| format_err(line, "bad imaginary part"))?;
            records.push((index, Complex64::new(re, im)));
        }
        if let Some((line, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(format_err(line, format!("trailing content `{extra}`")));
        }
        let recomputed = records
            .iter()
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if (recomputed - norm).abs() > NORM_TOL {
            return Err(format_err(
                norm_line.0,
                format!("header norm {norm} disagrees with records ({recomputed})"),
            ));
        }
        Ok(Self {
            n,
            gate,
            theta,
            steps,
            norm,
            floor,
            records,
        })
    }

    pub fn read(path: &Path) -> Result<Self, SnapshotError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn write_atomic(&self, path: &Path) -> Result<(), SnapshotError> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_text().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| SnapshotError::Io(e.error))?;
        Ok(())
    }
}

/// 17 significant digits in scientific notation.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_err(line: usize, message: impl Into<String>) -> SnapshotError {
    SnapshotError::Format {
        line,
        message: message.into(),
    }
}

fn header<T: std::str::FromStr>(
    (line, text): (usize, &str),
    key: &str,
) -> Result<T, SnapshotError> {
    text.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format_err(line, format!("expected `{key} <value>`")))
}
