use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use qlattice::{
    amplify, back_project, dominant_components, dominant_set, evolve_operator,
    inject_periodic_orbit, parse_config, superpose, uniformity_deviation, AmplitudeVector,
    Complex64, DominanceReport, Driver, ExtendedOperator, Identity, RunConfig, SearchSpec,
    Snapshot, SnapshotError, SnapshotFile, StateSpec, Trajectory, DOMINANT_RATIO,
};
use thiserror::Error;

/// Number of leading components in printed dominance summaries.
const SUMMARY_TOP: usize = 8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Version(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Version(_) => 3,
        }
    }
}

impl From<qlattice::Error> for CliError {
    fn from(e: qlattice::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

fn snapshot_error(path: &Path, e: SnapshotError) -> CliError {
    let msg = format!("{}: {e}", path.display());
    match e {
        SnapshotError::Version { .. } => CliError::Version(msg),
        SnapshotError::Io(_) | SnapshotError::Format { .. } => CliError::Io(msg),
    }
}

pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let text = match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        None => String::new(),
    };
    let mut cfg = parse_config(&text).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(out) = &overrides.out {
        cfg.out = Some(out.clone());
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = Some(seed);
    }
    Ok(cfg)
}

fn out_path(cfg: &RunConfig) -> Result<&Path, CliError> {
    cfg.out
        .as_deref()
        .ok_or_else(|| CliError::Config("no output path: set `out` or pass --out".into()))
}

fn read_snapshot(path: &Path) -> Result<SnapshotFile, CliError> {
    SnapshotFile::read(path).map_err(|e| snapshot_error(path, e))
}

fn write_snapshot(snap: &SnapshotFile, path: &Path) -> Result<(), CliError> {
    snap.write_atomic(path).map_err(|e| snapshot_error(path, e))
}

fn print_dominance(report: &DominanceReport) {
    println!("rank index magnitude re im");
    for (rank, e) in report.ranked.iter().enumerate() {
        println!(
            "{} {} {:.10} {:.10} {:.10}",
            rank + 1,
            e.index.value(),
            e.magnitude,
            e.amplitude.re,
            e.amplitude.im
        );
    }
}

fn print_backprojection(psi: &AmplitudeVector) -> Result<(), CliError> {
    let dom = dominant_set(psi, DOMINANT_RATIO);
    let ids: Vec<String> = dom.iter().map(|b| b.value().to_string()).collect();
    println!("dominant {}", ids.join(" "));
    println!("backproject {}", back_project(&dom)?.value());
    Ok(())
}

fn summarize(steps: usize, psi: &AmplitudeVector) -> Result<(), CliError> {
    println!("steps {steps}");
    println!("norm {:.16e}", psi.norm());
    print_dominance(&dominant_components(psi, SUMMARY_TOP)?);
    print_backprojection(psi)
}

pub fn evolve(cfg: &RunConfig) -> Result<(), CliError> {
    let out = out_path(cfg)?;
    let initial = cfg.initial_state()?;
    let (traj, theta) = match &cfg.driver {
        Driver::Gate(_) => (qlattice::evolve(&initial, &cfg.evolution()?)?, cfg.theta),
        Driver::Orbit { states, period } => {
            let nq = cfg.num_qubits();
            let states = states
                .iter()
                .map(|&i| AmplitudeVector::basis(nq, i))
                .collect::<qlattice::Result<Vec<_>>>()?;
            let orbit = inject_periodic_orbit(&states, *period)?;
            let traj = evolve_operator(&initial, &orbit, cfg.steps, cfg.snapshot_every)?;
            (traj, orbit.angle())
        }
    };
    info!("evolved {} steps", traj.steps_completed());

    let label = cfg.driver_label();
    let snap = |steps: usize, psi: &AmplitudeVector| {
        SnapshotFile::from_state(cfg.n, &label, theta, steps, psi)
    };
    if cfg.snapshot_every > 0 {
        let numbered = |sweep: usize| PathBuf::from(format!("{}.{sweep:06}", out.display()));
        write_snapshot(&snap(0, &traj.initial), &numbered(0))?;
        for s in &traj.snapshots {
            write_snapshot(&snap(s.sweep, &s.state), &numbered(s.sweep))?;
        }
    }
    let steps = traj.steps_completed();
    write_snapshot(&snap(steps, traj.final_state()), out)?;
    summarize(steps, traj.final_state())
}

pub fn analyze_dominance(paths: &[PathBuf]) -> Result<(), CliError> {
    for path in paths {
        let snap = read_snapshot(path)?;
        println!("file {}", path.display());
        summarize(snap.steps, &snap.to_state()?)?;
    }
    Ok(())
}

pub fn analyze_backproject(paths: &[PathBuf]) -> Result<(), CliError> {
    for path in paths {
        let snap = read_snapshot(path)?;
        println!("file {}", path.display());
        print_backprojection(&snap.to_state()?)?;
    }
    Ok(())
}

pub fn analyze_uniformity(paths: &[PathBuf]) -> Result<(), CliError> {
    for path in paths {
        let snap = read_snapshot(path)?;
        println!("file {}", path.display());
        println!("steps {}", snap.steps);
        println!(
            "uniformity {:.10e}",
            uniformity_deviation(&snap.to_state()?)
        );
    }
    Ok(())
}

pub fn analyze_period(paths: &[PathBuf], delta: f64) -> Result<(), CliError> {
    let mut snaps = Vec::with_capacity(paths.len());
    for path in paths {
        snaps.push((path, read_snapshot(path)?));
    }
    let (first_path, first) = &snaps[0];
    if first.steps != 0 {
        return Err(CliError::Config(format!(
            "{}: period analysis starts from the initial state (steps 0), found steps {}",
            first_path.display(),
            first.steps
        )));
    }
    for (path, s) in &snaps[1..] {
        if s.n != first.n {
            return Err(CliError::Config(format!(
                "{}: lattice side {} differs from {}",
                path.display(),
                s.n,
                first.n
            )));
        }
    }
    let snapshots = snaps[1..]
        .iter()
        .map(|(_, s)| {
            Ok(Snapshot {
                sweep: s.steps,
                state: s.to_state()?,
            })
        })
        .collect::<qlattice::Result<Vec<_>>>()?;
    let traj = Trajectory {
        initial: first.to_state()?,
        snapshots,
        config: None,
    };
    let report = qlattice::detect_period(&traj, delta)?;
    println!("delta {delta:e}");
    match (report.period, report.recurrence_fidelity) {
        (Some(t), Some(f)) => {
            println!("period {t}");
            println!("fidelity {f:.16e}");
        }
        _ => println!("period none"),
    }
    Ok(())
}

pub fn prepare(cfg: &RunConfig) -> Result<(), CliError> {
    let out = out_path(cfg)?;
    let x_prime = cfg
        .superpose
        .as_ref()
        .ok_or_else(|| CliError::Config("prepare needs `superpose`".into()))?
        .to_state(cfg.num_qubits())?;
    let x = cfg.initial_state()?;
    let op = ExtendedOperator::new(
        Identity::new(x.dim()),
        Complex64::new(cfg.a, 0.0),
        Complex64::new(cfg.b, 0.0),
        x_prime,
    )?;
    let psi = superpose(&op, &x)?;
    let snap = SnapshotFile::from_state(cfg.n, "prepared", 0.0, 0, &psi);
    write_snapshot(&snap, out)?;
    println!("norm {:.16e}", psi.norm());
    println!("index re im");
    for (i, a) in &snap.records {
        println!("{i} {:.10} {:.10}", a.re, a.im);
    }
    Ok(())
}

pub fn detect(cfg: &RunConfig) -> Result<(), CliError> {
    let seed = cfg
        .seed
        .ok_or_else(|| CliError::Config("detect needs a seed: set `seed` or pass --seed".into()))?;
    let dim = cfg.dim.unwrap_or(1 << cfg.num_qubits());
    let nq = dim.trailing_zeros() as usize;
    let target = match &cfg.target {
        Some(t) => t.clone(),
        None => {
            warn!("no `target` given, searching for |0>");
            StateSpec::Basis(0)
        }
    };
    let target = target.to_state(nq)?;
    let spec = SearchSpec::new(target.clone(), cfg.iterations)?;
    let iterations = spec.resolved_iterations()?;
    let uniform = AmplitudeVector::uniform(nq)?;

    // sin²((2k+1)·asin|<t|s>|) with s the uniform start
    let overlap = (target.inner(&uniform)?.norm() / target.norm()).min(1.0);
    let expected = ((2 * iterations + 1) as f64 * overlap.asin()).sin().powi(2);
    let simulated = qlattice::success_probability(&amplify(&uniform, &spec)?, &spec)?;
    let frequency = qlattice::detect(&uniform, &spec, cfg.trials, seed)?;

    println!("dim {dim}");
    println!("iterations {iterations}");
    println!("trials {}", cfg.trials);
    println!("seed {seed}");
    println!("expected {expected:.10}");
    println!("simulated {simulated:.10}");
    println!("frequency {frequency:.10}");
    Ok(())
}
