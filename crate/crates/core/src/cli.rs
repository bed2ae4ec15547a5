//! Command-line front end: configuration merging, validation and dispatch.
//!
//! A job comes from an optional JSON file (`--config`) whose fields are
//! overridden by flags. Every artifact goes into the `--out` directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::state::DimsRepr;
use crate::lattice::{
    init_product_measure, run_1d_interface, run_observed, Dims, Image, SimConfig,
};
use crate::meanfield::{classify, integrate, DEFAULT_STEP};
use crate::model::{Builtin, Family, InteractionMatrix, RegimeReport, SimplexPoint, ThetaParams};
use crate::sweep::{
    classify_m8_params, classify_m9_params, invasion_experiment, run_sweep, with_threads, Axis,
    Grid, LatticeSettings, Mode, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "reslat",
    version,
    about = "Resource-exploitation communities on lattices and in the mean field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Lattice run: densities.csv, run.json and PPM snapshots.
    Simulate,
    /// Mean-field trajectory: trajectory.csv.
    Odesolve,
    /// Mean-field regime report on stdout and in report.json.
    Classify,
    /// Regime map over a θ-family: regime_map.{csv,json,ppm}.
    Sweep,
    /// Fixation frequency of a low-density invader: invasion.json.
    Invade,
    /// Interface displacement on a segment: interface.csv.
    #[command(name = "interface1d")]
    Interface1d,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// JSON job file; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Matrix name (M0..M9, voterN) or JSON rows such as [[0,1],[1,0]].
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    /// ε for M4 and M5.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// M8, M9 or two.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// LxL for a torus, L for a ring.
    #[arg(long, global = true)]
    pub dims: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Total lattice updates; overrides --t-end for lattice runs.
    #[arg(long, global = true)]
    pub updates: Option<u64>,
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and replicated runs.
    #[arg(long, global = true, env = "RESLAT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long = "snapshot-times", global = true, value_delimiter = ',')]
    pub snapshot_times: Option<Vec<f64>>,
    /// Initial densities, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub initial: Option<Vec<f64>>,
    /// Time between density samples and progress lines.
    #[arg(long = "sample-interval", global = true)]
    pub sample_interval: Option<f64>,
    /// ODE step size.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// meanfield or lattice.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub replicates: Option<usize>,
    /// Points per θ axis for sweeps built from flags.
    #[arg(long = "grid-count", global = true)]
    pub grid_count: Option<usize>,
    /// Invading species, 1-based.
    #[arg(long, global = true)]
    pub invader: Option<usize>,
    #[arg(long, global = true)]
    pub density: Option<f64>,
    /// Segment length for interface1d.
    #[arg(long, global = true)]
    pub length: Option<usize>,
    /// No progress lines on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
}

/// Matrix given by name or by rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Name(String),
    Rows(Vec<Vec<f64>>),
}

/// Family given as a bare name (θ from `theta`) or with its θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Name(String),
    Params { family: String, theta: Vec<f64> },
}

/// The JSON job file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawConfig {
    pub cmd: Option<Command>,
    pub matrix: Option<MatrixSpec>,
    pub epsilon: Option<f64>,
    pub theta: Option<Vec<f64>>,
    pub family: Option<FamilySpec>,
    pub dims: Option<serde_json::Value>,
    pub seed: Option<u64>,
    pub updates: Option<u64>,
    pub t_end: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub snapshot_times: Option<Vec<f64>>,
    pub initial: Option<Vec<f64>>,
    pub sample_interval: Option<f64>,
    pub step: Option<f64>,
    pub mode: Option<Mode>,
    pub grid: Option<Grid>,
    pub replicates: Option<usize>,
    pub grid_count: Option<usize>,
    pub invader: Option<usize>,
    pub density: Option<f64>,
    pub length: Option<usize>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Flags win over file values.
    pub fn overlay(mut self, cmd: Option<Command>, f: &Flags) -> Result<Self> {
        fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
            if v.is_some() {
                *slot = v.clone();
            }
        }
        if cmd.is_some() {
            self.cmd = cmd;
        }
        if let Some(m) = &f.matrix {
            let t = m.trim();
            self.matrix = Some(if t.starts_with('[') {
                MatrixSpec::Rows(
                    serde_json::from_str(t).map_err(|e| Error::Parse(format!("--matrix: {e}")))?,
                )
            } else {
                MatrixSpec::Name(t.to_string())
            });
        }
        if let Some(fam) = &f.family {
            self.family = Some(FamilySpec::Name(fam.clone()));
        }
        if let Some(d) = &f.dims {
            self.dims = Some(serde_json::Value::String(d.clone()));
        }
        if let Some(m) = &f.mode {
            self.mode = Some(
                serde_json::from_value(serde_json::Value::String(m.to_ascii_uppercase())).map_err(
                    |_| Error::Parse(format!("--mode: expected meanfield or lattice, got {m:?}")),
                )?,
            );
        }
        set(&mut self.epsilon, &f.epsilon);
        set(&mut self.theta, &f.theta);
        set(&mut self.seed, &f.seed);
        set(&mut self.updates, &f.updates);
        set(&mut self.t_end, &f.t_end);
        set(&mut self.out, &f.out);
        set(&mut self.threads, &f.threads);
        set(&mut self.snapshot_times, &f.snapshot_times);
        set(&mut self.initial, &f.initial);
        set(&mut self.sample_interval, &f.sample_interval);
        set(&mut self.step, &f.step);
        set(&mut self.replicates, &f.replicates);
        set(&mut self.grid_count, &f.grid_count);
        set(&mut self.invader, &f.invader);
        set(&mut self.density, &f.density);
        set(&mut self.length, &f.length);
        Ok(self)
    }
}

/// A validated job.
#[derive(Debug, Clone)]
pub enum Job {
    Simulate {
        matrix: InteractionMatrix,
        dims: Dims,
        initial: SimplexPoint,
        config: SimConfig,
    },
    Odesolve {
        matrix: InteractionMatrix,
        initial: SimplexPoint,
        t_end: f64,
        step: f64,
    },
    Classify {
        matrix: InteractionMatrix,
        family: Option<ThetaParams>,
    },
    Sweep {
        spec: SweepSpec,
    },
    Invade {
        matrix: InteractionMatrix,
        invader: usize,
        density: f64,
        replicates: usize,
        settings: LatticeSettings,
        seed: u64,
    },
    Interface1d {
        theta: (f64, f64),
        length: usize,
        t_end: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub job: Job,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub quiet: bool,
}

/// Collects every violated invariant instead of stopping at the first.
#[derive(Default)]
struct Violations(Vec<String>);

impl Violations {
    fn check<T>(&mut self, field: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{field}: {} ({})", e, e.kind()));
                None
            }
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }
}

fn parse_family(name: &str) -> Result<Family> {
    name.parse()
}

fn resolve_family(raw: &RawConfig) -> Result<Option<ThetaParams>> {
    let Some(spec) = &raw.family else {
        return Ok(None);
    };
    let (family, theta) = match spec {
        FamilySpec::Name(n) => (
            parse_family(n)?,
            raw.theta
                .clone()
                .ok_or_else(|| Error::InvalidParameter(format!("family {n} needs theta")))?,
        ),
        FamilySpec::Params { family, theta } => (parse_family(family)?, theta.clone()),
    };
    ThetaParams::new(family, theta).map(Some)
}

fn resolve_matrix(raw: &RawConfig) -> Result<(InteractionMatrix, Option<ThetaParams>)> {
    match (&raw.matrix, resolve_family(raw)?) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter(
            "give either a matrix or a family, not both".into(),
        )),
        (None, None) => Err(Error::InvalidParameter(
            "a matrix or a family is required".into(),
        )),
        (None, Some(p)) => Ok((p.matrix(), Some(p))),
        (Some(MatrixSpec::Rows(rows)), None) => Ok((InteractionMatrix::from_rows(rows)?, None)),
        (Some(MatrixSpec::Name(name)), None) => {
            let b = Builtin::parse(name, raw.epsilon, raw.theta.as_deref())?;
            let family = match &b {
                Builtin::M8 { theta } => Some(ThetaParams::new(Family::M8, theta.to_vec())?),
                Builtin::M9 { theta } => Some(ThetaParams::new(Family::M9, theta.to_vec())?),
                _ => None,
            };
            Ok((b.matrix()?, family))
        }
    }
}

fn resolve_dims(raw: &RawConfig, default: Dims) -> Result<Dims> {
    match &raw.dims {
        None => Ok(default),
        Some(v) => serde_json::from_value::<DimsRepr>(v.clone())
            .map_err(|_| {
                Error::InvalidParameter(format!("expected \"LxL\", [x, y] or L, got {v}"))
            })?
            .try_into(),
    }
}

fn resolve_start(raw: &RawConfig, n: usize) -> Result<SimplexPoint> {
    match &raw.initial {
        None => Ok(SimplexPoint::uniform(n)),
        Some(u) if u.len() != n => Err(Error::SpeciesCount {
            expected: n,
            got: u.len(),
        }),
        Some(u) => SimplexPoint::new(u.clone()),
    }
}

fn default_grid(family: Family, count: usize, theta: Option<&[f64]>) -> Grid {
    let axis = Axis::new(0.0, 1.0, count);
    match family {
        Family::TwoType => Grid::Axes(vec![axis; 2]),
        Family::M8 => Grid::Axes(vec![axis; 3]),
        Family::M9 => {
            let t3 = theta.and_then(|t| t.get(2).copied()).unwrap_or(0.8);
            Grid::Axes(vec![axis, axis, Axis::fixed(t3)])
        }
    }
}

/// Merges file and flags and validates the result.
pub fn parse_config(cmd: Option<Command>, flags: &Flags) -> Result<JobConfig> {
    let file = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            RawConfig::from_json(&text)?
        }
        None => RawConfig::default(),
    };
    let raw = file.overlay(cmd, flags)?;
    build_job(&raw, flags.quiet)
}

/// Validates a merged configuration into a job.
pub fn build_job(raw: &RawConfig, quiet: bool) -> Result<JobConfig> {
    let mut v = Violations::default();
    let Some(cmd) = raw.cmd else {
        return Err(Error::Validation(vec!["cmd: no subcommand given".into()]));
    };
    let seed = raw.seed.unwrap_or(0);
    if let Some(s) = &raw.snapshot_times {
        if s.windows(2).any(|w| w[0] > w[1]) {
            v.fail("snapshot_times: must be sorted");
        }
    }
    if let Some(t) = raw.t_end {
        if !(t.is_finite() && t >= 0.0) {
            v.fail("t_end: must be a nonnegative number");
        }
    }
    if raw.threads == Some(0) {
        v.fail("threads: must be at least 1");
    }

    let job = match cmd {
        Command::Simulate => {
            let matrix = v.check("matrix", resolve_matrix(raw).map(|r| r.0));
            let dims = v.check("dims", resolve_dims(raw, Dims::Torus(400, 400)));
            let initial = matrix
                .as_ref()
                .and_then(|m| v.check("initial", resolve_start(raw, m.n())));
            match (matrix, dims, initial) {
                (Some(matrix), Some(dims), Some(initial)) => {
                    let horizon = raw.t_end.unwrap_or(2000.0);
                    let mut config = SimConfig::for_horizon(dims, horizon, seed);
                    if let Some(u) = raw.updates {
                        config.total_updates = u;
                    }
                    config.snapshot_times = raw.snapshot_times.clone().unwrap_or_default();
                    if let Some(i) = raw.sample_interval {
                        config.sample_interval = i;
                    }
                    v.check("simulate", config.validate(dims.sites()));
                    Some(Job::Simulate {
                        matrix,
                        dims,
                        initial,
                        config,
                    })
                }
                _ => None,
            }
        }
        Command::Odesolve => {
            let matrix = v.check("matrix", resolve_matrix(raw).map(|r| r.0));
            let initial = matrix
                .as_ref()
                .and_then(|m| v.check("initial", resolve_start(raw, m.n())));
            let step = raw.step.unwrap_or(DEFAULT_STEP);
            if !(step.is_finite() && step > 0.0) {
                v.fail("step: must be positive");
            }
            match (matrix, initial) {
                (Some(matrix), Some(initial)) => Some(Job::Odesolve {
                    matrix,
                    initial,
                    t_end: raw.t_end.unwrap_or(100.0),
                    step,
                }),
                _ => None,
            }
        }
        Command::Classify => v
            .check("matrix", resolve_matrix(raw))
            .map(|(matrix, family)| Job::Classify { matrix, family }),
        Command::Sweep => {
            let family = match &raw.family {
                Some(FamilySpec::Name(n)) => v.check("family", parse_family(n)),
                Some(FamilySpec::Params { family, .. }) => v.check("family", parse_family(family)),
                None => {
                    v.fail("family: a sweep needs a family");
                    None
                }
            };
            let dims = v.check("dims", resolve_dims(raw, Dims::Torus(200, 200)));
            match (family, dims) {
                (Some(family), Some(dims)) => {
                    let defaults = LatticeSettings::default();
                    let spec = SweepSpec {
                        family,
                        grid: raw.grid.clone().unwrap_or_else(|| {
                            default_grid(family, raw.grid_count.unwrap_or(11), raw.theta.as_deref())
                        }),
                        mode: raw.mode.unwrap_or(Mode::Meanfield),
                        replicates: raw.replicates.unwrap_or(3),
                        lattice: LatticeSettings {
                            dims,
                            t_end: raw.t_end.unwrap_or(defaults.t_end),
                            sample_interval: raw
                                .sample_interval
                                .unwrap_or(defaults.sample_interval),
                            initial: raw.initial.clone(),
                        },
                        seed,
                    };
                    v.check("sweep", spec.validate())
                        .map(|_| Job::Sweep { spec })
                }
                _ => None,
            }
        }
        Command::Invade => {
            let matrix = v.check("matrix", resolve_matrix(raw).map(|r| r.0));
            let dims = v.check("dims", resolve_dims(raw, Dims::Torus(100, 100)));
            let invader = raw.invader.unwrap_or(1);
            let density = raw.density.unwrap_or(0.05);
            let replicates = raw.replicates.unwrap_or(20);
            if let Some(m) = &matrix {
                if invader == 0 || invader > m.n() {
                    v.fail(format!("invader: species {invader} of {}", m.n()));
                }
            }
            if !(density > 0.0 && density < 1.0) {
                v.fail("density: must lie in (0, 1)");
            }
            if replicates == 0 {
                v.fail("replicates: must be at least 1");
            }
            match (matrix, dims) {
                (Some(matrix), Some(dims)) => Some(Job::Invade {
                    matrix,
                    invader: invader.max(1) - 1,
                    density,
                    replicates,
                    settings: LatticeSettings {
                        dims,
                        t_end: raw.t_end.unwrap_or(2000.0),
                        sample_interval: raw.sample_interval.unwrap_or(50.0),
                        initial: None,
                    },
                    seed,
                }),
                _ => None,
            }
        }
        Command::Interface1d => {
            let theta = match raw.theta.as_deref() {
                Some([a, b]) if (0.0..=1.0).contains(a) && (0.0..=1.0).contains(b) => {
                    Some((*a, *b))
                }
                _ => {
                    v.fail("theta: interface1d needs two values in [0, 1]");
                    None
                }
            };
            let length = raw.length.unwrap_or(1000);
            if length < 4 || !length.is_multiple_of(2) {
                v.fail("length: must be even and at least 4");
            }
            theta.map(|theta| Job::Interface1d {
                theta,
                length,
                t_end: raw.t_end.unwrap_or(100.0),
                seed,
            })
        }
    };
    match job {
        Some(job) if v.0.is_empty() => Ok(JobConfig {
            job,
            out: raw
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("reslat-out")),
            threads: raw.threads,
            quiet,
        }),
        _ => Err(Error::Validation(v.0)),
    }
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(out.join(name))?))
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(out, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fmt_time(t: f64) -> String {
    if t.fract() == 0.0 {
        format!("{:06}", t as u64)
    } else {
        format!("{t}")
    }
}

/// Report printed by `classify`.
pub fn classify_job(
    matrix: &InteractionMatrix,
    family: Option<&ThetaParams>,
) -> Result<RegimeReport> {
    match family {
        Some(p) if p.family == Family::M8 => classify_m8_params(p),
        Some(p) if p.family == Family::M9 => classify_m9_params(p),
        _ => classify(matrix),
    }
}

/// Runs a job, writing its artifacts under `job.out`. Progress goes to
/// stderr; only `classify` prints to stdout.
pub fn dispatch(job: &JobConfig) -> Result<()> {
    fs::create_dir_all(&job.out)?;
    let out = job.out.as_path();
    let progress = |msg: String| {
        if !job.quiet {
            eprintln!("{msg}");
        }
    };
    match &job.job {
        Job::Simulate {
            matrix,
            dims,
            initial,
            config,
        } => {
            let state = init_product_measure(*dims, initial, config.seed)?;
            let record = run_observed(state, matrix, config, |s| {
                let d: Vec<String> = s.densities.iter().map(|v| format!("{v:.4}")).collect();
                progress(format!(
                    "t={:.1} densities=[{}] clustering={:.4}",
                    s.t,
                    d.join(", "),
                    s.clustering
                ));
            })?;
            let mut csv = create(out, "densities.csv")?;
            record.write_csv(&mut csv)?;
            csv.flush()?;
            for snap in &record.snapshots {
                let mut w = create(out, &format!("snapshot_t{}.ppm", fmt_time(snap.t)))?;
                snap.image.write_ppm(&mut w)?;
                w.flush()?;
            }
            if let Ok(img) = Image::of(&record.final_state) {
                let mut w = create(out, "final.ppm")?;
                img.write_ppm(&mut w)?;
                w.flush()?;
            }
            write_json(out, "run.json", &record.summary())?;
            progress(format!("outcome: {}", record.summary().outcome));
        }
        Job::Odesolve {
            matrix,
            initial,
            t_end,
            step,
        } => {
            let traj = integrate(matrix, initial, *t_end, *step)?;
            let mut w = create(out, "trajectory.csv")?;
            traj.write_csv(&mut w)?;
            w.flush()?;
            progress(format!("final state {:?}", traj.last().as_slice()));
        }
        Job::Classify { matrix, family } => {
            let report = classify_job(matrix, family.as_ref())?;
            write_json(out, "report.json", &report)?;
            let text = serde_json::to_string_pretty(&report)?;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
        Job::Sweep { spec } => {
            progress(format!("sweeping {} cells", spec.grid.points().len()));
            let map = with_threads(job.threads, || run_sweep(spec))??;
            let mut csv = create(out, "regime_map.csv")?;
            map.write_csv(&mut csv)?;
            csv.flush()?;
            let mut json = create(out, "regime_map.json")?;
            map.write_json(&mut json)?;
            writeln!(json)?;
            json.flush()?;
            let mut ppm = create(out, "regime_map.ppm")?;
            map.write_ppm(&mut ppm)?;
            ppm.flush()?;
        }
        Job::Invade {
            matrix,
            invader,
            density,
            replicates,
            settings,
            seed,
        } => {
            let result = with_threads(job.threads, || {
                invasion_experiment(matrix, *invader, *density, *replicates, settings, *seed)
            })??;
            progress(format!(
                "invader {} won {}/{}",
                result.invader, result.wins, result.replicates
            ));
            write_json(out, "invasion.json", &result)?;
        }
        Job::Interface1d {
            theta,
            length,
            t_end,
            seed,
        } => {
            let series = run_1d_interface(theta.0, theta.1, *length, *t_end, *seed)?;
            let mut w = create(out, "interface.csv")?;
            series.write_csv(&mut w)?;
            w.flush()?;
            progress(format!("final displacement {}", series.last()));
        }
    }
    Ok(())
}

/// Machine-readable error report.
pub fn error_json(e: &Error) -> serde_json::Value {
    let mut v = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
    if let Error::Validation(list) = e {
        v["violations"] = serde_json::json!(list);
    }
    v
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let err = Error::Parse(e.to_string().lines().next().unwrap_or_default().to_string());
            eprintln!("{}", error_json(&err));
            return 2;
        }
    };
    let result = parse_config(cli.command, &cli.flags).and_then(|job| dispatch(&job));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            match e {
                Error::Parse(_) | Error::Validation(_) => 2,
                _ => 1,
            }
        }
    }
}
