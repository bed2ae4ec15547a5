use std::io::Write;

use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, DYNAMICS_STREAM};
use super::snapshot::Image;
use super::state::{Dims, LatticeState};
use super::update::UpdateRule;
use crate::error::{Error, Result};
use crate::model::{one_based, InteractionMatrix};

/// Clustering coefficient above which a two-species run is said to cluster.
pub const CLUSTERING_THRESHOLD_TWO: f64 = 0.86;
/// Same threshold for three or more species.
pub const CLUSTERING_THRESHOLD_MANY: f64 = 0.81;
/// Final density a species needs to count as surviving.
pub const SURVIVAL_DENSITY: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub total_updates: u64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_interval")]
    pub sample_interval: f64,
}

fn default_interval() -> f64 {
    10.0
}

impl Default for SimConfig {
    /// 400×400 sites for 2000 units of time.
    fn default() -> Self {
        SimConfig {
            seed: 0,
            total_updates: 320_000_000,
            snapshot_times: Vec::new(),
            sample_interval: default_interval(),
        }
    }
}

impl SimConfig {
    /// Runs `t_end` units of time on `dims`.
    pub fn for_horizon(dims: Dims, t_end: f64, seed: u64) -> Self {
        SimConfig {
            seed,
            total_updates: (t_end * dims.sites() as f64).round() as u64,
            ..SimConfig::default()
        }
    }

    pub fn with_interval(mut self, interval: f64) -> Self {
        self.sample_interval = interval;
        self
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    pub fn horizon(&self, sites: usize) -> f64 {
        self.total_updates as f64 / sites as f64
    }

    pub fn validate(&self, sites: usize) -> Result<()> {
        if !(self.sample_interval.is_finite() && self.sample_interval > 0.0) {
            return Err(Error::InvalidParameter(
                "sample interval must be positive".into(),
            ));
        }
        if self.snapshot_times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "snapshot times must be sorted".into(),
            ));
        }
        let horizon = self.horizon(sites);
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|t| !(0.0..=horizon).contains(*t))
        {
            return Err(Error::InvalidParameter(format!(
                "snapshot time {t} outside the run [0, {horizon}]"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub densities: Vec<f64>,
    pub clustering: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixation {
    #[serde(with = "one_based")]
    pub species: usize,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub image: Image,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: SimConfig,
    pub samples: Vec<Sample>,
    pub fixation: Option<Fixation>,
    pub snapshots: Vec<Snapshot>,
    /// Configuration at the end of the run, or at fixation.
    pub final_state: LatticeState,
}

impl RunRecord {
    pub fn n_species(&self) -> usize {
        self.final_state.n_species()
    }

    pub fn last(&self) -> &Sample {
        self.samples
            .last()
            .expect("a run records at least one sample")
    }

    pub fn horizon(&self) -> f64 {
        self.last().t
    }

    /// Smallest sampled density of each species.
    pub fn min_densities(&self) -> Vec<f64> {
        let mut min = vec![f64::INFINITY; self.n_species()];
        for s in &self.samples {
            for (m, d) in min.iter_mut().zip(&s.densities) {
                *m = m.min(*d);
            }
        }
        min
    }

    pub fn max_clustering(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.clustering)
            .fold(0.0, f64::max)
    }

    /// Species whose final density exceeds [`SURVIVAL_DENSITY`].
    pub fn survivors(&self) -> Vec<usize> {
        let last = self.last();
        (0..self.n_species())
            .filter(|&i| last.densities[i] > SURVIVAL_DENSITY)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let cols: Vec<String> = (1..=self.n_species()).map(|i| format!("u{i}")).collect();
        writeln!(w, "t,{},clustering", cols.join(","))?;
        for s in &self.samples {
            let d: Vec<String> = s.densities.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{},{},{}", s.t, d.join(","), s.clustering)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> RunSummary {
        let last = self.last();
        RunSummary {
            dims: self.final_state.dims(),
            species: self.n_species(),
            seed: self.config.seed,
            total_updates: self.config.total_updates,
            updates_executed: self.final_state.updates(),
            horizon: self.horizon(),
            fixation: self.fixation,
            final_densities: last.densities.clone(),
            final_clustering: last.clustering,
            min_densities: self.min_densities(),
            outcome: classify_outcome(self, self.n_species()),
            snapshot_times: self.snapshots.iter().map(|s| s.t).collect(),
        }
    }
}

/// Run metadata written next to the density series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub dims: Dims,
    pub species: usize,
    pub seed: u64,
    pub total_updates: u64,
    pub updates_executed: u64,
    pub horizon: f64,
    pub fixation: Option<Fixation>,
    pub final_densities: Vec<f64>,
    pub final_clustering: f64,
    pub min_densities: Vec<f64>,
    pub outcome: Outcome,
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    #[serde(with = "one_based")]
    Dominant(usize),
    Clustering,
    Coexistence,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Dominant(i) => write!(f, "DOMINANT({})", i + 1),
            Outcome::Clustering => f.write_str("CLUSTERING"),
            Outcome::Coexistence => f.write_str("COEXISTENCE"),
        }
    }
}

pub fn clustering_threshold(n: usize) -> f64 {
    if n <= 2 {
        CLUSTERING_THRESHOLD_TWO
    } else {
        CLUSTERING_THRESHOLD_MANY
    }
}

/// Fixation is dominance; otherwise the final clustering coefficient is
/// compared with the threshold for `n` species.
pub fn classify_outcome(record: &RunRecord, n: usize) -> Outcome {
    if let Some(f) = record.fixation {
        return Outcome::Dominant(f.species);
    }
    if record.last().clustering >= clustering_threshold(n) {
        Outcome::Clustering
    } else {
        Outcome::Coexistence
    }
}

fn sample(state: &LatticeState, t: f64) -> Sample {
    Sample {
        t,
        densities: state.densities(),
        clustering: state.clustering_coefficient(),
    }
}

pub fn run(state: LatticeState, m: &InteractionMatrix, config: &SimConfig) -> Result<RunRecord> {
    run_observed(state, m, config, |_| {})
}

/// Runs `config.total_updates` random sequential updates, sampling every
/// `sample_interval` units of time and at the horizon. Stops early once a
/// species fixates and repeats its final sample for the remaining times.
/// `observer` sees each sample as it is taken.
pub fn run_observed<F: FnMut(&Sample)>(
    mut state: LatticeState,
    m: &InteractionMatrix,
    config: &SimConfig,
    mut observer: F,
) -> Result<RunRecord> {
    if m.n() != state.n_species() {
        return Err(Error::SpeciesCount {
            expected: state.n_species(),
            got: m.n(),
        });
    }
    let sites = state.len();
    config.validate(sites)?;
    let rule = UpdateRule::new(m)?;
    let mut rng = stream_rng(config.seed, DYNAMICS_STREAM);

    let start = state.updates();
    let end = start + config.total_updates;
    let at = |t: f64| start + (t * sites as f64).round() as u64;
    let time = |u: u64| (u - start) as f64 / sites as f64;

    let mut sample_marks = Vec::new();
    let mut k = 0u64;
    loop {
        let u = at(k as f64 * config.sample_interval);
        if u >= end {
            break;
        }
        sample_marks.push(u);
        k += 1;
    }
    sample_marks.push(end);
    let snapshot_marks: Vec<u64> = config.snapshot_times.iter().map(|&t| at(t)).collect();
    let mut events: Vec<u64> = sample_marks
        .iter()
        .chain(&snapshot_marks)
        .copied()
        .collect();
    events.sort_unstable();
    events.dedup();

    let mut fixation = state
        .monochromatic()
        .map(|species| Fixation { species, time: 0.0 });
    let mut samples = Vec::with_capacity(sample_marks.len());
    let mut snapshots = Vec::with_capacity(snapshot_marks.len());
    let mut frozen: Option<Sample> = None;

    for mark in events {
        while fixation.is_none() && state.updates() < mark {
            if rule.step(&mut state, &mut rng) {
                if let Some(species) = state.monochromatic() {
                    fixation = Some(Fixation {
                        species,
                        time: time(state.updates()),
                    });
                }
            }
        }
        let t = time(mark);
        if sample_marks.binary_search(&mark).is_ok() {
            let s = match &frozen {
                Some(f) => Sample { t, ..f.clone() },
                None => sample(&state, t),
            };
            if fixation.is_some() && frozen.is_none() {
                frozen = Some(s.clone());
            }
            observer(&s);
            samples.push(s);
        }
        for _ in snapshot_marks.iter().filter(|&&u| u == mark) {
            if let Dims::Torus(..) = state.dims() {
                snapshots.push(Snapshot {
                    t,
                    image: Image::of(&state)?,
                });
            }
        }
    }

    Ok(RunRecord {
        config: config.clone(),
        samples,
        fixation,
        snapshots,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::state::init_product_measure;
    use crate::model::SimplexPoint;

    fn half(n: usize) -> SimplexPoint {
        SimplexPoint::uniform(n)
    }

    #[test]
    fn time_bookkeeping_and_sample_grid() {
        let d = Dims::Torus(10, 10);
        let s = init_product_measure(d, &half(2), 1).unwrap();
        let cfg = SimConfig::for_horizon(d, 25.0, 3).with_interval(10.0);
        let voter = InteractionMatrix::voter(2).unwrap();
        let r = run(s, &voter, &cfg).unwrap();
        let ts: Vec<f64> = r.samples.iter().map(|s| s.t).collect();
        if r.fixation.is_none() {
            assert_eq!(r.final_state.updates(), 2500);
            assert_eq!(r.final_state.time(), 25.0);
        }
        assert_eq!(ts, vec![0.0, 10.0, 20.0, 25.0]);
        for s in &r.samples {
            assert!((s.densities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&s.clustering));
        }
    }

    #[test]
    fn fixation_stops_early_and_freezes_samples() {
        let d = Dims::Torus(5, 5);
        let mut sites = vec![0u8; 25];
        sites[12] = 1;
        let s = LatticeState::from_sites(d, 2, sites).unwrap();
        // Species 2 is a strong cheater: the single site spreads.
        let m = InteractionMatrix::from_rows(&[[0.1, 0.1], [5.0, 5.0]]).unwrap();
        let cfg = SimConfig::for_horizon(d, 500.0, 11).with_interval(50.0);
        let r = run(s, &m, &cfg).unwrap();
        let f = r.fixation.expect("fixates");
        assert!(r.final_state.updates() < cfg.total_updates);
        let after: Vec<&Sample> = r.samples.iter().filter(|s| s.t > f.time).collect();
        assert!(!after.is_empty());
        for s in after {
            assert_eq!(s.densities[f.species], 1.0);
            assert_eq!(s.clustering, 1.0);
        }
        assert_eq!(classify_outcome(&r, 2), Outcome::Dominant(f.species));
        assert_eq!(r.horizon(), 500.0);
    }

    #[test]
    fn monochromatic_start_is_absorbed() {
        let d = Dims::Torus(6, 6);
        let s = LatticeState::uniform(d, 3, 1).unwrap();
        let r = run(
            s.clone(),
            &InteractionMatrix::voter(3).unwrap(),
            &SimConfig::for_horizon(d, 5.0, 0),
        )
        .unwrap();
        assert_eq!(
            r.fixation,
            Some(Fixation {
                species: 1,
                time: 0.0
            })
        );
        assert_eq!(r.final_state.sites(), s.sites());
    }

    #[test]
    fn same_seed_same_record() {
        let d = Dims::Torus(12, 12);
        let m = InteractionMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let cfg = SimConfig::for_horizon(d, 20.0, 99)
            .with_interval(1.0)
            .with_snapshots(vec![5.0, 10.0]);
        let go = || run(init_product_measure(d, &half(2), 4).unwrap(), &m, &cfg).unwrap();
        let (a, b) = (go(), go());
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.final_state, b.final_state);
        assert_eq!(a.snapshots, b.snapshots);
        assert_eq!(a.snapshots.len(), 2);
    }

    #[test]
    fn bad_configs() {
        let d = Dims::Torus(4, 4);
        let s = LatticeState::uniform(d, 2, 0).unwrap();
        let m = InteractionMatrix::voter(2).unwrap();
        let late = SimConfig::for_horizon(d, 1.0, 0).with_snapshots(vec![2.0]);
        assert!(run(s.clone(), &m, &late).is_err());
        let unsorted = SimConfig::for_horizon(d, 5.0, 0).with_snapshots(vec![2.0, 1.0]);
        assert!(run(s.clone(), &m, &unsorted).is_err());
        let three = InteractionMatrix::voter(3).unwrap();
        assert!(run(s, &three, &SimConfig::for_horizon(d, 1.0, 0)).is_err());
    }

    #[test]
    fn outcome_thresholds() {
        let d = Dims::Torus(4, 4);
        let mut r = run(
            init_product_measure(d, &half(2), 0).unwrap(),
            &InteractionMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
            &SimConfig::for_horizon(d, 1.0, 0),
        )
        .unwrap();
        r.fixation = None;
        r.samples.last_mut().unwrap().clustering = 0.92;
        assert_eq!(classify_outcome(&r, 2), Outcome::Clustering);
        r.samples.last_mut().unwrap().clustering = 0.70;
        assert_eq!(classify_outcome(&r, 3), Outcome::Coexistence);
        r.samples.last_mut().unwrap().clustering = 0.83;
        assert_eq!(classify_outcome(&r, 2), Outcome::Coexistence);
        assert_eq!(classify_outcome(&r, 3), Outcome::Clustering);
        let json = serde_json::to_string(&Outcome::Dominant(1)).unwrap();
        assert_eq!(json, r#"{"DOMINANT":2}"#);
    }
}
