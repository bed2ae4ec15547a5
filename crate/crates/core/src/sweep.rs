//! Phase diagrams over θ-families, by mean-field classification or by
//! replicated lattice runs.
//!
//! Work items are (cell, replicate) pairs. Each gets its own seed from
//! [`derive_seed`], items run on the ambient rayon pool, and results are
//! gathered in index order, so a map does not depend on scheduling.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    classify_outcome, derive_seed, init_product_measure, palette, run, Dims, Outcome, RunRecord,
    SimConfig,
};
use crate::meanfield::{
    classify, classify_m8, classify_two_type, heteroclinic_analysis, permanence_check, CycleKind,
};
use crate::model::{
    Family, InteractionMatrix, RegimeLabel, RegimeReport, SimplexPoint, ThetaParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    #[serde(alias = "MEAN_FIELD", alias = "meanfield")]
    Meanfield,
    #[serde(alias = "lattice")]
    Lattice,
}

/// `count` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Axis { min, max, count }
    }

    pub fn fixed(value: f64) -> Self {
        Axis::new(value, value, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    /// Cartesian product, first axis varying fastest.
    Axes(Vec<Axis>),
    /// Explicit θ points, e.g. a line through the cube.
    Points(Vec<Vec<f64>>),
}

impl Grid {
    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            Grid::Points(p) => p.clone(),
            Grid::Axes(axes) => {
                // Earlier axes vary fastest.
                let mut out: Vec<Vec<f64>> = vec![Vec::new()];
                for axis in axes {
                    out = axis
                        .values()
                        .into_iter()
                        .flat_map(|v| {
                            out.iter().map(move |p| {
                                let mut q = p.clone();
                                q.push(v);
                                q
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }

    /// Counts of the axes that take more than one value.
    pub fn shape(&self) -> Vec<usize> {
        match self {
            Grid::Points(p) => vec![p.len()],
            Grid::Axes(axes) => axes.iter().map(|a| a.count).filter(|&c| c > 1).collect(),
        }
    }

    fn validate(&self, species: usize) -> Result<()> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        match self {
            Grid::Axes(axes) => {
                if axes.len() != species {
                    return Err(Error::SpeciesCount {
                        expected: species,
                        got: axes.len(),
                    });
                }
                for a in axes {
                    if a.count == 0 || !in_unit(a.min) || !in_unit(a.max) {
                        return Err(Error::InvalidParameter(format!(
                            "axis {a:?} needs count >= 1 and bounds in [0, 1]"
                        )));
                    }
                }
            }
            Grid::Points(points) => {
                if points.is_empty() {
                    return Err(Error::InvalidParameter("empty point list".into()));
                }
                for p in points {
                    if p.len() != species {
                        return Err(Error::SpeciesCount {
                            expected: species,
                            got: p.len(),
                        });
                    }
                    if !p.iter().all(|&v| in_unit(v)) {
                        return Err(Error::InvalidParameter(format!(
                            "point {p:?} outside [0, 1]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Lattice runs made for each cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatticeSettings {
    pub dims: Dims,
    pub t_end: f64,
    pub sample_interval: f64,
    /// Initial product-measure densities; uniform when absent.
    pub initial: Option<Vec<f64>>,
}

impl Default for LatticeSettings {
    /// Desk-scale: 200×200 for 1000 units of time.
    fn default() -> Self {
        LatticeSettings {
            dims: Dims::Torus(200, 200),
            t_end: 1000.0,
            sample_interval: 50.0,
            initial: None,
        }
    }
}

impl LatticeSettings {
    fn start(&self, n: usize) -> Result<SimplexPoint> {
        match &self.initial {
            Some(u) => SimplexPoint::new(u.clone()),
            None => Ok(SimplexPoint::uniform(n)),
        }
    }

    /// One seeded run from a product measure.
    pub fn run_once(
        &self,
        m: &InteractionMatrix,
        start: &SimplexPoint,
        seed: u64,
    ) -> Result<RunRecord> {
        let state = init_product_measure(self.dims, start, seed)?;
        let cfg =
            SimConfig::for_horizon(self.dims, self.t_end, seed).with_interval(self.sample_interval);
        run(state, m, &cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub grid: Grid,
    pub mode: Mode,
    #[serde(default = "one")]
    pub replicates: usize,
    #[serde(default)]
    pub lattice: LatticeSettings,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate(self.family.species())?;
        if self.replicates == 0 {
            return Err(Error::InvalidParameter(
                "replicates must be at least 1".into(),
            ));
        }
        if self.mode == Mode::Lattice {
            self.lattice.dims.validate()?;
            self.lattice.start(self.family.species())?;
            if !(self.lattice.t_end.is_finite() && self.lattice.t_end >= 0.0) {
                return Err(Error::InvalidParameter(
                    "lattice t_end must be nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    fn require_family(&self, family: Family) -> Result<()> {
        if self.family == family {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "this sweep needs family {family}, got {}",
                self.family
            )))
        }
    }
}

/// One lattice replicate of a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    pub seed: u64,
    pub outcome: Outcome,
    pub final_densities: Vec<f64>,
    pub final_clustering: f64,
    pub min_densities: Vec<f64>,
    /// 1-based species above the survival density at the end.
    pub survivors: Vec<usize>,
}

impl Replicate {
    fn from_record(seed: u64, r: &RunRecord) -> Self {
        let last = r.last();
        Replicate {
            seed,
            outcome: classify_outcome(r, r.n_species()),
            final_densities: last.densities.clone(),
            final_clustering: last.clustering,
            min_densities: r.min_densities(),
            survivors: r.survivors().into_iter().map(|i| i + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeTally {
    pub replicates: usize,
    /// Outcome name to count.
    pub outcomes: BTreeMap<String, usize>,
    /// Survivor set such as `"1,2"` to count.
    pub survivors: BTreeMap<String, usize>,
    pub mean_final_clustering: f64,
    /// Smallest sampled density of each species over all replicates.
    pub min_densities: Vec<f64>,
    pub runs: Vec<Replicate>,
}

impl LatticeTally {
    fn new(runs: Vec<Replicate>) -> Self {
        let mut outcomes = BTreeMap::new();
        let mut survivors = BTreeMap::new();
        for r in &runs {
            *outcomes.entry(r.outcome.to_string()).or_insert(0) += 1;
            let key: Vec<String> = r.survivors.iter().map(|s| s.to_string()).collect();
            *survivors.entry(key.join(",")).or_insert(0) += 1;
        }
        let n = runs.first().map_or(0, |r| r.min_densities.len());
        let min_densities = (0..n)
            .map(|i| {
                runs.iter()
                    .map(|r| r.min_densities[i])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        LatticeTally {
            replicates: runs.len(),
            outcomes,
            survivors,
            mean_final_clustering: runs.iter().map(|r| r.final_clustering).sum::<f64>()
                / runs.len() as f64,
            min_densities,
            runs,
        }
    }

    /// Most frequent outcome; ties go to the first in name order.
    pub fn majority(&self) -> Option<&str> {
        let best = self.outcomes.values().copied().max()?;
        self.outcomes
            .iter()
            .find(|(_, &c)| c == best)
            .map(|(k, _)| k.as_str())
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.outcomes
            .get(&outcome.to_string())
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub index: usize,
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<RegimeLabel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<RegimeReport>,
    /// Error kind when the cell could not be classified, e.g. `DEGENERATE`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tally: Option<LatticeTally>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeMap {
    pub spec: SweepSpec,
    pub cells: Vec<Cell>,
}

type Classifier = fn(&ThetaParams) -> Result<RegimeReport>;

fn sweep(spec: &SweepSpec, classifier: Classifier) -> Result<RegimeMap> {
    spec.validate()?;
    let points = spec.grid.points();
    let n = spec.family.species();
    let params: Vec<ThetaParams> = points
        .iter()
        .map(|p| ThetaParams::new(spec.family, p.clone()))
        .collect::<Result<_>>()?;

    let cells = match spec.mode {
        Mode::Meanfield => params
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                let (label, report, flag) = match classifier(p) {
                    Ok(r) => (Some(r.label), Some(r), None),
                    Err(e) => (None, None, Some(e.kind().to_string())),
                };
                Cell {
                    index,
                    theta: p.theta.clone(),
                    label,
                    report,
                    flag,
                    tally: None,
                }
            })
            .collect(),
        Mode::Lattice => {
            let start = spec.lattice.start(n)?;
            let reps = spec.replicates;
            let runs: Vec<Replicate> = (0..params.len() * reps)
                .into_par_iter()
                .map(|item| {
                    let (cell, rep) = (item / reps, item % reps);
                    let seed = derive_seed(spec.seed, cell as u64, rep as u64);
                    let record = spec
                        .lattice
                        .run_once(&params[cell].matrix(), &start, seed)?;
                    Ok(Replicate::from_record(seed, &record))
                })
                .collect::<Result<_>>()?;
            let mut runs = runs.into_iter();
            params
                .iter()
                .enumerate()
                .map(|(index, p)| Cell {
                    index,
                    theta: p.theta.clone(),
                    label: None,
                    report: None,
                    flag: None,
                    tally: Some(LatticeTally::new(runs.by_ref().take(reps).collect())),
                })
                .collect()
        }
    };
    Ok(RegimeMap {
        spec: spec.clone(),
        cells,
    })
}

/// Two-species diagram over (θ1, θ2).
pub fn two_type_diagram(spec: &SweepSpec) -> Result<RegimeMap> {
    spec.require_family(Family::TwoType)?;
    sweep(spec, |p| classify_two_type(&p.matrix()))
}

/// Label on the global defector/cooperator family with the supporting
/// three-species evidence when the matrix is not degenerate.
pub fn classify_m8_params(p: &ThetaParams) -> Result<RegimeReport> {
    let theta = <[f64; 3]>::try_from(p.theta.as_slice()).map_err(|_| Error::SpeciesCount {
        expected: 3,
        got: p.theta.len(),
    })?;
    let label = classify_m8(&theta)?;
    let evidence = permanence_check(&p.matrix())
        .map(|r| r.evidence)
        .unwrap_or_default();
    Ok(RegimeReport { label, evidence })
}

/// Three-dimensional sweep of the defector/cooperator family.
pub fn m8_cube_sweep(spec: &SweepSpec) -> Result<RegimeMap> {
    spec.require_family(Family::M8)?;
    sweep(spec, classify_m8_params)
}

/// Label on the rock-paper-scissors family: the heteroclinic cycle decides
/// when it exists, the general classifier otherwise.
pub fn classify_m9_params(p: &ThetaParams) -> Result<RegimeReport> {
    let m = p.matrix();
    let cycle = heteroclinic_analysis(&m)?;
    let mut report = classify(&m)?;
    match cycle.kind {
        CycleKind::StableCycle => report.label = RegimeLabel::HeteroclinicStable,
        CycleKind::RepellingCycle => report.label = RegimeLabel::HeteroclinicRepellingPermanent,
        _ => {}
    }
    Ok(report)
}

/// Sweep of the rock-paper-scissors family, usually over (θ1, θ2) with θ3
/// held by a single-valued axis.
pub fn m9_slice_sweep(spec: &SweepSpec) -> Result<RegimeMap> {
    spec.require_family(Family::M9)?;
    sweep(spec, classify_m9_params)
}

/// Runs the sweep that matches the spec's family.
pub fn run_sweep(spec: &SweepSpec) -> Result<RegimeMap> {
    match spec.family {
        Family::TwoType => two_type_diagram(spec),
        Family::M8 => m8_cube_sweep(spec),
        Family::M9 => m9_slice_sweep(spec),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvasionResult {
    /// 1-based.
    pub invader: usize,
    pub initial_density: f64,
    pub replicates: usize,
    pub wins: usize,
    pub frequency: f64,
    /// Runs that reached the horizon without fixation.
    pub unresolved: usize,
    /// Fixations per species, 1-based keys.
    pub fixations: BTreeMap<usize, usize>,
}

/// Fixation frequency of `invader` (0-based) started at `density`, the rest
/// shared equally by the other species.
pub fn invasion_experiment(
    m: &InteractionMatrix,
    invader: usize,
    density: f64,
    replicates: usize,
    settings: &LatticeSettings,
    seed: u64,
) -> Result<InvasionResult> {
    let n = m.n();
    if invader >= n {
        return Err(Error::InvalidParameter(format!(
            "invader {} of {n} species",
            invader + 1
        )));
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density {density} outside (0, 1)"
        )));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter(
            "replicates must be at least 1".into(),
        ));
    }
    let rest = (1.0 - density) / (n - 1) as f64;
    let start = SimplexPoint::new(
        (0..n)
            .map(|i| if i == invader { density } else { rest })
            .collect(),
    )?;
    let fixed: Vec<Option<usize>> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let s = derive_seed(seed, 0, rep as u64);
            Ok(settings.run_once(m, &start, s)?.fixation.map(|f| f.species))
        })
        .collect::<Result<_>>()?;
    let mut fixations = BTreeMap::new();
    for f in fixed.iter().flatten() {
        *fixations.entry(f + 1).or_insert(0) += 1;
    }
    let wins = fixations.get(&(invader + 1)).copied().unwrap_or(0);
    Ok(InvasionResult {
        invader: invader + 1,
        initial_density: density,
        replicates,
        wins,
        frequency: wins as f64 / replicates as f64,
        unresolved: fixed.iter().filter(|f| f.is_none()).count(),
        fixations,
    })
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

const LABEL_COLORS: [[u8; 3]; 8] = [
    [230, 230, 230],
    [214, 39, 40],
    [31, 119, 180],
    [44, 160, 44],
    [255, 127, 14],
    [148, 103, 189],
    [140, 86, 75],
    [127, 127, 127],
];

impl RegimeMap {
    /// Mean-field label or lattice majority of a cell, as text.
    pub fn cell_summary(cell: &Cell) -> String {
        if let Some(f) = &cell.flag {
            return f.clone();
        }
        if let Some(l) = cell.label {
            return l.to_string();
        }
        cell.tally
            .as_ref()
            .and_then(|t| t.majority().map(str::to_string))
            .unwrap_or_default()
    }

    fn cell_color(cell: &Cell) -> [u8; 3] {
        if cell.flag.is_some() {
            return [0, 0, 0];
        }
        if let Some(t) = &cell.tally {
            return match t.majority() {
                Some("COEXISTENCE") => [255, 255, 255],
                Some("CLUSTERING") => [250, 200, 40],
                Some(s) => {
                    let species: usize = s
                        .trim_start_matches("DOMINANT(")
                        .trim_end_matches(')')
                        .parse()
                        .unwrap_or(1);
                    let c = palette(species + 2);
                    [c[0], c[1], c[2]]
                }
                None => [0, 0, 0],
            };
        }
        let idx = match cell.label {
            Some(RegimeLabel::CooperationCoexist) | Some(RegimeLabel::PermanentCase(_)) => 0,
            Some(RegimeLabel::HeteroclinicRepellingPermanent) => 0,
            Some(RegimeLabel::CheaterWins(i)) => 1 + i.min(2),
            Some(RegimeLabel::Bistable) => 4,
            Some(RegimeLabel::Tristable) => 5,
            Some(RegimeLabel::HeteroclinicStable) => 6,
            _ => 7,
        };
        LABEL_COLORS[idx]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let k = self.spec.family.species();
        let thetas: Vec<String> = (1..=k).map(|i| format!("theta{i}")).collect();
        let lattice = self.spec.mode == Mode::Lattice;
        if lattice {
            let mins: Vec<String> = (1..=k).map(|i| format!("min_u{i}")).collect();
            let dom: Vec<String> = (1..=k).map(|i| format!("dominant{i}")).collect();
            writeln!(
                w,
                "cell,{},majority,{},clustering,coexistence,mean_clustering,{}",
                thetas.join(","),
                dom.join(","),
                mins.join(",")
            )?;
        } else {
            writeln!(w, "cell,{},label,flag", thetas.join(","))?;
        }
        for c in &self.cells {
            let th: Vec<String> = c.theta.iter().map(|v| v.to_string()).collect();
            match &c.tally {
                Some(t) if lattice => {
                    let dom: Vec<String> = (0..k)
                        .map(|i| t.count(Outcome::Dominant(i)).to_string())
                        .collect();
                    let mins: Vec<String> = t.min_densities.iter().map(|v| v.to_string()).collect();
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{}",
                        c.index,
                        th.join(","),
                        t.majority().unwrap_or(""),
                        dom.join(","),
                        t.count(Outcome::Clustering),
                        t.count(Outcome::Coexistence),
                        t.mean_final_clustering,
                        mins.join(",")
                    )?;
                }
                _ => {
                    let label = c.label.map(|l| l.to_string()).unwrap_or_default();
                    writeln!(
                        w,
                        "{},{},{},{}",
                        c.index,
                        th.join(","),
                        label,
                        c.flag.as_deref().unwrap_or("")
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// One pixel per cell. Up to two varying axes map to x and y; a third
    /// varying axis tiles the slices left to right with a one-pixel gap.
    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        let shape = self.spec.grid.shape();
        let (nx, ny, nz) = match shape.as_slice() {
            [] => (1, 1, 1),
            [a] => (*a, 1, 1),
            [a, b] => (*a, *b, 1),
            [a, b, c, ..] => (*a, *b, *c),
        };
        let width = nx * nz + nz.saturating_sub(1);
        let height = ny;
        let mut pixels = vec![[40u8, 40, 40]; width * height];
        for (k, cell) in self.cells.iter().enumerate() {
            let (x, y, z) = (k % nx, (k / nx) % ny, k / (nx * ny));
            if z < nz {
                // Row 0 at the top holds the largest second coordinate.
                pixels[(ny - 1 - y) * width + z * (nx + 1) + x] = Self::cell_color(cell);
            }
        }
        write!(w, "P6\n{width} {height}\n255\n")?;
        let bytes: Vec<u8> = pixels.into_iter().flatten().collect();
        w.write_all(&bytes)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meanfield(family: Family, grid: Grid) -> SweepSpec {
        SweepSpec {
            family,
            grid,
            mode: Mode::Meanfield,
            replicates: 1,
            lattice: LatticeSettings::default(),
            seed: 0,
        }
    }

    #[test]
    fn axes_expand_first_fastest() {
        let g = Grid::Axes(vec![Axis::new(0.0, 1.0, 3), Axis::new(0.2, 0.4, 2)]);
        let p = g.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0.0, 0.2]);
        assert_eq!(p[1], vec![0.5, 0.2]);
        assert_eq!(p[3], vec![0.0, 0.4]);
        assert_eq!(g.shape(), vec![3, 2]);
        assert_eq!(Axis::fixed(0.8).values(), vec![0.8]);
    }

    #[test]
    fn two_type_meanfield_cells() {
        let spec = meanfield(
            Family::TwoType,
            Grid::Points(vec![
                vec![0.3, 0.7],
                vec![0.5, 0.5],
                vec![0.7, 0.7],
                vec![0.2, 0.3],
            ]),
        );
        let map = two_type_diagram(&spec).unwrap();
        assert_eq!(map.cells[0].label, Some(RegimeLabel::CheaterWins(1)));
        assert_eq!(map.cells[1].flag.as_deref(), Some("DEGENERATE"));
        assert_eq!(map.cells[2].label, Some(RegimeLabel::Bistable));
        assert_eq!(map.cells[3].label, Some(RegimeLabel::CooperationCoexist));
    }

    #[test]
    fn m8_and_m9_examples() {
        let m8 = m8_cube_sweep(&meanfield(
            Family::M8,
            Grid::Points(vec![vec![0.1, 0.2, 0.3], vec![0.5, 0.6, 0.7]]),
        ))
        .unwrap();
        assert!(m8.cells[0].label.unwrap().is_coexistence());
        assert_eq!(m8.cells[1].label, Some(RegimeLabel::Tristable));
        let m9 = m9_slice_sweep(&meanfield(
            Family::M9,
            Grid::Points(vec![vec![0.6, 0.7, 0.8], vec![0.2, 0.3, 0.4]]),
        ))
        .unwrap();
        assert_eq!(m9.cells[0].label, Some(RegimeLabel::HeteroclinicStable));
        assert_eq!(
            m9.cells[1].label,
            Some(RegimeLabel::HeteroclinicRepellingPermanent)
        );
        assert!(
            two_type_diagram(&meanfield(Family::M9, Grid::Points(vec![vec![0.1; 3]]))).is_err()
        );
    }

    #[test]
    fn lattice_tally_is_order_independent() {
        let spec = SweepSpec {
            family: Family::TwoType,
            grid: Grid::Axes(vec![Axis::new(0.2, 0.8, 2), Axis::fixed(0.7)]),
            mode: Mode::Lattice,
            replicates: 3,
            lattice: LatticeSettings {
                dims: Dims::Torus(12, 12),
                t_end: 20.0,
                ..LatticeSettings::default()
            },
            seed: 5,
        };
        let a = two_type_diagram(&spec).unwrap();
        let b = with_threads(Some(1), || two_type_diagram(&spec))
            .unwrap()
            .unwrap();
        assert_eq!(a, b);
        for c in &a.cells {
            let t = c.tally.as_ref().unwrap();
            assert_eq!(t.outcomes.values().sum::<usize>(), 3);
            assert_eq!(t.survivors.values().sum::<usize>(), 3);
        }
        // Cells are independent: the second cell alone gives the same runs.
        let single = SweepSpec {
            grid: Grid::Points(vec![vec![0.2, 0.7], vec![0.8, 0.7]]),
            ..spec.clone()
        };
        assert_eq!(two_type_diagram(&single).unwrap().cells, a.cells);
    }

    #[test]
    fn exports() {
        let spec = meanfield(
            Family::TwoType,
            Grid::Axes(vec![Axis::new(0.1, 0.9, 3), Axis::new(0.2, 0.8, 2)]),
        );
        let map = two_type_diagram(&spec).unwrap();
        let mut csv = Vec::new();
        map.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("cell,theta1,theta2,label,flag\n"));
        assert_eq!(csv.lines().count(), 7);
        let mut ppm = Vec::new();
        map.write_ppm(&mut ppm).unwrap();
        assert!(ppm.starts_with(b"P6\n3 2\n255\n"));
        let mut json = Vec::new();
        map.write_json(&mut json).unwrap();
        let back: RegimeMap = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, map);
    }

    #[test]
    fn invasion_validation() {
        let m = InteractionMatrix::voter(2).unwrap();
        let s = LatticeSettings {
            dims: Dims::Torus(5, 5),
            t_end: 5.0,
            ..LatticeSettings::default()
        };
        assert!(invasion_experiment(&m, 2, 0.05, 3, &s, 0).is_err());
        assert!(invasion_experiment(&m, 0, 1.0, 3, &s, 0).is_err());
        let r = invasion_experiment(&m, 0, 0.2, 4, &s, 0).unwrap();
        assert_eq!(r.replicates, 4);
        assert_eq!(r.fixations.values().sum::<usize>() + r.unresolved, 4);
    }
}
