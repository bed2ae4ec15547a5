//! Cooperation cube: mean-field regimes of M8 over θ in [0, 1]^3, then a
//! few lattice runs inside the mean-field coexistence region.
//!
//! cargo run --release --example m8_cube -- [points per axis] [side] [t_end]

use std::collections::BTreeMap;

use reslat::lattice::Dims;
use reslat::model::Family;
use reslat::sweep::{run_sweep, Axis, Grid, LatticeSettings, Mode, SweepSpec};

fn main() -> reslat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let count = num(0, 7);
    let side = num(1, 60);
    let t_end = num(2, 300) as f64;

    let spec = SweepSpec {
        family: Family::M8,
        grid: Grid::Axes(vec![Axis::new(0.0, 1.0, count); 3]),
        mode: Mode::Meanfield,
        replicates: 1,
        lattice: LatticeSettings::default(),
        seed: 0,
    };
    let map = run_sweep(&spec)?;
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for c in &map.cells {
        let key = match (&c.label, &c.flag) {
            (Some(l), _) => l.to_string(),
            (None, Some(f)) => f.clone(),
            _ => "?".into(),
        };
        *tally.entry(key).or_default() += 1;
    }
    println!("mean field over {} cells:", map.cells.len());
    for (k, v) in &tally {
        println!("  {k:24} {v}");
    }

    let lattice = SweepSpec {
        grid: Grid::Points(vec![
            vec![0.05, 0.05, 0.05],
            vec![0.2, 0.2, 0.2],
            vec![0.3, 0.1, 0.2],
        ]),
        mode: Mode::Lattice,
        replicates: 2,
        lattice: LatticeSettings {
            dims: Dims::Torus(side, side),
            t_end,
            sample_interval: t_end / 10.0,
            initial: None,
        },
        seed: 8,
        ..spec
    };
    for c in run_sweep(&lattice)?.cells {
        let t = c.tally.expect("lattice cells carry a tally");
        println!(
            "lattice theta={:?}: outcomes {:?}, survivors {:?}, mean clustering {:.3}",
            c.theta, t.outcomes, t.survivors, t.mean_final_clustering
        );
    }
    Ok(())
}
