//! Low-density invasions on the torus: pure birth (M4), a global cheater
//! (M5), and a cooperative pair that coexists in the mean field but not in
//! space.
//!
//! cargo run --release --example spatial_dominance -- [side] [t_end] [replicates]

use reslat::lattice::Dims;
use reslat::meanfield::classify_two_type;
use reslat::model::{Builtin, Family, ThetaParams};
use reslat::sweep::{invasion_experiment, LatticeSettings};
use reslat::SimplexPoint;

fn main() -> reslat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let side = num(0, 100);
    let t_end = num(1, 2000) as f64;
    let reps = num(2, 10);
    let settings = LatticeSettings {
        dims: Dims::Torus(side, side),
        t_end,
        ..LatticeSettings::default()
    };

    for (name, eps) in [("M4", 0.1), ("M5", 0.2)] {
        let m = Builtin::parse(name, Some(eps), None)?.matrix()?;
        let r = invasion_experiment(&m, 1, 0.05, reps, &settings, 1)?;
        println!(
            "{name} (eps={eps}): species 2 from 5% fixates in {}/{} runs, {} unresolved",
            r.wins, r.replicates, r.unresolved
        );
    }

    let m = ThetaParams::new(Family::TwoType, vec![0.05, 0.45])?.matrix();
    println!(
        "theta=(0.05, 0.45) mean field: {}",
        classify_two_type(&m)?.label
    );
    let start = SimplexPoint::uniform(2);
    let mut extinct = 0;
    for rep in 0..reps {
        let r = settings.run_once(&m, &start, 100 + rep as u64)?;
        let last = r.last();
        if last.densities[0] == 0.0 {
            extinct += 1;
        }
        println!(
            "  run {rep}: final densities {:?}, fixation {:?}",
            last.densities, r.fixation
        );
    }
    println!("species 1 extinct in {extinct}/{reps} lattice runs");
    Ok(())
}
