//! Cyclic dominance on the torus: the mean-field verdict next to a lattice
//! run, with PPM snapshots.
//!
//! cargo run --release --example rock_paper_scissors -- [theta1 theta2 theta3] [side] [t_end] [outdir]
//!
//! Starts from 90% species 1 and 5% of each other species; snapshots are
//! taken at t = 40, 80, 120 when the run is long enough.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use reslat::lattice::{init_product_measure, run, Dims, SimConfig};
use reslat::meanfield::{classify, heteroclinic_analysis};
use reslat::model::{Family, ThetaParams};
use reslat::SimplexPoint;

fn main() -> reslat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let theta = vec![num(0, 0.6), num(1, 0.7), num(2, 0.8)];
    let side = num(3, 200.0) as usize;
    let t_end = num(4, 500.0);
    let out = args.get(5).map(PathBuf::from);

    let m = ThetaParams::new(Family::M9, theta.clone())?.matrix();
    println!("matrix\n{m}");
    let cycle = heteroclinic_analysis(&m)?;
    println!(
        "heteroclinic cycle: {:?}, row sums {:?}",
        cycle.kind, cycle.row_sums
    );
    match classify(&m) {
        Ok(report) => println!("mean-field regime: {}", report.label),
        Err(e) => println!("mean-field regime: {e}"),
    }

    let dims = Dims::Torus(side, side);
    let start = SimplexPoint::new(vec![0.9, 0.05, 0.05])?;
    let state = init_product_measure(dims, &start, 7)?;
    let snaps: Vec<f64> = [40.0, 80.0, 120.0]
        .into_iter()
        .filter(|&t| t <= t_end)
        .collect();
    let cfg = SimConfig::for_horizon(dims, t_end, 8)
        .with_interval(t_end / 20.0)
        .with_snapshots(snaps);
    let record = run(state, &m, &cfg)?;
    for s in &record.samples {
        let d: Vec<String> = s.densities.iter().map(|v| format!("{v:.3}")).collect();
        println!(
            "t={:7.1} densities=[{}] clustering={:.3}",
            s.t,
            d.join(", "),
            s.clustering
        );
    }
    println!("minimum densities {:?}", record.min_densities());
    println!("lattice outcome: {}", record.summary().outcome);

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        for snap in &record.snapshots {
            let path = dir.join(format!("rps_t{:04}.ppm", snap.t as u64));
            snap.image.write_ppm(BufWriter::new(File::create(&path)?))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
