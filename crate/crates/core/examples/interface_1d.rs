//! A single interface between two species on a segment: neutral diffusion
//! at θ = (0.5, 0.5), drift toward the cooperator when the other species
//! defects.
//!
//! cargo run --release --example interface_1d -- [length] [t_end] [runs] [out.csv]

use std::fs::File;

use reslat::lattice::run_1d_interface;

fn main() -> reslat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: usize| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let len = num(0, 400);
    let t_end = num(1, 100) as f64;
    let runs = num(2, 100) as u64;

    for theta in [(0.5, 0.5), (0.7, 0.3), (0.9, 0.1), (0.3, 0.3)] {
        let finals: Vec<f64> = (0..runs)
            .map(|r| run_1d_interface(theta.0, theta.1, len, t_end, r).map(|s| s.last() as f64))
            .collect::<reslat::Result<_>>()?;
        let mean = finals.iter().sum::<f64>() / runs as f64;
        let var = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let ahead = finals.iter().filter(|&&x| x > 0.0).count();
        println!(
            "theta={theta:?}: mean displacement {mean:8.2}, variance {var:8.2}, type 1 ahead in {ahead}/{runs}"
        );
    }

    if let Some(path) = args.get(3) {
        run_1d_interface(0.9, 0.1, len, t_end, 0)?.write_csv(File::create(path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
