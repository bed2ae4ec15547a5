//! Clustering coefficient of the two- and three-species voter models.
//!
//! cargo run --release --example voter_clustering -- [side] [t_end]

use std::time::Instant;

use reslat::lattice::{init_product_measure, run, Dims, SimConfig};
use reslat::{InteractionMatrix, SimplexPoint};

fn main() -> reslat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let side: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(100);
    let t_end: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(500.0);
    let dims = Dims::Torus(side, side);
    for n in [2, 3] {
        let start = Instant::now();
        let state = init_product_measure(dims, &SimplexPoint::uniform(n), 1)?;
        let cfg = SimConfig::for_horizon(dims, t_end, 2).with_interval(t_end / 10.0);
        let record = run(state, &InteractionMatrix::voter(n)?, &cfg)?;
        for s in &record.samples {
            println!("n={n} t={:7.1} clustering={:.4}", s.t, s.clustering);
        }
        println!(
            "n={n}: final clustering {:.4} after {} updates in {:.1?}",
            record.last().clustering,
            record.final_state.updates(),
            start.elapsed()
        );
    }
    Ok(())
}
