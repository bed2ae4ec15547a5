//! Mean-field regimes of two species over the θ-plane, printed as a
//! character map, followed by trajectories for one point of each regime.
//!
//! cargo run --release --example two_type_phase_diagram -- [points per axis]

use reslat::meanfield::{final_state, DEFAULT_STEP};
use reslat::model::{Family, ThetaParams};
use reslat::sweep::{run_sweep, Axis, Grid, LatticeSettings, Mode, SweepSpec};
use reslat::{RegimeLabel, SimplexPoint};

fn glyph(label: Option<RegimeLabel>) -> char {
    match label {
        Some(RegimeLabel::CheaterWins(0)) => '1',
        Some(RegimeLabel::CheaterWins(_)) => '2',
        Some(RegimeLabel::Bistable) => 'B',
        Some(RegimeLabel::CooperationCoexist) => 'C',
        _ => '.',
    }
}

fn main() -> reslat::Result<()> {
    let count = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(21);
    let spec = SweepSpec {
        family: Family::TwoType,
        grid: Grid::Axes(vec![Axis::new(0.0, 1.0, count); 2]),
        mode: Mode::Meanfield,
        replicates: 1,
        lattice: LatticeSettings::default(),
        seed: 0,
    };
    let map = run_sweep(&spec)?;

    println!("theta2 down, theta1 across; 1/2 = cheater wins, B = bistable, C = coexist, . = tie");
    for row in (0..count).rev() {
        let line: String = map.cells[row * count..(row + 1) * count]
            .iter()
            .map(|c| glyph(c.label))
            .collect();
        println!("{:5.2} {line}", map.cells[row * count].theta[1]);
    }

    for theta in [[0.8, 0.2], [0.2, 0.3], [0.8, 0.7]] {
        let m = ThetaParams::new(Family::TwoType, theta.to_vec())?.matrix();
        print!("theta={theta:?}:");
        for u1 in [0.1, 0.5, 0.9] {
            let end = final_state(
                &m,
                &SimplexPoint::new(vec![u1, 1.0 - u1])?,
                200.0,
                DEFAULT_STEP,
            )?;
            print!("  u1 {u1} -> {:.4}", end[0]);
        }
        println!();
    }
    Ok(())
}
