//! The four permanence scenarios M0..M3, a tristable community and two
//! heteroclinic cycles, each classified and then integrated.
//!
//! cargo run --release --example permanence_scenarios

use reslat::meanfield::{classify, heteroclinic_analysis, integrate, DEFAULT_STEP};
use reslat::model::Builtin;
use reslat::{InteractionMatrix, SimplexPoint};

fn main() -> reslat::Result<()> {
    let mut cases: Vec<(String, InteractionMatrix)> = (0..4)
        .map(|k| {
            let name = format!("M{k}");
            let m = Builtin::parse(&name, None, None)?.matrix()?;
            Ok((name, m))
        })
        .collect::<reslat::Result<_>>()?;
    cases.push((
        "tristable".into(),
        InteractionMatrix::from_rows(&[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])?,
    ));
    cases.push((
        "smooth stable cycle".into(),
        InteractionMatrix::from_rows(&[[3.0, 1.0, 4.0], [4.0, 3.0, 1.0], [1.0, 4.0, 3.0]])?,
    ));
    cases.push((
        "zero-pattern stable cycle".into(),
        InteractionMatrix::from_rows(&[[3.0, 0.0, 4.0], [4.0, 3.0, 0.0], [0.0, 4.0, 3.0]])?,
    ));

    let starts = [[0.6, 0.3, 0.1], [0.9, 0.05, 0.05], [0.1, 0.1, 0.8]];
    for (name, m) in &cases {
        let report = classify(m)?;
        let cycle = heteroclinic_analysis(m)?;
        println!("{name}: {} (cycle {:?})", report.label, cycle.kind);
        for e in &report.evidence.psi {
            println!("    psi({}) = {:.4}", e.name, e.value);
        }
        for u0 in starts {
            let traj = integrate(m, &SimplexPoint::new(u0.to_vec())?, 300.0, DEFAULT_STEP)?;
            let end = traj.last();
            println!(
                "    from {u0:?}: min density after t=50 {:.2e}, state at t=300 ({:.3}, {:.3}, {:.3})",
                traj.min_density_after(50.0),
                end[0],
                end[1],
                end[2]
            );
        }
    }
    Ok(())
}
