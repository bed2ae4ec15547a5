//! Two species on a segment started from a single interface.

use std::io::Write;

use rand::Rng;

use super::rng::{stream_rng, DYNAMICS_STREAM};
use super::update::UpdateRule;
use crate::error::{Error, Result};
use crate::model::{Family, ThetaParams};

/// Interface position relative to its start, sampled at integer times.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceSeries {
    pub times: Vec<f64>,
    /// Gain in type-1 sites; positive when type 1 advances.
    pub displacement: Vec<i64>,
}

impl InterfaceSeries {
    pub fn last(&self) -> i64 {
        *self.displacement.last().expect("series starts at t = 0")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,displacement")?;
        for (t, d) in self.times.iter().zip(&self.displacement) {
            writeln!(w, "{t},{d}")?;
        }
        Ok(())
    }
}

/// Runs the two-species process with matrix `[[θ1, 1-θ2], [1-θ1, θ2]]` on
/// `L` sites, type 1 on the left half and type 2 on the right. The two end
/// sites never update; the others update in random order, `L - 2` updates
/// per unit of time.
pub fn run_1d_interface(
    theta1: f64,
    theta2: f64,
    len: usize,
    t_end: f64,
    seed: u64,
) -> Result<InterfaceSeries> {
    if len < 4 || !len.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "segment length {len} must be even and at least 4"
        )));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter("t_end must be nonnegative".into()));
    }
    let m = ThetaParams::new(Family::TwoType, vec![theta1, theta2])?.matrix();
    let rule = UpdateRule::new(&m)?;
    let mut rng = stream_rng(seed, DYNAMICS_STREAM);

    let mut sites = vec![0u8; len];
    sites[len / 2..].fill(1);
    let mut type1 = (len / 2) as i64;
    let start = type1;
    let inner = (len - 2) as u64;

    let steps = t_end.floor() as u64;
    let mut times = vec![0.0];
    let mut displacement = vec![0];
    for t in 1..=steps {
        for _ in 0..inner {
            let x = rng.random_range(1..len - 1);
            let current = sites[x];
            let nb = [sites[x - 1], sites[x + 1]];
            if let Some(s) = rule.resolve(current, &nb, &mut rng) {
                if s != current {
                    sites[x] = s;
                    type1 += if s == 0 { 1 } else { -1 };
                }
            }
        }
        times.push(t as f64);
        displacement.push(type1 - start);
    }
    Ok(InterfaceSeries {
        times,
        displacement,
    })
}
