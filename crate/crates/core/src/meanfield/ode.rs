//! Mean-field right-hand side and a fixed-step RK4 integrator on the simplex.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{InteractionMatrix, SimplexPoint};

/// Default integration step.
pub const DEFAULT_STEP: f64 = 0.01;

/// Negative round-off down to this magnitude is clamped to zero.
const CLAMP_FLOOR: f64 = -1e-12;

/// Any coordinate below this signals an unstable step.
const INSTABILITY_FLOOR: f64 = -1e-6;

/// Resource load `D_j = Σ_m a_{m,j} u_m` for every resource.
pub fn resource_loads(m: &InteractionMatrix, u: &[f64]) -> Vec<f64> {
    let n = m.n();
    (0..n)
        .map(|j| (0..n).map(|k| m.get(k, j) * u[k]).sum())
        .collect()
}

/// Per-capita growth `G_i = Σ_j a_{i,j} u_j / D_j − 1`.
///
/// Resources with `D_j = 0` cannot be exploited by anyone present: they add
/// no birth term and, mirroring the canceled lattice update, sites holding
/// such a resource do not turn over, so the death term of species `j` is
/// dropped as well. With all loads positive this is the usual mean-field
/// growth rate.
pub fn per_capita_growth(m: &InteractionMatrix, u: &[f64]) -> Vec<f64> {
    let n = m.n();
    let loads = resource_loads(m, u);
    (0..n)
        .map(|i| {
            let birth: f64 = (0..n)
                .filter(|&j| loads[j] > 0.0)
                .map(|j| m.get(i, j) * u[j] / loads[j])
                .sum();
            let death = if loads[i] > 0.0 { 1.0 } else { 0.0 };
            birth - death
        })
        .collect()
}

/// Writes `du/dt` into `out`.
pub fn rhs_into(m: &InteractionMatrix, u: &[f64], out: &mut [f64]) {
    let n = m.n();
    debug_assert_eq!(u.len(), n);
    let mut loads = [0.0f64; 16];
    let mut heap;
    let loads: &mut [f64] = if n <= 16 {
        &mut loads[..n]
    } else {
        heap = vec![0.0; n];
        &mut heap
    };
    for (j, load) in loads.iter_mut().enumerate() {
        *load = (0..n).map(|k| m.get(k, j) * u[k]).sum();
    }
    for i in 0..n {
        let mut birth = 0.0;
        for j in 0..n {
            if loads[j] > 0.0 {
                birth += m.get(i, j) * u[j] / loads[j];
            }
        }
        let death = if loads[i] > 0.0 { 1.0 } else { 0.0 };
        out[i] = (birth - death) * u[i];
    }
}

/// Mean-field vector field `du_i/dt = G_i(u) u_i`.
pub fn rhs(m: &InteractionMatrix, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.n()];
    rhs_into(m, u, &mut out);
    out
}

/// Sampled solution of the mean-field system.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SimplexPoint>,
}

impl Trajectory {
    pub fn last(&self) -> &SimplexPoint {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }

    /// Smallest coordinate seen at or after time `t`.
    pub fn min_density_after(&self, t: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.states)
            .filter(|(s, _)| **s >= t)
            .flat_map(|(_, u)| u.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `t,u1,...,un`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.states.first().map_or(0, |s| s.n());
        let header: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=n).map(|i| format!("u{i}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (t, u) in self.times.iter().zip(&self.states) {
            write!(w, "{t}")?;
            for v in u.iter() {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Integrates an arbitrary vector field on the simplex with classical RK4.
///
/// After every step, negative round-off in `[-1e-12, 0)` is clamped to zero
/// and the state is rescaled to unit sum. Coordinates that are exactly zero
/// stay zero as long as the field is proportional to them.
pub fn integrate_with<F>(field: F, u0: &SimplexPoint, t_end: f64, step: f64) -> Result<Trajectory>
where
    F: Fn(&[f64], &mut [f64]),
{
    integrate_inner(field, u0, t_end, step, true)
}

/// Integrates the mean-field system of `m` from `u0` up to `t_end`, keeping
/// every step.
pub fn integrate(
    m: &InteractionMatrix,
    u0: &SimplexPoint,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    m.require_species(u0.n())?;
    integrate_with(|u, du| rhs_into(m, u, du), u0, t_end, step)
}

/// Like [`integrate`] but only returns the final state.
pub fn final_state(
    m: &InteractionMatrix,
    u0: &SimplexPoint,
    t_end: f64,
    step: f64,
) -> Result<SimplexPoint> {
    m.require_species(u0.n())?;
    let traj = integrate_inner(|u, du| rhs_into(m, u, du), u0, t_end, step, false)?;
    Ok(traj.last().clone())
}

fn integrate_inner<F>(
    field: F,
    u0: &SimplexPoint,
    t_end: f64,
    step: f64,
    keep_all: bool,
) -> Result<Trajectory>
where
    F: Fn(&[f64], &mut [f64]),
{
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    let n = u0.n();
    let mut u = u0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let steps = (t_end / step).ceil() as u64;
    let mut t = 0.0;
    for k in 1..=steps {
        let t_next = if k == steps { t_end } else { k as f64 * step };
        let h = t_next - t;
        if h <= 0.0 {
            continue;
        }
        field(&u, &mut k1);
        stage(&u, &k1, 0.5 * h, &mut tmp, t)?;
        field(&tmp, &mut k2);
        stage(&u, &k2, 0.5 * h, &mut tmp, t)?;
        field(&tmp, &mut k3);
        stage(&u, &k3, h, &mut tmp, t)?;
        field(&tmp, &mut k4);
        for i in 0..n {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = t_next;
        project(&mut u, t)?;
        if keep_all || k == steps {
            times.push(t);
            states.push(SimplexPoint::from_raw(u.clone()));
        }
    }
    if !keep_all {
        times.drain(..times.len() - 1);
        states.drain(..states.len() - 1);
    }
    Ok(Trajectory { times, states })
}

fn stage(u: &[f64], k: &[f64], h: f64, out: &mut [f64], t: f64) -> Result<()> {
    for i in 0..u.len() {
        out[i] = u[i] + h * k[i];
        if out[i] < INSTABILITY_FLOOR {
            return Err(Error::StepTooLarge {
                time: t,
                value: out[i],
            });
        }
    }
    Ok(())
}

fn project(u: &mut [f64], t: f64) -> Result<()> {
    for v in u.iter_mut() {
        if *v < 0.0 {
            if *v < INSTABILITY_FLOOR {
                return Err(Error::StepTooLarge { time: t, value: *v });
            }
            if *v >= CLAMP_FLOOR {
                *v = 0.0;
            }
        }
    }
    let sum: f64 = u.iter().sum();
    u.iter_mut().for_each(|v| *v /= sum);
    // Anything still negative lies in [-1e-6, -1e-12): too large to be
    // round-off, too small to flag. Clamp it so states stay on the simplex.
    for v in u.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}
