//! Boundary equilibria, heteroclinic cycles and permanence for three species.
//!
//! Species are 0-based here; names in evidence (`e1,2`, `Delta_1,2`) are
//! 1-based.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::ode::per_capita_growth;
use super::two_type::{classify_two_type, edge_equilibrium, pair_relation, vertex, PairRelation};
use crate::error::{Error, Result};
use crate::model::{
    strict_cmp, strict_sign, BoundaryEquilibrium, Evidence, InteractionMatrix, RegimeLabel,
    RegimeReport,
};

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn third(i: usize, j: usize) -> usize {
    3 - i - j
}

fn pair_name(i: usize, j: usize) -> String {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    format!("{},{}", a + 1, b + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VertexStability {
    Sink,
    Source,
    Saddle,
}

/// Stability of the vertex `e_i` with its two transversal eigenvalues,
/// listed in increasing order of the other species' index.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexReport {
    pub stability: VertexStability,
    pub eigenvalues: [f64; 2],
}

/// Linearization at `e_i`: eigenvalues `(a_ji − a_ii) / a_ii`.
pub fn trivial_equilibrium_stability(m: &InteractionMatrix, i: usize) -> Result<VertexReport> {
    m.require_species(3)?;
    let aii = m.get(i, i);
    if aii == 0.0 {
        return Err(Error::ZeroDiagonal { species: i });
    }
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let mut signs = [Ordering::Equal; 2];
    let mut eigenvalues = [0.0; 2];
    for (slot, &j) in others.iter().enumerate() {
        signs[slot] = m.diagonal_vs(i, j)?.reverse();
        eigenvalues[slot] = (m.get(j, i) - aii) / aii;
    }
    let stability = match signs {
        [Ordering::Less, Ordering::Less] => VertexStability::Sink,
        [Ordering::Greater, Ordering::Greater] => VertexStability::Source,
        _ => VertexStability::Saddle,
    };
    Ok(VertexReport {
        stability,
        eigenvalues,
    })
}

/// Invadibility of the pair equilibrium `e_{i,j}` by the third species `k`:
/// `(2a_ki − a_ii − a_ji)(a_ij − a_jj) + (2a_kj − a_ij − a_jj)(a_ji − a_ii)`.
pub fn invadibility(m: &InteractionMatrix, i: usize, j: usize) -> f64 {
    let k = third(i, j);
    let a = |r: usize, c: usize| m.get(r, c);
    (2.0 * a(k, i) - a(i, i) - a(j, i)) * (a(i, j) - a(j, j))
        + (2.0 * a(k, j) - a(i, j) - a(j, j)) * (a(j, i) - a(i, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeStability {
    /// Attracting along the edge, not invadable.
    Stable,
    /// Attracting along the edge, invadable by the third species.
    Repelling,
    Source,
    Saddle,
    Absent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReport {
    pub stability: EdgeStability,
    pub equilibrium: Option<BoundaryEquilibrium>,
    pub delta: f64,
    /// Eigenvalue along the edge.
    pub tangent: Option<f64>,
    /// Growth rate of the third species at the equilibrium.
    pub transversal: Option<f64>,
}

pub fn nontrivial_equilibrium_stability(
    m: &InteractionMatrix,
    i: usize,
    j: usize,
) -> Result<EdgeReport> {
    m.require_species(3)?;
    let delta = invadibility(m, i, j);
    let relation = pair_relation(m, i, j)?;
    let Some(eq) = edge_equilibrium(m, i, j)? else {
        return Ok(EdgeReport {
            stability: EdgeStability::Absent,
            equilibrium: None,
            delta,
            tangent: None,
            transversal: None,
        });
    };
    let invadable = strict_sign(delta, || format!("Delta_{} = 0", pair_name(i, j)))?;
    let stability = match (relation, invadable) {
        (PairRelation::Cooperation, Ordering::Less) => EdgeStability::Stable,
        (PairRelation::Cooperation, _) => EdgeStability::Repelling,
        (_, Ordering::Less) => EdgeStability::Source,
        _ => EdgeStability::Saddle,
    };
    let sub = m.submatrix(&[i, j])?;
    let tangent = Evidence::lookup(
        &classify_two_type(&sub)?.evidence.eigenvalues,
        "e1,2:lambda",
    );
    let transversal = per_capita_growth(m, eq.point.as_slice())[third(i, j)];
    Ok(EdgeReport {
        stability,
        equilibrium: Some(eq),
        delta,
        tangent,
        transversal: Some(transversal),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CycleKind {
    NoCycle,
    StableCycle,
    RepellingCycle,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleReport {
    pub kind: CycleKind,
    /// Species in the order the cycle visits them.
    pub orientation: Option<[usize; 3]>,
    /// `(a_ji + a_ki − 2a_ii) / a_ii` for each species `i`.
    pub row_sums: Option<[f64; 3]>,
}

/// `a31 < a11 < a21`, `a12 < a22 < a32`, `a23 < a33 < a13`: the cycle
/// `e1 → e2 → e3 → e1` exists.
fn cycle_exists(b: &InteractionMatrix) -> bool {
    let a = |r: usize, c: usize| b.get(r, c);
    a(2, 0) < a(0, 0)
        && a(0, 0) < a(1, 0)
        && a(0, 1) < a(1, 1)
        && a(1, 1) < a(2, 1)
        && a(1, 2) < a(2, 2)
        && a(2, 2) < a(0, 2)
}

fn row_sums(m: &InteractionMatrix) -> [f64; 3] {
    std::array::from_fn(|i| {
        let off: f64 = (0..3).filter(|&j| j != i).map(|j| m.get(j, i)).sum();
        (off - 2.0 * m.get(i, i)) / m.get(i, i)
    })
}

pub fn heteroclinic_analysis(m: &InteractionMatrix) -> Result<CycleReport> {
    m.require_species(3)?;
    require_no_diagonal_ties(m)?;
    let orientation = [[0, 1, 2], [0, 2, 1]]
        .into_iter()
        .find(|sigma| cycle_exists(&m.permuted(sigma)));
    let Some(orientation) = orientation else {
        return Ok(CycleReport {
            kind: CycleKind::NoCycle,
            orientation: None,
            row_sums: None,
        });
    };
    // A cycle forces a_ii to lie strictly between two entries of its column,
    // so every diagonal entry is positive here.
    let sums = row_sums(m);
    let mut signs = [Ordering::Equal; 3];
    for i in 0..3 {
        signs[i] = strict_sign(sums[i], || format!("cycle row sum {} = 0", i + 1))?;
    }
    let kind = if signs.iter().all(|s| *s == Ordering::Less) {
        CycleKind::StableCycle
    } else if signs.iter().all(|s| *s == Ordering::Greater) {
        CycleKind::RepellingCycle
    } else {
        CycleKind::Indeterminate
    };
    Ok(CycleReport {
        kind,
        orientation: Some(orientation),
        row_sums: Some(sums),
    })
}

/// True iff `a_ii > a_ji` for all `i ≠ j`: every vertex is a sink.
pub fn tristability_check(m: &InteractionMatrix) -> bool {
    m.n() == 3 && (0..3).all(|i| (0..3).all(|j| i == j || m.get(i, i) > m.get(j, i)))
}

/// Every comparison the three-species criteria make is between a diagonal
/// entry and another entry of its column.
fn require_no_diagonal_ties(m: &InteractionMatrix) -> Result<()> {
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                m.diagonal_vs(i, j)?;
            }
        }
    }
    Ok(())
}

fn positive(m: &InteractionMatrix, i: usize, j: usize) -> Result<bool> {
    Ok(strict_sign(invadibility(m, i, j), || {
        format!("Delta_{} = 0", pair_name(i, j))
    })? == Ordering::Greater)
}

fn below(x: f64, y: f64, what: &str) -> Result<bool> {
    Ok(strict_cmp(x, y, || what.to_string())? == Ordering::Less)
}

/// Checks the four sufficient conditions for permanence on `b` as labeled.
fn permanence_case_labeled(b: &InteractionMatrix) -> Result<Option<u8>> {
    let a = |r: usize, c: usize| b.get(r, c);
    let (a11, a22, a33) = (a(0, 0), a(1, 1), a(2, 2));
    if cycle_exists(b)
        && below(a11, (a(1, 0) + a(2, 0)) / 2.0, "a11 = (a21 + a31) / 2")?
        && below(a22, (a(0, 1) + a(2, 1)) / 2.0, "a22 = (a12 + a32) / 2")?
        && below(a33, (a(0, 2) + a(1, 2)) / 2.0, "a33 = (a13 + a23) / 2")?
    {
        return Ok(Some(0));
    }
    let head = a(2, 0) < a11 && a11 < a(1, 0) && a22 < a(2, 1).min(a(0, 1));
    if head && a(1, 2) < a33 && a33 < a(0, 2) && positive(b, 0, 1)? {
        return Ok(Some(1));
    }
    if head && a33 < a(0, 2).min(a(1, 2)) && positive(b, 0, 1)? && positive(b, 1, 2)? {
        return Ok(Some(2));
    }
    let diag_lowest = (0..3).all(|i| (0..3).all(|j| i == j || a(i, i) < a(j, i)));
    if diag_lowest && positive(b, 0, 1)? && positive(b, 0, 2)? && positive(b, 1, 2)? {
        return Ok(Some(3));
    }
    Ok(None)
}

/// The permanence case (0 to 3) satisfied under some relabeling of the
/// species, if any.
pub fn permanence_case(m: &InteractionMatrix) -> Result<Option<u8>> {
    m.require_species(3)?;
    require_no_diagonal_ties(m)?;
    let mut best: Option<u8> = None;
    for sigma in PERMUTATIONS {
        if let Some(k) = permanence_case_labeled(&m.permuted(&sigma))? {
            best = Some(best.map_or(k, |b| b.min(k)));
        }
    }
    Ok(best)
}

/// Vertices and the edge equilibria that lie inside their edge.
pub fn boundary_equilibria(m: &InteractionMatrix) -> Result<Vec<BoundaryEquilibrium>> {
    m.require_species(3)?;
    let mut out: Vec<BoundaryEquilibrium> = (0..3).map(|i| vertex(3, i)).collect();
    for (i, j) in PAIRS {
        if let Some(e) = edge_equilibrium(m, i, j)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// Closed form of the sum of per-capita growth rates at a boundary
/// equilibrium. At `e_{i,j}` the closed form equals twice the invader's
/// growth rate; only its sign enters the permanence criteria.
pub fn psi(m: &InteractionMatrix, e: &BoundaryEquilibrium) -> f64 {
    match e.support.as_slice() {
        &[i] => {
            let off: f64 = (0..3).filter(|&j| j != i).map(|j| m.get(j, i)).sum();
            (off - 2.0 * m.get(i, i)) / m.get(i, i)
        }
        &[i, j] => invadibility(m, i, j) / (m.get(i, j) * m.get(j, i) - m.get(i, i) * m.get(j, j)),
        _ => f64::NAN,
    }
}

fn evidence(m: &InteractionMatrix) -> Result<(Evidence, Vec<VertexReport>, Vec<EdgeReport>)> {
    let mut ev = Evidence {
        equilibria: boundary_equilibria(m)?,
        ..Evidence::default()
    };
    for e in &ev.equilibria {
        Evidence::push(&mut ev.psi, e.name(), psi(m, e));
    }
    let mut vertices = Vec::new();
    for i in 0..3 {
        match trivial_equilibrium_stability(m, i) {
            Ok(r) => {
                for (slot, j) in (0..3).filter(|&j| j != i).enumerate() {
                    Evidence::push(
                        &mut ev.eigenvalues,
                        format!("e{}:lambda_{}", i + 1, j + 1),
                        r.eigenvalues[slot],
                    );
                }
                vertices.push(r);
            }
            Err(Error::ZeroDiagonal { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let mut edges = Vec::new();
    for (i, j) in PAIRS {
        let name = pair_name(i, j);
        Evidence::push(
            &mut ev.deltas,
            format!("Delta_{name}"),
            invadibility(m, i, j),
        );
        let r = nontrivial_equilibrium_stability(m, i, j)?;
        if let Some(t) = r.tangent {
            Evidence::push(&mut ev.eigenvalues, format!("e{name}:tangent"), t);
        }
        if let Some(t) = r.transversal {
            Evidence::push(&mut ev.eigenvalues, format!("e{name}:transversal"), t);
        }
        edges.push(r);
    }
    Ok((ev, vertices, edges))
}

/// Species that are strictly dominated on every resource by another one.
fn dominated(m: &InteractionMatrix) -> Vec<usize> {
    (0..3)
        .filter(|&j| (0..3).any(|i| i != j && (0..3).all(|k| m.get(i, k) > m.get(j, k))))
        .collect()
}

/// Full three-species classification: permanence, tristability,
/// heteroclinic attraction, reduction by strict dominance, then local
/// stability of the boundary.
pub fn permanence_check(m: &InteractionMatrix) -> Result<RegimeReport> {
    m.require_species(3)?;
    require_no_diagonal_ties(m)?;
    let (mut ev, vertices, edges) = evidence(m)?;
    let cycle = heteroclinic_analysis(m)?;
    if let Some(sums) = cycle.row_sums {
        for (i, s) in sums.iter().enumerate() {
            Evidence::push(&mut ev.eigenvalues, format!("cycle:row_sum_{}", i + 1), *s);
        }
    }
    let report = |label| {
        Ok(RegimeReport {
            label,
            evidence: ev.clone(),
        })
    };

    if let Some(k) = permanence_case(m)? {
        return report(RegimeLabel::PermanentCase(k));
    }
    if tristability_check(m) {
        return report(RegimeLabel::Tristable);
    }
    if cycle.kind == CycleKind::StableCycle {
        return report(RegimeLabel::HeteroclinicStable);
    }
    let losers = dominated(m);
    match losers.len() {
        2 => {
            let winner = (0..3).find(|i| !losers.contains(i)).expect("one survivor");
            return report(RegimeLabel::CheaterWins(winner));
        }
        1 => {
            let rest: Vec<usize> = (0..3).filter(|i| !losers.contains(i)).collect();
            let sub = m.submatrix(&rest)?;
            return report(match classify_two_type(&sub)?.label {
                RegimeLabel::CheaterWins(w) => RegimeLabel::CheaterWins(rest[w]),
                other => other,
            });
        }
        _ => {}
    }
    let stable_vertex = vertices
        .iter()
        .any(|v| v.stability == VertexStability::Sink);
    let stable_edge = edges.iter().any(|e| e.stability == EdgeStability::Stable);
    if stable_vertex || stable_edge {
        return report(RegimeLabel::BoundaryStable);
    }
    report(RegimeLabel::Unclassified)
}

/// Three-species classification entry point; see [`permanence_check`].
pub fn classify_three_type(m: &InteractionMatrix) -> Result<RegimeReport> {
    permanence_check(m)
}

/// Classifies a two- or three-species community.
pub fn classify(m: &InteractionMatrix) -> Result<RegimeReport> {
    match m.n() {
        2 => classify_two_type(m),
        3 => classify_three_type(m),
        n => Err(Error::SpeciesCount {
            expected: 3,
            got: n,
        }),
    }
}

/// Mean-field label on the global defector/cooperator family: species `i`
/// defects iff `θ_i > 1/3`, and the defector count decides the outcome.
pub fn classify_m8(theta: &[f64; 3]) -> Result<RegimeLabel> {
    let third = 1.0 / 3.0;
    let mut defectors = Vec::new();
    for (i, &t) in theta.iter().enumerate() {
        if strict_cmp(t, third, || format!("theta_{} = 1/3", i + 1))? == Ordering::Greater {
            defectors.push(i);
        }
    }
    Ok(match defectors.len() {
        0 => RegimeLabel::PermanentCase(3),
        1 => RegimeLabel::CheaterWins(defectors[0]),
        2 => RegimeLabel::Bistable,
        _ => RegimeLabel::Tristable,
    })
}
