use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{
    BoundaryEquilibrium, EquilibriumKind, Evidence, InteractionMatrix, RegimeLabel, RegimeReport,
    SimplexPoint, TIE_TOLERANCE,
};

/// How two species relate on their own resources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRelation {
    /// Both exploit the partner's resource better than their own.
    Cooperation,
    /// Both exploit their own resource better than the partner does.
    Competition,
    /// One defector, one cooperator; the defector wins.
    Cheater { winner: usize },
}

/// Classifies the pair `(i, j)` by comparing `a_ii` with `a_ji` and `a_jj`
/// with `a_ij`. Ties are degenerate.
pub fn pair_relation(m: &InteractionMatrix, i: usize, j: usize) -> Result<PairRelation> {
    let i_own = m.diagonal_vs(i, j)?;
    let j_own = m.diagonal_vs(j, i)?;
    Ok(match (i_own, j_own) {
        (Ordering::Less, Ordering::Less) => PairRelation::Cooperation,
        (Ordering::Greater, Ordering::Greater) => PairRelation::Competition,
        (Ordering::Greater, Ordering::Less) => PairRelation::Cheater { winner: i },
        (Ordering::Less, Ordering::Greater) => PairRelation::Cheater { winner: j },
        _ => unreachable!("strict comparisons never return Equal"),
    })
}

/// Density of species `i` at the edge equilibrium of the pair `(i, j)`,
/// `a_ji (a_ij − a_jj) / (a_ij (a_ji − a_ii) + a_ji (a_ij − a_jj))`.
pub fn edge_density(m: &InteractionMatrix, i: usize, j: usize) -> f64 {
    let (aii, aij, aji, ajj) = (m.get(i, i), m.get(i, j), m.get(j, i), m.get(j, j));
    aji * (aij - ajj) / (aij * (aji - aii) + aji * (aij - ajj))
}

/// The edge equilibrium `e_{i,j}` when it lies strictly inside the edge.
pub fn edge_equilibrium(
    m: &InteractionMatrix,
    i: usize,
    j: usize,
) -> Result<Option<BoundaryEquilibrium>> {
    match pair_relation(m, i, j)? {
        PairRelation::Cheater { .. } => Ok(None),
        PairRelation::Cooperation | PairRelation::Competition => {
            if m.get(i, j) == 0.0 && m.get(j, i) == 0.0 {
                // Neither converts the other: every point of the edge is fixed.
                return Err(Error::Degenerate(format!(
                    "species {} and {} never replace each other",
                    i + 1,
                    j + 1
                )));
            }
            let ui = edge_density(m, i, j);
            let mut u = vec![0.0; m.n()];
            u[i] = ui;
            u[j] = 1.0 - ui;
            let mut support = vec![i, j];
            support.sort_unstable();
            Ok(Some(BoundaryEquilibrium {
                support,
                point: SimplexPoint::from_raw(u),
                kind: EquilibriumKind::Nontrivial,
            }))
        }
    }
}

/// Interior equilibrium of a two-species community, present under strict
/// mutual cooperation or strict mutual competition. On an exact tie the
/// closed form lands on a vertex, so there is no interior point.
pub fn two_type_equilibrium(m: &InteractionMatrix) -> Result<Option<SimplexPoint>> {
    m.require_species(2)?;
    let tie = |i: usize, j: usize| (m.get(i, i) - m.get(j, i)).abs() <= TIE_TOLERANCE;
    if tie(0, 1) || tie(1, 0) {
        return Ok(None);
    }
    Ok(edge_equilibrium(m, 0, 1)?.map(|e| e.point))
}

/// Global outcome of the two-species mean-field dynamics.
pub fn classify_two_type(m: &InteractionMatrix) -> Result<RegimeReport> {
    m.require_species(2)?;
    let (a11, a12, a21, a22) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let relation = pair_relation(m, 0, 1)?;
    let mut evidence = Evidence::default();
    evidence.equilibria.push(vertex(2, 0));
    evidence.equilibria.push(vertex(2, 1));
    // Linearization of the reduced equation at u1 = 0 (vertex e2) and u1 = 1 (e1).
    Evidence::push(&mut evidence.eigenvalues, "e2:lambda", (a12 - a22) / a22);
    Evidence::push(&mut evidence.eigenvalues, "e1:lambda", (a21 - a11) / a11);

    let label = match relation {
        PairRelation::Cheater { winner } => RegimeLabel::CheaterWins(winner),
        PairRelation::Competition | PairRelation::Cooperation => {
            let edge =
                edge_equilibrium(m, 0, 1)?.expect("cooperation and competition have an edge point");
            let u1 = edge.point[0];
            let slope = (a21 - a11) * (a12 - a22) * (a12 * (a11 - a21) + a21 * (a22 - a12))
                / (a11 * a22 - a12 * a21).powi(2);
            Evidence::push(&mut evidence.eigenvalues, "e1,2:lambda", slope);
            evidence.equilibria.push(edge);
            if relation == PairRelation::Competition {
                evidence.threshold = Some(u1);
                RegimeLabel::Bistable
            } else {
                RegimeLabel::CooperationCoexist
            }
        }
    };
    Ok(RegimeReport { label, evidence })
}

/// Exponential rate at which species `j` vanishes when species `i` is
/// strictly better on every resource:
/// `Γ_{i,j} = min_k (a_ik − a_jk) / max_m a_mk`. `None` without strict
/// dominance.
pub fn extinction_rate(m: &InteractionMatrix, i: usize, j: usize) -> Option<f64> {
    let n = m.n();
    if i == j || i >= n || j >= n {
        return None;
    }
    if (0..n).any(|k| m.get(i, k) <= m.get(j, k)) {
        return None;
    }
    (0..n)
        .map(|k| {
            let max = (0..n).map(|r| m.get(r, k)).fold(0.0, f64::max);
            (m.get(i, k) - m.get(j, k)) / max
        })
        .reduce(f64::min)
}

pub(crate) fn vertex(n: usize, i: usize) -> BoundaryEquilibrium {
    BoundaryEquilibrium {
        support: vec![i],
        point: SimplexPoint::vertex(n, i),
        kind: EquilibriumKind::Trivial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn mat(rows: [[f64; 2]; 2]) -> InteractionMatrix {
        InteractionMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn equilibrium_examples() {
        let m6 = mat([[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(
            two_type_equilibrium(&m6).unwrap().unwrap().as_slice(),
            &[0.5, 0.5]
        );
        let coop = mat([[1.0, 3.0], [2.0, 1.0]]);
        let e = two_type_equilibrium(&coop).unwrap().unwrap();
        assert!(e.max_abs_diff(&[4.0 / 7.0, 3.0 / 7.0]) < 1e-15);
    }

    #[test]
    fn m7_has_a_tie() {
        // a22 = a12 = 1: the existence condition fails on its boundary.
        let m7 = mat([[0.0, 1.0], [1.0, 1.0]]);
        assert_eq!(two_type_equilibrium(&m7).unwrap(), None);
        assert!(matches!(classify_two_type(&m7), Err(Error::Degenerate(_))));
    }

    #[test]
    fn non_interacting_pair_is_degenerate() {
        let id = mat([[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(classify_two_type(&id), Err(Error::Degenerate(_))));
        assert!(matches!(
            two_type_equilibrium(&id),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn cheater_has_no_interior_equilibrium() {
        let m5 = mat([[0.8, 0.8], [1.2, 1.2]]);
        assert!(two_type_equilibrium(&m5).unwrap().is_none());
    }

    #[test]
    fn classify_examples() {
        let m5 = mat([[0.8, 0.8], [1.2, 1.2]]);
        assert_eq!(
            classify_two_type(&m5).unwrap().label,
            RegimeLabel::CheaterWins(1)
        );

        let comp = mat([[2.0, 1.0], [1.0, 2.0]]);
        let r = classify_two_type(&comp).unwrap();
        assert_eq!(r.label, RegimeLabel::Bistable);
        assert!((r.evidence.threshold.unwrap() - 0.5).abs() < 1e-15);

        let m6 = mat([[0.0, 1.0], [1.0, 0.0]]);
        let r = classify_two_type(&m6).unwrap();
        assert_eq!(r.label, RegimeLabel::CooperationCoexist);
        assert_eq!(r.evidence.equilibria[2].point.as_slice(), &[0.5, 0.5]);
        assert!(r.evidence.eigenvalues.iter().all(|v| v.value.is_finite()));
    }

    #[test]
    fn cooperative_slope_is_negative_and_competitive_positive() {
        let coop = classify_two_type(&mat([[1.0, 3.0], [2.0, 1.0]])).unwrap();
        assert!(Evidence::lookup(&coop.evidence.eigenvalues, "e1,2:lambda").unwrap() < 0.0);
        let comp = classify_two_type(&mat([[2.0, 1.0], [1.0, 3.0]])).unwrap();
        assert!(Evidence::lookup(&comp.evidence.eigenvalues, "e1,2:lambda").unwrap() > 0.0);
    }

    #[test]
    fn extinction_rate_examples() {
        let m5 = mat([[0.8, 0.8], [1.2, 1.2]]);
        assert!((extinction_rate(&m5, 1, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(extinction_rate(&m5, 0, 1), None);
        assert_eq!(
            extinction_rate(&InteractionMatrix::voter(2).unwrap(), 0, 1),
            None
        );
        let m4 = mat([[0.9, 0.0], [0.1, 1.0]]);
        assert_eq!(extinction_rate(&m4, 1, 0), None);
    }
}
