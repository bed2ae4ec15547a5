use std::fmt;

use serde::{Deserialize, Serialize};

use super::simplex::SimplexPoint;

/// Long-run outcome predicted by the mean-field analysis.
///
/// The criteria behind these labels are sufficient conditions, so
/// `Unclassified` is a legitimate answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeLabel {
    /// The given species (0-based; serialized 1-based) takes over.
    #[serde(with = "one_based")]
    CheaterWins(usize),
    Bistable,
    CooperationCoexist,
    Tristable,
    HeteroclinicStable,
    HeteroclinicRepellingPermanent,
    PermanentCase(u8),
    BoundaryStable,
    Unclassified,
}

impl RegimeLabel {
    /// Whether the label guarantees coexistence of every species.
    pub fn is_coexistence(self) -> bool {
        matches!(
            self,
            RegimeLabel::CooperationCoexist
                | RegimeLabel::PermanentCase(_)
                | RegimeLabel::HeteroclinicRepellingPermanent
        )
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeLabel::CheaterWins(i) => write!(f, "CHEATER_WINS({})", i + 1),
            RegimeLabel::Bistable => f.write_str("BISTABLE"),
            RegimeLabel::CooperationCoexist => f.write_str("COOPERATION_COEXIST"),
            RegimeLabel::Tristable => f.write_str("TRISTABLE"),
            RegimeLabel::HeteroclinicStable => f.write_str("HETEROCLINIC_STABLE"),
            RegimeLabel::HeteroclinicRepellingPermanent => {
                f.write_str("HETEROCLINIC_REPELLING_PERMANENT")
            }
            RegimeLabel::PermanentCase(k) => write!(f, "PERMANENT_CASE({k})"),
            RegimeLabel::BoundaryStable => f.write_str("BOUNDARY_STABLE"),
            RegimeLabel::Unclassified => f.write_str("UNCLASSIFIED"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EquilibriumKind {
    /// A vertex `e_i`.
    Trivial,
    /// An edge equilibrium `e_{i,j}` with both species present.
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEquilibrium {
    /// Species present (0-based).
    pub support: Vec<usize>,
    pub point: SimplexPoint,
    pub kind: EquilibriumKind,
}

impl BoundaryEquilibrium {
    pub fn name(&self) -> String {
        let ids: Vec<String> = self.support.iter().map(|i| (i + 1).to_string()).collect();
        format!("e{}", ids.join(","))
    }
}

/// A named real number, e.g. `("Delta_1,2", 2.0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Named {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub equilibria: Vec<BoundaryEquilibrium>,
    pub eigenvalues: Vec<Named>,
    pub deltas: Vec<Named>,
    pub psi: Vec<Named>,
    /// Bistability threshold on `u_1` when the two-species system is bistable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
}

impl Evidence {
    /// Records a value if it is finite; infinite ratios (zero diagonals) are
    /// left out so that every reported number is a real.
    pub(crate) fn push(list: &mut Vec<Named>, name: impl Into<String>, value: f64) {
        if value.is_finite() {
            list.push(Named {
                name: name.into(),
                value,
            });
        }
    }

    pub fn lookup(list: &[Named], name: &str) -> Option<f64> {
        list.iter().find(|v| v.name == name).map(|v| v.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub label: RegimeLabel,
    pub evidence: Evidence,
}

pub(crate) mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*i as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = u64::deserialize(d)?;
        if v == 0 {
            return Err(serde::de::Error::custom("species labels start at 1"));
        }
        Ok(v as usize - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_json_is_tagged_and_one_based() {
        let s = serde_json::to_string(&RegimeLabel::PermanentCase(0)).unwrap();
        assert_eq!(s, r#"{"PERMANENT_CASE":0}"#);
        let s = serde_json::to_string(&RegimeLabel::CheaterWins(1)).unwrap();
        assert_eq!(s, r#"{"CHEATER_WINS":2}"#);
        let back: RegimeLabel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, RegimeLabel::CheaterWins(1));
        assert_eq!(
            serde_json::to_string(&RegimeLabel::Bistable).unwrap(),
            r#""BISTABLE""#
        );
    }

    #[test]
    fn evidence_drops_non_finite() {
        let mut v = Vec::new();
        Evidence::push(&mut v, "a", f64::INFINITY);
        Evidence::push(&mut v, "b", 1.5);
        assert_eq!(v.len(), 1);
        assert_eq!(Evidence::lookup(&v, "b"), Some(1.5));
    }
}
