//! Parameterized matrix families and the named matrices used throughout the
//! analysis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::InteractionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Column-normalized two-species matrices `[[θ1, 1-θ2], [1-θ1, θ2]]`.
    #[serde(rename = "TWO_TYPE", alias = "two", alias = "TWO")]
    TwoType,
    /// Global defectors/cooperators: diagonal `2θ_j`, off-diagonal `1-θ_j`
    /// in column `j`. Species `j` defects iff `θ_j > 1/3`.
    M8,
    /// Rock-paper-scissors: diagonal `θ_i` with a cyclic 1/0 pattern.
    M9,
}

impl Family {
    pub fn species(self) -> usize {
        match self {
            Family::TwoType => 2,
            Family::M8 | Family::M9 => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::TwoType => "TWO_TYPE",
            Family::M8 => "M8",
            Family::M9 => "M9",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TWO" | "TWO_TYPE" | "2" => Ok(Family::TwoType),
            "M8" => Ok(Family::M8),
            "M9" => Ok(Family::M9),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// A point in one of the θ-parameterized families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThetaRepr")]
pub struct ThetaParams {
    pub family: Family,
    pub theta: Vec<f64>,
}

#[derive(Deserialize)]
struct ThetaRepr {
    family: Family,
    theta: Vec<f64>,
}

impl TryFrom<ThetaRepr> for ThetaParams {
    type Error = Error;

    fn try_from(r: ThetaRepr) -> Result<Self> {
        ThetaParams::new(r.family, r.theta)
    }
}

impl ThetaParams {
    pub fn new(family: Family, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != family.species() {
            return Err(Error::SpeciesCount {
                expected: family.species(),
                got: theta.len(),
            });
        }
        if let Some(t) = theta.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return Err(Error::InvalidParameter(format!("theta {t} outside [0, 1]")));
        }
        Ok(ThetaParams { family, theta })
    }

    pub fn matrix(&self) -> InteractionMatrix {
        family_matrix(self)
    }
}

/// Builds the matrix of a θ family.
pub fn family_matrix(p: &ThetaParams) -> InteractionMatrix {
    let t = &p.theta;
    let rows: Vec<Vec<f64>> = match p.family {
        Family::TwoType => vec![vec![t[0], 1.0 - t[1]], vec![1.0 - t[0], t[1]]],
        Family::M8 => (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { 2.0 * t[j] } else { 1.0 - t[j] })
                    .collect()
            })
            .collect(),
        Family::M9 => vec![
            vec![t[0], 0.0, 1.0],
            vec![1.0, t[1], 0.0],
            vec![0.0, 1.0, t[2]],
        ],
    };
    // Every family has a positive entry in each column for θ in [0, 1].
    InteractionMatrix::from_rows(&rows).expect("family matrices are valid for theta in [0, 1]")
}

/// The named matrices M0..M9 plus the all-ones voter matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// Heteroclinic cycle with repelling boundary (permanence, no edge equilibria).
    M0,
    /// One nontrivial boundary equilibrium.
    M1,
    /// Two nontrivial boundary equilibria.
    M2,
    /// Three nontrivial boundary equilibria (global cooperation).
    M3,
    /// Pure birth for species 2.
    M4 {
        epsilon: f64,
    },
    /// Species 2 a cheater on both resources.
    M5 {
        epsilon: f64,
    },
    /// Threshold voter model.
    M6,
    /// Voter / threshold-voter mixture.
    M7,
    M8 {
        theta: [f64; 3],
    },
    M9 {
        theta: [f64; 3],
    },
    Voter {
        n: usize,
    },
}

impl Builtin {
    /// Resolves a name (`M0`..`M9`, `voter2`, `voter3`, ...) plus the
    /// parameters its family needs.
    pub fn parse(name: &str, epsilon: Option<f64>, theta: Option<&[f64]>) -> Result<Self> {
        let need_eps = || {
            epsilon.ok_or_else(|| {
                Error::InvalidParameter(format!("matrix {name} needs an epsilon parameter"))
            })
        };
        let need_theta = || -> Result<[f64; 3]> {
            let t = theta.ok_or_else(|| {
                Error::InvalidParameter(format!("matrix {name} needs a theta parameter"))
            })?;
            <[f64; 3]>::try_from(t).map_err(|_| Error::SpeciesCount {
                expected: 3,
                got: t.len(),
            })
        };
        let upper = name.trim().to_ascii_uppercase();
        Ok(match upper.as_str() {
            "M0" => Builtin::M0,
            "M1" => Builtin::M1,
            "M2" => Builtin::M2,
            "M3" => Builtin::M3,
            "M4" => Builtin::M4 {
                epsilon: need_eps()?,
            },
            "M5" => Builtin::M5 {
                epsilon: need_eps()?,
            },
            "M6" => Builtin::M6,
            "M7" => Builtin::M7,
            "M8" => Builtin::M8 {
                theta: need_theta()?,
            },
            "M9" => Builtin::M9 {
                theta: need_theta()?,
            },
            "VOTER" => Builtin::Voter { n: 2 },
            other => match other.strip_prefix("VOTER").and_then(|k| k.parse().ok()) {
                Some(n) if n >= 2 => Builtin::Voter { n },
                _ => return Err(Error::UnknownName(name.to_string())),
            },
        })
    }

    pub fn matrix(&self) -> Result<InteractionMatrix> {
        builtin_matrix(self)
    }
}

/// Exact entries of the named matrices.
pub fn builtin_matrix(b: &Builtin) -> Result<InteractionMatrix> {
    match *b {
        Builtin::M0 => {
            InteractionMatrix::from_rows(&[[1.0, 0.0, 4.0], [4.0, 1.0, 0.0], [0.0, 4.0, 1.0]])
        }
        Builtin::M1 => {
            InteractionMatrix::from_rows(&[[1.0, 1.0, 2.0], [2.0, 0.0, 0.0], [0.0, 8.0, 1.0]])
        }
        Builtin::M2 => {
            InteractionMatrix::from_rows(&[[1.0, 1.0, 2.0], [2.0, 0.0, 1.0], [0.0, 4.0, 0.0]])
        }
        Builtin::M3 => {
            InteractionMatrix::from_rows(&[[1.0, 2.0, 2.0], [2.0, 1.0, 2.0], [2.0, 2.0, 1.0]])
        }
        Builtin::M4 { epsilon: e } => InteractionMatrix::from_rows(&[[1.0 - e, 0.0], [e, 1.0]]),
        Builtin::M5 { epsilon: e } => {
            InteractionMatrix::from_rows(&[[1.0 - e, 1.0 - e], [1.0 + e, 1.0 + e]])
        }
        Builtin::M6 => InteractionMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]),
        Builtin::M7 => InteractionMatrix::from_rows(&[[0.0, 1.0], [1.0, 1.0]]),
        Builtin::M8 { theta } => Ok(family_matrix(&ThetaParams::new(
            Family::M8,
            theta.to_vec(),
        )?)),
        Builtin::M9 { theta } => Ok(family_matrix(&ThetaParams::new(
            Family::M9,
            theta.to_vec(),
        )?)),
        Builtin::Voter { n } => InteractionMatrix::voter(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m8_at_one_third_is_constant() {
        let m = family_matrix(&ThetaParams::new(Family::M8, vec![1.0 / 3.0; 3]).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - 2.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn m9_example() {
        let m = family_matrix(&ThetaParams::new(Family::M9, vec![0.8; 3]).unwrap());
        assert_eq!(
            m.rows(),
            vec![
                vec![0.8, 0.0, 1.0],
                vec![1.0, 0.8, 0.0],
                vec![0.0, 1.0, 0.8]
            ]
        );
    }

    #[test]
    fn two_type_neutral_is_voter_like() {
        let m = family_matrix(&ThetaParams::new(Family::TwoType, vec![0.5, 0.5]).unwrap());
        assert_eq!(m.rows(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
    }

    #[test]
    fn theta_params_validation() {
        assert!(ThetaParams::new(Family::M8, vec![0.1, 0.2]).is_err());
        assert!(ThetaParams::new(Family::TwoType, vec![0.1, 1.2]).is_err());
        let p: ThetaParams =
            serde_json::from_str(r#"{"family":"M8","theta":[0.1,0.2,0.3]}"#).unwrap();
        assert_eq!(p.family, Family::M8);
        assert!(serde_json::from_str::<ThetaParams>(r#"{"family":"M9","theta":[0.1]}"#).is_err());
    }

    #[test]
    fn builtin_goldens() {
        let m = |name: &str| {
            Builtin::parse(name, None, None)
                .unwrap()
                .matrix()
                .unwrap()
                .rows()
        };
        assert_eq!(
            m("M0"),
            vec![
                vec![1.0, 0.0, 4.0],
                vec![4.0, 1.0, 0.0],
                vec![0.0, 4.0, 1.0]
            ]
        );
        assert_eq!(
            m("M1"),
            vec![
                vec![1.0, 1.0, 2.0],
                vec![2.0, 0.0, 0.0],
                vec![0.0, 8.0, 1.0]
            ]
        );
        assert_eq!(
            m("M2"),
            vec![
                vec![1.0, 1.0, 2.0],
                vec![2.0, 0.0, 1.0],
                vec![0.0, 4.0, 0.0]
            ]
        );
        assert_eq!(
            m("M3"),
            vec![
                vec![1.0, 2.0, 2.0],
                vec![2.0, 1.0, 2.0],
                vec![2.0, 2.0, 1.0]
            ]
        );
        assert_eq!(m("M6"), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(m("M7"), vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
        let m4 = Builtin::parse("M4", Some(0.1), None)
            .unwrap()
            .matrix()
            .unwrap();
        assert_eq!(m4.rows(), vec![vec![0.9, 0.0], vec![0.1, 1.0]]);
        let m5 = Builtin::parse("m5", Some(0.2), None)
            .unwrap()
            .matrix()
            .unwrap();
        assert_eq!(m5.rows(), vec![vec![0.8, 0.8], vec![1.2, 1.2]]);
        assert_eq!(m("voter3"), vec![vec![1.0; 3]; 3]);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            Builtin::parse("M10", None, None),
            Err(Error::UnknownName(_))
        ));
        assert!(matches!(
            Builtin::parse("M4", None, None),
            Err(Error::InvalidParameter(_))
        ));
        assert!(Builtin::parse("M9", None, Some(&[0.5, 0.5])).is_err());
    }
}
