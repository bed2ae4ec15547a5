use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance below which two abilities are treated as tied.
///
/// Every classification in this crate rests on strict inequalities between
/// matrix entries; ties are reported as [`Error::Degenerate`].
pub const TIE_TOLERANCE: f64 = 1e-12;

/// The n×n ability matrix: entry `(i, j)` is the ability of species `i` to
/// exploit the resource produced by species `j`.
///
/// Species are indexed from 0 in the API. Human-facing labels (CSV headers,
/// JSON regime labels, palettes) count from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct InteractionMatrix {
    n: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for InteractionMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.n {
            return Err(Error::BadShape(format!(
                "declared n = {} but {} rows given",
                repr.n,
                repr.entries.len()
            )));
        }
        InteractionMatrix::from_rows(&repr.entries)
    }
}

impl From<InteractionMatrix> for MatrixRepr {
    fn from(m: InteractionMatrix) -> Self {
        MatrixRepr {
            n: m.n,
            entries: m.rows(),
        }
    }
}

impl InteractionMatrix {
    /// Validates and builds a matrix from its rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::BadShape(format!("need at least 2 species, got {n}")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::BadShape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Self::from_entries(n, entries)
    }

    /// Validates a row-major entry vector.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n < 2 || entries.len() != n * n {
            return Err(Error::BadShape(format!(
                "expected {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        for (k, &v) in entries.iter().enumerate() {
            let (row, col) = (k / n, k % n);
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row, col });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row, col, value: v });
            }
        }
        for col in 0..n {
            if (0..n).all(|row| entries[row * n + col] == 0.0) {
                return Err(Error::ZeroColumn { col });
            }
        }
        Ok(InteractionMatrix { n, entries })
    }

    /// The matrix with every entry equal to one (voter model).
    pub fn voter(n: usize) -> Result<Self> {
        Self::from_entries(n, vec![1.0; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Abilities of every species on resource `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// Column-major copy, `out[j * n + i] = a_{i,j}`.
    pub fn column_major(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.get(i, j);
            }
        }
        out
    }

    /// Relabels species: entry `(i, j)` of the result is `a_{σ(i), σ(j)}`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.n, "permutation length mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(sigma[i], sigma[j]));
            }
        }
        InteractionMatrix { n, entries }
    }

    /// Principal submatrix on the given species, in the given order.
    pub fn submatrix(&self, species: &[usize]) -> Result<Self> {
        let rows: Vec<Vec<f64>> = species
            .iter()
            .map(|&i| species.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn require_species(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::SpeciesCount {
                expected: n,
                got: self.n,
            })
        }
    }

    /// Compares `a_{i,i}` with `a_{j,i}`: `Less` means species `i` is a
    /// cooperator with respect to `j` on its own resource.
    pub fn diagonal_vs(&self, i: usize, j: usize) -> Result<Ordering> {
        strict_cmp(self.get(i, i), self.get(j, i), || {
            format!("a[{},{}] = a[{},{}]", i + 1, i + 1, j + 1, i + 1)
        })
    }
}

impl fmt::Display for InteractionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.entries.chunks(self.n).enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>8.4}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Strict comparison; values within [`TIE_TOLERANCE`] are a degenerate tie.
pub fn strict_cmp(a: f64, b: f64, what: impl FnOnce() -> String) -> Result<Ordering> {
    if (a - b).abs() <= TIE_TOLERANCE {
        Err(Error::Degenerate(what()))
    } else if a < b {
        Ok(Ordering::Less)
    } else {
        Ok(Ordering::Greater)
    }
}

/// Sign of a quantity that must be bounded away from zero.
pub fn strict_sign(x: f64, what: impl FnOnce() -> String) -> Result<Ordering> {
    strict_cmp(x, 0.0, what)
}

/// Relative ability of each species on its own resource in a two-species
/// community: `θ_1 = a11 / (a11 + a21)`, `θ_2 = a22 / (a12 + a22)`.
pub fn theta_of_two_type(m: &InteractionMatrix) -> Result<(f64, f64)> {
    m.require_species(2)?;
    let t1 = m.get(0, 0) / (m.get(0, 0) + m.get(1, 0));
    let t2 = m.get(1, 1) / (m.get(0, 1) + m.get(1, 1));
    Ok((t1, t2))
}
