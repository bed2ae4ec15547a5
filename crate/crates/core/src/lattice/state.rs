use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::{stream_rng, INIT_STREAM};
use crate::error::{Error, Result};
use crate::model::SimplexPoint;

/// Most species a lattice can carry; labels are stored in a byte.
pub const MAX_SPECIES: usize = 16;

/// Ring of `L` sites or an `Lx × Ly` torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DimsRepr", into = "String")]
pub enum Dims {
    Line(usize),
    Torus(usize, usize),
}

impl Dims {
    pub fn sites(self) -> usize {
        match self {
            Dims::Line(l) => l,
            Dims::Torus(x, y) => x * y,
        }
    }

    /// Neighbors per site.
    pub fn degree(self) -> usize {
        match self {
            Dims::Line(_) => 2,
            Dims::Torus(..) => 4,
        }
    }

    /// Sides shorter than 3 would make a site its own neighbor or list one
    /// neighbor twice.
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            Dims::Line(l) => l >= 3,
            Dims::Torus(x, y) => x >= 3 && y >= 3,
        };
        if ok && self.sites() <= u32::MAX as usize {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(format!(
                "lattice {self} too small or too large; sides must be at least 3"
            )))
        }
    }

    fn neighbor_table(self) -> Vec<u32> {
        let mut table = Vec::with_capacity(self.sites() * self.degree());
        match self {
            Dims::Line(l) => {
                for x in 0..l {
                    table.push(((x + l - 1) % l) as u32);
                    table.push(((x + 1) % l) as u32);
                }
            }
            Dims::Torus(lx, ly) => {
                for y in 0..ly {
                    for x in 0..lx {
                        table.push((y * lx + (x + lx - 1) % lx) as u32);
                        table.push((y * lx + (x + 1) % lx) as u32);
                        table.push((((y + ly - 1) % ly) * lx + x) as u32);
                        table.push((((y + 1) % ly) * lx + x) as u32);
                    }
                }
            }
        }
        table
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dims::Line(l) => write!(f, "{l}"),
            Dims::Torus(x, y) => write!(f, "{x}x{y}"),
        }
    }
}

impl FromStr for Dims {
    type Err = Error;

    /// `"400x400"` for a torus, `"1000"` for a ring.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse lattice dimensions {s:?}"));
        let parts: Vec<&str> = s.trim().split(['x', 'X']).collect();
        let num = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
        let dims = match parts.as_slice() {
            [l] => Dims::Line(num(l)?),
            [x, y] => Dims::Torus(num(x)?, num(y)?),
            _ => return Err(bad()),
        };
        dims.validate()
    }
}

/// `"400x400"`, `[400, 400]` or `1000`.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum DimsRepr {
    Text(String),
    Sides(Vec<usize>),
    Length(usize),
}

impl TryFrom<DimsRepr> for Dims {
    type Error = Error;

    fn try_from(r: DimsRepr) -> Result<Self> {
        match r {
            DimsRepr::Text(s) => s.parse(),
            DimsRepr::Length(l) => Dims::Line(l).validate(),
            DimsRepr::Sides(v) => match v.as_slice() {
                [l] => Dims::Line(*l).validate(),
                [x, y] => Dims::Torus(*x, *y).validate(),
                _ => Err(Error::InvalidParameter(format!(
                    "lattice needs 1 or 2 sides, got {}",
                    v.len()
                ))),
            },
        }
    }
}

impl From<Dims> for String {
    fn from(d: Dims) -> String {
        d.to_string()
    }
}

/// A configuration of species labels (0-based) on a ring or torus, with
/// running species counts and the number of updates performed.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    dims: Dims,
    n_species: usize,
    sites: Vec<u8>,
    counts: Vec<u64>,
    updates: u64,
    neighbors: Arc<Vec<u32>>,
}

impl LatticeState {
    pub fn from_sites(dims: Dims, n_species: usize, sites: Vec<u8>) -> Result<Self> {
        let dims = dims.validate()?;
        if !(1..=MAX_SPECIES).contains(&n_species) {
            return Err(Error::InvalidParameter(format!(
                "lattice supports 1 to {MAX_SPECIES} species, got {n_species}"
            )));
        }
        if sites.len() != dims.sites() {
            return Err(Error::BadShape(format!(
                "{} site labels for a {dims} lattice",
                sites.len()
            )));
        }
        let mut counts = vec![0u64; n_species];
        for &s in &sites {
            let slot = counts.get_mut(s as usize).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "species label {} exceeds {n_species}",
                    s as usize + 1
                ))
            })?;
            *slot += 1;
        }
        Ok(LatticeState {
            dims,
            n_species,
            sites,
            counts,
            updates: 0,
            neighbors: Arc::new(dims.neighbor_table()),
        })
    }

    /// Every site holds `species`.
    pub fn uniform(dims: Dims, n_species: usize, species: usize) -> Result<Self> {
        Self::from_sites(dims, n_species, vec![species as u8; dims.sites()])
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[u8] {
        &self.sites
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Updates divided by sites.
    pub fn time(&self) -> f64 {
        self.updates as f64 / self.sites.len() as f64
    }

    pub fn densities(&self) -> Vec<f64> {
        let n = self.sites.len() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// The species occupying every site, if any.
    pub fn monochromatic(&self) -> Option<usize> {
        let n = self.sites.len() as u64;
        self.counts.iter().position(|&c| c == n)
    }

    pub fn neighbors(&self, site: usize) -> &[u32] {
        let d = self.dims.degree();
        &self.neighbors[site * d..(site + 1) * d]
    }

    pub(crate) fn neighbor_table(&self) -> &[u32] {
        &self.neighbors
    }

    pub(crate) fn set(&mut self, site: usize, species: u8) {
        let old = std::mem::replace(&mut self.sites[site], species);
        self.counts[old as usize] -= 1;
        self.counts[species as usize] += 1;
    }

    pub(crate) fn add_updates(&mut self, k: u64) {
        self.updates += k;
    }

    /// Fraction of unordered nearest-neighbor edges whose endpoints carry
    /// the same species.
    pub fn clustering_coefficient(&self) -> f64 {
        let s = &self.sites;
        let (same, edges) = match self.dims {
            Dims::Line(l) => {
                let same = (0..l).filter(|&x| s[x] == s[(x + 1) % l]).count();
                (same, l)
            }
            Dims::Torus(lx, ly) => {
                let mut same = 0;
                for y in 0..ly {
                    let row = y * lx;
                    let below = ((y + 1) % ly) * lx;
                    for x in 0..lx {
                        let c = s[row + x];
                        same += (c == s[row + (x + 1) % lx]) as usize;
                        same += (c == s[below + x]) as usize;
                    }
                }
                (same, 2 * lx * ly)
            }
        };
        same as f64 / edges as f64
    }
}

/// Independent draw of every site from `densities`, using the
/// initialization stream of `seed`.
pub fn init_product_measure(
    dims: Dims,
    densities: &SimplexPoint,
    seed: u64,
) -> Result<LatticeState> {
    let dims = dims.validate()?;
    let n = densities.n();
    let mut cumulative: Vec<f64> = densities
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    // Guard the last bin against round-off in the running sum.
    if let Some(last) = cumulative.last_mut() {
        *last = f64::INFINITY;
    }
    let mut rng = stream_rng(seed, INIT_STREAM);
    let sites = (0..dims.sites())
        .map(|_| {
            let u: f64 = rng.random();
            // Zero-density species can never be drawn: `u < cum` fails on
            // an empty bin because the previous bound equals it.
            cumulative.iter().position(|&c| u < c).unwrap_or(n - 1) as u8
        })
        .collect();
    LatticeState::from_sites(dims, n, sites)
}
