use rand::Rng;

use super::state::{LatticeState, MAX_SPECIES};
use crate::error::{Error, Result};
use crate::model::InteractionMatrix;

/// Flip rule of a matrix, stored column by column so that the weights a
/// site of species `j` gives its neighbors are contiguous.
#[derive(Debug, Clone)]
pub struct UpdateRule {
    n: usize,
    columns: Vec<f64>,
}

impl UpdateRule {
    pub fn new(m: &InteractionMatrix) -> Result<Self> {
        if m.n() > MAX_SPECIES {
            return Err(Error::InvalidParameter(format!(
                "lattice supports at most {MAX_SPECIES} species"
            )));
        }
        Ok(UpdateRule {
            n: m.n(),
            columns: m.column_major(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// New species of a site currently holding `current` whose neighbors
    /// hold `neighbors`: species `i` with probability proportional to
    /// `a_{i,current}` times its neighbor count. `None` when every weight is
    /// zero and the update is canceled.
    #[inline]
    pub fn resolve<R: Rng + ?Sized>(
        &self,
        current: u8,
        neighbors: &[u8],
        rng: &mut R,
    ) -> Option<u8> {
        let col = &self.columns[current as usize * self.n..(current as usize + 1) * self.n];
        let mut total = 0.0;
        let mut uniform = true;
        for &s in neighbors {
            total += col[s as usize];
            uniform &= s == neighbors[0];
        }
        if total <= 0.0 {
            return None;
        }
        if uniform {
            return Some(neighbors[0]);
        }
        let mut r = rng.random::<f64>() * total;
        for &s in neighbors {
            let w = col[s as usize];
            if r < w {
                return Some(s);
            }
            r -= w;
        }
        // Round-off left r at the very end of the range: take the last
        // neighbor that carries weight.
        neighbors
            .iter()
            .rev()
            .copied()
            .find(|&s| col[s as usize] > 0.0)
    }

    /// One random sequential update: a uniformly chosen site resolves its
    /// new species. Returns whether the site changed.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, state: &mut LatticeState, rng: &mut R) -> bool {
        let n_sites = state.len();
        let site = rng.random_range(0..n_sites as u32) as usize;
        state.add_updates(1);
        let degree = state.dims().degree();
        let current = state.sites()[site];
        let mut buf = [0u8; 8];
        let table = state.neighbor_table();
        for (slot, &nb) in buf
            .iter_mut()
            .zip(&table[site * degree..(site + 1) * degree])
        {
            *slot = state.sites()[nb as usize];
        }
        match self.resolve(current, &buf[..degree], rng) {
            Some(s) if s != current => {
                state.set(site, s);
                true
            }
            _ => false,
        }
    }
}

/// One update of `state` under `m`; builds the rule on every call, so hot
/// loops should hold an [`UpdateRule`] instead.
pub fn step<R: Rng + ?Sized>(
    state: &mut LatticeState,
    m: &InteractionMatrix,
    rng: &mut R,
) -> Result<bool> {
    if m.n() != state.n_species() {
        return Err(Error::SpeciesCount {
            expected: state.n_species(),
            got: m.n(),
        });
    }
    Ok(UpdateRule::new(m)?.step(state, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rng::stream_rng;
    use crate::lattice::state::Dims;

    fn m(rows: &[[f64; 2]]) -> InteractionMatrix {
        InteractionMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn threshold_voter_always_flips_when_opposed() {
        let rule = UpdateRule::new(&m(&[[0.0, 1.0], [1.0, 0.0]])).unwrap();
        let mut rng = stream_rng(1, 1);
        for _ in 0..200 {
            assert_eq!(rule.resolve(0, &[0, 0, 0, 1], &mut rng), Some(1));
            assert_eq!(rule.resolve(1, &[1, 0, 1, 1], &mut rng), Some(0));
        }
        // Monochromatic neighborhood of the own type: zero denominator.
        assert_eq!(rule.resolve(0, &[0, 0, 0, 0], &mut rng), None);
    }

    #[test]
    fn pure_birth_type_two_is_permanent() {
        let rule = UpdateRule::new(&m(&[[0.9, 0.0], [0.1, 1.0]])).unwrap();
        let mut rng = stream_rng(2, 1);
        for nb in [[0, 0, 0, 0], [0, 1, 0, 0], [1, 1, 1, 1]] {
            for _ in 0..100 {
                assert_ne!(rule.resolve(1, &nb, &mut rng), Some(0));
            }
        }
    }

    #[test]
    fn voter_picks_neighbor_frequencies() {
        let rule = UpdateRule::new(&InteractionMatrix::voter(3).unwrap()).unwrap();
        let mut rng = stream_rng(3, 1);
        let nb = [0u8, 1, 1, 2];
        let mut hits = [0usize; 3];
        let trials = 40_000;
        for _ in 0..trials {
            hits[rule.resolve(2, &nb, &mut rng).unwrap() as usize] += 1;
        }
        let expect = [0.25, 0.5, 0.25];
        for i in 0..3 {
            let p = hits[i] as f64 / trials as f64;
            assert!((p - expect[i]).abs() < 0.015, "{i}: {p}");
        }
    }

    #[test]
    fn flip_probability_follows_weights() {
        // Column 1 weights: a11 = 0.2 per type-1 neighbor, a21 = 0.6 per type-2.
        let rule = UpdateRule::new(&m(&[[0.2, 0.5], [0.6, 0.5]])).unwrap();
        let mut rng = stream_rng(4, 1);
        let trials = 40_000;
        let flips = (0..trials)
            .filter(|_| rule.resolve(0, &[0, 0, 0, 1], &mut rng) == Some(1))
            .count();
        let p = flips as f64 / trials as f64;
        assert!((p - 0.6 / 1.2).abs() < 0.015, "{p}");
    }

    #[test]
    fn step_advances_time_and_counts() {
        let mut s = LatticeState::from_sites(Dims::Torus(3, 3), 2, vec![0, 0, 0, 0, 1, 0, 0, 0, 0])
            .unwrap();
        let matrix = m(&[[0.0, 1.0], [1.0, 0.0]]);
        let mut rng = stream_rng(5, 1);
        for _ in 0..9 {
            step(&mut s, &matrix, &mut rng).unwrap();
        }
        assert_eq!(s.updates(), 9);
        assert_eq!(s.time(), 1.0);
        assert_eq!(s.counts().iter().sum::<u64>(), 9);
        let wrong = InteractionMatrix::voter(3).unwrap();
        assert!(step(&mut s, &wrong, &mut rng).is_err());
    }
}
