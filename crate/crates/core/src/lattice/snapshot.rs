//! Binary PPM rendering of lattice configurations.

use std::io::Write;

use super::state::{Dims, LatticeState};
use crate::error::{Error, Result};

/// Colors beyond the first three species.
const EXTRA: [[u8; 3]; 5] = [
    [200, 40, 40],
    [40, 120, 200],
    [60, 170, 60],
    [230, 180, 30],
    [140, 60, 170],
];

/// Color of a 0-based species: black, grey and white for the first three.
pub fn palette(species: usize) -> [u8; 3] {
    match species {
        0 => [0, 0, 0],
        1 => [128, 128, 128],
        2 => [255, 255, 255],
        k => EXTRA[(k - 3) % EXTRA.len()],
    }
}

/// Species labels of a torus, one row per line of the image.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u8>,
}

impl Image {
    pub fn of(state: &LatticeState) -> Result<Self> {
        Self::from_labels(state.dims(), state.sites().to_vec())
    }

    pub fn from_labels(dims: Dims, labels: Vec<u8>) -> Result<Self> {
        match dims {
            Dims::Torus(width, height) if labels.len() == width * height => Ok(Image {
                width,
                height,
                labels,
            }),
            Dims::Torus(..) => Err(Error::BadShape(
                "label count does not match the torus".into(),
            )),
            Dims::Line(_) => Err(Error::InvalidParameter(
                "snapshots need a two-dimensional lattice".into(),
            )),
        }
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        let mut buf = Vec::with_capacity(self.labels.len() * 3);
        for &s in &self.labels {
            buf.extend_from_slice(&palette(s as usize));
        }
        w.write_all(&buf)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monochrome_image() {
        let s = LatticeState::uniform(Dims::Torus(4, 3), 3, 2).unwrap();
        let mut out = Vec::new();
        Image::of(&s).unwrap().write_ppm(&mut out).unwrap();
        let header = b"P6\n4 3\n255\n";
        assert_eq!(&out[..header.len()], header);
        assert_eq!(out.len(), header.len() + 36);
        assert!(out[header.len()..].iter().all(|&b| b == 255));
    }

    #[test]
    fn palette_is_black_grey_white() {
        assert_eq!(palette(0), [0, 0, 0]);
        assert_eq!(palette(1), [128, 128, 128]);
        assert_eq!(palette(2), [255, 255, 255]);
        assert_ne!(palette(3), palette(4));
    }

    #[test]
    fn rings_have_no_image() {
        let s = LatticeState::uniform(Dims::Line(5), 2, 0).unwrap();
        assert!(Image::of(&s).is_err());
    }
}
