//! Lattice translations labelling the edges of a gain graph.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// Largest absolute gain coordinate accepted by default.
pub const DEFAULT_GAIN_CAP: i64 = 1_000_000;

/// An element of `Z^3`: how many unit cells an edge wraps along each axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct GainVector(pub [i64; 3]);

impl GainVector {
    pub const ZERO: GainVector = GainVector([0, 0, 0]);

    pub const fn new(c0: i64, c1: i64, c2: i64) -> Self {
        GainVector([c0, c1, c2])
    }

    /// Builds a gain, rejecting any coordinate with `|c| > cap`.
    pub fn bounded(coords: [i64; 3], cap: i64) -> Result<Self> {
        let g = GainVector(coords);
        g.check_cap(cap)?;
        Ok(g)
    }

    pub fn check_cap(&self, cap: i64) -> Result<()> {
        match self.0.iter().find(|c| c.unsigned_abs() > cap.unsigned_abs()) {
            Some(&value) => Err(Error::GainOutOfRange { value, cap }),
            None => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn coords(&self) -> [i64; 3] {
        self.0
    }

    /// Sign-normalized representative of `{self, -self}`: the first nonzero
    /// coordinate is made positive.
    pub fn canonical_sign(self) -> Self {
        match self.0.iter().find(|c| **c != 0) {
            Some(c) if *c < 0 => -self,
            _ => self,
        }
    }
}

impl From<[i64; 3]> for GainVector {
    fn from(c: [i64; 3]) -> Self {
        GainVector(c)
    }
}

impl Add for GainVector {
    type Output = GainVector;
    fn add(self, o: GainVector) -> GainVector {
        GainVector([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for GainVector {
    type Output = GainVector;
    fn sub(self, o: GainVector) -> GainVector {
        GainVector([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for GainVector {
    type Output = GainVector;
    fn neg(self) -> GainVector {
        GainVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Display for GainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}
