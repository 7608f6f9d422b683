use std::fmt;

use serde::{Deserialize, Serialize};

/// An object of a finite process theory, identified by its size: the
/// cardinality of a finite set, or the dimension of a Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectDim(pub usize);

impl ObjectDim {
    /// The monoidal unit.
    pub const UNIT: ObjectDim = ObjectDim(1);

    pub fn new(n: usize) -> Self {
        ObjectDim(n)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Monoidal product of objects: sizes multiply.
    pub fn tensor(self, other: ObjectDim) -> ObjectDim {
        ObjectDim(self.0 * other.0)
    }

    /// Linear index of the pair `(i, j)` in `self ⊗ other`, left factor major.
    pub fn pair_index(self, other: ObjectDim, i: usize, j: usize) -> usize {
        debug_assert!(i < self.0 && j < other.0);
        i * other.0 + j
    }

    /// Inverse of [`ObjectDim::pair_index`].
    pub fn split_index(self, other: ObjectDim, k: usize) -> (usize, usize) {
        debug_assert!(k < self.0 * other.0);
        (k / other.0, k % other.0)
    }
}

impl From<usize> for ObjectDim {
    fn from(n: usize) -> Self {
        ObjectDim(n)
    }
}

impl fmt::Display for ObjectDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
