//! Theory-independent vocabulary: the process contract every concrete theory
//! implements, lifting squares, classification flags and factor pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::object::ObjectDim;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    /// Nonnegative matrices.
    FStoch,
    /// Finite relations.
    FRel,
    /// Finite functions.
    FSet,
    /// Completely positive maps between finite-dimensional Hilbert spaces.
    Quant,
}

impl Theory {
    pub const ALL: [Theory; 4] = [Theory::FStoch, Theory::FRel, Theory::FSet, Theory::Quant];

    pub fn name(self) -> &'static str {
        match self {
            Theory::FStoch => "fstoch",
            Theory::FRel => "frel",
            Theory::FSet => "fset",
            Theory::Quant => "quant",
        }
    }

    /// Hom-sets are finite, so lifting problems can be solved by search.
    pub fn is_enumerable(self) -> bool {
        matches!(self, Theory::FRel | Theory::FSet)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theory::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown theory `{s}`")))
    }
}

/// A symmetric monoidal category of processes equipped with discarding
/// effects and, where the theory has them, completely mixed states.
pub trait Process: Clone + fmt::Debug + Send + Sync + Sized {
    const THEORY: Theory;

    fn dom(&self) -> ObjectDim;
    fn cod(&self) -> ObjectDim;

    fn identity(a: ObjectDim) -> Result<Self>;

    /// The symmetry `a ⊗ b → b ⊗ a`.
    fn swap(a: ObjectDim, b: ObjectDim) -> Result<Self>;

    /// `self ∘ first`: run `first`, then `self`.
    fn compose(&self, first: &Self) -> Result<Self>;

    /// Monoidal product, left factor major on both sides.
    fn tensor(&self, other: &Self) -> Self;

    /// The completely mixed state `I → a`.
    fn mix(a: ObjectDim) -> Result<Self>;

    /// The discarding effect `a → I`.
    fn discard(a: ObjectDim) -> Result<Self>;

    /// Equality of processes. Exact theories ignore `tol`.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn same_type(&self, other: &Self) -> bool {
        self.dom() == other.dom() && self.cod() == other.cod()
    }
}

pub(crate) fn check_composable<M: Process>(second: &M, first: &M) -> Result<()> {
    if first.cod() != second.dom() {
        return Err(Error::ObjectMismatch {
            expected: second.dom().get(),
            found: first.cod().get(),
        });
    }
    Ok(())
}

/// Membership of a morphism in the four classes. `None` marks a class the
/// theory cannot define (finite functions have no completely mixed states,
/// hence no pure or mixing classes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassFlags {
    pub pure: Option<bool>,
    pub copure: bool,
    pub mixing: Option<bool>,
    pub discarding: bool,
}

impl ClassFlags {
    pub fn new(pure: bool, copure: bool, mixing: bool, discarding: bool) -> Self {
        ClassFlags {
            pure: Some(pure),
            copure,
            mixing: Some(mixing),
            discarding,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.pure == Some(true)
    }

    pub fn is_mixing(&self) -> bool {
        self.mixing == Some(true)
    }
}

/// A commuting square
///
/// ```text
///   W --top--> Y
///   |          |
///  left      right
///   v          v
///   X -bottom-> Z
/// ```
///
/// A fill-in is `h: X → Y` with `h ∘ left = top` and `right ∘ h = bottom`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftingSquare<M> {
    pub left: M,
    pub right: M,
    pub top: M,
    pub bottom: M,
}

impl<M: Process> LiftingSquare<M> {
    /// Builds a square, checking only that the four legs fit together.
    pub fn new(left: M, right: M, top: M, bottom: M) -> Result<Self> {
        let fits = left.dom() == top.dom()
            && top.cod() == right.dom()
            && left.cod() == bottom.dom()
            && bottom.cod() == right.cod();
        if !fits {
            return Err(Error::shape(format!(
                "square legs do not fit: left {}→{}, right {}→{}, top {}→{}, bottom {}→{}",
                left.dom(),
                left.cod(),
                right.dom(),
                right.cod(),
                top.dom(),
                top.cod(),
                bottom.dom(),
                bottom.cod()
            )));
        }
        Ok(LiftingSquare {
            left,
            right,
            top,
            bottom,
        })
    }

    pub fn commutes(&self, tol: f64) -> Result<bool> {
        let upper = self.right.compose(&self.top)?;
        let lower = self.bottom.compose(&self.left)?;
        Ok(upper.approx_eq(&lower, tol))
    }

    pub fn ensure_commutes(&self, tol: f64) -> Result<()> {
        if self.commutes(tol)? {
            Ok(())
        } else {
            Err(Error::NotCommuting)
        }
    }

    /// Whether `h` makes both triangles commute.
    pub fn is_fill_in(&self, h: &M, tol: f64) -> Result<bool> {
        if h.dom() != self.left.cod() || h.cod() != self.top.cod() {
            return Ok(false);
        }
        Ok(h.compose(&self.left)?.approx_eq(&self.top, tol)
            && self.right.compose(h)?.approx_eq(&self.bottom, tol))
    }
}

impl<M> LiftingSquare<M> {
    pub fn map<N>(self, mut f: impl FnMut(M) -> N) -> LiftingSquare<N> {
        LiftingSquare {
            left: f(self.left),
            right: f(self.right),
            top: f(self.top),
            bottom: f(self.bottom),
        }
    }
}

/// A factorisation `right ∘ left` of a morphism through an ancilla.
///
/// Purification: `left = id ⊗ mix(ancilla)`, `right` pure.
/// Copurification: `left` copure, `right = id ⊗ discard(ancilla)`.
/// The ancilla is always the right-hand tensor factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorPair<M> {
    pub left: M,
    pub right: M,
    pub ancilla: ObjectDim,
}

impl<M: Process> FactorPair<M> {
    pub fn recompose(&self) -> Result<M> {
        self.right.compose(&self.left)
    }
}

impl<M> FactorPair<M> {
    pub fn map<N>(self, mut f: impl FnMut(M) -> N) -> FactorPair<N> {
        FactorPair {
            left: f(self.left),
            right: f(self.right),
            ancilla: self.ancilla,
        }
    }
}

/// `id_a ⊗ mix(c)`: introduce a completely mixed ancilla next to `a`.
pub fn introduce_mixed<M: Process>(a: ObjectDim, c: ObjectDim) -> Result<M> {
    Ok(M::identity(a)?.tensor(&M::mix(c)?))
}

/// `id_b ⊗ discard(c)`: discard the ancilla next to `b`.
pub fn discard_ancilla<M: Process>(b: ObjectDim, c: ObjectDim) -> Result<M> {
    Ok(M::identity(b)?.tensor(&M::discard(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_names_round_trip() {
        for t in Theory::ALL {
            assert_eq!(t.name().parse::<Theory>().unwrap(), t);
        }
        assert!("fhilb".parse::<Theory>().is_err());
    }

    #[test]
    fn flags_serialize_missing_classes_as_null() {
        let flags = ClassFlags {
            pure: None,
            copure: true,
            mixing: None,
            discarding: false,
        };
        let json = serde_json::to_string(&flags).unwrap();
        assert_eq!(
            json,
            r#"{"pure":null,"copure":true,"mixing":null,"discarding":false}"#
        );
    }
}
