//! A theory-tagged morphism and its JSON document form.
//!
//! ```json
//! {"theory": "fstoch", "dom": 2, "cod": 1, "payload": ["1/1", "2/3"]}
//! ```
//!
//! Payloads, all row-major with rows indexing the codomain:
//!
//! * `fstoch`: `cod·dom` rational strings `"p/q"` (or bare integers `"p"`),
//!   each nonnegative;
//! * `frel`: `cod·dom` entries `0`/`1`, entry `[b·dom + a]` set iff `a` is
//!   related to `b`;
//! * `fset`: `dom` integers in `[0, cod)`, the function table;
//! * `quant`: the Choi matrix, `(dom·cod)²` pairs `[re, im]`.
//!
//! Emitted rationals always carry a denominator (`"3/1"`, `"0/1"`).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frel::Relation;
use crate::fset::FinFunction;
use crate::fstoch::StochMatrix;
use crate::object::ObjectDim;
use crate::quant::{CMatrix, CpMap, DEFAULT_TOL};
use crate::theory::{ClassFlags, FactorPair, LiftingSquare, Process, Theory};

#[derive(Debug, Clone, PartialEq)]
pub enum Morphism {
    FStoch(StochMatrix),
    FRel(Relation),
    FSet(FinFunction),
    Quant(CpMap),
}

macro_rules! dispatch {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            Morphism::FStoch($x) => $body,
            Morphism::FRel($x) => $body,
            Morphism::FSet($x) => $body,
            Morphism::Quant($x) => $body,
        }
    };
}

macro_rules! dispatch_pair {
    ($a:expr, $b:expr, ($x:ident, $y:ident) => $body:expr) => {
        match ($a, $b) {
            (Morphism::FStoch($x), Morphism::FStoch($y)) => Ok(Morphism::FStoch($body?)),
            (Morphism::FRel($x), Morphism::FRel($y)) => Ok(Morphism::FRel($body?)),
            (Morphism::FSet($x), Morphism::FSet($y)) => Ok(Morphism::FSet($body?)),
            (Morphism::Quant($x), Morphism::Quant($y)) => Ok(Morphism::Quant($body?)),
            (a, b) => Err(Error::TheoryMismatch {
                left: a.theory(),
                right: b.theory(),
            }),
        }
    };
}

impl Morphism {
    pub fn theory(&self) -> Theory {
        match self {
            Morphism::FStoch(_) => Theory::FStoch,
            Morphism::FRel(_) => Theory::FRel,
            Morphism::FSet(_) => Theory::FSet,
            Morphism::Quant(_) => Theory::Quant,
        }
    }

    pub fn dom(&self) -> ObjectDim {
        dispatch!(self, m => m.dom())
    }

    pub fn cod(&self) -> ObjectDim {
        dispatch!(self, m => m.cod())
    }

    pub fn identity(a: ObjectDim, theory: Theory) -> Result<Self> {
        by_theory(theory, |t| match t {
            Theory::FStoch => StochMatrix::identity(a).map(Morphism::FStoch),
            Theory::FRel => Relation::identity(a).map(Morphism::FRel),
            Theory::FSet => FinFunction::identity(a).map(Morphism::FSet),
            Theory::Quant => CpMap::identity(a).map(Morphism::Quant),
        })
    }

    pub fn swap(a: ObjectDim, b: ObjectDim, theory: Theory) -> Result<Self> {
        by_theory(theory, |t| match t {
            Theory::FStoch => StochMatrix::swap(a, b).map(Morphism::FStoch),
            Theory::FRel => Relation::swap(a, b).map(Morphism::FRel),
            Theory::FSet => FinFunction::swap(a, b).map(Morphism::FSet),
            Theory::Quant => CpMap::swap(a, b).map(Morphism::Quant),
        })
    }

    pub fn mix(a: ObjectDim, theory: Theory) -> Result<Self> {
        by_theory(theory, |t| match t {
            Theory::FStoch => StochMatrix::mix(a).map(Morphism::FStoch),
            Theory::FRel => Relation::mix(a).map(Morphism::FRel),
            Theory::FSet => FinFunction::mix(a).map(Morphism::FSet),
            Theory::Quant => CpMap::mix(a).map(Morphism::Quant),
        })
    }

    pub fn discard(a: ObjectDim, theory: Theory) -> Result<Self> {
        by_theory(theory, |t| match t {
            Theory::FStoch => StochMatrix::discard(a).map(Morphism::FStoch),
            Theory::FRel => Relation::discard(a).map(Morphism::FRel),
            Theory::FSet => FinFunction::discard(a).map(Morphism::FSet),
            Theory::Quant => CpMap::discard(a).map(Morphism::Quant),
        })
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Result<Morphism> {
        dispatch_pair!(self, first, (g, f) => g.compose(f))
    }

    pub fn tensor(&self, other: &Morphism) -> Result<Morphism> {
        dispatch_pair!(self, other, (f, g) => Ok::<_, Error>(f.tensor(g)))
    }

    /// Exact equality for the finite theories, max-norm of the Choi
    /// difference at most `tol` for quantum maps.
    pub fn equal(&self, other: &Morphism, tol: f64) -> Result<bool> {
        if self.theory() != other.theory() {
            return Err(Error::TheoryMismatch {
                left: self.theory(),
                right: other.theory(),
            });
        }
        if self.dom() != other.dom() || self.cod() != other.cod() {
            return Err(Error::shape(format!(
                "cannot compare {}→{} with {}→{}",
                self.dom(),
                self.cod(),
                other.dom(),
                other.cod()
            )));
        }
        Ok(match (self, other) {
            (Morphism::FStoch(a), Morphism::FStoch(b)) => a == b,
            (Morphism::FRel(a), Morphism::FRel(b)) => a == b,
            (Morphism::FSet(a), Morphism::FSet(b)) => a == b,
            (Morphism::Quant(a), Morphism::Quant(b)) => a.approx_eq(b, tol),
            _ => unreachable!("theories checked above"),
        })
    }

    pub fn classify(&self, tol: f64) -> Result<ClassFlags> {
        match self {
            Morphism::FStoch(m) => Ok(m.classify()),
            Morphism::FRel(r) => Ok(r.classify()),
            Morphism::FSet(f) => Ok(f.classify()),
            Morphism::Quant(c) => c.classify(tol),
        }
    }

    pub fn purify(&self, tol: f64) -> Result<FactorPair<Morphism>> {
        match self {
            Morphism::FStoch(m) => Ok(m.purify().map(Morphism::FStoch)),
            Morphism::FRel(r) => Ok(r.purify().map(Morphism::FRel)),
            Morphism::FSet(_) => Err(FinFunction::mix(ObjectDim::UNIT).unwrap_err()),
            Morphism::Quant(c) => Ok(c.purify(tol)?.map(Morphism::Quant)),
        }
    }

    pub fn copurify(&self, tol: f64) -> Result<FactorPair<Morphism>> {
        match self {
            Morphism::FStoch(m) => Ok(m.copurify().map(Morphism::FStoch)),
            Morphism::FRel(r) => Ok(r.copurify().map(Morphism::FRel)),
            Morphism::FSet(f) => Ok(f.copurify().map(Morphism::FSet)),
            Morphism::Quant(c) => Ok(c.copurify(tol)?.map(Morphism::Quant)),
        }
    }

    pub fn to_doc(&self) -> MorphismDoc {
        let payload = match self {
            Morphism::FStoch(m) => Value::Array(
                m.entries()
                    .iter()
                    .map(|q| Value::String(format!("{}/{}", q.numer(), q.denom())))
                    .collect(),
            ),
            Morphism::FRel(r) => Value::Array(
                r.adjacency()
                    .iter()
                    .map(|&b| Value::from(u8::from(b)))
                    .collect(),
            ),
            Morphism::FSet(f) => Value::Array(f.table().iter().map(|&v| Value::from(v)).collect()),
            Morphism::Quant(c) => {
                let n = c.choi().nrows();
                let mut cells = Vec::with_capacity(n * n);
                for r in 0..n {
                    for col in 0..n {
                        let z = c.choi()[(r, col)];
                        cells.push(Value::Array(vec![Value::from(z.re), Value::from(z.im)]));
                    }
                }
                Value::Array(cells)
            }
        };
        MorphismDoc {
            theory: self.theory(),
            dom: self.dom().get(),
            cod: self.cod().get(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("documents serialise")
    }

    pub fn from_json(text: &str) -> Result<Morphism> {
        let doc: MorphismDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.to_morphism()
    }
}

fn by_theory<T>(theory: Theory, f: impl FnOnce(Theory) -> Result<T>) -> Result<T> {
    f(theory)
}

macro_rules! impl_from_process {
    ($ty:ty, $variant:ident) => {
        impl From<$ty> for Morphism {
            fn from(m: $ty) -> Self {
                Morphism::$variant(m)
            }
        }

        impl TryFrom<Morphism> for $ty {
            type Error = Error;

            fn try_from(m: Morphism) -> Result<Self> {
                match m {
                    Morphism::$variant(x) => Ok(x),
                    other => Err(Error::TheoryMismatch {
                        left: <$ty as Process>::THEORY,
                        right: other.theory(),
                    }),
                }
            }
        }
    };
}

impl_from_process!(StochMatrix, FStoch);
impl_from_process!(Relation, FRel);
impl_from_process!(FinFunction, FSet);
impl_from_process!(CpMap, Quant);

/// Converts an untyped square to a typed one, failing on mixed theories.
pub fn typed_square<M>(sq: LiftingSquare<Morphism>) -> Result<LiftingSquare<M>>
where
    M: Process + TryFrom<Morphism, Error = Error>,
{
    LiftingSquare::new(
        M::try_from(sq.left)?,
        M::try_from(sq.right)?,
        M::try_from(sq.top)?,
        M::try_from(sq.bottom)?,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub theory: Theory,
    pub dom: usize,
    pub cod: usize,
    pub payload: Value,
}

fn payload_array(payload: &Value, expected: usize) -> Result<&Vec<Value>> {
    let items = payload
        .as_array()
        .ok_or_else(|| Error::Parse("payload must be an array".into()))?;
    if items.len() != expected {
        return Err(Error::shape(format!(
            "payload has {} entries, expected {expected}",
            items.len()
        )));
    }
    Ok(items)
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("`{text}` is not a rational \"p/q\""));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(Error::Parse(format!("`{text}` has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

impl MorphismDoc {
    pub fn to_morphism(&self) -> Result<Morphism> {
        let (dom, cod) = (ObjectDim(self.dom), ObjectDim(self.cod));
        match self.theory {
            Theory::FStoch => {
                let items = payload_array(&self.payload, self.dom * self.cod)?;
                let entries = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => parse_rational(s),
                        _ => Err(Error::Parse(
                            "fstoch entries must be strings \"p/q\"".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                StochMatrix::new(dom, cod, entries).map(Morphism::FStoch)
            }
            Theory::FRel => {
                let items = payload_array(&self.payload, self.dom * self.cod)?;
                let adj = items
                    .iter()
                    .map(|v| match v.as_u64() {
                        Some(0) => Ok(false),
                        Some(1) => Ok(true),
                        _ => Err(Error::Parse("frel entries must be 0 or 1".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Relation::new(dom, cod, adj).map(Morphism::FRel)
            }
            Theory::FSet => {
                let items = payload_array(&self.payload, self.dom)?;
                let table = items
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| Error::Parse("fset entries must be naturals".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FinFunction::new(cod, table).map(Morphism::FSet)
            }
            Theory::Quant => {
                let n = self.dom * self.cod;
                let items = payload_array(&self.payload, n * n)?;
                let cells = items
                    .iter()
                    .map(|v| {
                        let pair = v.as_array().filter(|p| p.len() == 2);
                        let pair = pair.ok_or_else(|| {
                            Error::Parse("quant entries must be [re, im] pairs".into())
                        })?;
                        match (pair[0].as_f64(), pair[1].as_f64()) {
                            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                            _ => Err(Error::Parse("quant entries must be numbers".into())),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let choi = CMatrix::from_row_slice(n, n, &cells);
                CpMap::from_choi(dom, cod, choi, DEFAULT_TOL).map(Morphism::Quant)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub left: MorphismDoc,
    pub right: MorphismDoc,
    pub top: MorphismDoc,
    pub bottom: MorphismDoc,
}

impl SquareDoc {
    pub fn from_square(sq: &LiftingSquare<Morphism>) -> Self {
        SquareDoc {
            left: sq.left.to_doc(),
            right: sq.right.to_doc(),
            top: sq.top.to_doc(),
            bottom: sq.bottom.to_doc(),
        }
    }

    pub fn to_square(&self) -> Result<LiftingSquare<Morphism>> {
        let legs = [&self.left, &self.right, &self.top, &self.bottom]
            .into_iter()
            .map(MorphismDoc::to_morphism)
            .collect::<Result<Vec<_>>>()?;
        let theory = legs[0].theory();
        if let Some(other) = legs.iter().find(|m| m.theory() != theory) {
            return Err(Error::TheoryMismatch {
                left: theory,
                right: other.theory(),
            });
        }
        let [left, right, top, bottom]: [Morphism; 4] = legs.try_into().expect("four legs");
        LiftingSquare::new(left, right, top, bottom)
    }
}

impl Process for Morphism {
    // Placeholder tag; the runtime tag comes from `Morphism::theory`.
    const THEORY: Theory = Theory::FStoch;

    fn dom(&self) -> ObjectDim {
        Morphism::dom(self)
    }

    fn cod(&self) -> ObjectDim {
        Morphism::cod(self)
    }

    fn identity(_a: ObjectDim) -> Result<Self> {
        Err(Error::Parse("untyped identity needs a theory".into()))
    }

    fn swap(_a: ObjectDim, _b: ObjectDim) -> Result<Self> {
        Err(Error::Parse("untyped swap needs a theory".into()))
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        Morphism::compose(self, first)
    }

    fn tensor(&self, other: &Self) -> Self {
        Morphism::tensor(self, other).expect("tensor of morphisms from one theory")
    }

    fn mix(_a: ObjectDim) -> Result<Self> {
        Err(Error::Parse("untyped mix needs a theory".into()))
    }

    fn discard(_a: ObjectDim) -> Result<Self> {
        Err(Error::Parse("untyped discard needs a theory".into()))
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.equal(other, tol).unwrap_or(false)
    }
}
