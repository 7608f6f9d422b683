//! Finite functions. There are discarding effects but no completely mixed
//! states, so only the copure and discarding classes exist; they are the
//! injections and the surjections.

use std::fmt;

use crate::error::{Error, Result};
use crate::object::ObjectDim;
use crate::theory::{check_composable, ClassFlags, FactorPair, LiftingSquare, Process, Theory};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFunction {
    dom: ObjectDim,
    cod: ObjectDim,
    table: Vec<usize>,
}

impl FinFunction {
    pub fn new(cod: ObjectDim, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.get()) {
            return Err(Error::shape(format!(
                "image {bad} out of range for codomain {cod}"
            )));
        }
        Ok(FinFunction {
            dom: ObjectDim(table.len()),
            cod,
            table,
        })
    }

    pub fn from_table(cod: usize, table: &[usize]) -> Result<Self> {
        FinFunction::new(ObjectDim(cod), table.to_vec())
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn constant(dom: ObjectDim, cod: ObjectDim, value: usize) -> Result<Self> {
        FinFunction::new(cod, vec![value; dom.get()])
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.get()];
        self.table
            .iter()
            .all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.get()];
        for &b in &self.table {
            hit[b] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn classify(&self) -> ClassFlags {
        ClassFlags {
            pure: None,
            copure: self.is_injective(),
            mixing: None,
            discarding: self.is_surjective(),
        }
    }

    /// Smallest `a` with `f(a) = b`.
    pub fn first_preimage(&self, b: usize) -> Option<usize> {
        self.table.iter().position(|&v| v == b)
    }

    /// `f = π₁ ∘ c` with `c(a) = (f(a), a)`, an injection into `B × A`, and
    /// `π₁ = id_B ⊗ discard(A)`. An empty `A` is replaced by a point.
    pub fn copurify(&self) -> FactorPair<FinFunction> {
        let (a_dim, b_dim) = (self.dom, self.cod);
        let ancilla = a_dim.max(ObjectDim::UNIT);
        let c = FinFunction {
            dom: a_dim,
            cod: b_dim.tensor(ancilla),
            table: (0..a_dim.get())
                .map(|a| b_dim.pair_index(ancilla, self.table[a], a))
                .collect(),
        };
        let right = FinFunction::identity(b_dim)
            .expect("identity")
            .tensor(&FinFunction::discard(ancilla).expect("discard"));
        FactorPair {
            left: c,
            right,
            ancilla,
        }
    }

    /// `f = s ∘ i` with `i: A ↣ A ⊔ (B ∖ im f)` the inclusion and
    /// `s = f ⊔ id` surjective. Points of `B ∖ im f` follow `A` in increasing
    /// order.
    pub fn inj_surj_factorisation(&self) -> (FinFunction, FinFunction) {
        let mut hit = vec![false; self.cod.get()];
        for &b in &self.table {
            hit[b] = true;
        }
        let missing: Vec<usize> = (0..self.cod.get()).filter(|&b| !hit[b]).collect();
        let middle = ObjectDim(self.dom.get() + missing.len());
        let i = FinFunction {
            dom: self.dom,
            cod: middle,
            table: (0..self.dom.get()).collect(),
        };
        let s = FinFunction {
            dom: middle,
            cod: self.cod,
            table: self.table.iter().copied().chain(missing).collect(),
        };
        (i, s)
    }
}

/// Solves a square with injective left leg `i` and surjective right leg `s`:
/// `h(b) = top(i⁻¹(b))` on the image of `i`, otherwise the smallest preimage
/// of `bottom(b)` under `s`.
pub fn fill_in_plain(sq: &LiftingSquare<FinFunction>) -> Result<FinFunction> {
    if !sq.left.is_injective() {
        return Err(Error::LegClass("left leg is not injective".into()));
    }
    if !sq.right.is_surjective() {
        return Err(Error::LegClass("right leg is not surjective".into()));
    }
    sq.ensure_commutes(0.0)?;

    let mut inverse = vec![None; sq.left.cod.get()];
    for (a, &b) in sq.left.table.iter().enumerate() {
        inverse[b] = Some(a);
    }
    let table = (0..sq.left.cod.get())
        .map(|b| match inverse[b] {
            Some(a) => sq.top.apply(a),
            None => sq
                .right
                .first_preimage(sq.bottom.apply(b))
                .expect("surjective right leg"),
        })
        .collect();
    FinFunction::new(sq.top.cod, table)
}

/// A square testing an injection against a discarding projection:
///
/// ```text
///   A × C ---top---> D × E
///     |                |
///  f × id_C           π₂
///     v                v
///   B × C --bottom---> E
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSquare {
    pub f: FinFunction,
    pub c: ObjectDim,
    pub d: ObjectDim,
    pub e: ObjectDim,
    pub top: FinFunction,
    pub bottom: FinFunction,
}

impl ProjectionSquare {
    pub fn to_square(&self) -> Result<LiftingSquare<FinFunction>> {
        let left = self.f.tensor(&FinFunction::identity(self.c)?);
        let right = FinFunction::discard(self.d)?.tensor(&FinFunction::identity(self.e)?);
        LiftingSquare::new(left, right, self.top.clone(), self.bottom.clone())
    }
}

/// Fill-in `k: B × C → D × E` for an injective `f`: `k(b, c) = top(a, c)`
/// when `f(a) = b`, otherwise `(d₀, bottom(b, c))` with `d₀` the first point
/// of `D`.
pub fn fill_in_monoidal_copure(sq: &ProjectionSquare) -> Result<FinFunction> {
    if !sq.f.is_injective() {
        return Err(Error::LegClass("f is not injective".into()));
    }
    let square = sq.to_square()?;
    square.ensure_commutes(0.0)?;

    let (a_dim, b_dim, c_dim) = (sq.f.dom, sq.f.cod, sq.c);
    let mut inverse = vec![None; b_dim.get()];
    for (a, &b) in sq.f.table.iter().enumerate() {
        inverse[b] = Some(a);
    }
    let mut table = Vec::with_capacity(b_dim.get() * c_dim.get());
    for (b, preimage) in inverse.iter().enumerate() {
        for c in 0..c_dim.get() {
            let value = match *preimage {
                Some(a) => sq.top.apply(a_dim.pair_index(c_dim, a, c)),
                None => {
                    if sq.d.get() == 0 {
                        return Err(Error::LegClass(
                            "discarded object is empty but a fresh point is needed".into(),
                        ));
                    }
                    let e = sq.bottom.apply(b_dim.pair_index(c_dim, b, c));
                    sq.d.pair_index(sq.e, 0, e)
                }
            };
            table.push(value);
        }
    }
    FinFunction::new(sq.d.tensor(sq.e), table)
}

impl Process for FinFunction {
    const THEORY: Theory = Theory::FSet;

    fn dom(&self) -> ObjectDim {
        self.dom
    }

    fn cod(&self) -> ObjectDim {
        self.cod
    }

    fn identity(a: ObjectDim) -> Result<Self> {
        FinFunction::new(a, (0..a.get()).collect())
    }

    fn swap(a: ObjectDim, b: ObjectDim) -> Result<Self> {
        let table = (0..a.get() * b.get())
            .map(|k| {
                let (i, j) = a.split_index(b, k);
                b.pair_index(a, j, i)
            })
            .collect();
        FinFunction::new(b.tensor(a), table)
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        check_composable(self, first)?;
        Ok(FinFunction {
            dom: first.dom,
            cod: self.cod,
            table: first.table.iter().map(|&b| self.table[b]).collect(),
        })
    }

    fn tensor(&self, other: &Self) -> Self {
        let dom = self.dom.tensor(other.dom);
        let table = (0..dom.get())
            .map(|k| {
                let (a1, a2) = self.dom.split_index(other.dom, k);
                self.cod
                    .pair_index(other.cod, self.table[a1], other.table[a2])
            })
            .collect();
        FinFunction {
            dom,
            cod: self.cod.tensor(other.cod),
            table,
        }
    }

    fn mix(_a: ObjectDim) -> Result<Self> {
        Err(Error::UnsupportedFamily {
            theory: Theory::FSet,
            family: "completely mixed states",
            reason: "a function out of the one-point set picks a single element, \
                     so no state represents complete randomness; \
                     only copurification is available",
        })
    }

    /// The unique map to the point.
    fn discard(a: ObjectDim) -> Result<Self> {
        FinFunction::constant(a, ObjectDim::UNIT, 0)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl fmt::Debug for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFunction({}→{}){:?}", self.dom, self.cod, self.table)
    }
}

/// Every function `dom → cod` in lexicographic order of the table.
pub fn all_functions(dom: usize, cod: usize) -> impl Iterator<Item = FinFunction> {
    let count = if dom == 0 { 1 } else { cod.pow(dom as u32) };
    (0..count).map(move |mut n| {
        let mut table = vec![0; dom];
        for slot in table.iter_mut().rev() {
            *slot = n % cod;
            n /= cod;
        }
        FinFunction::new(ObjectDim(cod), table).expect("in range")
    })
}

pub fn all_functions_up_to(max: usize) -> impl Iterator<Item = FinFunction> {
    (0..=max).flat_map(move |d| (0..=max).flat_map(move |c| all_functions(d, c)))
}
