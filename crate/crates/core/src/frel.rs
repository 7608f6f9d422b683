//! Finite relations.
//!
//! A relation `r: A → B` is a `B × A` boolean matrix with `adj[b][a]` set iff
//! `(a, b) ∈ r`, so composition is boolean matrix multiplication.

use std::fmt;

use crate::error::{Error, Result};
use crate::object::ObjectDim;
use crate::theory::{
    check_composable, introduce_mixed, ClassFlags, FactorPair, LiftingSquare, Process, Theory,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    dom: ObjectDim,
    cod: ObjectDim,
    adj: Vec<bool>,
}

impl Relation {
    /// From a row-major `cod × dom` adjacency matrix.
    pub fn new(dom: ObjectDim, cod: ObjectDim, adj: Vec<bool>) -> Result<Self> {
        if adj.len() != dom.get() * cod.get() {
            return Err(Error::shape(format!(
                "expected {} cells for a relation {}→{}, found {}",
                dom.get() * cod.get(),
                dom,
                cod,
                adj.len()
            )));
        }
        Ok(Relation { dom, cod, adj })
    }

    pub fn empty(dom: ObjectDim, cod: ObjectDim) -> Self {
        Relation {
            dom,
            cod,
            adj: vec![false; dom.get() * cod.get()],
        }
    }

    pub fn total(dom: ObjectDim, cod: ObjectDim) -> Self {
        Relation {
            dom,
            cod,
            adj: vec![true; dom.get() * cod.get()],
        }
    }

    pub fn from_pairs(
        dom: usize,
        cod: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut r = Relation::empty(ObjectDim(dom), ObjectDim(cod));
        for (a, b) in pairs {
            if a >= dom || b >= cod {
                return Err(Error::shape(format!("pair ({a}, {b}) out of range")));
            }
            r.insert(a, b);
        }
        Ok(r)
    }

    pub fn adjacency(&self) -> &[bool] {
        &self.adj
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.adj[b * self.dom.get() + a]
    }

    fn insert(&mut self, a: usize, b: usize) {
        let d = self.dom.get();
        self.adj[b * d + a] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (d, c) = (self.dom.get(), self.cod.get());
        (0..d).flat_map(move |a| {
            (0..c)
                .filter(move |&b| self.related(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn len(&self) -> usize {
        self.adj.iter().filter(|&&x| x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn out_degree(&self, a: usize) -> usize {
        (0..self.cod.get()).filter(|&b| self.related(a, b)).count()
    }

    fn in_degree(&self, b: usize) -> usize {
        (0..self.dom.get()).filter(|&a| self.related(a, b)).count()
    }

    /// The relation `(b, a) ∈ rᵒ ⇔ (a, b) ∈ r`.
    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.cod, self.dom);
        for (a, b) in self.pairs() {
            out.insert(b, a);
        }
        out
    }

    /// Partial function: each source related to at most one target.
    pub fn is_pure(&self) -> bool {
        (0..self.dom.get()).all(|a| self.out_degree(a) <= 1)
    }

    /// Injective: each target related to at most one source.
    pub fn is_copure(&self) -> bool {
        (0..self.cod.get()).all(|b| self.in_degree(b) <= 1)
    }

    /// Surjective, injective and total.
    pub fn is_mixing(&self) -> bool {
        (0..self.cod.get()).all(|b| self.in_degree(b) == 1)
            && (0..self.dom.get()).all(|a| self.out_degree(a) >= 1)
    }

    /// Surjective total function.
    pub fn is_discarding(&self) -> bool {
        (0..self.dom.get()).all(|a| self.out_degree(a) == 1)
            && (0..self.cod.get()).all(|b| self.in_degree(b) >= 1)
    }

    pub fn classify(&self) -> ClassFlags {
        ClassFlags::new(
            self.is_pure(),
            self.is_copure(),
            self.is_mixing(),
            self.is_discarding(),
        )
    }

    /// Pure in the sense of relating at most one pair of elements.
    pub fn is_pure_chiribella(&self) -> bool {
        self.len() <= 1
    }

    /// Pure in the sense of being a partial injection.
    pub fn is_pure_selby_coecke(&self) -> bool {
        self.is_pure() && self.is_copure()
    }

    /// `r = p ∘ (id_A ⊗ mix(B))` where `p: A×B → B` sends `(a, b) ↦ b`
    /// exactly when `(a, b) ∈ r`.
    /// Maps into the empty set go through a one-point ancilla.
    pub fn purify(&self) -> FactorPair<Relation> {
        purify_through(self, self.cod.max(ObjectDim::UNIT))
    }

    /// `r = (id_B ⊗ discard(A)) ∘ c` where `c: A → B×A` relates `a` to
    /// `(b, a)` exactly when `(a, b) ∈ r`. An empty domain is padded to a
    /// one-point ancilla so the discarding leg stays surjective.
    pub fn copurify(&self) -> FactorPair<Relation> {
        let (a_dim, b_dim) = (self.dom, self.cod);
        let ancilla = a_dim.max(ObjectDim::UNIT);
        let mut c = Relation::empty(a_dim, b_dim.tensor(ancilla));
        for (a, b) in self.pairs() {
            c.insert(a, b_dim.pair_index(ancilla, b, a));
        }
        FactorPair {
            left: c,
            right: Relation::identity(b_dim)
                .expect("identity")
                .tensor(&Relation::discard(ancilla).expect("frel has discarding effects")),
            ancilla,
        }
    }
}

fn purify_through(r: &Relation, ancilla: ObjectDim) -> FactorPair<Relation> {
    debug_assert!(ancilla >= r.cod);
    let a_dim = r.dom;
    let mut p = Relation::empty(a_dim.tensor(ancilla), r.cod);
    for (a, b) in r.pairs() {
        p.insert(a_dim.pair_index(ancilla, a, b), b);
    }
    FactorPair {
        left: introduce_mixed(a_dim, ancilla).expect("frel has mixed states"),
        right: p,
        ancilla,
    }
}

/// Solves a lifting square whose left leg is mixing (surjective, injective,
/// total) and right leg is pure (a partial function).
///
/// As for matrices, top and bottom are purified first; the reduced square
/// `p ∘ m = p_right ∘ m_top` is filled by relating `x` to `y` when both hang
/// off the same `w` and either share their target `z` or `y` has no target.
pub fn fill_in(sq: &LiftingSquare<Relation>) -> Result<Relation> {
    if !sq.left.is_mixing() {
        return Err(Error::LegClass("left leg is not mixing".into()));
    }
    if !sq.right.is_pure() {
        return Err(Error::LegClass(
            "right leg is not a partial function".into(),
        ));
    }
    sq.ensure_commutes(0.0)?;

    let top = purify_through(&sq.top, sq.top.cod.max(ObjectDim::UNIT));
    let bottom = purify_through(&sq.bottom, sq.bottom.cod.max(ObjectDim::UNIT));

    let m = bottom.left.compose(&sq.left)?;
    let p_right = sq.right.compose(&top.right)?;
    let core = fill_reduced(&m, &top.left, &bottom.right, &p_right);
    top.right.compose(&core)?.compose(&bottom.left)
}

fn fill_reduced(m: &Relation, m_top: &Relation, p: &Relation, p_right: &Relation) -> Relation {
    let (w_dim, x_dim, y_dim, z_dim) = (m.dom.get(), m.cod.get(), m_top.cod.get(), p.cod.get());
    let mut h = Relation::empty(m.cod, m_top.cod);
    for x in 0..x_dim {
        for y in 0..y_dim {
            let share_source = (0..w_dim).any(|w| m.related(w, x) && m_top.related(w, y));
            if !share_source {
                continue;
            }
            let y_targets = p_right.out_degree(y);
            let share_target = (0..z_dim).any(|z| p.related(x, z) && p_right.related(y, z));
            if share_target || y_targets == 0 {
                h.insert(x, y);
            }
        }
    }
    h
}

impl Process for Relation {
    const THEORY: Theory = Theory::FRel;

    fn dom(&self) -> ObjectDim {
        self.dom
    }

    fn cod(&self) -> ObjectDim {
        self.cod
    }

    fn identity(a: ObjectDim) -> Result<Self> {
        Relation::from_pairs(a.get(), a.get(), (0..a.get()).map(|i| (i, i)))
    }

    fn swap(a: ObjectDim, b: ObjectDim) -> Result<Self> {
        let mut s = Relation::empty(a.tensor(b), b.tensor(a));
        for i in 0..a.get() {
            for j in 0..b.get() {
                s.insert(a.pair_index(b, i, j), b.pair_index(a, j, i));
            }
        }
        Ok(s)
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        check_composable(self, first)?;
        let mut out = Relation::empty(first.dom, self.cod);
        for (a, b) in first.pairs() {
            for c in 0..self.cod.get() {
                if self.related(b, c) {
                    out.insert(a, c);
                }
            }
        }
        Ok(out)
    }

    fn tensor(&self, other: &Self) -> Self {
        let mut out = Relation::empty(self.dom.tensor(other.dom), self.cod.tensor(other.cod));
        for (a1, b1) in self.pairs() {
            for (a2, b2) in other.pairs() {
                out.insert(
                    self.dom.pair_index(other.dom, a1, a2),
                    self.cod.pair_index(other.cod, b1, b2),
                );
            }
        }
        out
    }

    /// Relates the point to everything in `a`.
    fn mix(a: ObjectDim) -> Result<Self> {
        Ok(Relation::total(ObjectDim::UNIT, a))
    }

    /// Relates everything in `a` to the point.
    fn discard(a: ObjectDim) -> Result<Self> {
        Ok(Relation::total(a, ObjectDim::UNIT))
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}→{}){{", self.dom, self.cod)?;
        for (k, (a, b)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

/// Every relation `dom → cod`, in increasing order of the row-major
/// adjacency bits read as a binary number (first cell most significant).
pub fn all_relations(dom: usize, cod: usize) -> impl Iterator<Item = Relation> {
    let cells = dom * cod;
    assert!(cells < 32, "hom-set too large to enumerate");
    (0u32..1 << cells).map(move |bits| {
        let adj = (0..cells)
            .map(|k| bits >> (cells - 1 - k) & 1 == 1)
            .collect();
        Relation::new(ObjectDim(dom), ObjectDim(cod), adj).expect("shape")
    })
}

/// Every relation between sets of size at most `max`, grouped by hom-set.
pub fn all_relations_up_to(max: usize) -> impl Iterator<Item = Relation> {
    (0..=max).flat_map(move |d| (0..=max).flat_map(move |c| all_relations(d, c)))
}
