//! Nonnegative matrices over exact rationals.
//!
//! A morphism `I → J` is a `J × I` matrix (rows index the codomain), so
//! composition is the matrix product and the tensor is the Kronecker product
//! with left-major pair indexing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::object::ObjectDim;
use crate::theory::{
    check_composable, discard_ancilla, introduce_mixed, ClassFlags, FactorPair, LiftingSquare,
    Process, Theory,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StochMatrix {
    dom: ObjectDim,
    cod: ObjectDim,
    /// Row-major, `cod × dom`.
    entries: Vec<BigRational>,
}

impl StochMatrix {
    pub fn new(dom: ObjectDim, cod: ObjectDim, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != dom.get() * cod.get() {
            return Err(Error::shape(format!(
                "expected {} entries for a {}×{} matrix, found {}",
                dom.get() * cod.get(),
                cod,
                dom,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.is_negative()) {
            return Err(Error::InvalidEntry(format!("negative entry {bad}")));
        }
        Ok(StochMatrix { dom, cod, entries })
    }

    /// Convenience constructor from integer rows (`rows[j][i]`, `cod × dom`).
    pub fn from_rows(dom: usize, rows: &[&[i64]]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * dom);
        for row in rows {
            if row.len() != dom {
                return Err(Error::shape("ragged rows"));
            }
            entries.extend(
                row.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v))),
            );
        }
        StochMatrix::new(ObjectDim(dom), ObjectDim(rows.len()), entries)
    }

    pub fn zeros(dom: ObjectDim, cod: ObjectDim) -> Self {
        StochMatrix {
            dom,
            cod,
            entries: vec![BigRational::zero(); dom.get() * cod.get()],
        }
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// Entry in row `row` (codomain index) and column `col` (domain index).
    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dom.get() + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: BigRational) {
        let d = self.dom.get();
        self.entries[row * d + col] = value;
    }

    fn nonzero(&self, row: usize, col: usize) -> bool {
        !self.get(row, col).is_zero()
    }

    fn nonzeros_in_column(&self, col: usize) -> usize {
        (0..self.cod.get())
            .filter(|&r| self.nonzero(r, col))
            .count()
    }

    fn nonzeros_in_row(&self, row: usize) -> usize {
        (0..self.dom.get())
            .filter(|&c| self.nonzero(row, c))
            .count()
    }

    pub fn transpose(&self) -> StochMatrix {
        let mut out = StochMatrix::zeros(self.cod, self.dom);
        for r in 0..self.cod.get() {
            for c in 0..self.dom.get() {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// At most one nonzero entry in each column.
    pub fn is_pure(&self) -> bool {
        (0..self.dom.get()).all(|c| self.nonzeros_in_column(c) <= 1)
    }

    /// At most one nonzero entry in each row.
    pub fn is_copure(&self) -> bool {
        (0..self.cod.get()).all(|r| self.nonzeros_in_row(r) <= 1)
    }

    /// Exactly one nonzero entry in each row, at least one in each column.
    pub fn is_mixing(&self) -> bool {
        (0..self.cod.get()).all(|r| self.nonzeros_in_row(r) == 1)
            && (0..self.dom.get()).all(|c| self.nonzeros_in_column(c) >= 1)
    }

    /// Exactly one nonzero entry in each column, at least one in each row.
    pub fn is_discarding(&self) -> bool {
        (0..self.dom.get()).all(|c| self.nonzeros_in_column(c) == 1)
            && (0..self.cod.get()).all(|r| self.nonzeros_in_row(r) >= 1)
    }

    pub fn classify(&self) -> ClassFlags {
        ClassFlags::new(
            self.is_pure(),
            self.is_copure(),
            self.is_mixing(),
            self.is_discarding(),
        )
    }

    /// `f = p ∘ (id ⊗ mix(J))` with `p[j'][(i, j)] = δ(j, j')·f[j][i]`.
    /// A map into the empty set is purified through a one-point ancilla so
    /// that the mixing leg stays total.
    pub fn purify(&self) -> FactorPair<StochMatrix> {
        purify_through(self, self.cod.max(ObjectDim::UNIT))
    }

    /// `f = (id ⊗ discard(I)) ∘ c`, obtained by transposing the
    /// purification of `fᵀ`.
    pub fn copurify(&self) -> FactorPair<StochMatrix> {
        let dual = self.transpose().purify();
        FactorPair {
            left: dual.right.transpose(),
            right: dual.left.transpose(),
            ancilla: dual.ancilla,
        }
    }
}

/// Purification through an ancilla of size `ancilla ≥ cod`; the extra
/// ancilla points are sent to zero.
fn purify_through(f: &StochMatrix, ancilla: ObjectDim) -> FactorPair<StochMatrix> {
    debug_assert!(ancilla >= f.cod);
    let (i_dim, j_dim) = (f.dom, f.cod);
    let mut p = StochMatrix::zeros(i_dim.tensor(ancilla), j_dim);
    for i in 0..i_dim.get() {
        for j in 0..j_dim.get() {
            p.set(j, i_dim.pair_index(ancilla, i, j), f.get(j, i).clone());
        }
    }
    FactorPair {
        left: introduce_mixed(i_dim, ancilla).expect("fstoch has mixed states"),
        right: p,
        ancilla,
    }
}

/// Solves a lifting square whose left leg is mixing and right leg is pure.
///
/// Top and bottom are first purified, which reduces the problem to a square
/// with mixing legs on the top and left and pure legs on the bottom and
/// right; that square is filled blockwise (see [`fill_reduced`]).
pub fn fill_in(sq: &LiftingSquare<StochMatrix>) -> Result<StochMatrix> {
    if !sq.left.is_mixing() {
        return Err(Error::LegClass("left leg is not mixing".into()));
    }
    if !sq.right.is_pure() {
        return Err(Error::LegClass("right leg is not pure".into()));
    }
    sq.ensure_commutes(0.0)?;

    let top = purify_through(&sq.top, sq.top.cod.max(ObjectDim::UNIT));
    let bottom = purify_through(&sq.bottom, sq.bottom.cod.max(ObjectDim::UNIT));

    let m = bottom.left.compose(&sq.left)?;
    let m_top = &top.left;
    let p = &bottom.right;
    let p_right = sq.right.compose(&top.right)?;

    let core = fill_reduced(&m, m_top, p, &p_right);
    top.right.compose(&core)?.compose(&bottom.left)
}

/// Fill-in `h: X → Y` for the square `p ∘ m = p_right ∘ m_top` with
/// `m: W → X`, `m_top: W → Y` mixing and `p: X → Z`, `p_right: Y → Z` pure.
///
/// Each `x` (resp. `y`) lies in at most one block `X_wz` (resp. `Y_wz`),
/// where `w` is its unique mixing source and `z` its unique pure target.
/// Within a block `h[y][x] = p[z][x]·m_top[y][w] / c_wz` with
/// `c_wz = Σ_{x∈X_wz} p[z][x]·m[x][w]`. Points `y` killed by `p_right` are
/// reached from the smallest `x` under their source `w`.
fn fill_reduced(
    m: &StochMatrix,
    m_top: &StochMatrix,
    p: &StochMatrix,
    p_right: &StochMatrix,
) -> StochMatrix {
    let (w_dim, x_dim, y_dim, z_dim) = (m.dom.get(), m.cod.get(), m_top.cod.get(), p.cod.get());
    let mut h = StochMatrix::zeros(m.cod, m_top.cod);

    for y in 0..y_dim {
        if p_right.nonzeros_in_column(y) > 0 {
            continue;
        }
        let w = (0..w_dim)
            .find(|&w| m_top.nonzero(y, w))
            .expect("mixing leg has a nonzero in every row");
        let x = (0..x_dim)
            .find(|&x| m.nonzero(x, w))
            .expect("mixing leg has a nonzero in every column");
        h.set(y, x, m_top.get(y, w) / m.get(x, w));
    }

    for w in 0..w_dim {
        for z in 0..z_dim {
            let xs: Vec<usize> = (0..x_dim)
                .filter(|&x| m.nonzero(x, w) && p.nonzero(z, x))
                .collect();
            let ys: Vec<usize> = (0..y_dim)
                .filter(|&y| m_top.nonzero(y, w) && p_right.nonzero(z, y))
                .collect();
            let c: BigRational = xs.iter().map(|&x| p.get(z, x) * m.get(x, w)).sum();
            if c.is_zero() {
                continue;
            }
            for &x in &xs {
                for &y in &ys {
                    h.set(y, x, p.get(z, x) * m_top.get(y, w) / &c);
                }
            }
        }
    }
    h
}

impl Process for StochMatrix {
    const THEORY: Theory = Theory::FStoch;

    fn dom(&self) -> ObjectDim {
        self.dom
    }

    fn cod(&self) -> ObjectDim {
        self.cod
    }

    fn identity(a: ObjectDim) -> Result<Self> {
        let mut id = StochMatrix::zeros(a, a);
        for i in 0..a.get() {
            id.set(i, i, BigRational::one());
        }
        Ok(id)
    }

    fn swap(a: ObjectDim, b: ObjectDim) -> Result<Self> {
        let mut s = StochMatrix::zeros(a.tensor(b), b.tensor(a));
        for i in 0..a.get() {
            for j in 0..b.get() {
                s.set(
                    b.pair_index(a, j, i),
                    a.pair_index(b, i, j),
                    BigRational::one(),
                );
            }
        }
        Ok(s)
    }

    fn compose(&self, first: &Self) -> Result<Self> {
        check_composable(self, first)?;
        let (n, k, m) = (first.dom.get(), first.cod.get(), self.cod.get());
        let mut out = StochMatrix::zeros(first.dom, self.cod);
        for r in 0..m {
            for c in 0..n {
                let mut acc = BigRational::zero();
                for j in 0..k {
                    let (a, b) = (self.get(r, j), first.get(j, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    fn tensor(&self, other: &Self) -> Self {
        let dom = self.dom.tensor(other.dom);
        let cod = self.cod.tensor(other.cod);
        let mut out = StochMatrix::zeros(dom, cod);
        for r1 in 0..self.cod.get() {
            for c1 in 0..self.dom.get() {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.cod.get() {
                    for c2 in 0..other.dom.get() {
                        let b = other.get(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(
                            self.cod.pair_index(other.cod, r1, r2),
                            self.dom.pair_index(other.dom, c1, c2),
                            a * b,
                        );
                    }
                }
            }
        }
        out
    }

    /// Column of ones.
    fn mix(a: ObjectDim) -> Result<Self> {
        let entries = vec![BigRational::one(); a.get()];
        StochMatrix::new(ObjectDim::UNIT, a, entries)
    }

    /// Row of ones.
    fn discard(a: ObjectDim) -> Result<Self> {
        let entries = vec![BigRational::one(); a.get()];
        StochMatrix::new(a, ObjectDim::UNIT, entries)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl fmt::Debug for StochMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StochMatrix({}→{})[", self.dom, self.cod)?;
        for r in 0..self.cod.get() {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.dom.get() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

/// Introduces the ancilla for [`StochMatrix::copurify`]'s right leg; exposed
/// so callers can check the shape of a copurification.
pub fn copurification_discard(cod: ObjectDim, ancilla: ObjectDim) -> StochMatrix {
    discard_ancilla(cod, ancilla).expect("fstoch has discarding effects")
}
