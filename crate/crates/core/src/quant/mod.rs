//! Completely positive maps between finite-dimensional Hilbert spaces.
//!
//! A map `A → B` is stored by its Choi matrix
//! `Σ_{a,a'} |a⟩⟨a'| ⊗ Φ(|a⟩⟨a'|)`, indexed by pairs `(a, b) ↦ a·dim B + b`.
//! Kraus operators are the working form for dilations and are recovered from
//! the Choi eigendecomposition.

mod dilation;
pub mod linalg;

pub use dilation::{dilation_residual, extend_dilation, is_minimal, minimal_dilation};
pub use linalg::CMatrix;

use crate::error::{Error, Result};
use crate::object::ObjectDim;
use crate::theory::{check_composable, ClassFlags, Process, Theory};
use linalg::{has_full_column_rank, hermitian_eigen, max_abs, max_abs_diff, ONE, ZERO};

/// Default numerical tolerance for Hermiticity, positivity and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

fn check_dim(n: ObjectDim) -> Result<()> {
    if n.get() == 0 {
        return Err(Error::shape("quantum systems need dimension at least 1"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpMap {
    dom: ObjectDim,
    cod: ObjectDim,
    choi: CMatrix,
}

/// Kraus operators `K_i: A → B`, one per ancilla basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dom: ObjectDim,
    cod: ObjectDim,
    ops: Vec<CMatrix>,
}

/// A linear map `f: A → B`, standing for the conjugation `ρ ↦ f ρ f†`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureMap {
    dom: ObjectDim,
    cod: ObjectDim,
    matrix: CMatrix,
}

impl CpMap {
    /// Validates shape, Hermiticity and positivity. Both tolerances scale
    /// with the largest entry once it exceeds 1.
    pub fn from_choi(dom: ObjectDim, cod: ObjectDim, choi: CMatrix, tol: f64) -> Result<Self> {
        check_dim(dom)?;
        check_dim(cod)?;
        let n = dom.get() * cod.get();
        if choi.shape() != (n, n) {
            return Err(Error::shape(format!(
                "Choi matrix for {dom}→{cod} must be {n}×{n}, found {}×{}",
                choi.nrows(),
                choi.ncols()
            )));
        }
        let scale = max_abs(&choi).max(1.0);
        let deviation = max_abs_diff(&choi, &choi.adjoint());
        if deviation > tol * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let (values, _) = hermitian_eigen(&choi);
        let min = values.last().copied().unwrap_or(0.0);
        if min < -tol * scale {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(CpMap { dom, cod, choi })
    }

    pub(crate) fn from_choi_unchecked(dom: ObjectDim, cod: ObjectDim, choi: CMatrix) -> Self {
        CpMap { dom, cod, choi }
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    fn index(&self, a: usize, b: usize) -> usize {
        self.dom.pair_index(self.cod, a, b)
    }

    /// `Φ(ρ) = Σ_{a,a'} ρ[a][a'] Φ(|a⟩⟨a'|)`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let (d, c) = (self.dom.get(), self.cod.get());
        if rho.shape() != (d, d) {
            return Err(Error::shape(format!(
                "input must be {d}×{d}, found {}×{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let mut out = CMatrix::zeros(c, c);
        for a in 0..d {
            for a2 in 0..d {
                let w = rho[(a, a2)];
                if w == ZERO {
                    continue;
                }
                for b in 0..c {
                    for b2 in 0..c {
                        out[(b, b2)] += w * self.choi[(self.index(a, b), self.index(a2, b2))];
                    }
                }
            }
        }
        Ok(out)
    }

    /// The Hilbert-Schmidt adjoint `B → A`, with Kraus operators `K_i†`.
    pub fn adjoint(&self) -> CpMap {
        let (d, c) = (self.dom.get(), self.cod.get());
        let mut choi = CMatrix::zeros(d * c, d * c);
        for a in 0..d {
            for b in 0..c {
                for a2 in 0..d {
                    for b2 in 0..c {
                        choi[(b * d + a, b2 * d + a2)] =
                            self.choi[(self.index(a2, b2), self.index(a, b))];
                    }
                }
            }
        }
        CpMap::from_choi_unchecked(self.cod, self.dom, choi)
    }

    /// Number of Choi eigenvalues above `tol · λ_max`; zero when `λ_max`
    /// itself does not exceed `tol`.
    pub fn choi_rank(&self, tol: f64) -> usize {
        let (values, _) = hermitian_eigen(&self.choi);
        numerical_rank(&values, tol)
    }

    /// Minimal Kraus decomposition from the Choi eigendecomposition:
    /// `K_i[b][a] = √λ_i · v_i[(a, b)]` for each retained eigenpair.
    pub fn kraus(&self, tol: f64) -> Result<KrausSet> {
        let (values, vectors) = hermitian_eigen(&self.choi);
        let scale = max_abs(&self.choi).max(1.0);
        if let Some(&min) = values.last() {
            if min < -tol * scale {
                return Err(Error::NotPositive {
                    min_eigenvalue: min,
                });
            }
        }
        let rank = numerical_rank(&values, tol);
        let (d, c) = (self.dom.get(), self.cod.get());
        let ops = (0..rank)
            .map(|i| {
                let s = values[i].sqrt();
                CMatrix::from_fn(c, d, |b, a| vectors[(self.index(a, b), i)] * s)
            })
            .collect();
        Ok(KrausSet {
            dom: self.dom,
            cod: self.cod,
            ops,
        })
    }

    /// Pure and copure coincide: Choi rank at most one.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.choi_rank(tol) <= 1
    }

    /// A simple mixing map: the pure part `A ⊗ C → B` of a minimal dilation
    /// is square and invertible.
    pub fn is_mixing(&self, tol: f64) -> Result<bool> {
        let k = self.kraus(tol)?;
        if k.ops.is_empty() || self.cod.get() != self.dom.get() * k.ancilla() {
            return Ok(false);
        }
        Ok(has_full_column_rank(&k.pure_part(), tol))
    }

    /// A simple discarding map: the adjoint is a simple mixing map, i.e. the
    /// stacked dilation `A → B ⊗ C` is square and invertible.
    pub fn is_discarding(&self, tol: f64) -> Result<bool> {
        self.adjoint().is_mixing(tol)
    }

    pub fn classify(&self, tol: f64) -> Result<ClassFlags> {
        let pure = self.is_pure(tol);
        Ok(ClassFlags::new(
            pure,
            pure,
            self.is_mixing(tol)?,
            self.is_discarding(tol)?,
        ))
    }
}

fn numerical_rank(values: &[f64], tol: f64) -> usize {
    let max = values.first().copied().unwrap_or(0.0);
    if max <= tol {
        return 0;
    }
    values.iter().filter(|&&v| v > tol * max).count()
}

impl KrausSet {
    pub fn new(dom: ObjectDim, cod: ObjectDim, ops: Vec<CMatrix>) -> Result<Self> {
        check_dim(dom)?;
        check_dim(cod)?;
        if let Some(op) = ops.iter().find(|op| op.shape() != (cod.get(), dom.get())) {
            return Err(Error::shape(format!(
                "Kraus operator must be {}×{}, found {}×{}",
                cod,
                dom,
                op.nrows(),
                op.ncols()
            )));
        }
        Ok(KrausSet { dom, cod, ops })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dom(&self) -> ObjectDim {
        self.dom
    }

    pub fn cod(&self) -> ObjectDim {
        self.cod
    }

    pub fn ancilla(&self) -> usize {
        self.ops.len()
    }

    /// `Σ_i vec(K_i) vec(K_i)†` with `vec(K)[(a, b)] = K[b][a]`.
    pub fn choi(&self) -> CpMap {
        let matrix = self.vectorised();
        let choi = &matrix * matrix.adjoint();
        CpMap::from_choi_unchecked(self.dom, self.cod, choi)
    }

    /// Columns `vec(K_i)`, an `(A·B) × n` matrix.
    pub fn vectorised(&self) -> CMatrix {
        let (d, c) = (self.dom.get(), self.cod.get());
        let mut m = CMatrix::zeros(d * c, self.ops.len());
        for (i, k) in self.ops.iter().enumerate() {
            for a in 0..d {
                for b in 0..c {
                    m[(a * c + b, i)] = k[(b, a)];
                }
            }
        }
        m
    }

    /// `P = Σ_i K_i (id_A ⊗ ⟨i|)`, a `B × (A·n)` matrix.
    pub fn pure_part(&self) -> CMatrix {
        let (d, c, n) = (self.dom.get(), self.cod.get(), self.ops.len());
        let mut p = CMatrix::zeros(c, d * n);
        for (i, k) in self.ops.iter().enumerate() {
            for a in 0..d {
                for b in 0..c {
                    p[(b, a * n + i)] = k[(b, a)];
                }
            }
        }
        p
    }

    /// `V = Σ_i (K_i ⊗ |i⟩)`, a `(B·n) × A` matrix.
    pub fn stacked(&self) -> CMatrix {
        let (d, c, n) = (self.dom.get(), self.cod.get(), self.ops.len());
        let mut v = CMatrix::zeros(c * n, d);
        for (i, k) in self.ops.iter().enumerate() {
            for a in 0..d {
                for b in 0..c {
                    v[(b * n + i, a)] = k[(b, a)];
                }
            }
        }
        v
    }

    /// Inverse of [`KrausSet::pure_part`].
    pub fn from_pure_part(dom: ObjectDim, ancilla: usize, p: &CMatrix) -> Result<Self> {
        let (d, n) = (dom.get(), ancilla);
        if p.ncols() != d * n {
            return Err(Error::shape("pure part width must be dom·ancilla"));
        }
        let cod = ObjectDim(p.nrows());
        let ops = (0..n)
            .map(|i| CMatrix::from_fn(cod.get(), d, |b, a| p[(b, a * n + i)]))
            .collect();
        KrausSet::new(dom, cod, ops)
    }

    /// `Σ_i K_i ρ K_i†`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let c = self.cod.get();
        self.ops
            .iter()
            .fold(CMatrix::zeros(c, c), |acc, k| acc + k * rho * k.adjoint())
    }
}

impl PureMap {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dom = ObjectDim(matrix.ncols());
        let cod = ObjectDim(matrix.nrows());
        check_dim(dom)?;
        check_dim(cod)?;
        Ok(PureMap { dom, cod, matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dom(&self) -> ObjectDim {
        self.dom
    }

    pub fn cod(&self) -> ObjectDim {
        self.cod
    }

    /// The image under the canonical functor into completely positive maps.
    pub fn channel(&self) -> CpMap {
        KrausSet {
            dom: self.dom,
            cod: self.cod,
            ops: vec![self.matrix.clone()],
        }
        .choi()
    }

    pub fn compose(&self, first: &PureMap) -> Result<PureMap> {
        if first.cod != self.dom {
            return Err(Error::ObjectMismatch {
                expected: self.dom.get(),
                found: first.cod.get(),
            });
        }
        PureMap::new(&self.matrix * &first.matrix)
    }
}

impl Process for CpMap {
    const THEORY: Theory = Theory::Quant;

    fn dom(&self) -> ObjectDim {
        self.dom
    }

    fn cod(&self) -> ObjectDim {
        self.cod
    }

    /// Choi matrix `|Ω⟩⟨Ω|` with `|Ω⟩ = Σ_a |a⟩|a⟩`.
    fn identity(a: ObjectDim) -> Result<Self> {
        PureMap::new(CMatrix::identity(a.get(), a.get())).map(|f| f.channel())
    }

    fn swap(a: ObjectDim, b: ObjectDim) -> Result<Self> {
        check_dim(a)?;
        check_dim(b)?;
        let n = a.get() * b.get();
        let mut s = CMatrix::zeros(n, n);
        for i in 0..a.get() {
            for j in 0..b.get() {
                s[(b.pair_index(a, j, i), a.pair_index(b, i, j))] = ONE;
            }
        }
        PureMap::new(s).map(|f| f.channel())
    }

    /// Link product of Choi matrices.
    fn compose(&self, first: &Self) -> Result<Self> {
        check_composable(self, first)?;
        let (a_dim, b_dim, c_dim) = (first.dom.get(), first.cod.get(), self.cod.get());
        let mut choi = CMatrix::zeros(a_dim * c_dim, a_dim * c_dim);
        for a in 0..a_dim {
            for a2 in 0..a_dim {
                for b in 0..b_dim {
                    for b2 in 0..b_dim {
                        let w = first.choi[(a * b_dim + b, a2 * b_dim + b2)];
                        if w == ZERO {
                            continue;
                        }
                        for c in 0..c_dim {
                            for c2 in 0..c_dim {
                                choi[(a * c_dim + c, a2 * c_dim + c2)] +=
                                    w * self.choi[(b * c_dim + c, b2 * c_dim + c2)];
                            }
                        }
                    }
                }
            }
        }
        Ok(CpMap::from_choi_unchecked(first.dom, self.cod, choi))
    }

    fn tensor(&self, other: &Self) -> Self {
        let (a1, b1, a2, b2) = (
            self.dom.get(),
            self.cod.get(),
            other.dom.get(),
            other.cod.get(),
        );
        let dom = self.dom.tensor(other.dom);
        let cod = self.cod.tensor(other.cod);
        let joint =
            |x1: usize, x2: usize, y1: usize, y2: usize| (x1 * a2 + x2) * (b1 * b2) + y1 * b2 + y2;
        let n = dom.get() * cod.get();
        let mut choi = CMatrix::zeros(n, n);
        for x1 in 0..a1 {
            for y1 in 0..b1 {
                for x1p in 0..a1 {
                    for y1p in 0..b1 {
                        let w = self.choi[(x1 * b1 + y1, x1p * b1 + y1p)];
                        if w == ZERO {
                            continue;
                        }
                        for x2 in 0..a2 {
                            for y2 in 0..b2 {
                                for x2p in 0..a2 {
                                    for y2p in 0..b2 {
                                        let v = other.choi[(x2 * b2 + y2, x2p * b2 + y2p)];
                                        choi[(joint(x1, x2, y1, y2), joint(x1p, x2p, y1p, y2p))] =
                                            w * v;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        CpMap::from_choi_unchecked(dom, cod, choi)
    }

    /// The state with density matrix the identity.
    fn mix(a: ObjectDim) -> Result<Self> {
        check_dim(a)?;
        Ok(CpMap::from_choi_unchecked(
            ObjectDim::UNIT,
            a,
            CMatrix::identity(a.get(), a.get()),
        ))
    }

    /// The trace.
    fn discard(a: ObjectDim) -> Result<Self> {
        check_dim(a)?;
        Ok(CpMap::from_choi_unchecked(
            a,
            ObjectDim::UNIT,
            CMatrix::identity(a.get(), a.get()),
        ))
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_type(other) && max_abs_diff(&self.choi, &other.choi) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::introduce_mixed;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hadamard() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
    }

    fn trace_then_identity() -> CpMap {
        // Φ(ρ) = Tr(ρ)·I₂ has Choi matrix I₄.
        CpMap::from_choi(
            ObjectDim(2),
            ObjectDim(2),
            CMatrix::identity(4, 4),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn identity_channel_has_one_kraus_operator() {
        let id = CpMap::identity(ObjectDim(2)).unwrap();
        let mut omega = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            omega[(i, j)] = ONE;
        }
        assert_eq!(id.choi(), &omega);
        let k = id.kraus(DEFAULT_TOL).unwrap();
        assert_eq!(k.ancilla(), 1);
        assert!(max_abs_diff(&k.ops()[0], &CMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn trace_then_identity_has_four_kraus_operators() {
        // Choi from the definition: Φ(|a⟩⟨a'|) = δ(a, a')·I₂.
        let mut choi = CMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                choi[(a * 2 + b, a * 2 + b)] = ONE;
            }
        }
        assert_eq!(&choi, trace_then_identity().choi());
        let k = trace_then_identity().kraus(DEFAULT_TOL).unwrap();
        assert_eq!(k.ancilla(), 4);
        assert!(max_abs_diff(k.choi().choi(), &choi) < 1e-12);
        // Each operator is a rank-one |k⟩⟨l| up to the eigenbasis choice.
        for op in k.ops() {
            assert_eq!(
                linalg::singular_values(op)
                    .iter()
                    .filter(|&&s| s > 1e-9)
                    .count(),
                1
            );
        }
    }

    #[test]
    fn rejects_non_positive_and_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(1, 1)] = c(-1.0, 0.0);
        assert!(matches!(
            CpMap::from_choi(ObjectDim(1), ObjectDim(2), m, DEFAULT_TOL),
            Err(Error::NotPositive { .. })
        ));
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            CpMap::from_choi(ObjectDim(1), ObjectDim(2), m, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
        assert!(CpMap::identity(ObjectDim(0)).is_err());
    }

    #[test]
    fn conjugation_by_a_unitary() {
        let u = PureMap::new(hadamard()).unwrap();
        let rho =
            CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let out = u.channel().apply(&rho).unwrap();
        let expected = hadamard() * &rho * hadamard().adjoint();
        assert!(max_abs_diff(&out, &expected) < 1e-12);
        let id = PureMap::new(CMatrix::identity(2, 2)).unwrap();
        assert!(id
            .channel()
            .approx_eq(&CpMap::identity(ObjectDim(2)).unwrap(), 1e-15));
    }

    #[test]
    fn classify_unitary_is_everything() {
        let flags = PureMap::new(hadamard())
            .unwrap()
            .channel()
            .classify(DEFAULT_TOL)
            .unwrap();
        assert_eq!(flags, ClassFlags::new(true, true, true, true));
    }

    #[test]
    fn classify_simple_mixing_map() {
        for c_dim in 2..4 {
            let m: CpMap = introduce_mixed(ObjectDim(2), ObjectDim(c_dim)).unwrap();
            let flags = m.classify(DEFAULT_TOL).unwrap();
            assert!(flags.is_mixing());
            assert!(!flags.is_pure());
            assert!(!flags.copure);
            assert!(!flags.discarding);
            // Its adjoint discards.
            assert!(m.adjoint().is_discarding(DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn classify_trace_then_identity() {
        let flags = trace_then_identity().classify(DEFAULT_TOL).unwrap();
        assert_eq!(flags, ClassFlags::new(false, false, false, false));
    }

    #[test]
    fn mix_and_discard_shapes() {
        let mix = CpMap::mix(ObjectDim(2)).unwrap();
        assert_eq!(mix.choi(), &CMatrix::identity(2, 2));
        assert_eq!(mix.dom(), ObjectDim::UNIT);
        let rho = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.25, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.75, 0.0)],
        );
        let tr = CpMap::discard(ObjectDim(2)).unwrap().apply(&rho).unwrap();
        assert!((tr[(0, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn swap_is_an_involution() {
        let s = CpMap::swap(ObjectDim(2), ObjectDim(3)).unwrap();
        let back = CpMap::swap(ObjectDim(3), ObjectDim(2)).unwrap();
        assert!(back
            .compose(&s)
            .unwrap()
            .approx_eq(&CpMap::identity(ObjectDim(6)).unwrap(), 1e-12));
        let s1 = CpMap::swap(ObjectDim(1), ObjectDim(3)).unwrap();
        assert!(s1.approx_eq(&CpMap::identity(ObjectDim(3)).unwrap(), 1e-15));
    }

    #[test]
    fn choi_tolerance_semantics() {
        let id = CpMap::identity(ObjectDim(2)).unwrap();
        let mut nudged = id.choi().clone();
        nudged[(0, 0)] += c(1e-12, 0.0);
        let nudged = CpMap::from_choi(ObjectDim(2), ObjectDim(2), nudged, DEFAULT_TOL).unwrap();
        assert!(id.approx_eq(&nudged, 1e-9));
        assert!(!id.approx_eq(&nudged, 1e-13));
    }

    #[test]
    fn zero_map_has_rank_zero_and_is_pure() {
        let zero = CpMap::from_choi(
            ObjectDim(2),
            ObjectDim(2),
            CMatrix::zeros(4, 4),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(zero.choi_rank(DEFAULT_TOL), 0);
        let flags = zero.classify(DEFAULT_TOL).unwrap();
        assert!(flags.is_pure() && !flags.is_mixing() && !flags.discarding);
    }
}
