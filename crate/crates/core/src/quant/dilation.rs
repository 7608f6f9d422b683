//! Stinespring dilations: purification, copurification, minimality and the
//! coisometry relating two dilations of the same map.

use num_complex::Complex64;

use super::linalg::{has_full_column_rank, max_abs, max_abs_diff, orthonormal_complement, CMatrix};
use super::{CpMap, KrausSet, PureMap};
use crate::error::{Error, Result};
use crate::object::ObjectDim;
use crate::theory::{discard_ancilla, introduce_mixed, FactorPair};

/// The minimal dilation: Kraus operators from the rank-truncated Choi
/// eigendecomposition.
pub fn minimal_dilation(c: &CpMap, tol: f64) -> Result<KrausSet> {
    c.kraus(tol)
}

/// A dilation is minimal iff its Kraus operators are linearly independent.
pub fn is_minimal(k: &KrausSet, tol: f64) -> bool {
    has_full_column_rank(&k.vectorised(), tol)
}

/// Minimal Kraus set, padded with a zero operator for the zero map so the
/// ancilla is a legal (nonzero-dimensional) system.
fn nonempty_minimal(c: &CpMap, tol: f64) -> Result<KrausSet> {
    let mut k = c.kraus(tol)?;
    if k.ops.is_empty() {
        k.ops.push(CMatrix::zeros(c.cod.get(), c.dom.get()));
    }
    Ok(k)
}

impl CpMap {
    /// `Φ = F(P) ∘ (id_A ⊗ mix(C))` with `P = Σ_i K_i (id ⊗ ⟨i|)` built from a
    /// minimal dilation.
    pub fn purify(&self, tol: f64) -> Result<FactorPair<CpMap>> {
        let k = nonempty_minimal(self, tol)?;
        let ancilla = ObjectDim(k.ancilla());
        Ok(FactorPair {
            left: introduce_mixed(self.dom, ancilla)?,
            right: PureMap::new(k.pure_part())?.channel(),
            ancilla,
        })
    }

    /// `Φ = (id_B ⊗ discard(C)) ∘ F(V)` with `V = Σ_i K_i ⊗ |i⟩`.
    pub fn copurify(&self, tol: f64) -> Result<FactorPair<CpMap>> {
        let k = nonempty_minimal(self, tol)?;
        let ancilla = ObjectDim(k.ancilla());
        Ok(FactorPair {
            left: PureMap::new(k.stacked())?.channel(),
            right: discard_ancilla(self.cod, ancilla)?,
            ancilla,
        })
    }
}

/// Coordinates of each operator of `k` in the orthogonal family `basis`
/// (vectorised minimal Kraus operators): row `i` holds the coefficients of
/// `K_i`. For two dilations of the same map this matrix is an isometry.
fn coefficients(k: &KrausSet, basis: &CMatrix) -> CMatrix {
    let vecs = k.vectorised();
    let r = basis.ncols();
    let mut u = CMatrix::zeros(k.ancilla(), r);
    for m in 0..r {
        let b = basis.column(m);
        let norm2 = b.norm_squared();
        for i in 0..k.ancilla() {
            u[(i, m)] = b.dotc(&vecs.column(i)) / Complex64::new(norm2, 0.0);
        }
    }
    u
}

/// Given dilations `p` (ancilla `C`) and `p2` (ancilla `C'`) of the same map
/// with `dim C ≤ dim C'`, returns a coisometry `j: C' → C` (a `dim C × dim C'`
/// matrix with `j j† = id`) such that `P₂ = P (id_A ⊗ j)` for the pure parts.
///
/// Both dilations are expressed through a common minimal one,
/// `K_i = Σ_m U_im K̃_m` and `K'_k = Σ_m U'_km K̃_m` with `U`, `U'`
/// isometries. The isometry `W = U' U† ⊕ (im U^⊥ → im U'^⊥)` satisfies
/// `W U = U'`, and `j = Wᵀ`.
pub fn extend_dilation(p: &KrausSet, p2: &KrausSet, tol: f64) -> Result<CMatrix> {
    if p.dom != p2.dom || p.cod != p2.cod {
        return Err(Error::shape("dilations act between different systems"));
    }
    let (choi, choi2) = (p.choi(), p2.choi());
    let scale = max_abs(choi.choi()).max(1.0);
    let deviation = max_abs_diff(choi.choi(), choi2.choi());
    if deviation > tol * scale {
        return Err(Error::DilationMismatch { deviation });
    }
    let (n1, n2) = (p.ancilla(), p2.ancilla());
    if n1 > n2 {
        return Err(Error::AncillaOrder {
            first: n1,
            second: n2,
        });
    }

    let basis = choi.kraus(tol)?.vectorised();
    let u = coefficients(p, &basis);
    let u2 = coefficients(p2, &basis);

    let q1 = orthonormal_complement(&u);
    let q2_full = orthonormal_complement(&u2);
    let q2 = q2_full.columns(0, q1.ncols()).into_owned();

    let w = &u2 * u.adjoint() + q2 * q1.adjoint();
    Ok(w.transpose())
}

/// `(‖j j† − id‖_max, ‖P (id_A ⊗ j) − P₂‖_max)`.
pub fn dilation_residual(p: &KrausSet, p2: &KrausSet, j: &CMatrix) -> (f64, f64) {
    let n1 = j.nrows();
    let coisometry = max_abs_diff(&(j * j.adjoint()), &CMatrix::identity(n1, n1));
    let lifted = p.pure_part() * CMatrix::identity(p.dom.get(), p.dom.get()).kronecker(j);
    (coisometry, max_abs_diff(&lifted, &p2.pure_part()))
}
