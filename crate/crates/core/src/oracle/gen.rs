//! Seeded random morphisms and commuting squares.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frel::Relation;
use crate::fset::FinFunction;
use crate::fstoch::StochMatrix;
use crate::morphism::Morphism;
use crate::object::ObjectDim;
use crate::quant::{CMatrix, CpMap, KrausSet, PureMap};
use crate::theory::{LiftingSquare, Process, Theory};

use super::search::{Enumerable, Masks, Problem};

pub type OracleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> OracleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(rng: &mut OracleRng, zero_chance: f64) -> BigRational {
    if rng.random_bool(zero_chance) {
        return BigRational::zero();
    }
    BigRational::new(
        BigInt::from(rng.random_range(1..=9u32)),
        BigInt::from(rng.random_range(1..=9u32)),
    )
}

/// Nonnegative rational entries with small numerators and denominators,
/// about a third of them zero.
pub fn random_stoch(rng: &mut OracleRng, dom: usize, cod: usize) -> StochMatrix {
    let entries = (0..dom * cod).map(|_| random_rational(rng, 0.3)).collect();
    StochMatrix::new(ObjectDim(dom), ObjectDim(cod), entries).expect("nonnegative entries")
}

fn positive(rng: &mut OracleRng) -> BigRational {
    random_rational(rng, 0.0)
}

/// A random mixing matrix `dom → cod`: every row has exactly one nonzero
/// entry and every column at least one. Needs `dom ≤ cod`, and `cod = 0`
/// only when `dom = 0`.
pub fn random_mixing_stoch(rng: &mut OracleRng, dom: usize, cod: usize) -> Result<StochMatrix> {
    if dom > cod || (dom == 0 && cod > 0) {
        return Err(Error::shape(format!("no mixing matrix {dom}→{cod}")));
    }
    let mut source: Vec<usize> = (0..dom).collect();
    source.extend((dom..cod).map(|_| rng.random_range(0..dom)));
    source.shuffle(rng);
    let mut m = StochMatrix::zeros(ObjectDim(dom), ObjectDim(cod));
    for (row, &col) in source.iter().enumerate() {
        m.set(row, col, positive(rng));
    }
    Ok(m)
}

/// A random pure matrix: each column has at most one nonzero entry.
pub fn random_pure_stoch(rng: &mut OracleRng, dom: usize, cod: usize) -> StochMatrix {
    let mut m = StochMatrix::zeros(ObjectDim(dom), ObjectDim(cod));
    for col in 0..dom {
        if cod > 0 && rng.random_bool(0.85) {
            m.set(rng.random_range(0..cod), col, positive(rng));
        }
    }
    m
}

pub fn random_relation(rng: &mut OracleRng, dom: usize, cod: usize) -> Relation {
    let adj = (0..dom * cod).map(|_| rng.random_bool(0.5)).collect();
    Relation::new(ObjectDim(dom), ObjectDim(cod), adj).expect("right number of cells")
}

pub fn random_function(rng: &mut OracleRng, dom: usize, cod: usize) -> Result<FinFunction> {
    if cod == 0 && dom > 0 {
        return Err(Error::shape(format!("no function {dom}→0")));
    }
    let table = (0..dom).map(|_| rng.random_range(0..cod)).collect();
    FinFunction::new(ObjectDim(cod), table)
}

fn gaussianish(rng: &mut OracleRng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_matrix(rng: &mut OracleRng, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussianish(rng))
}

pub fn random_pure_map(rng: &mut OracleRng, dom: usize, cod: usize) -> Result<PureMap> {
    PureMap::new(random_matrix(rng, cod, dom))
}

/// A CP map with `kraus` random Kraus operators.
pub fn random_cp_map(rng: &mut OracleRng, dom: usize, cod: usize, kraus: usize) -> Result<CpMap> {
    let ops = (0..kraus).map(|_| random_matrix(rng, cod, dom)).collect();
    Ok(KrausSet::new(ObjectDim(dom), ObjectDim(cod), ops)?.choi())
}

/// A positive semidefinite `dim × dim` matrix of trace one.
pub fn random_density(rng: &mut OracleRng, dim: usize) -> CMatrix {
    let g = random_matrix(rng, dim, dim);
    let rho = &g * g.adjoint();
    let trace = rho.trace();
    rho / trace
}

/// A `rows × cols` matrix with orthonormal columns, `cols ≤ rows`.
pub fn random_isometry(rng: &mut OracleRng, rows: usize, cols: usize) -> Result<CMatrix> {
    if cols > rows {
        return Err(Error::shape(format!(
            "no isometry from {cols} into {rows} dimensions"
        )));
    }
    let q = random_matrix(rng, rows, rows).qr().q();
    Ok(q.columns(0, cols).into_owned())
}

/// A seeded random morphism `dom → cod` of the given theory. Quantum maps
/// have between one and `dom·cod` Kraus operators.
pub fn gen_morphism(theory: Theory, dom: usize, cod: usize, seed: u64) -> Result<Morphism> {
    let mut r = rng(seed);
    Ok(match theory {
        Theory::FStoch => Morphism::FStoch(random_stoch(&mut r, dom, cod)),
        Theory::FRel => Morphism::FRel(random_relation(&mut r, dom, cod)),
        Theory::FSet => Morphism::FSet(random_function(&mut r, dom, cod)?),
        Theory::Quant => {
            let kraus = r.random_range(1..=(dom * cod).max(1));
            Morphism::Quant(random_cp_map(&mut r, dom, cod, kraus)?)
        }
    })
}

/// A seeded commuting square with legs of size at most `max_dim`.
///
/// * `fstoch`: mixing left leg and pure right leg, the shape the fill-in
///   construction applies to. The bottom is built from the top by splitting
///   each column of `right ∘ top` over the fibre of the left leg with random
///   weights.
/// * `frel`, `fset`: random left leg, right leg and top; the bottom is drawn
///   from all solutions of `bottom ∘ left = right ∘ top`, retrying with a new
///   top when there are none.
pub fn gen_commuting_square(
    theory: Theory,
    max_dim: usize,
    seed: u64,
) -> Result<LiftingSquare<Morphism>> {
    if max_dim == 0 {
        return Err(Error::InvalidEntry("max_dim must be at least 1".into()));
    }
    let mut r = rng(seed);
    match theory {
        Theory::FStoch => Ok(stoch_square(&mut r, max_dim)?.map(Morphism::FStoch)),
        Theory::FRel => Ok(finite_square(&mut r, max_dim, random_relation)?.map(Morphism::FRel)),
        Theory::FSet => Ok(finite_square(&mut r, max_dim, |r, d, c| {
            random_function(r, d, c).expect("nonempty codomain")
        })?
        .map(Morphism::FSet)),
        Theory::Quant => Err(Error::Unsupported {
            theory,
            what: "random commuting squares".into(),
        }),
    }
}

fn stoch_square(r: &mut OracleRng, max_dim: usize) -> Result<LiftingSquare<StochMatrix>> {
    let x = r.random_range(1..=max_dim);
    let y = r.random_range(x..=max_dim);
    let a = r.random_range(1..=max_dim);
    let b = r.random_range(1..=max_dim);
    let left = random_mixing_stoch(r, x, y)?;
    let right = random_pure_stoch(r, a, b);
    let top = random_stoch(r, x, a);
    let target = right.compose(&top)?;

    // Each target column x is shared among the fibre ys of the left leg.
    let mut bottom = StochMatrix::zeros(ObjectDim(y), ObjectDim(b));
    for xi in 0..x {
        let fibre: Vec<usize> = (0..y).filter(|&yi| !left.get(yi, xi).is_zero()).collect();
        let weights: Vec<BigRational> = fibre.iter().map(|_| positive(r)).collect();
        let total: BigRational = weights.iter().sum();
        for (&yi, w) in fibre.iter().zip(&weights) {
            let scale = w / &total / left.get(yi, xi);
            for z in 0..b {
                bottom.set(z, yi, target.get(z, xi) * &scale);
            }
        }
    }
    let sq = LiftingSquare::new(left, right, top, bottom)?;
    debug_assert!(sq.commutes(0.0)?);
    Ok(sq)
}

fn finite_square<M: Enumerable>(
    r: &mut OracleRng,
    max_dim: usize,
    mut random: impl FnMut(&mut OracleRng, usize, usize) -> M,
) -> Result<LiftingSquare<M>> {
    let x = r.random_range(1..=max_dim);
    let y = r.random_range(1..=max_dim);
    let a = r.random_range(1..=max_dim);
    let b = r.random_range(1..=max_dim);
    let left = random(r, x, y);
    let right = random(r, a, b);
    let (lm, rm) = (left.to_masks(), right.to_masks());
    M::guard(y, b)?;
    for _ in 0..64 {
        let top = random(r, x, a);
        let target = rm.after(&top.to_masks());
        let mut bottoms: Vec<Vec<u32>> = Vec::new();
        Problem {
            left: &lm,
            top: &target,
            lower: None,
            functional: M::FUNCTIONAL,
        }
        .for_each::<()>(|cols| {
            bottoms.push(cols.to_vec());
            std::ops::ControlFlow::Continue(())
        });
        if bottoms.is_empty() {
            continue;
        }
        let cols = bottoms.swap_remove(r.random_range(0..bottoms.len()));
        let bottom = M::from_masks(&Masks {
            dom: y,
            cod: b,
            cols,
        });
        return LiftingSquare::new(left, right, top, bottom);
    }
    // Fall back to a square through a random diagonal.
    let h = random(r, y, a);
    let top = h.compose(&left)?;
    let bottom = right.compose(&h)?;
    LiftingSquare::new(left, right, top, bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quant::linalg::max_abs_diff;

    #[test]
    fn same_seed_same_output() {
        for theory in Theory::ALL {
            let a = gen_morphism(theory, 2, 3, 11).unwrap();
            let b = gen_morphism(theory, 2, 3, 11).unwrap();
            assert_eq!(a, b);
            if theory != Theory::Quant {
                assert_eq!(
                    gen_commuting_square(theory, 3, 5).unwrap(),
                    gen_commuting_square(theory, 3, 5).unwrap()
                );
            }
        }
    }

    #[test]
    fn generated_squares_commute() {
        for theory in [Theory::FStoch, Theory::FRel, Theory::FSet] {
            for seed in 0..40 {
                let sq = gen_commuting_square(theory, 3, seed).unwrap();
                assert!(sq.commutes(0.0).unwrap(), "{theory} seed {seed}");
            }
        }
        for seed in 0..40 {
            let sq = gen_commuting_square(Theory::FStoch, 4, seed).unwrap();
            let sq = crate::morphism::typed_square::<StochMatrix>(sq).unwrap();
            assert!(sq.left.is_mixing() && sq.right.is_pure());
        }
    }

    #[test]
    fn stochastic_entries_are_nonnegative() {
        let mut r = rng(3);
        for _ in 0..1000 {
            let m = random_stoch(&mut r, 2, 3);
            assert!(m.entries().iter().all(|q| *q >= BigRational::zero()));
        }
    }

    #[test]
    fn special_shapes() {
        let mut r = rng(9);
        for _ in 0..50 {
            assert!(random_mixing_stoch(&mut r, 2, 4).unwrap().is_mixing());
            assert!(random_pure_stoch(&mut r, 3, 2).is_pure());
        }
        assert!(random_mixing_stoch(&mut r, 3, 2).is_err());
        assert!(random_function(&mut r, 1, 0).is_err());

        let v = random_isometry(&mut r, 4, 2).unwrap();
        assert!(max_abs_diff(&(v.adjoint() * &v), &CMatrix::identity(2, 2)) < 1e-12);
        let rho = random_density(&mut r, 3);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(&rho, &rho.adjoint()) < 1e-12);
    }
}
