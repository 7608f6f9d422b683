//! Brute-force lifting checks for relations and functions.
//!
//! These are the reference against which the characterisations in
//! [`crate::frel`] and [`crate::fset`] are tested. Monoidal lifting
//! quantifies over every object; here the padding objects, the sizes of the
//! test states and effects, and the sizes of class samples are all bounded
//! by a [`BoundedLiftConfig`], so a `holds = true` verdict is only evidence,
//! while a `holds = false` verdict comes with a concrete counterexample.

mod galois;
mod gen;
pub mod search;

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frel::Relation;
use crate::fset::FinFunction;
use crate::morphism::{typed_square, Morphism};
use crate::object::ObjectDim;
use crate::theory::{LiftingSquare, Process, Theory};

pub use galois::{galois_laws, GaloisReport};
pub use gen::{
    gen_commuting_square, gen_morphism, random_cp_map, random_density, random_function,
    random_isometry, random_mixing_stoch, random_pure_map, random_pure_stoch, random_relation,
    random_stoch, rng, OracleRng,
};
pub use search::{Enumerable, Masks};

use search::{all_masks, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedLiftConfig {
    /// Largest padding object, and largest test state or effect.
    pub max_object: usize,
    /// Largest domain or codomain of morphisms in sampled classes.
    pub max_square: usize,
    pub seed: u64,
}

impl BoundedLiftConfig {
    pub fn new(max_object: usize, max_square: usize, seed: u64) -> Result<Self> {
        if max_object == 0 {
            return Err(Error::InvalidEntry("max_object must be at least 1".into()));
        }
        Ok(BoundedLiftConfig {
            max_object,
            max_square,
            seed,
        })
    }
}

impl Default for BoundedLiftConfig {
    fn default() -> Self {
        BoundedLiftConfig {
            max_object: 2,
            max_square: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftVerdict<M> {
    pub holds: bool,
    /// A commuting square with no fill-in, when `holds` is false.
    pub witness_square: Option<LiftingSquare<M>>,
    /// The fill-in found, when a single square was solved.
    pub fill_in: Option<M>,
}

impl<M> LiftVerdict<M> {
    fn holds() -> Self {
        LiftVerdict {
            holds: true,
            witness_square: None,
            fill_in: None,
        }
    }

    fn fails(witness: LiftingSquare<M>) -> Self {
        LiftVerdict {
            holds: false,
            witness_square: Some(witness),
            fill_in: None,
        }
    }

    pub fn map<N>(self, mut f: impl FnMut(M) -> N) -> LiftVerdict<N> {
        LiftVerdict {
            holds: self.holds,
            witness_square: self.witness_square.map(|sq| sq.map(&mut f)),
            fill_in: self.fill_in.map(f),
        }
    }
}

/// Searches every `h` for a fill-in of a commuting square, returning the
/// least one in enumeration order.
pub fn solve_square<M: Enumerable>(sq: &LiftingSquare<M>) -> Result<LiftVerdict<M>> {
    sq.ensure_commutes(0.0)?;
    M::guard(sq.left.cod().get(), sq.top.cod().get())?;
    let (left, top) = (sq.left.to_masks(), sq.top.to_masks());
    let (right, bottom) = (sq.right.to_masks(), sq.bottom.to_masks());
    let problem = Problem {
        left: &left,
        top: &top,
        lower: Some((&right, &bottom)),
        functional: M::FUNCTIONAL,
    };
    Ok(match problem.first() {
        Some(cols) => LiftVerdict {
            holds: true,
            witness_square: None,
            fill_in: Some(M::from_masks(&Masks {
                dom: left.cod,
                cod: top.cod,
                cols,
            })),
        },
        None => LiftVerdict::fails(sq.clone()),
    })
}

/// [`solve_square`] on an untyped square.
pub fn solve_square_dyn(sq: &LiftingSquare<Morphism>) -> Result<LiftVerdict<Morphism>> {
    match sq.left.theory() {
        Theory::FRel => {
            Ok(solve_square(&typed_square::<Relation>(sq.clone())?)?.map(Morphism::FRel))
        }
        Theory::FSet => {
            Ok(solve_square(&typed_square::<FinFunction>(sq.clone())?)?.map(Morphism::FSet))
        }
        t => Err(not_enumerable(t)),
    }
}

fn not_enumerable(theory: Theory) -> Error {
    Error::Unsupported {
        theory,
        what: "exhaustive lifting search (hom-sets are not finite)".into(),
    }
}

/// `f ⋔ g`: every commuting square with `f` on the left and `g` on the right
/// has a fill-in. Squares are visited top-major in enumeration order and the
/// first one without a fill-in is returned as the witness.
pub fn check_lift<M: Enumerable>(f: &M, g: &M) -> Result<LiftVerdict<M>> {
    let (x, y) = (f.dom().get(), f.cod().get());
    let (a, b) = (g.dom().get(), g.cod().get());
    M::guard(x, a)?;
    M::guard(y, b)?;
    M::guard(y, a)?;

    let (fm, gm) = (f.to_masks(), g.to_masks());
    let tops = all_masks(x, a, M::FUNCTIONAL);
    let witness = tops.par_iter().find_map_first(|top| {
        let target = gm.after(top);
        let bottoms = Problem {
            left: &fm,
            top: &target,
            lower: None,
            functional: M::FUNCTIONAL,
        };
        bottoms.for_each(|bottom_cols| {
            let bottom = Masks {
                dom: y,
                cod: b,
                cols: bottom_cols.to_vec(),
            };
            let fill = Problem {
                left: &fm,
                top,
                lower: Some((&gm, &bottom)),
                functional: M::FUNCTIONAL,
            };
            match fill.first() {
                Some(_) => ControlFlow::Continue(()),
                None => ControlFlow::Break((top.clone(), bottom)),
            }
        })
    });
    Ok(match witness {
        None => LiftVerdict::holds(),
        Some((top, bottom)) => LiftVerdict::fails(LiftingSquare {
            left: f.clone(),
            right: g.clone(),
            top: M::from_masks(&top),
            bottom: M::from_masks(&bottom),
        }),
    })
}

/// `f ⊘ g` up to padding: `f ⊗ id_p ⋔ g ⊗ id_q` for `1 ≤ p, q ≤ max_object`.
/// A necessary condition for monoidal lifting, not a decision procedure.
pub fn check_monoidal_lift<M: Enumerable>(
    f: &M,
    g: &M,
    cfg: &BoundedLiftConfig,
) -> Result<LiftVerdict<M>> {
    for p in 1..=cfg.max_object {
        let fp = f.tensor(&M::identity(ObjectDim(p))?);
        for q in 1..=cfg.max_object {
            let gq = g.tensor(&M::identity(ObjectDim(q))?);
            let verdict = check_lift(&fp, &gq)?;
            if !verdict.holds {
                return Ok(verdict);
            }
        }
    }
    Ok(LiftVerdict::holds())
}

/// Right lifting against the completely mixed states `mix(a)`,
/// `1 ≤ a ≤ max_object`. Fails for theories without mixed states.
pub fn pure_verdict<M: Enumerable>(g: &M, cfg: &BoundedLiftConfig) -> Result<LiftVerdict<M>> {
    for a in 1..=cfg.max_object {
        let verdict = check_monoidal_lift(&M::mix(ObjectDim(a))?, g, cfg)?;
        if !verdict.holds {
            return Ok(verdict);
        }
    }
    Ok(LiftVerdict::holds())
}

pub fn pure_by_oracle<M: Enumerable>(g: &M, cfg: &BoundedLiftConfig) -> Result<bool> {
    Ok(pure_verdict(g, cfg)?.holds)
}

/// Left lifting against the discarding effects `discard(e)`,
/// `1 ≤ e ≤ max_object`.
pub fn copure_verdict<M: Enumerable>(f: &M, cfg: &BoundedLiftConfig) -> Result<LiftVerdict<M>> {
    for e in 1..=cfg.max_object {
        let verdict = check_monoidal_lift(f, &M::discard(ObjectDim(e))?, cfg)?;
        if !verdict.holds {
            return Ok(verdict);
        }
    }
    Ok(LiftVerdict::holds())
}

pub fn copure_by_oracle<M: Enumerable>(f: &M, cfg: &BoundedLiftConfig) -> Result<bool> {
    Ok(copure_verdict(f, cfg)?.holds)
}

/// Every morphism `dom → cod`, in enumeration order.
pub fn hom_set<M: Enumerable>(dom: usize, cod: usize) -> Result<Vec<M>> {
    M::guard(dom, cod)?;
    Ok(all_masks(dom, cod, M::FUNCTIONAL)
        .iter()
        .map(M::from_masks)
        .collect())
}

/// Every morphism with domain and codomain at most `max`, hom-set by
/// hom-set.
pub fn all_morphisms_up_to<M: Enumerable>(max: usize) -> Result<Vec<M>> {
    let mut out = Vec::new();
    for dom in 0..=max {
        for cod in 0..=max {
            out.extend(hom_set(dom, cod)?);
        }
    }
    Ok(out)
}

/// The morphisms of size at most `cfg.max_square` the oracle judges pure.
pub fn bounded_pure_class<M: Enumerable>(cfg: &BoundedLiftConfig) -> Result<Vec<M>> {
    bounded_class(cfg, pure_by_oracle)
}

/// The morphisms of size at most `cfg.max_square` the oracle judges copure.
pub fn bounded_copure_class<M: Enumerable>(cfg: &BoundedLiftConfig) -> Result<Vec<M>> {
    bounded_class(cfg, copure_by_oracle)
}

fn bounded_class<M: Enumerable>(
    cfg: &BoundedLiftConfig,
    test: fn(&M, &BoundedLiftConfig) -> Result<bool>,
) -> Result<Vec<M>> {
    let candidates = all_morphisms_up_to::<M>(cfg.max_square)?;
    let keep = candidates
        .par_iter()
        .map(|m| test(m, cfg))
        .collect::<Result<Vec<bool>>>()?;
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect())
}

/// Left lifting against every member of `pure_class`.
pub fn mixing_against<M: Enumerable>(
    f: &M,
    pure_class: &[M],
    cfg: &BoundedLiftConfig,
) -> Result<LiftVerdict<M>> {
    for p in pure_class {
        let verdict = check_monoidal_lift(f, p, cfg)?;
        if !verdict.holds {
            return Ok(verdict);
        }
    }
    Ok(LiftVerdict::holds())
}

/// Right lifting against every member of `copure_class`.
pub fn discarding_against<M: Enumerable>(
    g: &M,
    copure_class: &[M],
    cfg: &BoundedLiftConfig,
) -> Result<LiftVerdict<M>> {
    for c in copure_class {
        let verdict = check_monoidal_lift(c, g, cfg)?;
        if !verdict.holds {
            return Ok(verdict);
        }
    }
    Ok(LiftVerdict::holds())
}

pub fn mixing_by_oracle<M: Enumerable>(f: &M, cfg: &BoundedLiftConfig) -> Result<bool> {
    Ok(mixing_against(f, &bounded_pure_class(cfg)?, cfg)?.holds)
}

pub fn discarding_by_oracle<M: Enumerable>(g: &M, cfg: &BoundedLiftConfig) -> Result<bool> {
    Ok(discarding_against(g, &bounded_copure_class(cfg)?, cfg)?.holds)
}

/// For a non-injective `i'`, the square `(i', s, i, id)` built from its
/// injection/surjection factorisation `i' = s ∘ i`; it has no fill-in.
pub fn noninjection_square(f: &FinFunction) -> Result<LiftingSquare<FinFunction>> {
    if f.is_injective() {
        return Err(Error::LegClass("function is injective".into()));
    }
    let (i, s) = f.inj_surj_factorisation();
    LiftingSquare::new(f.clone(), s, i, FinFunction::identity(f.cod())?)
}

/// For a non-surjective `s'`, the square `(i, s', id, s)` built from its
/// injection/surjection factorisation `s' = s ∘ i`; it has no fill-in.
pub fn nonsurjection_square(f: &FinFunction) -> Result<LiftingSquare<FinFunction>> {
    if f.is_surjective() {
        return Err(Error::LegClass("function is surjective".into()));
    }
    let (i, s) = f.inj_surj_factorisation();
    LiftingSquare::new(i, f.clone(), FinFunction::identity(f.dom())?, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frel::all_relations_up_to;
    use crate::fset::all_functions;

    fn cfg(max_object: usize) -> BoundedLiftConfig {
        BoundedLiftConfig::new(max_object, 2, 7).unwrap()
    }

    fn rel(dom: usize, cod: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(dom, cod, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn identity_right_leg_gives_the_bottom() {
        let f = rel(2, 3, &[(0, 0), (1, 2)]);
        let bottom = rel(3, 2, &[(0, 1), (1, 1), (2, 0)]);
        let top = bottom.compose(&f).unwrap();
        let sq = LiftingSquare::new(
            f,
            Relation::identity(ObjectDim(2)).unwrap(),
            top,
            bottom.clone(),
        )
        .unwrap();
        let v = solve_square(&sq).unwrap();
        assert!(v.holds);
        assert_eq!(v.fill_in, Some(bottom));
    }

    #[test]
    fn solve_square_returns_the_least_fill_in() {
        // left = mix(2); every column of h must be nonempty and together
        // they must cover {0, 1}.
        let left = rel(1, 2, &[(0, 0), (0, 1)]);
        let right = Relation::discard(ObjectDim(2)).unwrap();
        let top = Relation::total(ObjectDim(1), ObjectDim(2));
        let bottom = Relation::total(ObjectDim(2), ObjectDim(1));
        let sq = LiftingSquare::new(left, right, top, bottom).unwrap();
        let h = solve_square(&sq).unwrap().fill_in.unwrap();
        // Column 0 = {0} is the least nonempty choice; column 1 must then
        // supply 1, and {1} precedes {0, 1}.
        assert_eq!(h, Relation::identity(ObjectDim(2)).unwrap());
        assert!(sq.is_fill_in(&h, 0.0).unwrap());
    }

    #[test]
    fn solve_square_rejects_bad_input() {
        let id = Relation::identity(ObjectDim(2)).unwrap();
        let flip = rel(2, 2, &[(0, 1), (1, 0)]);
        let sq = LiftingSquare::new(id.clone(), id.clone(), flip, id.clone()).unwrap();
        assert_eq!(solve_square(&sq), Err(Error::NotCommuting));

        let big = Relation::identity(ObjectDim(5)).unwrap();
        let sq = LiftingSquare::new(big.clone(), big.clone(), big.clone(), big).unwrap();
        assert!(matches!(solve_square(&sq), Err(Error::SizeGuard(_))));

        let q = Morphism::identity(ObjectDim(1), Theory::Quant).unwrap();
        let sq = LiftingSquare::new(q.clone(), q.clone(), q.clone(), q).unwrap();
        assert!(matches!(
            solve_square_dyn(&sq),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn example_two_squares_have_no_fill_in() {
        let collapse = FinFunction::from_table(1, &[0, 0]).unwrap();
        let sq = noninjection_square(&collapse).unwrap();
        assert!(sq.commutes(0.0).unwrap());
        let v = solve_square(&sq).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness_square, Some(sq));

        let point = FinFunction::from_table(2, &[1]).unwrap();
        let sq = nonsurjection_square(&point).unwrap();
        assert!(sq.commutes(0.0).unwrap());
        assert!(!solve_square(&sq).unwrap().holds);

        assert!(noninjection_square(&point).is_err());
        assert!(nonsurjection_square(&collapse).is_err());
    }

    #[test]
    fn injections_lift_against_surjections() {
        for (x, y) in [(1, 2), (2, 3), (0, 2)] {
            for i in all_functions(x, y).filter(FinFunction::is_injective) {
                for s in all_functions(3, 2).filter(FinFunction::is_surjective) {
                    assert!(check_lift(&i, &s).unwrap().holds, "{i:?} vs {s:?}");
                }
            }
        }
    }

    #[test]
    fn mix_against_partial_functions_and_others() {
        let mix2 = Relation::mix(ObjectDim(2)).unwrap();
        let partial = rel(2, 2, &[(0, 1)]);
        assert!(check_monoidal_lift(&mix2, &partial, &cfg(2)).unwrap().holds);

        let split = rel(2, 2, &[(0, 0), (0, 1)]);
        let v = check_monoidal_lift(&mix2, &split, &cfg(2)).unwrap();
        assert!(!v.holds);
        let witness = v.witness_square.unwrap();
        assert!(witness.commutes(0.0).unwrap());
        assert!(!solve_square(&witness).unwrap().holds);
    }

    #[test]
    fn identity_is_pure_and_copure() {
        let id = Relation::identity(ObjectDim(2)).unwrap();
        assert!(pure_by_oracle(&id, &cfg(2)).unwrap());
        assert!(copure_by_oracle(&id, &cfg(2)).unwrap());
        assert!(matches!(
            pure_by_oracle(&FinFunction::identity(ObjectDim(2)).unwrap(), &cfg(1)),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn oracle_matches_the_classifier_on_small_relations() {
        // With max_object = 1 the only test state is the identity on the
        // point, so every relation passes.
        for r in all_relations_up_to(2) {
            assert!(pure_by_oracle(&r, &cfg(1)).unwrap());
            assert_eq!(pure_by_oracle(&r, &cfg(2)).unwrap(), r.is_pure(), "{r:?}");
            assert_eq!(
                copure_by_oracle(&r, &cfg(2)).unwrap(),
                r.is_copure(),
                "{r:?}"
            );
        }
    }

    #[test]
    fn mixing_and_discarding_oracles() {
        let c = BoundedLiftConfig::new(2, 2, 0).unwrap();
        let pure = bounded_pure_class::<Relation>(&c).unwrap();
        let copure = bounded_copure_class::<Relation>(&c).unwrap();
        for r in all_relations_up_to(2) {
            assert_eq!(
                mixing_against(&r, &pure, &c).unwrap().holds,
                r.is_mixing(),
                "{r:?}"
            );
            assert_eq!(
                discarding_against(&r, &copure, &c).unwrap().holds,
                r.is_discarding(),
                "{r:?}"
            );
        }
    }

    #[test]
    fn larger_bounds_keep_counterexamples() {
        for r in all_relations_up_to(2) {
            let small = pure_by_oracle(&r, &cfg(1)).unwrap();
            let large = pure_by_oracle(&r, &cfg(2)).unwrap();
            assert!(small || !large, "{r:?}");
        }
    }
}
