//! Order reversal, unit and triple laws for the bounded lifting complements.
//!
//! On a finite universe `U` the bounded relation `f ⊘ g` induces
//! `S ↦ S⊘ = {g ∈ U : ∀f ∈ S. f ⊘ g}` and `S ↦ ⊘S = {f ∈ U : ∀g ∈ S. f ⊘ g}`.
//! These always form a Galois connection, so any violation means the lifting
//! checks disagree with themselves.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::theory::Theory;

use super::gen::rng;
use super::search::Enumerable;
use super::{check_monoidal_lift, BoundedLiftConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaloisReport {
    pub theory: Theory,
    pub universe: usize,
    pub samples: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

type Set = Vec<bool>;

struct Lifts {
    n: usize,
    holds: Vec<bool>,
}

impl Lifts {
    fn get(&self, f: usize, g: usize) -> bool {
        self.holds[f * self.n + g]
    }

    fn right(&self, s: &Set) -> Set {
        (0..self.n)
            .map(|g| (0..self.n).all(|f| !s[f] || self.get(f, g)))
            .collect()
    }

    fn left(&self, s: &Set) -> Set {
        (0..self.n)
            .map(|f| (0..self.n).all(|g| !s[g] || self.get(f, g)))
            .collect()
    }
}

fn subset(a: &Set, b: &Set) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

/// Checks the laws on `samples` seeded pairs `S ⊆ T` of subsets of
/// `universe`.
pub fn galois_laws<M: Enumerable>(
    universe: &[M],
    samples: usize,
    cfg: &BoundedLiftConfig,
) -> Result<GaloisReport> {
    let n = universe.len();
    let holds = (0..n * n)
        .into_par_iter()
        .map(|k| Ok(check_monoidal_lift(&universe[k / n], &universe[k % n], cfg)?.holds))
        .collect::<Result<Vec<bool>>>()?;
    let lifts = Lifts { n, holds };

    let mut r = rng(cfg.seed);
    let mut violations = Vec::new();
    let mut checks = 0;
    for sample in 0..samples {
        let s: Set = (0..n).map(|_| r.random_bool(0.3)).collect();
        let t: Set = s.iter().map(|&x| x || r.random_bool(0.3)).collect();
        let (rs, rt) = (lifts.right(&s), lifts.right(&t));
        let (ls, lt) = (lifts.left(&s), lifts.left(&t));

        let laws = [
            ("right complement reverses inclusion", subset(&rt, &rs)),
            ("left complement reverses inclusion", subset(&lt, &ls)),
            ("S ⊆ ⊘(S⊘)", subset(&s, &lifts.left(&rs))),
            ("S ⊆ (⊘S)⊘", subset(&s, &lifts.right(&ls))),
            ("S⊘ = (⊘(S⊘))⊘", rs == lifts.right(&lifts.left(&rs))),
            ("⊘S = ⊘((⊘S)⊘)", ls == lifts.left(&lifts.right(&ls))),
        ];
        for (name, ok) in laws {
            checks += 1;
            if !ok {
                violations.push(format!("sample {sample}: {name}"));
            }
        }
    }
    Ok(GaloisReport {
        theory: M::THEORY,
        universe: n,
        samples,
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frel::Relation;
    use crate::fset::FinFunction;
    use crate::oracle::all_morphisms_up_to;

    #[test]
    fn laws_hold_on_small_universes() {
        let cfg = BoundedLiftConfig::new(1, 1, 3).unwrap();
        let rels = all_morphisms_up_to::<Relation>(1).unwrap();
        let report = galois_laws(&rels, 20, &cfg).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.checks, 120);

        let funs = all_morphisms_up_to::<FinFunction>(2).unwrap();
        assert!(galois_laws(&funs, 20, &cfg).unwrap().passed());
    }

    #[test]
    fn complements_of_a_broken_relation_are_caught() {
        // A relation that is not a lifting relation still yields a Galois
        // connection; the checker itself must agree.
        let lifts = Lifts {
            n: 2,
            holds: vec![true, false, true, true],
        };
        let s = vec![true, false];
        let rs = lifts.right(&s);
        assert_eq!(rs, vec![true, false]);
        assert!(subset(&s, &lifts.left(&rs)));
    }
}
