//! Backtracking search over morphisms of the enumerable theories.
//!
//! A relation or function `X → Y` is encoded as one bitmask per source
//! element, its image in `Y`. Candidates are visited in lexicographic order of
//! that column sequence (column 0 most significant, each column in increasing
//! numeric order), so the first solution found is the least one.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::frel::Relation;
use crate::fset::FinFunction;
use crate::object::ObjectDim;
use crate::theory::Process;

/// Largest search space a single enumeration may visit.
pub const MAX_CANDIDATES: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Masks {
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<u32>,
}

impl Masks {
    /// The union of the images of the points in `set`.
    pub fn image(&self, set: u32) -> u32 {
        bits(set).fold(0, |acc, y| acc | self.cols[y])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Masks) -> Masks {
        Masks {
            dom: first.dom,
            cod: self.cod,
            cols: first.cols.iter().map(|&c| self.image(c)).collect(),
        }
    }
}

pub fn bits(mut set: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            return None;
        }
        let i = set.trailing_zeros() as usize;
        set &= set - 1;
        Some(i)
    })
}

/// The finite theories whose hom-sets can be enumerated.
pub trait Enumerable: Process + PartialEq {
    /// Whether every column is a singleton.
    const FUNCTIONAL: bool;

    fn to_masks(&self) -> Masks;
    fn from_masks(m: &Masks) -> Self;

    /// Fails unless every morphism `dom → cod` can be visited.
    fn guard(dom: usize, cod: usize) -> Result<()> {
        let too_big = || {
            Error::SizeGuard(format!(
                "{} hom-set {dom}→{cod} exceeds {MAX_CANDIDATES} candidates",
                Self::THEORY
            ))
        };
        if dom == 0 {
            return Ok(());
        }
        if cod > 32 {
            return Err(too_big());
        }
        let count = if Self::FUNCTIONAL {
            (cod as u64).checked_pow(dom as u32)
        } else {
            1u64.checked_shl((dom * cod) as u32)
                .filter(|_| dom * cod < 64)
        };
        match count {
            Some(n) if n <= MAX_CANDIDATES => Ok(()),
            _ => Err(too_big()),
        }
    }
}

impl Enumerable for Relation {
    const FUNCTIONAL: bool = false;

    fn to_masks(&self) -> Masks {
        let (dom, cod) = (self.dom().get(), self.cod().get());
        let cols = (0..dom)
            .map(|a| {
                (0..cod)
                    .filter(|&b| self.related(a, b))
                    .fold(0u32, |acc, b| acc | (1 << b))
            })
            .collect();
        Masks { dom, cod, cols }
    }

    fn from_masks(m: &Masks) -> Self {
        let pairs = m
            .cols
            .iter()
            .enumerate()
            .flat_map(|(a, &c)| bits(c).map(move |b| (a, b)));
        Relation::from_pairs(m.dom, m.cod, pairs).expect("masks fit their codomain")
    }
}

impl Enumerable for FinFunction {
    const FUNCTIONAL: bool = true;

    fn to_masks(&self) -> Masks {
        Masks {
            dom: self.dom().get(),
            cod: self.cod().get(),
            cols: self.table().iter().map(|&b| 1u32 << b).collect(),
        }
    }

    fn from_masks(m: &Masks) -> Self {
        let table = m.cols.iter().map(|c| c.trailing_zeros() as usize).collect();
        FinFunction::new(ObjectDim(m.cod), table).expect("singleton columns")
    }
}

/// Find `h: Y → A` with `h ∘ left = top` and, when `lower = (right, bottom)`
/// is given, `right ∘ h = bottom`.
pub struct Problem<'a> {
    pub left: &'a Masks,
    pub top: &'a Masks,
    pub lower: Option<(&'a Masks, &'a Masks)>,
    pub functional: bool,
}

impl Problem<'_> {
    /// Calls `visit` on every solution in lexicographic order until it
    /// breaks.
    pub fn for_each<B>(&self, mut visit: impl FnMut(&[u32]) -> ControlFlow<B>) -> Option<B> {
        let y_dim = self.left.cod;
        let a_dim = self.top.cod;
        let full = if a_dim == 32 {
            u32::MAX
        } else {
            (1u32 << a_dim) - 1
        };

        let mut allowed = vec![full; y_dim];
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); y_dim];
        for (x, &ys) in self.left.cols.iter().enumerate() {
            if ys == 0 {
                // `h ∘ left` sends x nowhere; top must agree.
                if self.top.cols[x] != 0 {
                    return None;
                }
                continue;
            }
            for y in bits(ys) {
                allowed[y] &= self.top.cols[x];
            }
            closing[31 - ys.leading_zeros() as usize].push(x);
        }

        let mut cols = vec![0u32; y_dim];
        match self.descend(0, &allowed, &closing, &mut cols, &mut visit) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        }
    }

    pub fn first(&self) -> Option<Vec<u32>> {
        self.for_each(|cols| ControlFlow::Break(cols.to_vec()))
    }

    fn descend<B>(
        &self,
        y: usize,
        allowed: &[u32],
        closing: &[Vec<usize>],
        cols: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if y == cols.len() {
            return visit(cols);
        }
        for c in candidates(allowed[y], self.functional) {
            if let Some((right, bottom)) = self.lower {
                if right.image(c) != bottom.cols[y] {
                    continue;
                }
            }
            cols[y] = c;
            let closed = closing[y].iter().all(|&x| {
                bits(self.left.cols[x]).fold(0, |acc, y2| acc | cols[y2]) == self.top.cols[x]
            });
            if closed {
                self.descend(y + 1, allowed, closing, cols, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Subsets of `allowed` in increasing order, or its singletons.
fn candidates(allowed: u32, functional: bool) -> Candidates {
    Candidates {
        allowed,
        functional,
        next: if functional {
            (allowed != 0).then(|| allowed & allowed.wrapping_neg())
        } else {
            Some(0)
        },
    }
}

struct Candidates {
    allowed: u32,
    functional: bool,
    next: Option<u32>,
}

impl Iterator for Candidates {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let c = self.next?;
        let step = if self.functional {
            // Next set bit above c.
            let rest = self.allowed & !(c | (c - 1));
            rest & rest.wrapping_neg()
        } else {
            // Standard increasing submask step; wraps to 0 after `allowed`.
            (c | !self.allowed).wrapping_add(1) & self.allowed
        };
        self.next = (step != 0).then_some(step);
        Some(c)
    }
}

/// Every morphism `dom → cod`, lexicographically.
pub fn all_masks(dom: usize, cod: usize, functional: bool) -> Vec<Masks> {
    // A left leg with no points constrains nothing: enumerate freely.
    let none = Masks {
        dom: 0,
        cod: dom,
        cols: Vec::new(),
    };
    let target = Masks {
        dom: 0,
        cod,
        cols: Vec::new(),
    };
    let problem = Problem {
        left: &none,
        top: &target,
        lower: None,
        functional,
    };
    let mut out = Vec::new();
    problem.for_each::<()>(|cols| {
        out.push(Masks {
            dom,
            cod,
            cols: cols.to_vec(),
        });
        ControlFlow::Continue(())
    });
    out
}
