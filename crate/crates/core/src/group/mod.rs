//! Group oracles and Cayley-ball enumeration.

mod bs;
mod free;
pub mod parse;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

pub use bs::{bs_normalize, BaumslagSolitar, BsElement, Syllable};
pub use free::{FreeGroup, FreeWord, Generator};
pub use parse::ParseError;
use thiserror::Error;

/// Default hard cap on materialized ball sizes.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// A group with solvable word problem: elements are canonical forms, so
/// `Eq`/`Ord` on elements is group equality and a total order.
pub trait Group {
    type Element: Clone + Ord + Debug;

    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;

    fn equal(&self, a: &Self::Element, b: &Self::Element) -> bool {
        a == b
    }

    fn pow(&self, a: &Self::Element, n: i64) -> Self::Element {
        let mut base = if n < 0 { self.invert(a) } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `by · a · by⁻¹`.
    fn conjugate(&self, a: &Self::Element, by: &Self::Element) -> Self::Element {
        self.multiply(&self.multiply(by, a), &self.invert(by))
    }

    fn parse(&self, text: &str) -> Result<Self::Element, ParseError>;
    fn render(&self, a: &Self::Element) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("ball budget exceeded: more than {cap} elements by radius {radius}")]
    BudgetExceeded { cap: usize, radius: usize },
}

/// All elements of word length at most `radius`, in BFS order.
///
/// Within a sphere elements are sorted by their canonical form, so the order
/// is deterministic.
#[derive(Clone, Debug)]
pub struct Ball<E> {
    elements: Vec<E>,
    layers: Vec<usize>,
    sphere_starts: Vec<usize>,
    index: BTreeMap<E, usize>,
    generators: Vec<E>,
    radius: usize,
}

impl<E: Clone + Ord> Ball<E> {
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Symmetrized generating set used for the enumeration.
    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    /// Exact word length of `e`, if it lies in the ball.
    pub fn length_of(&self, e: &E) -> Option<usize> {
        self.index_of(e).map(|i| self.layers[i])
    }

    pub fn layer(&self, i: usize) -> usize {
        self.layers[i]
    }

    /// Elements of word length exactly `k`.
    pub fn sphere(&self, k: usize) -> &[E] {
        if k > self.radius {
            return &[];
        }
        &self.elements[self.sphere_starts[k]..self.sphere_starts[k + 1]]
    }

    /// Indices of the elements with word length at most `r`.
    pub fn prefix_radius(&self, r: usize) -> &[E] {
        let end = self.sphere_starts[r.min(self.radius) + 1];
        &self.elements[..end]
    }

    /// Word-length map of the ball, as reals.
    pub fn length_map(&self) -> BTreeMap<E, f64> {
        self.elements
            .iter()
            .zip(&self.layers)
            .map(|(e, &l)| (e.clone(), l as f64))
            .collect()
    }

    /// `(element, word length)` pairs in BFS order.
    pub fn lengths(&self) -> impl Iterator<Item = (E, f64)> + '_ {
        self.elements
            .iter()
            .cloned()
            .zip(self.layers.iter().map(|&l| l as f64))
    }

    /// Adjacency lists of the induced Cayley subgraph (right multiplication).
    pub fn graph<G: Group<Element = E>>(&self, group: &G) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|x| {
                let mut nb: Vec<usize> = self
                    .generators
                    .iter()
                    .filter_map(|s| self.index_of(&group.multiply(x, s)))
                    .collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect()
    }
}

/// Closes `gens` under inversion, drops the identity and duplicates.
pub fn symmetrize<G: Group>(group: &G, gens: &[G::Element]) -> Vec<G::Element> {
    let id = group.identity();
    let mut set = BTreeSet::new();
    for g in gens {
        if *g != id {
            set.insert(g.clone());
            set.insert(group.invert(g));
        }
    }
    set.into_iter().collect()
}

/// Breadth-first enumeration of the ball of the given radius.
///
/// The BFS layer of each element is its exact word length with respect to
/// the symmetrized generating set.
pub fn enumerate_ball<G: Group>(
    group: &G,
    gens: &[G::Element],
    radius: usize,
    cap: usize,
) -> Result<Ball<G::Element>, GroupError> {
    let generators = symmetrize(group, gens);
    let id = group.identity();
    let mut index = BTreeMap::new();
    index.insert(id.clone(), 0usize);
    let mut elements = alloc::vec![id];
    let mut layers = alloc::vec![0usize];
    let mut sphere_starts = alloc::vec![0usize, 1];
    let mut frontier = 0..1;
    for k in 1..=radius {
        let mut next = BTreeSet::new();
        for x in &elements[frontier.clone()] {
            for s in &generators {
                let y = group.multiply(x, s);
                if !index.contains_key(&y) {
                    next.insert(y);
                }
            }
        }
        if elements.len() + next.len() > cap {
            return Err(GroupError::BudgetExceeded { cap, radius: k });
        }
        let start = elements.len();
        for y in next {
            index.insert(y.clone(), elements.len());
            elements.push(y);
            layers.push(k);
        }
        frontier = start..elements.len();
        sphere_starts.push(elements.len());
    }
    Ok(Ball {
        elements,
        layers,
        sphere_starts,
        index,
        generators,
        radius,
    })
}
