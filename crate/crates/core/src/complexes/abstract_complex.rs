use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use super::{Complex, Simplex};

/// A complex given by a list of generating simplices; all their faces are
/// implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractComplex {
    vertices: Vec<u32>,
    facets: Vec<Simplex>,
}

impl AbstractComplex {
    pub fn new(facets: impl IntoIterator<Item = Simplex>) -> Self {
        let facets: BTreeSet<Simplex> = facets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .filter(|s| !s.is_empty())
            .collect();
        let vertices: BTreeSet<u32> = facets.iter().flatten().copied().collect();
        AbstractComplex {
            vertices: vertices.into_iter().collect(),
            facets: facets.into_iter().collect(),
        }
    }

    /// The full simplex on `0..r`.
    pub fn simplex(r: usize) -> Self {
        Self::new([(0..r as u32).collect()])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Generating simplices, deduplicated and sorted.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Generators that are not faces of other generators.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        self.facets
            .iter()
            .filter(|s| {
                !self
                    .facets
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.binary_search(v).is_ok()))
            })
            .cloned()
            .collect()
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        simplex.is_empty()
            || self
                .facets
                .iter()
                .any(|t| simplex.iter().all(|v| t.binary_search(v).is_ok()))
    }

    /// All nonempty simplices.
    pub fn all_simplices(&self) -> Vec<Simplex> {
        (0..=self.dimension())
            .flat_map(|d| self.simplices(d))
            .collect()
    }
}

impl Complex for AbstractComplex {
    fn dimension(&self) -> isize {
        self.facets
            .iter()
            .map(|s| s.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    fn simplices(&self, degree: isize) -> Vec<Simplex> {
        if degree < 0 {
            return vec![Vec::new()];
        }
        let size = degree as usize + 1;
        let set: BTreeSet<Simplex> = self
            .facets
            .iter()
            .filter(|s| s.len() >= size)
            .flat_map(|s| s.iter().copied().combinations(size))
            .collect();
        set.into_iter().collect()
    }
}

/// Barycentric subdivision. Vertex token `t` of the subdivision stands for
/// `cells[t]`; cells are ordered by decreasing dimension, ties broken by
/// their sorted token tuples, so a strictly decreasing chain of cells is an
/// ascending token list.
#[derive(Clone, Debug)]
pub struct Subdivision {
    cells: Vec<Simplex>,
    index: HashMap<Simplex, u32>,
    complex: AbstractComplex,
}

impl Subdivision {
    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn cell(&self, token: u32) -> &Simplex {
        &self.cells[token as usize]
    }

    /// Token of a cell given as a vertex set in any order.
    pub fn token(&self, cell: &[u32]) -> Option<u32> {
        let mut key = cell.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    pub fn complex(&self) -> &AbstractComplex {
        &self.complex
    }
}

impl Complex for Subdivision {
    fn dimension(&self) -> isize {
        self.complex.dimension()
    }

    fn simplices(&self, degree: isize) -> Vec<Simplex> {
        self.complex.simplices(degree)
    }
}

pub fn barycentric_subdivision(x: &AbstractComplex) -> Subdivision {
    let mut cells = x.all_simplices();
    cells.sort_by(|a, b| (Reverse(a.len()), a).cmp(&(Reverse(b.len()), b)));
    let index: HashMap<Simplex, u32> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    let mut chains = Vec::new();
    for facet in x.maximal_simplices() {
        for order in facet.iter().copied().permutations(facet.len()) {
            // [{x_1..x_m}, {x_1..x_{m-1}}, ..., {x_1}]
            let chain: Simplex = (1..=order.len())
                .rev()
                .map(|len| {
                    let mut cell = order[..len].to_vec();
                    cell.sort_unstable();
                    index[&cell]
                })
                .collect();
            chains.push(chain);
        }
    }
    Subdivision {
        cells,
        index,
        complex: AbstractComplex::new(chains),
    }
}
