use std::collections::HashMap;

use itertools::Itertools;

use super::{AbstractComplex, Complex, Simplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grassmann::{enumerate_grassmannian, Subspace};

/// The spherical building `X_V` of `V = F_q^n`: the order complex of the
/// proper nonzero subspaces.
///
/// Vertex ids follow the vertex order: by dimension, then by serial string.
/// Simplices are produced one degree at a time and never cached.
#[derive(Clone, Debug)]
pub struct Building {
    field: Field,
    n: usize,
    vertices: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    above: Vec<Vec<u32>>,
}

impl Building {
    pub fn new(field: &Field, n: usize) -> Self {
        let vertices: Vec<Subspace> = (1..n)
            .flat_map(|d| enumerate_grassmannian(field, n, d).into_iter().sorted())
            .collect();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, u)| (u.clone(), i as u32))
            .collect();
        let above = vertices
            .iter()
            .map(|u| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| {
                        w.dim() > u.dim() && w.contains(field, u).expect("same ambient")
                    })
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect();
        Building {
            field: field.clone(),
            n,
            vertices,
            index,
            above,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: u32) -> &Subspace {
        &self.vertices[id as usize]
    }

    pub fn vertex_id(&self, u: &Subspace) -> Option<u32> {
        self.index.get(u).copied()
    }

    /// Vertices strictly containing `id`, ascending.
    pub fn above(&self, id: u32) -> &[u32] {
        &self.above[id as usize]
    }

    /// All `i`-simplices whose smallest subspace has dimension at least
    /// `min_dim`. Degree `-1` gives the empty simplex.
    pub fn simplices_with_min_dim(&self, degree: isize, min_dim: usize) -> Vec<Simplex> {
        if degree < 0 {
            return vec![Vec::new()];
        }
        let len = degree as usize + 1;
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(len);
        for (id, u) in self.vertices.iter().enumerate() {
            if u.dim() >= min_dim.max(1) {
                stack.push(id as u32);
                self.extend_chains(&mut stack, len, &mut out);
                stack.pop();
            }
        }
        out
    }

    fn extend_chains(&self, stack: &mut Vec<u32>, len: usize, out: &mut Vec<Simplex>) {
        if stack.len() == len {
            out.push(stack.clone());
            return;
        }
        let top = *stack.last().expect("nonempty chain");
        // a chain of `len` subspaces needs room for the remaining dimensions
        let room = self.n - 1 - self.vertex(top).dim();
        if room < len - stack.len() {
            return;
        }
        for &next in self.above(top) {
            stack.push(next);
            self.extend_chains(stack, len, out);
            stack.pop();
        }
    }

    pub fn flag(&self, simplex: &[u32]) -> FlagSimplex {
        FlagSimplex {
            chain: simplex.iter().map(|&v| self.vertex(v).clone()).collect(),
        }
    }

    pub fn simplex_of(&self, flag: &FlagSimplex) -> Option<Simplex> {
        flag.chain.iter().map(|u| self.vertex_id(u)).collect()
    }

    /// Subspace serials joined by `<`.
    pub fn simplex_serial(&self, simplex: &[u32]) -> String {
        simplex
            .iter()
            .map(|&v| self.vertex(v).serial(self.field.q()))
            .join("<")
    }

    pub fn parse_simplex(&self, s: &str) -> Result<Simplex> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let chain = s
            .split('<')
            .map(|part| Subspace::parse(&self.field, part))
            .collect::<Result<Vec<_>>>()?;
        let flag = FlagSimplex::new(&self.field, chain)?;
        self.simplex_of(&flag)
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a simplex")))
    }
}

impl Complex for Building {
    fn dimension(&self) -> isize {
        self.n as isize - 2
    }

    fn simplices(&self, degree: isize) -> Vec<Simplex> {
        self.simplices_with_min_dim(degree, 1)
    }
}

/// A strictly increasing chain of proper nonzero subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagSimplex {
    chain: Vec<Subspace>,
}

impl FlagSimplex {
    pub fn new(f: &Field, chain: Vec<Subspace>) -> Result<Self> {
        for u in &chain {
            if u.is_zero() || u.dim() == u.ambient() {
                return Err(Error::DegenerateInput(
                    "flag entries must be proper and nonzero".into(),
                ));
            }
        }
        for w in chain.windows(2) {
            if w[0].dim() >= w[1].dim() || !w[1].contains(f, &w[0])? {
                return Err(Error::DegenerateInput("flag is not strictly nested".into()));
            }
        }
        Ok(FlagSimplex { chain })
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    /// The smallest subspace, i.e. the value of `𝔤`.
    pub fn min_subspace(&self) -> Option<&Subspace> {
        self.chain.first()
    }
}

/// The apartment of a frame: its vertices are spans of proper nonempty
/// subsets of the frame lines. Tokens of `complex` are building vertex ids.
#[derive(Clone, Debug)]
pub struct Apartment {
    pub frame: Vec<Subspace>,
    pub complex: AbstractComplex,
}

impl Apartment {
    /// The chamber `[V_π(1) ⊂ ... ⊂ V_π(n-1)]` with `V_π(i)` spanned by the
    /// frame lines `π(1), ..., π(i)` (0-based permutation entries).
    pub fn chamber(&self, building: &Building, perm: &[usize]) -> Simplex {
        let f = building.field();
        let n = building.n();
        let mut acc = Subspace::zero(n);
        let mut out = Vec::with_capacity(n - 1);
        for &i in &perm[..n - 1] {
            acc = acc.sum(f, &self.frame[i]).expect("same ambient");
            out.push(building.vertex_id(&acc).expect("proper nonzero subspace"));
        }
        out
    }
}

pub fn apartment(building: &Building, frame: &[Subspace]) -> Result<Apartment> {
    let f = building.field();
    let n = building.n();
    if frame.len() != n || frame.iter().any(|l| l.dim() != 1 || l.ambient() != n) {
        return Err(Error::DegenerateFrame);
    }
    let total = frame
        .iter()
        .try_fold(Subspace::zero(n), |acc, l| acc.sum(f, l))?;
    if total.dim() != n {
        return Err(Error::DegenerateFrame);
    }
    let mut apt = Apartment {
        frame: frame.to_vec(),
        complex: AbstractComplex::new([]),
    };
    let chambers: Vec<Simplex> = (0..n)
        .permutations(n)
        .map(|perm| apt.chamber(building, &perm))
        .collect();
    apt.complex = AbstractComplex::new(chambers);
    Ok(apt)
}
