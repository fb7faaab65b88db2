//! Simplicial complexes: the building `X_V`, apartments, the octahedral
//! complex `K`, barycentric subdivision and the maps `f_v : sd(K) → X_V`.
//!
//! Every complex uses `u32` vertex tokens whose numeric order is the fixed
//! vertex order, and a simplex is the ascending list of its tokens. The face
//! obtained by dropping position `t` (0-based) is the `(t+1)`-th face in
//! 1-based numbering and carries the sign `(-1)^t`.

mod abstract_complex;
mod building;
mod octahedral;

pub use abstract_complex::{barycentric_subdivision, AbstractComplex, Subdivision};
pub use building::{apartment, Apartment, Building, FlagSimplex};
pub use octahedral::{a_eps, a_eps_j, octahedral_k, octahedral_m, FvMap, KVertex, SubdividedK};

pub type Simplex = Vec<u32>;

/// A finite simplicial complex that can list its simplices one degree at a
/// time.
pub trait Complex {
    /// Largest simplex dimension; `-1` when only the empty simplex exists.
    fn dimension(&self) -> isize;

    /// All simplices of the given dimension in ascending order. Degree `-1`
    /// yields the empty simplex.
    fn simplices(&self, degree: isize) -> Vec<Simplex>;

    fn f_vector(&self) -> Vec<usize> {
        (0..=self.dimension())
            .map(|d| self.simplices(d).len())
            .collect()
    }

    /// Unreduced Euler characteristic.
    fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// The simplex with position `t` removed.
pub fn face(simplex: &[u32], t: usize) -> Simplex {
    let mut out = Vec::with_capacity(simplex.len().saturating_sub(1));
    out.extend_from_slice(&simplex[..t]);
    out.extend_from_slice(&simplex[t + 1..]);
    out
}
