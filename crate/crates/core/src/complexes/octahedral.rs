use itertools::Itertools;

use super::{barycentric_subdivision, AbstractComplex, Building, Simplex, Subdivision};
use crate::cycles::{unit, TSequence};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::grassmann::Subspace;

/// Vertices of `K`: `a_i^ε` for `1 <= i <= n-1`, `ε ∈ {0,1}`, and the cone
/// point `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KVertex {
    A { i: usize, eps: u8 },
    B,
}

impl KVertex {
    pub fn token(self, n: usize) -> u32 {
        match self {
            KVertex::A { i, eps } => (2 * (i - 1) + eps as usize) as u32,
            KVertex::B => 2 * (n as u32 - 1),
        }
    }

    pub fn from_token(n: usize, t: u32) -> KVertex {
        if t == 2 * (n as u32 - 1) {
            KVertex::B
        } else {
            KVertex::A {
                i: t as usize / 2 + 1,
                eps: (t % 2) as u8,
            }
        }
    }
}

/// `a^ε = (a_1^{ε_1}, ..., a_{n-1}^{ε_{n-1}})`.
pub fn a_eps(eps: &[u8]) -> Vec<KVertex> {
    eps.iter()
        .enumerate()
        .map(|(i, &e)| KVertex::A { i: i + 1, eps: e })
        .collect()
}

/// `a^{ε,j}`: `a^ε` with the `j`-th entry (1-based) replaced by `b`.
pub fn a_eps_j(eps: &[u8], j: usize) -> Vec<KVertex> {
    let mut out = a_eps(eps);
    out[j - 1] = KVertex::B;
    out
}

/// The octahedral sphere `M = {a_1^0,a_1^1} * ... * {a_{n-1}^0,a_{n-1}^1}`.
pub fn octahedral_m(n: usize) -> AbstractComplex {
    assert!(n >= 2);
    AbstractComplex::new(
        (0..n - 1)
            .map(|_| [0u8, 1])
            .multi_cartesian_product()
            .map(|eps| {
                a_eps(&eps)
                    .into_iter()
                    .map(|v| v.token(n))
                    .collect::<Simplex>()
            }),
    )
}

/// `K = M ∪ ({b} * M^{(n-3)})`.
pub fn octahedral_k(n: usize) -> AbstractComplex {
    assert!(n >= 2);
    let m = octahedral_m(n);
    let mut facets: Vec<Simplex> = m.facets().to_vec();
    let b = KVertex::B.token(n);
    for facet in m.facets() {
        for drop in 0..facet.len() {
            let mut s = super::face(facet, drop);
            s.push(b);
            facets.push(s);
        }
    }
    AbstractComplex::new(facets)
}

/// `K` together with its barycentric subdivision.
#[derive(Clone, Debug)]
pub struct SubdividedK {
    n: usize,
    k: AbstractComplex,
    sd: Subdivision,
}

impl SubdividedK {
    pub fn new(n: usize) -> Self {
        let k = octahedral_k(n);
        let sd = barycentric_subdivision(&k);
        SubdividedK { n, k, sd }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &AbstractComplex {
        &self.k
    }

    pub fn sd(&self) -> &Subdivision {
        &self.sd
    }

    /// `S(x) = [{x_1..x_{n-1}}, {x_1..x_{n-2}}, ..., {x_1}]`.
    pub fn s_of(&self, xs: &[KVertex]) -> Simplex {
        (1..=xs.len())
            .rev()
            .map(|len| {
                let cell: Vec<u32> = xs[..len].iter().map(|v| v.token(self.n)).collect();
                self.sd.token(&cell).expect("x spans a simplex of K")
            })
            .collect()
    }
}

/// The simplicial map `f_v : sd(K) → X_V`, `σ ↦ ⟨θ_v(x) : x ∈ σ⟩^⊥`.
#[derive(Clone, Debug)]
pub struct FvMap {
    images: Vec<u32>,
    dims: Vec<usize>,
}

impl FvMap {
    pub fn new(building: &Building, sdk: &SubdividedK, v: &TSequence) -> Result<Self> {
        let f = building.field();
        let n = building.n();
        if sdk.n() != n || v.n() != n {
            return Err(Error::AmbientMismatch(sdk.n(), n));
        }
        let theta = |x: KVertex| -> Vec<Elem> {
            match x {
                KVertex::A { i, eps: 0 } => unit(n, i),
                KVertex::A { i, .. } => v.vector(i).to_vec(),
                KVertex::B => unit(n, n),
            }
        };
        let mut images = Vec::with_capacity(sdk.sd().cells().len());
        let mut dims = Vec::with_capacity(images.capacity());
        for cell in sdk.sd().cells() {
            let vecs: Vec<Vec<Elem>> = cell
                .iter()
                .map(|&t| theta(KVertex::from_token(n, t)))
                .collect();
            let image = Subspace::span(f, n, &vecs).perp(f);
            let id = building.vertex_id(&image).ok_or_else(|| {
                Error::DegenerateInput(format!("θ_v is not independent on cell {cell:?}"))
            })?;
            dims.push(image.dim());
            images.push(id);
        }
        Ok(FvMap { images, dims })
    }

    pub fn vertex_image(&self, token: u32) -> u32 {
        self.images[token as usize]
    }

    /// Image of a simplex of `sd(K)`; fails unless dimensions strictly
    /// increase along the simplex, which makes the map order preserving.
    pub fn image(&self, simplex: &[u32]) -> Result<Simplex> {
        let ok = simplex
            .windows(2)
            .all(|w| self.dims[w[0] as usize] < self.dims[w[1] as usize]);
        if !ok {
            return Err(Error::OrderViolation(simplex.to_vec()));
        }
        Ok(simplex.iter().map(|&t| self.images[t as usize]).collect())
    }
}
