//! Local coefficient systems, twisted chain groups, boundary matrices and
//! homology dimensions.
//!
//! Every system here is *ambient*: each simplex carries a subspace of one
//! fixed coefficient space `W`, and faces carry larger subspaces, so all
//! restriction maps are inclusions. Chains keep their coefficients in `W`
//! coordinates; the boundary is then sign-and-copy. Chain-group coordinates
//! use the canonical basis of each value subspace, and simplices with zero
//! value are dropped from the chain groups.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use rayon::prelude::*;

use crate::complexes::{face, AbstractComplex, Building, Complex, FvMap, Simplex};
use crate::error::{Error, Result};
use crate::exterior::{binomial, wedge_power, WedgeRecord, WedgeVector};
use crate::field::{Elem, Field};
use crate::grassmann::Subspace;
use crate::linalg::Matrix;

/// A local system whose values are subspaces of one ambient space and whose
/// restriction maps are inclusions.
pub trait LocalSystem: Sync {
    fn ambient_dim(&self) -> usize;

    /// Value on a nonempty simplex.
    fn value(&self, simplex: &[u32]) -> Subspace;

    /// Value on the empty simplex (the reduced degree `-1` group).
    fn empty_value(&self) -> Subspace;

    fn value_of(&self, simplex: &[u32]) -> Subspace {
        if simplex.is_empty() {
            self.empty_value()
        } else {
            self.value(simplex)
        }
    }
}

/// Untwisted coefficients `W` on every simplex.
#[derive(Clone, Debug)]
pub struct ConstantSystem {
    dim: usize,
}

impl ConstantSystem {
    pub fn new(dim: usize) -> Self {
        ConstantSystem { dim }
    }

    /// Coefficients in F_q itself.
    pub fn scalars() -> Self {
        ConstantSystem { dim: 1 }
    }
}

impl LocalSystem for ConstantSystem {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn value(&self, _simplex: &[u32]) -> Subspace {
        Subspace::full(self.dim)
    }

    fn empty_value(&self) -> Subspace {
        Subspace::full(self.dim)
    }
}

/// `∧^k 𝔤` on `X_V`: a flag carries `∧^k` of its smallest subspace inside
/// `∧^k V`, and the empty flag carries `∧^k V`.
#[derive(Clone, Debug)]
pub struct LusztigSystem {
    k: usize,
    n: usize,
    per_vertex: Vec<Subspace>,
}

impl LusztigSystem {
    pub fn new(building: &Building, k: usize) -> Self {
        let f = building.field();
        let per_vertex = (0..building.vertex_count() as u32)
            .into_par_iter()
            .map(|v| wedge_power(f, building.vertex(v), k))
            .collect();
        LusztigSystem {
            k,
            n: building.n(),
            per_vertex,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn lusztig_system(building: &Building, k: usize) -> LusztigSystem {
    LusztigSystem::new(building, k)
}

impl LocalSystem for LusztigSystem {
    fn ambient_dim(&self) -> usize {
        binomial(self.n, self.k)
    }

    fn value(&self, simplex: &[u32]) -> Subspace {
        // the smallest subspace comes first in vertex order
        self.per_vertex[simplex[0] as usize].clone()
    }

    fn empty_value(&self) -> Subspace {
        Subspace::full(self.ambient_dim())
    }
}

/// `𝒢(σ) = ⋂_{i ∈ σ} W_i` on the full simplex `Δ_{r-1}`, with `𝒢(∅) = W`.
#[derive(Clone, Debug)]
pub struct IntersectionSystem {
    field: Field,
    ambient: usize,
    spaces: Vec<Subspace>,
}

impl IntersectionSystem {
    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }
}

impl LocalSystem for IntersectionSystem {
    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn value(&self, simplex: &[u32]) -> Subspace {
        simplex
            .iter()
            .fold(Subspace::full(self.ambient), |acc, &i| {
                acc.intersect(&self.field, &self.spaces[i as usize])
                    .expect("common ambient")
            })
    }

    fn empty_value(&self) -> Subspace {
        Subspace::full(self.ambient)
    }
}

pub fn simplex_intersection_system(
    f: &Field,
    spaces: &[Subspace],
) -> Result<(AbstractComplex, IntersectionSystem)> {
    let ambient = spaces.first().map(Subspace::ambient).unwrap_or(0);
    if let Some(bad) = spaces.iter().find(|w| w.ambient() != ambient) {
        return Err(Error::AmbientMismatch(ambient, bad.ambient()));
    }
    let system = IntersectionSystem {
        field: f.clone(),
        ambient,
        spaces: spaces.to_vec(),
    };
    Ok((AbstractComplex::simplex(spaces.len()), system))
}

/// Inverse image `f^{-1} 𝒢` of a system on `X_V` along `f_v`.
pub struct PullbackSystem<'a, S> {
    map: &'a FvMap,
    base: &'a S,
}

impl<'a, S: LocalSystem> PullbackSystem<'a, S> {
    pub fn new(map: &'a FvMap, base: &'a S) -> Self {
        PullbackSystem { map, base }
    }
}

impl<S: LocalSystem> LocalSystem for PullbackSystem<'_, S> {
    fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    fn value(&self, simplex: &[u32]) -> Subspace {
        let image = self
            .map
            .image(simplex)
            .expect("f_v preserves order on sd(K)");
        self.base.value(&image)
    }

    fn empty_value(&self) -> Subspace {
        self.base.empty_value()
    }
}

/// Checks `value(σ) ⊆ value(face)` for every `degree`-simplex and face.
pub fn check_monotone<C: Complex, S: LocalSystem>(
    f: &Field,
    complex: &C,
    system: &S,
    degree: isize,
) -> Result<()> {
    for s in complex.simplices(degree) {
        let v = system.value_of(&s);
        for t in 0..s.len() {
            let fv = system.value_of(&face(&s, t));
            if !fv.contains(f, &v)? {
                return Err(Error::MonotonicityViolation(s));
            }
        }
    }
    Ok(())
}

/// A chain with coefficients in ambient coordinates; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedChain {
    degree: isize,
    coeff_dim: usize,
    terms: BTreeMap<Simplex, Vec<Elem>>,
}

impl TwistedChain {
    pub fn zero(degree: isize, coeff_dim: usize) -> Self {
        TwistedChain {
            degree,
            coeff_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn add_term(&mut self, f: &Field, simplex: Simplex, coeff: &[Elem]) {
        assert_eq!(coeff.len(), self.coeff_dim, "coefficient dimension");
        assert_eq!(simplex.len() as isize, self.degree + 1, "simplex degree");
        if coeff.iter().all(|&x| x == 0) {
            return;
        }
        match self.terms.get_mut(&simplex) {
            Some(existing) => {
                f.axpy(existing, 1, coeff);
                if existing.iter().all(|&x| x == 0) {
                    self.terms.remove(&simplex);
                }
            }
            None => {
                self.terms.insert(simplex, coeff.to_vec());
            }
        }
    }

    pub fn get(&self, simplex: &[u32]) -> Option<&[Elem]> {
        self.terms.get(simplex).map(Vec::as_slice)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &[Elem])> {
        self.terms.iter().map(|(s, c)| (s, c.as_slice()))
    }

    pub fn support(&self) -> Vec<&Simplex> {
        self.terms.keys().collect()
    }

    /// Number of simplices with a nonzero coefficient.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Self {
        let mut out = Self::zero(self.degree, self.coeff_dim);
        for (s, v) in &self.terms {
            out.add_term(f, s.clone(), &f.scale(c, v));
        }
        out
    }

    pub fn add(&self, f: &Field, other: &Self) -> Self {
        assert_eq!(
            (self.degree, self.coeff_dim),
            (other.degree, other.coeff_dim)
        );
        let mut out = self.clone();
        for (s, v) in &other.terms {
            out.add_term(f, s.clone(), v);
        }
        out
    }

    /// `∂c = Σ_σ Σ_t (-1)^t c(σ) σ_t`, with `t` the 0-based position; a
    /// 0-chain maps to the empty simplex.
    pub fn boundary(&self, f: &Field) -> Self {
        let mut out = Self::zero(self.degree - 1, self.coeff_dim);
        if self.degree < 0 {
            return out;
        }
        for (s, v) in &self.terms {
            for t in 0..s.len() {
                out.add_term(f, face(s, t), &f.scale(f.sign(t), v));
            }
        }
        out
    }

    pub fn is_cycle(&self, f: &Field) -> bool {
        self.boundary(f).is_zero()
    }

    /// Fails with [`Error::MonotonicityViolation`] if some coefficient lies
    /// outside the value of its simplex.
    pub fn check_values<S: LocalSystem>(&self, f: &Field, system: &S) -> Result<()> {
        for (s, v) in &self.terms {
            if !system.value_of(s).contains_vector(f, v) {
                return Err(Error::MonotonicityViolation(s.clone()));
            }
        }
        Ok(())
    }

    /// `{simplex-serial: wedge-coords}` for a chain on `X_V` whose
    /// coefficients live in `∧^grade V`.
    pub fn to_record(&self, building: &Building, grade: usize) -> BTreeMap<String, WedgeRecord> {
        assert_eq!(self.coeff_dim, binomial(building.n(), grade));
        self.terms
            .iter()
            .map(|(s, v)| {
                let w = WedgeVector::from_coords(building.n(), grade, v.clone());
                (building.simplex_serial(s), w.to_record())
            })
            .collect()
    }
}

/// True iff `∂c = 0` (reduced boundary for 0-chains).
pub fn verify_cycle(f: &Field, chain: &TwistedChain) -> bool {
    chain.is_cycle(f)
}

/// One chain group `C_i(X; F)`: the simplices with nonzero value, each with
/// a block of coordinates sized by its value.
#[derive(Clone, Debug)]
pub struct ChainGroup {
    degree: isize,
    simplices: Vec<Simplex>,
    values: Vec<Subspace>,
    offsets: Vec<usize>,
    index: HashMap<Simplex, usize>,
}

impl ChainGroup {
    fn build<S: LocalSystem>(degree: isize, candidates: Vec<Simplex>, system: &S) -> Self {
        let valued: Vec<(Simplex, Subspace)> = candidates
            .into_par_iter()
            .map(|s| {
                let v = system.value_of(&s);
                (s, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let mut offsets = Vec::with_capacity(valued.len() + 1);
        let mut total = 0;
        let mut simplices = Vec::with_capacity(valued.len());
        let mut values = Vec::with_capacity(valued.len());
        for (s, v) in valued {
            offsets.push(total);
            total += v.dim();
            simplices.push(s);
            values.push(v);
        }
        offsets.push(total);
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        ChainGroup {
            degree,
            simplices,
            values,
            offsets,
            index,
        }
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().expect("offsets end with the total")
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn value(&self, pos: usize) -> &Subspace {
        &self.values[pos]
    }

    pub fn position(&self, simplex: &[u32]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub fn block(&self, pos: usize) -> Range<usize> {
        self.offsets[pos]..self.offsets[pos + 1]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// The twisted chain complex `C_*(X; F)`, reduced or not.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    field: Field,
    reduced: bool,
    coeff_dim: usize,
    top: isize,
    groups: Vec<ChainGroup>,
}

impl TwistedComplex {
    pub fn new<C: Complex, S: LocalSystem>(
        f: &Field,
        complex: &C,
        system: &S,
        reduced: bool,
    ) -> Self {
        let top = complex.dimension();
        let low = if reduced { -1 } else { 0 };
        let groups = (low..=top)
            .map(|d| ChainGroup::build(d, complex.simplices(d), system))
            .collect();
        TwistedComplex {
            field: f.clone(),
            reduced,
            coeff_dim: system.ambient_dim(),
            top,
            groups,
        }
    }

    /// `∧^k 𝔤` on `X_V`, with simplices whose smallest subspace has
    /// dimension below `k` left out up front (their value is zero).
    pub fn lusztig(building: &Building, system: &LusztigSystem, reduced: bool) -> Self {
        let top = building.dimension();
        let low = if reduced { -1 } else { 0 };
        let groups = (low..=top)
            .map(|d| ChainGroup::build(d, building.simplices_with_min_dim(d, system.k()), system))
            .collect();
        TwistedComplex {
            field: building.field().clone(),
            reduced,
            coeff_dim: system.ambient_dim(),
            top,
            groups,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn top_degree(&self) -> isize {
        self.top
    }

    pub fn min_degree(&self) -> isize {
        if self.reduced {
            -1
        } else {
            0
        }
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn group(&self, degree: isize) -> Option<&ChainGroup> {
        if degree < self.min_degree() || degree > self.top {
            return None;
        }
        self.groups.get((degree - self.min_degree()) as usize)
    }

    pub fn chain_dim(&self, degree: isize) -> usize {
        self.group(degree).map_or(0, ChainGroup::dim)
    }

    /// Matrix of `∂_i : C_i → C_{i-1}` in the canonical local bases.
    pub fn boundary_matrix(&self, degree: isize) -> Result<Matrix> {
        let rows = self.chain_dim(degree - 1);
        let (Some(src), Some(dst)) = (self.group(degree), self.group(degree - 1)) else {
            return Ok(Matrix::zeros(rows, self.chain_dim(degree)));
        };
        let f = &self.field;
        let columns: Vec<Result<Vec<(usize, usize, Elem)>>> = (0..src.simplices.len())
            .into_par_iter()
            .map(|pos| {
                let s = &src.simplices[pos];
                let value = &src.values[pos];
                let mut entries = Vec::new();
                for (b, basis) in value.basis_rows().enumerate() {
                    let col = src.offsets[pos] + b;
                    for t in 0..s.len() {
                        let fc = face(s, t);
                        let fpos = dst
                            .position(&fc)
                            .ok_or_else(|| Error::MonotonicityViolation(s.clone()))?;
                        let coords = dst.values[fpos]
                            .coordinates(f, basis)
                            .ok_or_else(|| Error::MonotonicityViolation(s.clone()))?;
                        let sign = f.sign(t);
                        for (r, &c) in coords.iter().enumerate() {
                            if c != 0 {
                                entries.push((dst.offsets[fpos] + r, col, f.mul(sign, c)));
                            }
                        }
                    }
                }
                Ok(entries)
            })
            .collect();
        let mut m = Matrix::zeros(rows, src.dim());
        for entries in columns {
            for (r, c, v) in entries? {
                let cur = m.get(r, c);
                m.set(r, c, f.add(cur, v));
            }
        }
        Ok(m)
    }

    pub fn boundary_rank(&self, degree: isize) -> Result<usize> {
        Ok(self.boundary_matrix(degree)?.rank(&self.field))
    }

    /// `dim ker ∂_i − rank ∂_{i+1}`.
    pub fn homology_dim(&self, degree: isize) -> Result<usize> {
        let (r_in, r_out) = rayon::join(
            || self.boundary_rank(degree),
            || self.boundary_rank(degree + 1),
        );
        Ok(self.chain_dim(degree) - r_in? - r_out?)
    }

    pub fn homology_dims(&self) -> Result<BTreeMap<isize, usize>> {
        let ranks: Vec<Result<usize>> = (self.min_degree()..=self.top + 1)
            .into_par_iter()
            .map(|d| self.boundary_rank(d))
            .collect();
        let ranks = ranks.into_iter().collect::<Result<Vec<_>>>()?;
        Ok((self.min_degree()..=self.top)
            .map(|d| {
                let i = (d - self.min_degree()) as usize;
                (d, self.chain_dim(d) - ranks[i] - ranks[i + 1])
            })
            .collect())
    }

    /// Rows form a basis of `Z_i = ker ∂_i` in chain-group coordinates.
    pub fn cycle_basis(&self, degree: isize) -> Result<Matrix> {
        Ok(self.boundary_matrix(degree)?.kernel_basis(&self.field))
    }

    pub fn chain_from_coords(&self, degree: isize, coords: &[Elem]) -> TwistedChain {
        let mut chain = TwistedChain::zero(degree, self.coeff_dim);
        let Some(g) = self.group(degree) else {
            return chain;
        };
        assert_eq!(coords.len(), g.dim());
        for (pos, s) in g.simplices.iter().enumerate() {
            let local = &coords[g.block(pos)];
            if local.iter().all(|&x| x == 0) {
                continue;
            }
            let basis = g.values[pos].basis_matrix();
            chain.add_term(
                &self.field,
                s.clone(),
                &basis.left_mul_vec(&self.field, local),
            );
        }
        chain
    }

    /// Chain-group coordinates of a chain; fails if a coefficient is outside
    /// its simplex value or sits on a pruned simplex.
    pub fn coords_of_chain(&self, chain: &TwistedChain) -> Result<Vec<Elem>> {
        let Some(g) = self.group(chain.degree()) else {
            return if chain.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::DegenerateInput(format!(
                    "no chain group in degree {}",
                    chain.degree()
                )))
            };
        };
        let mut out = vec![0; g.dim()];
        for (s, v) in chain.terms() {
            let pos = g
                .position(s)
                .ok_or_else(|| Error::MonotonicityViolation(s.clone()))?;
            let local = g.values[pos]
                .coordinates(&self.field, v)
                .ok_or_else(|| Error::MonotonicityViolation(s.clone()))?;
            out[g.block(pos)].copy_from_slice(&local);
        }
        Ok(out)
    }
}

/// Matrix of `∂_i` for `complex` with coefficients in `system`.
pub fn boundary_matrix<C: Complex, S: LocalSystem>(
    f: &Field,
    complex: &C,
    system: &S,
    degree: isize,
) -> Result<Matrix> {
    TwistedComplex::new(f, complex, system, true).boundary_matrix(degree)
}

pub fn homology_dim<C: Complex, S: LocalSystem>(
    f: &Field,
    complex: &C,
    system: &S,
    degree: isize,
    reduced: bool,
) -> Result<usize> {
    TwistedComplex::new(f, complex, system, reduced).homology_dim(degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{apartment, octahedral_k, octahedral_m, Building};
    use crate::grassmann::Subspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn building(q: u64, n: usize) -> Building {
        Building::new(&Field::new(q).unwrap(), n)
    }

    #[test]
    fn lusztig_values() {
        let x = building(2, 3);
        let f = x.field().clone();
        let sys = lusztig_system(&x, 1);
        let e1 = Subspace::span(&f, 3, &[[1, 0, 0]]);
        let e12 = Subspace::span(&f, 3, &[[1, 0, 0], [0, 1, 0]]);
        let s = vec![x.vertex_id(&e1).unwrap(), x.vertex_id(&e12).unwrap()];
        assert_eq!(sys.value(&s), e1);
        let sys2 = lusztig_system(&x, 2);
        assert!(sys2.value(&s).is_zero());
        assert_eq!(sys2.value(&s[1..]).dim(), 1);
        assert_eq!(sys2.empty_value(), Subspace::full(3));
        for d in 0..=1 {
            check_monotone(&f, &x, &sys, d).unwrap();
            check_monotone(&f, &x, &sys2, d).unwrap();
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        for (q, n) in [(2, 2), (2, 3), (3, 3), (2, 4)] {
            let x = building(q, n);
            let f = x.field().clone();
            let mut complexes = vec![TwistedComplex::new(
                &f,
                &x,
                &ConstantSystem::scalars(),
                true,
            )];
            for k in 1..n {
                complexes.push(TwistedComplex::lusztig(&x, &lusztig_system(&x, k), true));
            }
            for tc in &complexes {
                for d in 0..=tc.top_degree() {
                    let lower = tc.boundary_matrix(d).unwrap();
                    let upper = tc.boundary_matrix(d + 1).unwrap();
                    assert!(lower.mul(&f, &upper).is_zero(), "q={q} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn n2_lines_span_the_plane() {
        let x = building(2, 2);
        let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, 1), true);
        let d0 = tc.boundary_matrix(0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (2, 3));
        assert_eq!(d0.rank(x.field()), 2);
    }

    #[test]
    fn untwisted_matches_classical_boundary() {
        let f = Field::new(3).unwrap();
        let tri = AbstractComplex::new([vec![0, 1, 2]]);
        let m = boundary_matrix(&f, &tri, &ConstantSystem::scalars(), 2).unwrap();
        // columns: ∂[0,1,2] = [1,2] - [0,2] + [0,1], rows ordered [0,1],[0,2],[1,2]
        assert_eq!(m, Matrix::from_rows(1, &[[1], [2], [1]]));
    }

    #[test]
    fn solomon_tits_small() {
        for (q, n) in [(2u64, 2usize), (3, 2), (2, 3), (3, 3), (2, 4)] {
            let x = building(q, n);
            let dims = TwistedComplex::new(x.field(), &x, &ConstantSystem::scalars(), true)
                .homology_dims()
                .unwrap();
            for (&d, &h) in &dims {
                let expected = if d == n as isize - 2 {
                    q.pow((n * (n - 1) / 2) as u32) as usize
                } else {
                    0
                };
                assert_eq!(h, expected, "q={q} n={n} d={d}");
            }
        }
    }

    #[test]
    fn spheres_have_one_top_class() {
        let f = Field::new(2).unwrap();
        for n in 3..=4 {
            let x = Building::new(&f, n);
            let frame: Vec<Subspace> = (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    Subspace::span(&f, n, &[v])
                })
                .collect();
            let apt = apartment(&x, &frame).unwrap();
            let c = ConstantSystem::scalars();
            assert_eq!(
                homology_dim(&f, &apt.complex, &c, n as isize - 2, true).unwrap(),
                1
            );
            assert_eq!(
                homology_dim(&f, &octahedral_m(n), &c, n as isize - 2, true).unwrap(),
                1
            );
            let k = octahedral_k(n);
            let dims = TwistedComplex::new(&f, &k, &c, true)
                .homology_dims()
                .unwrap();
            // K/cone ≃ M/M^{(n-3)}, one sphere per top simplex of M
            for (&d, &h) in &dims {
                assert_eq!(
                    h,
                    if d == n as isize - 2 { 1 << (n - 1) } else { 0 },
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn simplex_intersection_vanishing_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for q in [2u64, 3] {
            let f = Field::new(q).unwrap();
            for _ in 0..20 {
                let r = rng.gen_range(2..=5usize);
                let amb = rng.gen_range(1..=5usize);
                let spaces: Vec<Subspace> = (0..r)
                    .map(|_| {
                        let k = rng.gen_range(0..=amb);
                        let vs: Vec<Vec<Elem>> = (0..k)
                            .map(|_| (0..amb).map(|_| rng.gen_range(0..f.q()) as Elem).collect())
                            .collect();
                        Subspace::span(&f, amb, &vs)
                    })
                    .collect();
                let (delta, sys) = simplex_intersection_system(&f, &spaces).unwrap();
                for d in (r as isize - 2)..=(r as isize - 1) {
                    assert_eq!(homology_dim(&f, &delta, &sys, d, true).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn constant_intersection_system_is_a_cone() {
        let f = Field::new(2).unwrap();
        let w = Subspace::full(3);
        let (delta, sys) = simplex_intersection_system(&f, &[w.clone(), w.clone(), w]).unwrap();
        let dims = TwistedComplex::new(&f, &delta, &sys, true)
            .homology_dims()
            .unwrap();
        assert!(dims.values().all(|&h| h == 0));
        let bad = simplex_intersection_system(&f, &[Subspace::full(2), Subspace::full(3)]);
        assert!(matches!(bad, Err(Error::AmbientMismatch(2, 3))));
    }

    #[test]
    fn single_chamber_is_not_a_cycle() {
        let x = building(2, 3);
        let f = x.field().clone();
        let mut c = TwistedChain::zero(1, 1);
        assert!(verify_cycle(&f, &c));
        c.add_term(&f, x.simplices(1)[0].clone(), &[1]);
        assert!(!verify_cycle(&f, &c));
    }

    #[test]
    fn coordinates_round_trip() {
        let x = building(3, 3);
        let sys = lusztig_system(&x, 1);
        let tc = TwistedComplex::lusztig(&x, &sys, true);
        let z = tc.cycle_basis(1).unwrap();
        assert_eq!(z.rows(), 16);
        for row in z.row_iter() {
            let chain = tc.chain_from_coords(1, row);
            assert!(chain.is_cycle(tc.field()));
            chain.check_values(tc.field(), &sys).unwrap();
            assert_eq!(tc.coords_of_chain(&chain).unwrap(), row);
        }
    }
}
