//! Explicit cycles: apartment cycles and the Solomon basis, the `c̃_v` basis
//! of `D¹(V)`, the `z_{u,i}` basis of `D^{n-1}(V)` and the minimal cycles
//! `γ_u`.

mod d1;

use itertools::Itertools;
use rayon::prelude::*;

use crate::complexes::{apartment, Building, Simplex};
use crate::error::{Error, Result};
use crate::exterior::{binomial, WedgeVector};
use crate::field::{Elem, Field};
use crate::grassmann::{enumerate_grassmannian, Subspace};
use crate::homology::TwistedChain;
use crate::linalg::Matrix;

pub use d1::{cv_chain, d1_basis, d1_cycle, push_forward, r_simplex};

/// `v = (v_1, ..., v_{n-1})` with `v_i ∈ e_i + ⟨e_{i+1}, ..., e_n⟩` and
/// `v_i ≠ e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TSequence {
    vectors: Vec<Vec<Elem>>,
}

impl TSequence {
    pub fn new(vectors: Vec<Vec<Elem>>) -> Result<Self> {
        let n = vectors.len() + 1;
        for (idx, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::NotInT(format!(
                    "v_{} has length {}, expected {n}",
                    idx + 1,
                    v.len()
                )));
            }
            let head_ok = v[..idx].iter().all(|&x| x == 0) && v[idx] == 1;
            if !head_ok {
                return Err(Error::NotInT(format!(
                    "v_{} is not in e_{} + <e_{}..e_{n}>",
                    idx + 1,
                    idx + 1,
                    idx + 2
                )));
            }
            if v[idx + 1..].iter().all(|&x| x == 0) {
                return Err(Error::NotInT(format!("v_{} equals e_{}", idx + 1, idx + 1)));
            }
        }
        Ok(TSequence { vectors })
    }

    /// All of `T_{q,n}`, lexicographic in the free coordinates with `v_1`
    /// most significant.
    pub fn enumerate(f: &Field, n: usize) -> Vec<TSequence> {
        assert!(n >= 2);
        let choices: Vec<Vec<Vec<Elem>>> = (1..n)
            .map(|i| {
                (0..n - i)
                    .map(|_| f.elements())
                    .multi_cartesian_product()
                    .filter(|tail| tail.iter().any(|&x| x != 0))
                    .map(|tail| {
                        let mut v = vec![0; n];
                        v[i - 1] = 1;
                        v[i..].copy_from_slice(&tail);
                        v
                    })
                    .collect()
            })
            .collect();
        choices
            .into_iter()
            .multi_cartesian_product()
            .map(|vectors| TSequence { vectors })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.vectors.len() + 1
    }

    /// `v_i`, 1-based.
    pub fn vector(&self, i: usize) -> &[Elem] {
        &self.vectors[i - 1]
    }

    pub fn vectors(&self) -> &[Vec<Elem>] {
        &self.vectors
    }

    /// `v^ε`: `e_i` where `ε_i = 0`, `v_i` where `ε_i = 1`.
    pub fn v_eps(&self, eps: &[u8]) -> Vec<Vec<Elem>> {
        let n = self.n();
        eps.iter()
            .enumerate()
            .map(|(i, &e)| {
                if e == 0 {
                    unit(n, i + 1)
                } else {
                    self.vectors[i].clone()
                }
            })
            .collect()
    }

    /// `v^{ε,j}`: `v^ε` with the `j`-th entry (1-based) replaced by `e_n`.
    pub fn v_eps_j(&self, eps: &[u8], j: usize) -> Vec<Vec<Elem>> {
        let mut out = self.v_eps(eps);
        out[j - 1] = unit(self.n(), self.n());
        out
    }
}

/// Parity of a permutation of `0..len`.
pub fn permutation_parity(perm: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

/// `χ(ε, π) = (-1)^{Σ ε_j} sgn(π)` as a parity.
pub fn chi_parity(eps: &[u8], perm: &[usize]) -> usize {
    (eps.iter().map(|&e| e as usize).sum::<usize>() + permutation_parity(perm)) % 2
}

/// `z_B = Σ_π sgn(π) σ_π` over the chambers of the apartment of a frame.
pub fn apartment_cycle(building: &Building, frame: &[Subspace]) -> Result<TwistedChain> {
    let f = building.field();
    let n = building.n();
    let apt = apartment(building, frame)?;
    let mut z = TwistedChain::zero(n as isize - 2, 1);
    for perm in (0..n).permutations(n) {
        let chamber = apt.chamber(building, &perm);
        z.add_term(f, chamber, &[f.sign(permutation_parity(&perm))]);
    }
    Ok(z)
}

/// The lines of `V` that lie in `upper` but not in `lower`.
fn lines_between(
    f: &Field,
    lines: &[Subspace],
    lower: &Subspace,
    upper: &Subspace,
) -> Vec<Subspace> {
    lines
        .iter()
        .filter(|l| {
            upper.contains(f, l).expect("same ambient")
                && !lower.contains(f, l).expect("same ambient")
        })
        .cloned()
        .collect()
}

/// Every frame whose apartment contains the chamber, listed as
/// `(L_1, ..., L_n)` with `U_i = L_1 + ... + L_i`.
pub fn frames_through_chamber(building: &Building, chamber: &[u32]) -> Result<Vec<Vec<Subspace>>> {
    let f = building.field();
    let n = building.n();
    if chamber.len() != n - 1 {
        return Err(Error::DegenerateInput(format!(
            "a chamber has {} vertices",
            n - 1
        )));
    }
    let mut flag: Vec<Subspace> = vec![Subspace::zero(n)];
    flag.extend(building.flag(chamber).chain().iter().cloned());
    flag.push(Subspace::full(n));
    if flag.iter().enumerate().any(|(d, u)| u.dim() != d) {
        return Err(Error::DegenerateInput("not a complete flag".into()));
    }
    let lines = enumerate_grassmannian(f, n, 1);
    let choices: Vec<Vec<Subspace>> = (1..=n)
        .map(|i| lines_between(f, &lines, &flag[i - 1], &flag[i]))
        .collect();
    Ok(choices.into_iter().multi_cartesian_product().collect())
}

/// `{z_B : the apartment of B contains the chamber}`.
pub fn solomon_basis(building: &Building, chamber: &[u32]) -> Result<Vec<TwistedChain>> {
    frames_through_chamber(building, chamber)?
        .par_iter()
        .map(|frame| apartment_cycle(building, frame))
        .collect()
}

/// `z_{u,i} = (*e_i) e_i^⊥ + (*u) u^⊥ − (*(u+e_i)) (u+e_i)^⊥` in
/// `C_0(X_V; ∧^{n-1} 𝔤)`; `i` is 1-based.
pub fn z_ui(building: &Building, u: &[Elem], i: usize) -> Result<TwistedChain> {
    let f = building.field();
    let n = building.n();
    if u.len() != n || !(1..=n).contains(&i) {
        return Err(Error::DegenerateInput(format!(
            "need u in F_q^{n} and 1 <= i <= {n}"
        )));
    }
    let ei = unit(n, i);
    let mut u_plus = u.to_vec();
    f.axpy(&mut u_plus, 1, &ei);
    if u.iter().all(|&x| x == 0) || u_plus.iter().all(|&x| x == 0) {
        return Err(Error::DegenerateInput("u must avoid 0 and -e_i".into()));
    }
    let mut z = TwistedChain::zero(0, n);
    for (vec, sign) in [(ei, 1), (u.to_vec(), 1), (u_plus, f.neg(1))] {
        let hyperplane = Subspace::span(f, n, &[vec.as_slice()]).perp(f);
        let vertex = building
            .vertex_id(&hyperplane)
            .expect("hyperplanes are vertices for n >= 2");
        let coeff = WedgeVector::from_vector(&vec).star(f).scale(f, sign);
        z.add_term(f, vec![vertex], coeff.coords());
    }
    Ok(z)
}

/// `R_i = (F_q^{i-1} \ {0}) × {0}^{n-i+1}`, lexicographic.
pub fn r_set(f: &Field, n: usize, i: usize) -> Vec<Vec<Elem>> {
    (0..i - 1)
        .map(|_| f.elements())
        .multi_cartesian_product()
        .filter(|head| head.iter().any(|&x| x != 0))
        .map(|head| {
            let mut u = head;
            u.resize(n, 0);
            u
        })
        .collect()
}

/// `ℬ = {z_{u,i} : 2 <= i <= n, u ∈ R_i}`, with each `(u, i)`.
pub fn dn1_basis(building: &Building) -> Vec<(Vec<Elem>, usize, TwistedChain)> {
    let f = building.field();
    let n = building.n();
    let indices: Vec<(Vec<Elem>, usize)> = (2..=n)
        .flat_map(|i| r_set(f, n, i).into_iter().map(move |u| (u, i)))
        .collect();
    indices
        .into_par_iter()
        .map(|(u, i)| {
            let z = z_ui(building, &u, i).expect("u ∈ R_i avoids 0 and -e_i");
            (u, i, z)
        })
        .collect()
}

/// `u_i = e_i` for `i < m` and `u_m = -(e_1 + ... + e_{m-1})`, `m = n-k+2`.
pub fn default_u(f: &Field, n: usize, k: usize) -> Vec<Vec<Elem>> {
    let m = n - k + 2;
    let mut us: Vec<Vec<Elem>> = (1..m).map(|i| unit(n, i)).collect();
    let mut last = vec![0; n];
    for v in &us {
        f.axpy(&mut last, f.neg(1), v);
    }
    us.push(last);
    us
}

fn check_general_position(f: &Field, n: usize, us: &[Vec<Elem>]) -> Result<()> {
    let m = us.len();
    if us.iter().any(|u| u.len() != n) {
        return Err(Error::DependenceViolation(format!(
            "vectors must have length {n}"
        )));
    }
    let mut total = vec![0; n];
    for u in us {
        f.axpy(&mut total, 1, u);
    }
    if total.iter().any(|&x| x != 0) {
        return Err(Error::DependenceViolation(
            "the vectors do not sum to zero".into(),
        ));
    }
    for skip in 0..m {
        let rest: Vec<&[Elem]> = us
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, u)| u.as_slice())
            .collect();
        if Matrix::from_rows(n, &rest).rank(f) != m - 1 {
            return Err(Error::DependenceViolation(format!(
                "dropping u_{} leaves a dependent set",
                skip + 1
            )));
        }
    }
    Ok(())
}

/// `γ_u ∈ C_{n-k-1}(X_V; ∧^k 𝔤)`: on `T(u, π) = [⟨u_{π(1..n-k)}⟩^⊥ ⊂ ... ⊂
/// ⟨u_{π(1)}⟩^⊥]` the value `*(u_{π(1)} ∧ ... ∧ u_{π(n-k)})`, for every
/// injective `π : [n-k] → [m]`.
pub fn gamma_u(building: &Building, us: &[Vec<Elem>], k: usize) -> Result<TwistedChain> {
    let f = building.field();
    let n = building.n();
    if k == 0 || k >= n {
        return Err(Error::DegenerateInput(format!("need 1 <= k <= {}", n - 1)));
    }
    let m = n - k + 2;
    if us.len() != m {
        return Err(Error::DependenceViolation(format!(
            "need m = {m} vectors, got {}",
            us.len()
        )));
    }
    check_general_position(f, n, us)?;
    let len = n - k;
    let terms: Vec<(Simplex, Vec<Elem>)> = (0..m)
        .permutations(len)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|pi| {
            let simplex: Simplex = (1..=len)
                .rev()
                .map(|p| {
                    let span: Vec<&[Elem]> = pi[..p].iter().map(|&i| us[i].as_slice()).collect();
                    let u = Subspace::span(f, n, &span).perp(f);
                    building.vertex_id(&u).expect("proper nonzero subspace")
                })
                .collect();
            let chosen: Vec<Vec<Elem>> = pi.iter().map(|&i| us[i].clone()).collect();
            let coeff = WedgeVector::decomposable(f, n, &chosen)
                .star(f)
                .into_coords();
            (simplex, coeff)
        })
        .collect();
    let mut gamma = TwistedChain::zero(len as isize - 1, binomial(n, k));
    for (s, c) in terms {
        gamma.add_term(f, s, &c);
    }
    Ok(gamma)
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Elem> {
    let mut e = vec![0; n];
    e[i - 1] = 1;
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Complex;
    use crate::homology::{lusztig_system, ConstantSystem, TwistedComplex};
    use crate::linalg::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn building(q: u64, n: usize) -> Building {
        Building::new(&Field::new(q).unwrap(), n)
    }

    fn rank_of(tc: &TwistedComplex, chains: &[TwistedChain]) -> usize {
        let rows: Vec<Vec<Elem>> = chains
            .iter()
            .map(|c| tc.coords_of_chain(c).unwrap())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(cols, &rows).rank(tc.field())
    }

    #[test]
    fn t_sequence_counts_and_validation() {
        let f2 = Field::new(2).unwrap();
        let f3 = Field::new(3).unwrap();
        assert_eq!(TSequence::enumerate(&f2, 3).len(), 3);
        assert_eq!(TSequence::enumerate(&f3, 3).len(), 16);
        assert_eq!(TSequence::enumerate(&f2, 4).len(), 21);
        assert_eq!(TSequence::enumerate(&f3, 2).len(), 2);
        assert!(TSequence::new(vec![vec![1, 0, 0], vec![0, 1, 1]]).is_err());
        assert!(TSequence::new(vec![vec![1, 1, 0], vec![1, 1, 1]]).is_err());
        assert!(TSequence::new(vec![vec![1, 1, 0], vec![0, 1, 1]]).is_ok());
        let all = TSequence::enumerate(&f3, 3);
        assert!(all.windows(2).all(|w| w[0].vectors < w[1].vectors));
    }

    #[test]
    fn chi_sign_identities() {
        for n in 2..=5usize {
            for eps in (0..n - 1).map(|_| [0u8, 1]).multi_cartesian_product() {
                for perm in (0..n - 1).permutations(n - 1) {
                    let c = chi_parity(&eps, &perm);
                    for a in 0..n.saturating_sub(2) {
                        let mut swapped = perm.clone();
                        swapped.swap(a, a + 1);
                        assert_ne!(chi_parity(&eps, &swapped), c);
                    }
                    for j in 0..n - 1 {
                        let mut flipped = eps.clone();
                        flipped[j] ^= 1;
                        assert_ne!(chi_parity(&flipped, &perm), c);
                    }
                }
            }
        }
    }

    #[test]
    fn apartment_cycles_are_cycles() {
        let x = building(2, 3);
        let f = x.field().clone();
        let frame: Vec<Subspace> = (1..=3)
            .map(|i| Subspace::span(&f, 3, &[unit(3, i)]))
            .collect();
        let z = apartment_cycle(&x, &frame).unwrap();
        assert_eq!(z.weight(), 6);
        assert!(z.is_cycle(&f));

        let x4 = building(2, 4);
        let f = x4.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        while found < 20 {
            let rows: Vec<Vec<Elem>> = (0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(0..2) as Elem).collect())
                .collect();
            if Matrix::from_rows(4, &rows).rank(&f) < 4 {
                continue;
            }
            let frame: Vec<Subspace> = rows.iter().map(|r| Subspace::span(&f, 4, &[r])).collect();
            let z = apartment_cycle(&x4, &frame).unwrap();
            assert_eq!(z.weight(), 24);
            assert!(z.is_cycle(&f));
            found += 1;
        }
    }

    #[test]
    fn solomon_basis_rank() {
        let x = building(2, 3);
        let chamber = x.simplices(1)[0].clone();
        let basis = solomon_basis(&x, &chamber).unwrap();
        assert_eq!(basis.len(), 8);
        let tc = TwistedComplex::new(x.field(), &x, &ConstantSystem::scalars(), true);
        assert_eq!(rank_of(&tc, &basis), 8);
    }

    #[test]
    fn dn1_basis_rank() {
        for (q, n) in [(2u64, 3usize), (3, 3), (2, 4)] {
            let x = building(q, n);
            let f = x.field().clone();
            let basis = dn1_basis(&x);
            let expected: usize = (2..=n).map(|i| (q as usize).pow(i as u32 - 1) - 1).sum();
            assert_eq!(basis.len(), expected);
            let sys = lusztig_system(&x, n - 1);
            let tc = TwistedComplex::lusztig(&x, &sys, true);
            for (_, _, z) in &basis {
                assert!(z.is_cycle(&f));
                z.check_values(&f, &sys).unwrap();
            }
            let chains: Vec<TwistedChain> = basis.into_iter().map(|(_, _, z)| z).collect();
            assert_eq!(rank_of(&tc, &chains), expected);
        }
    }

    #[test]
    fn z_ui_support_and_errors() {
        let x = building(3, 3);
        let z = z_ui(&x, &[1, 1, 0], 3).unwrap();
        assert_eq!(z.weight(), 3);
        assert!(z_ui(&x, &[0, 0, 0], 2).is_err());
        assert!(z_ui(&x, &[0, 2, 0], 2).is_err());
    }

    #[test]
    fn gamma_support_sizes() {
        for (q, n) in [(2u64, 3usize), (3, 3), (2, 4)] {
            let x = building(q, n);
            let f = x.field().clone();
            for k in 1..n {
                let g = gamma_u(&x, &default_u(&f, n, k), k).unwrap();
                let m = n - k + 2;
                let fact: usize = (1..=m).product();
                assert_eq!(g.weight(), fact / 2, "q={q} n={n} k={k}");
                assert!(g.is_cycle(&f));
                g.check_values(&f, &lusztig_system(&x, k)).unwrap();
            }
        }
    }

    #[test]
    fn gamma_rejects_dependent_vectors() {
        let x = building(2, 3);
        let f = x.field().clone();
        let us = vec![vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 0]];
        assert!(matches!(
            gamma_u(&x, &us, 2),
            Err(Error::DependenceViolation(_))
        ));
        let mut bad = default_u(&f, 3, 1);
        bad[0] = vec![0, 1, 1];
        assert!(matches!(
            gamma_u(&x, &bad, 1),
            Err(Error::DependenceViolation(_))
        ));
    }

    #[test]
    fn gamma_with_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = building(3, 4);
        let f = x.field().clone();
        for k in 1..4 {
            let m = 4 - k + 2;
            let mut tried = 0;
            while tried < 5 {
                let mut us: Vec<Vec<Elem>> = (0..m - 1)
                    .map(|_| (0..4).map(|_| rng.gen_range(0..3) as Elem).collect())
                    .collect();
                let mut last = vec![0; 4];
                for u in &us {
                    f.axpy(&mut last, f.neg(1), u);
                }
                us.push(last);
                let Ok(g) = gamma_u(&x, &us, k) else { continue };
                let fact: usize = (1..=m).product();
                assert_eq!(g.weight(), fact / 2);
                assert!(g.is_cycle(&f));
                tried += 1;
            }
        }
    }
}
