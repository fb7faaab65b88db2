//! Exterior algebra of F_q^n in coordinates.
//!
//! A grade-`j` element is stored by its coordinates on the basis
//! `e_I = e_{i_1} ∧ ... ∧ e_{i_j}` with `I` running over the `j`-subsets of
//! `[n]` in lexicographic order. Subsets are bitmasks, bit `i` standing for
//! `e_{i+1}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::grassmann::Subspace;
use crate::linalg::Matrix;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The `k`-subsets of `{0..n}` as bitmasks, in lexicographic order of their
/// sorted element lists.
pub fn lex_subsets(n: usize, k: usize) -> Vec<u32> {
    fn go(start: usize, n: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n.saturating_sub(k) {
            go(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    if k <= n {
        go(0, n, k, 0, &mut out);
    }
    out
}

/// Position of `mask` in [`lex_subsets`]`(n, popcount(mask))`.
pub fn subset_rank(n: usize, mask: u32) -> usize {
    let k = mask.count_ones() as usize;
    let mut rank = 0;
    let mut next = 0;
    let mut remaining = k;
    for c in 0..n {
        if mask & (1 << c) == 0 {
            continue;
        }
        for x in next..c {
            rank += binomial(n - 1 - x, remaining - 1);
        }
        next = c + 1;
        remaining -= 1;
    }
    rank
}

/// Sign of the permutation that sorts the concatenation `I, J` of two
/// disjoint sorted index sets.
pub fn shuffle_sign_parity(i: u32, j: u32) -> usize {
    let mut inversions = 0;
    let mut rest = i;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        inversions += (j & ((1u32 << bit) - 1)).count_ones() as usize;
        rest &= rest - 1;
    }
    inversions % 2
}

fn subset_label(mask: u32) -> String {
    let items: Vec<String> = (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("[{}]", items.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeVector {
    n: usize,
    grade: usize,
    coords: Vec<Elem>,
}

impl WedgeVector {
    pub fn zero(n: usize, grade: usize) -> Self {
        assert!(grade <= n);
        WedgeVector {
            n,
            grade,
            coords: vec![0; binomial(n, grade)],
        }
    }

    pub fn from_coords(n: usize, grade: usize, coords: Vec<Elem>) -> Self {
        assert_eq!(coords.len(), binomial(n, grade));
        WedgeVector { n, grade, coords }
    }

    /// `e_I` for a bitmask `I`.
    pub fn basis(n: usize, mask: u32) -> Self {
        let mut w = Self::zero(n, mask.count_ones() as usize);
        w.coords[subset_rank(n, mask)] = 1;
        w
    }

    /// `e = e_1 ∧ ... ∧ e_n`.
    pub fn volume(n: usize) -> Self {
        WedgeVector {
            n,
            grade: n,
            coords: vec![1],
        }
    }

    pub fn from_vector(v: &[Elem]) -> Self {
        WedgeVector {
            n: v.len(),
            grade: 1,
            coords: v.to_vec(),
        }
    }

    /// `v_1 ∧ ... ∧ v_p`; the empty product is `1` in grade 0.
    pub fn decomposable(f: &Field, n: usize, vectors: &[Vec<Elem>]) -> Self {
        vectors.iter().fold(
            WedgeVector {
                n,
                grade: 0,
                coords: vec![1],
            },
            |acc, v| {
                acc.wedge(f, &WedgeVector::from_vector(v))
                    .expect("decomposable of at most n vectors")
            },
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn add(&self, f: &Field, other: &Self) -> Self {
        assert_eq!((self.n, self.grade), (other.n, other.grade));
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        WedgeVector {
            n: self.n,
            grade: self.grade,
            coords,
        }
    }

    pub fn sub(&self, f: &Field, other: &Self) -> Self {
        self.add(f, &other.scale(f, f.neg(1)))
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Self {
        WedgeVector {
            n: self.n,
            grade: self.grade,
            coords: f.scale(c, &self.coords),
        }
    }

    pub fn wedge(&self, f: &Field, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        let n = self.n;
        if self.grade + other.grade > n {
            return Err(Error::GradeOverflow {
                left: self.grade,
                right: other.grade,
                n,
            });
        }
        let left = lex_subsets(n, self.grade);
        let right = lex_subsets(n, other.grade);
        let mut out = Self::zero(n, self.grade + other.grade);
        for (&a, &i) in self.coords.iter().zip(&left) {
            if a == 0 {
                continue;
            }
            for (&b, &j) in other.coords.iter().zip(&right) {
                if b == 0 || i & j != 0 {
                    continue;
                }
                let mut term = f.mul(a, b);
                if shuffle_sign_parity(i, j) == 1 {
                    term = f.neg(term);
                }
                let slot = &mut out.coords[subset_rank(n, i | j)];
                *slot = f.add(*slot, term);
            }
        }
        Ok(out)
    }

    /// Induced bilinear form: `e_I · e_J = δ_{IJ}`, which on decomposables is
    /// `det(u_i · v_j)`.
    pub fn grade_form(&self, f: &Field, other: &Self) -> Elem {
        assert_eq!((self.n, self.grade), (other.n, other.grade));
        f.dot(&self.coords, &other.coords)
    }

    /// Star operator `∧^{n-k} → ∧^k`, `*(e_I) = sign(I, I^c) e_{I^c}`.
    pub fn star(&self, f: &Field) -> Self {
        let n = self.n;
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut out = Self::zero(n, n - self.grade);
        for (&a, &i) in self.coords.iter().zip(&lex_subsets(n, self.grade)) {
            if a == 0 {
                continue;
            }
            let comp = full & !i;
            let val = if shuffle_sign_parity(i, comp) == 1 {
                f.neg(a)
            } else {
                a
            };
            out.coords[subset_rank(n, comp)] = val;
        }
        out
    }

    pub fn to_record(&self) -> WedgeRecord {
        let coords = self
            .coords
            .iter()
            .zip(lex_subsets(self.n, self.grade))
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| (subset_label(m), c))
            .collect();
        WedgeRecord {
            n: self.n,
            grade: self.grade,
            coords,
        }
    }

    pub fn from_record(rec: &WedgeRecord, f: &Field) -> Result<Self> {
        let mut w = Self::zero(rec.n, rec.grade);
        for (label, &c) in &rec.coords {
            let inner = label
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad subset label {label:?}")))?;
            let mut mask = 0u32;
            for tok in inner.split(',').filter(|t| !t.is_empty()) {
                let i: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index {tok:?}")))?;
                if i == 0 || i > rec.n {
                    return Err(Error::Parse(format!("index {i} out of range")));
                }
                mask |= 1 << (i - 1);
            }
            if mask.count_ones() as usize != rec.grade {
                return Err(Error::Parse(format!("subset {label} has wrong size")));
            }
            if c as u32 >= f.q() {
                return Err(Error::Parse(format!("element {c} not in F_{}", f.q())));
            }
            w.coords[subset_rank(rec.n, mask)] = c;
        }
        Ok(w)
    }
}

/// JSON form `{"n":…, "grade":…, "coords": {"[i,j,...]": elem, …}}`, listing
/// nonzero coordinates with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeRecord {
    pub n: usize,
    pub grade: usize,
    pub coords: BTreeMap<String, Elem>,
}

/// Wedges of the `k`-subsets of the canonical basis of `u`, in ambient
/// coordinates. Empty when `k > dim u`.
pub fn wedge_basis_of_subspace(f: &Field, u: &Subspace, k: usize) -> Vec<WedgeVector> {
    let rows: Vec<Vec<Elem>> = u.basis_rows().map(|r| r.to_vec()).collect();
    lex_subsets(rows.len(), k)
        .into_iter()
        .map(|mask| {
            let chosen: Vec<Vec<Elem>> = (0..rows.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| rows[i].clone())
                .collect();
            WedgeVector::decomposable(f, u.ambient(), &chosen)
        })
        .collect()
}

/// `∧^k u` as a subspace of `∧^k F_q^n`.
pub fn wedge_power(f: &Field, u: &Subspace, k: usize) -> Subspace {
    let n = binomial(u.ambient(), k);
    let rows: Vec<Vec<Elem>> = wedge_basis_of_subspace(f, u, k)
        .into_iter()
        .map(WedgeVector::into_coords)
        .collect();
    Subspace::span(f, n, &rows)
}

/// The unique `w ∈ ⟨u_1..u_{n-1}⟩^⊥` with `w · e_n = 1`.
pub fn w_vector(f: &Field, us: &[Vec<Elem>]) -> Result<Vec<Elem>> {
    let n = us.first().map(|u| u.len()).unwrap_or(1);
    if us.len() + 1 != n || us.iter().any(|u| u.len() != n) {
        return Err(Error::DegenerateInput(format!(
            "need n-1 vectors of length n, got {}",
            us.len()
        )));
    }
    let m = Matrix::from_rows(n, us);
    let ker = m.kernel_basis(f);
    if ker.rows() != 1 {
        return Err(Error::DegenerateInput(
            "vectors are linearly dependent".into(),
        ));
    }
    let w0 = ker.row(0);
    let last = w0[n - 1];
    if last == 0 {
        return Err(Error::DegenerateInput("e_n lies in the span".into()));
    }
    Ok(f.scale(f.inv(last), w0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, i: usize) -> WedgeVector {
        WedgeVector::basis(n, 1 << (i - 1))
    }

    fn det(f: &Field, m: &Matrix) -> Elem {
        // cofactor expansion, small sizes only
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for c in 0..n {
            let minor_rows: Vec<Vec<Elem>> = (1..n)
                .map(|r| (0..n).filter(|&k| k != c).map(|k| m.get(r, k)).collect())
                .collect();
            let minor = Matrix::from_rows(n - 1, &minor_rows);
            let term = f.mul(m.get(0, c), det(f, &minor));
            acc = if c % 2 == 0 {
                f.add(acc, term)
            } else {
                f.sub(acc, term)
            };
        }
        acc
    }

    #[test]
    fn lex_order_and_rank() {
        assert_eq!(
            lex_subsets(4, 2),
            vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]
        );
        for n in 0..7 {
            for k in 0..=n {
                for (i, &m) in lex_subsets(n, k).iter().enumerate() {
                    assert_eq!(subset_rank(n, m), i);
                }
            }
        }
    }

    #[test]
    fn wedge_examples() {
        let f = Field::new(3).unwrap();
        let e12 = WedgeVector::basis(3, 0b011);
        assert_eq!(e(3, 1).wedge(&f, &e(3, 2)).unwrap(), e12);
        assert_eq!(
            e(3, 2).wedge(&f, &e(3, 1)).unwrap(),
            e12.scale(&f, f.neg(1))
        );
        let s = e(3, 1).add(&f, &e(3, 2));
        assert!(s.wedge(&f, &s).unwrap().is_zero());
        assert!(matches!(
            e12.wedge(&f, &e12),
            Err(Error::GradeOverflow {
                left: 2,
                right: 2,
                n: 3
            })
        ));
    }

    #[test]
    fn grade_form_examples() {
        let f = Field::new(2).unwrap();
        let a = WedgeVector::basis(3, 0b011);
        let b = WedgeVector::basis(3, 0b101);
        assert_eq!(a.grade_form(&f, &a), 1);
        assert_eq!(a.grade_form(&f, &b), 0);
    }

    #[test]
    fn grade_form_is_gram_determinant_on_decomposables() {
        for q in [2u64, 3, 5, 9] {
            let f = Field::new(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q + 100);
            for _ in 0..100 {
                let n = rng.gen_range(1..=5);
                let p = rng.gen_range(0..=n);
                let rand_vecs = |rng: &mut ChaCha8Rng| -> Vec<Vec<Elem>> {
                    (0..p)
                        .map(|_| (0..n).map(|_| rng.gen_range(0..f.q()) as Elem).collect())
                        .collect()
                };
                let us = rand_vecs(&mut rng);
                let vs = rand_vecs(&mut rng);
                let mut gram = Matrix::zeros(p, p);
                for i in 0..p {
                    for j in 0..p {
                        gram.set(i, j, f.dot(&us[i], &vs[j]));
                    }
                }
                let a = WedgeVector::decomposable(&f, n, &us);
                let b = WedgeVector::decomposable(&f, n, &vs);
                assert_eq!(a.grade_form(&f, &b), det(&f, &gram));
            }
        }
    }

    #[test]
    fn star_examples() {
        let f = Field::new(5).unwrap();
        assert_eq!(e(3, 1).star(&f), WedgeVector::basis(3, 0b110));
        // permutation (2,1,3) has one inversion
        assert_eq!(shuffle_sign_parity(0b010, 0b101), 1);
        assert_eq!(
            e(3, 2).star(&f),
            WedgeVector::basis(3, 0b101).scale(&f, f.neg(1))
        );
    }

    #[test]
    fn star_defining_identity_f3_n4() {
        let f = Field::new(3).unwrap();
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vol = WedgeVector::volume(n);
        for _ in 0..200 {
            let k = rng.gen_range(0..=n);
            let rand_w = |g: usize, rng: &mut ChaCha8Rng| {
                WedgeVector::from_coords(
                    n,
                    g,
                    (0..binomial(n, g))
                        .map(|_| rng.gen_range(0..3) as Elem)
                        .collect(),
                )
            };
            let alpha = rand_w(n - k, &mut rng);
            let beta = rand_w(k, &mut rng);
            let lhs = alpha.star(&f).grade_form(&f, &beta);
            let rhs = vol.grade_form(&f, &alpha.wedge(&f, &beta).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn star_squared_is_constant_sign() {
        for q in [3u64, 5, 7] {
            let f = Field::new(q).unwrap();
            for n in 1..=5 {
                for k in 0..=n {
                    let mut sign = None;
                    for m in lex_subsets(n, n - k) {
                        let a = WedgeVector::basis(n, m);
                        let back = a.star(&f).star(&f);
                        let s = if back == a {
                            1
                        } else {
                            assert_eq!(back, a.scale(&f, f.neg(1)));
                            -1
                        };
                        assert_eq!(*sign.get_or_insert(s), s, "n={n} k={k}");
                    }
                    // empirically (-1)^{k(n-k)}
                    let expected = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(sign, Some(expected));
                }
            }
        }
    }

    #[test]
    fn wedge_basis_examples() {
        let f = Field::new(2).unwrap();
        let u = Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(
            wedge_basis_of_subspace(&f, &u, 2),
            vec![WedgeVector::basis(3, 0b011)]
        );
        let full = Subspace::full(4);
        let units = wedge_basis_of_subspace(&f, &full, 1);
        assert_eq!(units, (1..=4).map(|i| e(4, i)).collect::<Vec<_>>());
        assert!(wedge_basis_of_subspace(&f, &u, 3).is_empty());
    }

    #[test]
    fn wedge_basis_of_random_subspace_is_independent() {
        let f = Field::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = 0;
        while seen < 20 {
            let vs: Vec<Vec<Elem>> = (0..3)
                .map(|_| (0..5).map(|_| rng.gen_range(0..2) as Elem).collect())
                .collect();
            let u = Subspace::span(&f, 5, &vs);
            if u.dim() != 3 {
                continue;
            }
            seen += 1;
            let basis = wedge_basis_of_subspace(&f, &u, 2);
            assert_eq!(basis.len(), 3);
            let m = Matrix::from_rows(
                10,
                &basis
                    .iter()
                    .map(|w| w.coords().to_vec())
                    .collect::<Vec<_>>(),
            );
            assert_eq!(m.rank(&f), 3);
            // star of a basis of U^⊥ (two vectors) is a nonzero element of ∧^3 U
            let perp = u.perp(&f);
            let perp_rows: Vec<Vec<Elem>> = perp.basis_rows().map(|r| r.to_vec()).collect();
            let s = WedgeVector::decomposable(&f, 5, &perp_rows).star(&f);
            assert!(!s.is_zero());
            assert!(wedge_power(&f, &u, 3).contains_vector(&f, s.coords()));
        }
    }

    #[test]
    fn w_vector_examples() {
        let f = Field::new(7).unwrap();
        assert_eq!(
            w_vector(&f, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap(),
            vec![0, 0, 1]
        );
        for r in 0..7 {
            for s in 0..7 {
                for t in 0..7 {
                    let w = w_vector(&f, &[vec![1, r, s], vec![0, 1, t]]).unwrap();
                    let expected = vec![f.sub(f.mul(r, t), s), f.neg(t), 1];
                    assert_eq!(w, expected);
                }
            }
        }
        assert!(matches!(
            w_vector(&f, &[vec![1, 0, 0], vec![0, 0, 1]]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn json_record_round_trip() {
        let f = Field::new(5).unwrap();
        let w = WedgeVector::from_coords(3, 2, vec![1, 0, 4]);
        let rec = w.to_record();
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"n":3,"grade":2,"coords":{"[1,2]":1,"[2,3]":4}}"#
        );
        assert_eq!(WedgeVector::from_record(&rec, &f).unwrap(), w);
    }
}
