//! Subspaces of F_q^n in canonical (reduced row-echelon) form, lattice
//! operations, Grassmannian enumeration and Gaussian binomials.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::lex_subsets;
use crate::field::{Elem, Field};
use crate::linalg::{decode_digits, encode_digits, Matrix};

/// A linear subspace of F_q^n. The basis is the nonzero part of the RREF of
/// any spanning set, so equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    dim: usize,
    rows: Vec<Elem>,
}

/// Ordered by ambient dimension, then dimension, then the row-major basis
/// entries (the order of the serial strings when `q <= 36`).
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.dim, &self.rows).cmp(&(other.n, other.dim, &other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            dim: 0,
            rows: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            n,
            dim: n,
            rows: Matrix::identity(n).data().to_vec(),
        }
    }

    pub fn span<R: AsRef<[Elem]>>(f: &Field, n: usize, vectors: &[R]) -> Self {
        Self::from_matrix(f, &Matrix::from_rows(n, vectors))
    }

    pub fn from_matrix(f: &Field, m: &Matrix) -> Self {
        let r = m.rref(f);
        let rows = r.matrix.data()[..r.rank * m.cols()].to_vec();
        Subspace {
            n: m.cols(),
            dim: r.rank,
            rows,
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Elem]> {
        // n == 0 only for the zero subspace of F_q^0
        self.rows.chunks(self.n.max(1))
    }

    pub fn basis_row(&self, i: usize) -> &[Elem] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_vec(self.dim, self.n, self.rows.clone())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis_rows()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// `{u : u · s = 0 for all s}` for the standard form `Σ a_i b_i`.
    pub fn perp(&self, f: &Field) -> Subspace {
        if self.dim == 0 {
            return Subspace::full(self.n);
        }
        Subspace::from_matrix(f, &self.basis_matrix().kernel_basis(f))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix(
            f,
            &self.basis_matrix().vstack(&other.basis_matrix()),
        ))
    }

    /// Kernel of the stacked constraint systems of both subspaces.
    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let constraints = self
            .perp(f)
            .basis_matrix()
            .vstack(&other.perp(f).basis_matrix());
        if constraints.rows() == 0 {
            return Ok(Subspace::full(self.n));
        }
        Ok(Subspace::from_matrix(f, &constraints.kernel_basis(f)))
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v ∉ self`.
    pub fn coordinates(&self, f: &Field, v: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(v.len(), self.n);
        let coeffs: Vec<Elem> = self.pivots().iter().map(|&p| v[p]).collect();
        let mut residual = v.to_vec();
        for (c, row) in coeffs.iter().zip(self.basis_rows()) {
            f.axpy(&mut residual, f.neg(*c), row);
        }
        residual.iter().all(|&x| x == 0).then_some(coeffs)
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        self.coordinates(f, v).is_some()
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, f: &Field, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.dim <= self.dim && other.basis_rows().all(|r| self.contains_vector(f, r)))
    }

    /// `"n:q:"` followed by the row-major RREF digit string.
    pub fn serial(&self, q: u32) -> String {
        format!("{}:{}:{}", self.n, q, encode_digits(&self.rows, q))
    }

    pub fn parse(f: &Field, s: &str) -> Result<Subspace> {
        let mut parts = s.splitn(3, ':');
        let (Some(n), Some(q), Some(digits)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("bad subspace serial {s:?}")));
        };
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad n in {s:?}")))?;
        let q: u32 = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad q in {s:?}")))?;
        if q != f.q() {
            return Err(Error::Parse(format!(
                "serial is over F_{q}, expected F_{}",
                f.q()
            )));
        }
        let data = decode_digits(digits, q)?;
        if n == 0 || data.len() % n != 0 {
            return Err(Error::Parse(format!("entry count not a multiple of {n}")));
        }
        let m = Matrix::from_vec(data.len() / n, n, data);
        let sub = Subspace::from_matrix(f, &m);
        if sub.basis_matrix() != m {
            return Err(Error::Parse(format!("{s:?} is not in canonical form")));
        }
        Ok(sub)
    }
}

/// All `j`-dimensional subspaces of F_q^n, by pivot pattern (lexicographic)
/// and then free entries (odometer order).
pub fn enumerate_grassmannian(f: &Field, n: usize, j: usize) -> Vec<Subspace> {
    let q = f.q() as Elem;
    let mut out = Vec::new();
    for pattern in lex_subsets(n, j) {
        let pivots: Vec<usize> = (0..n).filter(|c| pattern & (1 << c) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                (p + 1..n)
                    .filter(move |c| pattern & (1 << c) == 0)
                    .map(move |c| (r, c))
            })
            .collect();
        let mut base = vec![0; j * n];
        for (r, &p) in pivots.iter().enumerate() {
            base[r * n + p] = 1;
        }
        let mut digits = vec![0 as Elem; free.len()];
        loop {
            let mut rows = base.clone();
            for (&(r, c), &d) in free.iter().zip(&digits) {
                rows[r * n + c] = d;
            }
            out.push(Subspace { n, dim: j, rows });
            let Some(pos) = digits.iter().position(|&d| d + 1 < q) else {
                break;
            };
            digits[pos] += 1;
            for d in digits[..pos].iter_mut() {
                *d = 0;
            }
        }
    }
    out
}

/// Gaussian binomial `[n choose j]_q`, zero outside `0 <= j <= n`.
pub fn gauss_binomial(n: usize, j: usize, q: u64) -> BigUint {
    if j > n {
        return BigUint::ZERO;
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..j {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((j - i) as u32) - 1u32;
    }
    num / den
}
