//! Closed-form dimension formulas and q-identities, evaluated exactly over
//! the integers and rationals.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::binomial;
use crate::grassmann::gauss_binomial;

fn pow_int(q: u64, e: usize) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

fn sign(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn binom2(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// `Σ_{1 <= α_1 < ... < α_{n-k} <= n-1} Π_j (q^{α_j} − 1)`.
pub fn dim_dk_product_sum(n: usize, k: usize, q: u64) -> BigUint {
    assert!(1 <= k && k < n);
    (1..n)
        .combinations(n - k)
        .map(|alphas| {
            alphas
                .iter()
                .map(|&a| BigUint::from(q).pow(a as u32) - 1u32)
                .product::<BigUint>()
        })
        .sum()
}

/// `Σ_{j=k}^n (−1)^{j−k} C(j,k) q^{C(n−j,2)} [n j]_q`.
pub fn dim_dk_alternating(n: usize, k: usize, q: u64) -> BigUint {
    assert!(1 <= k && k < n);
    let total: BigInt = (k..=n)
        .map(|j| {
            sign(j - k)
                * BigInt::from(binomial(j, k))
                * pow_int(q, binom2(n - j))
                * BigInt::from(gauss_binomial(n, j, q))
        })
        .sum();
    total.to_biguint().expect("alternating sum is a dimension")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub n: usize,
    pub q: u64,
    pub k: usize,
    pub product_sum: BigUint,
    pub alternating_sum: BigUint,
    pub computed_rank: Option<usize>,
}

impl DimReport {
    pub fn new(n: usize, k: usize, q: u64) -> Self {
        DimReport {
            n,
            q,
            k,
            product_sum: dim_dk_product_sum(n, k, q),
            alternating_sum: dim_dk_alternating(n, k, q),
            computed_rank: None,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.computed_rank = Some(rank);
        self
    }

    pub fn formulas_agree(&self) -> bool {
        self.product_sum == self.alternating_sum
    }

    pub fn all_agree(&self) -> bool {
        self.formulas_agree()
            && self
                .computed_rank
                .is_none_or(|r| BigUint::from(r) == self.product_sum)
    }
}

/// Every `(n, k, q)` with `2 <= n <= max_n`, `1 <= k < n`, `q ∈ qs`.
pub fn formula_grid(max_n: usize, qs: &[u64]) -> Vec<DimReport> {
    let cells: Vec<(usize, usize, u64)> = (2..=max_n)
        .flat_map(|n| (1..n).flat_map(move |k| qs.iter().map(move |&q| (n, k, q))))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, k, q)| DimReport::new(n, k, q))
        .collect()
}

/// `Π_{j<n} (1 + q^j λ) = Σ_j q^{C(j,2)} [n j]_q λ^j`.
pub fn q_binomial_identity(n: usize, q: u64, lambda: i64) -> bool {
    let l = BigInt::from(lambda);
    let lhs: BigInt = (0..n).map(|j| BigInt::one() + pow_int(q, j) * &l).product();
    let rhs: BigInt = (0..=n)
        .map(|j| pow_int(q, binom2(j)) * BigInt::from(gauss_binomial(n, j, q)) * l.pow(j as u32))
        .sum();
    lhs == rhs
}

/// `Π_{j<n} (t − q^j) = Σ_j (−1)^j q^{C(j,2)} [n j]_q t^{n−j}`.
pub fn product_identity(n: usize, q: u64, t: i64) -> bool {
    let t = BigInt::from(t);
    let lhs: BigInt = (0..n).map(|j| &t - pow_int(q, j)).product();
    let rhs: BigInt = (0..=n)
        .map(|j| {
            sign(j)
                * pow_int(q, binom2(j))
                * BigInt::from(gauss_binomial(n, j, q))
                * t.pow((n - j) as u32)
        })
        .sum();
    lhs == rhs
}

/// `Π_j (q^j − t) · Σ_{|A|=k} Π_{α∈A} 1/(q^α − t)` with the denominators
/// cleared: `Σ_{|A|=k} Π_{j∉A} (q^j − t)`.
pub fn derivative_lhs_cleared(n: usize, q: u64, k: usize, t: i64) -> BigInt {
    let t = BigInt::from(t);
    (0..n)
        .combinations(k)
        .map(|subset| {
            (0..n)
                .filter(|j| !subset.contains(j))
                .map(|j| pow_int(q, j) - &t)
                .product::<BigInt>()
        })
        .sum()
}

/// The same left side in its rational form; fails at `t = q^j`.
pub fn derivative_lhs_rational(n: usize, q: u64, k: usize, t: i64) -> Result<BigRational> {
    let tt = BigInt::from(t);
    let diffs: Vec<BigInt> = (0..n).map(|j| pow_int(q, j) - &tt).collect();
    if diffs.iter().any(Zero::is_zero) {
        return Err(Error::PoleHit(t));
    }
    let prod: BigInt = diffs.iter().product();
    let sum: BigRational = (0..n)
        .combinations(k)
        .map(|subset| {
            subset.iter().fold(BigRational::one(), |acc, &a| {
                acc / BigRational::from(diffs[a].clone())
            })
        })
        .sum();
    Ok(BigRational::from(prod) * sum)
}

/// `Σ_j (−1)^{n−k+j} C(n−j,k) q^{C(j,2)} [n j]_q t^{n−j−k}`.
pub fn derivative_middle(n: usize, q: u64, k: usize, t: i64) -> BigInt {
    let t = BigInt::from(t);
    (0..=n.saturating_sub(k))
        .map(|j| {
            sign(n - k + j)
                * BigInt::from(binomial(n - j, k))
                * pow_int(q, binom2(j))
                * BigInt::from(gauss_binomial(n, j, q))
                * t.pow((n - j - k) as u32)
        })
        .sum()
}

/// `Σ_j (−1)^{j−k} C(j,k) q^{C(n−j,2)} [n j]_q t^{j−k}`.
pub fn derivative_rhs(n: usize, q: u64, k: usize, t: i64) -> BigInt {
    let t = BigInt::from(t);
    (k..=n)
        .map(|j| {
            sign(j - k)
                * BigInt::from(binomial(j, k))
                * pow_int(q, binom2(n - j))
                * BigInt::from(gauss_binomial(n, j, q))
                * t.pow((j - k) as u32)
        })
        .sum()
}

pub fn derivative_identity(n: usize, q: u64, k: usize, t: i64) -> bool {
    let lhs = derivative_lhs_cleared(n, q, k, t);
    lhs == derivative_middle(n, q, k, t) && lhs == derivative_rhs(n, q, k, t)
}

/// All three identities at every sample point, the derivative one for each
/// `k` in `0..=n` in cleared form. Away from poles the rational form is
/// compared too.
pub fn q_identity_checks(n: usize, q: u64, points: &[i64]) -> Result<bool> {
    for &x in points {
        if !q_binomial_identity(n, q, x) || !product_identity(n, q, x) {
            return Ok(false);
        }
        for k in 0..=n {
            if !derivative_identity(n, q, k, x) {
                return Ok(false);
            }
            match derivative_lhs_rational(n, q, k, x) {
                Ok(r) => {
                    if r != BigRational::from(derivative_lhs_cleared(n, q, k, x)) {
                        return Ok(false);
                    }
                }
                Err(Error::PoleHit(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(true)
}

/// The rational form at points that are required to avoid poles.
pub fn rational_identity_checks(n: usize, q: u64, points: &[i64]) -> Result<bool> {
    for &t in points {
        for k in 0..=n {
            let lhs = derivative_lhs_rational(n, q, k, t)?;
            if lhs != BigRational::from(derivative_rhs(n, q, k, t)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Default sample points: `−(n+1) ..= n+1`, more than the degree needs.
pub fn default_points(n: usize) -> Vec<i64> {
    let m = n as i64 + 1;
    (-m..=m).collect()
}

/// At `t = 1` the cleared left side is the product sum and the right side
/// is the alternating sum.
pub fn t_one_specialization(n: usize, k: usize, q: u64) -> bool {
    let lhs = derivative_lhs_cleared(n, q, k, 1);
    let rhs = derivative_rhs(n, q, k, 1);
    !lhs.is_negative()
        && lhs == BigInt::from(dim_dk_product_sum(n, k, q))
        && rhs == BigInt::from(dim_dk_alternating(n, k, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(dim_dk_product_sum(3, 1, 2), BigUint::from(3u32));
        assert_eq!(dim_dk_product_sum(3, 2, 2), BigUint::from(4u32));
        assert_eq!(dim_dk_product_sum(4, 2, 2), BigUint::from(31u32));
        assert_eq!(dim_dk_alternating(3, 1, 2), BigUint::from(3u32));
        assert_eq!(dim_dk_alternating(4, 3, 2), BigUint::from(11u32));
        assert_eq!(dim_dk_alternating(5, 2, 3), dim_dk_product_sum(5, 2, 3));
    }

    #[test]
    fn closed_forms_at_the_ends() {
        for q in 2..=5u64 {
            for n in 2..=8usize {
                let prod: BigUint = (1..n)
                    .map(|i| BigUint::from(q).pow(i as u32) - 1u32)
                    .product();
                assert_eq!(dim_dk_product_sum(n, 1, q), prod);
                let sum: BigUint = (2..=n)
                    .map(|i| BigUint::from(q).pow(i as u32 - 1) - 1u32)
                    .sum();
                assert_eq!(dim_dk_product_sum(n, n - 1, q), sum);
            }
        }
    }

    #[test]
    fn grid_agrees() {
        let grid = formula_grid(8, &[2, 3, 4, 5]);
        assert_eq!(grid.len(), 28 * 4);
        assert!(grid.iter().all(DimReport::formulas_agree));
    }

    #[test]
    fn identities_at_sample_points() {
        assert!(q_identity_checks(3, 2, &[-2, -1, 0, 1, 2]).unwrap());
        assert!(q_binomial_identity(5, 3, 0));
        for n in 1..=8 {
            for q in [2u64, 3, 4, 5] {
                assert!(q_identity_checks(n, q, &default_points(n)).unwrap());
            }
        }
    }

    #[test]
    fn poles_are_reported() {
        assert_eq!(derivative_lhs_rational(3, 2, 1, 4), Err(Error::PoleHit(4)));
        assert_eq!(rational_identity_checks(3, 2, &[1]), Err(Error::PoleHit(1)));
        assert!(rational_identity_checks(3, 2, &[-3, 0, 3, 5]).unwrap());
    }

    #[test]
    fn t_equals_one() {
        for n in 2..=8 {
            for k in 1..n {
                assert!(t_one_specialization(n, k, 2));
                assert!(t_one_specialization(n, k, 3));
            }
        }
    }

    proptest! {
        #[test]
        fn product_sum_equals_alternating(n in 2usize..=8, q in 2u64..=9, k_frac in 0.0f64..1.0) {
            let k = 1 + ((n - 1) as f64 * k_frac) as usize;
            let k = k.min(n - 1);
            prop_assert_eq!(dim_dk_product_sum(n, k, q), dim_dk_alternating(n, k, q));
        }

        #[test]
        fn derivative_identity_random_points(n in 1usize..=6, q in 2u64..=5, t in -50i64..50) {
            for k in 0..=n {
                prop_assert!(derivative_identity(n, q, k, t));
            }
        }
    }
}
