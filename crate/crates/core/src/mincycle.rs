//! Minimum-support search over the cycle space `Z_i` of a twisted complex.
//!
//! Weight is the number of simplices carrying a nonzero coefficient block.
//! The exhaustive search walks the projective classes of `Z_i` (first nonzero
//! basis coefficient equal to 1) with a q-ary Gray code, so each step adds a
//! multiple of one basis vector and updates the weight from that vector's
//! support only.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::field::{Elem, Field};
use crate::homology::{TwistedChain, TwistedComplex};
use crate::linalg::Matrix;

pub const DEFAULT_BUDGET: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Exhaustive search runs iff `q^dim Z <= budget`.
    pub budget: u64,
    pub seed: u64,
    /// Random starting points for the descent when not exhaustive.
    pub samples: usize,
    /// Known cycles tried first when not exhaustive.
    pub hints: Vec<TwistedChain>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            seed: 0,
            samples: 256,
            hints: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub degree: isize,
    pub cycle_space_dim: usize,
    /// `None` when `Z_i = 0`.
    pub min_weight: Option<usize>,
    pub witness: Option<TwistedChain>,
    pub exhaustive: bool,
    pub classes_examined: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub length: usize,
    pub dimension: usize,
    pub min_distance: Option<usize>,
    pub exhaustive: bool,
    pub rate: Option<Ratio<u64>>,
    pub relative_distance: Option<Ratio<u64>>,
}

/// Sparse basis vectors plus the simplex block of every coordinate.
struct Space<'a> {
    field: &'a Field,
    basis: Vec<Vec<(usize, Elem)>>,
    block_of: Vec<usize>,
    blocks: usize,
    len: usize,
}

/// A running combination with per-block nonzero counts.
#[derive(Clone)]
struct State {
    acc: Vec<Elem>,
    nonzero: Vec<u32>,
    weight: usize,
}

impl<'a> Space<'a> {
    fn new(field: &'a Field, tc: &TwistedComplex, degree: isize, z: &Matrix) -> Self {
        let sizes = tc
            .group(degree)
            .map(|g| g.block_sizes())
            .unwrap_or_default();
        let block_of: Vec<usize> = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect();
        let basis = z
            .row_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| (i, x))
                    .collect()
            })
            .collect();
        Space {
            field,
            basis,
            block_of,
            blocks: sizes.len(),
            len: z.cols(),
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn zero_state(&self) -> State {
        State {
            acc: vec![0; self.len],
            nonzero: vec![0; self.blocks],
            weight: 0,
        }
    }

    fn add(&self, st: &mut State, c: Elem, j: usize) {
        let f = self.field;
        for &(i, x) in &self.basis[j] {
            let old = st.acc[i];
            let new = f.add(old, f.mul(c, x));
            if (old == 0) == (new == 0) {
                st.acc[i] = new;
                continue;
            }
            st.acc[i] = new;
            let b = self.block_of[i];
            if new == 0 {
                st.nonzero[b] -= 1;
                if st.nonzero[b] == 0 {
                    st.weight -= 1;
                }
            } else {
                if st.nonzero[b] == 0 {
                    st.weight += 1;
                }
                st.nonzero[b] += 1;
            }
        }
    }

    fn state_of(&self, coeffs: &[Elem]) -> State {
        let mut st = self.zero_state();
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                self.add(&mut st, c, j);
            }
        }
        st
    }

    fn weight_of_vector(&self, v: &[Elem]) -> usize {
        let mut hit = vec![false; self.blocks];
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                hit[self.block_of[i]] = true;
            }
        }
        hit.into_iter().filter(|&h| h).count()
    }
}

/// One unit of exhaustive work: lead position and fixed high digits; the
/// low `free` digits after the lead are walked by the Gray code.
struct Task {
    lead: usize,
    high: Vec<Elem>,
    free: usize,
}

fn tasks(q: usize, d: usize) -> Vec<Task> {
    const SPLIT_TARGET: usize = 256;
    let mut out = Vec::new();
    for lead in 0..d {
        let digits = d - 1 - lead;
        let mut fixed = 0;
        while fixed < digits && q.pow(fixed as u32) < SPLIT_TARGET {
            fixed += 1;
        }
        let combos = q.pow(fixed as u32);
        for idx in 0..combos {
            let mut high = vec![0; fixed];
            let mut rem = idx;
            for slot in high.iter_mut().rev() {
                *slot = (rem % q) as Elem;
                rem /= q;
            }
            out.push(Task {
                lead,
                high,
                free: digits - fixed,
            });
        }
    }
    out
}

/// Best `(weight, step, acc)` of one task.
fn run_task(space: &Space, elements: &[Elem], task: &Task) -> (usize, u64, Vec<Elem>) {
    let f = space.field;
    let q = elements.len();
    let mut st = space.zero_state();
    space.add(&mut st, 1, task.lead);
    // fixed digits occupy the positions right after the lead
    for (off, &idx) in task.high.iter().enumerate() {
        let c = elements[idx as usize];
        if c != 0 {
            space.add(&mut st, c, task.lead + 1 + off);
        }
    }
    let low_start = task.lead + 1 + task.high.len();
    let mut digit = vec![0usize; task.free];
    let mut best = (st.weight, 0u64, st.acc.clone());
    let total = (q as u64).pow(task.free as u32);
    for step in 1..total {
        let mut j = 0;
        let mut t = step;
        while t % q as u64 == 0 {
            t /= q as u64;
            j += 1;
        }
        let from = elements[digit[j]];
        digit[j] = (digit[j] + 1) % q;
        let delta = f.sub(elements[digit[j]], from);
        space.add(&mut st, delta, low_start + j);
        if st.weight < best.0 {
            best = (st.weight, step, st.acc.clone());
        }
    }
    best
}

fn exhaustive(space: &Space) -> (usize, Vec<Elem>) {
    let elements: Vec<Elem> = space.field.elements().collect();
    let work = tasks(elements.len(), space.dim());
    work.par_iter()
        .enumerate()
        .map(|(i, task)| {
            let (w, step, acc) = run_task(space, &elements, task);
            (w, i, step, acc)
        })
        .min_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)))
        .map(|(w, _, _, acc)| (w, acc))
        .expect("nonzero cycle space")
}

/// Greedy descent: add `c * b_j` whenever that lowers the weight.
fn descend(space: &Space, mut st: State) -> State {
    let f = space.field;
    loop {
        let mut improved = false;
        for j in 0..space.dim() {
            for c in f.elements().skip(1) {
                let before = st.weight;
                space.add(&mut st, c, j);
                if st.weight > 0 && st.weight < before {
                    improved = true;
                } else {
                    space.add(&mut st, f.neg(c), j);
                }
            }
        }
        if !improved {
            return st;
        }
    }
}

fn heuristic(space: &Space, starts: Vec<Vec<Elem>>, opts: &SearchOptions) -> (usize, Vec<Elem>) {
    let f = space.field;
    let d = space.dim();
    let mut candidates: Vec<(usize, usize, Vec<Elem>)> = starts
        .into_iter()
        .enumerate()
        .map(|(i, acc)| (space.weight_of_vector(&acc), i, acc))
        .collect();
    let offset = candidates.len();
    let found: Vec<(usize, usize, Vec<Elem>)> = (0..opts.samples + d)
        .into_par_iter()
        .filter_map(|i| {
            let coeffs: Vec<Elem> = if i < d {
                (0..d).map(|j| if j == i { 1 } else { 0 }).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
                (0..d).map(|_| rng.gen_range(0..f.q()) as Elem).collect()
            };
            let st = space.state_of(&coeffs);
            if st.weight == 0 {
                return None;
            }
            let st = descend(space, st);
            Some((st.weight, offset + i, st.acc))
        })
        .collect();
    candidates.extend(found);
    candidates
        .into_iter()
        .filter(|c| c.0 > 0)
        .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
        .map(|(w, _, acc)| (w, acc))
        .expect("nonzero cycle space has nonzero basis vectors")
}

/// The smallest support of a nonzero cycle in degree `degree`.
pub fn min_support_cycle(
    tc: &TwistedComplex,
    degree: isize,
    opts: &SearchOptions,
) -> Result<SearchReport> {
    let f = tc.field();
    let z = tc.cycle_basis(degree)?;
    let d = z.rows();
    let q = f.q() as u64;
    if d == 0 {
        return Ok(SearchReport {
            degree,
            cycle_space_dim: 0,
            min_weight: None,
            witness: None,
            exhaustive: true,
            classes_examined: BigUint::zero(),
        });
    }
    let space = Space::new(f, tc, degree, &z);
    let fits = q
        .checked_pow(d as u32)
        .is_some_and(|total| total <= opts.budget);
    let (weight, acc, classes) = if fits {
        let (w, acc) = exhaustive(&space);
        let classes = (BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(q - 1);
        (w, acc, classes)
    } else {
        let starts = opts
            .hints
            .iter()
            .filter(|c| c.degree() == degree && !c.is_zero() && c.is_cycle(f))
            .filter_map(|c| tc.coords_of_chain(c).ok())
            .collect::<Vec<_>>();
        let examined = starts.len() + opts.samples + d;
        let (w, acc) = heuristic(&space, starts, opts);
        (w, acc, BigUint::from(examined))
    };
    Ok(SearchReport {
        degree,
        cycle_space_dim: d,
        min_weight: Some(weight),
        witness: Some(tc.chain_from_coords(degree, &acc)),
        exhaustive: fits,
        classes_examined: classes,
    })
}

/// Length, dimension and minimum distance of the cycle code `Z_i`.
pub fn code_params(tc: &TwistedComplex, degree: isize, opts: &SearchOptions) -> Result<CodeParams> {
    let report = min_support_cycle(tc, degree, opts)?;
    let length = tc.group(degree).map_or(0, |g| g.simplices().len());
    let ratio = |x: usize| (length > 0).then(|| Ratio::new(x as u64, length as u64));
    Ok(CodeParams {
        length,
        dimension: report.cycle_space_dim,
        min_distance: report.min_weight,
        exhaustive: report.exhaustive,
        rate: ratio(report.cycle_space_dim),
        relative_distance: report.min_weight.and_then(ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Building;
    use crate::cycles::{apartment_cycle, default_u, gamma_u};
    use crate::grassmann::Subspace;
    use crate::homology::{lusztig_system, ConstantSystem};

    fn building(q: u64, n: usize) -> Building {
        Building::new(&Field::new(q).unwrap(), n)
    }

    #[test]
    fn gray_tasks_cover_every_class_once() {
        for (q, d) in [(2usize, 5usize), (3, 4), (4, 3)] {
            let total: usize = tasks(q, d).iter().map(|t| q.pow(t.free as u32)).sum();
            assert_eq!(total, (q.pow(d as u32) - 1) / (q - 1));
        }
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        let x = building(3, 3);
        let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, 2), true);
        let f = x.field().clone();
        let z = tc.cycle_basis(0).unwrap();
        let space = Space::new(&f, &tc, 0, &z);
        let d = z.rows();
        let mut best = usize::MAX;
        let mut coeffs = vec![0 as Elem; d];
        loop {
            let mut i = 0;
            while i < d && coeffs[i] == 2 {
                coeffs[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
            coeffs[i] += 1;
            let st = space.state_of(&coeffs);
            best = best.min(st.weight);
        }
        let report = min_support_cycle(&tc, 0, &SearchOptions::default()).unwrap();
        assert_eq!(report.min_weight, Some(best));
        assert_eq!(best, 3);
    }

    #[test]
    fn theorem_cases_small() {
        let x = building(2, 3);
        let opts = SearchOptions::default();
        let plain = TwistedComplex::new(x.field(), &x, &ConstantSystem::scalars(), true);
        let r = min_support_cycle(&plain, 1, &opts).unwrap();
        assert_eq!((r.min_weight, r.exhaustive), (Some(6), true));
        let witness = r.witness.unwrap();
        assert!(witness.is_cycle(x.field()));
        assert_eq!(witness.weight(), 6);

        let k1 = TwistedComplex::lusztig(&x, &lusztig_system(&x, 1), true);
        assert_eq!(
            min_support_cycle(&k1, 1, &opts).unwrap().min_weight,
            Some(12)
        );
        let k2 = TwistedComplex::lusztig(&x, &lusztig_system(&x, 2), true);
        let r = min_support_cycle(&k2, 0, &opts).unwrap();
        assert_eq!((r.min_weight, r.exhaustive), (Some(3), true));
        assert_eq!(r.classes_examined, BigUint::from(15u32));
    }

    #[test]
    fn deterministic_witness() {
        let x = building(3, 3);
        let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, 2), true);
        let a = min_support_cycle(&tc, 0, &SearchOptions::default()).unwrap();
        let b = min_support_cycle(&tc, 0, &SearchOptions::default()).unwrap();
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn heuristic_respects_hints() {
        let x = building(2, 3);
        let f = x.field().clone();
        let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, 1), true);
        let gamma = gamma_u(&x, &default_u(&f, 3, 1), 1).unwrap();
        let opts = SearchOptions {
            budget: 1,
            samples: 0,
            hints: vec![gamma.clone()],
            ..Default::default()
        };
        let r = min_support_cycle(&tc, 1, &opts).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.min_weight, Some(12));

        let plain = TwistedComplex::new(&f, &x, &ConstantSystem::scalars(), true);
        let frame: Vec<Subspace> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| Subspace::span(&f, 3, &[v]))
            .collect();
        let z = apartment_cycle(&x, &frame).unwrap();
        let opts = SearchOptions {
            budget: 1,
            samples: 8,
            hints: vec![z],
            ..Default::default()
        };
        assert_eq!(
            min_support_cycle(&plain, 1, &opts).unwrap().min_weight,
            Some(6)
        );
    }

    #[test]
    fn code_parameters() {
        let x = building(2, 3);
        let opts = SearchOptions::default();
        let plain = TwistedComplex::new(x.field(), &x, &ConstantSystem::scalars(), true);
        let p = code_params(&plain, 1, &opts).unwrap();
        assert_eq!((p.length, p.dimension, p.min_distance), (21, 8, Some(6)));
        assert_eq!(p.rate, Some(Ratio::new(8, 21)));
        assert_eq!(p.relative_distance, Some(Ratio::new(6, 21)));
        let k1 = TwistedComplex::lusztig(&x, &lusztig_system(&x, 1), true);
        let p = code_params(&k1, 1, &opts).unwrap();
        assert_eq!((p.length, p.dimension, p.min_distance), (21, 3, Some(12)));
        for q in [2u64, 3, 4, 5] {
            let y = building(q, 2);
            let tc = TwistedComplex::lusztig(&y, &lusztig_system(&y, 1), true);
            let p = code_params(&tc, 0, &opts).unwrap();
            let q = q as usize;
            assert_eq!(
                (p.length, p.dimension, p.min_distance),
                (q + 1, q - 1, Some(3))
            );
        }
    }
}
