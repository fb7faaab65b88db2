//! Named theorem checks at desk scale, run concurrently and reported in
//! name order.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complexes::Building;
use crate::cycles::{apartment_cycle, d1_basis, default_u, dn1_basis, gamma_u};
use crate::exterior::WedgeVector;
use crate::field::{Elem, Field};
use crate::formulas::{default_points, formula_grid, q_identity_checks, DimReport};
use crate::grassmann::Subspace;
use crate::homology::{
    homology_dim, lusztig_system, simplex_intersection_system, ConstantSystem, TwistedChain,
    TwistedComplex,
};
use crate::linalg::Matrix;
use crate::mincycle::{min_support_cycle, SearchOptions, DEFAULT_BUDGET};

/// The `(n, q)` pairs every theorem is checked on.
pub const GRID: [(usize, u64); 5] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub theorem: &'static str,
    pub passed: bool,
    pub exhaustive: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: String, theorem: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            theorem,
            passed,
            exhaustive: true,
            detail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub max_n: usize,
    /// Restrict the grid to one field size.
    pub q: Option<u64>,
    pub seed: u64,
    pub budget: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 4,
            q: None,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn grid(cfg: &VerifyConfig) -> Vec<(usize, u64)> {
    GRID.iter()
        .copied()
        .filter(|&(n, q)| n <= cfg.max_n && cfg.q.is_none_or(|p| p == q))
        .collect()
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

fn chain_rank(tc: &TwistedComplex, degree: isize, chains: &[TwistedChain]) -> Option<usize> {
    let rows: Vec<Vec<Elem>> = chains
        .iter()
        .map(|c| tc.coords_of_chain(c).ok())
        .collect::<Option<_>>()?;
    Some(Matrix::from_rows(tc.chain_dim(degree), &rows).rank(tc.field()))
}

fn tag(n: usize, q: u64) -> String {
    format!("n{n}_q{q}")
}

fn untwisted_checks(x: &Building, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let f = x.field();
    let n = x.n();
    let q = f.q() as u64;
    let top = n as isize - 2;
    let tc = TwistedComplex::new(f, x, &ConstantSystem::scalars(), true);
    let mut out = Vec::new();

    let expected_top = q.pow((n * (n - 1) / 2) as u32) as usize;
    let dims = tc.homology_dims();
    let ok = dims.as_ref().is_ok_and(|d| {
        d.iter()
            .all(|(&i, &h)| h == if i == top { expected_top } else { 0 })
    });
    out.push(CheckResult::new(
        format!("solomon_tits/{}", tag(n, q)),
        "Solomon-Tits: reduced homology of X_V",
        ok,
        format!("{dims:?}, expected top {expected_top}"),
    ));

    let ok = (0..=top + 1).all(|d| {
        let (lo, hi) = (tc.boundary_matrix(d - 1), tc.boundary_matrix(d));
        matches!((lo, hi), (Ok(a), Ok(b)) if a.mul(f, &b).is_zero())
    });
    out.push(CheckResult::new(
        format!("boundary_squared/{}/untwisted", tag(n, q)),
        "chain complex",
        ok,
        String::new(),
    ));

    let frame: Vec<Subspace> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            Subspace::span(f, n, &[v])
        })
        .collect();
    if let Ok(z) = apartment_cycle(x, &frame) {
        let opts = SearchOptions {
            budget: cfg.budget,
            seed: cfg.seed,
            hints: vec![z.clone()],
            ..Default::default()
        };
        let report = min_support_cycle(&tc, top, &opts);
        let want = factorial(n);
        let (ok, exhaustive, detail) = match &report {
            Ok(r) => {
                let w = r.min_weight.unwrap_or(0);
                let ok = z.is_cycle(f)
                    && z.weight() == want
                    && if r.exhaustive { w == want } else { w <= want };
                (
                    ok,
                    r.exhaustive,
                    format!("min_weight {w}, z_B weight {}", z.weight()),
                )
            }
            Err(e) => (false, false, e.to_string()),
        };
        out.push(CheckResult {
            name: format!("smith_yoshiara/{}", tag(n, q)),
            theorem: "Smith-Yoshiara: minimal untwisted cycle support n!",
            passed: ok,
            exhaustive,
            detail,
        });
    }
    out
}

fn twisted_checks(x: &Building, k: usize, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let f = x.field();
    let n = x.n();
    let q = f.q() as u64;
    let live = n as isize - k as isize - 1;
    let sys = lusztig_system(x, k);
    let tc = TwistedComplex::lusztig(x, &sys, true);
    let name = |family: &str| format!("{family}/{}/k{k}", tag(n, q));
    let mut out = Vec::new();

    let dims = tc.homology_dims();
    let ok = dims
        .as_ref()
        .is_ok_and(|d| d.iter().all(|(&i, &h)| i == live || h == 0));
    out.push(CheckResult::new(
        name("lusztig_dupont"),
        "Lusztig-Dupont: twisted homology vanishing",
        ok,
        format!("{dims:?}"),
    ));

    let rank = dims
        .as_ref()
        .ok()
        .and_then(|d| d.get(&live).copied())
        .unwrap_or(0);
    let report = DimReport::new(n, k, q).with_rank(rank);
    out.push(CheckResult::new(
        name("dimension_formula"),
        "dimension of D^k: computed rank = closed forms",
        report.all_agree(),
        format!(
            "rank {rank}, product sum {}, alternating {}",
            report.product_sum, report.alternating_sum
        ),
    ));

    let ok = (0..=tc.top_degree() + 1).all(|d| {
        matches!((tc.boundary_matrix(d - 1), tc.boundary_matrix(d)), (Ok(a), Ok(b)) if a.mul(f, &b).is_zero())
    });
    let pruned_zero = tc.chain_dim(live + 1) == 0;
    out.push(CheckResult::new(
        name("boundary_squared"),
        "chain complex",
        ok && pruned_zero,
        format!(
            "C_{} after pruning has dim {}",
            live + 1,
            tc.chain_dim(live + 1)
        ),
    ));

    let us = default_u(f, n, k);
    let gamma = gamma_u(x, &us, k);
    let want = factorial(n - k + 2) / 2;
    let (ok, detail) = match &gamma {
        Ok(g) => (
            g.weight() == want && g.is_cycle(f) && g.check_values(f, &sys).is_ok(),
            format!("support {} expected {want}", g.weight()),
        ),
        Err(e) => (false, e.to_string()),
    };
    out.push(CheckResult::new(
        name("gamma_u"),
        "gamma_u cycle with support (n-k+2)!/2",
        ok,
        detail,
    ));

    let hints = gamma.ok().into_iter().collect();
    let opts = SearchOptions {
        budget: cfg.budget,
        seed: cfg.seed,
        hints,
        ..Default::default()
    };
    let (ok, exhaustive, detail) = match min_support_cycle(&tc, live, &opts) {
        Ok(r) => {
            let w = r.min_weight.unwrap_or(0);
            let ok = if r.exhaustive { w == want } else { w <= want };
            (
                ok,
                r.exhaustive,
                format!(
                    "min_weight {w} expected {want}, dim Z {}",
                    r.cycle_space_dim
                ),
            )
        }
        Err(e) => (false, false, e.to_string()),
    };
    out.push(CheckResult {
        name: name("min_support"),
        theorem: "minimal twisted cycle support (n-k+2)!/2",
        passed: ok,
        exhaustive,
        detail,
    });

    if k == 1 {
        let expected: usize = (1..n).map(|i| q.pow(i as u32) as usize - 1).product();
        let (ok, detail) = match d1_basis(x) {
            Ok(basis) => {
                let chains: Vec<TwistedChain> = basis.into_iter().map(|(_, c)| c).collect();
                let cycles = chains.iter().all(|c| c.is_cycle(f));
                let r = chain_rank(&tc, live, &chains);
                (
                    cycles && r == Some(expected) && chains.len() == expected,
                    format!("rank {r:?} expected {expected}"),
                )
            }
            Err(e) => (false, e.to_string()),
        };
        out.push(CheckResult::new(
            name("d1_basis"),
            "basis of D^1 by pushed-forward octahedral cycles",
            ok,
            detail,
        ));
    }
    if k == n - 1 {
        let expected: usize = (2..=n).map(|i| q.pow(i as u32 - 1) as usize - 1).sum();
        let chains: Vec<TwistedChain> = dn1_basis(x).into_iter().map(|(_, _, z)| z).collect();
        let cycles = chains.iter().all(|c| c.is_cycle(f));
        let r = chain_rank(&tc, 0, &chains);
        out.push(CheckResult::new(
            name("dn1_basis"),
            "basis of D^(n-1) by z_(u,i)",
            cycles && r == Some(expected),
            format!("rank {r:?} expected {expected}"),
        ));
    }
    out
}

fn formula_checks() -> Vec<CheckResult> {
    let grid = formula_grid(8, &[2, 3, 4, 5]);
    let bad: Vec<String> = grid
        .iter()
        .filter(|r| !r.formulas_agree())
        .map(|r| format!("({},{},{})", r.n, r.k, r.q))
        .collect();
    let ids = (1..=8).all(|n| {
        [2u64, 3, 4, 5]
            .iter()
            .all(|&q| q_identity_checks(n, q, &default_points(n)) == Ok(true))
    });
    vec![
        CheckResult::new(
            "formulas/grid".into(),
            "dimension formula: product sum = alternating sum",
            bad.is_empty(),
            format!("{} cells, mismatches {bad:?}", grid.len()),
        ),
        CheckResult::new(
            "formulas/q_identities".into(),
            "q-binomial identities",
            ids,
            "n <= 8, q <= 5".into(),
        ),
    ]
}

fn simplex_vanishing(seed: u64, instances: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for idx in 0..instances {
        let f = Field::new([2u64, 3][rng.gen_range(0..2)]).expect("prime");
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
        let (delta, sys) = simplex_intersection_system(&f, &spaces).expect("common ambient");
        for d in (r as isize - 2)..=(r as isize - 1) {
            if homology_dim(&f, &delta, &sys, d, true) != Ok(0) {
                failures.push(idx);
            }
        }
    }
    CheckResult::new(
        "simplex_vanishing".into(),
        "intersection systems on a simplex are acyclic",
        failures.is_empty(),
        format!("{instances} instances, seed {seed}, failures {failures:?}"),
    )
}

fn star_suite(seed: u64, pairs: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for q in [2u64, 3, 4, 5] {
        let f = Field::new(q).expect("supported");
        for n in 1..=5usize {
            for _ in 0..pairs {
                let k = rng.gen_range(0..=n);
                let rand_wedge = |rng: &mut ChaCha8Rng, g: usize| {
                    let len = crate::exterior::binomial(n, g);
                    WedgeVector::from_coords(
                        n,
                        g,
                        (0..len).map(|_| rng.gen_range(0..q) as Elem).collect(),
                    )
                };
                let alpha = rand_wedge(&mut rng, n - k);
                let beta = rand_wedge(&mut rng, k);
                let lhs = alpha.star(&f).grade_form(&f, &beta);
                let rhs = WedgeVector::volume(n)
                    .grade_form(&f, &alpha.wedge(&f, &beta).expect("grades fit"));
                ok &= lhs == rhs;
            }
        }
    }
    CheckResult::new(
        "star_identity".into(),
        "star operator definition",
        ok,
        format!("{pairs} pairs per (n, q), seed {seed}"),
    )
}

/// Runs every check on the filtered grid.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    type Job = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;
    let mut jobs: Vec<Job> = Vec::new();
    for (n, q) in grid(cfg) {
        let x = Arc::new(Building::new(
            &Field::new(q).expect("grid fields are supported"),
            n,
        ));
        let c = cfg.clone();
        let xc = Arc::clone(&x);
        jobs.push(Box::new(move || untwisted_checks(&xc, &c)));
        for k in 1..n {
            let c = cfg.clone();
            let xc = Arc::clone(&x);
            jobs.push(Box::new(move || twisted_checks(&xc, k, &c)));
        }
    }
    jobs.push(Box::new(formula_checks));
    let seed = cfg.seed;
    jobs.push(Box::new(move || vec![simplex_vanishing(seed, 100)]));
    jobs.push(Box::new(move || vec![star_suite(seed, 200)]));
    let mut results: Vec<CheckResult> = jobs.par_iter().flat_map(|job| job()).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}
