use itertools::Itertools;
use rayon::prelude::*;

use super::{chi_parity, TSequence};
use crate::complexes::{a_eps, a_eps_j, Building, FvMap, Simplex, SubdividedK};
use crate::error::{Error, Result};
use crate::exterior::w_vector;
use crate::field::{Elem, Field};
use crate::grassmann::Subspace;
use crate::homology::{lusztig_system, PullbackSystem, TwistedChain};

fn permuted<T: Copy>(xs: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&p| xs[p]).collect()
}

/// `c_v ∈ C_{n-2}(sd(K); 𝔥_v)` without the membership check.
fn raw_cv(f: &Field, sdk: &SubdividedK, v: &TSequence) -> Result<TwistedChain> {
    let n = v.n();
    let mut chain = TwistedChain::zero(n as isize - 2, n);
    let w = |us: Vec<Vec<Elem>>| w_vector(f, &us);
    for eps in (0..n - 1).map(|_| [0u8, 1]).multi_cartesian_product() {
        let w_eps = w(v.v_eps(&eps))?;
        for perm in (0..n - 1).permutations(n - 1) {
            let sign = f.sign(chi_parity(&eps, &perm));
            chain.add_term(
                f,
                sdk.s_of(&permuted(&a_eps(&eps), &perm)),
                &f.scale(sign, &w_eps),
            );
            for j in 1..n {
                if eps[j - 1] != 0 {
                    continue;
                }
                let mut raised = eps.clone();
                raised[j - 1] = 1;
                let mut diff = w(v.v_eps(&raised))?;
                f.axpy(&mut diff, f.neg(1), &w_eps);
                chain.add_term(
                    f,
                    sdk.s_of(&permuted(&a_eps_j(&eps, j), &perm)),
                    &f.scale(sign, &diff),
                );
            }
        }
    }
    Ok(chain)
}

/// `c_v` on `sd(K)`, with every coefficient checked against `𝔥_v = f_v^{-1} 𝔤`.
pub fn cv_chain(building: &Building, sdk: &SubdividedK, v: &TSequence) -> Result<TwistedChain> {
    let map = FvMap::new(building, sdk, v)?;
    cv_with_map(building, sdk, v, &map)
}

fn cv_with_map(
    building: &Building,
    sdk: &SubdividedK,
    v: &TSequence,
    map: &FvMap,
) -> Result<TwistedChain> {
    let f = building.field();
    let chain = raw_cv(f, sdk, v)?;
    let g = lusztig_system(building, 1);
    chain.check_values(f, &PullbackSystem::new(map, &g))?;
    Ok(chain)
}

/// `(f_v)_* c`: coefficients of simplices with the same image are summed.
pub fn push_forward(f: &Field, chain: &TwistedChain, map: &FvMap) -> Result<TwistedChain> {
    let mut out = TwistedChain::zero(chain.degree(), chain.coeff_dim());
    for (s, c) in chain.terms() {
        out.add_term(f, map.image(s)?, c);
    }
    Ok(out)
}

/// `c̃_v = (f_v)_* c_v ∈ C_{n-2}(X_V; 𝔤)`.
pub fn d1_cycle(building: &Building, sdk: &SubdividedK, v: &TSequence) -> Result<TwistedChain> {
    let map = FvMap::new(building, sdk, v)?;
    let cv = cv_with_map(building, sdk, v, &map)?;
    push_forward(building.field(), &cv, &map)
}

/// `{c̃_v : v ∈ T_{q,n}}` in enumeration order of `T_{q,n}`.
pub fn d1_basis(building: &Building) -> Result<Vec<(TSequence, TwistedChain)>> {
    let sdk = SubdividedK::new(building.n());
    TSequence::enumerate(building.field(), building.n())
        .into_par_iter()
        .map(|v| {
            let c = d1_cycle(building, &sdk, &v)?;
            Ok((v, c))
        })
        .collect()
}

/// `R(v) = [⟨v_1..v_{n-1}⟩^⊥ ⊂ ... ⊂ ⟨v_1⟩^⊥]`.
pub fn r_simplex(building: &Building, v: &TSequence) -> Result<Simplex> {
    let f = building.field();
    let n = building.n();
    if v.n() != n {
        return Err(Error::AmbientMismatch(v.n(), n));
    }
    Ok((1..n)
        .rev()
        .map(|p| {
            let u = Subspace::span(f, n, &v.vectors()[..p]).perp(f);
            building.vertex_id(&u).expect("v_1..v_p are independent")
        })
        .collect())
}
