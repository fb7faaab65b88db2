use building_homology::complexes::{Building, Complex};
use building_homology::exterior::{binomial, WedgeVector};
use building_homology::homology::{
    check_monotone, lusztig_system, simplex_intersection_system, ConstantSystem, TwistedComplex,
};
use building_homology::{Elem, Field, Subspace};
use proptest::prelude::*;

const QS: [u64; 6] = [2, 3, 4, 5, 7, 8];

fn field_and_vectors(
    max_n: usize,
    max_rows: usize,
) -> impl Strategy<Value = (Field, usize, Vec<Vec<Elem>>)> {
    (0..QS.len(), 1..=max_n, 0..=max_rows, any::<u64>()).prop_map(|(qi, n, rows, seed)| {
        let f = Field::new(QS[qi]).unwrap();
        let q = f.q() as u64;
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 33) % q) as Elem
        };
        let vs = (0..rows)
            .map(|_| (0..n).map(|_| next()).collect())
            .collect();
        (f, n, vs)
    })
}

fn wedge_strategy() -> impl Strategy<Value = (Field, WedgeVector)> {
    (
        0..QS.len(),
        1..=6usize,
        0..=6usize,
        prop::collection::vec(any::<u16>(), 64),
    )
        .prop_map(|(qi, n, k, raw)| {
            let f = Field::new(QS[qi]).unwrap();
            let k = k.min(n);
            let coords = raw
                .iter()
                .take(binomial(n, k))
                .map(|&x| x % f.q() as u16)
                .collect();
            (f, WedgeVector::from_coords(n, k, coords))
        })
}

proptest! {
    #[test]
    fn perp_is_an_involution((f, n, vs) in field_and_vectors(6, 6)) {
        let u = Subspace::span(&f, n, &vs);
        let p = u.perp(&f);
        prop_assert_eq!(u.dim() + p.dim(), n);
        prop_assert_eq!(p.perp(&f), u);
    }

    #[test]
    fn perp_reverses_inclusion((f, n, vs) in field_and_vectors(5, 5)) {
        let half = vs.len() / 2;
        let small = Subspace::span(&f, n, &vs[..half]);
        let big = Subspace::span(&f, n, &vs);
        prop_assert!(big.contains(&f, &small).unwrap());
        prop_assert!(small.perp(&f).contains(&f, &big.perp(&f)).unwrap());
    }

    #[test]
    fn sum_and_intersection_dimensions((f, n, vs) in field_and_vectors(5, 6)) {
        let half = vs.len() / 2;
        let a = Subspace::span(&f, n, &vs[..half]);
        let b = Subspace::span(&f, n, &vs[half..]);
        let s = a.sum(&f, &b).unwrap();
        let i = a.intersect(&f, &b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert_eq!(s.perp(&f), a.perp(&f).intersect(&f, &b.perp(&f)).unwrap());
    }

    #[test]
    fn star_squared_is_a_sign((f, a) in wedge_strategy()) {
        let (n, k) = (a.n(), a.grade());
        let back = a.star(&f).star(&f);
        let expected = a.scale(&f, f.sign(k * (n - k)));
        prop_assert_eq!(back, expected);
    }

    #[test]
    fn intersection_systems_are_complexes((f, n, vs) in field_and_vectors(4, 8), r in 2usize..=4) {
        let per = vs.len() / r;
        let spaces: Vec<Subspace> = (0..r).map(|i| Subspace::span(&f, n, &vs[i * per..(i + 1) * per])).collect();
        let (delta, sys) = simplex_intersection_system(&f, &spaces).unwrap();
        for d in 0..r as isize {
            check_monotone(&f, &delta, &sys, d).unwrap();
        }
        let tc = TwistedComplex::new(&f, &delta, &sys, true);
        for d in 0..=r as isize {
            let lower = tc.boundary_matrix(d - 1).unwrap();
            let upper = tc.boundary_matrix(d).unwrap();
            prop_assert!(lower.mul(&f, &upper).is_zero());
        }
    }
}

fn euler(tc: &TwistedComplex) -> i64 {
    (tc.min_degree()..=tc.top_degree())
        .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * tc.chain_dim(d) as i64)
        .sum()
}

#[test]
fn euler_characteristic_matches_homology() {
    for (n, q) in [(2usize, 2u64), (2, 5), (3, 2), (3, 3), (4, 2)] {
        let x = Building::new(&Field::new(q).unwrap(), n);
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
            let from_homology: i64 = tc
                .homology_dims()
                .unwrap()
                .iter()
                .map(|(&d, &h)| if d.rem_euclid(2) == 0 { 1 } else { -1 } * h as i64)
                .sum();
            assert_eq!(euler(tc), from_homology, "(n,q)=({n},{q})");
        }
    }
}

#[test]
fn lusztig_values_are_monotone_on_the_building() {
    for (n, q) in [(3usize, 3u64), (4, 2)] {
        let x = Building::new(&Field::new(q).unwrap(), n);
        for k in 1..n {
            let sys = lusztig_system(&x, k);
            for d in 0..=x.dimension() {
                check_monotone(x.field(), &x, &sys, d).unwrap();
            }
        }
    }
}

#[test]
fn chain_coordinates_round_trip() {
    let x = Building::new(&Field::new(3).unwrap(), 3);
    let f = x.field().clone();
    let tc = TwistedComplex::lusztig(&x, &lusztig_system(&x, 1), true);
    let basis = tc.cycle_basis(1).unwrap();
    for row in basis.row_iter() {
        let chain = tc.chain_from_coords(1, row);
        assert!(chain.is_cycle(&f));
        assert_eq!(tc.coords_of_chain(&chain).unwrap(), row);
    }
}
