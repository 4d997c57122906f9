use monres::complex::{betti_numbers, koszul_complex};
use monres::denominator::{default_tmax, denominator};
use monres::monomial::minimalize;
use monres::resolution::{poincare_series, series_bound};
use monres::{deviations, series_from_deviations, BigradedSeries, Field, MonomialIdeal, Multidegree, PrimeField, RationalField, RingContext};
use proptest::prelude::*;

fn ideal_strategy(max_vars: usize, max_gens: usize, max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
    (1..=max_vars).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..=max_exp, n), 1..=max_gens)
            .prop_filter("degree at least 1", |gens| gens.iter().all(|g| g.iter().sum::<u32>() >= 1))
            .prop_map(move |gens| MonomialIdeal::from_exponents(n, &gens).unwrap())
    })
}

fn multidegree_strategy(n: usize, max_exp: u32) -> impl Strategy<Value = Multidegree> {
    prop::collection::vec(0..=max_exp, n).prop_map(Multidegree::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimalize_is_idempotent(ideal in ideal_strategy(4, 5, 3)) {
        let again = minimalize(ideal.var_names().to_vec(), ideal.generators().to_vec()).unwrap();
        prop_assert_eq!(again.generators(), ideal.generators());
        for (a, g) in ideal.generators().iter().enumerate() {
            for (b, h) in ideal.generators().iter().enumerate() {
                prop_assert!(a == b || !g.divides(h));
            }
        }
    }

    #[test]
    fn lcm_is_least_upper_bound(
        (a, b, c) in (1usize..5).prop_flat_map(|n| (multidegree_strategy(n, 4), multidegree_strategy(n, 4), multidegree_strategy(n, 4)))
    ) {
        let l = a.lcm(&b);
        prop_assert!(a.divides(&l) && b.divides(&l));
        if a.divides(&c) && b.divides(&c) {
            prop_assert!(l.divides(&c));
        }
        prop_assert!(a.gcd(&b).divides(&a));
        prop_assert_eq!(a.gcd(&b).add(&l), a.add(&b));
    }

    #[test]
    fn lcm_of_subsets_is_monotone(ideal in ideal_strategy(4, 5, 3), x in any::<u64>(), y in any::<u64>()) {
        let full = (1u64 << ideal.num_generators()) - 1;
        let (small, big) = (x & y & full, (x | y) & full);
        prop_assert!(ideal.lcm_of_mask(small).divides(&ideal.lcm_of_mask(big)));
    }

    #[test]
    fn rational_inverse(n in any::<i64>(), d in 1i64..i64::MAX) {
        let f = RationalField;
        let a = f.from_i64(n);
        let a = f.mul(&a, &f.inv(&f.from_i64(d)));
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        }
    }

    #[test]
    fn prime_field_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7, 31, 65_521, 4_294_967_291]), n in any::<i64>()) {
        let f = PrimeField::new(p).unwrap();
        let a = f.from_i64(n);
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        }
    }

    #[test]
    fn polarization_preserves_joins(ideal in ideal_strategy(3, 4, 3)) {
        let pol = ideal.polarize();
        let r = ideal.num_generators() as u64;
        for x in 1u64..(1 << r) {
            for y in 1u64..(1 << r) {
                let joined = pol.lambda(&ideal.lcm_of_mask(x)).lcm(&pol.lambda(&ideal.lcm_of_mask(y)));
                prop_assert_eq!(joined, pol.lambda(&ideal.lcm_of_mask(x | y)));
            }
        }
        prop_assert!(pol.ideal.is_squarefree());
        for g in ideal.generators() {
            prop_assert_eq!(&pol.lambda_inverse(&pol.lambda(g)), g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deviation_round_trip(ideal in ideal_strategy(3, 3, 2)) {
        let tmax = 5;
        let p = poincare_series(&RationalField, &ideal, tmax).unwrap();
        let table = deviations(&p, tmax).unwrap();
        let back = series_from_deviations(&table, tmax, &series_bound(&ideal));
        prop_assert!(back.same_terms(&p), "{} vs {}", back, p);
    }

    #[test]
    fn denominator_times_series_is_koszul_numerator(ideal in ideal_strategy(3, 3, 2)) {
        let f = RationalField;
        let tmax = default_tmax(&ideal);
        let bound = series_bound(&ideal);
        let q = denominator(&f, &ideal, tmax).unwrap();
        let p = poincare_series(&f, &ideal, tmax).unwrap();
        let product = q.truncate(tmax, &bound).mul(&p);
        prop_assert!(product.same_terms(&BigradedSeries::koszul_numerator(tmax, bound)));
        prop_assert!(q.t_degree().unwrap_or(0) <= ideal.lcm_all().total_degree());
    }

    /// Tor_i(S/I, k)_j computed from both sides: a minimal free resolution of
    /// S/I, and the Koszul complex on the variables tensored with S/I.
    #[test]
    fn tor_is_balanced(ideal in ideal_strategy(4, 4, 2)) {
        let f = RationalField;
        let betti = betti_numbers(&f, &ideal).unwrap();
        let koszul = koszul_complex(&f, ideal.num_vars(), RingContext::Quotient(ideal.clone())).unwrap();
        let homology = koszul.homology(&ideal.lcm_all());
        for i in 0..betti.len().max(homology.len()) {
            prop_assert_eq!(betti.get(i).cloned().unwrap_or_default(), homology.get(i).cloned().unwrap_or_default(), "i = {}", i);
        }
    }
}
