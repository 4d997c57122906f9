use monres::eagon::{check_resolves_residue_field, eagon_ranks, eagon_resolution, generator_box};
use monres::resolution::resolve_residue_field;
use monres::{MonomialIdeal, RationalField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_generic_ideals(count: usize, seed: u64) -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=4);
        let gens: Vec<Vec<u32>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
        if gens.iter().any(|g| g.iter().sum::<u32>() < 2) {
            continue;
        }
        let ideal = MonomialIdeal::from_exponents(n, &gens).unwrap();
        if ideal.is_generic() {
            out.push(ideal);
        }
    }
    out
}

#[test]
fn eagon_resolves_the_residue_field_for_generic_ideals() {
    let f = RationalField;
    let imax = 4;
    for ideal in random_generic_ideals(60, 7) {
        let y = eagon_resolution(&f, &ideal, imax).unwrap_or_else(|e| panic!("{ideal}: {e}"));
        assert!(y.check_d_squared().is_ok(), "{ideal}");
        let bound = generator_box(&y);
        let report = check_resolves_residue_field(&y, imax - 1, &bound).unwrap();
        assert!(report.is_exact(), "{ideal}: {:?}", report.defects);
        assert_eq!(y.ranks(), eagon_ranks(&ideal, imax).unwrap(), "{ideal}");
    }
}

#[test]
fn eagon_ranks_dominate_betti_numbers_of_k() {
    let f = RationalField;
    for ideal in random_generic_ideals(30, 11) {
        let formula = eagon_ranks(&ideal, 3).unwrap();
        let bound = ideal.lcm_all().exponents().iter().map(|&e| 3 * e.max(1)).collect::<Vec<_>>();
        let res = resolve_residue_field(&f, &ideal, 3, &bound.into()).unwrap();
        for (i, (&e, &b)) in formula.iter().zip(&res.complex().ranks()).enumerate() {
            assert!(b <= e, "{ideal}: beta_{i} = {b} > {e}");
        }
    }
}
