//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its PASS/FAIL line under a plain `cargo test`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use monres::complex::{koszul_complex, scarf_complex, taylor_complex};
use monres::denominator::{candidate_terms, default_tmax, denominator, depolarize, non_candidate_terms, verify_lcm_coefficients};
use monres::deviation::{deviations, series_from_deviations};
use monres::eagon::{check_resolves_residue_field, eagon_ranks, eagon_resolution, generator_box};
use monres::monomial::DegreeBox;
use monres::resolution::{golod_denominator, is_golod_generic, is_golod_truncated, poincare_series, resolve_residue_field, series_bound};
use monres::series::SeriesJson;
use monres::{BigradedSeries, FreeComplex, MonomialIdeal, Multidegree, RationalField, RingContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every comparison below is exact: integer or rational equality.
const TOLERANCE: &str = "exact";
const CORPUS_SIZE: usize = 200;
const CORPUS_SEED: u64 = 2024;
const DEVIATION_TMAX: u32 = 6;
const EAGON_IMAX: usize = 6;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn monres(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_monres")).args(args).output().expect("run monres");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn md(v: &[u32]) -> Multidegree {
    Multidegree::new(v.to_vec())
}

/// Seeded ideals with at most 4 variables, at most 4 generators, exponents
/// at most 3 and every generator of degree at least 2.
fn corpus() -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let r = rng.gen_range(1..=4);
            let gens: Vec<Vec<u32>> = (0..r)
                .map(|_| loop {
                    let g: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                    if g.iter().sum::<u32>() >= 2 {
                        break g;
                    }
                })
                .collect();
            MonomialIdeal::from_exponents(n, &gens).unwrap()
        })
        .collect()
}

fn series_from_cli(stdout: &str) -> BigradedSeries {
    let json: SeriesJson = serde_json::from_str(stdout).expect("series JSON");
    BigradedSeries::from_json(&json)
}

fn one_minus(tmax: u32, bound: &Multidegree, t: u32, y: &[u32]) -> BigradedSeries {
    let mut s = BigradedSeries::one(tmax, bound.clone());
    s.add_term(t, md(y), BigInt::from(-1));
    s
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn closing_prime() -> Outcome {
    let path = data("closing_I_prime.json");
    let (code, table) = monres(&["q", path.to_str().unwrap(), "--tmax", "5"]);
    let (_, json) = monres(&["q", path.to_str().unwrap(), "--tmax", "5", "--format", "json"]);
    let got = series_from_cli(&json);
    let b = md(&[1, 2, 2]);
    let mut expected = BigradedSeries::one(5, b.clone());
    expected.add_term(2, md(&[1, 2, 0]), BigInt::from(-1));
    expected.add_term(2, md(&[1, 0, 2]), BigInt::from(-1));
    expected.add_term(3, md(&[1, 2, 2]), BigInt::from(-1));
    let first = table.lines().next().unwrap_or("");
    let ok = code == 0 && got.same_terms(&expected) && first == "1 - t^2*y1*y2^2 - t^2*y1*y3^2 - t^3*y1*y2^2*y3^2";
    outcome(ok, format!("q = {first}"))
}

fn closing_complete_intersection() -> Outcome {
    let path = data("closing_I.json");
    let (code, json) = monres(&["q", path.to_str().unwrap(), "--format", "json"]);
    let got = series_from_cli(&json);
    let b = md(&[2, 2, 1]);
    let expected = one_minus(got.tmax(), &b, 2, &[2, 0, 0]).mul(&one_minus(got.tmax(), &b, 2, &[0, 2, 1]));
    let sign_flipped = {
        let mut s = BigradedSeries::one(got.tmax(), b.clone());
        s.add_term(2, md(&[2, 0, 0]), BigInt::from(-1));
        s.add_term(2, md(&[0, 2, 1]), BigInt::from(1));
        s.add_term(4, md(&[2, 2, 1]), BigInt::from(1));
        s
    };
    let ok = code == 0 && got.same_terms(&expected) && !got.same_terms(&sign_flipped);
    outcome(ok, format!("q = {} (product of the two hypersurface factors)", got))
}

fn closing_pair_lattice() -> Outcome {
    let a = data("closing_I.json");
    let b = data("closing_I_prime.json");
    let (code, out) = monres(&["lattice-iso", a.to_str().unwrap(), b.to_str().unwrap(), "--transport", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).expect("lattice-iso JSON");
    let count = v["count"].as_u64().unwrap_or(0);
    let gcd = v["gcd_preserving"].as_u64().unwrap_or(u64::MAX);
    let target: SeriesJson = serde_json::from_value(v["target_q"].clone()).expect("target Q");
    let target = BigradedSeries::from_json(&target);
    let all_differ = v["isomorphisms"].as_array().is_some_and(|maps| {
        maps.iter().all(|m| {
            let moved: SeriesJson = serde_json::from_value(m["transported"].clone()).expect("transported Q");
            !BigradedSeries::from_json(&moved).same_terms(&target) && m["equals_target"] == serde_json::json!(false)
        })
    });
    let ok = code == 0 && count >= 1 && gcd == 0 && all_differ;
    outcome(ok, format!("{count} lattice isomorphisms, {gcd} GCD-preserving, transported Q differs from Q': {all_differ}"))
}

/// All subset lcms, by enumeration.
fn lattice_by_enumeration(ideal: &MonomialIdeal) -> HashSet<Multidegree> {
    let r = ideal.num_generators();
    (1u64..(1 << r)).map(|mask| ideal.lcm_of_mask(mask)).collect()
}

struct CorpusData {
    ideal: MonomialIdeal,
    q: BigradedSeries,
}

fn lcm_support(corpus: &[CorpusData]) -> Outcome {
    let mut failures = 0;
    for c in corpus {
        let lattice = lattice_by_enumeration(&c.ideal);
        let by_enumeration = c.q.terms().all(|(t, y, _)| if t == 0 { y.is_zero() } else { lattice.contains(y) });
        if !by_enumeration || !verify_lcm_coefficients(&c.q, &c.ideal) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{} ideals, {failures} with a term outside L_I", corpus.len()))
}

fn golod_consistency(corpus: &[CorpusData]) -> Outcome {
    let f = RationalField;
    let (mut golod, mut failures) = (0, Vec::new());
    for c in corpus {
        let tmax = c.ideal.lcm_all().total_degree() + 2;
        if !is_golod_truncated(&f, &c.ideal, tmax).unwrap() {
            continue;
        }
        golod += 1;
        let gq = golod_denominator(&f, &c.ideal, &c.ideal.lcm_all()).unwrap().truncate(c.q.tmax(), c.q.ybound());
        let candidates = candidate_terms(&c.ideal).unwrap();
        if !c.q.same_terms(&gq) || !non_candidate_terms(&c.q, &candidates).is_empty() {
            failures.push(c.ideal.to_string());
        }
    }
    outcome(golod > 0 && failures.is_empty(), format!("{golod} Golod-certified ideals, failures: {failures:?}"))
}

fn generic_golod(corpus: &[CorpusData]) -> Outcome {
    let f = RationalField;
    let (mut generic, mut disagreements) = (0, Vec::new());
    for c in corpus.iter().filter(|c| c.ideal.is_generic()) {
        generic += 1;
        let tmax = c.ideal.lcm_all().total_degree() + 2;
        if is_golod_generic(&c.ideal).unwrap() != is_golod_truncated(&f, &c.ideal, tmax).unwrap() {
            disagreements.push(c.ideal.to_string());
        }
    }
    outcome(generic > 0 && disagreements.is_empty(), format!("{generic} generic ideals, disagreements: {disagreements:?}"))
}

fn eagon() -> Outcome {
    let f = RationalField;
    // Direct sum of K_a ⊗ (words in the Scarf symbols): both ideals have
    // three faces of size 1 (degree 2) and two of size 2 (degree 3).
    let expected_low = [1usize, 2, 4, 8];
    let mut details = Vec::new();
    let mut ok = true;
    for i in [ideal(2, &[&[3, 0], &[1, 1], &[0, 2]]), ideal(2, &[&[2, 0], &[1, 1], &[0, 2]])] {
        let y = eagon_resolution(&f, &i, EAGON_IMAX).unwrap();
        let d2 = y.check_d_squared().is_ok();
        let bound = generator_box(&y);
        let exact = check_resolves_residue_field(&y, EAGON_IMAX - 1, &bound).unwrap().is_exact();
        let ranks = y.ranks();
        let formula = eagon_ranks(&i, EAGON_IMAX).unwrap();
        let tor = resolve_residue_field(&f, &i, 3, &bound).unwrap().complex().ranks();
        let ranks_ok = ranks[..4] == expected_low && ranks == formula && tor[..4] == ranks[..4];
        ok &= d2 && exact && ranks_ok;
        details.push(format!("{i}: d∘d=0 {d2}, exact 1..{} within {:?} {exact}, ranks {:?}", EAGON_IMAX - 1, bound, &ranks[..4]));
    }
    outcome(ok, details.join("; "))
}

fn deviation_round_trip(corpus: &[CorpusData]) -> Outcome {
    let f = RationalField;
    let mut failures = Vec::new();
    for c in corpus {
        let n = c.ideal.num_vars();
        let p = poincare_series(&f, &c.ideal, DEVIATION_TMAX).unwrap();
        let table = deviations(&p, DEVIATION_TMAX).unwrap();
        let back = series_from_deviations(&table, DEVIATION_TMAX, &series_bound(&c.ideal));
        let level1: BTreeMap<Multidegree, BigInt> = table.level(1).map(|(j, e)| (j.clone(), e.clone())).collect();
        let units: BTreeMap<Multidegree, BigInt> = (0..n).map(|i| (Multidegree::unit(n, i), BigInt::from(1))).collect();
        let level2: BTreeMap<Multidegree, BigInt> = table.level(2).map(|(j, e)| (j.clone(), e.clone())).collect();
        let mut gens: BTreeMap<Multidegree, BigInt> = BTreeMap::new();
        for g in c.ideal.generators() {
            *gens.entry(g.clone()).or_default() += 1;
        }
        if !back.same_terms(&p) || level1 != units || level2 != gens {
            failures.push(c.ideal.to_string());
        }
    }
    outcome(failures.is_empty(), format!("{} ideals to t^{DEVIATION_TMAX}, failures: {failures:?}", corpus.len()))
}

fn polarization(corpus: &[CorpusData]) -> Outcome {
    let f = RationalField;
    let mut failures = Vec::new();
    let mut widest = 0;
    for c in corpus {
        let pol = c.ideal.polarize();
        widest = widest.max(pol.ideal.num_vars());
        let qp = denominator(&f, &pol.ideal, c.q.tmax()).unwrap();
        if !depolarize(&qp, &pol, &c.ideal).unwrap().same_terms(&c.q) {
            failures.push(c.ideal.to_string());
        }
    }
    outcome(failures.is_empty(), format!("{} ideals (up to {widest} polarized variables), failures: {failures:?}", corpus.len()))
}

/// Dense rank over the rationals, by straightforward Gaussian elimination.
fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let factor = &row[c] / &pivot[c];
                for k in c..ncols {
                    row[k] -= &factor * &pivot[k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology of a complex in one multidegree from its raw entry list: the
/// component of `C_i` in degree `j` has one basis vector per generator `g`
/// with `g | j` and `x^(j-g)` nonzero in the ring.
fn oracle_homology(c: &FreeComplex<RationalField>, ideal: Option<&MonomialIdeal>, i: usize, j: &Multidegree) -> usize {
    let alive = |g: &Multidegree| match j.checked_sub(g) {
        Some(rest) => ideal.is_none_or(|id| !id.contains(&rest)),
        None => false,
    };
    let basis = |k: usize| -> Vec<usize> { (0..c.module(k).len()).filter(|&g| alive(&c.module(k)[g])).collect() };
    let rank_of = |k: usize| -> usize {
        if k == 0 || k >= c.len() {
            return 0;
        }
        let (src, tgt) = (basis(k), basis(k - 1));
        if src.is_empty() || tgt.is_empty() {
            return 0;
        }
        let mut m = vec![vec![BigRational::zero(); src.len()]; tgt.len()];
        for (r, col, x, _) in c.entries(k) {
            if let (Some(a), Some(b)) = (tgt.iter().position(|&t| t == r), src.iter().position(|&s| s == col)) {
                m[a][b] += x.to_big();
            }
        }
        dense_rank(m)
    };
    basis(i).len() - rank_of(i) - rank_of(i + 1)
}

fn homology_oracle() -> Outcome {
    let f = RationalField;
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + 1);
    let mut instances: Vec<MonomialIdeal> = corpus().into_iter().take(30).collect();
    for _ in 0..10 {
        let r = rng.gen_range(1..=4);
        let gens: Vec<Vec<u32>> = (0..r)
            .map(|_| loop {
                let g: Vec<u32> = (0..5).map(|_| rng.gen_range(0..=2)).collect();
                let d: u32 = g.iter().sum();
                if (1..=4).contains(&d) {
                    break g;
                }
            })
            .collect();
        instances.push(MonomialIdeal::from_exponents(5, &gens).unwrap());
    }
    let (mut compared, mut mismatches) = (0usize, Vec::new());
    for id in &instances {
        let bound = series_bound(id);
        let complexes: Vec<(&str, FreeComplex<RationalField>, Option<&MonomialIdeal>)> = vec![
            ("taylor", taylor_complex(&f, id).unwrap(), None),
            ("scarf", scarf_complex(&f, id).unwrap(), None),
            ("koszul", koszul_complex(&f, id.num_vars(), RingContext::Quotient(id.clone())).unwrap(), Some(id)),
        ];
        let grid = DegreeBox::new(&bound);
        for (name, c, ring) in &complexes {
            let fast = c.homology(&bound);
            for k in 0..grid.size() {
                let j = grid.multidegree(k);
                for (i, dims) in fast.iter().enumerate() {
                    compared += 1;
                    let expected = oracle_homology(c, *ring, i, &j);
                    let got = dims.get(&j).copied().unwrap_or(0);
                    if expected != got {
                        mismatches.push(format!("{name} {id} H_{i}{:?}: {got} vs {expected}", j));
                    }
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{} instances, {compared} (complex, i, j) comparisons, mismatches: {:?}", instances.len(), &mismatches[..mismatches.len().min(5)]),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    // Accept and ignore libtest flags such as `--nocapture` or filters.
    let start = Instant::now();
    let f = RationalField;
    let corpus: Vec<CorpusData> = corpus()
        .into_iter()
        .map(|ideal| {
            let q = denominator(&f, &ideal, default_tmax(&ideal)).unwrap();
            CorpusData { ideal, q }
        })
        .collect();
    let distinct: BTreeSet<String> = corpus.iter().map(|c| c.ideal.to_string()).collect();
    println!("corpus: {} ideals ({} distinct), seed {CORPUS_SEED}, tolerance: {TOLERANCE}", corpus.len(), distinct.len());

    let criteria: Vec<Criterion> = vec![
        ("closing example, Q of (x1*x2^2, x1*x3^2)", Box::new(closing_prime)),
        ("closing example, Q of (x1^2, x2^2*x3)", Box::new(closing_complete_intersection)),
        ("closing pair: lattice isomorphic, not GCD-isomorphic, Q not transported", Box::new(closing_pair_lattice)),
        ("denominator terms lie in the LCM lattice", Box::new(|| lcm_support(&corpus))),
        ("Golod ideals: Q equals the Golod denominator and uses candidate terms", Box::new(|| golod_consistency(&corpus))),
        ("generic Golod criterion agrees with the series test", Box::new(|| generic_golod(&corpus))),
        ("Eagon resolution: d∘d = 0, exactness, ranks", Box::new(eagon)),
        ("deviations round trip, e_1 and e_2", Box::new(|| deviation_round_trip(&corpus))),
        ("polarization preserves Q", Box::new(|| polarization(&corpus))),
        ("homology matches a dense brute-force oracle", Box::new(homology_oracle)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {name} [{:.1}s] {}",
            if o.ok { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
