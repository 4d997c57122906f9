use std::collections::BTreeMap;
use std::path::Path;

use monres::complex::{betti_numbers, is_taylor_minimal, koszul_complex, scarf_complex, taylor_complex};
use monres::denominator::{
    candidate_terms, default_tmax, denominator, non_candidate_terms, verify_lcm_coefficients,
};
use monres::deviation::{deviations, series_from_deviations};
use monres::eagon::{check_resolves_residue_field, eagon_ranks, eagon_resolution, generator_box};
use monres::lattice::{find_lattice_isomorphisms, transport_denominator};
use monres::monomial::y_names;
use monres::resolution::{
    golod_certificate, golod_denominator, is_golod_generic, is_golod_truncated, koszul_homology_algebra,
    poincare_series, resolve_residue_field, series_bound,
};
use monres::series::SeriesJson;
use monres::{BigradedSeries, Error, Field, FreeComplex, GradedDims, MonomialIdeal, Multidegree, RingContext};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::render::{graded_json, graded_rows, graded_table, pretty, ranks_line, table, vector};
use crate::{Command, Common, Format, Outcome};

/// Output of one subcommand before the checks are attached.
struct Report {
    text: String,
    json: Value,
    /// A failed verification that is the subcommand's answer, not a check.
    verified: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Self { text, json, verified: true }
    }
}

#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn all_pass(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

fn load(path: &Path) -> monres::Result<MonomialIdeal> {
    MonomialIdeal::load(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn series_text(q: &BigradedSeries) -> String {
    format!("{}\n# tmax={} ybound={}\n", q.display_with(&y_names(q.num_vars())), q.tmax(), vector(q.ybound()))
}

fn series_inline(q: &BigradedSeries) -> String {
    q.display_with(&y_names(q.num_vars()))
}

fn series_json(q: &BigradedSeries) -> Value {
    serde_json::to_value(q.to_json()).expect("series JSON")
}

fn d_squared_ok<F: Field>(c: &FreeComplex<F>) -> bool {
    c.check_d_squared().is_ok()
}

/// Homology of `K ⊗ R` over the box `m_I`, which holds all of it.
fn koszul_homology<F: Field>(field: &F, ideal: &MonomialIdeal) -> monres::Result<GradedDims> {
    let k = koszul_complex(field, ideal.num_vars(), RingContext::Quotient(ideal.clone()))?;
    Ok(k.homology(&ideal.lcm_all()))
}

fn positive_homology_vanishes(dims: &GradedDims) -> bool {
    dims.iter().skip(1).all(BTreeMap::is_empty)
}

pub fn execute<F: Field>(field: &F, command: &Command, common: &Common) -> monres::Result<Outcome> {
    let mut checks = Checks::default();
    let check = common.check;
    let report = match command {
        Command::Q { ideal, tmax } => {
            let ideal = load(ideal)?;
            let tmax = tmax.unwrap_or_else(|| default_tmax(&ideal));
            let q = denominator(field, &ideal, tmax)?;
            if check {
                let deg = ideal.lcm_all().total_degree();
                checks.add("lcm-support", verify_lcm_coefficients(&q, &ideal));
                checks.add("t-degree <= deg m_I", q.t_degree().unwrap_or(0) <= deg);
                let bound = series_bound(&ideal);
                let p = poincare_series(field, &ideal, tmax)?;
                let n = BigradedSeries::koszul_numerator(tmax, bound.clone());
                checks.add("Q * P = prod(1 + t y_i)", q.truncate(tmax, &bound).try_mul(&p)?.same_terms(&n));
                if is_taylor_minimal(&ideal)? {
                    checks.add("terms are candidates", non_candidate_terms(&q, &candidate_terms(&ideal)?).is_empty());
                }
            }
            Report::new(series_text(&q), series_json(&q))
        }
        Command::Poincare { ideal, tmax } => {
            let ideal = load(ideal)?;
            let tmax = tmax.unwrap_or_else(|| default_tmax(&ideal));
            let bound = series_bound(&ideal);
            let res = resolve_residue_field(field, &ideal, tmax, &bound)?;
            let betti = res.betti();
            let p = res.poincare_series();
            if check {
                checks.add("minimal", res.complex().unit_entries() == 0);
                checks.add("d∘d = 0", d_squared_ok(res.complex()));
                if tmax >= 1 {
                    let report = check_resolves_residue_field(res.complex(), tmax as usize - 1, &bound)?;
                    checks.add(format!("exact in degrees 1..{} within {}", tmax - 1, vector(&bound)), report.is_exact());
                }
                if ideal.min_generator_degree().is_none_or(|d| d >= 2) {
                    let n = ideal.num_vars();
                    if tmax >= 1 {
                        let units: BTreeMap<Multidegree, usize> = (0..n).map(|i| (Multidegree::unit(n, i), 1)).collect();
                        checks.add("Tor_1 = unit multidegrees", betti[1] == units);
                    }
                    if tmax >= 2 {
                        let mut expected: BTreeMap<Multidegree, usize> = BTreeMap::new();
                        for a in 0..n {
                            for b in a + 1..n {
                                *expected.entry(Multidegree::indicator(n, &[a, b])).or_default() += 1;
                            }
                        }
                        for g in ideal.generators() {
                            *expected.entry(g.clone()).or_default() += 1;
                        }
                        let found: BTreeMap<Multidegree, usize> =
                            betti[2].iter().filter(|(j, _)| j.divides(&bound)).map(|(j, d)| (j.clone(), *d)).collect();
                        checks.add("Tor_2 = pairs + generators", found == expected);
                    }
                }
            }
            let text = format!("{}P = {}", graded_table(&betti), series_text(&p));
            let json = json!({"tmax": tmax, "bound": bound, "betti": graded_json(&betti), "series": series_json(&p)});
            Report::new(text, json)
        }
        Command::Deviations { ideal, nmax } => {
            let ideal = load(ideal)?;
            let bound = series_bound(&ideal);
            let p = poincare_series(field, &ideal, *nmax)?;
            let table_ = deviations(&p, *nmax)?;
            if check {
                checks.add("round trip", series_from_deviations(&table_, *nmax, &bound).same_terms(&p));
                if ideal.min_generator_degree().is_none_or(|d| d >= 2) {
                    let n = ideal.num_vars();
                    let ones = BigInt::from(1);
                    let level1: Vec<(&Multidegree, &BigInt)> = table_.level(1).collect();
                    let units_ok = level1.len() == n
                        && level1.iter().all(|(j, e)| j.total_degree() == 1 && **e == ones);
                    checks.add("e_1 = unit indicator", *nmax < 1 || units_ok);
                    let mut gens: BTreeMap<Multidegree, BigInt> = BTreeMap::new();
                    for g in ideal.generators() {
                        *gens.entry(g.clone()).or_default() += 1;
                    }
                    let level2: BTreeMap<Multidegree, BigInt> =
                        table_.level(2).map(|(j, e)| (j.clone(), e.clone())).collect();
                    checks.add("e_2 = generator count", *nmax < 2 || level2 == gens);
                }
            }
            let rows: Vec<Vec<String>> =
                table_.entries.iter().map(|((n, j), e)| vec![n.to_string(), vector(j), e.to_string()]).collect();
            let entries: Vec<Value> = table_
                .entries
                .iter()
                .map(|((n, j), e)| json!({"n": n, "j": j, "e": bigint_json(e)}))
                .collect();
            let text = format!("{}# nmax={} ybound={}\n", table(&["n", "multidegree", "e"], &rows), nmax, vector(&bound));
            Report::new(text, json!({"nmax": nmax, "ybound": bound, "entries": entries}))
        }
        Command::Candidates { ideal } => {
            let ideal = load(ideal)?;
            let cands = candidate_terms(&ideal)?;
            if check && is_taylor_minimal(&ideal)? {
                let q = denominator(field, &ideal, default_tmax(&ideal))?;
                checks.add("Q terms are candidates (Taylor-minimal)", non_candidate_terms(&q, &cands).is_empty());
            }
            let names = ideal.var_names().to_vec();
            let rows: Vec<Vec<String>> = cands
                .iter()
                .map(|c| {
                    let sign = if c.sign > 0 { "+" } else { "-" };
                    vec![sign.to_string(), c.t_power.to_string(), c.multidegree.display_with(&names)]
                })
                .collect();
            let json: Vec<Value> = cands
                .iter()
                .map(|c| json!({"sign": c.sign, "t": c.t_power, "y": c.multidegree}))
                .collect();
            Report::new(table(&["sign", "t", "m_J"], &rows), Value::Array(json))
        }
        Command::VerifyLcm { ideal, series, tmax } => {
            let ideal = load(ideal)?;
            let q = match series {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let parsed: SeriesJson = serde_json::from_str(&text)?;
                    if parsed.ybound.len() != ideal.num_vars() || parsed.terms.iter().any(|t| t.y.len() != ideal.num_vars()) {
                        return Err(Error::Input(format!("{}: series has the wrong number of variables", path.display())));
                    }
                    BigradedSeries::from_json(&parsed)
                }
                None => denominator(field, &ideal, tmax.unwrap_or_else(|| default_tmax(&ideal)))?,
            };
            let ok = verify_lcm_coefficients(&q, &ideal);
            let stray: Vec<String> = q
                .terms()
                .filter(|(t, y, _)| *t > 0 && !monres::denominator::is_lcm_of_generators(&ideal, y))
                .map(|(t, y, c)| format!("{c} t^{t} {}", vector(y)))
                .collect();
            let mut text = format!("lcm-support: {ok}\n");
            for s in &stray {
                text.push_str(&format!("not an lcm: {s}\n"));
            }
            Report { text, json: json!({"lcm_support": ok, "stray_terms": stray}), verified: ok }
        }
        Command::Taylor { ideal } => {
            let ideal = load(ideal)?;
            let c = taylor_complex(field, &ideal)?;
            if check {
                checks.add("d∘d = 0", d_squared_ok(&c));
                let h = c.homology(&ideal.lcm_all());
                checks.add("acyclic within m_I", positive_homology_vanishes(&h));
            }
            complex_report(&c)
        }
        Command::Scarf { ideal } => {
            let ideal = load(ideal)?;
            let c = scarf_complex(field, &ideal)?;
            if check {
                checks.add("d∘d = 0", d_squared_ok(&c));
                if ideal.is_generic() {
                    let minimized = taylor_complex(field, &ideal)?.minimize();
                    checks.add("generic: ranks = minimized Taylor ranks", minimized.graded_ranks() == c.graded_ranks());
                }
            }
            complex_report(&c)
        }
        Command::Koszul { ideal } => {
            let ideal = load(ideal)?;
            let c = koszul_complex(field, ideal.num_vars(), RingContext::Quotient(ideal.clone()))?;
            let h = c.homology(&ideal.lcm_all());
            if check {
                checks.add("d∘d = 0", d_squared_ok(&c));
                checks.add("H(K ⊗ R) = Tor^S(S/I, k)", trim(h.clone()) == trim(betti_numbers(field, &ideal)?));
            }
            let mut r = complex_report(&c);
            r.text.push_str("homology of K ⊗ R:\n");
            r.text.push_str(&graded_table(&h));
            r.json["homology"] = graded_json(&h);
            r
        }
        Command::Betti { ideal } => {
            let ideal = load(ideal)?;
            let b = betti_numbers(field, &ideal)?;
            if check {
                checks.add("Tor symmetry with Koszul homology", trim(b.clone()) == trim(koszul_homology(field, &ideal)?));
            }
            let ranks: Vec<usize> = b.iter().map(|m| m.values().sum()).collect();
            Report::new(format!("{}{}", ranks_line(&ranks), graded_table(&b)), json!({"ranks": ranks, "betti": graded_json(&b)}))
        }
        Command::Golod { ideal, tmax } => {
            let ideal = load(ideal)?;
            let tmax = tmax.unwrap_or_else(|| ideal.lcm_all().total_degree() + 2);
            let cert = golod_certificate(field, &ideal, tmax)?;
            let gq = golod_denominator(field, &ideal, &ideal.lcm_all())?;
            if check {
                if cert.golod {
                    let algebra = koszul_homology_algebra(field, &ideal, &ideal.lcm_all())?;
                    checks.add("Koszul products vanish", algebra.has_trivial_products());
                    let q = denominator(field, &ideal, default_tmax(&ideal))?;
                    checks.add("Q = Golod denominator", q.same_terms(&gq.truncate(q.tmax(), q.ybound())));
                }
                if ideal.is_generic() {
                    checks.add("agrees with generic criterion", is_golod_generic(&ideal)? == cert.golod);
                }
            }
            let mut text = format!(
                "golod: {} (certified for t <= {}, y <= {})\n",
                cert.golod,
                cert.tmax,
                vector(&cert.bound)
            );
            if let Some((t, y, a, b)) = &cert.first_mismatch {
                text.push_str(&format!("first mismatch: t^{t} {}: resolution {a}, Golod bound {b}\n", vector(y)));
            }
            text.push_str(&format!("golod denominator: {}", series_text(&gq)));
            let mismatch = cert.first_mismatch.as_ref().map(|(t, y, a, b)| {
                json!({"t": t, "y": y, "resolution": bigint_json(a), "golod_bound": bigint_json(b)})
            });
            let json = json!({
                "golod": cert.golod,
                "tmax": cert.tmax,
                "bound": cert.bound,
                "first_mismatch": mismatch,
                "golod_denominator": series_json(&gq),
            });
            Report::new(text, json)
        }
        Command::GolodGeneric { ideal } => {
            let ideal = load(ideal)?;
            let g = is_golod_generic(&ideal)?;
            if check {
                let tmax = ideal.lcm_all().total_degree() + 2;
                checks.add(format!("agrees with series test to t^{tmax}"), is_golod_truncated(field, &ideal, tmax)? == g);
            }
            Report::new(format!("golod: {g}\n"), json!({"golod": g}))
        }
        Command::Eagon { ideal, imax } => {
            let ideal = load(ideal)?;
            let y = eagon_resolution(field, &ideal, *imax)?;
            let formula = eagon_ranks(&ideal, *imax)?;
            let bound = generator_box(&y);
            if check {
                checks.add("d∘d = 0", d_squared_ok(&y));
                checks.add("ranks = direct-sum formula", y.ranks() == formula);
                if *imax >= 2 {
                    let report = check_resolves_residue_field(&y, imax - 1, &bound)?;
                    checks.add(format!("exact in degrees 1..{} within {}", imax - 1, vector(&bound)), report.is_exact());
                }
            }
            let mut rows = Vec::new();
            let mut gens = Vec::new();
            for i in 0..y.len() {
                let level: Vec<Value> = y
                    .module(i)
                    .iter()
                    .zip(y.labels(i))
                    .map(|(m, l)| {
                        rows.push(vec![i.to_string(), l.clone(), vector(m)]);
                        json!({"label": l, "multidegree": m})
                    })
                    .collect();
                gens.push(Value::Array(level));
            }
            let text = format!("{}{}", ranks_line(&y.ranks()), table(&["i", "generator", "multidegree"], &rows));
            Report::new(text, json!({"imax": imax, "ranks": y.ranks(), "generators": gens}))
        }
        Command::LatticeIso { source, target, transport, tdeg } => {
            let a = load(source)?;
            let b = load(target)?;
            let maps = find_lattice_isomorphisms(&a, &b)?;
            let gcd = maps.iter().filter(|m| m.gcd_preserving).count();
            let mut text = String::new();
            let mut entries = Vec::new();
            let direct = if *transport {
                let t = tdeg.unwrap_or_else(|| default_tmax(&a).max(default_tmax(&b)));
                Some((denominator(field, &a, t)?, denominator(field, &b, t)?))
            } else {
                None
            };
            let mut verified = true;
            for (k, m) in maps.iter().enumerate() {
                let pairing: Vec<String> = m.atoms.iter().enumerate().map(|(s, t)| format!("{}->{}", s + 1, t + 1)).collect();
                text.push_str(&format!("isomorphism {}: {} gcd_preserving={}\n", k + 1, pairing.join(" "), m.gcd_preserving));
                let mut entry = json!({"atoms": m.atoms, "gcd_preserving": m.gcd_preserving});
                if check {
                    checks.add(format!("isomorphism {} preserves joins", k + 1), m.preserves_joins());
                }
                if let Some((qa, qb)) = &direct {
                    let moved = transport_denominator(qa, m)?;
                    let equal = moved.same_terms(qb);
                    text.push_str(&format!("  transported Q: {}\n", series_inline(&moved)));
                    text.push_str(&format!("  equals target Q: {equal}\n"));
                    if m.gcd_preserving && !equal {
                        verified = false;
                    }
                    entry["transported"] = series_json(&moved);
                    entry["equals_target"] = json!(equal);
                }
                entries.push(entry);
            }
            text.push_str(&format!("{} lattice isomorphisms, {} GCD-preserving\n", maps.len(), gcd));
            let mut json = json!({"isomorphisms": entries, "count": maps.len(), "gcd_preserving": gcd});
            if let Some((qa, qb)) = &direct {
                text.push_str(&format!("source Q: {}\ntarget Q: {}\n", series_inline(qa), series_inline(qb)));
                text.push_str(&format!("# tmax={}\n", qa.tmax()));
                json["source_q"] = series_json(qa);
                json["target_q"] = series_json(qb);
            }
            Report { text, json, verified }
        }
        Command::Polarize { ideal } => {
            let ideal = load(ideal)?;
            let pol = ideal.polarize();
            if check {
                let maps = find_lattice_isomorphisms(&ideal, &pol.ideal)?;
                let identity: Vec<usize> = (0..ideal.num_generators()).collect();
                let ok = maps.iter().any(|m| m.atoms == identity && m.gcd_preserving);
                checks.add("lattice and GCD graph isomorphic via generators", ok);
            }
            let file = serde_json::to_value(pol.ideal.to_file())?;
            Report::new(format!("{}\n", pol.ideal), file)
        }
    };
    Ok(finish(report, checks, common.format))
}

fn trim(mut dims: GradedDims) -> GradedDims {
    while dims.last().is_some_and(BTreeMap::is_empty) {
        dims.pop();
    }
    dims
}

fn bigint_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn complex_report<F: Field>(c: &FreeComplex<F>) -> Report {
    let graded = c.graded_ranks();
    Report::new(
        format!("{}{}", ranks_line(&c.ranks()), table(&["i", "multidegree", "rank"], &graded_rows(&graded))),
        json!({"ranks": c.ranks(), "graded": graded_json(&graded)}),
    )
}

fn finish(report: Report, checks: Checks, format: Format) -> Outcome {
    let verified = report.verified && checks.all_pass();
    let text = match format {
        Format::Table => {
            let mut text = report.text;
            for (name, ok) in &checks.0 {
                text.push_str(&format!("check {name}: {}\n", if *ok { "ok" } else { "FAILED" }));
            }
            text
        }
        Format::Json => {
            let mut json = report.json;
            if !checks.0.is_empty() {
                let list: Vec<Value> = checks.0.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect();
                json = json!({"result": json, "checks": list});
            }
            pretty(&json)
        }
    };
    Outcome { text, verified }
}
