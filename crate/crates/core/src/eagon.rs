//! The Eagon resolution of `k` over `R = S/I` for generic `I`:
//! `Y = K ⊗ T(X)`, where `X` is free on symbols `T_L` for the nonempty
//! Scarf faces `L` (homological degree `|L| + 1`, multidegree `m_L`).
//!
//! `d(T_L)` is a fixed cycle of `K ⊗ R` spanning `H_|L|(K ⊗ R)` in
//! multidegree `m_L`. On words,
//! `d(w T_a T_b) = d(w T_a) T_b + (-1)^s δ(a,b) w T_(a ∪ b)`
//! with `s` the degree of `w T_a`, and `δ(a,b)` the monomial
//! `m_a m_b / m_(a ∪ b)` (times the sign merging `a` and `b`) when `a`, `b`
//! are disjoint with `a ∪ b` a Scarf face, else zero.

use std::collections::{BTreeMap, HashMap};

use crate::complex::{koszul_complex, scarf_faces, subsets_of_size, FreeComplex, RingContext};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::monomial::{DegreeBox, MonomialIdeal, Multidegree};
use crate::resolution::merge_sign;

/// Koszul part and word of a generator of `Y`.
type Key = (Vec<usize>, Vec<usize>);

struct Builder<'a, F: Field> {
    field: &'a F,
    ideal: &'a MonomialIdeal,
    faces: Vec<Vec<usize>>,
    face_index: HashMap<Vec<usize>, usize>,
    /// `d(T_L)` as `(Koszul subset, scalar)`.
    cycles: Vec<Vec<(Vec<usize>, F::Elem)>>,
    word_memo: HashMap<Vec<usize>, Vec<(Key, F::Elem)>>,
}

impl<F: Field> Builder<'_, F> {
    fn weight(&self, word: &[usize]) -> usize {
        word.iter().map(|&f| self.faces[f].len() + 1).sum()
    }

    fn degree(&self, key: &Key) -> Multidegree {
        let n = self.ideal.num_vars();
        key.1.iter().fold(Multidegree::indicator(n, &key.0), |acc, &f| {
            acc.add(&self.ideal.lcm_of_subset(&self.faces[f]).expect("face indices in range"))
        })
    }

    fn sign(&self, odd: bool) -> F::Elem {
        self.field.from_i64(if odd { -1 } else { 1 })
    }

    /// Differential of `1 ⊗ word`.
    fn word_differential(&mut self, word: &[usize]) -> Vec<(Key, F::Elem)> {
        if let Some(v) = self.word_memo.get(word) {
            return v.clone();
        }
        let out = match word {
            [] => Vec::new(),
            [f] => self.cycles[*f].iter().map(|(b, x)| ((b.clone(), Vec::new()), x.clone())).collect(),
            [prefix @ .., last] => {
                let mut out: Vec<(Key, F::Elem)> = self
                    .word_differential(prefix)
                    .into_iter()
                    .map(|((b, mut w), x)| {
                        w.push(*last);
                        ((b, w), x)
                    })
                    .collect();
                let (a, b) = (&self.faces[prefix[prefix.len() - 1]], &self.faces[*last]);
                if let Some(merge) = merge_sign(a, b) {
                    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
                    u.sort_unstable();
                    if let Some(&fu) = self.face_index.get(&u) {
                        let odd = self.weight(prefix) % 2 == 1;
                        let mut w = prefix[..prefix.len() - 1].to_vec();
                        w.push(fu);
                        let x = self.field.mul(&self.sign(odd), &self.field.from_i64(merge));
                        out.push(((Vec::new(), w), x));
                    }
                }
                out
            }
        };
        self.word_memo.insert(word.to_vec(), out.clone());
        out
    }

    /// Differential of `e_A ⊗ word`.
    fn differential(&mut self, key: &Key) -> Vec<(Key, F::Elem)> {
        let (a, word) = key;
        let mut out = Vec::new();
        for p in 0..a.len() {
            let mut b = a.clone();
            b.remove(p);
            out.push(((b, word.clone()), self.sign(p % 2 == 1)));
        }
        let outer = self.sign(a.len() % 2 == 1);
        for ((b, w), x) in self.word_differential(word) {
            let Some(merge) = merge_sign(a, &b) else { continue };
            let mut u: Vec<usize> = a.iter().chain(&b).copied().collect();
            u.sort_unstable();
            let y = self.field.mul(&self.field.mul(&outer, &self.field.from_i64(merge)), &x);
            out.push(((u, w), y));
        }
        out
    }
}

/// Words in the face symbols of each total weight up to `max`.
fn words_by_weight(weights: &[usize], max: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max + 1];
    out[0].push(Vec::new());
    for k in 1..=max {
        let mut level = Vec::new();
        for (f, &w) in weights.iter().enumerate() {
            if w <= k {
                for prefix in &out[k - w] {
                    let mut word = prefix.clone();
                    word.push(f);
                    level.push(word);
                }
            }
        }
        level.sort();
        out[k] = level;
    }
    out
}

/// Nonempty Scarf faces in graded lex order.
fn nonempty_faces(ideal: &MonomialIdeal) -> Result<Vec<Vec<usize>>> {
    Ok(scarf_faces(ideal)?.into_iter().skip(1).flatten().collect())
}

/// `rank Y_i = sum_a binom(n, a) * #(words of weight i - a)` for `i <= imax`.
pub fn eagon_ranks(ideal: &MonomialIdeal, imax: usize) -> Result<Vec<usize>> {
    let n = ideal.num_vars();
    let faces = nonempty_faces(ideal)?;
    let mut words = vec![0usize; imax + 1];
    words[0] = 1;
    for k in 1..=imax {
        words[k] = faces.iter().filter(|f| f.len() < k).map(|f| words[k - f.len() - 1]).sum();
    }
    Ok((0..=imax).map(|i| (0..=i.min(n)).map(|a| binomial(n, a) * words[i - a]).sum()).collect())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn label(key: &Key, faces: &[Vec<usize>]) -> String {
    let set = |s: &[usize]| s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    let mut parts = Vec::new();
    if !key.0.is_empty() || key.1.is_empty() {
        parts.push(format!("e{{{}}}", set(&key.0)));
    }
    parts.extend(key.1.iter().map(|&f| format!("T{{{}}}", set(&faces[f]))));
    parts.join("|")
}

type Cycle<E> = Vec<(Vec<usize>, E)>;

/// Wedge product in `K ⊗ R` of `z_a` (multidegree `ma`) and `z_b`.
fn wedge<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    (za, ma): (&Cycle<F::Elem>, &Multidegree),
    (zb, mb): (&Cycle<F::Elem>, &Multidegree),
) -> BTreeMap<Vec<usize>, F::Elem> {
    let n = ideal.num_vars();
    let total = ma.add(mb);
    let mut out: BTreeMap<Vec<usize>, F::Elem> = BTreeMap::new();
    for (a, x) in za {
        for (b, y) in zb {
            let Some(sign) = merge_sign(a, b) else { continue };
            let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
            u.sort_unstable();
            let cofactor = total.checked_sub(&Multidegree::indicator(n, &u)).expect("homogeneous");
            if ideal.contains(&cofactor) {
                continue;
            }
            let v = field.mul(&field.mul(x, y), &field.from_i64(sign));
            let e = out.entry(u).or_insert_with(|| field.zero());
            *e = field.add(e, &v);
        }
    }
    out.retain(|_, v| !field.is_zero(v));
    out
}

/// `d(T_a) d(T_b)` must equal `±δ(a,b) d(T_(a ∪ b))` on the nose (zero when
/// `δ` vanishes); checks every pair of faces up to index `upto`.
fn products_consistent<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    faces: &[Vec<usize>],
    face_index: &HashMap<Vec<usize>, usize>,
    cycles: &[Cycle<F::Elem>],
    upto: usize,
) -> bool {
    let degs: Vec<Multidegree> = faces.iter().map(|f| ideal.lcm_of_subset(f).expect("face")).collect();
    for a in 0..=upto {
        for b in 0..=upto {
            let lhs = wedge(field, ideal, (&cycles[a], &degs[a]), (&cycles[b], &degs[b]));
            let mut rhs: BTreeMap<Vec<usize>, F::Elem> = BTreeMap::new();
            if let Some(sign) = merge_sign(&faces[a], &faces[b]) {
                let mut u: Vec<usize> = faces[a].iter().chain(&faces[b]).copied().collect();
                u.sort_unstable();
                if let Some(&c) = face_index.get(&u) {
                    if c > upto {
                        continue;
                    }
                    let delta = degs[a].add(&degs[b]).checked_sub(&degs[c]).expect("lcm divides product");
                    let n = ideal.num_vars();
                    for (s, x) in &cycles[c] {
                        let cofactor = degs[c].checked_sub(&Multidegree::indicator(n, s)).expect("homogeneous").add(&delta);
                        if !ideal.contains(&cofactor) {
                            rhs.insert(s.clone(), field.mul(x, &field.from_i64(sign)));
                        }
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Searches, face by face, for cycles that represent the Scarf classes and
/// multiply consistently. Candidates for `d(T_L)` are `±` the homology
/// representative, then `±(m_L / x_V) e_V` for `V ⊆ supp(m_L)`, `|V| = |L|`.
fn compatible_cycles<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    faces: &[Vec<usize>],
    face_index: &HashMap<Vec<usize>, usize>,
    koszul: &FreeComplex<F>,
    representatives: &[Cycle<F::Elem>],
) -> Option<Vec<Cycle<F::Elem>>> {
    let n = ideal.num_vars();
    let minus = field.from_i64(-1);
    let negate = |z: &Cycle<F::Elem>| -> Cycle<F::Elem> { z.iter().map(|(s, x)| (s.clone(), field.mul(x, &minus))).collect() };
    let mut options: Vec<Vec<Cycle<F::Elem>>> = Vec::with_capacity(faces.len());
    for (face, rep) in faces.iter().zip(representatives) {
        let m = ideal.lcm_of_subset(face).ok()?;
        let support = m.support();
        let basis = koszul.homology_basis(face.len(), &m);
        let subsets = subsets_of_size(n, face.len());
        let mut here = vec![rep.clone(), negate(rep)];
        for pick in subsets_of_size(support.len(), face.len()) {
            let v: Vec<usize> = pick.iter().map(|&k| support[k]).collect();
            let cofactor = m.checked_sub(&Multidegree::indicator(n, &v))?;
            if ideal.contains(&cofactor) {
                continue;
            }
            let g = subsets.iter().position(|s| *s == v)?;
            if basis.classify(&[(g, field.one())]).is_some_and(|c| !c.is_empty()) {
                let z = vec![(v, field.one())];
                for c in [negate(&z), z] {
                    if !here.contains(&c) {
                        here.push(c);
                    }
                }
            }
        }
        options.push(here);
    }
    let mut chosen: Vec<Cycle<F::Elem>> = Vec::with_capacity(faces.len());
    fn search<F: Field>(
        field: &F,
        ideal: &MonomialIdeal,
        faces: &[Vec<usize>],
        face_index: &HashMap<Vec<usize>, usize>,
        options: &[Vec<Cycle<F::Elem>>],
        chosen: &mut Vec<Cycle<F::Elem>>,
    ) -> bool {
        let k = chosen.len();
        if k == faces.len() {
            return true;
        }
        for z in &options[k] {
            chosen.push(z.clone());
            if products_consistent(field, ideal, faces, face_index, chosen, k)
                && search(field, ideal, faces, face_index, options, chosen)
            {
                return true;
            }
            chosen.pop();
        }
        false
    }
    search(field, ideal, faces, face_index, &options, &mut chosen).then_some(chosen)
}

/// `Y_0, ..., Y_imax` of the Eagon resolution, as a complex over `R`.
///
/// `d(T_L)` is the homology representative of the Scarf class in
/// multidegree `m_L`. If those representatives do not multiply compatibly
/// with `δ`, a compatible choice is searched for among sign changes and
/// monomial cycles `(m_L / x_V) e_V`; if none exists the construction is
/// refused.
pub fn eagon_resolution<F: Field>(field: &F, ideal: &MonomialIdeal, imax: usize) -> Result<FreeComplex<F>> {
    if !ideal.is_generic() {
        return Err(Error::Precondition("Eagon resolution needs a generic ideal".into()));
    }
    let n = ideal.num_vars();
    let faces = nonempty_faces(ideal)?;
    let koszul = koszul_complex(field, n, RingContext::Quotient(ideal.clone()))?;
    let mut cycles = Vec::with_capacity(faces.len());
    for face in &faces {
        let m = ideal.lcm_of_subset(face)?;
        let reps = koszul.homology_representatives(face.len(), &m);
        if reps.len() != 1 {
            return Err(Error::Inconsistency(format!(
                "H_{}(K ⊗ R) in multidegree {m:?} has dimension {}, expected 1 for a Scarf face",
                face.len(),
                reps.len()
            )));
        }
        let subsets = subsets_of_size(n, face.len());
        cycles.push(reps[0].iter().map(|(g, x)| (subsets[*g].clone(), x.clone())).collect());
    }
    let face_index: HashMap<Vec<usize>, usize> = faces.iter().enumerate().map(|(k, f)| (f.clone(), k)).collect();
    if !faces.is_empty() && !products_consistent(field, ideal, &faces, &face_index, &cycles, faces.len() - 1) {
        cycles = compatible_cycles(field, ideal, &faces, &face_index, &koszul, &cycles).ok_or_else(|| {
            Error::Inconsistency(format!("no compatible choice of d(T_L) found for {ideal}"))
        })?;
    }
    let weights: Vec<usize> = faces.iter().map(|f| f.len() + 1).collect();
    let words = words_by_weight(&weights, imax);
    let mut builder = Builder { field, ideal, faces, face_index, cycles, word_memo: HashMap::new() };

    let mut keys: Vec<Vec<Key>> = Vec::with_capacity(imax + 1);
    for i in 0..=imax {
        let mut level = Vec::new();
        for a in 0..=i.min(n) {
            for s in subsets_of_size(n, a) {
                for w in &words[i - a] {
                    level.push((s.clone(), w.clone()));
                }
            }
        }
        keys.push(level);
    }
    let index: Vec<HashMap<Key, usize>> =
        keys.iter().map(|level| level.iter().enumerate().map(|(k, key)| (key.clone(), k)).collect()).collect();

    let mut diffs = vec![Vec::new()];
    for i in 1..=imax {
        let mut level = Vec::with_capacity(keys[i].len());
        for key in &keys[i] {
            let mut col = Vec::new();
            for (row, x) in builder.differential(key) {
                let r = *index[i - 1].get(&row).ok_or_else(|| {
                    Error::Inconsistency(format!("Eagon differential hits unknown generator {}", label(&row, &builder.faces)))
                })?;
                col.push((r, x));
            }
            level.push(linalg::collect_sparse(field, col));
        }
        diffs.push(level);
    }
    let modules = keys.iter().map(|level| level.iter().map(|k| builder.degree(k)).collect()).collect();
    let labels = keys.iter().map(|level| level.iter().map(|k| label(k, &builder.faces)).collect()).collect();
    FreeComplex::new(field.clone(), n, RingContext::Quotient(ideal.clone()), modules, labels, diffs)
}

/// Smallest multidegree box containing every generator of the complex.
pub fn generator_box<F: Field>(complex: &FreeComplex<F>) -> Multidegree {
    (0..complex.len())
        .flat_map(|i| complex.module(i).iter())
        .fold(Multidegree::zero(complex.num_vars()), |acc, g| acc.lcm(g))
}

/// Result of checking a candidate resolution of `k` within a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub bound: Multidegree,
    /// Homological degrees `1..=max_degree` were checked.
    pub max_degree: usize,
    /// `(i, j, dim H_i)` wherever homology differs from `k` in degree 0.
    pub defects: Vec<(usize, Multidegree, usize)>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks `H_0 = k` and `H_i = 0` for `1 <= i <= max_degree` in every
/// multidegree `<= bound`. Needs `max_degree + 1` stored modules.
pub fn check_resolves_residue_field<F: Field>(
    complex: &FreeComplex<F>,
    max_degree: usize,
    bound: &Multidegree,
) -> Result<ExactnessReport> {
    if max_degree + 1 >= complex.len() {
        return Err(Error::Precondition(format!(
            "exactness in degree {max_degree} needs modules up to degree {}",
            max_degree + 1
        )));
    }
    if let Err((i, c)) = complex.check_d_squared() {
        return Err(Error::Inconsistency(format!("d∘d != 0 on generator {} of degree {i}", complex.labels(i)[c])));
    }
    let grid = DegreeBox::new(bound);
    let points: Vec<Multidegree> = (0..grid.size()).map(|k| grid.multidegree(k)).collect();
    let mut defects = Vec::new();
    for i in 0..=max_degree {
        let found: BTreeMap<Multidegree, usize> = {
            use rayon::prelude::*;
            points
                .par_iter()
                .filter_map(|j| {
                    let d = complex.homology_dim(i, j);
                    let expected = usize::from(i == 0 && j.is_zero());
                    (d != expected).then(|| (j.clone(), d))
                })
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        };
        defects.extend(found.into_iter().map(|(j, d)| (i, j, d)));
    }
    Ok(ExactnessReport { bound: bound.clone(), max_degree, defects })
}
