//! Multigraded free chain complexes over `S`, `R = S/I` or `k`.
//!
//! A differential entry between generators `g` (column) and `h` (row) is a
//! scalar times the monomial `x^(deg g - deg h)`, so only the scalar is
//! stored. Evaluating a complex in a multidegree `j` gives a finite complex
//! of `k`-vector spaces; homology is computed one multidegree at a time.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Echelon, Insertion, SparseVec};
use crate::monomial::{DegreeBox, MonomialIdeal, Multidegree};

/// The ring the free modules live over, as `S` modulo a monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingContext {
    /// `S = k[x_1..x_n]`.
    Polynomial,
    /// `R = S/I`.
    Quotient(MonomialIdeal),
    /// `k = S/(x_1..x_n)`.
    ResidueField,
}

impl RingContext {
    /// Whether `x^m` is zero in this ring.
    pub fn kills(&self, m: &Multidegree) -> bool {
        match self {
            RingContext::Polynomial => false,
            RingContext::Quotient(i) => i.contains(m),
            RingContext::ResidueField => !m.is_zero(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RingContext::Polynomial => "S",
            RingContext::Quotient(_) => "R",
            RingContext::ResidueField => "k",
        }
    }
}

/// Per homological degree, nonzero dimensions keyed by multidegree.
pub type GradedDims = Vec<BTreeMap<Multidegree, usize>>;

#[derive(Clone, Debug)]
pub struct FreeComplex<F: Field> {
    field: F,
    num_vars: usize,
    context: RingContext,
    modules: Vec<Vec<Multidegree>>,
    labels: Vec<Vec<String>>,
    /// `differentials[i]` maps `C_i -> C_{i-1}`, one sparse column per
    /// generator of `C_i`; `differentials[0]` is empty.
    differentials: Vec<Vec<SparseVec<F::Elem>>>,
}

impl<F: Field> FreeComplex<F> {
    /// Validates shapes and homogeneity, and drops entries whose monomial is
    /// zero in the ring context.
    pub fn new(
        field: F,
        num_vars: usize,
        context: RingContext,
        modules: Vec<Vec<Multidegree>>,
        labels: Vec<Vec<String>>,
        mut differentials: Vec<Vec<SparseVec<F::Elem>>>,
    ) -> Result<Self> {
        if differentials.len() != modules.len() || labels.len() != modules.len() {
            return Err(Error::Input("complex: modules, labels and differentials disagree in length".into()));
        }
        for (i, gens) in modules.iter().enumerate() {
            if labels[i].len() != gens.len() {
                return Err(Error::Input(format!("complex: labels of degree {i} have wrong length")));
            }
            if gens.iter().any(|g| g.len() != num_vars) {
                return Err(Error::Input(format!("complex: generator of degree {i} has wrong length")));
            }
            if i == 0 {
                if !differentials[0].is_empty() {
                    return Err(Error::Input("complex: differential out of degree 0 must be empty".into()));
                }
                continue;
            }
            if differentials[i].len() != gens.len() {
                return Err(Error::Input(format!("complex: differential {i} has wrong number of columns")));
            }
            for (c, col) in differentials[i].iter_mut().enumerate() {
                for (r, x) in col.iter() {
                    let Some(row_deg) = modules[i - 1].get(*r) else {
                        return Err(Error::Input(format!("complex: row {r} out of range in degree {i}")));
                    };
                    if field.is_zero(x) {
                        return Err(Error::Input("complex: explicit zero entry".into()));
                    }
                    if !row_deg.divides(&gens[c]) {
                        return Err(Error::Input(format!(
                            "complex: entry ({r},{c}) of d_{i} is not homogeneous: {row_deg:?} does not divide {:?}",
                            gens[c]
                        )));
                    }
                }
                let src = &gens[c];
                col.retain(|(r, _)| !context.kills(&src.checked_sub(&modules[i - 1][*r]).unwrap()));
            }
        }
        Ok(Self { field, num_vars, context, modules, labels, differentials })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn context(&self) -> &RingContext {
        &self.context
    }

    /// Number of homological degrees stored (`0..len`).
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.iter().all(Vec::is_empty)
    }

    pub fn module(&self, i: usize) -> &[Multidegree] {
        self.modules.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn labels(&self, i: usize) -> &[String] {
        self.labels.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    /// Generator counts per homological degree and multidegree.
    pub fn graded_ranks(&self) -> GradedDims {
        self.modules
            .iter()
            .map(|gens| {
                let mut m = BTreeMap::new();
                for g in gens {
                    *m.entry(g.clone()).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// Columns of `d_i`; empty for `i = 0` or out of range.
    pub fn differential(&self, i: usize) -> &[SparseVec<F::Elem>] {
        self.differentials.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Entries of `d_i` as `(row, col, scalar, monomial)`.
    pub fn entries(&self, i: usize) -> Vec<(usize, usize, F::Elem, Multidegree)> {
        let mut out = Vec::new();
        for (c, col) in self.differential(i).iter().enumerate() {
            for (r, x) in col {
                let mono = self.modules[i][c].checked_sub(&self.modules[i - 1][*r]).unwrap();
                out.push((*r, c, x.clone(), mono));
            }
        }
        out
    }

    /// Entries that are nonzero scalars with trivial monomial.
    pub fn unit_entries(&self) -> usize {
        (1..self.len()).map(|i| self.entries(i).iter().filter(|e| e.3.is_zero()).count()).sum()
    }

    /// Checks `d_{i-1} d_i = 0` symbolically, entry by entry, over the ring
    /// context. Returns the first offending `(i, column)` on failure.
    pub fn check_d_squared(&self) -> std::result::Result<(), (usize, usize)> {
        let f = &self.field;
        for i in 2..self.len() {
            for (c, col) in self.differentials[i].iter().enumerate() {
                let mut acc: HashMap<usize, F::Elem> = HashMap::new();
                for (h, a) in col {
                    for (k, b) in &self.differentials[i - 1][*h] {
                        let e = acc.entry(*k).or_insert_with(|| f.zero());
                        *e = f.add(e, &f.mul(a, b));
                    }
                }
                for (k, v) in acc {
                    if f.is_zero(&v) {
                        continue;
                    }
                    let mono = self.modules[i][c].checked_sub(&self.modules[i - 2][k]).unwrap();
                    if !self.context.kills(&mono) {
                        return Err((i, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis of `C_i` in multidegree `j`: generators `g <= j` whose
    /// cofactor `x^(j - g)` survives in the ring.
    pub fn basis_at(&self, i: usize, j: &Multidegree) -> Vec<usize> {
        self.module(i)
            .iter()
            .enumerate()
            .filter(|(_, g)| j.checked_sub(g).is_some_and(|cof| !self.context.kills(&cof)))
            .map(|(k, _)| k)
            .collect()
    }

    /// Matrix of `d_i` in multidegree `j` against the given bases, as
    /// columns indexed by `source` positions with rows by `target` positions.
    fn matrix_at(&self, i: usize, source: &[usize], target: &[usize]) -> Vec<SparseVec<F::Elem>> {
        let mut pos = HashMap::with_capacity(target.len());
        for (p, &h) in target.iter().enumerate() {
            pos.insert(h, p);
        }
        source
            .iter()
            .map(|&g| {
                let mut col: SparseVec<F::Elem> = self.differentials[i][g]
                    .iter()
                    .filter_map(|(h, x)| pos.get(h).map(|&p| (p, x.clone())))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect()
    }

    fn rank_at(&self, i: usize, j: &Multidegree) -> usize {
        if i == 0 || i >= self.len() {
            return 0;
        }
        let src = self.basis_at(i, j);
        if src.is_empty() {
            return 0;
        }
        let tgt = self.basis_at(i - 1, j);
        linalg::rank(&self.field, tgt.len(), &self.matrix_at(i, &src, &tgt))
    }

    /// `dim_k H_i(C)_j` for one degree and multidegree. Degrees at or past
    /// the last stored module are computed as if the complex stopped there.
    pub fn homology_dim(&self, i: usize, j: &Multidegree) -> usize {
        let dim = self.basis_at(i, j).len();
        if dim == 0 {
            return 0;
        }
        dim - self.rank_at(i, j) - self.rank_at(i + 1, j)
    }

    /// Multigraded homology in every multidegree `j <= bound`.
    pub fn homology(&self, bound: &Multidegree) -> GradedDims {
        let grid = DegreeBox::new(bound);
        let points: Vec<Multidegree> = (0..grid.size()).map(|k| grid.multidegree(k)).collect();
        (0..self.len())
            .map(|i| {
                points
                    .par_iter()
                    .filter_map(|j| {
                        let d = self.homology_dim(i, j);
                        (d > 0).then(|| (j.clone(), d))
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .collect()
            })
            .collect()
    }

    /// Cycles of `C_i` in multidegree `j` that are independent modulo
    /// boundaries, each as a sparse vector over generator indices of `C_i`
    /// (the cofactor monomial is `x^(j - deg g)`).
    pub fn homology_representatives(&self, i: usize, j: &Multidegree) -> Vec<SparseVec<F::Elem>> {
        self.homology_basis(i, j).representatives
    }

    /// Homology basis in `(i, j)` together with the data needed to express
    /// arbitrary cycles in it.
    pub fn homology_basis(&self, i: usize, j: &Multidegree) -> HomologyBasis<F> {
        let basis = self.basis_at(i, j);
        let mut echelon = Echelon::new(self.field.clone(), basis.len());
        let mut representatives = Vec::new();
        if !basis.is_empty() {
            let cycles = if i == 0 {
                (0..basis.len()).map(|p| vec![(p, self.field.one())]).collect()
            } else {
                let tgt = self.basis_at(i - 1, j);
                linalg::kernel(&self.field, tgt.len(), &self.matrix_at(i, &basis, &tgt))
            };
            if i + 1 < self.len() {
                let above = self.basis_at(i + 1, j);
                for col in self.matrix_at(i + 1, &above, &basis) {
                    echelon.push(col);
                }
            }
            for z in cycles {
                let tag = vec![(representatives.len(), self.field.one())];
                if let Insertion::Independent(_) = echelon.insert(z.clone(), tag) {
                    representatives.push(z);
                }
            }
            for z in representatives.iter_mut() {
                *z = z.iter().map(|(p, x)| (basis[*p], x.clone())).collect();
            }
        }
        HomologyBasis { basis, echelon, representatives }
    }

    /// Cancels unit entries (nonzero scalars with trivial monomial) until
    /// none remain. The result is homotopy equivalent to `self`; over `S`
    /// with `self` a resolution it is the minimal resolution.
    pub fn minimize(&self) -> Self {
        let f = &self.field;
        let len = self.len();
        let mut cols: Vec<Vec<BTreeMap<usize, F::Elem>>> = self
            .differentials
            .iter()
            .map(|d| d.iter().map(|c| c.iter().cloned().collect()).collect())
            .collect();
        let mut alive: Vec<Vec<bool>> = self.modules.iter().map(|m| vec![true; m.len()]).collect();
        loop {
            let mut pivot = None;
            'search: for i in 1..len {
                for (g, col) in cols[i].iter().enumerate() {
                    if !alive[i][g] {
                        continue;
                    }
                    for (h, x) in col {
                        if self.modules[i - 1][*h] == self.modules[i][g] && !f.is_zero(x) {
                            pivot = Some((i, g, *h));
                            break 'search;
                        }
                    }
                }
            }
            let Some((i, g, h)) = pivot else { break };
            let pivot_col = cols[i][g].clone();
            let c_inv = f.inv(&pivot_col[&h]);
            for g2 in 0..cols[i].len() {
                if g2 == g || !alive[i][g2] {
                    continue;
                }
                let Some(a) = cols[i][g2].get(&h).cloned() else { continue };
                let factor = f.neg(&f.mul(&a, &c_inv));
                let src = self.modules[i][g2].clone();
                let col = &mut cols[i][g2];
                for (k, x) in &pivot_col {
                    let e = col.entry(*k).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&factor, x));
                }
                col.retain(|k, x| {
                    !f.is_zero(x) && !self.context.kills(&src.checked_sub(&self.modules[i - 1][*k]).unwrap())
                });
            }
            alive[i][g] = false;
            alive[i - 1][h] = false;
            cols[i][g].clear();
            cols[i - 1][h].clear();
            for col in cols[i].iter_mut() {
                col.remove(&h);
            }
            if i + 1 < len {
                for col in cols[i + 1].iter_mut() {
                    col.remove(&g);
                }
            }
        }
        // Reindex survivors.
        let new_index: Vec<Vec<Option<usize>>> = alive
            .iter()
            .map(|a| {
                let mut next = 0;
                a.iter()
                    .map(|&live| {
                        live.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut modules = Vec::with_capacity(len);
        let mut labels = Vec::with_capacity(len);
        let mut diffs = Vec::with_capacity(len);
        for i in 0..len {
            let keep: Vec<usize> = (0..alive[i].len()).filter(|&g| alive[i][g]).collect();
            modules.push(keep.iter().map(|&g| self.modules[i][g].clone()).collect());
            labels.push(keep.iter().map(|&g| self.labels[i][g].clone()).collect());
            if i == 0 {
                diffs.push(Vec::new());
                continue;
            }
            diffs.push(
                keep.iter()
                    .map(|&g| {
                        cols[i][g]
                            .iter()
                            .filter(|(_, x)| !f.is_zero(x))
                            .map(|(h, x)| (new_index[i - 1][*h].expect("dead row survived"), x.clone()))
                            .collect()
                    })
                    .collect(),
            );
        }
        Self {
            field: self.field.clone(),
            num_vars: self.num_vars,
            context: self.context.clone(),
            modules,
            labels,
            differentials: diffs,
        }
    }

    /// Same complex with differential entries viewed over another ring
    /// context (e.g. tensoring with `k` or `R`).
    pub fn with_context(&self, context: RingContext) -> Result<Self> {
        Self::new(
            self.field.clone(),
            self.num_vars,
            context,
            self.modules.clone(),
            self.labels.clone(),
            self.differentials.clone(),
        )
    }
}

/// A basis of `H_i(C)_j`: representative cycles plus an echelon form of
/// boundaries and representatives used to classify cycles.
pub struct HomologyBasis<F: Field> {
    /// Generators of `C_i` spanning the component in multidegree `j`.
    pub basis: Vec<usize>,
    echelon: Echelon<F>,
    /// Representative cycles over generator indices of `C_i`.
    pub representatives: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> HomologyBasis<F> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `cycle` (over generator indices) in the
    /// representative basis, or `None` if `cycle` is not a cycle here.
    pub fn classify(&self, cycle: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let mut v = Vec::with_capacity(cycle.len());
        for (g, x) in cycle {
            v.push((self.basis.binary_search(g).ok()?, x.clone()));
        }
        v.sort_by_key(|e| e.0);
        self.echelon.coordinates(&v)
    }
}

/// All `k`-subsets of `0..r` in lexicographic order.
pub fn subsets_of_size(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..r {
            if r - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, r, k, cur, out);
            cur.pop();
        }
    }
    rec(0, r, k, &mut cur, &mut out);
    out
}

fn subset_label(prefix: &str, s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
    format!("{prefix}{{{}}}", inner.join(","))
}

/// Largest generator count for which subset-indexed complexes are built.
pub const MAX_SUBSET_GENERATORS: usize = 24;

/// Simplicial-style complex on a family of subsets closed under removing
/// one element, with `d(T_J) = sum_p (-1)^p T_{J - j_p}` and generator
/// degrees given by `degree`.
fn subset_complex<F: Field>(
    field: &F,
    num_vars: usize,
    context: RingContext,
    faces: Vec<Vec<Vec<usize>>>,
    prefix: &str,
    degree: impl Fn(&[usize]) -> Multidegree,
) -> Result<FreeComplex<F>> {
    let index: Vec<HashMap<Vec<usize>, usize>> =
        faces.iter().map(|fs| fs.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect()).collect();
    let mut diffs = vec![Vec::new()];
    for i in 1..faces.len() {
        let cols = faces[i]
            .iter()
            .map(|s| {
                let entries = (0..s.len())
                    .map(|p| {
                        let mut t = s.clone();
                        t.remove(p);
                        let row = index[i - 1][&t];
                        (row, field.from_i64(if p % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect();
                linalg::collect_sparse(field, entries)
            })
            .collect();
        diffs.push(cols);
    }
    let modules = faces.iter().map(|fs| fs.iter().map(|s| degree(s)).collect()).collect();
    let labels = faces.iter().map(|fs| fs.iter().map(|s| subset_label(prefix, s)).collect()).collect();
    FreeComplex::new(field.clone(), num_vars, context, modules, labels, diffs)
}

fn check_generator_count(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.num_generators() > MAX_SUBSET_GENERATORS {
        return Err(Error::Input(format!(
            "{} generators exceed the limit of {MAX_SUBSET_GENERATORS} for subset-indexed complexes",
            ideal.num_generators()
        )));
    }
    Ok(())
}

/// The Taylor resolution of `S/I` over `S`: one generator `T_J` of degree
/// `m_J` per subset `J` of the minimal generators.
pub fn taylor_complex<F: Field>(field: &F, ideal: &MonomialIdeal) -> Result<FreeComplex<F>> {
    check_generator_count(ideal)?;
    let r = ideal.num_generators();
    let faces = (0..=r).map(|k| subsets_of_size(r, k)).collect();
    subset_complex(field, ideal.num_vars(), RingContext::Polynomial, faces, "T", |s| {
        ideal.lcm_of_subset(s).expect("indices in range")
    })
}

/// Subsets whose lcm differs from the lcm of every other subset, grouped by
/// size (index 0 holds the empty face).
pub fn scarf_faces(ideal: &MonomialIdeal) -> Result<Vec<Vec<Vec<usize>>>> {
    check_generator_count(ideal)?;
    let r = ideal.num_generators();
    let mut count: HashMap<Multidegree, usize> = HashMap::new();
    for mask in 0u64..(1u64 << r) {
        *count.entry(ideal.lcm_of_mask(mask)).or_insert(0) += 1;
    }
    let mut faces: Vec<Vec<Vec<usize>>> = (0..=r)
        .map(|k| {
            subsets_of_size(r, k)
                .into_iter()
                .filter(|s| count[&ideal.lcm_of_subset(s).unwrap()] == 1)
                .collect()
        })
        .collect();
    while faces.len() > 1 && faces.last().is_some_and(Vec::is_empty) {
        faces.pop();
    }
    Ok(faces)
}

/// The Scarf complex: the subcomplex of the Taylor complex on Scarf faces.
pub fn scarf_complex<F: Field>(field: &F, ideal: &MonomialIdeal) -> Result<FreeComplex<F>> {
    let faces = scarf_faces(ideal)?;
    subset_complex(field, ideal.num_vars(), RingContext::Polynomial, faces, "T", |s| {
        ideal.lcm_of_subset(s).expect("indices in range")
    })
}

/// The Koszul complex on `x_1..x_n` over the given ring: generators
/// `e_A` of degree `sum_{a in A} e_a`, `d(e_A) = sum_p (-1)^p x_{a_p} e_{A - a_p}`.
pub fn koszul_complex<F: Field>(field: &F, num_vars: usize, context: RingContext) -> Result<FreeComplex<F>> {
    let faces = (0..=num_vars).map(|k| subsets_of_size(num_vars, k)).collect();
    subset_complex(field, num_vars, context, faces, "e", |s| Multidegree::indicator(num_vars, s))
}

/// Whether the Taylor resolution of `S/I` is minimal, i.e. all subset lcms
/// are distinct.
pub fn is_taylor_minimal(ideal: &MonomialIdeal) -> Result<bool> {
    check_generator_count(ideal)?;
    let r = ideal.num_generators();
    let mut seen = std::collections::HashSet::new();
    Ok((0u64..(1u64 << r)).all(|mask| seen.insert(ideal.lcm_of_mask(mask))))
}

/// Multigraded Betti numbers of `S/I` over `S`, from the minimized Taylor
/// resolution.
pub fn betti_numbers<F: Field>(field: &F, ideal: &MonomialIdeal) -> Result<GradedDims> {
    Ok(taylor_complex(field, ideal)?.minimize().graded_ranks())
}
