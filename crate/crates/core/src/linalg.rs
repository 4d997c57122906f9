//! Sparse exact linear algebra: semi-echelon bases with combination tracking.
//!
//! All matrices in this crate are small per multidegree, but they are very
//! sparse, so vectors are sorted `(index, value)` lists.

use crate::field::Field;

/// Sorted by index, no explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `a + c * b` for sorted sparse vectors.
pub fn axpy<F: Field>(field: &F, a: &[(usize, F::Elem)], c: &F::Elem, b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(field: &F, c: &F::Elem, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(c, x))).collect()
}

/// Builds a sorted sparse vector from unsorted entries, summing duplicates.
pub fn collect_sparse<F: Field>(field: &F, mut entries: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(entries.len());
    for (i, x) in entries {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = field.add(y, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !field.is_zero(x));
    out
}

struct Row<E> {
    vec: SparseVec<E>,
    tag: SparseVec<E>,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Debug, Clone, PartialEq)]
pub enum Insertion<E> {
    /// Vector was independent; it is now stored with this pivot index.
    Independent(usize),
    /// Vector lay in the span. The payload is the reduced tag: the input tag
    /// minus the tags of the rows used, i.e. a linear relation when tags
    /// record combinations of inputs.
    Dependent(SparseVec<E>),
}

/// Semi-echelon basis over a fixed ambient dimension. Each stored row is
/// normalized to leading coefficient one at its pivot (its smallest index
/// at insertion time). Pivots are chosen first-nonzero, so results are
/// deterministic in the insertion order.
pub struct Echelon<F: Field> {
    field: F,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<Row<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Self { field, pivot_row: vec![None; dim], rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.pivot_row.len()
    }

    /// Reduces `v` (and its tag alongside) until its smallest index is not a
    /// pivot, or until it vanishes.
    fn reduce(&self, mut v: SparseVec<F::Elem>, mut tag: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>, Option<usize>) {
        let f = &self.field;
        loop {
            let Some((idx, c)) = v.first().cloned() else {
                return (v, tag, None);
            };
            match self.pivot_row[idx] {
                Some(r) => {
                    let row = &self.rows[r];
                    let m = f.neg(&c);
                    v = axpy(f, &v, &m, &row.vec);
                    if !row.tag.is_empty() {
                        tag = axpy(f, &tag, &m, &row.tag);
                    }
                }
                None => return (v, tag, Some(idx)),
            }
        }
    }

    pub fn insert(&mut self, v: SparseVec<F::Elem>, tag: SparseVec<F::Elem>) -> Insertion<F::Elem> {
        let (v, tag, lead) = self.reduce(v, tag);
        match lead {
            None => Insertion::Dependent(tag),
            Some(idx) => {
                let inv = self.field.inv(&v[0].1);
                let row = Row { vec: scale(&self.field, &inv, &v), tag: scale(&self.field, &inv, &tag) };
                self.pivot_row[idx] = Some(self.rows.len());
                self.rows.push(row);
                Insertion::Independent(idx)
            }
        }
    }

    /// Inserts without tracking; returns whether the vector was independent.
    pub fn push(&mut self, v: SparseVec<F::Elem>) -> bool {
        matches!(self.insert(v, Vec::new()), Insertion::Independent(_))
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v.to_vec(), Vec::new()).2.is_none()
    }

    /// Fully reduces `v`, returning the accumulated tag, provided `v` lies in
    /// the span. Tags of stored rows are subtracted, so for a vector in the
    /// span the result is minus its coordinates in terms of the row tags.
    pub fn coordinates(&self, v: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let (_, tag, lead) = self.reduce(v.to_vec(), Vec::new());
        match lead {
            None => Some(scale(&self.field, &self.field.neg(&self.field.one()), &tag)),
            Some(_) => None,
        }
    }
}

/// Basis of the null space of the matrix whose columns are `columns`, each
/// sparse over `rows` indices. Kernel vectors are indexed by column.
pub fn kernel<F: Field>(field: &F, rows: usize, columns: &[SparseVec<F::Elem>]) -> Vec<SparseVec<F::Elem>> {
    let mut ech = Echelon::new(field.clone(), rows);
    let mut out = Vec::new();
    for (c, col) in columns.iter().enumerate() {
        if let Insertion::Dependent(rel) = ech.insert(col.clone(), vec![(c, field.one())]) {
            out.push(rel);
        }
    }
    out
}

pub fn rank<F: Field>(field: &F, rows: usize, columns: &[SparseVec<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field.clone(), rows);
    for col in columns {
        ech.push(col.clone());
    }
    ech.rank()
}
