//! The minimal multigraded resolution of `k` over `R = S/I`, Koszul
//! homology of `R` as an algebra, and Golod certificates.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use crate::complex::{koszul_complex, scarf_faces, subsets_of_size, FreeComplex, GradedDims, RingContext};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Echelon, SparseVec};
use crate::monomial::{DegreeBox, MonomialIdeal, Multidegree};
use crate::series::BigradedSeries;

/// Minimal free resolution `F_0 = R <- F_1 <- ... <- F_tmax` of `k`,
/// computed in every multidegree below a bound.
#[derive(Clone, Debug)]
pub struct ResidueFieldResolution<F: Field> {
    tmax: u32,
    bound: Multidegree,
    complex: FreeComplex<F>,
}

impl<F: Field> ResidueFieldResolution<F> {
    pub fn tmax(&self) -> u32 {
        self.tmax
    }

    pub fn bound(&self) -> &Multidegree {
        &self.bound
    }

    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }

    /// `dim_k Tor_i^R(k,k)_j` for `i <= tmax`, `j <= bound`.
    pub fn betti(&self) -> GradedDims {
        self.complex.graded_ranks()
    }

    /// `P_R(y,t)` truncated at `(tmax, bound)`.
    pub fn poincare_series(&self) -> BigradedSeries {
        let mut p = BigradedSeries::zero(self.tmax, self.bound.clone());
        for i in 0..self.complex.len() {
            for g in self.complex.module(i) {
                p.add_term(i as u32, g.clone(), BigInt::one());
            }
        }
        p
    }
}

/// Default multidegree bound for series of `R`: `m_I`, raised to at least
/// one in every variable so that `t y_i` terms are always visible.
pub fn series_bound(ideal: &MonomialIdeal) -> Multidegree {
    let top = ideal.lcm_all();
    Multidegree::new(top.exponents().iter().map(|&e| e.max(1)).collect())
}

/// Builds the resolution degree by degree. In each multidegree `j` (visited
/// so that divisors come first) the kernel of the last differential is
/// computed and reduced against the images of generators already chosen in
/// lower multidegrees; the surviving kernel vectors become new generators.
pub fn resolve_residue_field<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    tmax: u32,
    bound: &Multidegree,
) -> Result<ResidueFieldResolution<F>> {
    let n = ideal.num_vars();
    if bound.len() != n {
        return Err(Error::Input(format!("bound has {} entries, ring has {n} variables", bound.len())));
    }
    if !ideal.lcm_all().divides(bound) {
        return Err(Error::Precondition(format!(
            "multidegree bound {bound:?} is below m_I = {:?}",
            ideal.lcm_all()
        )));
    }
    let grid = DegreeBox::new(bound);
    let killed = grid.ideal_membership(ideal);
    let order = grid.graded_elements();
    let zero = Multidegree::zero(n);

    // Generators as (multidegree, box index); differentials over the
    // previous module's generator indices.
    let mut gens: Vec<Vec<(Multidegree, usize)>> = vec![vec![(zero.clone(), 0)]];
    let mut diffs: Vec<Vec<SparseVec<F::Elem>>> = vec![Vec::new()];

    let survivors = |module: &[(Multidegree, usize)], j: &Multidegree, jx: usize| -> Vec<usize> {
        module
            .iter()
            .enumerate()
            .filter(|(_, (g, gx))| g.divides(j) && !killed[jx - gx])
            .map(|(k, _)| k)
            .collect()
    };

    // `kernel_dim[jx]`: dimension of the kernel of the last map (the
    // augmentation for `i = 0`) in multidegree `j`. By exactness in lower
    // degrees it is `dim F_i(j) - kernel_dim_{i-1}(j)`, so a multidegree
    // whose kernel is already spanned by earlier images needs no kernel
    // computation.
    let mut kernel_dim = vec![0usize; grid.size()];
    for i in 0..tmax as usize {
        let mut next: Vec<(Multidegree, usize)> = Vec::new();
        let mut next_diff: Vec<SparseVec<F::Elem>> = Vec::new();
        for j in &order {
            let jx = grid.index(j);
            let basis = survivors(&gens[i], j, jx);
            let expected = if i == 0 { basis.len() - usize::from(j.is_zero()) } else { basis.len() - kernel_dim[jx] };
            kernel_dim[jx] = expected;
            if expected == 0 {
                continue;
            }
            let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(p, &g)| (g, p)).collect();
            let mut ech = Echelon::new(field.clone(), basis.len());
            for f in survivors(&next, j, jx) {
                let img: SparseVec<F::Elem> =
                    next_diff[f].iter().filter_map(|(g, x)| pos.get(g).map(|&p| (p, x.clone()))).collect();
                ech.push(img);
            }
            if ech.rank() == expected {
                continue;
            }
            let kernel: Vec<SparseVec<F::Elem>> = if i == 0 {
                vec![vec![(0, field.one())]]
            } else {
                let rows = survivors(&gens[i - 1], j, jx);
                let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(p, &h)| (h, p)).collect();
                let cols: Vec<SparseVec<F::Elem>> = basis
                    .iter()
                    .map(|&g| diffs[i][g].iter().filter_map(|(h, x)| pos.get(h).map(|&p| (p, x.clone()))).collect())
                    .collect();
                linalg::kernel(field, rows.len(), &cols)
            };
            if kernel.len() != expected {
                return Err(Error::Inconsistency(format!(
                    "kernel of d_{i} in multidegree {j:?} has dimension {}, exactness predicts {expected}",
                    kernel.len()
                )));
            }
            for z in kernel {
                if ech.push(z.clone()) {
                    next.push((j.clone(), jx));
                    next_diff.push(z.into_iter().map(|(p, x)| (basis[p], x)).collect());
                }
            }
        }
        gens.push(next);
        diffs.push(next_diff);
    }

    let labels = gens
        .iter()
        .enumerate()
        .map(|(i, m)| (0..m.len()).map(|k| format!("F{i}[{k}]")).collect())
        .collect();
    let modules = gens.into_iter().map(|m| m.into_iter().map(|(g, _)| g).collect()).collect();
    let complex = FreeComplex::new(field.clone(), n, RingContext::Quotient(ideal.clone()), modules, labels, diffs)?;
    Ok(ResidueFieldResolution { tmax, bound: bound.clone(), complex })
}

/// `P_R(y,t)` to `t^tmax`, in the default multidegree bound.
pub fn poincare_series<F: Field>(field: &F, ideal: &MonomialIdeal, tmax: u32) -> Result<BigradedSeries> {
    Ok(resolve_residue_field(field, ideal, tmax, &series_bound(ideal))?.poincare_series())
}

/// One basis element of `H(K ⊗ R)`.
#[derive(Clone, Debug)]
pub struct HomologyClass<E> {
    pub degree: usize,
    pub multidegree: Multidegree,
    /// Cycle in `K_degree ⊗ R`, over generator indices of the Koszul complex
    /// (generator `e_A` with cofactor `x^(multidegree - e_A)`).
    pub representative: SparseVec<E>,
}

/// Koszul homology `H(K ⊗ R)` with its multiplication on positive-degree
/// classes.
#[derive(Clone, Debug)]
pub struct KoszulHomologyAlgebra<F: Field> {
    complex: FreeComplex<F>,
    bound: Multidegree,
    classes: Vec<HomologyClass<F::Elem>>,
    /// Products of positive-degree classes `a <= b`, as coordinates over
    /// class indices; zero products are omitted.
    products: BTreeMap<(usize, usize), SparseVec<F::Elem>>,
}

impl<F: Field> KoszulHomologyAlgebra<F> {
    pub fn classes(&self) -> &[HomologyClass<F::Elem>] {
        &self.classes
    }

    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }

    pub fn bound(&self) -> &Multidegree {
        &self.bound
    }

    /// `dim_k H_i(K ⊗ R)_j`, nonzero entries only.
    pub fn dims(&self) -> GradedDims {
        let mut out: GradedDims = vec![BTreeMap::new(); self.complex.len()];
        for c in &self.classes {
            *out[c.degree].entry(c.multidegree.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn product(&self, a: usize, b: usize) -> Option<&SparseVec<F::Elem>> {
        self.products.get(&(a.min(b), a.max(b)))
    }

    pub fn nonzero_products(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec<F::Elem>)> {
        self.products.iter()
    }

    /// All products of positive-degree classes vanish.
    pub fn has_trivial_products(&self) -> bool {
        self.products.is_empty()
    }
}

/// Sign of the permutation sorting the concatenation of two sorted,
/// disjoint index lists; `None` if they overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<i64> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Wedge product of two chains of `K ⊗ R` given over Koszul generator
/// indices and homogeneous of degrees `ja`, `jb`.
pub(crate) fn koszul_wedge<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    subsets: &[Vec<Vec<usize>>],
    subset_index: &[HashMap<Vec<usize>, usize>],
    (ia, ja, za): (usize, &Multidegree, &[(usize, F::Elem)]),
    (ib, jb, zb): (usize, &Multidegree, &[(usize, F::Elem)]),
) -> SparseVec<F::Elem> {
    let n = ideal.num_vars();
    let j = ja.add(jb);
    let i = ia + ib;
    if i > n {
        return Vec::new();
    }
    let mut entries = Vec::new();
    for (ga, xa) in za {
        let a = &subsets[ia][*ga];
        for (gb, xb) in zb {
            let b = &subsets[ib][*gb];
            let Some(sign) = merge_sign(a, b) else { continue };
            let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
            u.sort_unstable();
            let cof = j.checked_sub(&Multidegree::indicator(n, &u)).expect("homogeneous");
            if ideal.contains(&cof) {
                continue;
            }
            let v = field.mul(&field.mul(xa, xb), &field.from_i64(sign));
            entries.push((subset_index[i][&u], v));
        }
    }
    linalg::collect_sparse(field, entries)
}

/// Koszul homology of `R` in multidegrees `j <= bound`, with representative
/// cycles and the product table of positive-degree classes.
pub fn koszul_homology_algebra<F: Field>(
    field: &F,
    ideal: &MonomialIdeal,
    bound: &Multidegree,
) -> Result<KoszulHomologyAlgebra<F>> {
    let n = ideal.num_vars();
    let complex = koszul_complex(field, n, RingContext::Quotient(ideal.clone()))?;
    let grid = DegreeBox::new(bound);
    let points = grid.graded_elements();
    let mut classes = Vec::new();
    let mut bases = HashMap::new();
    for i in 0..=n {
        for j in &points {
            let hb = complex.homology_basis(i, j);
            if hb.dim() == 0 {
                continue;
            }
            let first = classes.len();
            for z in &hb.representatives {
                classes.push(HomologyClass { degree: i, multidegree: j.clone(), representative: z.clone() });
            }
            bases.insert((i, j.clone()), (first, hb));
        }
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets_of_size(n, k)).collect();
    let subset_index: Vec<HashMap<Vec<usize>, usize>> =
        subsets.iter().map(|s| s.iter().enumerate().map(|(k, x)| (x.clone(), k)).collect()).collect();
    let mut products = BTreeMap::new();
    for a in 0..classes.len() {
        for b in a..classes.len() {
            let (ca, cb) = (&classes[a], &classes[b]);
            if ca.degree == 0 || cb.degree == 0 {
                continue;
            }
            let chain = koszul_wedge(
                field,
                ideal,
                &subsets,
                &subset_index,
                (ca.degree, &ca.multidegree, &ca.representative),
                (cb.degree, &cb.multidegree, &cb.representative),
            );
            if chain.is_empty() {
                continue;
            }
            let key = (ca.degree + cb.degree, ca.multidegree.add(&cb.multidegree));
            let Some((first, hb)) = bases.get(&key) else {
                // No homology there (or outside the bound): the class is zero
                // provided the bound covers m_I.
                continue;
            };
            let coords = hb.classify(&chain).ok_or_else(|| {
                Error::Inconsistency(format!("product of Koszul classes {a} and {b} is not a cycle"))
            })?;
            if !coords.is_empty() {
                products.insert((a, b), coords.into_iter().map(|(k, x)| (first + k, x)).collect());
            }
        }
    }
    Ok(KoszulHomologyAlgebra { complex, bound: bound.clone(), classes, products })
}

/// `1 - sum_{i>=1} dim H_i(K ⊗ R)_j y^j t^(i+1)`, the denominator of the
/// Poincaré series when `R` is Golod. Truncated at `t^(n+1)` and at `bound`.
pub fn golod_denominator<F: Field>(field: &F, ideal: &MonomialIdeal, bound: &Multidegree) -> Result<BigradedSeries> {
    let n = ideal.num_vars();
    let complex = koszul_complex(field, n, RingContext::Quotient(ideal.clone()))?;
    let dims = complex.homology(bound);
    let mut q = BigradedSeries::one(n as u32 + 1, bound.clone());
    for (i, by_deg) in dims.iter().enumerate().skip(1) {
        for (j, d) in by_deg {
            q.add_term(i as u32 + 1, j.clone(), -BigInt::from(*d));
        }
    }
    Ok(q)
}

/// Outcome of comparing `P_R` with the Golod bound up to a truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GolodCertificate {
    pub golod: bool,
    pub tmax: u32,
    pub bound: Multidegree,
    /// First `(t, y, resolution value, Golod-bound value)` that differs.
    pub first_mismatch: Option<(u32, Multidegree, BigInt, BigInt)>,
}

/// Compares `P_R` from the minimal resolution with
/// `prod(1 + t y_i) / golod_denominator` for all `t`-degrees `<= tmax`.
/// Certifies Golodness only up to this truncation.
pub fn golod_certificate<F: Field>(field: &F, ideal: &MonomialIdeal, tmax: u32) -> Result<GolodCertificate> {
    if tmax < 2 {
        return Err(Error::Precondition("Golod check needs tmax >= 2".into()));
    }
    let bound = series_bound(ideal);
    let p = poincare_series(field, ideal, tmax)?;
    let q = golod_denominator(field, ideal, &bound)?.truncate(tmax, &bound);
    let serre = BigradedSeries::koszul_numerator(tmax, bound.clone()).divide(&q)?;
    let first_mismatch = p.sub(&serre)?.terms().next().map(|(t, y, _)| (t, y.clone(), p.coefficient(t, y), serre.coefficient(t, y)));
    Ok(GolodCertificate { golod: first_mismatch.is_none(), tmax, bound, first_mismatch })
}

pub fn is_golod_truncated<F: Field>(field: &F, ideal: &MonomialIdeal, tmax: u32) -> Result<bool> {
    Ok(golod_certificate(field, ideal, tmax)?.golod)
}

/// Golod criterion for generic ideals: `m_A m_B != m_(A ∪ B)` whenever
/// `A ∪ B` is a Scarf face (`A`, `B` nonempty faces).
pub fn is_golod_generic(ideal: &MonomialIdeal) -> Result<bool> {
    if !ideal.is_generic() {
        return Err(Error::Precondition("ideal is not generic".into()));
    }
    let faces: Vec<Vec<usize>> = scarf_faces(ideal)?.into_iter().skip(1).flatten().collect();
    let is_face: std::collections::HashSet<&Vec<usize>> = faces.iter().collect();
    for a in &faces {
        for b in &faces {
            let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
            u.sort_unstable();
            u.dedup();
            if !is_face.contains(&u) {
                continue;
            }
            let ma = ideal.lcm_of_subset(a)?;
            let mb = ideal.lcm_of_subset(b)?;
            if ma.add(&mb) == ideal.lcm_of_subset(&u)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RationalField;

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec())
    }

    #[test]
    fn koszul_resolves_k_over_polynomial_ring() {
        let f = RationalField;
        let res = resolve_residue_field(&f, &MonomialIdeal::zero(2), 4, &md(&[2, 2])).unwrap();
        assert_eq!(res.complex().ranks(), vec![1, 2, 1, 0, 0]);
        let b = res.betti();
        assert_eq!(b[2], BTreeMap::from([(md(&[1, 1]), 1)]));
    }

    #[test]
    fn hypersurface_is_periodic() {
        let f = RationalField;
        let i = ideal(1, &[&[2]]);
        let res = resolve_residue_field(&f, &i, 8, &md(&[8])).unwrap();
        assert_eq!(res.complex().ranks(), vec![1; 9]);
        for (k, gens) in (0..9).map(|k| (k, res.complex().module(k))) {
            assert_eq!(gens, &[md(&[k as u32])]);
        }
        assert_eq!(res.complex().unit_entries(), 0);
    }

    #[test]
    fn bound_below_lcm_is_refused() {
        let f = RationalField;
        let i = ideal(2, &[&[2, 1]]);
        assert!(matches!(resolve_residue_field(&f, &i, 3, &md(&[1, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn koszul_algebra_of_closing_ideal() {
        let f = RationalField;
        let i = ideal(3, &[&[1, 2, 0], &[1, 0, 2]]);
        let h = koszul_homology_algebra(&f, &i, &i.lcm_all()).unwrap();
        let d = h.dims();
        assert_eq!(d[1], BTreeMap::from([(md(&[1, 2, 0]), 1), (md(&[1, 0, 2]), 1)]));
        assert_eq!(d[2], BTreeMap::from([(md(&[1, 2, 2]), 1)]));
        assert!(d[3].is_empty());
        assert!(h.has_trivial_products());
    }

    #[test]
    fn exterior_algebra_products_are_detected() {
        let f = RationalField;
        let i = ideal(2, &[&[1, 0], &[0, 1]]);
        let h = koszul_homology_algebra(&f, &i, &md(&[1, 1])).unwrap();
        assert_eq!(h.classes().len(), 4);
        assert!(!h.has_trivial_products());
        let zero = koszul_homology_algebra(&f, &MonomialIdeal::zero(2), &md(&[1, 1])).unwrap();
        assert_eq!(zero.classes().len(), 1);
    }

    #[test]
    fn golod_denominators() {
        let f = RationalField;
        let i = ideal(3, &[&[1, 2, 0], &[1, 0, 2]]);
        let q = golod_denominator(&f, &i, &i.lcm_all()).unwrap();
        assert_eq!(q.to_string(), "1 - t^2*y1*y2^2 - t^2*y1*y3^2 - t^3*y1*y2^2*y3^2");
        let h = ideal(1, &[&[2]]);
        assert_eq!(golod_denominator(&f, &h, &md(&[2])).unwrap().to_string(), "1 - t^2*y1^2");
        assert_eq!(golod_denominator(&f, &MonomialIdeal::zero(2), &md(&[1, 1])).unwrap().to_string(), "1");
    }

    #[test]
    fn golod_truncated_examples() {
        let f = RationalField;
        assert!(is_golod_truncated(&f, &ideal(3, &[&[1, 2, 0], &[1, 0, 2]]), 5).unwrap());
        let ci = golod_certificate(&f, &ideal(3, &[&[2, 0, 0], &[0, 2, 1]]), 6).unwrap();
        assert!(!ci.golod);
        assert_eq!(ci.first_mismatch.as_ref().unwrap().0, 3);
        assert!(is_golod_truncated(&f, &ideal(2, &[&[2, 3]]), 6).unwrap());
    }

    #[test]
    fn golod_generic_examples() {
        assert!(is_golod_generic(&ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])).unwrap());
        assert!(!is_golod_generic(&ideal(2, &[&[2, 0], &[0, 2]])).unwrap());
        assert!(is_golod_generic(&ideal(2, &[&[2, 1]])).unwrap());
        assert!(is_golod_generic(&ideal(3, &[&[1, 2, 0], &[1, 0, 2]])).is_err());
    }

    #[test]
    fn merge_signs() {
        assert_eq!(merge_sign(&[0], &[1]), Some(1));
        assert_eq!(merge_sign(&[1], &[0]), Some(-1));
        assert_eq!(merge_sign(&[0, 2], &[1]), Some(-1));
        assert_eq!(merge_sign(&[0, 1], &[1]), None);
    }
}
