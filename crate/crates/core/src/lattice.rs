//! LCM lattices, GCD graphs, lattice isomorphisms and transport of
//! denominators along them.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::monomial::{MonomialIdeal, Multidegree};
use crate::series::BigradedSeries;

/// All lcms of subsets of the minimal generators, ordered by total degree
/// and then lexicographically (so the bottom `1` comes first).
#[derive(Clone, Debug)]
pub struct LcmLattice {
    num_vars: usize,
    elements: Vec<Multidegree>,
    index: HashMap<Multidegree, usize>,
    /// Element index of each generator.
    atoms: Vec<usize>,
    /// Element index of `m_J`, by subset bitmask.
    subset_element: Vec<usize>,
    join: Vec<Vec<usize>>,
}

/// Largest generator count accepted by the lattice routines.
pub const MAX_LATTICE_GENERATORS: usize = 20;

impl LcmLattice {
    pub fn build(ideal: &MonomialIdeal) -> Result<Self> {
        let r = ideal.num_generators();
        if r > MAX_LATTICE_GENERATORS {
            return Err(Error::Input(format!("{r} generators exceed the lattice limit of {MAX_LATTICE_GENERATORS}")));
        }
        let lcms: Vec<Multidegree> = (0u64..(1u64 << r)).map(|mask| ideal.lcm_of_mask(mask)).collect();
        let mut elements = lcms.clone();
        elements.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
        elements.dedup();
        let index: HashMap<Multidegree, usize> = elements.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        let subset_element = lcms.iter().map(|m| index[m]).collect();
        let atoms = ideal.generators().iter().map(|g| index[g]).collect();
        let join = elements.iter().map(|a| elements.iter().map(|b| index[&a.lcm(b)]).collect()).collect();
        Ok(Self { num_vars: ideal.num_vars(), elements, index, atoms, subset_element, join })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn elements(&self) -> &[Multidegree] {
        &self.elements
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> &Multidegree {
        self.elements.last().expect("lattice has a bottom")
    }

    pub fn index_of(&self, m: &Multidegree) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Multidegree) -> bool {
        self.index.contains_key(m)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Number of elements above (or equal to) element `a`.
    fn up_set_size(&self, a: usize) -> usize {
        self.elements.iter().filter(|e| self.elements[a].divides(e)).count()
    }
}

/// Coprimality graph on the non-bottom lattice elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdGraph {
    /// Pairs `(a, b)` of element indices with `a < b`.
    pub edges: Vec<(usize, usize)>,
}

impl GcdGraph {
    /// Edges join relatively prime elements; the bottom element is left out
    /// since every lattice map fixes it.
    pub fn build(lattice: &LcmLattice) -> Self {
        let els = lattice.elements();
        let mut edges = Vec::new();
        for a in 1..els.len() {
            for b in a + 1..els.len() {
                if els[a].is_coprime(&els[b]) {
                    edges.push((a, b));
                }
            }
        }
        Self { edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }
}

/// A lattice isomorphism `L_I -> L_I'` induced by a bijection of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    /// Generator `k` of `I` goes to generator `atoms[k]` of `I'`.
    pub atoms: Vec<usize>,
    /// The induced map on all lattice elements.
    pub image: BTreeMap<Multidegree, Multidegree>,
    /// Whether the same map is an isomorphism of GCD graphs.
    pub gcd_preserving: bool,
    target_top: Multidegree,
}

impl LatticeMap {
    pub fn apply(&self, m: &Multidegree) -> Option<&Multidegree> {
        self.image.get(m)
    }

    pub fn target_top(&self) -> &Multidegree {
        &self.target_top
    }

    /// Checks the join-preservation invariant on every pair of elements.
    pub fn preserves_joins(&self) -> bool {
        let els: Vec<&Multidegree> = self.image.keys().collect();
        els.iter().all(|a| {
            els.iter().all(|b| {
                let lhs = &self.image[&a.lcm(b)];
                *lhs == self.image[*a].lcm(&self.image[*b])
            })
        })
    }
}

/// All atom bijections inducing a lattice isomorphism `L_I -> L_I'`.
///
/// Backtracking assigns atoms one at a time; after each assignment the
/// partial map on subsets of assigned atoms must stay well defined and
/// injective. Atoms are only matched when their up-sets have equal size.
pub fn find_lattice_isomorphisms(source: &MonomialIdeal, target: &MonomialIdeal) -> Result<Vec<LatticeMap>> {
    let la = LcmLattice::build(source)?;
    let lb = LcmLattice::build(target)?;
    let r = source.num_generators();
    if r != target.num_generators() || la.len() != lb.len() {
        return Ok(Vec::new());
    }
    let up_a: Vec<usize> = la.atoms().iter().map(|&a| la.up_set_size(a)).collect();
    let up_b: Vec<usize> = lb.atoms().iter().map(|&b| lb.up_set_size(b)).collect();

    struct Search<'a> {
        la: &'a LcmLattice,
        lb: &'a LcmLattice,
        up_a: Vec<usize>,
        up_b: Vec<usize>,
        found: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn rec(&mut self, sigma: &mut Vec<usize>, used: &mut [bool], fwd: &[Option<usize>], bwd: &[Option<usize>]) {
            let k = sigma.len();
            let r = used.len();
            if k == r {
                self.found.push(sigma.clone());
                return;
            }
            for cand in 0..r {
                if used[cand] || self.up_a[k] != self.up_b[cand] {
                    continue;
                }
                sigma.push(cand);
                let mut fwd2 = fwd.to_vec();
                let mut bwd2 = bwd.to_vec();
                let mut ok = true;
                // New subsets are those containing atom k within atoms 0..=k.
                for low in 0u64..(1u64 << k) {
                    let mask = low | (1 << k);
                    let mut image_mask = 0u64;
                    for (a, &b) in sigma.iter().enumerate() {
                        if mask >> a & 1 == 1 {
                            image_mask |= 1 << b;
                        }
                    }
                    let ea = self.la.subset_element[mask as usize];
                    let eb = self.lb.subset_element[image_mask as usize];
                    match (fwd2[ea], bwd2[eb]) {
                        (None, None) => {
                            fwd2[ea] = Some(eb);
                            bwd2[eb] = Some(ea);
                        }
                        (Some(x), Some(y)) if x == eb && y == ea => {}
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    used[cand] = true;
                    self.rec(sigma, used, &fwd2, &bwd2);
                    used[cand] = false;
                }
                sigma.pop();
            }
        }
    }

    let mut search = Search { la: &la, lb: &lb, up_a, up_b, found: Vec::new() };
    let mut fwd = vec![None; la.len()];
    let mut bwd = vec![None; lb.len()];
    fwd[0] = Some(0);
    bwd[0] = Some(0);
    search.rec(&mut Vec::new(), &mut vec![false; r], &fwd, &bwd);

    let ga = GcdGraph::build(&la);
    let gb = GcdGraph::build(&lb);
    let maps = search
        .found
        .into_iter()
        .map(|sigma| {
            let mut elem = vec![0usize; la.len()];
            for mask in 0u64..(1u64 << r) {
                let mut image_mask = 0u64;
                for (a, &b) in sigma.iter().enumerate() {
                    if mask >> a & 1 == 1 {
                        image_mask |= 1 << b;
                    }
                }
                elem[la.subset_element[mask as usize]] = lb.subset_element[image_mask as usize];
            }
            let gcd_preserving = (1..la.len())
                .all(|a| (a + 1..la.len()).all(|b| ga.has_edge(a, b) == gb.has_edge(elem[a], elem[b])));
            let image = (0..la.len()).map(|a| (la.elements()[a].clone(), lb.elements()[elem[a]].clone())).collect();
            LatticeMap { atoms: sigma, image, gcd_preserving, target_top: lb.top().clone() }
        })
        .collect();
    Ok(maps)
}

/// Replaces every `y`-multidegree `j` of `q` by `lambda(j)`, keeping
/// coefficients and `t`-degrees. The result is truncated at `m_I'`.
pub fn transport_denominator(q: &BigradedSeries, map: &LatticeMap) -> Result<BigradedSeries> {
    q.map_y(q.tmax(), map.target_top().clone(), |y| {
        map.apply(y).cloned().ok_or_else(|| {
            Error::Precondition(format!("multidegree {y:?} of the denominator is not in the LCM lattice"))
        })
    })
}
