//! Monomials, multidegrees and monomial ideals.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial. Used for `x`-monomials of the ring and for
/// the `y`-monomials that grade series alike.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(num_vars: usize) -> Self {
        Self(vec![0; num_vars])
    }

    pub fn unit(num_vars: usize, i: usize) -> Self {
        let mut v = vec![0; num_vars];
        v[i] = 1;
        Self(v)
    }

    /// Squarefree multidegree with ones on `vars`.
    pub fn indicator(num_vars: usize, vars: &[usize]) -> Self {
        let mut v = vec![0; num_vars];
        for &i in vars {
            v[i] = 1;
        }
        Self(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `x^self` divides `x^other / x_i` for every variable of `other`, and
    /// vanishes wherever `other` does.
    pub fn strictly_divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| if b == 0 { a == 0 } else { a < b })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.min(b) == &0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if `other` does not divide `self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect()
    }

    /// Renders as a monomial in variables named `names`, `"1"` for zero.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names[i].as_ref();
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for Multidegree {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl From<&[u32]> for Multidegree {
    fn from(v: &[u32]) -> Self {
        Self(v.to_vec())
    }
}

/// Default `y`-variable names `y1..yn`.
pub fn y_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

/// On-disk ideal format: `{"vars": [...], "gens": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealFile {
    pub vars: Vec<String>,
    pub gens: Vec<Vec<u32>>,
}

/// A monomial ideal given by its minimal generators. Generator order is the
/// input order (duplicates and non-minimal generators removed); sign
/// conventions downstream depend on it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    var_names: Vec<String>,
    generators: Vec<Multidegree>,
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.display_with(&self.var_names)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl MonomialIdeal {
    /// Builds an ideal over variables `x1..xn` from raw exponent vectors.
    pub fn from_exponents(num_vars: usize, raw: &[Vec<u32>]) -> Result<Self> {
        let names = (1..=num_vars).map(|i| format!("x{i}")).collect();
        Self::with_names(names, raw)
    }

    pub fn with_names(var_names: Vec<String>, raw: &[Vec<u32>]) -> Result<Self> {
        if var_names.is_empty() {
            return Err(Error::Input("ring needs at least one variable".into()));
        }
        let gens: Vec<Multidegree> = raw.iter().map(|g| Multidegree::new(g.clone())).collect();
        minimalize(var_names, gens)
    }

    pub fn from_file(file: &IdealFile) -> Result<Self> {
        Self::with_names(file.vars.clone(), &file.gens)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IdealFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> IdealFile {
        IdealFile {
            vars: self.var_names.clone(),
            gens: self.generators.iter().map(|g| g.exponents().to_vec()).collect(),
        }
    }

    /// The zero ideal in `n` variables.
    pub fn zero(num_vars: usize) -> Self {
        Self::from_exponents(num_vars, &[]).expect("zero ideal is valid")
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn generators(&self) -> &[Multidegree] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// `x^m` lies in the ideal.
    pub fn contains(&self, m: &Multidegree) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(Multidegree::is_squarefree)
    }

    pub fn min_generator_degree(&self) -> Option<u32> {
        self.generators.iter().map(Multidegree::total_degree).min()
    }

    /// `m_I`, the lcm of all generators.
    pub fn lcm_all(&self) -> Multidegree {
        self.generators.iter().fold(Multidegree::zero(self.num_vars()), |acc, g| acc.lcm(g))
    }

    /// `m_J` for a set of generator indices; the empty set gives `1`.
    pub fn lcm_of_subset(&self, subset: &[usize]) -> Result<Multidegree> {
        let mut m = Multidegree::zero(self.num_vars());
        for &j in subset {
            let g = self.generators.get(j).ok_or_else(|| {
                Error::Input(format!("generator index {j} out of range (ideal has {})", self.num_generators()))
            })?;
            m = m.lcm(g);
        }
        Ok(m)
    }

    /// `m_J` for a subset encoded as a bitmask over generator indices.
    pub fn lcm_of_mask(&self, mask: u64) -> Multidegree {
        let mut m = Multidegree::zero(self.num_vars());
        for (j, g) in self.generators.iter().enumerate() {
            if mask >> j & 1 == 1 {
                m = m.lcm(g);
            }
        }
        m
    }

    /// Number of connected components `l_J` of the graph on `J` joining
    /// generators that share a variable.
    pub fn connected_components(&self, subset: &[usize]) -> Result<usize> {
        if subset.is_empty() {
            return Err(Error::Input("connected components of an empty subset".into()));
        }
        self.lcm_of_subset(subset)?;
        let k = subset.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in 0..k {
            for b in a + 1..k {
                if !self.generators[subset[a]].is_coprime(&self.generators[subset[b]]) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        Ok((0..k).filter(|&x| find(&mut parent, x) == x).count())
    }

    /// Genericity: whenever two generators have the same positive exponent in
    /// some variable, a third generator strictly divides their lcm.
    pub fn is_generic(&self) -> bool {
        let gens = &self.generators;
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let tie = gens[a].exponents().iter().zip(gens[b].exponents()).any(|(x, y)| x == y && *x > 0);
                if !tie {
                    continue;
                }
                let l = gens[a].lcm(&gens[b]);
                let witnessed = gens
                    .iter()
                    .enumerate()
                    .any(|(c, g)| c != a && c != b && g.strictly_divides(&l));
                if !witnessed {
                    return false;
                }
            }
        }
        true
    }

    /// Standard polarization. See [`Polarization`].
    pub fn polarize(&self) -> Polarization {
        Polarization::of(self)
    }

    /// Same ideal with generators permuted: generator `k` of the result is
    /// generator `order[k]` of `self`.
    pub fn reorder_generators(&self, order: &[usize]) -> Self {
        Self { var_names: self.var_names.clone(), generators: order.iter().map(|&i| self.generators[i].clone()).collect() }
    }
}

/// Keeps the divisibility-minimal generators, preserving first occurrences.
pub fn minimalize(var_names: Vec<String>, raw: Vec<Multidegree>) -> Result<MonomialIdeal> {
    let n = var_names.len();
    for g in &raw {
        if g.len() != n {
            return Err(Error::Input(format!("generator {g:?} has length {} but the ring has {n} variables", g.len())));
        }
        if g.is_zero() {
            return Err(Error::Input("the unit monomial is not allowed as a generator".into()));
        }
    }
    let mut generators: Vec<Multidegree> = Vec::new();
    for (i, g) in raw.iter().enumerate() {
        let redundant = raw.iter().enumerate().any(|(k, h)| {
            k != i && h.divides(g) && (h != g || k < i)
        });
        if !redundant {
            generators.push(g.clone());
        }
    }
    Ok(MonomialIdeal { var_names, generators })
}

/// Result of polarizing a monomial ideal.
///
/// Variable `x_i` with largest exponent `d_i` among the generators becomes
/// `z_{i,1}, .., z_{i,max(d_i,1)}`, and `x_i^a` becomes `z_{i,1}..z_{i,a}`.
/// Every variable keeps at least one copy so a squarefree ideal polarizes to
/// itself.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub ideal: MonomialIdeal,
    /// `offsets[i]..offsets[i+1]` are the new variables replacing `x_i`.
    offsets: Vec<usize>,
}

impl Polarization {
    fn of(ideal: &MonomialIdeal) -> Self {
        let n = ideal.num_vars();
        let top = ideal.lcm_all();
        let mut offsets = vec![0];
        let mut names = Vec::new();
        for i in 0..n {
            let d = top.exponents()[i].max(1) as usize;
            if ideal.is_squarefree() {
                names.push(ideal.var_names()[i].clone());
            } else {
                names.extend((1..=d).map(|j| format!("z{}_{}", i + 1, j)));
            }
            offsets.push(offsets[i] + d);
        }
        let mut pol = Self { ideal: ideal.clone(), offsets };
        let gens = ideal.generators().iter().map(|g| pol.lambda(g)).collect();
        pol.ideal = MonomialIdeal { var_names: names, generators: gens };
        pol
    }

    pub fn num_original_vars(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `lambda`: `x_i^a` to `z_{i,1}..z_{i,a}`. Exponents above the largest
    /// generator exponent are clamped, since `lambda` is only meaningful on
    /// the LCM lattice.
    pub fn lambda(&self, m: &Multidegree) -> Multidegree {
        let mut out = vec![0; *self.offsets.last().unwrap()];
        for (i, &a) in m.exponents().iter().enumerate() {
            let width = self.offsets[i + 1] - self.offsets[i];
            for slot in out.iter_mut().skip(self.offsets[i]).take((a as usize).min(width)) {
                *slot = 1;
            }
        }
        Multidegree::new(out)
    }

    /// `lambda^{-1}`: the monomial map `z_{i,j} -> x_i`.
    pub fn lambda_inverse(&self, m: &Multidegree) -> Multidegree {
        let n = self.num_original_vars();
        let e = m.exponents();
        Multidegree::new((0..n).map(|i| e[self.offsets[i]..self.offsets[i + 1]].iter().sum()).collect())
    }
}

/// The set `{j : j <= bound}` with a mixed-radix index, so that
/// `index(a + b) = index(a) + index(b)` whenever `a + b <= bound`.
#[derive(Clone, Debug)]
pub struct DegreeBox {
    bound: Multidegree,
    strides: Vec<usize>,
    size: usize,
}

impl DegreeBox {
    pub fn new(bound: &Multidegree) -> Self {
        let mut strides = Vec::with_capacity(bound.len());
        let mut size = 1usize;
        for &b in bound.exponents() {
            strides.push(size);
            size = size.checked_mul(b as usize + 1).expect("degree box too large");
        }
        Self { bound: bound.clone(), strides, size }
    }

    pub fn bound(&self) -> &Multidegree {
        &self.bound
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, m: &Multidegree) -> bool {
        m.divides(&self.bound)
    }

    pub fn index(&self, m: &Multidegree) -> usize {
        m.exponents().iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }

    pub fn multidegree(&self, mut idx: usize) -> Multidegree {
        let mut v = vec![0; self.bound.len()];
        for i in (0..v.len()).rev() {
            v[i] = (idx / self.strides[i]) as u32;
            idx %= self.strides[i];
        }
        Multidegree::new(v)
    }

    /// All elements, ordered by total degree and then lexicographically. Any
    /// divisor of an element comes before it.
    pub fn graded_elements(&self) -> Vec<Multidegree> {
        let mut all: Vec<Multidegree> = (0..self.size).map(|i| self.multidegree(i)).collect();
        all.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
        all
    }

    /// Membership of every box element in `ideal`, by box index.
    pub fn ideal_membership(&self, ideal: &MonomialIdeal) -> Vec<bool> {
        (0..self.size).map(|i| ideal.contains(&self.multidegree(i))).collect()
    }
}
