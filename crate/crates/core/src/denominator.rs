//! The denominator `Q_R` of the Poincaré series, its candidate terms, and
//! the lcm-support check.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::complex::MAX_SUBSET_GENERATORS;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{MonomialIdeal, Multidegree, Polarization};
use crate::resolution::{resolve_residue_field, series_bound};
use crate::series::BigradedSeries;

/// `tmax` used when none is given: one past the bound `deg m_I` on the
/// `t`-degree of `Q_R`, so that the vanishing check has something to check.
pub fn default_tmax(ideal: &MonomialIdeal) -> u32 {
    ideal.lcm_all().total_degree() + 1
}

/// `Q_R = prod(1 + t y_i) / P_R`, with `P_R` from the minimal resolution.
///
/// `Q_R` has `t`-degree at most `deg m_I` and all its `y`-exponents divide
/// `m_I`; both are checked, and a violation is reported as an
/// inconsistency. The result is truncated at `(tmax, m_I)`.
pub fn denominator<F: Field>(field: &F, ideal: &MonomialIdeal, tmax: u32) -> Result<BigradedSeries> {
    let top = ideal.lcm_all();
    let deg = top.total_degree();
    if tmax < deg {
        return Err(Error::Precondition(format!("tmax = {tmax} is below deg m_I = {deg}")));
    }
    let bound = series_bound(ideal);
    let p = resolve_residue_field(field, ideal, tmax, &bound)?.poincare_series();
    let q = BigradedSeries::koszul_numerator(tmax, bound).divide(&p)?;
    if let Some((t, y, c)) = q.terms().find(|(t, y, _)| *t > deg || !y.divides(&top)) {
        return Err(Error::Inconsistency(format!(
            "denominator has term {c}*t^{t}*y^{y:?} outside t <= {deg}, y | {top:?}"
        )));
    }
    Ok(q.truncate(tmax, &top))
}

/// A possible term `sign * t^t_power * y^m_J` of `Q_R`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub sign: i8,
    pub t_power: u32,
    pub multidegree: Multidegree,
}

/// `{ (-1)^(l_J) t^(|J| + l_J) m_J : J nonempty }`, where `l_J` counts the
/// connected components of `J` under "shares a variable".
pub fn candidate_terms(ideal: &MonomialIdeal) -> Result<BTreeSet<Candidate>> {
    let r = ideal.num_generators();
    if r > MAX_SUBSET_GENERATORS {
        return Err(Error::Precondition(format!("{r} generators; subset enumeration is limited to {MAX_SUBSET_GENERATORS}")));
    }
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << r) {
        let subset: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        let l = ideal.connected_components(&subset)?;
        out.insert(Candidate {
            sign: if l % 2 == 0 { 1 } else { -1 },
            t_power: (subset.len() + l) as u32,
            multidegree: ideal.lcm_of_mask(mask),
        });
    }
    Ok(out)
}

/// Terms of `q` (other than the constant) whose sign, `t`-power and
/// multidegree are not among the candidates.
pub fn non_candidate_terms(q: &BigradedSeries, candidates: &BTreeSet<Candidate>) -> Vec<(u32, Multidegree, BigInt)> {
    q.terms()
        .filter(|(t, _, _)| *t > 0)
        .filter(|(t, y, c)| {
            let key = Candidate { sign: if c.is_positive() { 1 } else { -1 }, t_power: *t, multidegree: (*y).clone() };
            !candidates.contains(&key)
        })
        .map(|(t, y, c)| (t, y.clone(), c.clone()))
        .collect()
}

/// `m` is the lcm of some nonempty set of generators exactly when it is the
/// lcm of all generators dividing it.
pub fn is_lcm_of_generators(ideal: &MonomialIdeal, m: &Multidegree) -> bool {
    let mut below = ideal.generators().iter().filter(|g| g.divides(m)).peekable();
    below.peek().is_some() && below.fold(Multidegree::zero(m.len()), |acc, g| acc.lcm(g)) == *m
}

/// Every term of positive `t`-degree sits at some `m_J`, `J` nonempty, and
/// the only `t^0` term is the constant.
pub fn verify_lcm_coefficients(q: &BigradedSeries, ideal: &MonomialIdeal) -> bool {
    q.terms().all(|(t, y, _)| if t == 0 { y.is_zero() } else { is_lcm_of_generators(ideal, y) })
}

/// Pulls a series in the polarized variables back along `lambda^{-1}`.
pub fn depolarize(q: &BigradedSeries, polarization: &Polarization, original: &MonomialIdeal) -> Result<BigradedSeries> {
    q.map_y(q.tmax(), original.lcm_all(), |y| Ok(polarization.lambda_inverse(y)))
}
