//! Deviations: the exponents `e_{n,j}` in the product decomposition
//!
//! `P(y,t) = prod_{n odd} (1 + y^j t^n)^{e_{n,j}} / prod_{n even} (1 - y^j t^n)^{e_{n,j}}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::Multidegree;
use crate::series::BigradedSeries;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeviationTable {
    pub nmax: u32,
    /// Nonzero entries only.
    pub entries: BTreeMap<(u32, Multidegree), BigInt>,
}

impl DeviationTable {
    pub fn get(&self, n: u32, j: &Multidegree) -> BigInt {
        self.entries.get(&(n, j.clone())).cloned().unwrap_or_default()
    }

    pub fn level(&self, n: u32) -> impl Iterator<Item = (&Multidegree, &BigInt)> {
        self.entries.iter().filter(move |((m, _), _)| *m == n).map(|((_, j), e)| (j, e))
    }
}

/// `binom(e, k)` for any integer `e`.
fn binomial(e: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= e - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// The factor `(1 + y^j t^n)^e` (odd `n`) or `(1 - y^j t^n)^(-e)` (even
/// `n`), truncated like `like`.
fn factor(n: u32, j: &Multidegree, e: &BigInt, tmax: u32, ybound: &Multidegree) -> BigradedSeries {
    let (sign, power) = if n % 2 == 1 { (BigInt::one(), e.clone()) } else { (-BigInt::one(), -e) };
    let mut out = BigradedSeries::one(tmax, ybound.clone());
    let mut y = j.clone();
    let mut k = 1;
    while k * n <= tmax && y.divides(ybound) {
        let mut c = binomial(&power, k);
        if sign.is_negative() && k % 2 == 1 {
            c = -c;
        }
        out.add_term(k * n, y.clone(), c);
        y = y.add(j);
        k += 1;
        if j.is_zero() && k > tmax {
            break;
        }
    }
    out
}

/// Reads off `e_{n,j}` for `n <= nmax` one `t`-degree at a time: after the
/// factors of `t`-degree below `n` are divided out, the `t^n` coefficients
/// that remain are exactly the `e_{n,j}`.
pub fn deviations(p: &BigradedSeries, nmax: u32) -> Result<DeviationTable> {
    let zero = Multidegree::zero(p.num_vars());
    if p.coefficient(0, &zero) != BigInt::one() || p.t_part(0).len() != 1 {
        return Err(Error::Precondition("deviations need a series with t^0 part equal to 1".into()));
    }
    let nmax = nmax.min(p.tmax());
    let mut table = DeviationTable { nmax, entries: BTreeMap::new() };
    let mut partial = BigradedSeries::one(p.tmax(), p.ybound().clone());
    for n in 1..=nmax {
        let level: Vec<(Multidegree, BigInt)> = p
            .t_part(n)
            .iter()
            .map(|(y, c)| (y.clone(), c - partial.coefficient(n, y)))
            .chain(partial.t_part(n).iter().filter(|(y, _)| !p.t_part(n).contains_key(*y)).map(|(y, c)| (y.clone(), -c)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        for (j, e) in level {
            partial = partial.mul(&factor(n, &j, &e, p.tmax(), p.ybound()));
            table.entries.insert((n, j), e);
        }
    }
    Ok(table)
}

/// Expands the product decomposition of a deviation table.
pub fn series_from_deviations(table: &DeviationTable, tmax: u32, ybound: &Multidegree) -> BigradedSeries {
    let mut out = BigradedSeries::one(tmax, ybound.clone());
    for ((n, j), e) in &table.entries {
        if *n <= tmax && j.divides(ybound) {
            out = out.mul(&factor(*n, j, e, tmax, ybound));
        }
    }
    out
}
