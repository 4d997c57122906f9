//! Truncated bigraded series in `Z[y_1..y_n][[t]]`.
//!
//! A series is truncated at a `t`-degree `tmax` and at a componentwise
//! `y`-bound. The monomials outside the bound form an ideal, so truncated
//! arithmetic is arithmetic in a quotient ring and products and inverses
//! are exact on every stored coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{y_names, Multidegree};

/// Coefficients of one power of `t`.
pub type YPoly = BTreeMap<Multidegree, BigInt>;

#[derive(Clone, PartialEq, Eq)]
pub struct BigradedSeries {
    tmax: u32,
    ybound: Multidegree,
    /// `coeffs[t]`, length `tmax + 1`.
    coeffs: Vec<YPoly>,
}

/// JSON shape of one term: `{"t": 2, "y": [2,0,0], "c": -1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub t: u32,
    pub y: Vec<u32>,
    #[serde(with = "bigint_as_json_number")]
    pub c: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub tmax: u32,
    pub ybound: Vec<u32>,
    pub terms: Vec<TermJson>,
}

mod bigint_as_json_number {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(small) => s.serialize_i64(small),
            Err(_) => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| D::Error::custom("bad integer")),
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected integer")),
        }
    }
}

impl BigradedSeries {
    pub fn zero(tmax: u32, ybound: Multidegree) -> Self {
        Self { tmax, ybound, coeffs: vec![YPoly::new(); tmax as usize + 1] }
    }

    pub fn one(tmax: u32, ybound: Multidegree) -> Self {
        let mut s = Self::zero(tmax, ybound);
        let z = Multidegree::zero(s.num_vars());
        s.add_term(0, z, BigInt::one());
        s
    }

    /// `prod_i (1 + t y_i)` over all `n` variables.
    pub fn koszul_numerator(tmax: u32, ybound: Multidegree) -> Self {
        let n = ybound.len();
        let mut s = Self::one(tmax, ybound.clone());
        for i in 0..n {
            let mut f = Self::one(tmax, ybound.clone());
            f.add_term(1, Multidegree::unit(n, i), BigInt::one());
            s = s.mul(&f);
        }
        s
    }

    pub fn from_terms<I>(tmax: u32, ybound: Multidegree, terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, Multidegree, BigInt)>,
    {
        let mut s = Self::zero(tmax, ybound);
        for (t, y, c) in terms {
            s.add_term(t, y, c);
        }
        s
    }

    pub fn tmax(&self) -> u32 {
        self.tmax
    }

    pub fn ybound(&self) -> &Multidegree {
        &self.ybound
    }

    pub fn num_vars(&self) -> usize {
        self.ybound.len()
    }

    pub fn in_range(&self, t: u32, y: &Multidegree) -> bool {
        t <= self.tmax && y.divides(&self.ybound)
    }

    /// Adds `c * t^t y^y`; terms outside the truncation are dropped.
    pub fn add_term(&mut self, t: u32, y: Multidegree, c: BigInt) {
        if c.is_zero() || !self.in_range(t, &y) {
            return;
        }
        let slot = &mut self.coeffs[t as usize];
        let entry = slot.entry(y).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            slot.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coefficient(&self, t: u32, y: &Multidegree) -> BigInt {
        self.coeffs.get(t as usize).and_then(|p| p.get(y)).cloned().unwrap_or_default()
    }

    pub fn t_part(&self, t: u32) -> &YPoly {
        &self.coeffs[t as usize]
    }

    /// Nonzero terms in canonical order: ascending `t`-degree, then `y` in
    /// decreasing lexicographic monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Multidegree, &BigInt)> {
        self.coeffs.iter().enumerate().flat_map(|(t, p)| p.iter().rev().map(move |(y, c)| (t as u32, y, c)))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num_terms() == 0
    }

    /// Largest `t`-degree with a nonzero coefficient.
    pub fn t_degree(&self) -> Option<u32> {
        (0..=self.tmax).rev().find(|&t| !self.coeffs[t as usize].is_empty())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.tmax != other.tmax || self.ybound != other.ybound {
            return Err(Error::Precondition(format!(
                "series truncations differ: (t<={}, y<={:?}) vs (t<={}, y<={:?})",
                self.tmax, self.ybound, other.tmax, other.ybound
            )));
        }
        Ok(())
    }

    /// Same terms, new truncation (terms outside it are dropped).
    pub fn truncate(&self, tmax: u32, ybound: &Multidegree) -> Self {
        Self::from_terms(tmax, ybound.clone(), self.terms().map(|(t, y, c)| (t, y.clone(), c.clone())))
    }

    /// Equality of the stored terms, ignoring truncation parameters.
    pub fn same_terms(&self, other: &Self) -> bool {
        self.terms().eq(other.terms())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, y, c) in other.terms() {
            out.add_term(t, y.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, y, c) in other.terms() {
            out.add_term(t, y.clone(), -c);
        }
        Ok(out)
    }

    /// Truncated product; panics if truncations differ (use [`try_mul`]).
    ///
    /// [`try_mul`]: Self::try_mul
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("series_mul on incompatible truncations")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.tmax, self.ybound.clone());
        for (ta, pa) in self.coeffs.iter().enumerate() {
            if pa.is_empty() {
                continue;
            }
            for (tb, pb) in other.coeffs.iter().enumerate().take(self.tmax as usize + 1 - ta) {
                if pb.is_empty() {
                    continue;
                }
                let prod = ypoly_mul(pa, pb, &self.ybound);
                let slot = &mut out.coeffs[ta + tb];
                for (y, c) in prod {
                    *slot.entry(y).or_insert_with(BigInt::zero) += c;
                }
            }
        }
        for p in &mut out.coeffs {
            p.retain(|_, c| !c.is_zero());
        }
        Ok(out)
    }

    /// `self / denom` in the truncated ring. The `t^0` part of `denom` must
    /// be `1` plus terms of positive `y`-degree.
    pub fn divide(&self, denom: &Self) -> Result<Self> {
        self.check_compatible(denom)?;
        let zero = Multidegree::zero(self.num_vars());
        if denom.coefficient(0, &zero) != BigInt::one() {
            return Err(Error::Precondition("series inverse needs constant term 1".into()));
        }
        let u_inv = ypoly_inverse(&denom.coeffs[0], &self.ybound);
        let mut out = Self::zero(self.tmax, self.ybound.clone());
        for n in 0..=self.tmax as usize {
            let mut rhs = self.coeffs[n].clone();
            for k in 1..=n {
                if denom.coeffs[k].is_empty() || out.coeffs[n - k].is_empty() {
                    continue;
                }
                for (y, c) in ypoly_mul(&denom.coeffs[k], &out.coeffs[n - k], &self.ybound) {
                    *rhs.entry(y).or_insert_with(BigInt::zero) -= c;
                }
            }
            rhs.retain(|_, c| !c.is_zero());
            let mut b = ypoly_mul(&u_inv, &rhs, &self.ybound);
            b.retain(|_, c| !c.is_zero());
            out.coeffs[n] = b;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.tmax, self.ybound.clone()).divide(self)
    }

    /// Applies a monomial map to every `y`-multidegree.
    pub fn map_y<F>(&self, tmax: u32, ybound: Multidegree, mut f: F) -> Result<Self>
    where
        F: FnMut(&Multidegree) -> Result<Multidegree>,
    {
        let mut out = Self::zero(tmax, ybound);
        for (t, y, c) in self.terms() {
            let y2 = f(y)?;
            out.add_term(t, y2, c.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            tmax: self.tmax,
            ybound: self.ybound.exponents().to_vec(),
            terms: self
                .terms()
                .map(|(t, y, c)| TermJson { t, y: y.exponents().to_vec(), c: c.clone() })
                .collect(),
        }
    }

    pub fn from_json(json: &SeriesJson) -> Self {
        Self::from_terms(
            json.tmax,
            Multidegree::new(json.ybound.clone()),
            json.terms.iter().map(|t| (t.t, Multidegree::new(t.y.clone()), t.c.clone())),
        )
    }

    /// Human-readable polynomial, e.g. `1 - t^2*y1*y2^2 - t^3*y1*y2^2*y3^2`.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = String::new();
        for (t, y, c) in self.terms() {
            let mut factors = Vec::new();
            match t {
                0 => {}
                1 => factors.push("t".to_string()),
                _ => factors.push(format!("t^{t}")),
            }
            if !y.is_zero() {
                factors.push(y.display_with(names));
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for BigradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&y_names(self.num_vars())))
    }
}

impl fmt::Debug for BigradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [t<={}, y<={:?}]", self.tmax, self.ybound)
    }
}

fn ypoly_mul(a: &YPoly, b: &YPoly, bound: &Multidegree) -> YPoly {
    let mut out = YPoly::new();
    for (ya, ca) in a {
        for (yb, cb) in b {
            let y = ya.add(yb);
            if y.divides(bound) {
                *out.entry(y).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Inverse of `1 + w` with `w` supported in positive degrees: the geometric
/// series in `-w`, finite because `w` is nilpotent under the bound.
fn ypoly_inverse(u: &YPoly, bound: &Multidegree) -> YPoly {
    let n = bound.len();
    let zero = Multidegree::zero(n);
    let w: YPoly = u.iter().filter(|(y, _)| **y != zero).map(|(y, c)| (y.clone(), -c)).collect();
    let mut acc = YPoly::from([(zero.clone(), BigInt::one())]);
    let mut power = acc.clone();
    while !w.is_empty() {
        power = ypoly_mul(&power, &w, bound);
        if power.is_empty() {
            break;
        }
        for (y, c) in &power {
            *acc.entry(y.clone()).or_insert_with(BigInt::zero) += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree::new(v.to_vec())
    }

    #[test]
    fn product_of_two_linear_factors() {
        let b = md(&[1, 1]);
        let p = BigradedSeries::koszul_numerator(4, b.clone());
        let expected = BigradedSeries::from_terms(
            4,
            b,
            [(0, md(&[0, 0]), 1.into()), (1, md(&[1, 0]), 1.into()), (1, md(&[0, 1]), 1.into()), (2, md(&[1, 1]), 1.into())],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn geometric_inverse() {
        let b = md(&[8]);
        let a = BigradedSeries::from_terms(8, b.clone(), [(0, md(&[0]), 1.into()), (2, md(&[2]), (-1).into())]);
        let inv = a.inverse().unwrap();
        let expected = BigradedSeries::from_terms(8, b, (0..=4).map(|k| (2 * k, md(&[2 * k]), BigInt::one())));
        assert_eq!(inv, expected);
    }

    #[test]
    fn inverse_with_y_constant_part() {
        let b = md(&[3, 2]);
        let a = BigradedSeries::from_terms(
            5,
            b,
            [(0, md(&[0, 0]), 1.into()), (0, md(&[1, 0]), 2.into()), (1, md(&[0, 1]), (-3).into())],
        );
        let one = BigradedSeries::one(5, a.ybound().clone());
        assert_eq!(a.mul(&a.inverse().unwrap()), one);
    }

    #[test]
    fn inverse_requires_unit_constant() {
        let a = BigradedSeries::from_terms(3, md(&[1]), [(1, md(&[1]), 1.into())]);
        assert!(a.inverse().is_err());
    }

    #[test]
    fn display_and_json() {
        let q = BigradedSeries::from_terms(
            3,
            md(&[1, 2, 2]),
            [
                (0, md(&[0, 0, 0]), 1.into()),
                (2, md(&[1, 2, 0]), (-1).into()),
                (2, md(&[1, 0, 2]), (-1).into()),
                (3, md(&[1, 2, 2]), (-1).into()),
            ],
        );
        assert_eq!(q.to_string(), "1 - t^2*y1*y2^2 - t^2*y1*y3^2 - t^3*y1*y2^2*y3^2");
        let json = serde_json::to_string(&q.to_json()).unwrap();
        assert!(json.contains(r#"{"t":2,"y":[1,2,0],"c":-1},{"t":2,"y":[1,0,2],"c":-1}"#));
        let back: SeriesJson = serde_json::from_str(&json).unwrap();
        assert_eq!(BigradedSeries::from_json(&back), q);
        assert_eq!(BigradedSeries::one(2, md(&[1])).to_string(), "1");
    }
}
