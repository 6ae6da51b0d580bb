//! Bigraded dimension tables and two-variable Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// Finitely supported map `(i, j) -> dimension`. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DimTable {
    entries: BTreeMap<(i32, i32), usize>,
}

impl DimTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: i32, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: i32, j: i32, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), dim);
        }
    }

    pub fn add(&mut self, i: i32, j: i32, dim: usize) {
        let v = self.get(i, j) + dim;
        self.set(i, j, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// `(i_min, i_max, j_min, j_max)` of the support.
    pub fn bounds(&self) -> Option<(i32, i32, i32, i32)> {
        let mut it = self.entries.keys();
        let &(i0, j0) = it.next()?;
        Some(it.fold((i0, i0, j0, j0), |(a, b, c, d), &(i, j)| (a.min(i), b.max(i), c.min(j), d.max(j))))
    }

    /// The table with every entry moved by `(di, dj)`.
    pub fn shifted(&self, di: i32, dj: i32) -> DimTable {
        self.iter().map(|((i, j), v)| ((i + di, j + dj), v)).collect()
    }

    /// Sum over `j` for each homological degree.
    pub fn by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for ((i, _), v) in self.iter() {
            *out.entry(i).or_insert(0) += v;
        }
        out
    }

    pub fn poincare(&self) -> LaurentPoly2 {
        self.iter().map(|(k, v)| (k, v as i64)).collect()
    }
}

impl FromIterator<((i32, i32), usize)> for DimTable {
    fn from_iter<T: IntoIterator<Item = ((i32, i32), usize)>>(iter: T) -> Self {
        let mut t = DimTable::new();
        for ((i, j), v) in iter {
            t.add(i, j, v);
        }
        t
    }
}

pub(crate) fn bigrading_key(i: i32, j: i32) -> String {
    format!("({i},{j})")
}

pub(crate) fn parse_bigrading_key(s: &str) -> Option<(i32, i32)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl Serialize for DimTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (&(i, j), v) in &self.entries {
            map.serialize_entry(&bigrading_key(i, j), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for DimTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = DimTable;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"(i,j)\" keys to dimensions")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<DimTable, A::Error> {
                let mut t = DimTable::new();
                while let Some((k, v)) = access.next_entry::<String, usize>()? {
                    let (i, j) = parse_bigrading_key(&k).ok_or_else(|| de::Error::custom(format!("bad key {k}")))?;
                    t.set(i, j, v);
                }
                Ok(t)
            }
        }
        deserializer.deserialize_map(V)
    }
}

/// Laurent polynomial in `t` and `q` with integer coefficients, stored as
/// `(power of t, power of q) -> coefficient`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i32, i32), i64>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn monomial(t: i32, q: i32, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(t, q, c);
        p
    }

    pub fn coeff(&self, t: i32, q: i32) -> i64 {
        self.terms.get(&(t, q)).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, t: i32, q: i32, c: i64) {
        let v = self.coeff(t, q) + c;
        if v == 0 {
            self.terms.remove(&(t, q));
        } else {
            self.terms.insert((t, q), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    /// Division by `1 + t^a q^b`; returns quotient and remainder. The
    /// remainder is zero exactly when the division is exact.
    pub fn div_one_plus(&self, a: i32, b: i32) -> (LaurentPoly2, LaurentPoly2) {
        assert!((a, b) != (0, 0), "divisor must be non-constant");
        // Split into chains base + m (a, b); each chain is a one-variable
        // Laurent polynomial in X = t^a q^b.
        let mut chains: BTreeMap<(i32, i32), BTreeMap<i32, i64>> = BTreeMap::new();
        for ((t, q), c) in self.terms() {
            let m = if a != 0 { t.div_euclid(a) } else { q.div_euclid(b) };
            chains.entry((t - m * a, q - m * b)).or_default().insert(m, c);
        }
        let mut quotient = LaurentPoly2::zero();
        let mut remainder = LaurentPoly2::zero();
        for ((t0, q0), mut chain) in chains {
            let lo = *chain.keys().next().unwrap();
            let hi = *chain.keys().next_back().unwrap();
            for m in lo..hi {
                let c = chain.get(&m).copied().unwrap_or(0);
                if c != 0 {
                    quotient.add_term(t0 + m * a, q0 + m * b, c);
                    *chain.entry(m + 1).or_insert(0) -= c;
                }
            }
            let last = chain.get(&hi).copied().unwrap_or(0);
            remainder.add_term(t0 + hi * a, q0 + hi * b, last);
        }
        (quotient, remainder)
    }

    /// Multiplies by the monomial `t^a q^b`.
    pub fn shift(&self, a: i32, b: i32) -> LaurentPoly2 {
        self.terms().map(|((t, q), c)| ((t + a, q + b), c)).collect()
    }

    /// Whether every monomial is a power of `t q^2`.
    pub fn is_in_tq2(&self) -> bool {
        self.terms.keys().all(|&(t, q)| q == 2 * t)
    }
}

impl FromIterator<((i32, i32), i64)> for LaurentPoly2 {
    fn from_iter<T: IntoIterator<Item = ((i32, i32), i64)>>(iter: T) -> Self {
        let mut p = LaurentPoly2::zero();
        for ((t, q), c) in iter {
            p.add_term(t, q, c);
        }
        p
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self.terms().chain(rhs.terms()).collect()
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        self.terms().chain(rhs.terms().map(|(k, c)| (k, -c))).collect()
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut p = LaurentPoly2::zero();
        for ((t1, q1), c1) in self.terms() {
            for ((t2, q2), c2) in rhs.terms() {
                p.add_term(t1 + t2, q1 + q2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly2 {
    /// Terms in descending `t` then descending `q`, e.g. `q^-1 + t^-2 q^-5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut ordered: Vec<_> = self.terms().collect();
        ordered.sort_by(|a, b| b.0 .0.cmp(&a.0 .0).then(b.0 .1.cmp(&a.0 .1)));
        for ((t, q), c) in ordered {
            let mut body = Vec::new();
            if t != 0 {
                body.push(power("t", t));
            }
            if q != 0 {
                body.push(power("q", q));
            }
            let mono = body.join(" ");
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (mag, mono.is_empty()) {
                (m, true) => write!(f, "{m}")?,
                (1, false) => write!(f, "{mono}")?,
                (m, false) => write!(f, "{m}{mono}")?,
            }
        }
        Ok(())
    }
}

fn power(var: &str, e: i32) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_drops_zero_entries() {
        let mut t = DimTable::new();
        t.set(0, 1, 2);
        t.set(0, 1, 0);
        assert!(t.is_empty());
        assert_eq!(t.bounds(), None);
    }

    #[test]
    fn table_json_uses_explicit_keys() {
        let t: DimTable = [((0, -1), 1), ((-3, -9), 2)].into_iter().collect();
        let j = serde_json_like(&t);
        assert_eq!(j, vec![("(-3,-9)".to_string(), 2), ("(0,-1)".to_string(), 1)]);
        assert_eq!(parse_bigrading_key("(-3, -9)"), Some((-3, -9)));
    }

    fn serde_json_like(t: &DimTable) -> Vec<(String, usize)> {
        t.iter().map(|((i, j), v)| (bigrading_key(i, j), v)).collect()
    }

    #[test]
    fn display_orders_terms() {
        let p: LaurentPoly2 = [((0, -3), 1), ((0, -1), 1)].into_iter().collect();
        assert_eq!(p.to_string(), "q^-1 + q^-3");
        assert_eq!(LaurentPoly2::zero().to_string(), "0");
        let r: LaurentPoly2 = [((-2, -5), 1), ((0, 0), 3), ((1, 2), -2)].into_iter().collect();
        assert_eq!(r.to_string(), "-2t q^2 + 3 + t^-2 q^-5");
    }

    #[test]
    fn exact_division_by_binomial() {
        let one_plus_q2: LaurentPoly2 = [((0, 0), 1), ((0, 2), 1)].into_iter().collect();
        let f: LaurentPoly2 = [((-3, -9), 1), ((0, -1), 1), ((2, 4), 5)].into_iter().collect();
        let prod = &f * &one_plus_q2;
        let (quot, rem) = prod.div_one_plus(0, 2);
        assert!(rem.is_zero());
        assert_eq!(quot, f);
        let (_, rem) = f.div_one_plus(0, 2);
        assert!(!rem.is_zero());
    }

    #[test]
    fn division_along_tq2() {
        let x = |k: i32| LaurentPoly2::monomial(k, 2 * k, 1);
        let one_plus_x = &LaurentPoly2::one() + &x(1);
        let f = &x(-2) + &x(1);
        let (q, r) = (&f * &one_plus_x).div_one_plus(1, 2);
        assert!(r.is_zero());
        assert_eq!(q, f);
        assert!(q.is_in_tq2());
    }
}
