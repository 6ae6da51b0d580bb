//! Khovanov homology, the induced map `β_*`, the secondary groups `KK` and
//! the thin-knot factorization.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cube::BigradedComplex;
use crate::gf2::{induced_map, LinalgError, Subquotient};
use crate::table::{DimTable, LaurentPoly2};

/// `Kh^{i,j} = ker ∂ / im ∂` on the chain group `C^{i,j}`.
#[derive(Debug, Clone)]
pub struct HomologyGroup {
    pub i: i32,
    pub j: i32,
    pub subquotient: Subquotient,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.subquotient.dim()
    }
}

/// Homology at every bigrading with a nonzero chain group.
#[derive(Debug, Clone)]
pub struct Homology {
    pub groups: BTreeMap<(i32, i32), HomologyGroup>,
}

impl Homology {
    pub fn get(&self, i: i32, j: i32) -> Option<&HomologyGroup> {
        self.groups.get(&(i, j))
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.get(i, j).map_or(0, |g| g.dim())
    }

    pub fn dims(&self) -> DimTable {
        self.groups.iter().map(|(&k, g)| (k, g.dim())).collect()
    }
}

pub fn khovanov_homology(c: &BigradedComplex) -> Homology {
    let groups = c
        .bigradings()
        .map(|(i, j)| {
            let sq = Subquotient::homology(&c.d_block(i - 1, j), &c.d_block(i, j))
                .expect("image of ∂ lies in its kernel");
            ((i, j), HomologyGroup { i, j, subquotient: sq })
        })
        .collect();
    Homology { groups }
}

/// `β_* : Kh^{i,j} -> Kh^{i+1,j+2}` for every pair of nonzero groups.
pub fn beta_star(c: &BigradedComplex, h: &Homology) -> Result<BTreeMap<(i32, i32), crate::gf2::GF2Matrix>, LinalgError> {
    let mut out = BTreeMap::new();
    for (&(i, j), src) in &h.groups {
        let Some(dst) = h.get(i + 1, j + 2) else { continue };
        if src.dim() == 0 || dst.dim() == 0 {
            continue;
        }
        let m = induced_map(&c.beta_block(i, j), &src.subquotient, &dst.subquotient)?;
        out.insert((i, j), m);
    }
    Ok(out)
}

/// Bigradings `(i,j)` where `β_* ∘ β_*` out of `(i,j)` is nonzero.
pub fn beta_square_failures(beta: &BTreeMap<(i32, i32), crate::gf2::GF2Matrix>) -> Vec<(i32, i32)> {
    beta.iter()
        .filter_map(|(&(i, j), m)| {
            let next = beta.get(&(i + 1, j + 2))?;
            (!next.mul(m).is_zero()).then_some((i, j))
        })
        .collect()
}

pub fn beta_ranks(beta: &BTreeMap<(i32, i32), crate::gf2::GF2Matrix>) -> DimTable {
    beta.iter().map(|(&k, m)| (k, m.rank())).collect()
}

/// `KK^{i,j}`: homology of `Kh` under `β_*` along the diagonals `j - 2i`.
pub fn secondary_groups(h: &Homology, beta: &BTreeMap<(i32, i32), crate::gf2::GF2Matrix>) -> DimTable {
    let rank = |i: i32, j: i32| beta.get(&(i, j)).map_or(0, |m| m.rank());
    h.groups
        .iter()
        .map(|(&(i, j), g)| ((i, j), g.dim() - rank(i, j) - rank(i - 1, j - 2)))
        .collect()
}

/// `Σ t^i q^j dim` of a table.
pub fn poincare_polynomial(t: &DimTable) -> LaurentPoly2 {
    t.poincare()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThinError {
    #[error("not thin for this s: Kh^{{{i},{j}}} lies on diagonal j-2i = {} outside {{{},{}}}", j - 2 * i, s - 1, s + 1)]
    NotThin { s: i32, i: i32, j: i32 },
    #[error("no factorization q^(s-1)(1+q^2)(1+(1+tq^2)Kh') exists; residual {residual}")]
    NotFactorizable { residual: LaurentPoly2 },
}

/// Solves `Kh = q^{s-1}(1+q²)(1+(1+tq²)Kh′)` for `Kh′ ∈ Z[(tq²)^{±1}]`.
pub fn thin_decompose(kh: &LaurentPoly2, s: i32) -> Result<LaurentPoly2, ThinError> {
    if let Some(((i, j), _)) = kh.terms().find(|&((i, j), _)| j - 2 * i != s - 1 && j - 2 * i != s + 1) {
        return Err(ThinError::NotThin { s, i, j });
    }
    let (p, rem) = kh.shift(0, 1 - s).div_one_plus(0, 2);
    if !rem.is_zero() {
        return Err(ThinError::NotFactorizable { residual: rem });
    }
    let p = &p - &LaurentPoly2::one();
    let (khp, rem) = p.div_one_plus(1, 2);
    if !rem.is_zero() {
        return Err(ThinError::NotFactorizable { residual: rem });
    }
    if !khp.is_in_tq2() {
        let residual = khp.terms().filter(|&((t, q), _)| q != 2 * t).collect();
        return Err(ThinError::NotFactorizable { residual });
    }
    Ok(khp)
}

/// `q^{s-1}(1+q²)(1+(1+tq²)Kh′)`.
pub fn thin_reconstruct(khp: &LaurentPoly2, s: i32) -> LaurentPoly2 {
    let one = LaurentPoly2::one();
    let one_tq2 = &one + &LaurentPoly2::monomial(1, 2, 1);
    let inner = &one + &(&one_tq2 * khp);
    let outer = &LaurentPoly2::monomial(0, s - 1, 1) + &LaurentPoly2::monomial(0, s + 1, 1);
    &outer * &inner
}

/// `s` from the two occupied diagonals `{s-1, s+1}`, if there are exactly two.
pub fn infer_s(kh: &LaurentPoly2) -> Option<i32> {
    let diagonals: BTreeSet<i32> = kh.terms().map(|((i, j), _)| j - 2 * i).collect();
    match diagonals.iter().copied().collect::<Vec<_>>().as_slice() {
        [a, b] if b - a == 2 => Some(a + 1),
        _ => None,
    }
}

/// Failure of exactness of `Kh^{i-1} -> Kh^i -> Kh^{i+1}` under `β_*` at
/// one position of a diagonal `k = j - 2i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deviation {
    pub diagonal: i32,
    pub i: i32,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    /// Every position whose `β_*` homology is nonzero.
    pub deviations: Vec<Deviation>,
    pub filtered: BTreeMap<i32, usize>,
}

impl ExactnessReport {
    /// Degrees `i` with a deviation while the filtered theory vanishes.
    pub fn unexplained(&self) -> Vec<Deviation> {
        self.deviations.iter().filter(|d| self.filtered.get(&d.i).copied().unwrap_or(0) == 0).copied().collect()
    }

    pub fn deviation_degrees(&self) -> BTreeSet<i32> {
        self.deviations.iter().map(|d| d.i).collect()
    }
}

pub fn exactness_report(kk: &DimTable, filtered: &BTreeMap<i32, usize>) -> ExactnessReport {
    let deviations =
        kk.iter().map(|((i, j), dim)| Deviation { diagonal: j - 2 * i, i, dim }).collect();
    ExactnessReport { deviations, filtered: filtered.clone() }
}
