//! Spectral sequences of bounded filtered complexes over GF(2).
//!
//! The filtration is decreasing, `F^k ⊇ F^{k+1}`, and given by a level on
//! every basis element: `F^k` in degree `n` is spanned by basis vectors of
//! level `≥ k`. The differential raises degree by one and never lowers level.
//! Page positions are `(k, l)` with total degree `n = k + l`.

use std::borrow::Cow;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf2::{induced_map, GF2Matrix, LinalgError, Subquotient};
use crate::table::DimTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("differential out of degree {degree} has shape {found:?}, expected {expected:?}")]
    Shape { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("d∘d is nonzero out of degree {degree}")]
    SquareNonzero { degree: i32 },
    #[error("differential lowers filtration level in degree {degree} (basis {col} -> {row})")]
    LevelDecreasing { degree: i32, row: usize, col: usize },
    #[error("pages have not stabilized by r = {0}")]
    NotStabilized(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite cochain complex with a filtration level on each basis element.
#[derive(Debug, Clone, Default)]
pub struct FilteredComplex {
    levels: BTreeMap<i32, Vec<i32>>,
    diffs: BTreeMap<i32, GF2Matrix>,
}

impl FilteredComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares degree `n` with one level per basis element.
    pub fn add_degree(&mut self, n: i32, levels: Vec<i32>) {
        self.levels.insert(n, levels);
    }

    /// Sets `d : C^n -> C^{n+1}`.
    pub fn set_differential(&mut self, n: i32, d: GF2Matrix) {
        self.diffs.insert(n, d);
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.levels.iter().filter(|(_, l)| !l.is_empty()).map(|(&n, _)| n)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.levels.get(&n).map_or(0, |l| l.len())
    }

    pub fn levels(&self, n: i32) -> &[i32] {
        self.levels.get(&n).map_or(&[], |l| l.as_slice())
    }

    pub fn differential(&self, n: i32) -> Cow<'_, GF2Matrix> {
        match self.diffs.get(&n) {
            Some(d) if d.rows() == self.dim(n + 1) && d.cols() == self.dim(n) => Cow::Borrowed(d),
            _ => Cow::Owned(GF2Matrix::zeros(self.dim(n + 1), self.dim(n))),
        }
    }

    /// `(min, max)` filtration level over all basis elements.
    pub fn level_range(&self) -> Option<(i32, i32)> {
        let all = self.levels.values().flatten().copied();
        let min = all.clone().min()?;
        Some((min, all.max()?))
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        for (&n, d) in &self.diffs {
            let expected = (self.dim(n + 1), self.dim(n));
            if (d.rows(), d.cols()) != expected {
                return Err(SpectralError::Shape { degree: n, expected, found: (d.rows(), d.cols()) });
            }
            let (src, dst) = (self.levels(n), self.levels(n + 1));
            if let Some((row, col)) = d.entries().find(|&(r, c)| dst[r] < src[c]) {
                return Err(SpectralError::LevelDecreasing { degree: n, row, col });
            }
            if !self.differential(n + 1).mul(d).is_zero() {
                return Err(SpectralError::SquareNonzero { degree: n });
            }
        }
        Ok(())
    }

    /// Homology dimension of the total complex per degree (zeros omitted).
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for n in self.degrees() {
            let dim = self.dim(n) - self.differential(n).rank() - self.differential(n - 1).rank();
            if dim > 0 {
                out.insert(n, dim);
            }
        }
        out
    }

    fn indices_at_least(&self, n: i32, k: i32) -> Vec<usize> {
        self.levels(n).iter().enumerate().filter(|(_, &l)| l >= k).map(|(p, _)| p).collect()
    }

    /// Basis (as rows) of `Z_r^k = {x ∈ F^k : dx ∈ F^{k+r}}` in degree `n`.
    fn cycles(&self, n: i32, k: i32, r: i32) -> GF2Matrix {
        let dim = self.dim(n);
        let cols = self.indices_at_least(n, k);
        if r <= 0 {
            let rows: Vec<_> = cols.iter().map(|&c| crate::gf2::BitVec::unit(dim, c)).collect();
            return GF2Matrix::from_rows(dim, &rows);
        }
        let low_rows: Vec<usize> =
            self.levels(n + 1).iter().enumerate().filter(|(_, &l)| l < k + r).map(|(p, _)| p).collect();
        let restricted = self.differential(n).submatrix(&low_rows, &cols);
        let kernel = restricted.kernel_basis();
        let rows: Vec<_> = kernel.row_vectors().iter().map(|v| v.embed(dim, &cols)).collect();
        GF2Matrix::from_rows(dim, &rows)
    }
}

/// One page `E_r` with its differential `d_r : E_r^{k,l} -> E_r^{k+r,l-r+1}`.
#[derive(Debug, Clone)]
pub struct SSPage {
    pub r: usize,
    groups: BTreeMap<(i32, i32), Subquotient>,
    differentials: BTreeMap<(i32, i32), GF2Matrix>,
}

impl SSPage {
    pub fn dims(&self) -> DimTable {
        self.groups.iter().map(|(&kl, g)| (kl, g.dim())).collect()
    }

    pub fn dim(&self, k: i32, l: i32) -> usize {
        self.groups.get(&(k, l)).map_or(0, |g| g.dim())
    }

    pub fn group(&self, k: i32, l: i32) -> Option<&Subquotient> {
        self.groups.get(&(k, l))
    }

    /// `d_r` out of `(k, l)`, when both ends are nonzero.
    pub fn differential(&self, k: i32, l: i32) -> Option<&GF2Matrix> {
        self.differentials.get(&(k, l))
    }

    pub fn differentials(&self) -> impl Iterator<Item = ((i32, i32), &GF2Matrix)> + '_ {
        self.differentials.iter().map(|(&kl, m)| (kl, m))
    }

    pub fn differential_is_zero(&self) -> bool {
        self.differentials.values().all(|m| m.is_zero())
    }

    /// Total dimension along each anti-diagonal `k + l = n`.
    pub fn total_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for ((k, l), d) in self.dims().iter() {
            *out.entry(k + l).or_insert(0) += d;
        }
        out
    }
}

/// All pages `E_0 .. E_{r_max}`.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub pages: Vec<SSPage>,
    /// `max level - min level`; every `d_r` with `r > span` vanishes.
    pub span: usize,
}

impl SpectralSequence {
    /// Least `r` from which every computed `d_r` vanishes.
    pub fn collapse_page(&self) -> Option<usize> {
        let last_nonzero = self.pages.iter().rposition(|p| !p.differential_is_zero());
        let r = last_nonzero.map_or(0, |i| i + 1);
        (r < self.pages.len()).then_some(r)
    }

    /// Whether the last page is `E_∞`: it lies beyond the filtration span,
    /// so it and every later page agree.
    pub fn stabilized(&self) -> bool {
        self.pages.last().is_some_and(|p| p.r > self.span)
    }

    pub fn page(&self, r: usize) -> Option<&SSPage> {
        self.pages.get(r)
    }

    pub fn e_infinity(&self) -> Option<&SSPage> {
        self.stabilized().then(|| self.pages.last()).flatten()
    }
}

/// Pages needed to reach `E_∞`: one beyond the filtration span, and at
/// least two.
pub fn default_rmax(fc: &FilteredComplex) -> usize {
    fc.level_range().map_or(2, |(lo, hi)| ((hi - lo) as usize + 1).max(2))
}

pub fn compute_pages(fc: &FilteredComplex, r_max: usize) -> Result<SpectralSequence, SpectralError> {
    fc.validate()?;
    let Some((kmin, kmax)) = fc.level_range() else {
        return Ok(SpectralSequence {
            pages: (0..=r_max).map(|r| SSPage { r, groups: BTreeMap::new(), differentials: BTreeMap::new() }).collect(),
            span: 0,
        });
    };
    let degrees: Vec<i32> = fc.degrees().collect();
    let mut pages = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let ri = r as i32;
        let mut groups = BTreeMap::new();
        for &n in &degrees {
            for k in kmin..=kmax {
                let num = fc.cycles(n, k, ri);
                if num.rows() == 0 {
                    continue;
                }
                let boundaries = fc.differential(n - 1).mul(&fc.cycles(n - 1, k - ri + 1, ri - 1).transpose());
                let den = boundaries.transpose().vstack(&fc.cycles(n, k + 1, ri - 1));
                let sq = Subquotient::new(&num, &den)?;
                if sq.dim() > 0 {
                    groups.insert((k, n - k), sq);
                }
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(k, l), src) in &groups {
            let target = (k + ri, l - ri + 1);
            let Some(dst) = groups.get(&target) else { continue };
            let m = induced_map(&fc.differential(k + l), src, dst)?;
            differentials.insert((k, l), m);
        }
        pages.push(SSPage { r, groups, differentials });
    }
    Ok(SpectralSequence { pages, span: (kmax - kmin) as usize })
}

/// `⊕_{k+l=n} E_∞^{k,l}` from a stabilized sequence.
pub fn reconstruct_abutment(ss: &SpectralSequence) -> Result<BTreeMap<i32, usize>, SpectralError> {
    let last = ss.e_infinity().ok_or(SpectralError::NotStabilized(ss.pages.len().saturating_sub(1)))?;
    Ok(last.total_dims())
}

/// Failures collected by a page check; empty means pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageReport {
    pub failures: Vec<String>,
}

impl PageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn push(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub(crate) fn compare(&mut self, what: &str, got: &DimTable, want: &DimTable) {
        if got != want {
            self.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }
}

/// Checks `dim E_{r+1} = dim ker d_r - rank d_r(in)` at every position.
pub fn check_page_coherence(ss: &SpectralSequence) -> PageReport {
    let mut report = PageReport::default();
    for w in ss.pages.windows(2) {
        let (p, next) = (&w[0], &w[1]);
        let r = p.r as i32;
        let mut keys: Vec<(i32, i32)> = p.groups.keys().chain(next.groups.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        for (k, l) in keys {
            let out_rank = p.differential(k, l).map_or(0, |m| m.rank());
            let in_rank = p.differential(k - r, l + r - 1).map_or(0, |m| m.rank());
            let expected = p.dim(k, l) - out_rank - in_rank;
            if next.dim(k, l) != expected {
                report.push(format!("E_{} at ({k},{l}): {} != {expected}", p.r + 1, next.dim(k, l)));
            }
        }
        for ((k, l), m) in p.differentials() {
            if let Some(next_m) = p.differential(k + r, l - r + 1) {
                if !next_m.mul(m).is_zero() {
                    report.push(format!("d_{} squares to nonzero at ({k},{l})", p.r));
                }
            }
        }
    }
    report
}

/// Which Khovanov-coupled sequence a page check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// All groups, level `(j - parity) / 2`.
    Filtered { parity: i32 },
    /// The column at q-degree `j`, level `p` on `C^{*,j+2p}`.
    Graded { j: i32 },
}

impl Flavor {
    /// The q-degree whose Khovanov group sits at level `k`.
    pub fn q_at(self, k: i32) -> i32 {
        match self {
            Flavor::Filtered { parity } => 2 * k + parity,
            Flavor::Graded { j } => j + 2 * k,
        }
    }
}

/// Expected `E_1` from the Khovanov table.
pub fn expected_e1(kh: &DimTable, flavor: Flavor) -> DimTable {
    let mut out = DimTable::new();
    for ((i, q), d) in kh.iter() {
        let k = match flavor {
            Flavor::Filtered { parity } => (q - parity).div_euclid(2),
            Flavor::Graded { j } => {
                if q < j || (q - j).rem_euclid(2) != 0 {
                    continue;
                }
                (q - j) / 2
            }
        };
        out.set(k, i - k, d);
    }
    out
}

/// Expected `E_2`: the secondary groups, with `ker β_*` on the `k = 0`
/// column of a graded sequence.
pub fn expected_e2(kh: &DimTable, beta_ranks: &DimTable, kk: &DimTable, flavor: Flavor) -> DimTable {
    let mut out = DimTable::new();
    for ((k, l), _) in expected_e1(kh, flavor).iter() {
        let (i, q) = (k + l, flavor.q_at(k));
        let d = match flavor {
            Flavor::Graded { .. } if k == 0 => kh.get(i, q) - beta_ranks.get(i, q),
            _ => kk.get(i, q),
        };
        out.set(k, l, d);
    }
    out
}

/// Compares `E_1`, `E_2` and the rank of `d_1` against Khovanov data.
pub fn verify_e1_e2(ss: &SpectralSequence, kh: &DimTable, beta_ranks: &DimTable, kk: &DimTable, flavor: Flavor) -> PageReport {
    let mut report = PageReport::default();
    let (Some(e1), Some(e2)) = (ss.page(1), ss.page(2)) else {
        report.push("fewer than three pages computed".into());
        return report;
    };
    report.compare("E_1", &e1.dims(), &expected_e1(kh, flavor));
    report.compare("E_2", &e2.dims(), &expected_e2(kh, beta_ranks, kk, flavor));
    for ((k, l), d) in e1.dims().iter() {
        let _ = d;
        let got = e1.differential(k, l).map_or(0, |m| m.rank());
        let want = beta_ranks.get(k + l, flavor.q_at(k));
        if got != want {
            report.push(format!("rank d_1 at ({k},{l}) is {got}, β_* has rank {want}"));
        }
    }
    report
}
