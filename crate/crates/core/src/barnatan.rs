//! Bar-Natan homology: the bigraded columns, the filtered (`u = 1`) theory,
//! the orientation count of its dimension and Lee-style generators.

use std::collections::BTreeMap;

use crate::cube::{build_diagonal, build_khovanov, BigradedComplex, State, StateIndex};
use crate::gf2::{induced_map, BitVec, GF2Matrix, Subquotient};
use crate::pd::{LinkDiagram, Slot};
use crate::table::DimTable;

/// Graded Bar-Natan homology over a window of q-degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNTable {
    pub table: DimTable,
    pub window: (i32, i32),
    /// The least q-degree with a nonzero chain group. Every column at or
    /// below it computes the same complex up to a shift of levels.
    pub j_s: i32,
    pub stable_column: BTreeMap<i32, usize>,
}

impl BNTable {
    /// Column `j` as degree -> dimension.
    pub fn column(&self, j: i32) -> BTreeMap<i32, usize> {
        self.table.iter().filter(|&((_, q), _)| q == j).map(|((i, _), d)| (i, d)).collect()
    }
}

/// Homology of the Bar-Natan column complex at q-degree `j`.
pub fn bn_column(c: &BigradedComplex, j: i32) -> BTreeMap<i32, usize> {
    c.barnatan_column(j).complex.homology_dims()
}

/// Threshold below which the column complexes stop changing.
pub fn stable_threshold(c: &BigradedComplex) -> i32 {
    c.bounds().map_or(c.parity(), |(_, _, jmin, _)| jmin)
}

/// Default window: the support of the complex plus two stable columns.
pub fn default_window(c: &BigradedComplex) -> (i32, i32) {
    match c.bounds() {
        Some((_, _, jmin, jmax)) => (jmin - 2, jmax),
        None => (c.parity() - 2, c.parity()),
    }
}

pub fn bn_from_complex(c: &BigradedComplex, window: (i32, i32)) -> BNTable {
    let mut table = DimTable::new();
    for j in window.0..=window.1 {
        if (j - c.parity()).rem_euclid(2) != 0 {
            continue;
        }
        for (i, d) in bn_column(c, j) {
            table.set(i, j, d);
        }
    }
    let j_s = stable_threshold(c);
    BNTable { table, window, j_s, stable_column: bn_column(c, j_s) }
}

pub fn bn_homology(d: &LinkDiagram, window: Option<(i32, i32)>) -> BNTable {
    let c = build_khovanov(d);
    let w = window.unwrap_or_else(|| default_window(&c));
    bn_from_complex(&c, w)
}

/// Filtered (`u = 1`) homology per homological degree.
pub fn filtered_from_complex(c: &BigradedComplex) -> BTreeMap<i32, usize> {
    c.filtered().complex.homology_dims()
}

pub fn filtered_homology(d: &LinkDiagram) -> BTreeMap<i32, usize> {
    filtered_from_complex(&build_khovanov(d))
}

/// A set `E` of components whose orientation is reversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationClass {
    pub flips: Vec<bool>,
    /// `2 Σ_{l∈E, m∉E} lk(L_l, L_m)`.
    pub degree: i32,
}

pub fn orientation_classes(d: &LinkDiagram) -> Vec<OrientationClass> {
    let lk = d.linking_matrix();
    let k = d.component_count();
    (0..1u64 << k)
        .map(|mask| {
            let flips: Vec<bool> = (0..k).map(|l| (mask >> l) & 1 == 1).collect();
            let mut degree = 0;
            for l in 0..k {
                for m in 0..k {
                    if flips[l] && !flips[m] {
                        degree += 2 * lk[l][m];
                    }
                }
            }
            OrientationClass { flips, degree }
        })
        .collect()
}

/// Dimension of the filtered theory per degree, counted from linking numbers.
pub fn orientation_dims(d: &LinkDiagram) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for class in orientation_classes(d) {
        *out.entry(class.degree).or_insert(0) += 1;
    }
    out
}

/// The cycle attached to an orientation.
#[derive(Debug, Clone)]
pub struct LeeGenerator {
    pub flips: Vec<bool>,
    pub degree: i32,
    pub vertex: u64,
    /// Circles labelled `b`; the others carry `a`.
    pub b_circles: u64,
    /// The chain in the monomial basis of the filtered complex in `degree`.
    pub chain: BitVec,
}

impl LeeGenerator {
    /// The same chain as a single basis vector of the `a`/`b` state basis.
    pub fn diagonal_state(&self) -> State {
        State { vertex: self.vertex, labels: self.b_circles }
    }
}

/// Splits the circles of the oriented smoothing into groups `A` and `B`:
/// the two circles meeting at a crossing lie in different groups. In each
/// connected family of circles the one with the least arc label is put in `A`
/// exactly when the component through that arc keeps its orientation.
pub fn lee_groups(d: &LinkDiagram, flips: &[bool]) -> (u64, u64) {
    let vertex = d.orientation_vertex(flips).expect("flip vector has one entry per component");
    let res = d.resolve(vertex);
    let nc = res.circle_count();
    let mut adj = vec![Vec::new(); nc];
    for c in 0..d.crossing_count() {
        let u = res.circle_of_arc(d.arc_at(Slot { crossing: c, pos: 0 }));
        let v = res.circle_of_arc(d.arc_at(Slot { crossing: c, pos: 2 }));
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<Option<bool>> = vec![None; nc];
    for root in 0..nc {
        if color[root].is_some() {
            continue;
        }
        let min_arc = d.arc_index(res.circles[root][0]).unwrap();
        let root_is_b = flips[d.component_of_arc(min_arc)];
        color[root] = Some(root_is_b);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let cu = color[u].unwrap();
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        stack.push(v);
                    }
                    Some(cv) => debug_assert_ne!(cv, cu, "circle adjacency graph is bipartite"),
                }
            }
        }
    }
    let b_mask = color.iter().enumerate().filter(|(_, c)| c.unwrap()).fold(0u64, |m, (k, _)| m | (1 << k));
    (vertex, b_mask)
}

/// Lee generator for the orientation with the flagged components reversed.
/// `total` is the filtered total complex of `c`, which must be the
/// unreduced complex of `d`.
pub fn lee_generator(d: &LinkDiagram, c: &BigradedComplex, total: &crate::cube::TotalComplex, flips: &[bool]) -> LeeGenerator {
    let (vertex, b_mask) = lee_groups(d, flips);
    let nc = d.resolve(vertex).circle_count();
    let degree = vertex.count_ones() as i32 - d.n_minus() as i32;
    let a_circles: Vec<usize> = (0..nc).filter(|k| (b_mask >> k) & 1 == 0).collect();
    let dim = total.complex.dim(degree);
    let mut chain = BitVec::zeros(dim);
    // a = 1 + x on each A circle, b = x on each B circle.
    for choice in 0..1u64 << a_circles.len() {
        let mut labels = b_mask;
        for (bit, &k) in a_circles.iter().enumerate() {
            if (choice >> bit) & 1 == 1 {
                labels |= 1 << k;
            }
        }
        let ((i, j), pos) = c.locate(State { vertex, labels }).expect("state exists");
        debug_assert_eq!(i, degree);
        chain.flip(total.offset(i, j).expect("filtered complex holds every group") + pos);
    }
    LeeGenerator { flips: flips.to_vec(), degree, vertex, b_circles: b_mask, chain }
}

pub fn lee_generators(d: &LinkDiagram) -> Vec<LeeGenerator> {
    let c = build_khovanov(d);
    let total = c.filtered();
    orientation_classes(d).iter().map(|o| lee_generator(d, &c, &total, &o.flips)).collect()
}

/// The `u = 1` complex in the `a`/`b` basis together with its adjoint.
#[derive(Debug, Clone)]
pub struct DiagonalComplex {
    pub index: StateIndex,
    pub d: BTreeMap<i32, GF2Matrix>,
}

impl DiagonalComplex {
    pub fn new(d: &LinkDiagram) -> Self {
        let (index, maps) = build_diagonal(d);
        DiagonalComplex { index, d: maps }
    }

    fn map(&self, i: i32) -> GF2Matrix {
        self.d.get(&i).cloned().unwrap_or_else(|| GF2Matrix::zeros(self.index.dim(i + 1), self.index.dim(i)))
    }

    /// `d` and `d*` applied to the basis state `s` in degree `i`.
    pub fn annihilates(&self, i: i32, s: State) -> (bool, bool) {
        let v = BitVec::unit(self.index.dim(i), self.index.position(s));
        let d = self.map(i).mul_vec(&v).is_zero();
        let adj = self.map(i - 1).transpose().mul_vec(&v).is_zero();
        (d, adj)
    }

    /// `dim(ker d ∩ ker d*)` per degree.
    pub fn harmonic_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &i in self.index.degrees.keys() {
            let stacked = self.map(i).vstack(&self.map(i - 1).transpose());
            let dim = self.index.dim(i) - stacked.rank();
            if dim > 0 {
                out.insert(i, dim);
            }
        }
        out
    }

    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &i in self.index.degrees.keys() {
            let dim = self.index.dim(i) - self.map(i).rank() - self.map(i - 1).rank();
            if dim > 0 {
                out.insert(i, dim);
            }
        }
        out
    }
}

/// Rank of the span of the classes of `chains` in the homology of the
/// filtered complex in degree `i`.
pub fn class_rank(total: &crate::cube::TotalComplex, i: i32, chains: &[&BitVec]) -> Option<usize> {
    let fc = &total.complex;
    let h = Subquotient::homology(&fc.differential(i - 1), &fc.differential(i)).ok()?;
    let coords: Vec<BitVec> = chains.iter().map(|c| h.coordinates(c)).collect::<Result<_, _>>().ok()?;
    Some(GF2Matrix::from_rows(h.dim(), &coords).rank())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableIsoReport {
    pub j_s: i32,
    pub stable_column: BTreeMap<i32, usize>,
    pub filtered: BTreeMap<i32, usize>,
    /// `(i, j)` positions where `u : BN^{i,j} -> BN^{i,j-2}` failed to be an isomorphism.
    pub u_failures: Vec<(i32, i32)>,
}

impl StableIsoReport {
    pub fn passed(&self) -> bool {
        self.stable_column == self.filtered && self.u_failures.is_empty()
    }
}

/// Compares the stable column with the filtered theory and checks that
/// multiplication by `u` is an isomorphism on the columns `j_s`, `j_s - 2`.
pub fn stable_iso_check(c: &BigradedComplex) -> StableIsoReport {
    let j_s = stable_threshold(c);
    let stable_column = bn_column(c, j_s);
    let filtered = filtered_from_complex(c);
    let mut u_failures = Vec::new();
    for j in [j_s, j_s - 2] {
        u_failures.extend(u_map_failures(c, j));
    }
    StableIsoReport { j_s, stable_column, filtered, u_failures }
}

/// Degrees `i` where `u : BN^{i,j} -> BN^{i,j-2}` is not an isomorphism.
pub fn u_map_failures(c: &BigradedComplex, j: i32) -> Vec<(i32, i32)> {
    let src = c.barnatan_column(j);
    let dst = c.barnatan_column(j - 2);
    let mut out = Vec::new();
    let degrees: std::collections::BTreeSet<i32> = src.layout.keys().chain(dst.layout.keys()).copied().collect();
    for i in degrees {
        let (fs, fd) = (&src.complex, &dst.complex);
        let hs = Subquotient::homology(&fs.differential(i - 1), &fs.differential(i)).unwrap();
        let hd = Subquotient::homology(&fd.differential(i - 1), &fd.differential(i)).unwrap();
        // The column at j is spanned by the groups C^{i,q}, q >= j, which
        // also sit inside the column at j - 2.
        let mut entries = Vec::new();
        for &(q, off, _) in src.layout.get(&i).map_or(&[][..], |v| v.as_slice()) {
            let target = dst.offset(i, q).expect("column j sits inside column j-2");
            entries.extend((0..c.dim(i, q)).map(|p| (target + p, off + p)));
        }
        let inclusion = GF2Matrix::from_triplets(fd.dim(i), fs.dim(i), entries);
        let ok = match induced_map(&inclusion, &hs, &hd) {
            Ok(m) => hs.dim() == hd.dim() && m.rank() == hs.dim(),
            Err(_) => false,
        };
        if !ok {
            out.push((i, j));
        }
    }
    out
}

/// Pages of the column at q-degree `j`, for `j <= j_s`, against the pages of
/// the filtered complex with levels shifted by `(j - parity) / 2`. Returns
/// one message per disagreeing page.
pub fn stable_shift_check(c: &BigradedComplex, j: i32) -> Result<Vec<String>, crate::spectral::SpectralError> {
    use crate::spectral::{compute_pages, default_rmax};
    let column = c.barnatan_column(j).complex;
    let filtered = c.filtered().complex;
    let r_max = default_rmax(&column).max(default_rmax(&filtered));
    let a = compute_pages(&column, r_max)?;
    let b = compute_pages(&filtered, r_max)?;
    let shift = (j - c.parity()).div_euclid(2);
    let mut out = Vec::new();
    for (pa, pb) in a.pages.iter().zip(&b.pages) {
        let moved = pa.dims().shifted(shift, -shift);
        if moved != pb.dims() {
            out.push(format!("E_{} of column {j}: {:?} vs filtered {:?}", pa.r, moved, pb.dims()));
        }
    }
    Ok(out)
}
