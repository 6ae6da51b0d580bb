//! Bigraded chain complexes built from the cube of smoothings.
//!
//! Each cube vertex carries `A^{⊗c}` for its `c` circles, `A = F2{1, x}`.
//! A basis state is stored as a bitmask over the circles (bit set = `x`).
//! Gradings of a state at a vertex of height `h` are
//!
//! ```text
//! i = h - n₋
//! j = (#1 - #x) + h + n₊ - 2n₋
//! ```
//!
//! Two maps of bidegree `(1,0)` and `(1,2)` come out of the same cube: the
//! Khovanov differential `∂` (from `m̄`, `Δ̄`) and `β` (from `m̃`, `Δ̃`).

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::gf2::GF2Matrix;
use crate::pd::{Cube, CubeEdge, EdgeKind, LinkDiagram};
use crate::spectral::FilteredComplex;
use crate::table::DimTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("reduced theory is only defined for knots (diagram has {0} components)")]
    NotAKnot(usize),
    #[error("basepoint arc {0} does not exist")]
    NoSuchArc(u32),
    #[error("reduced sub-basis is not closed under the {0} map")]
    ReducedClosure(&'static str),
    #[error("identity {identity} fails at bigrading ({i},{j})")]
    IdentityFailure { identity: &'static str, i: i32, j: i32 },
}

/// The local edge maps of the cube. Labels are bits: for the monomial
/// algebras `false = 1`, `true = x`; for [`EdgeAlgebra::Diagonal`]
/// `false = a`, `true = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAlgebra {
    /// `m̄(1,1)=1, m̄(1,x)=m̄(x,1)=x, m̄(x,x)=0`, `Δ̄(1)=1⊗x+x⊗1, Δ̄(x)=x⊗x`.
    Khovanov,
    /// `m̃(x,x)=x` and zero otherwise, `Δ̃(1)=1⊗1, Δ̃(x)=0`.
    Beta,
    /// Khovanov plus Beta: the `u = 1` algebra in the monomial basis.
    Filtered,
    /// The `u = 1` algebra in the basis `a = x+1, b = x`:
    /// `aa=a, bb=b, ab=0`, `a↦a⊗a, b↦b⊗b`.
    Diagonal,
}

impl EdgeAlgebra {
    pub fn merge(self, l: bool, r: bool) -> Option<bool> {
        match self {
            EdgeAlgebra::Khovanov => match (l, r) {
                (true, true) => None,
                _ => Some(l || r),
            },
            EdgeAlgebra::Beta => (l && r).then_some(true),
            EdgeAlgebra::Filtered => Some(l || r),
            EdgeAlgebra::Diagonal => (l == r).then_some(l),
        }
    }

    pub fn split(self, l: bool) -> &'static [(bool, bool)] {
        const ONE_X: &[(bool, bool)] = &[(false, true), (true, false)];
        const XX: &[(bool, bool)] = &[(true, true)];
        const ONE_ONE: &[(bool, bool)] = &[(false, false)];
        const FILTERED_ONE: &[(bool, bool)] = &[(false, true), (true, false), (false, false)];
        match (self, l) {
            (EdgeAlgebra::Khovanov, false) => ONE_X,
            (EdgeAlgebra::Khovanov, true) => XX,
            (EdgeAlgebra::Beta, false) => ONE_ONE,
            (EdgeAlgebra::Beta, true) => &[],
            (EdgeAlgebra::Filtered, false) => FILTERED_ONE,
            (EdgeAlgebra::Filtered, true) => XX,
            (EdgeAlgebra::Diagonal, false) => ONE_ONE,
            (EdgeAlgebra::Diagonal, true) => XX,
        }
    }

    /// Images of the state `labels` (a mask over tail circles) along `edge`.
    pub fn apply(self, edge: &CubeEdge, labels: u64) -> Vec<u64> {
        let bit = |t: usize| (labels >> t) & 1 == 1;
        let mut base = 0u64;
        for (t, &h) in edge.circle_map.iter().enumerate() {
            if !edge.tail_circles.contains(&t) && bit(t) {
                base |= 1 << h;
            }
        }
        match edge.kind {
            EdgeKind::Merge => {
                let (a, b) = (edge.tail_circles[0], edge.tail_circles[1]);
                let h = edge.head_circles[0];
                match self.merge(bit(a), bit(b)) {
                    Some(true) => vec![base | (1 << h)],
                    Some(false) => vec![base],
                    None => vec![],
                }
            }
            EdgeKind::Split => {
                let a = edge.tail_circles[0];
                let (h1, h2) = (edge.head_circles[0], edge.head_circles[1]);
                self.split(bit(a))
                    .iter()
                    .map(|&(l, r)| base | ((l as u64) << h1) | ((r as u64) << h2))
                    .collect()
            }
        }
    }
}

/// A basis element: cube vertex plus circle labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub vertex: u64,
    pub labels: u64,
}

/// Chain groups `C^{i,j}` with the blocks of `∂` and `β`.
#[derive(Debug, Clone)]
pub struct BigradedComplex {
    n_plus: usize,
    n_minus: usize,
    components: usize,
    /// Nonzero groups satisfy `j ≡ parity (mod 2)`.
    parity: i32,
    basepoint: Option<u32>,
    groups: BTreeMap<(i32, i32), Vec<State>>,
    d_blocks: BTreeMap<(i32, i32), GF2Matrix>,
    beta_blocks: BTreeMap<(i32, i32), GF2Matrix>,
}

impl BigradedComplex {
    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn gamma(&self) -> i32 {
        (self.components % 2) as i32
    }

    /// Parity of the q-gradings carrying generators: `γ` for the unreduced
    /// complex, `γ + 1` for the reduced one.
    pub fn parity(&self) -> i32 {
        self.parity
    }

    pub fn basepoint(&self) -> Option<u32> {
        self.basepoint
    }

    pub fn is_reduced(&self) -> bool {
        self.basepoint.is_some()
    }

    pub fn bigradings(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.groups.keys().copied()
    }

    pub fn group(&self, i: i32, j: i32) -> &[State] {
        self.groups.get(&(i, j)).map_or(&[], |g| g.as_slice())
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.group(i, j).len()
    }

    pub fn dims(&self) -> DimTable {
        self.groups.iter().map(|(&k, g)| (k, g.len())).collect()
    }

    /// `(i_min, i_max, j_min, j_max)` over nonzero groups.
    pub fn bounds(&self) -> Option<(i32, i32, i32, i32)> {
        self.dims().bounds()
    }

    /// Position of a state inside its group.
    pub fn locate(&self, s: State) -> Option<((i32, i32), usize)> {
        self.groups.iter().find_map(|(&k, g)| g.binary_search(&s).ok().map(|p| (k, p)))
    }

    /// `∂ : C^{i,j} -> C^{i+1,j}` as a `dim(i+1,j) x dim(i,j)` matrix.
    pub fn d_block(&self, i: i32, j: i32) -> Cow<'_, GF2Matrix> {
        match self.d_blocks.get(&(i, j)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(GF2Matrix::zeros(self.dim(i + 1, j), self.dim(i, j))),
        }
    }

    /// `β : C^{i,j} -> C^{i+1,j+2}`.
    pub fn beta_block(&self, i: i32, j: i32) -> Cow<'_, GF2Matrix> {
        match self.beta_blocks.get(&(i, j)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(GF2Matrix::zeros(self.dim(i + 1, j + 2), self.dim(i, j))),
        }
    }

    /// Checks `∂∂ = 0`, `ββ = 0` and `∂β = β∂` on every block.
    pub fn check_identities(&self) -> Result<(), ComplexError> {
        for (i, j) in self.bigradings() {
            let fail = |identity| Err(ComplexError::IdentityFailure { identity, i, j });
            let d0 = self.d_block(i, j);
            let b0 = self.beta_block(i, j);
            if !self.d_block(i + 1, j).mul(&d0).is_zero() {
                return fail("d∘d = 0");
            }
            if !self.beta_block(i + 1, j + 2).mul(&b0).is_zero() {
                return fail("β∘β = 0");
            }
            let db = self.d_block(i + 1, j + 2).mul(&b0);
            let bd = self.beta_block(i + 1, j).mul(&d0);
            if db != bd {
                return fail("∂∘β = β∘∂");
            }
        }
        Ok(())
    }

    /// Euler characteristic `Σ (-1)^i q^j dim C^{i,j}` as `q`-exponent -> coefficient.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for ((i, j), g) in &self.groups {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(*j).or_insert(0) += sign * g.len() as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Total complex over the selected groups. `level(i, j)` returns the
    /// filtration level of `C^{i,j}` or `None` to leave it out; the result
    /// uses `∂ + β`. Within a homological degree the summands are laid out
    /// by ascending `j`.
    pub fn assemble(&self, level: impl Fn(i32, i32) -> Option<i32>) -> TotalComplex {
        let mut layout: BTreeMap<i32, Vec<(i32, usize, i32)>> = BTreeMap::new();
        for (&(i, j), g) in &self.groups {
            if let Some(l) = level(i, j) {
                let blocks = layout.entry(i).or_default();
                let offset = blocks.last().map_or(0, |&(pj, po, _)| po + self.dim(i, pj));
                blocks.push((j, offset, l));
                let _ = g;
            }
        }
        let mut fc = FilteredComplex::new();
        for (&i, blocks) in &layout {
            let levels: Vec<i32> = blocks.iter().flat_map(|&(j, _, l)| std::iter::repeat_n(l, self.dim(i, j))).collect();
            fc.add_degree(i, levels);
        }
        for (&i, blocks) in &layout {
            let Some(targets) = layout.get(&(i + 1)) else { continue };
            let rows = fc.dim(i + 1);
            let cols = fc.dim(i);
            let offset_of = |j: i32| targets.iter().find(|b| b.0 == j).map(|b| b.1);
            let mut entries = Vec::new();
            for &(j, col0, _) in blocks {
                for (block, dj) in [(self.d_block(i, j), 0), (self.beta_block(i, j), 2)] {
                    if block.is_zero() {
                        continue;
                    }
                    let Some(row0) = offset_of(j + dj) else { continue };
                    entries.extend(block.entries().map(|(r, c)| (row0 + r, col0 + c)));
                }
            }
            fc.set_differential(i, GF2Matrix::from_triplets(rows, cols, entries));
        }
        TotalComplex { complex: fc, layout }
    }

    /// The complex computing the filtered (`u = 1`) theory: every group,
    /// level `(j - parity) / 2`.
    pub fn filtered(&self) -> TotalComplex {
        let p = self.parity;
        self.assemble(|_, j| Some((j - p).div_euclid(2)))
    }

    /// The complex `C^{*,j} = ⊕_{p≥0} C̄^{*,j+2p}` of the graded Bar-Natan
    /// theory in q-degree `j`, filtered by `p`. Empty when `j` has the wrong
    /// parity.
    pub fn barnatan_column(&self, j: i32) -> TotalComplex {
        let p = self.parity;
        if (j - p).rem_euclid(2) != 0 {
            return self.assemble(|_, _| None);
        }
        self.assemble(|_, q| (q >= j).then(|| (q - j) / 2))
    }
}

/// A total complex together with where each bigraded group sits in it.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    pub complex: FilteredComplex,
    /// Per homological degree: `(j, offset, level)` of each summand.
    pub layout: BTreeMap<i32, Vec<(i32, usize, i32)>>,
}

impl TotalComplex {
    /// Offset of the summand `C^{i,j}` inside degree `i`.
    pub fn offset(&self, i: i32, j: i32) -> Option<usize> {
        self.layout.get(&i)?.iter().find(|b| b.0 == j).map(|b| b.1)
    }
}

/// Builds the Khovanov complex with `∂` and `β`.
pub fn build_khovanov(d: &LinkDiagram) -> BigradedComplex {
    build(d, None).expect("the unreduced complex has no closure conditions")
}

/// The reduced complex: states carrying `x` on the circle through the
/// basepoint arc, with q shifted by `+1`.
pub fn build_reduced(d: &LinkDiagram, basepoint: u32) -> Result<BigradedComplex, ComplexError> {
    if d.component_count() != 1 {
        return Err(ComplexError::NotAKnot(d.component_count()));
    }
    let arc = d.arc_index(basepoint).ok_or(ComplexError::NoSuchArc(basepoint))?;
    build(d, Some((basepoint, arc)))
}

fn build(d: &LinkDiagram, basepoint: Option<(u32, usize)>) -> Result<BigradedComplex, ComplexError> {
    let cube = Cube::new(d);
    let n = d.crossing_count();
    let (n_plus, n_minus) = (d.n_plus() as i32, d.n_minus() as i32);
    let shift = if basepoint.is_some() { 1 } else { 0 };

    let mut groups: BTreeMap<(i32, i32), Vec<State>> = BTreeMap::new();
    for (v, res) in cube.resolutions.iter().enumerate() {
        let c = res.circle_count();
        let h = res.height() as i32;
        let marked = basepoint.map(|(_, arc)| res.circle_of_arc(arc));
        for labels in 0..1u64 << c {
            if let Some(m) = marked {
                if (labels >> m) & 1 == 0 {
                    continue;
                }
            }
            let xs = labels.count_ones() as i32;
            let deg = (c as i32 - xs) - xs;
            let i = h - n_minus;
            let j = deg + h + n_plus - 2 * n_minus + shift;
            groups.entry((i, j)).or_default().push(State { vertex: v as u64, labels });
        }
    }
    for g in groups.values_mut() {
        g.sort_unstable();
    }
    let index: HashMap<State, ((i32, i32), usize)> =
        groups.iter().flat_map(|(&k, g)| g.iter().enumerate().map(move |(p, &s)| (s, (k, p)))).collect();

    let mut d_entries: HashMap<(i32, i32), Vec<(usize, usize)>> = HashMap::new();
    let mut b_entries: HashMap<(i32, i32), Vec<(usize, usize)>> = HashMap::new();
    for tail in 0..1u64 << n {
        for c in 0..n {
            if (tail >> c) & 1 == 1 {
                continue;
            }
            let edge = cube.edge(d, tail, c);
            let tail_circles = cube.resolutions[tail as usize].circle_count();
            for labels in 0..1u64 << tail_circles {
                let Some(&(key, col)) = index.get(&State { vertex: tail, labels }) else { continue };
                for (alg, entries, name) in
                    [(EdgeAlgebra::Khovanov, &mut d_entries, "∂"), (EdgeAlgebra::Beta, &mut b_entries, "β")]
                {
                    for out in alg.apply(&edge, labels) {
                        let Some(&(_, row)) = index.get(&State { vertex: edge.head, labels: out }) else {
                            return Err(ComplexError::ReducedClosure(name));
                        };
                        entries.entry(key).or_default().push((row, col));
                    }
                }
            }
        }
    }

    let dim = |k: (i32, i32)| groups.get(&k).map_or(0, |g| g.len());
    let d_blocks = d_entries
        .into_iter()
        .map(|((i, j), e)| ((i, j), GF2Matrix::from_triplets(dim((i + 1, j)), dim((i, j)), e)))
        .collect();
    let beta_blocks = b_entries
        .into_iter()
        .map(|((i, j), e)| ((i, j), GF2Matrix::from_triplets(dim((i + 1, j + 2)), dim((i, j)), e)))
        .collect();

    let components = d.component_count();
    Ok(BigradedComplex {
        n_plus: n_plus as usize,
        n_minus: n_minus as usize,
        components,
        parity: (components as i32 + shift).rem_euclid(2),
        basepoint: basepoint.map(|(label, _)| label),
        groups,
        d_blocks,
        beta_blocks,
    })
}

/// The `u = 1` differential written in the basis of `a`/`b` words, as a
/// total complex graded by homological degree only. States are indexed as
/// in [`StateIndex`].
pub fn build_diagonal(d: &LinkDiagram) -> (StateIndex, BTreeMap<i32, GF2Matrix>) {
    let cube = Cube::new(d);
    let index = StateIndex::new(d, &cube);
    let n = d.crossing_count();
    let mut entries: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for tail in 0..1u64 << n {
        for c in 0..n {
            if (tail >> c) & 1 == 1 {
                continue;
            }
            let edge = cube.edge(d, tail, c);
            let i = tail.count_ones() as i32 - d.n_minus() as i32;
            let tail_circles = cube.resolutions[tail as usize].circle_count();
            for labels in 0..1u64 << tail_circles {
                let col = index.position(State { vertex: tail, labels });
                for out in EdgeAlgebra::Diagonal.apply(&edge, labels) {
                    let row = index.position(State { vertex: edge.head, labels: out });
                    entries.entry(i).or_default().push((row, col));
                }
            }
        }
    }
    let mut maps = BTreeMap::new();
    for &i in index.degrees.keys() {
        let e = entries.remove(&i).unwrap_or_default();
        maps.insert(i, GF2Matrix::from_triplets(index.dim(i + 1), index.dim(i), e));
    }
    (index, maps)
}

/// Enumeration of all cube states by homological degree, ordered by
/// `(vertex, labels)`.
#[derive(Debug, Clone)]
pub struct StateIndex {
    pub degrees: BTreeMap<i32, Vec<State>>,
}

impl StateIndex {
    pub fn new(d: &LinkDiagram, cube: &Cube) -> Self {
        let mut degrees: BTreeMap<i32, Vec<State>> = BTreeMap::new();
        for (v, res) in cube.resolutions.iter().enumerate() {
            let i = res.height() as i32 - d.n_minus() as i32;
            let states = degrees.entry(i).or_default();
            for labels in 0..1u64 << res.circle_count() {
                states.push(State { vertex: v as u64, labels });
            }
        }
        for s in degrees.values_mut() {
            s.sort_unstable();
        }
        StateIndex { degrees }
    }

    pub fn dim(&self, i: i32) -> usize {
        self.degrees.get(&i).map_or(0, |s| s.len())
    }

    fn degree_of(&self, s: State) -> i32 {
        *self.degrees.iter().find(|(_, v)| v.binary_search(&s).is_ok()).expect("state exists").0
    }

    pub fn position(&self, s: State) -> usize {
        let i = self.degree_of(s);
        self.degrees[&i].binary_search(&s).unwrap()
    }
}
