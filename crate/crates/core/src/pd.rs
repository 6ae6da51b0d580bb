//! Oriented link diagrams given as planar-diagram codes.
//!
//! Each crossing `X(i,j,k,l)` lists its four arcs counterclockwise starting
//! from the incoming under-strand, so the under-strand runs `i -> k`. The
//! crossing is positive when the over-strand runs `l -> j`. Components that
//! never pass under are oriented in the direction of increasing labels.
//!
//! At crossing `X(i,j,k,l)` the 0-smoothing joins `(i,j)` and `(k,l)`, the
//! 1-smoothing joins `(i,l)` and `(j,k)`. With these conventions the code
//! `PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]` has three negative crossings.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc multiplicity: arc {arc} appears {count} times (expected 2)")]
    ArcMultiplicity { arc: u32, count: usize },
    #[error("arc labels must be positive integers")]
    NonPositiveArc,
    #[error("empty PD code: use Unknot[1] or Unlink[k] for crossingless diagrams")]
    Empty,
    #[error("inconsistent orientation on the component through arc {arc}: under-strands disagree")]
    InconsistentOrientation { arc: u32 },
    #[error("labels of the component through arc {arc} do not form a consecutive run")]
    NonConsecutive { arc: u32 },
    #[error("non-planar code: {faces} faces where a planar diagram has {expected}")]
    NonPlanar { faces: usize, expected: usize },
    #[error("vertex has length {found}, diagram has {expected} crossings")]
    VertexLength { expected: usize, found: usize },
    #[error("orientation choice has length {found}, diagram has {expected} components")]
    OrientationLength { expected: usize, found: usize },
    #[error("too many crossings ({0}); at most 63 are supported")]
    TooLarge(usize),
}

/// The raw code: crossings as 4-tuples of arc labels, plus a number of
/// crossingless circles (only produced by `Unknot[1]` / `Unlink[k]`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
    pub loops: u32,
}

impl PdCode {
    /// Parses `PD[X(a,b,c,d),...]`, `Unknot[1]` or `Unlink[k]`. Whitespace
    /// anywhere is ignored; `X[a,b,c,d]` is accepted as a spelling of
    /// `X(a,b,c,d)`.
    pub fn parse(text: &str) -> Result<Self, PdError> {
        let compact: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut p = Parser { chars: &compact, at: 0, end: text.len() };
        let code = if p.peek_word("Unknot") {
            p.word("Unknot")?;
            p.expect('[')?;
            let n = p.number()?;
            p.expect(']')?;
            if n != 1 {
                return Err(p.error("Unknot takes the argument 1"));
            }
            PdCode { crossings: Vec::new(), loops: 1 }
        } else if p.peek_word("Unlink") {
            p.word("Unlink")?;
            p.expect('[')?;
            let n = p.number()?;
            p.expect(']')?;
            if n == 0 {
                return Err(p.error("Unlink needs at least one component"));
            }
            PdCode { crossings: Vec::new(), loops: n }
        } else {
            p.word("PD")?;
            p.expect('[')?;
            let mut crossings = Vec::new();
            if p.peek() == Some(']') {
                return Err(PdError::Empty);
            }
            loop {
                p.expect('X')?;
                let close = match p.next() {
                    Some('(') => ')',
                    Some('[') => ']',
                    _ => return Err(p.error("expected '(' after X")),
                };
                let mut arcs = [0u32; 4];
                for (slot, arc) in arcs.iter_mut().enumerate() {
                    if slot > 0 {
                        p.expect(',')?;
                    }
                    *arc = p.number()?;
                }
                p.expect(close)?;
                crossings.push(arcs);
                match p.next() {
                    Some(',') => continue,
                    Some(']') => break,
                    _ => return Err(p.error("expected ',' or ']'")),
                }
            }
            PdCode { crossings, loops: 0 }
        };
        if p.at != compact.len() {
            return Err(p.error("trailing characters"));
        }
        Ok(code)
    }

    /// The mirror image: reflecting the plane reverses the rotational order
    /// at every crossing while keeping the under-strand.
    pub fn mirror(&self) -> PdCode {
        PdCode {
            crossings: self.crossings.iter().map(|&[i, j, k, l]| [i, l, k, j]).collect(),
            loops: self.loops,
        }
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            return if self.loops == 1 { write!(f, "Unknot[1]") } else { write!(f, "Unlink[{}]", self.loops) };
        }
        write!(f, "PD[")?;
        for (n, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        write!(f, "]")
    }
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, msg: &str) -> PdError {
        PdError::Syntax { pos: self.pos(), msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|(_, c)| *c)
    }

    fn next(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.at += 1;
        }
        c
    }

    fn peek_word(&self, w: &str) -> bool {
        w.chars().enumerate().all(|(k, c)| self.chars.get(self.at + k).map(|(_, x)| *x) == Some(c))
    }

    fn word(&mut self, w: &str) -> Result<(), PdError> {
        if !self.peek_word(w) {
            return Err(self.error(&format!("expected '{w}'")));
        }
        self.at += w.chars().count();
        Ok(())
    }

    fn expect(&mut self, c: char) -> Result<(), PdError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<u32, PdError> {
        if self.peek() == Some('-') {
            return Err(PdError::NonPositiveArc);
        }
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.at].iter().map(|(_, c)| *c).collect();
        digits.parse().map_err(|_| self.error("number out of range"))
    }
}

/// A position at a crossing: crossing index and slot `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub crossing: usize,
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A validated, oriented diagram.
#[derive(Debug, Clone)]
pub struct LinkDiagram {
    pd: PdCode,
    /// Arc labels, ascending. Arc indices below refer to this list.
    arcs: Vec<u32>,
    /// Per arc: `[tail, head]` slots in the direction of the orientation, or
    /// `None` for a crossingless circle.
    ends: Vec<Option<[Slot; 2]>>,
    slot_arc: Vec<[usize; 4]>,
    signs: Vec<Sign>,
    arc_component: Vec<usize>,
    /// Arc indices of each component in traversal order.
    components: Vec<Vec<usize>>,
}

impl LinkDiagram {
    pub fn parse(text: &str) -> Result<Self, PdError> {
        Self::new(PdCode::parse(text)?)
    }

    pub fn new(pd: PdCode) -> Result<Self, PdError> {
        let n = pd.crossings.len();
        if n > 63 {
            return Err(PdError::TooLarge(n));
        }
        if n == 0 {
            return Ok(Self::unlink(pd));
        }
        if pd.loops != 0 {
            return Err(PdError::Syntax { pos: 0, msg: "free loops cannot be combined with crossings".into() });
        }

        let mut occurrences: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (c, tuple) in pd.crossings.iter().enumerate() {
            for (pos, &arc) in tuple.iter().enumerate() {
                if arc == 0 {
                    return Err(PdError::NonPositiveArc);
                }
                occurrences.entry(arc).or_default().push(Slot { crossing: c, pos });
            }
        }
        for (&arc, slots) in &occurrences {
            if slots.len() != 2 {
                return Err(PdError::ArcMultiplicity { arc, count: slots.len() });
            }
        }
        let arcs: Vec<u32> = occurrences.keys().copied().collect();
        let index: BTreeMap<u32, usize> = arcs.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let slots: Vec<[Slot; 2]> = occurrences.values().map(|s| [s[0], s[1]]).collect();
        let slot_arc: Vec<[usize; 4]> =
            pd.crossings.iter().map(|t| [index[&t[0]], index[&t[1]], index[&t[2]], index[&t[3]]]).collect();

        let other_end = |arc: usize, s: Slot| if slots[arc][0] == s { slots[arc][1] } else { slots[arc][0] };

        // Trace components as cyclic sequences of (entry slot) visits.
        let mut arc_component = vec![usize::MAX; arcs.len()];
        let mut components = Vec::new();
        let mut ends: Vec<Option<[Slot; 2]>> = vec![None; arcs.len()];
        for start in 0..arcs.len() {
            if arc_component[start] != usize::MAX {
                continue;
            }
            // Walk with `start` travelling from slots[start][0] to slots[start][1].
            let mut walk: Vec<(usize, Slot, Slot)> = Vec::new();
            let mut arc = start;
            let mut tail = slots[start][0];
            loop {
                let head = other_end(arc, tail);
                walk.push((arc, tail, head));
                let exit = Slot { crossing: head.crossing, pos: (head.pos + 2) % 4 };
                let next = slot_arc[exit.crossing][exit.pos];
                if next == start && exit == slots[start][0] {
                    break;
                }
                arc = next;
                tail = exit;
            }
            let under_forward = walk.iter().filter(|(_, _, h)| h.pos == 0).count();
            let under_backward = walk.iter().filter(|(_, _, h)| h.pos == 2).count();
            let reverse = if under_forward > 0 && under_backward > 0 {
                return Err(PdError::InconsistentOrientation { arc: arcs[start] });
            } else if under_forward > 0 {
                false
            } else if under_backward > 0 {
                true
            } else {
                // Only over-crossings: orient by increasing labels.
                let (_, _, h) = walk[0];
                let [_, j, _, l] = pd.crossings[h.crossing];
                let l_to_j = j == l + 1 || l > j + 1;
                let entering_at_l = h.pos == 3;
                entering_at_l != l_to_j
            };
            if reverse {
                walk.reverse();
                for w in walk.iter_mut() {
                    *w = (w.0, w.2, w.1);
                }
            }
            let comp = components.len();
            for &(a, t, h) in &walk {
                ends[a] = Some([t, h]);
                arc_component[a] = comp;
            }
            let labels: Vec<u32> = walk.iter().map(|(a, _, _)| arcs[*a]).collect();
            let (lo, hi) = (labels.iter().min().unwrap(), labels.iter().max().unwrap());
            if (hi - lo) as usize + 1 != labels.len() {
                return Err(PdError::NonConsecutive { arc: arcs[start] });
            }
            let mut order: Vec<usize> = walk.into_iter().map(|(a, _, _)| a).collect();
            let first = order.iter().position(|&a| arcs[a] == *lo).unwrap();
            order.rotate_left(first);
            components.push(order);
        }

        // Crossing signs: under-strand enters at slot 0; positive iff the
        // over-strand enters at slot 3.
        let signs = (0..n)
            .map(|c| {
                let over_in = ends[slot_arc[c][3]].unwrap()[1];
                if over_in == (Slot { crossing: c, pos: 3 }) {
                    Sign::Positive
                } else {
                    Sign::Negative
                }
            })
            .collect();

        let d = LinkDiagram { pd, arcs, ends, slot_arc, signs, arc_component, components };
        d.check_planar()?;
        Ok(d)
    }

    fn unlink(pd: PdCode) -> Self {
        let k = pd.loops as usize;
        LinkDiagram {
            pd,
            arcs: (1..=k as u32).collect(),
            ends: vec![None; k],
            slot_arc: Vec::new(),
            signs: Vec::new(),
            arc_component: (0..k).collect(),
            components: (0..k).map(|a| vec![a]).collect(),
        }
    }

    /// Faces are orbits of "follow the arc, then turn to the next slot
    /// counterclockwise". A connected planar diagram with `n` crossings has
    /// `n + 2` faces.
    fn check_planar(&self) -> Result<(), PdError> {
        let n = self.crossing_count();
        let mut piece: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.ends.iter().flatten() {
            let (a, b) = (find(&mut piece, e[0].crossing), find(&mut piece, e[1].crossing));
            piece[a] = b;
        }
        let pieces = (0..n).filter(|&c| find(&mut piece, c) == c).count();

        let mut seen = vec![[false; 4]; n];
        let mut faces = 0;
        for c in 0..n {
            for pos in 0..4 {
                if seen[c][pos] {
                    continue;
                }
                faces += 1;
                let mut s = Slot { crossing: c, pos };
                while !seen[s.crossing][s.pos] {
                    seen[s.crossing][s.pos] = true;
                    let arc = self.slot_arc[s.crossing][s.pos];
                    let [t, h] = self.ends[arc].unwrap();
                    let far = if t == s { h } else { t };
                    s = Slot { crossing: far.crossing, pos: (far.pos + 1) % 4 };
                }
            }
        }
        let expected = n + 2 * pieces;
        if faces != expected {
            return Err(PdError::NonPlanar { faces, expected });
        }
        Ok(())
    }

    pub fn pd(&self) -> &PdCode {
        &self.pd
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.crossings.len()
    }

    pub fn arc_labels(&self) -> &[u32] {
        &self.arcs
    }

    pub fn arc_index(&self, label: u32) -> Option<usize> {
        self.arcs.binary_search(&label).ok()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Arc labels of each component in the direction of travel.
    pub fn components(&self) -> Vec<Vec<u32>> {
        self.components.iter().map(|c| c.iter().map(|&a| self.arcs[a]).collect()).collect()
    }

    pub fn component_of_arc(&self, arc: usize) -> usize {
        self.arc_component[arc]
    }

    /// Number of link components mod 2.
    pub fn gamma(&self) -> i32 {
        (self.component_count() % 2) as i32
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Positive).count()
    }

    pub fn n_minus(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Negative).count()
    }

    pub fn writhe(&self) -> i32 {
        self.n_plus() as i32 - self.n_minus() as i32
    }

    /// Arc index at a slot.
    pub fn arc_at(&self, s: Slot) -> usize {
        self.slot_arc[s.crossing][s.pos]
    }

    /// Components of the under- and over-strand at crossing `c`.
    pub fn strand_components(&self, c: usize) -> (usize, usize) {
        (self.arc_component[self.slot_arc[c][0]], self.arc_component[self.slot_arc[c][1]])
    }

    /// `[tail, head]` of an arc along the orientation; `None` for a
    /// crossingless circle.
    pub fn arc_ends(&self, arc: usize) -> Option<[Slot; 2]> {
        self.ends[arc]
    }

    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram::new(self.pd.mirror()).expect("mirror of a valid diagram is valid")
    }

    /// Sign of crossing `c` after reversing the components flagged in `flips`.
    pub fn sign_with_flips(&self, c: usize, flips: &[bool]) -> Sign {
        let (u, o) = self.strand_components(c);
        if flips[u] != flips[o] {
            self.signs[c].flipped()
        } else {
            self.signs[c]
        }
    }

    /// The complete smoothing at `vertex` (bit `c` set means crossing `c` is
    /// 1-smoothed).
    pub fn resolve(&self, vertex: u64) -> Resolution {
        let n = self.crossing_count();
        let mut circles: Vec<Vec<usize>> = Vec::new();
        let mut arc_circle = vec![usize::MAX; self.arcs.len()];
        for start in 0..self.arcs.len() {
            if arc_circle[start] != usize::MAX {
                continue;
            }
            let id = circles.len();
            let mut circle = Vec::new();
            match self.ends[start] {
                None => {
                    arc_circle[start] = id;
                    circle.push(start);
                }
                Some([tail, _]) => {
                    let mut arc = start;
                    let mut enter = tail;
                    loop {
                        arc_circle[arc] = id;
                        circle.push(arc);
                        let [t, h] = self.ends[arc].unwrap();
                        let leave = if enter == t { h } else { t };
                        let one = (vertex >> leave.crossing) & 1 == 1;
                        let partner = smoothing_partner(leave.pos, one);
                        let next_slot = Slot { crossing: leave.crossing, pos: partner };
                        let next = self.slot_arc[leave.crossing][partner];
                        if next == start && next_slot == tail {
                            break;
                        }
                        arc = next;
                        enter = next_slot;
                    }
                }
            }
            circles.push(circle);
        }
        // Arcs are visited in ascending order, so circles are already sorted
        // by their minimal arc label.
        Resolution {
            vertex,
            crossings: n,
            circles: circles.into_iter().map(|c| c.into_iter().map(|a| self.arcs[a]).collect()).collect(),
            arc_circle,
        }
    }

    /// Checked version of [`resolve`](Self::resolve) taking the vertex as a
    /// 0/1 sequence.
    pub fn resolve_bits(&self, vertex: &[bool]) -> Result<Resolution, PdError> {
        if vertex.len() != self.crossing_count() {
            return Err(PdError::VertexLength { expected: self.crossing_count(), found: vertex.len() });
        }
        let mask = vertex.iter().enumerate().fold(0u64, |m, (c, &b)| if b { m | (1 << c) } else { m });
        Ok(self.resolve(mask))
    }

    /// Symmetric matrix of pairwise linking numbers.
    pub fn linking_matrix(&self) -> Vec<Vec<i32>> {
        let k = self.component_count();
        let mut twice = vec![vec![0i32; k]; k];
        for c in 0..self.crossing_count() {
            let (u, o) = self.strand_components(c);
            if u != o {
                twice[u][o] += self.signs[c].value();
                twice[o][u] += self.signs[c].value();
            }
        }
        twice.into_iter().map(|row| row.into_iter().map(|v| v / 2).collect()).collect()
    }

    /// Vertex of the oriented smoothing after reversing the flagged
    /// components: 0 at positive crossings, 1 at negative ones.
    pub fn orientation_vertex(&self, flips: &[bool]) -> Result<u64, PdError> {
        if flips.len() != self.component_count() {
            return Err(PdError::OrientationLength { expected: self.component_count(), found: flips.len() });
        }
        Ok((0..self.crossing_count())
            .filter(|&c| self.sign_with_flips(c, flips) == Sign::Negative)
            .fold(0u64, |m, c| m | (1 << c)))
    }

    pub fn orientation_resolution(&self, flips: &[bool]) -> Result<Resolution, PdError> {
        Ok(self.resolve(self.orientation_vertex(flips)?))
    }
}

/// The slot joined to `pos` by the 0- or 1-smoothing.
fn smoothing_partner(pos: usize, one: bool) -> usize {
    match (one, pos) {
        (false, 0) => 1,
        (false, 1) => 0,
        (false, 2) => 3,
        (false, 3) => 2,
        (true, 0) => 3,
        (true, 3) => 0,
        (true, 1) => 2,
        (true, 2) => 1,
        _ => unreachable!("slot out of range"),
    }
}

/// A vertex of the cube of smoothings with its circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub vertex: u64,
    pub crossings: usize,
    /// Each circle as the cyclic sequence of arc labels it runs through;
    /// circles are ordered by minimal label.
    pub circles: Vec<Vec<u32>>,
    arc_circle: Vec<usize>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn height(&self) -> usize {
        self.vertex.count_ones() as usize
    }

    /// Index of the circle containing the arc with the given index.
    pub fn circle_of_arc(&self, arc: usize) -> usize {
        self.arc_circle[arc]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Merge,
    Split,
}

/// An edge of the cube, changing crossing `crossing` from 0 to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeEdge {
    pub tail: u64,
    pub head: u64,
    pub crossing: usize,
    pub kind: EdgeKind,
    /// Tail circles touched by the edge (one for a split, two for a merge).
    pub tail_circles: Vec<usize>,
    /// Head circles touched by the edge (two for a split, one for a merge).
    pub head_circles: Vec<usize>,
    /// `circle_map[t]` is the head circle that tail circle `t` maps to.
    pub circle_map: Vec<usize>,
}

/// All resolutions of a diagram, indexed by vertex bitmask.
#[derive(Debug, Clone)]
pub struct Cube {
    pub resolutions: Vec<Resolution>,
}

impl Cube {
    pub fn new(d: &LinkDiagram) -> Self {
        let n = d.crossing_count();
        Cube { resolutions: (0..1u64 << n).map(|v| d.resolve(v)).collect() }
    }

    pub fn crossings(&self) -> usize {
        self.resolutions[0].crossings
    }

    /// The edge leaving `tail` at crossing `c` (which must be 0-smoothed).
    pub fn edge(&self, d: &LinkDiagram, tail: u64, c: usize) -> CubeEdge {
        debug_assert_eq!((tail >> c) & 1, 0);
        let head = tail | (1 << c);
        let (rt, rh) = (&self.resolutions[tail as usize], &self.resolutions[head as usize]);
        let touching = |r: &Resolution| {
            let mut v: Vec<usize> = (0..4).map(|pos| r.circle_of_arc(d.arc_at(Slot { crossing: c, pos }))).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let tail_circles = touching(rt);
        let head_circles = touching(rh);
        let kind = match (tail_circles.len(), head_circles.len()) {
            (2, 1) => EdgeKind::Merge,
            (1, 2) => EdgeKind::Split,
            other => panic!("edge at crossing {c} changes circle count by {other:?}"),
        };
        let circle_map = rt.circles.iter().map(|circ| rh.circle_of_arc(d.arc_index(circ[0]).unwrap())).collect();
        CubeEdge { tail, head, crossing: c, kind, tail_circles, head_circles, circle_map }
    }

    pub fn edges(&self, d: &LinkDiagram) -> Vec<CubeEdge> {
        let n = self.crossings();
        let mut out = Vec::with_capacity(n << n.saturating_sub(1));
        for tail in 0..1u64 << n {
            for c in 0..n {
                if (tail >> c) & 1 == 0 {
                    out.push(self.edge(d, tail, c));
                }
            }
        }
        out
    }
}

pub fn parse_pd(text: &str) -> Result<LinkDiagram, PdError> {
    LinkDiagram::parse(text)
}

pub fn cube_edges(d: &LinkDiagram) -> Vec<CubeEdge> {
    Cube::new(d).edges(d)
}
