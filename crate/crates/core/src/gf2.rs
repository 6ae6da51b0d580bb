//! Bit-packed linear algebra over the two-element field.
//!
//! Vectors are [`BitVec`]s and matrices are [`GF2Matrix`]es stored as
//! row-major packed `u64` words; elimination is word-parallel XOR. A matrix
//! with `rows x cols` entries represents a linear map `F2^cols -> F2^rows`
//! acting on column vectors.
//!
//! Pivoting is always leftmost column / topmost row, so every basis and every
//! quotient representative produced here is reproducible.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator row {row} is not contained in the numerator span")]
    NotContained { row: usize },
    #[error("vector does not lie in the numerator of the subquotient")]
    NotInNumerator,
    #[error("map is not well defined on the subquotient: {0}")]
    NotWellDefined(String),
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from the positions of its nonzero entries. Repeated
    /// indices cancel in pairs.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        get_bit(&self.words, i)
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        xor_words(&mut self.words, &other.words);
    }

    /// Standard bilinear form `sum_i a_i b_i`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Indices of the nonzero entries, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }

    /// Picks out the coordinates listed in `idx`, in that order.
    pub fn restrict(&self, idx: &[usize]) -> BitVec {
        BitVec::from_indices(idx.len(), idx.iter().enumerate().filter(|(_, &i)| self.get(i)).map(|(k, _)| k))
    }

    /// Inverse of [`restrict`](Self::restrict): scatters this vector into a
    /// vector of length `len` at the positions `idx`.
    pub fn embed(&self, len: usize, idx: &[usize]) -> BitVec {
        assert_eq!(self.len, idx.len());
        BitVec::from_indices(len, self.ones().map(|k| idx[k]))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec[{s}]")
    }
}

/// A dense bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        GF2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Sparse construction from `(row, col)` triplets. Entries are summed
    /// mod 2, so a triplet listed twice cancels.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            m.flip(r, c);
        }
        m
    }

    /// Stacks the given vectors as the rows of a matrix with `cols` columns.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row {r} has wrong length");
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        Self::from_rows(rows, columns).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        get_bit(self.row_words(r), c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, words: self.row_words(r).to_vec() }
    }

    pub fn row_vectors(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    /// Number of nonzero entries.
    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Nonzero entries as `(row, col)` pairs in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).ones().map(move |c| (r, c)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = GF2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for k in row.ones() {
                let (src_start, stride) = (k * other.stride, other.stride);
                let src = &other.data[src_start..src_start + stride];
                let dst = &mut out.data[r * out.stride..(r + 1) * out.stride];
                xor_words(dst, src);
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        GF2Matrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, data }
    }

    /// The submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            let row = self.row(r);
            for (j, &c) in cols.iter().enumerate() {
                if row.get(c) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (GF2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let stride = m.stride;
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| get_bit(m.row_words(r), c)) else {
                continue;
            };
            if p != rank {
                for k in 0..stride {
                    m.data.swap(p * stride + k, rank * stride + k);
                }
            }
            let pivot_row: Vec<u64> = m.row_words(rank).to_vec();
            // Only words at or after the pivot word can be nonzero in the pivot row.
            let start = c / WORD_BITS;
            for r in 0..m.rows {
                if r != rank && get_bit(m.row_words(r), c) {
                    let row = m.row_words_mut(r);
                    xor_words(&mut row[start..], &pivot_row[start..]);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        let mut m = self.clone();
        let stride = m.stride;
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| get_bit(m.row_words(r), c)) else {
                continue;
            };
            if p != rank {
                for k in 0..stride {
                    m.data.swap(p * stride + k, rank * stride + k);
                }
            }
            let start = c / WORD_BITS;
            let pivot_row: Vec<u64> = m.row_words(rank)[start..].to_vec();
            for r in rank + 1..m.rows {
                if get_bit(m.row_words(r), c) {
                    xor_words(&mut m.row_words_mut(r)[start..], &pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Rows form a basis of `{v : self * v = 0}`. There is one basis vector
    /// per free column, with a 1 in that column.
    pub fn kernel_basis(&self) -> GF2Matrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis: Vec<BitVec> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        GF2Matrix::from_rows(self.cols, &basis)
    }

    /// Rows form a basis (in reduced echelon form) of the column space.
    pub fn image_basis(&self) -> GF2Matrix {
        self.transpose().row_space_basis()
    }

    /// Rows form a basis (in reduced echelon form) of the row space.
    pub fn row_space_basis(&self) -> GF2Matrix {
        let (r, pivots) = self.rref();
        let rows: Vec<BitVec> = (0..pivots.len()).map(|i| r.row(i)).collect();
        GF2Matrix::from_rows(self.cols, &rows)
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is not in the image.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let mut aug = GF2Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                aug.set(r, c, true);
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            if red.get(row, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced row echelon basis. Each stored row
/// carries a tag recording which tracked generators it is built from.
#[derive(Debug, Clone)]
struct Echelon {
    width: usize,
    tag_len: usize,
    rows: Vec<BitVec>,
    tags: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(width: usize, tag_len: usize) -> Self {
        Echelon { width, tag_len, rows: Vec::new(), tags: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &mut BitVec, tag: &mut BitVec) {
        for ((row, t), &p) in self.rows.iter().zip(&self.tags).zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
                tag.xor_assign(t);
            }
        }
    }

    /// Inserts `v` tagged with `tag`. Returns the reduced residual when it is
    /// independent of the current rows.
    fn insert(&mut self, mut v: BitVec, mut tag: BitVec) -> Option<BitVec> {
        self.reduce(&mut v, &mut tag);
        let p = v.first_one()?;
        for (row, t) in self.rows.iter_mut().zip(self.tags.iter_mut()) {
            if row.get(p) {
                row.xor_assign(&v);
                t.xor_assign(&tag);
            }
        }
        self.rows.push(v.clone());
        self.tags.push(tag);
        self.pivots.push(p);
        Some(v)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A subquotient `Z / B` of `F2^ambient_dim` with chosen coset
/// representatives.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ambient_dim: usize,
    numerator: GF2Matrix,
    denominator: GF2Matrix,
    reps: GF2Matrix,
    reducer: Echelon,
}

impl Subquotient {
    /// Builds `span(numerator rows) / span(denominator rows)`. Fails when a
    /// denominator row is outside the numerator span.
    pub fn new(numerator: &GF2Matrix, denominator: &GF2Matrix) -> Result<Self, LinalgError> {
        let ambient_dim = numerator.cols();
        if denominator.cols() != ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: denominator.cols() });
        }
        let num_basis = numerator.row_space_basis();
        let den_basis = denominator.row_space_basis();

        let mut check = Echelon::new(ambient_dim, 0);
        for v in num_basis.row_vectors() {
            check.insert(v, BitVec::zeros(0));
        }
        for r in 0..denominator.rows() {
            let mut v = denominator.row(r);
            check.reduce(&mut v, &mut BitVec::zeros(0));
            if !v.is_zero() {
                return Err(LinalgError::NotContained { row: r });
            }
        }

        let max_reps = num_basis.rows() - den_basis.rows();
        let mut reducer = Echelon::new(ambient_dim, max_reps);
        for v in den_basis.row_vectors() {
            reducer.insert(v, BitVec::zeros(max_reps));
        }
        let mut reps = Vec::with_capacity(max_reps);
        for v in num_basis.row_vectors() {
            let mut probe = v;
            reducer.reduce(&mut probe, &mut BitVec::zeros(max_reps));
            if probe.is_zero() {
                continue;
            }
            let q = reps.len();
            let inserted = reducer
                .insert(probe, BitVec::unit(max_reps, q))
                .expect("residual is independent");
            reps.push(inserted);
        }
        debug_assert_eq!(reps.len(), max_reps);
        debug_assert_eq!(reducer.rank(), num_basis.rows());
        Ok(Subquotient {
            ambient_dim,
            numerator: num_basis,
            denominator: den_basis,
            reps: GF2Matrix::from_rows(ambient_dim, &reps),
            reducer,
        })
    }

    /// The subquotient `ker(outgoing) / im(incoming)` computed from a pair
    /// of composable maps `incoming: A -> V`, `outgoing: V -> W`.
    pub fn homology(incoming: &GF2Matrix, outgoing: &GF2Matrix) -> Result<Self, LinalgError> {
        if incoming.rows() != outgoing.cols() {
            return Err(LinalgError::DimensionMismatch { expected: outgoing.cols(), found: incoming.rows() });
        }
        Self::new(&outgoing.kernel_basis(), &incoming.image_basis())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.reps.rows()
    }

    pub fn numerator(&self) -> &GF2Matrix {
        &self.numerator
    }

    pub fn denominator(&self) -> &GF2Matrix {
        &self.denominator
    }

    /// Coset representatives, one per row.
    pub fn reps(&self) -> &GF2Matrix {
        &self.reps
    }

    /// Coordinates of the class of `v` with respect to the representatives.
    pub fn coordinates(&self, v: &BitVec) -> Result<BitVec, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        let mut residual = v.clone();
        let mut tag = BitVec::zeros(self.reducer.tag_len);
        self.reducer.reduce(&mut residual, &mut tag);
        if !residual.is_zero() {
            return Err(LinalgError::NotInNumerator);
        }
        Ok(BitVec::from_indices(self.dim(), tag.ones().filter(|&q| q < self.dim())))
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.coordinates(v).is_ok()
    }

    /// Whether `v` lies in the denominator.
    pub fn is_trivial(&self, v: &BitVec) -> bool {
        matches!(self.coordinates(v), Ok(c) if c.is_zero())
    }

    fn width(&self) -> usize {
        self.reducer.width
    }
}

/// Matrix of the map `source -> target` induced by `f`, where `f` maps the
/// ambient space of `source` into that of `target`. Column `q` holds the
/// target coordinates of `f(rep_q)`.
pub fn induced_map(f: &GF2Matrix, source: &Subquotient, target: &Subquotient) -> Result<GF2Matrix, LinalgError> {
    if f.cols() != source.ambient_dim() {
        return Err(LinalgError::DimensionMismatch { expected: source.ambient_dim(), found: f.cols() });
    }
    if f.rows() != target.width() {
        return Err(LinalgError::DimensionMismatch { expected: target.ambient_dim(), found: f.rows() });
    }
    for r in 0..source.denominator().rows() {
        let image = f.mul_vec(&source.denominator().row(r));
        if !target.is_trivial(&image) {
            return Err(LinalgError::NotWellDefined(format!(
                "image of denominator basis vector {r} is not in the target denominator"
            )));
        }
    }
    let mut columns = Vec::with_capacity(source.dim());
    for q in 0..source.dim() {
        let image = f.mul_vec(&source.reps().row(q));
        let coords = target.coordinates(&image).map_err(|_| {
            LinalgError::NotWellDefined(format!("image of representative {q} is not in the target numerator"))
        })?;
        columns.push(coords);
    }
    Ok(GF2Matrix::from_columns(target.dim(), &columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> GF2Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        GF2Matrix::from_fn(rows.len(), cols, |r, c| rows[r].as_bytes()[c] == b'1')
    }

    #[test]
    fn rank_of_trivial_matrices() {
        assert_eq!(GF2Matrix::zeros(3, 3).rank(), 0);
        assert_eq!(GF2Matrix::identity(4).rank(), 4);
        assert_eq!(GF2Matrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn triplets_cancel_in_pairs() {
        let a = GF2Matrix::from_triplets(2, 2, [(0, 0), (0, 0), (1, 1)]);
        assert!(!a.get(0, 0));
        assert!(a.get(1, 1));
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(GF2Matrix::zeros(2, 3).kernel_basis().rows(), 3);
        assert_eq!(GF2Matrix::identity(3).kernel_basis().rows(), 0);
    }

    #[test]
    fn kernel_and_image_of_small_matrix() {
        let a = m(&["110", "011"]);
        let k = a.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), BitVec::from_indices(3, [0, 1, 2]));
        assert_eq!(a.image_basis().rows(), 2);
    }

    #[test]
    fn rank_across_word_boundary() {
        let n = 130;
        let a = GF2Matrix::from_fn(n, n, |r, c| c >= r);
        assert_eq!(a.rank(), n);
        let b = GF2Matrix::from_fn(n, n, |_, c| c == 129);
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = m(&["101", "011", "110"]);
        let b = BitVec::from_indices(3, [0, 1]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&BitVec::from_indices(3, [0])).is_none());
    }

    #[test]
    fn subquotient_dimensions() {
        let id = GF2Matrix::identity(2);
        assert_eq!(Subquotient::new(&id, &GF2Matrix::zeros(0, 2)).unwrap().dim(), 2);
        assert_eq!(Subquotient::new(&id, &id).unwrap().dim(), 0);
        let num = m(&["100", "010", "111"]);
        let den = m(&["110"]);
        assert_eq!(Subquotient::new(&num, &den).unwrap().dim(), 2);
    }

    #[test]
    fn subquotient_rejects_non_contained_denominator() {
        let num = m(&["100", "010"]);
        let den = m(&["110", "001"]);
        assert_eq!(Subquotient::new(&num, &den).unwrap_err(), LinalgError::NotContained { row: 1 });
    }

    #[test]
    fn coordinates_modulo_denominator() {
        let num = GF2Matrix::identity(3);
        let den = m(&["110"]);
        let sq = Subquotient::new(&num, &den).unwrap();
        let e0 = BitVec::unit(3, 0);
        let e1 = BitVec::unit(3, 1);
        assert_eq!(sq.coordinates(&e0).unwrap(), sq.coordinates(&e1).unwrap());
        assert!(sq.is_trivial(&BitVec::from_indices(3, [0, 1])));
    }

    #[test]
    fn induced_map_basics() {
        let num = GF2Matrix::identity(3);
        let den = m(&["110"]);
        let sq = Subquotient::new(&num, &den).unwrap();
        let zero = induced_map(&GF2Matrix::zeros(3, 3), &sq, &sq).unwrap();
        assert!(zero.is_zero());
        let id = induced_map(&GF2Matrix::identity(3), &sq, &sq).unwrap();
        assert_eq!(id, GF2Matrix::identity(2));
    }

    #[test]
    fn induced_map_detects_ill_defined_map() {
        let num = GF2Matrix::identity(2);
        let den = m(&["10"]);
        let source = Subquotient::new(&num, &den).unwrap();
        let target = Subquotient::new(&num, &GF2Matrix::zeros(0, 2)).unwrap();
        // The identity does not kill the denominator of the source.
        assert!(matches!(
            induced_map(&GF2Matrix::identity(2), &source, &target),
            Err(LinalgError::NotWellDefined(_))
        ));
        let small = Subquotient::new(&m(&["10"]), &GF2Matrix::zeros(0, 2)).unwrap();
        assert!(induced_map(&GF2Matrix::identity(2), &target, &small).is_err());
    }
}
