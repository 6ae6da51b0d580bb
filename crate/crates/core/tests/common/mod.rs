#![allow(dead_code)]

use std::collections::BTreeMap;

use khf2::{BigradedComplex, DimTable};

/// PD code of the closure of a braid word on `width` strands. Strands run
/// upward; `g > 0` is `σ_g` with the lower-left strand passing over.
pub fn braid_pd(width: usize, word: &[i32]) -> String {
    let mut next = 0u32;
    let mut fresh = || {
        next += 1;
        next
    };
    let bottom: Vec<u32> = (0..width).map(|_| fresh()).collect();
    let mut cur = bottom.clone();
    let mut xs: Vec<[u32; 4]> = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let (x, y) = (cur[i], cur[i + 1]);
        let (xp, yp) = (fresh(), fresh());
        xs.push(if g > 0 { [y, xp, yp, x] } else { [x, y, xp, yp] });
        cur[i] = yp;
        cur[i + 1] = xp;
    }
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(p: &BTreeMap<u32, u32>, mut a: u32) -> u32 {
        while let Some(&b) = p.get(&a) {
            if b == a {
                break;
            }
            a = b;
        }
        a
    }
    for p in 0..width {
        let (a, b) = (find(&parent, cur[p]), find(&parent, bottom[p]));
        if a != b {
            parent.insert(a, b);
        }
    }
    for c in xs.iter_mut() {
        for a in c.iter_mut() {
            *a = find(&parent, *a);
        }
    }
    let mut succ = BTreeMap::new();
    for (&g, c) in word.iter().zip(&xs) {
        succ.insert(c[0], c[2]);
        if g > 0 {
            succ.insert(c[3], c[1]);
        } else {
            succ.insert(c[1], c[3]);
        }
    }
    let mut labels: Vec<u32> = xs.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let mut seen = BTreeMap::new();
    let mut k = 0;
    for a in labels {
        let mut b = a;
        while !seen.contains_key(&b) {
            k += 1;
            seen.insert(b, k);
            b = succ[&b];
        }
    }
    let body: Vec<String> = xs
        .iter()
        .map(|c| format!("X({},{},{},{})", seen[&c[0]], seen[&c[1]], seen[&c[2]], seen[&c[3]]))
        .collect();
    format!("PD[{}]", body.join(","))
}

/// Rank by plain Gaussian elimination on a dense `Vec<Vec<bool>>`.
pub fn naive_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                for k in 0..cols {
                    let v = rows[rank][k];
                    rows[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense(m: &khf2::GF2Matrix) -> Vec<Vec<bool>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect()
}

/// Khovanov homology dimensions with naive elimination.
pub fn naive_kh(c: &BigradedComplex) -> DimTable {
    c.bigradings()
        .map(|(i, j)| {
            let out = naive_rank(dense(&c.d_block(i, j)));
            let inc = naive_rank(dense(&c.d_block(i - 1, j)));
            ((i, j), c.dim(i, j) - out - inc)
        })
        .collect()
}

/// Mirror of a table: `(i, j) -> (-i, -j)`.
pub fn negate(t: &DimTable) -> DimTable {
    t.iter().map(|((i, j), d)| ((-i, -j), d)).collect()
}

pub fn table(entries: &[((i32, i32), usize)]) -> DimTable {
    entries.iter().copied().collect()
}
