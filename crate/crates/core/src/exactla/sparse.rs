//! Rank of a sparse column set.
//!
//! Before any dense elimination, columns with a single live entry are used
//! as pivots and their rows removed (repeated to a fixed point). The rest
//! splits into connected components of the row/column incidence graph and
//! each component is ranked densely. Both steps preserve rank exactly.

use std::collections::HashMap;

use super::bitpacked::BitMatrix;
use super::field::{Elem, FieldCtx};
use super::matrix::FpMatrix;

/// A column is a list of `(row, value)` pairs with distinct rows and
/// nonzero values.
pub type SparseColumn = Vec<(u32, Elem)>;

#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    nrows: usize,
    cols: Vec<SparseColumn>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeps component labels deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

impl SparseColumns {
    pub fn new(nrows: usize) -> Self {
        SparseColumns {
            nrows,
            cols: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Adds a column; zero entries are dropped, duplicate rows must already
    /// be merged.
    pub fn push(&mut self, mut col: SparseColumn) {
        col.retain(|&(_, v)| v != 0);
        debug_assert!(col.iter().all(|&(r, _)| (r as usize) < self.nrows));
        if !col.is_empty() {
            self.cols.push(col);
        }
    }

    pub fn to_dense(&self, ctx: &FieldCtx) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.nrows, self.cols.len(), ctx);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m.set(r as usize, c, v);
            }
        }
        m
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let mut alive = vec![true; self.nrows];
        let mut col_alive = vec![true; self.cols.len()];
        let mut rank = 0usize;

        loop {
            let mut changed = false;
            for (c, col) in self.cols.iter().enumerate() {
                if !col_alive[c] {
                    continue;
                }
                let mut live = col.iter().filter(|&&(r, _)| alive[r as usize]);
                match (live.next(), live.next()) {
                    (None, _) => col_alive[c] = false,
                    (Some(&(r, _)), None) => {
                        alive[r as usize] = false;
                        col_alive[c] = false;
                        rank += 1;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }

        let mut uf = UnionFind::new(self.nrows);
        for (c, col) in self.cols.iter().enumerate() {
            if !col_alive[c] {
                continue;
            }
            let mut rows = col.iter().map(|&(r, _)| r).filter(|&r| alive[r as usize]);
            if let Some(first) = rows.next() {
                for r in rows {
                    uf.union(first, r);
                }
            }
        }

        // component root -> (local row map, local columns)
        let mut blocks: Vec<(HashMap<u32, u32>, Vec<usize>)> = Vec::new();
        let mut block_of_root: HashMap<u32, usize> = HashMap::new();
        for (c, col) in self.cols.iter().enumerate() {
            if !col_alive[c] {
                continue;
            }
            let Some(&(r0, _)) = col.iter().find(|&&(r, _)| alive[r as usize]) else {
                continue;
            };
            let root = uf.find(r0);
            let b = *block_of_root.entry(root).or_insert_with(|| {
                blocks.push((HashMap::new(), Vec::new()));
                blocks.len() - 1
            });
            let (rows, cols) = &mut blocks[b];
            for &(r, _) in col.iter().filter(|&&(r, _)| alive[r as usize]) {
                let next = rows.len() as u32;
                rows.entry(r).or_insert(next);
            }
            cols.push(c);
        }

        for (rows, cols) in &blocks {
            rank += self.block_rank(rows, cols, &alive, ctx);
        }
        rank
    }

    fn block_rank(
        &self,
        rows: &HashMap<u32, u32>,
        cols: &[usize],
        alive: &[bool],
        ctx: &FieldCtx,
    ) -> usize {
        let (nr, nc) = (rows.len(), cols.len());
        if nc == 1 || nr == 1 {
            return 1;
        }
        // eliminate along the shorter dimension
        let transpose = nr > nc;
        if ctx.p() == 2 && ctx.is_prime_field() {
            let mut bits = if transpose {
                BitMatrix::new(nc, nr)
            } else {
                BitMatrix::new(nr, nc)
            };
            for (j, &c) in cols.iter().enumerate() {
                for &(r, _) in self.cols[c].iter().filter(|&&(r, _)| alive[r as usize]) {
                    let i = rows[&r] as usize;
                    if transpose {
                        bits.toggle(j, i);
                    } else {
                        bits.toggle(i, j);
                    }
                }
            }
            return bits.rank();
        }
        let mut m = if transpose {
            FpMatrix::zeros(nc, nr, ctx)
        } else {
            FpMatrix::zeros(nr, nc, ctx)
        };
        for (j, &c) in cols.iter().enumerate() {
            for &(r, v) in self.cols[c].iter().filter(|&&(r, _)| alive[r as usize]) {
                let i = rows[&r] as usize;
                if transpose {
                    m.set(j, i, v);
                } else {
                    m.set(i, j, v);
                }
            }
        }
        m.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_rank_on_random_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u32, 3, 7, 13] {
            let ctx = FieldCtx::prime(p).unwrap();
            for _ in 0..300 {
                let nrows = rng.random_range(0..40);
                let ncols = rng.random_range(0..40);
                let mut s = SparseColumns::new(nrows);
                for _ in 0..ncols {
                    if nrows == 0 {
                        break;
                    }
                    let k = rng.random_range(0..=3.min(nrows));
                    let mut rows: Vec<u32> = Vec::new();
                    while rows.len() < k {
                        let r = rng.random_range(0..nrows as u32);
                        if !rows.contains(&r) {
                            rows.push(r);
                        }
                    }
                    let col = rows
                        .into_iter()
                        .map(|r| (r, rng.random_range(1..p)))
                        .collect();
                    s.push(col);
                }
                assert_eq!(s.rank(&ctx), s.to_dense(&ctx).rank());
            }
        }
    }

    #[test]
    fn empty_and_units() {
        let ctx = FieldCtx::prime(5).unwrap();
        assert_eq!(SparseColumns::new(0).rank(&ctx), 0);
        let mut s = SparseColumns::new(3);
        s.push(vec![(0, 1)]);
        s.push(vec![(0, 2)]);
        s.push(vec![(0, 3), (1, 4)]);
        s.push(vec![(2, 0)]);
        assert_eq!(s.ncols(), 3);
        assert_eq!(s.rank(&ctx), 2);
    }
}
