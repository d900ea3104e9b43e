use super::bitpacked::BitMatrix;
use super::field::{Elem, FieldCtx};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`FieldCtx`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
    ctx: FieldCtx,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, ctx: &FieldCtx) -> Self {
        FpMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn identity(n: usize, ctx: &FieldCtx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from already-reduced field elements.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Elem>, ctx: &FieldCtx) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        assert!(
            entries.iter().all(|&e| (e as u64) < ctx.order()),
            "entries must be reduced"
        );
        FpMatrix {
            rows,
            cols,
            entries,
            ctx: ctx.clone(),
        }
    }

    /// Builds a matrix from integer rows, reducing into the prime subfield.
    pub fn from_i64_rows(rows: &[Vec<i64>], ctx: &FieldCtx) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row.iter().map(|&v| ctx.from_i64(v)));
        }
        FpMatrix {
            rows: rows.len(),
            cols,
            entries,
            ctx: ctx.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, &self.ctx);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: Elem) {
        for c in 0..self.cols {
            let v = self.get(r, c);
            self.set(r, c, self.ctx.mul(v, s));
        }
    }

    /// Rank over the matrix's field. Deterministic Gaussian elimination,
    /// pivoting on the first nonzero entry of each column.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.ctx.is_prime_field() {
            rank_prime(self.rows, self.cols, &self.entries, &self.ctx)
        } else {
            rank_generic(self.rows, self.cols, self.entries.clone(), &self.ctx)
        }
    }

    /// Rank over `F_2` via 64-column word packing.
    pub fn rank_bitpacked(&self) -> Result<usize> {
        if self.ctx.p() != 2 || !self.ctx.is_prime_field() {
            return Err(Error::UnsupportedField(format!(
                "bit-packed rank needs F_2, got characteristic {} degree {}",
                self.ctx.p(),
                self.ctx.ext_degree()
            )));
        }
        let mut bits = BitMatrix::new(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) != 0 {
                    bits.set(r, c);
                }
            }
        }
        Ok(bits.rank())
    }
}

/// Integer lanes used by the lazy-reduction elimination in prime fields.
trait Lane: Copy + Default + Send + Sync {
    const MAX: u64;
    fn from_u32(v: u32) -> Self;
    fn to_u64(self) -> u64;
    fn mul_add(self, f: Self, s: Self) -> Self;
}

impl Lane for u32 {
    const MAX: u64 = u32::MAX as u64;
    #[inline(always)]
    fn from_u32(v: u32) -> Self {
        v
    }
    #[inline(always)]
    fn to_u64(self) -> u64 {
        self as u64
    }
    #[inline(always)]
    fn mul_add(self, f: Self, s: Self) -> Self {
        self.wrapping_add(f.wrapping_mul(s))
    }
}

impl Lane for u64 {
    const MAX: u64 = u64::MAX;
    #[inline(always)]
    fn from_u32(v: u32) -> Self {
        v as u64
    }
    #[inline(always)]
    fn to_u64(self) -> u64 {
        self
    }
    #[inline(always)]
    fn mul_add(self, f: Self, s: Self) -> Self {
        self.wrapping_add(f.wrapping_mul(s))
    }
}

/// Elimination budget: how many `r += f * s` updates (with `f, s < p`) an
/// entry that starts below `p` can absorb before the lane overflows.
fn lazy_budget<L: Lane>(p: u64) -> u64 {
    let step = (p - 1) * (p - 1);
    if step == 0 {
        return u64::MAX;
    }
    (L::MAX - (p - 1)) / step
}

pub(crate) fn rank_prime(rows: usize, cols: usize, entries: &[Elem], ctx: &FieldCtx) -> usize {
    let p = ctx.p() as u64;
    if lazy_budget::<u32>(p) >= 64 {
        eliminate_lazy::<u32>(rows, cols, entries, ctx)
    } else {
        eliminate_lazy::<u64>(rows, cols, entries, ctx)
    }
}

/// Row reduction that defers the modular reduction of updated entries until
/// the lane's headroom is used up. Only the pivot row and the pivot-column
/// probes are reduced eagerly.
fn eliminate_lazy<L: Lane>(rows: usize, cols: usize, entries: &[Elem], ctx: &FieldCtx) -> usize {
    let p = ctx.p() as u64;
    let budget = lazy_budget::<L>(p);
    let mut a: Vec<L> = entries.iter().map(|&v| L::from_u32(v)).collect();
    let mut rank = 0usize;
    let mut pending = 0u64;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| ctx.reduce(a[r * cols + c].to_u64()) != 0);
        let Some(pr) = pivot else { continue };
        if pr != rank {
            for j in c..cols {
                a.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = ctx
            .inv(ctx.reduce(a[rank * cols + c].to_u64()))
            .expect("pivot is nonzero");
        for j in c..cols {
            let v = ctx.reduce(a[rank * cols + j].to_u64());
            a[rank * cols + j] = L::from_u32(ctx.mul(v, inv));
        }
        if pending >= budget {
            for v in a[(rank + 1) * cols..].iter_mut() {
                *v = L::from_u32(ctx.reduce(v.to_u64()));
            }
            pending = 0;
        }
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols + c + 1..(rank + 1) * cols];
        for row in tail.chunks_exact_mut(cols) {
            let v = ctx.reduce(row[c].to_u64());
            if v == 0 {
                continue;
            }
            let f = L::from_u32(ctx.p() - v);
            for (x, &s) in row[c + 1..].iter_mut().zip(pivot_row) {
                *x = x.mul_add(f, s);
            }
            row[c] = L::default();
        }
        pending += 1;
        rank += 1;
    }
    rank
}

fn rank_generic(rows: usize, cols: usize, mut a: Vec<Elem>, ctx: &FieldCtx) -> usize {
    let mut rank = 0usize;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if pr != rank {
            for j in c..cols {
                a.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = ctx.inv(a[rank * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            a[rank * cols + j] = ctx.mul(a[rank * cols + j], inv);
        }
        for r in rank + 1..rows {
            let v = a[r * cols + c];
            if v == 0 {
                continue;
            }
            for j in c..cols {
                let s = ctx.mul(v, a[rank * cols + j]);
                a[r * cols + j] = ctx.sub(a[r * cols + j], s);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of `m` over its field.
pub fn rank(m: &FpMatrix) -> usize {
    m.rank()
}

/// Rank of an `F_2` matrix through the bit-packed path.
pub fn rank_bitpacked(m: &FpMatrix) -> Result<usize> {
    m.rank_bitpacked()
}
