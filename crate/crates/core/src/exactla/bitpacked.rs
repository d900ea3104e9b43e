/// `F_2` matrix with 64 columns per word, reduced by XOR.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn rank(mut self) -> usize {
        let w = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (word, bit) = (c / 64, 1u64 << (c % 64));
            let Some(pr) = (rank..self.rows).find(|&r| self.data[r * w + word] & bit != 0) else {
                continue;
            };
            if pr != rank {
                for j in word..w {
                    self.data.swap(pr * w + j, rank * w + j);
                }
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * w);
            let pivot = &head[rank * w + word..];
            for row in tail.chunks_exact_mut(w) {
                if row[word] & bit != 0 {
                    for (x, &s) in row[word..].iter_mut().zip(pivot) {
                        *x ^= s;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
