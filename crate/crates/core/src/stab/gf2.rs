//! Word-packed GF(2) row operations.
//!
//! Rows are `u64` slices with bit `i` of the row stored at word `i / 64`,
//! position `i % 64`. Elimination always picks the lowest-index candidate row
//! as pivot so that results are reproducible.

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn get_bit(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub fn set_bit(row: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i & 63);
    if value {
        row[i >> 6] |= mask;
    } else {
        row[i >> 6] &= !mask;
    }
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// Dense row-major bit matrix with a fixed number of columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        get_bit(self.row(r), c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        set_bit(self.row_mut(r), c, value)
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.stride, "row width mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.stride);
        head[lo * self.stride..(lo + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// `row[dst] ^= row[src]`.
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        if dst < src {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_into(&mut head[dst * s..(dst + 1) * s], &tail[..s]);
        } else {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_into(&mut tail[..s], &head[src * s..(src + 1) * s]);
        }
    }

    /// Reduced row echelon form restricted to the first `pivot_cols` columns.
    ///
    /// Columns at or beyond `pivot_cols` are carried along but never pivoted
    /// on, which is how augmented systems are solved. Returns the pivot column
    /// of each of the leading `rank` rows.
    pub fn reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..pivot_cols.min(self.cols) {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_rows(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    /// Rank over GF(2). Forward elimination only.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, col) {
                    m.xor_rows(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, s) in rows.iter().enumerate() {
            for (c, ch) in s.chars().enumerate() {
                m.set(r, c, ch == '1');
            }
        }
        m
    }

    #[test]
    fn rank_small() {
        assert_eq!(from_rows(&["110", "011", "101"]).rank(), 2);
        assert_eq!(from_rows(&["100", "010", "001"]).rank(), 3);
        assert_eq!(from_rows(&["000", "000"]).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn rank_across_word_boundary() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 129, true);
        m.set(2, 0, true);
        assert_eq!(m.rank(), 2);
        m.set(2, 64, true);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn reduce_gives_identity_on_pivots() {
        let mut m = from_rows(&["1101", "0111", "1010"]);
        let pivots = m.reduce(4);
        for (i, &c) in pivots.iter().enumerate() {
            for r in 0..m.rows() {
                assert_eq!(m.get(r, c), r == i);
            }
        }
        assert_eq!(pivots.len(), m.rank());
    }
}
