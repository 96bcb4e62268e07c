//! Dense binary matrices with packed rows.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    /// Rows given as `0/1` slices.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Matrix whose column `c` is the `rows`-bit binary expansion of
    /// `columns[c]`, most significant bit in row 0.
    pub fn from_column_values(rows: usize, columns: &[u64]) -> Self {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (c, &v) in columns.iter().enumerate() {
            for r in 0..rows {
                if (v >> (rows - 1 - r)) & 1 == 1 {
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

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// Column `c` packed into a `u64`, row 0 in bit 0 (needs `rows ≤ 64`).
    pub fn column_mask(&self, c: usize) -> u64 {
        assert!(self.rows <= 64);
        (0..self.rows).filter(|&r| self.get(r, c)).fold(0, |acc, r| acc | 1 << r)
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Rank over GF(2) by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else { continue };
            self.swap_rows(p, next);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }

    /// Basis of the right null space `{x : Mx = 0}`, one vector per row.
    pub fn null_space(&self) -> BitMatrix {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    basis.set(i, p, true);
                }
            }
        }
        basis
    }

    /// `M·x` for a bit vector given as `0/1` bytes.
    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).filter(|&c| self.get(r, c)).fold(0u8, |acc, c| acc ^ (x[c] & 1)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let m = BitMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        let id = BitMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.rank(), 2);
    }

    #[test]
    fn null_space_vectors_are_orthogonal_to_rows() {
        let m = BitMatrix::from_column_values(3, &[1, 2, 3, 4, 5, 6, 7]);
        let ns = m.null_space();
        assert_eq!(ns.rows(), 4);
        for i in 0..ns.rows() {
            let x: Vec<u8> = (0..7).map(|c| ns.get(i, c) as u8).collect();
            assert!(m.syndrome(&x).iter().all(|&s| s == 0));
        }
        assert_eq!(ns.rank(), 4);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.toggle(1, 129);
        assert!(m.get(1, 129) && m.get(1, 64) && !m.get(0, 64));
        assert_eq!(m.rank(), 2);
    }
}
