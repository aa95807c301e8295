use crate::scalar::Real;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self { n, row_ptr: (0..=n).collect(), cols: (0..n).collect(), values: vec![T::one(); n] }
    }

    /// Builds from finished rows of `(column, value)` pairs.
    pub fn from_rows(rows: Vec<Vec<(usize, T)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut cols = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for r in rows {
            for (c, v) in r {
                debug_assert!(c < n);
                cols.push(c);
                values.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// Entry `(r, c)`, zero when absent.
    pub fn get(&self, r: usize, c: usize) -> T {
        self.row(r).filter(|&(k, _)| k == c).map(|(_, v)| v).fold(T::zero(), |a, v| a + v)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        for (r, out) in y.iter_mut().enumerate().take(self.n) {
            let mut s = T::zero();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[k] * x[self.cols[k]];
            }
            *out = s;
        }
    }

    pub fn mul(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.matvec(x, &mut y);
        y
    }

    /// `−A`, entry by entry.
    pub fn negated(&self) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v = -*v);
        m
    }
}

/// Accumulates one matrix row: merged `(column, coefficient)` entries in
/// first-insertion order plus a constant part. Exact zeros are never stored,
/// so terms multiplied by a vanishing factor leave the row bit-identical.
#[derive(Debug, Clone, Default)]
pub struct RowAccumulator<T> {
    entries: Vec<(usize, T)>,
    constant: T,
}

impl<T: Real> RowAccumulator<T> {
    pub fn new() -> Self {
        Self { entries: Vec::with_capacity(16), constant: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, col: usize, coeff: T) {
        if coeff == T::zero() {
            return;
        }
        match self.entries.iter_mut().find(|(c, _)| *c == col) {
            Some(e) => e.1 += coeff,
            None => self.entries.push((col, coeff)),
        }
    }

    #[inline]
    pub fn add_constant(&mut self, v: T) {
        if v != T::zero() {
            self.constant += v;
        }
    }

    pub fn constant(&self) -> T {
        self.constant
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn into_parts(self) -> (Vec<(usize, T)>, T) {
        (self.entries, self.constant)
    }
}

/// Assembled linear system `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_merges_and_skips_zeros() {
        let mut r = RowAccumulator::<f64>::new();
        r.add(3, 1.0);
        r.add(1, 2.0);
        r.add(3, 0.5);
        r.add(7, 0.0);
        r.add(7, -0.0);
        r.add_constant(0.0);
        assert_eq!(r.entries(), &[(3, 1.5), (1, 2.0)]);
        assert_eq!(r.constant().to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn matvec_and_lookup() {
        let m = CsrMatrix::from_rows(vec![vec![(0, 2.0), (1, -1.0)], vec![(1, 3.0)]]);
        assert_eq!(m.mul(&[1.0, 2.0]), vec![0.0, 6.0]);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.diagonal(), vec![2.0, 3.0]);
        assert_eq!(CsrMatrix::<f64>::identity(3).nnz(), 3);
    }
}
