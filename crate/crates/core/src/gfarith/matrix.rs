use std::fmt;

use super::field::PrimeField;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of row reduction: the reduced row-echelon form, its pivot columns
/// and a basis of the right kernel `{x : m x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: FMatrix,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<u64>>,
}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(field, rows, cols)
    }

    pub fn from_rows_with_cols<R: AsRef<[i64]>>(field: PrimeField, rows: &[R], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        FMatrix { field, rows: rows.len(), cols, data }
    }

    /// Row-major residues; every entry must already lie in `0..p`.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < field.p()));
        FMatrix { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries as signed integers in `0..p`, row by row.
    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        assert_eq!(self.field, rhs.field);
        let f = self.field;
        let mut out = FMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        FMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect();
        FMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> FMatrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        FMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u32) -> FMatrix {
        assert!(self.is_square());
        let mut acc = FMatrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn block_diag(&self, other: &FMatrix) -> FMatrix {
        let mut m = FMatrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &FMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j));
            }
        }
    }

    pub fn submatrix(&self, r: usize, c: usize, rows: usize, cols: usize) -> FMatrix {
        let mut m = FMatrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r + i, c + j));
            }
        }
        m
    }

    pub fn vstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = FMatrix::zeros(self.field, self.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, other);
        m
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Basis of the column space, as column vectors, taken from the pivot
    /// columns of the original matrix.
    pub fn column_space(&self) -> Vec<Vec<u64>> {
        rref(self).pivots.iter().map(|&j| self.column(j)).collect()
    }

    pub fn kernel(&self) -> Vec<Vec<u64>> {
        rref(self).kernel
    }

    pub fn inverse(&self) -> Option<FMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FMatrix::identity(self.field, n));
        let r = rref(&aug);
        if r.pivots.len() < n || (n > 0 && r.pivots[n - 1] != n - 1) {
            return None;
        }
        Some(r.reduced.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// One solution `x` of `self * x = b`, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let col = FMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let r = rref(&self.hstack(&col));
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in r.pivots.iter().enumerate() {
            x[pc] = r.reduced.get(i, self.cols);
        }
        Some(x)
    }
}

/// Row-reduces `m` to reduced row-echelon form. Deterministic: pivots are
/// chosen as the first nonzero entry scanning columns left to right.
pub fn rref(m: &FMatrix) -> Rref {
    let f = m.field;
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c));
        for j in c..cols {
            let v = f.mul(a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut kernel = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a.get(i, free));
        }
        kernel.push(v);
    }
    Rref { rank: pivots.len(), reduced: a, pivots, kernel }
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] mod {}", self.field.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_has_full_rank_and_no_kernel() {
        let r = rref(&FMatrix::identity(f(2), 3));
        assert_eq!(r.rank, 3);
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let r = rref(&FMatrix::zeros(f(3), 2, 2));
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.len(), 2);
    }

    #[test]
    fn all_ones_over_f2() {
        let m = FMatrix::from_rows(f(2), &[[1, 1], [1, 1]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel, vec![vec![1, 1]]);
    }

    #[test]
    fn inverse_and_solve() {
        let m = FMatrix::from_rows(f(7), &[[2, 1], [1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FMatrix::identity(f(7), 2));
        let x = m.solve(&[3, 4]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![3, 4]);
        let singular = FMatrix::from_rows(f(7), &[[1, 2], [2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[1, 0]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = FMatrix> {
        (prop::sample::select(vec![2u64, 3, 5, 7]), 0usize..5, 0usize..5).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c)
                .prop_map(move |d| FMatrix::from_vec(PrimeField::new(p).unwrap(), r, c, d))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let once = rref(&m);
            let twice = rref(&once.reduced);
            prop_assert_eq!(&once.reduced, &twice.reduced);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in arb_matrix()) {
            let r = rref(&m);
            prop_assert_eq!(r.rank + r.kernel.len(), m.cols());
            for v in &r.kernel {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }
}
