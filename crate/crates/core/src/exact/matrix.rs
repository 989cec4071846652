use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Rows must share a common length; `cols` fixes the width when there are
    /// no rows.
    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Shape(alloc::format!("row {i} has length {} not {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Mat { field, rows: n, cols, data })
    }

    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Shape(alloc::format!("column {j} has length {} not {rows}", c.len())));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F::Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &F::Elem) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(&self.data[k], x);
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::Shape(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    f.add_mul_assign(&mut out.data[idx], a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) {
                        f.add_mul_assign(&mut acc, a, x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        self.rref_restricted(self.cols)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Some `x` with `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.solve_many(&[b.to_vec()]).pop().flatten()
    }

    /// Solves `M x = b` for each right-hand side with a single elimination.
    pub fn solve_many(&self, rhs: &[Vec<F::Elem>]) -> Vec<Option<Vec<F::Elem>>> {
        let f = self.field;
        let k = rhs.len();
        let mut aug = Self::zeros(f, self.rows, self.cols + k);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            for (l, b) in rhs.iter().enumerate() {
                assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
                aug.set(i, self.cols + l, b[i].clone());
            }
        }
        // pivots in the augmented columns would only mark inconsistent systems
        let pivots = aug.rref_restricted(self.cols);
        let rank = pivots.len();
        (0..k)
            .map(|l| {
                let col = self.cols + l;
                if (rank..self.rows).any(|i| !f.is_zero(aug.get(i, col))) {
                    return None;
                }
                let mut x = vec![f.zero(); self.cols];
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = aug.get(i, col).clone();
                }
                Some(x)
            })
            .collect()
    }

    /// Row reduction choosing pivots only among the first `limit` columns.
    fn rref_restricted(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(self.get(i, c))) else { continue };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let k = r * cols + j;
                self.data[k] = f.mul(&self.data[k], &inv);
            }
            let pivot_row: Vec<F::Elem> = self.row(r)[c..].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for (off, x) in pivot_row.iter().enumerate() {
                    if !f.is_zero(x) {
                        let k = i * cols + c + off;
                        f.sub_mul_assign(&mut self.data[k], &factor, x);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    len: usize,
    // rows normalized to 1 at their pivot, pivot columns distinct
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, len: usize) -> Self {
        EchelonBasis { field, len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let f = self.field;
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            let c = w[*p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    f.sub_mul_assign(&mut w[j], &c, x);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else { return false };
        let inv = f.inv(&w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Mat<Rationals> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(Rationals, cols, rows.iter().map(|r| r.iter().map(|x| Rationals.from_i64(*x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| Rationals.is_zero(x)));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = qm(&[&[1, 1], &[2, 2]]);
        let one = Rationals.one();
        let two = Rationals.from_i64(2);
        assert!(m.solve(&[one.clone(), two]).is_some());
        assert!(m.solve(&[one.clone(), one]).is_none());
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let f = PrimeField::new(5).unwrap();
        let mut b = EchelonBasis::new(f, 3);
        assert!(b.insert(&[1, 2, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[1, 3, 1]));
        assert!(b.contains(&[2, 4, 0]));
        assert!(!b.contains(&[0, 0, 1]));
        assert_eq!(b.dim(), 2);
    }

    fn arb_mat() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(0u64..7, r * c)))
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, data) in arb_mat()) {
            let f = PrimeField::new(7).unwrap();
            let rows = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = Mat::from_rows(f, c, rows).unwrap();
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), c);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| *x == 0));
            }
            prop_assert_eq!(m.transpose().rank(), m.rank());
            let _ = r;
        }

        #[test]
        fn solve_recovers_image((_r, c, data) in arb_mat(), x in proptest::collection::vec(0u64..7, 6)) {
            let f = PrimeField::new(7).unwrap();
            let rows = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = Mat::from_rows(f, c, rows).unwrap();
            let b = m.mul_vec(&x[..c]);
            let sol = m.solve(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
