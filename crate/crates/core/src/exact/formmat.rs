//! Determinants and minors of matrices whose entries are binary forms.

use alloc::vec::Vec;

use super::field::Field;
use super::form::BinForm;
use crate::error::Result;

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { break };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Determinant of a square matrix of forms by fraction-free elimination.
///
/// Rows and columns must carry consistent degrees so that every 2×2
/// cross-term is homogeneous.
pub fn det<F: Field>(field: F, m: &[Vec<BinForm<F>>]) -> Result<BinForm<F>> {
    let n = m.len();
    if n == 0 {
        return Ok(BinForm::one(field));
    }
    let mut a: Vec<Vec<BinForm<F>>> = m.to_vec();
    let mut prev = BinForm::one(field);
    let mut sign_neg = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(BinForm::zero(field));
        };
        if p != k {
            a.swap(p, k);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].try_mul(&a[i][j])?.sub(&a[i][k].try_mul(&a[k][j])?)?;
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(if sign_neg { prev.neg() } else { prev })
}

/// The `rows × cols` submatrix.
pub fn submatrix<F: Field>(m: &[Vec<BinForm<F>>], rows: &[usize], cols: &[usize]) -> Vec<Vec<BinForm<F>>> {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// Gcd of all `k × k` minors; zero when every minor vanishes. Stops as soon
/// as the running gcd is constant.
pub fn minors_gcd<F: Field>(field: F, m: &[Vec<BinForm<F>>], k: usize) -> Result<BinForm<F>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut g = BinForm::zero(field);
    if k == 0 {
        return Ok(BinForm::one(field));
    }
    let row_sets = combinations(rows, k);
    let col_sets = combinations(cols, k);
    for rs in &row_sets {
        for cs in &col_sets {
            let d = det(field, &submatrix(m, rs, cs))?;
            if d.is_zero() {
                continue;
            }
            g = g.gcd(&d);
            if g.is_constant() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::Rationals;

    fn q(c: &[i64]) -> BinForm<Rationals> {
        BinForm::from_i64s(Rationals, c)
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), alloc::vec![
            alloc::vec![0, 1],
            alloc::vec![0, 2],
            alloc::vec![0, 3],
            alloc::vec![1, 2],
            alloc::vec![1, 3],
            alloc::vec![2, 3]
        ]);
        assert_eq!(combinations(3, 0).len(), 1);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn determinant_of_forms() {
        // [[s, t], [t, s]] has determinant s² − t²
        let m = alloc::vec![alloc::vec![q(&[1, 0]), q(&[0, 1])], alloc::vec![q(&[0, 1]), q(&[1, 0])]];
        assert_eq!(det(Rationals, &m).unwrap(), q(&[1, 0, -1]));
        let z = BinForm::zero(Rationals);
        let m = alloc::vec![alloc::vec![z.clone(), q(&[1])], alloc::vec![q(&[1]), z]];
        assert_eq!(det(Rationals, &m).unwrap(), q(&[-1]));
    }

    #[test]
    fn minors_of_twisted_cubic_row() {
        // 1×1 minors of (s³, s²t, st², t³) have trivial gcd
        let row = alloc::vec![alloc::vec![q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0]), q(&[0, 0, 0, 1])]];
        assert!(minors_gcd(Rationals, &row, 1).unwrap().is_constant());
        let row = alloc::vec![alloc::vec![q(&[1, 0]), q(&[2, 0])]];
        assert_eq!(minors_gcd(Rationals, &row, 1).unwrap(), q(&[1, 0]));
    }
}
