//! Dense univariate polynomials stored lowest degree first.
//!
//! Binary forms of a fixed degree are identified with their dehomogenization
//! at `s = 1`, so these routines back gcds, exact division and the
//! fraction-free rank computation.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use crate::error::{Error, Result};

pub(crate) fn trim<F: Field>(field: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|c| field.is_zero(c)) {
        p.pop();
    }
}

pub(crate) fn degree<F: Field>(field: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|c| !field.is_zero(c))
}

pub(crate) fn mul<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            field.add_mul_assign(&mut out[i + j], x, y);
        }
    }
    out
}

pub(crate) fn sub<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(field, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem<F: Field>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> Result<(Vec<F::Elem>, Vec<F::Elem>)> {
    let db = degree(field, b).ok_or(Error::DivisionByZero)?;
    let lead_inv = field.inv(&b[db]).ok_or(Error::DivisionByZero)?;
    let mut rem: Vec<F::Elem> = a.to_vec();
    trim(field, &mut rem);
    if rem.len() <= db {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![field.zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = field.mul(&rem[k + db], &lead_inv);
        if !field.is_zero(&c) {
            for (j, bj) in b[..=db].iter().enumerate() {
                field.sub_mul_assign(&mut rem[k + j], &c, bj);
            }
        }
        quot[k] = c;
    }
    trim(field, &mut rem);
    trim(field, &mut quot);
    Ok((quot, rem))
}

pub(crate) fn exact_div<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let (q, r) = divrem(field, a, b)?;
    if r.is_empty() {
        Ok(q)
    } else {
        Err(Error::InexactDivision)
    }
}

/// Monic gcd; the gcd of two zero polynomials is zero (empty).
pub(crate) fn gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(field, &mut x);
    trim(field, &mut y);
    while !y.is_empty() {
        let (_, r) = divrem(field, &x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    if let Some(d) = degree(field, &x) {
        let inv = field.inv(&x[d]).expect("nonzero leading coefficient");
        for c in x.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
    x
}

pub(crate) fn eval<F: Field>(field: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = field.zero();
    for c in p.iter().rev() {
        acc = field.mul(&acc, x);
        acc = field.add(&acc, c);
    }
    acc
}

/// Rank of a matrix over `k(t)` whose entries are polynomials in `t`, by
/// fraction-free (Bareiss) elimination. Returns the rank together with the
/// row and column indices of a nonzero maximal minor and that minor.
pub(crate) fn bareiss_rank<F: Field>(
    field: &F,
    mut m: Vec<Vec<Vec<F::Elem>>>,
) -> (usize, Vec<usize>, Vec<usize>, Vec<F::Elem>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut row_ids: Vec<usize> = (0..rows).collect();
    let mut pivot_cols = Vec::new();
    let mut prev: Vec<F::Elem> = vec![field.one()];
    let mut rank = 0;
    for k in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| degree(field, &m[r][k]).is_some()) else {
            continue;
        };
        m.swap(rank, piv);
        row_ids.swap(rank, piv);
        for i in rank + 1..rows {
            for j in k + 1..cols {
                let a = mul(field, &m[rank][k], &m[i][j]);
                let b = mul(field, &m[i][k], &m[rank][j]);
                let num = sub(field, &a, &b);
                m[i][j] = exact_div(field, &num, &prev).expect("Bareiss division is exact");
            }
            m[i][k] = Vec::new();
        }
        prev = m[rank][k].clone();
        trim(field, &mut prev);
        pivot_cols.push(k);
        rank += 1;
    }
    let mut minor_rows: Vec<usize> = row_ids[..rank].to_vec();
    minor_rows.sort_unstable();
    (rank, minor_rows, pivot_cols, prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::PrimeField;

    #[test]
    fn gcd_of_products() {
        let f = PrimeField::new(101).unwrap();
        let a = mul(&f, &[1, 1], &[2, 0, 1]); // (1+t)(2+t²)
        let b = mul(&f, &[1, 1], &[3, 1]); // (1+t)(3+t)
        assert_eq!(gcd(&f, &a, &b), vec![1, 1]);
        assert_eq!(exact_div(&f, &a, &[1, 1]).unwrap(), vec![2, 0, 1]);
        assert_eq!(exact_div(&f, &a, &[3, 1]), Err(Error::InexactDivision));
    }

    #[test]
    fn bareiss_detects_rank_drop() {
        let f = PrimeField::new(101).unwrap();
        // [[t, t²], [1, t]] has determinant 0 over k(t)
        let m = vec![vec![vec![0, 1], vec![0, 0, 1]], vec![vec![1], vec![0, 1]]];
        let (rank, _, _, minor) = bareiss_rank(&f, m);
        assert_eq!(rank, 1);
        assert_eq!(minor, vec![0, 1]);
        let m = vec![vec![vec![0, 1], vec![1]], vec![vec![1], vec![0, 1]]];
        assert_eq!(bareiss_rank(&f, m).0, 2);
    }
}
