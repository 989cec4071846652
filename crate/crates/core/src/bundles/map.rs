use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::splitting::{h0_line, SplittingType};
use crate::error::{Error, Result};
use crate::exact::form::{describe_zero, BinForm};
use crate::exact::formmat;
use crate::exact::upoly;
use crate::exact::{Field, Mat};

/// A morphism `⊕ O(aᵢ) → ⊕ O(b_j)` given by a matrix of binary forms.
///
/// Summand degrees are kept in column/row order (not sorted) because the
/// matrix layout depends on it. Entry `(j, i)` has degree `b_j − aᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMap<F: Field> {
    field: F,
    source: Vec<i64>,
    target: Vec<i64>,
    entries: Vec<Vec<BinForm<F>>>,
}

/// Witness that the generic rank of a map is attained: a nonzero maximal
/// minor on the given rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Number of sections of each summand after twisting by `d`.
pub fn section_dims(degrees: &[i64], d: i64) -> Vec<usize> {
    degrees.iter().map(|a| h0_line(*a, d)).collect()
}

/// Start offset of each summand block in a stacked section vector.
pub fn section_offsets(degrees: &[i64], d: i64) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(degrees.len());
    let mut total = 0;
    for n in section_dims(degrees, d) {
        offsets.push(total);
        total += n;
    }
    (offsets, total)
}

/// Splits a stacked coefficient vector into one form per summand.
pub fn vector_to_forms<F: Field>(field: F, degrees: &[i64], d: i64, v: &[F::Elem]) -> Vec<BinForm<F>> {
    let (offsets, total) = section_offsets(degrees, d);
    assert_eq!(v.len(), total, "section vector has the wrong length");
    degrees
        .iter()
        .zip(&offsets)
        .map(|(a, &o)| {
            let n = h0_line(*a, d);
            if n == 0 {
                BinForm::zero(field)
            } else {
                BinForm::from_coeffs(field, v[o..o + n].to_vec())
            }
        })
        .collect()
}

/// Stacks a section tuple of `⊕ O(aᵢ + d)` into one coefficient vector.
pub fn forms_to_vector<F: Field>(field: F, degrees: &[i64], d: i64, forms: &[BinForm<F>]) -> Result<Vec<F::Elem>> {
    if forms.len() != degrees.len() {
        return Err(Error::Shape(alloc::format!("expected {} forms, got {}", degrees.len(), forms.len())));
    }
    let mut out = Vec::new();
    for (i, (a, g)) in degrees.iter().zip(forms).enumerate() {
        let n = h0_line(*a, d);
        if g.is_zero() {
            out.extend(core::iter::repeat_n(field.zero(), n));
            continue;
        }
        if g.degree() != Some(n.wrapping_sub(1)) || n == 0 {
            return Err(Error::EntryDegree { row: i, col: 0, expected: a + d });
        }
        out.extend_from_slice(g.coeffs());
    }
    Ok(out)
}

impl<F: Field> BundleMap<F> {
    pub fn new(field: F, source: Vec<i64>, target: Vec<i64>, entries: Vec<Vec<BinForm<F>>>) -> Result<Self> {
        if entries.len() != target.len() {
            return Err(Error::Shape(alloc::format!("{} rows for {} target summands", entries.len(), target.len())));
        }
        for (j, row) in entries.iter().enumerate() {
            if row.len() != source.len() {
                return Err(Error::Shape(alloc::format!(
                    "row {j} has {} entries for {} source summands",
                    row.len(),
                    source.len()
                )));
            }
            for (i, g) in row.iter().enumerate() {
                field.check_same(&g.field())?;
                let expected = target[j] - source[i];
                let ok = match g.degree() {
                    None => true,
                    Some(e) => expected >= 0 && e as i64 == expected,
                };
                if !ok {
                    return Err(Error::EntryDegree { row: j, col: i, expected });
                }
            }
        }
        Ok(BundleMap { field, source, target, entries })
    }

    pub fn zero(field: F, source: Vec<i64>, target: Vec<i64>) -> Self {
        let entries = vec![vec![BinForm::zero(field); source.len()]; target.len()];
        BundleMap { field, source, target, entries }
    }

    pub fn identity(field: F, degrees: Vec<i64>) -> Self {
        let n = degrees.len();
        let mut m = Self::zero(field, degrees.clone(), degrees);
        for i in 0..n {
            m.entries[i][i] = BinForm::one(field);
        }
        m
    }

    /// Uniformly random coefficients in every admissible entry.
    pub fn random<R: RngCore + ?Sized>(field: F, source: Vec<i64>, target: Vec<i64>, rng: &mut R) -> Self {
        let entries = target
            .iter()
            .map(|b| {
                source
                    .iter()
                    .map(|a| {
                        let e = b - a;
                        if e < 0 {
                            BinForm::zero(field)
                        } else {
                            BinForm::from_coeffs(field, (0..=e).map(|_| field.random(rng)).collect())
                        }
                    })
                    .collect()
            })
            .collect();
        BundleMap { field, source, target, entries }
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn source_type(&self) -> SplittingType {
        SplittingType::new(self.source.clone())
    }

    pub fn target_type(&self) -> SplittingType {
        SplittingType::new(self.target.clone())
    }

    pub fn entries(&self) -> &[Vec<BinForm<F>>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &BinForm<F> {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn column(&self, i: usize) -> Vec<BinForm<F>> {
        self.entries.iter().map(|r| r[i].clone()).collect()
    }

    /// The dual map `F^∨ → E^∨`.
    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols()).map(|i| self.column(i)).collect();
        BundleMap {
            field: self.field,
            source: self.target.iter().map(|b| -b).collect(),
            target: self.source.iter().map(|a| -a).collect(),
            entries,
        }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.field.check_same(&inner.field)?;
        if self.source != inner.target {
            return Err(Error::Shape(alloc::format!(
                "cannot compose: source {:?} differs from target {:?}",
                self.source, inner.target
            )));
        }
        let mut entries = Vec::with_capacity(self.rows());
        for j in 0..self.rows() {
            let mut row = Vec::with_capacity(inner.cols());
            for i in 0..inner.cols() {
                let mut acc = BinForm::zero(self.field);
                for k in 0..self.cols() {
                    let p = self.entries[j][k].mul(&inner.entries[k][i]);
                    acc = acc.add(&p)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(BundleMap { field: self.field, source: inner.source.clone(), target: self.target.clone(), entries })
    }

    /// Stacks two maps with the same source vertically.
    pub fn stack(&self, below: &Self) -> Result<Self> {
        if self.source != below.source {
            return Err(Error::Shape(alloc::format!("cannot stack maps with sources {:?} and {:?}", self.source, below.source)));
        }
        let mut target = self.target.clone();
        target.extend_from_slice(&below.target);
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Ok(BundleMap { field: self.field, source: self.source.clone(), target, entries })
    }

    /// Restricts to a subset of columns.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        BundleMap {
            field: self.field,
            source: cols.iter().map(|&i| self.source[i]).collect(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|r| cols.iter().map(|&i| r[i].clone()).collect()).collect(),
        }
    }

    /// The induced map `H⁰(E(d)) → H⁰(F(d))` on s-descending monomial bases.
    pub fn sections_matrix(&self, d: i64) -> Mat<F> {
        let f = self.field;
        let (src_off, src_total) = section_offsets(&self.source, d);
        let (tgt_off, tgt_total) = section_offsets(&self.target, d);
        let mut m = Mat::zeros(f, tgt_total, src_total);
        for (j, row) in self.entries.iter().enumerate() {
            if h0_line(self.target[j], d) == 0 {
                continue;
            }
            for (i, g) in row.iter().enumerate() {
                let n_src = h0_line(self.source[i], d);
                if g.is_zero() || n_src == 0 {
                    continue;
                }
                for k in 0..n_src {
                    for (l, c) in g.coeffs().iter().enumerate() {
                        if !f.is_zero(c) {
                            m.add_to(tgt_off[j] + k + l, src_off[i] + k, c);
                        }
                    }
                }
            }
        }
        m
    }

    /// `dim ker H⁰(M(d))`, the number of sections of the kernel sheaf twisted by `d`.
    pub fn kernel_h0(&self, d: i64) -> usize {
        self.sections_matrix(d).nullity()
    }

    /// Applies the map to a section tuple of `E(d)`.
    pub fn apply(&self, v: &[BinForm<F>]) -> Result<Vec<BinForm<F>>> {
        if v.len() != self.cols() {
            return Err(Error::Shape(alloc::format!("expected {} forms, got {}", self.cols(), v.len())));
        }
        self.entries
            .iter()
            .map(|row| {
                let mut acc = BinForm::zero(self.field);
                for (g, x) in row.iter().zip(v) {
                    acc = acc.add(&g.try_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn eval(&self, s0: &F::Elem, t0: &F::Elem) -> Result<Mat<F>> {
        let mut m = Mat::zeros(self.field, self.rows(), self.cols());
        for (j, row) in self.entries.iter().enumerate() {
            for (i, g) in row.iter().enumerate() {
                m.set(j, i, g.eval(s0, t0)?);
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|g| g.is_zero())
    }

    /// Rank over the function field, computed exactly by fraction-free
    /// elimination on the dehomogenization `s = 1`.
    pub fn generic_rank(&self) -> RankCertificate {
        let m: Vec<Vec<Vec<F::Elem>>> =
            self.entries.iter().map(|r| r.iter().map(|g| g.coeffs().to_vec()).collect()).collect();
        let (rank, rows, cols, _) = upoly::bareiss_rank(&self.field, m);
        RankCertificate { rank, rows, cols }
    }

    /// Gcd of the `k × k` minors.
    pub fn minors_gcd(&self, k: usize) -> Result<BinForm<F>> {
        formmat::minors_gcd(self.field, &self.entries, k)
    }

    /// Certifies constant full row rank at every point of P¹.
    pub fn check_fiberwise_surjective(&self) -> Result<()> {
        self.check_full_rank(self.rows(), "surjective")
    }

    /// Certifies constant full column rank at every point of P¹.
    pub fn check_fiberwise_injective(&self) -> Result<()> {
        self.check_full_rank(self.cols(), "injective")
    }

    fn check_full_rank(&self, k: usize, what: &str) -> Result<()> {
        if k > self.rows().min(self.cols()) {
            return Err(Error::NotFiberwiseSurjective(alloc::format!(
                "a {}x{} matrix cannot be fiberwise {what}",
                self.rows(),
                self.cols()
            )));
        }
        let g = self.minors_gcd(k)?;
        if g.is_constant() {
            return Ok(());
        }
        let at = match g.find_zero() {
            Some(z) => describe_zero(&self.field, &z),
            None => alloc::format!("{g}"),
        };
        Err(Error::NotFiberwiseSurjective(alloc::format!("not fiberwise {what}: rank drops at {at}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};
    use rand_core::SeedableRng;

    fn q(c: &[i64]) -> BinForm<Rationals> {
        BinForm::from_i64s(Rationals, c)
    }

    #[test]
    fn multiplication_by_s() {
        let m = BundleMap::new(Rationals, vec![0], vec![1], vec![vec![q(&[1, 0])]]).unwrap();
        let s = m.sections_matrix(0);
        assert_eq!((s.rows(), s.cols()), (2, 1));
        assert_eq!(s.column(0), vec![Rationals.one(), Rationals.zero()]);
        assert_eq!(m.sections_matrix(-1).cols(), 0);
    }

    #[test]
    fn twisted_cubic_syzygies_in_degree_one() {
        let row = vec![vec![q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0]), q(&[0, 0, 0, 1])]];
        let m = BundleMap::new(Rationals, vec![-3; 4], vec![0], row).unwrap();
        assert_eq!(m.kernel_h0(4), 3);
    }

    #[test]
    fn entry_degrees_are_enforced() {
        let err = BundleMap::new(Rationals, vec![0], vec![2], vec![vec![q(&[1, 0])]]).unwrap_err();
        assert_eq!(err, Error::EntryDegree { row: 0, col: 0, expected: 2 });
        assert!(BundleMap::new(Rationals, vec![3], vec![2], vec![vec![q(&[1])]]).is_err());
    }

    #[test]
    fn transpose_and_compose() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = BundleMap::random(f, vec![0, 1], vec![2, 3], &mut rng);
        let b = BundleMap::random(f, vec![2, 3], vec![4], &mut rng);
        let ba = b.compose(&a).unwrap();
        let ab_t = a.transpose().compose(&b.transpose()).unwrap();
        assert_eq!(ba.transpose(), ab_t);
    }

    #[test]
    fn fiberwise_surjectivity_certificate() {
        let st = BundleMap::new(Rationals, vec![0, 0], vec![1], vec![vec![q(&[1, 0]), q(&[0, 1])]]).unwrap();
        assert!(st.check_fiberwise_surjective().is_ok());
        let ss = BundleMap::new(Rationals, vec![0, 0], vec![1], vec![vec![q(&[1, 0]), q(&[2, 0])]]).unwrap();
        let err = ss.check_fiberwise_surjective().unwrap_err();
        assert!(matches!(err, Error::NotFiberwiseSurjective(msg) if msg.contains("(0:1)")));
    }

    #[test]
    fn generic_rank_is_exact_over_small_fields() {
        // (t³ − t)-type entries vanish at every F_3 point but are nonzero forms
        let f = PrimeField::new(3).unwrap();
        let g = BinForm::from_i64s(f, &[0, -1, 0, 1]);
        let m = BundleMap::new(f, vec![0], vec![3], vec![vec![g]]).unwrap();
        assert_eq!(m.generic_rank().rank, 1);
    }

}
