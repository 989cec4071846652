use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::Field;
use super::upoly;
use crate::error::{Error, Result};

/// A homogeneous binary form in `s, t`.
///
/// Coefficient `i` multiplies `s^(deg-i) t^i`. The zero form is a distinct
/// value without a degree and combines with forms of any degree.
#[derive(Clone, PartialEq, Eq)]
pub struct BinForm<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

/// Where two or more binary forms vanish simultaneously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommonZero<E> {
    /// A point `(s : t)` of P¹ over the base field.
    Point(E, E),
    /// The common factor has no root in the base field; carried as the factor.
    Factor(String),
}

impl<F: Field> BinForm<F> {
    pub fn zero(field: F) -> Self {
        BinForm { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        Self::constant(field, field.one())
    }

    /// `c · s^(degree - t_exp) · t^t_exp`
    pub fn monomial(field: F, degree: usize, t_exp: usize, c: F::Elem) -> Self {
        assert!(t_exp <= degree, "t exponent exceeds degree");
        let mut coeffs = vec![field.zero(); degree + 1];
        coeffs[t_exp] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn s(field: F) -> Self {
        Self::monomial(field, 1, 0, field.one())
    }

    pub fn t(field: F) -> Self {
        Self::monomial(field, 1, 1, field.one())
    }

    /// Builds a form of degree `coeffs.len() - 1`; all-zero input gives the
    /// zero form.
    pub fn from_coeffs(field: F, coeffs: Vec<F::Elem>) -> Self {
        if coeffs.iter().all(|c| field.is_zero(c)) {
            Self::zero(field)
        } else {
            BinForm { field, coeffs }
        }
    }

    pub fn from_i64s(field: F, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|c| field.from_i64(*c)).collect())
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficients, empty for the zero form.
    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    /// Coefficient vector padded to length `degree + 1`; zero forms give zeros.
    pub fn coeffs_in_degree(&self, degree: usize) -> Vec<F::Elem> {
        if self.is_zero() {
            return vec![self.field.zero(); degree + 1];
        }
        assert_eq!(self.degree(), Some(degree), "form has the wrong degree");
        self.coeffs.clone()
    }

    pub fn coeff(&self, t_exp: usize) -> F::Elem {
        self.coeffs.get(t_exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::DegreeMismatch {
                left: self.coeffs.len() - 1,
                right: other.coeffs.len() - 1,
            });
        }
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect();
        Ok(Self::from_coeffs(f, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        BinForm { field: f, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Product of forms; panics if the field contexts differ.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("forms over different fields")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        Ok(Self::from_coeffs(self.field, upoly::mul(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial_s(&self) -> Self {
        let Some(d) = self.degree() else { return self.clone() };
        if d == 0 {
            return Self::zero(self.field);
        }
        let f = self.field;
        let coeffs = (0..d).map(|i| f.mul(&self.coeffs[i], &f.from_i64((d - i) as i64))).collect();
        Self::from_coeffs(f, coeffs)
    }

    pub fn partial_t(&self) -> Self {
        let Some(d) = self.degree() else { return self.clone() };
        if d == 0 {
            return Self::zero(self.field);
        }
        let f = self.field;
        let coeffs = (0..d).map(|i| f.mul(&self.coeffs[i + 1], &f.from_i64((i + 1) as i64))).collect();
        Self::from_coeffs(f, coeffs)
    }

    /// `h` with `divisor · h = self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.field.check_same(&divisor.field)?;
        let Some(dg) = divisor.degree() else { return Err(Error::DivisionByZero) };
        let Some(df) = self.degree() else { return Ok(Self::zero(self.field)) };
        if dg > df {
            return Err(Error::InexactDivision);
        }
        let mut q = upoly::exact_div(&self.field, &self.coeffs, &divisor.coeffs)?;
        if q.len() > df - dg + 1 {
            return Err(Error::InexactDivision);
        }
        q.resize(df - dg + 1, self.field.zero());
        Ok(Self::from_coeffs(self.field, q))
    }

    pub fn eval(&self, s0: &F::Elem, t0: &F::Elem) -> Result<F::Elem> {
        let f = self.field;
        if f.is_zero(s0) && f.is_zero(t0) {
            return Err(Error::ZeroPoint);
        }
        let Some(d) = self.degree() else { return Ok(f.zero()) };
        // Horner in t/s is not available at s = 0; accumulate powers instead.
        let mut s_pows = vec![f.one(); d + 1];
        let mut t_pows = vec![f.one(); d + 1];
        for k in 1..=d {
            s_pows[k] = f.mul(&s_pows[k - 1], s0);
            t_pows[k] = f.mul(&t_pows[k - 1], t0);
        }
        let mut acc = f.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = f.mul(&s_pows[d - i], &t_pows[i]);
            f.add_mul_assign(&mut acc, c, &term);
        }
        Ok(acc)
    }

    /// Substitutes `s ↦ a·s + b·t`, `t ↦ c·s + d·t`.
    pub fn compose(&self, alpha: &[[F::Elem; 2]; 2]) -> Self {
        let f = self.field;
        let Some(deg) = self.degree() else { return self.clone() };
        let new_s = Self::from_coeffs(f, vec![alpha[0][0].clone(), alpha[0][1].clone()]);
        let new_t = Self::from_coeffs(f, vec![alpha[1][0].clone(), alpha[1][1].clone()]);
        let mut s_pows = vec![Self::one(f)];
        let mut t_pows = vec![Self::one(f)];
        for k in 1..=deg {
            s_pows.push(s_pows[k - 1].mul(&new_s));
            t_pows.push(t_pows[k - 1].mul(&new_t));
        }
        let mut acc = vec![f.zero(); deg + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let term = s_pows[deg - i].mul(&t_pows[i]);
            if term.is_zero() {
                continue;
            }
            for (k, x) in term.coeffs.iter().enumerate() {
                f.add_mul_assign(&mut acc[k], c, x);
            }
        }
        Self::from_coeffs(f, acc)
    }

    /// Monic (in the highest available `t` power) gcd of two forms.
    pub fn gcd(&self, other: &Self) -> Self {
        let f = self.field;
        match (self.degree(), other.degree()) {
            (None, _) => other.normalized(),
            (_, None) => self.normalized(),
            (Some(da), Some(db)) => {
                let pa = upoly::degree(&f, &self.coeffs).expect("nonzero");
                let pb = upoly::degree(&f, &other.coeffs).expect("nonzero");
                let s_mult = (da - pa).min(db - pb);
                let g = upoly::gcd(&f, &self.coeffs[..=pa], &other.coeffs[..=pb]);
                let mut coeffs = g;
                let total = s_mult + coeffs.len() - 1;
                coeffs.resize(total + 1, f.zero());
                Self::from_coeffs(f, coeffs)
            }
        }
    }

    fn normalized(&self) -> Self {
        let f = self.field;
        let Some(k) = self.coeffs.iter().rposition(|c| !f.is_zero(c)) else { return self.clone() };
        let inv = f.inv(&self.coeffs[k]).expect("nonzero");
        self.scale(&inv)
    }

    pub fn gcd_all<'a, I: IntoIterator<Item = &'a Self>>(field: F, forms: I) -> Self
    where
        F: 'a,
    {
        let mut g = Self::zero(field);
        for h in forms {
            g = g.gcd(h);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    /// A common zero of a nonconstant form, preferring points over the base
    /// field. Returns `None` for nonzero constants.
    pub fn find_zero(&self) -> Option<CommonZero<F::Elem>> {
        let f = self.field;
        let Some(d) = self.degree() else {
            return Some(CommonZero::Point(f.one(), f.zero()));
        };
        if d == 0 {
            return None;
        }
        // s divides the form iff the top t coefficient vanishes
        if f.is_zero(&self.coeffs[d]) {
            return Some(CommonZero::Point(f.zero(), f.one()));
        }
        if let Some(elems) = f.elements() {
            for x in elems {
                if f.is_zero(&upoly::eval(&f, &self.coeffs, &x)) {
                    return Some(CommonZero::Point(f.one(), x));
                }
            }
        } else {
            for k in -16i64..=16 {
                let x = f.from_i64(k);
                if f.is_zero(&upoly::eval(&f, &self.coeffs, &x)) {
                    return Some(CommonZero::Point(f.one(), x));
                }
            }
        }
        Some(CommonZero::Factor(alloc::format!("{self}")))
    }
}

/// Describes a common zero as `(s:t)` text.
pub fn describe_zero<F: Field>(field: &F, z: &CommonZero<F::Elem>) -> String {
    match z {
        CommonZero::Point(s0, t0) => alloc::format!("({}:{})", field.render(s0), field.render(t0)),
        CommonZero::Factor(text) => alloc::format!("roots of {text}"),
    }
}

impl<F: Field> fmt::Display for BinForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field;
        let Some(d) = self.degree() else { return write!(out, "0") };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => power("s", a),
                (0, b) => power("t", b),
                (a, b) => alloc::format!("{}*{}", power("s", a), power("t", b)),
            };
            if mono.is_empty() {
                write!(out, "{}", f.render(c))?;
            } else if f.is_one(c) {
                write!(out, "{mono}")?;
            } else {
                write!(out, "{}*{mono}", f.render(c))?;
            }
        }
        Ok(())
    }
}

fn power(var: &str, e: usize) -> String {
    if e == 1 {
        String::from(var)
    } else {
        alloc::format!("{var}^{e}")
    }
}

impl<F: Field> fmt::Debug for BinForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn q(c: &[i64]) -> BinForm<Rationals> {
        BinForm::from_i64s(Rationals, c)
    }

    #[test]
    fn partial_t_of_s2t() {
        let st = q(&[0, 1, 0]);
        assert_eq!(st.partial_t(), q(&[1, 0]));
        let s2t = q(&[0, 1, 0, 0]);
        assert_eq!(s2t.partial_t(), q(&[1, 0, 0]));
        let f2 = PrimeField::new(2).unwrap();
        let t2 = BinForm::from_i64s(f2, &[0, 0, 1]);
        assert!(t2.partial_t().is_zero());
    }

    #[test]
    fn exact_division_by_monomial_factor() {
        // (s³t − s²t²) / s = s²t − st²
        let f = q(&[0, 1, -1, 0]);
        let h = f.exact_div(&BinForm::s(Rationals)).unwrap();
        assert_eq!(h, q(&[0, 1, -1]));
        assert_eq!(BinForm::t(Rationals).exact_div(&BinForm::s(Rationals)), Err(Error::InexactDivision));
        assert_eq!(f.exact_div(&BinForm::zero(Rationals)), Err(Error::DivisionByZero));
    }

    #[test]
    fn difference_of_squares() {
        let a = q(&[1, 1]);
        let b = q(&[1, -1]);
        assert_eq!(a.mul(&b), q(&[1, 0, -1]));
    }

    #[test]
    fn add_checks_degrees() {
        assert_eq!(q(&[1, 1]).add(&q(&[1])), Err(Error::DegreeMismatch { left: 1, right: 0 }));
        assert_eq!(q(&[1, 1]).add(&BinForm::zero(Rationals)).unwrap(), q(&[1, 1]));
        assert!(q(&[1, 1]).add(&q(&[-1, -1])).unwrap().is_zero());
    }

    #[test]
    fn eval_rejects_origin() {
        let f = q(&[1, 2, 3]);
        let z = Rationals.zero();
        assert_eq!(f.eval(&z, &z), Err(Error::ZeroPoint));
        assert_eq!(f.eval(&Rationals.from_i64(0), &Rationals.from_i64(1)).unwrap(), Rationals.from_i64(3));
        assert_eq!(f.eval(&Rationals.from_i64(1), &Rationals.from_i64(1)).unwrap(), Rationals.from_i64(6));
    }

    #[test]
    fn gcd_finds_basepoint() {
        let s2 = q(&[1, 0, 0]);
        let st = q(&[0, 1, 0]);
        let g = s2.gcd(&st);
        assert_eq!(g, q(&[1, 0]));
        assert_eq!(g.find_zero(), Some(CommonZero::Point(Rationals.zero(), Rationals.one())));
        assert!(q(&[1, 0, 0]).gcd(&q(&[0, 0, 1])).is_constant());
    }

    #[test]
    fn compose_swaps_variables() {
        let f = q(&[1, 2, 3]); // s² + 2st + 3t²
        let one = Rationals.one();
        let zero = Rationals.zero();
        let swap = [[zero.clone(), one.clone()], [one, zero]];
        assert_eq!(f.compose(&swap), q(&[3, 2, 1]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(alloc::format!("{}", q(&[1, -2, 0])), "s^2 + -2*s*t");
        assert_eq!(alloc::format!("{}", BinForm::zero(Rationals)), "0");
    }

    fn arb_form(p: u64) -> impl Strategy<Value = BinForm<PrimeField>> {
        (0usize..7).prop_flat_map(move |d| {
            proptest::collection::vec(0..p, d + 1)
                .prop_map(move |c| BinForm::from_coeffs(PrimeField::new(p).unwrap(), c))
        })
    }

    proptest! {
        #[test]
        fn euler_identity(f in arb_form(7)) {
            if let Some(e) = f.degree() {
                let fld = f.field();
                let lhs = BinForm::s(fld).mul(&f.partial_s()).add(&BinForm::t(fld).mul(&f.partial_t()));
                // ∂ of a degree-0 form is the zero form, so sums may collapse to zero
                let rhs = f.scale(&fld.from_i64(e as i64));
                prop_assert_eq!(lhs.unwrap(), rhs);
            }
        }

        #[test]
        fn division_undoes_multiplication(f in arb_form(32003), g in arb_form(32003)) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!(f.mul(&g).exact_div(&g).unwrap(), f);
        }
    }
}
