use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ideal_sections;
use crate::ambient::{Ambient, AmbientKind, DivisorClass, Poly};
use crate::bundles::forms_to_vector;
use crate::curves::{conormal_pn, rnc_conormal_basis, rnc_conormal_formula, CurveMap};
use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::{Field, Mat};

/// One basis section of `H⁰(N*(2e+b))` with its closed-form preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub target: String,
    /// The preimage as text, or `None` when an index of the formula falls
    /// outside `0..=e`.
    pub formula: Option<String>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RathmannReport {
    pub e: usize,
    pub n: usize,
    pub b: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub surjective: bool,
    pub preimages: Vec<Preimage>,
}

impl RathmannReport {
    /// Every applicable closed-form preimage maps to its target.
    pub fn preimages_verified(&self) -> bool {
        self.preimages.iter().all(|p| p.formula.is_none() || p.verified)
    }

    pub fn inapplicable(&self) -> usize {
        self.preimages.iter().filter(|p| p.formula.is_none()).count()
    }
}

/// `f_{a,c} = x_a x_c − x_{a+1} x_{c−1}` in `nvars` variables.
pub fn quadric_f<F: Field>(field: F, nvars: usize, a: usize, c: usize) -> Poly<F> {
    let x = |i| Poly::var(field, nvars, i);
    x(a).mul(&x(c)).sub(&x(a + 1).mul(&x(c - 1)))
}

fn monomial<F: Field>(field: F, k: usize, l: usize) -> BinForm<F> {
    BinForm::monomial(field, k + l, l, field.one())
}

// h·∇F(f), as a section tuple at twist 2e + b.
fn image<F: Field>(coords: &[BinForm<F>], p: &Poly<F>, h: &BinForm<F>) -> Result<Vec<BinForm<F>>> {
    (0..coords.len()).map(|i| Ok(p.partial(i).pullback(coords)?.mul(h))).collect()
}

fn combine<F: Field>(field: F, coords: &[BinForm<F>], terms: &[(Poly<F>, BinForm<F>, i64)]) -> Result<Vec<BinForm<F>>> {
    let mut acc = vec![BinForm::zero(field); coords.len()];
    for (p, h, sign) in terms {
        for (a, g) in acc.iter_mut().zip(image(coords, p, h)?) {
            *a = a.add(&g.scale(&field.from_i64(*sign)))?;
        }
    }
    Ok(acc)
}

/// Surjectivity of `H⁰(I_C(2)) ⊗ H⁰(O_C(b)) → H⁰(N*_{C|Pⁿ}(2e+b))` for the
/// rational normal curve of degree `e`, with the explicit preimages of a
/// basis of the target.
pub fn rathmann_check<F: Field>(field: F, e: usize, n: usize, b: usize) -> Result<RathmannReport> {
    if e == 0 || e > n || b == 0 {
        return Err(Error::Hypothesis(alloc::format!("need 1 <= e <= n and b >= 1, got e={e}, n={n}, b={b}")));
    }
    let c = CurveMap::rational_normal(field, e, n)?;
    let x = Ambient::construct(field, AmbientKind::Projective { n })?;
    let ideal = ideal_sections(&x, &c, &DivisorClass::hyperplane_multiple(2))?;
    let coords = c.coordinates();
    let degrees = c.euler_degrees();
    let twist = (2 * e + b) as i64;
    let mut columns = Vec::new();
    for p in &ideal.basis {
        for j in 0..=b {
            let v = image(&coords, p, &monomial(field, b - j, j))?;
            columns.push(forms_to_vector(field, &degrees, twist, &v)?);
        }
    }
    let rows = degrees.iter().map(|a| crate::bundles::h0_line(*a, twist)).sum();
    let rank = Mat::from_columns(field, rows, &columns)?.rank();
    let target_dim = conormal_pn(&c)?.splitting().h0(twist);
    if target_dim != rnc_conormal_formula(e, n).h0(twist) {
        return Err(Error::Verification(String::from("conormal model disagrees with the closed formula")));
    }

    let f = |a: usize, cc: usize| -> Option<Poly<F>> {
        (cc >= 1 && a < e && cc <= e).then(|| quadric_f(field, n + 1, a, cc))
    };
    let xx = |a: usize, i: usize| Poly::var(field, n + 1, a).mul(&Poly::var(field, n + 1, i));
    let mut preimages = Vec::new();
    let basis = rnc_conormal_basis(field, e, n);
    for section in &basis {
        let span = (2 * e + b) as i64 - section.twist;
        for k in (0..=span as usize).rev() {
            let l = span as usize - k;
            let target: Vec<BinForm<F>> = section.forms.iter().map(|g| g.mul(&monomial(field, k, l))).collect();
            let label = alloc::format!("s^{k}*t^{l}*{}", section.label);
            let (formula, terms) = if let Some(i) = section.label.strip_prefix("q_") {
                let i: usize = i.parse().expect("label index");
                if k + 1 >= b {
                    let text = alloc::format!("f[{i},{}]⊗s^{}t - f[{},{}]⊗s^{b}", l + 1, b - 1, i + 1, l + 1);
                    let terms = f(i, l + 1).zip(f(i + 1, l + 1)).map(|(p1, p2)| {
                        vec![(p1, monomial(field, b - 1, 1), 1), (p2, monomial(field, b, 0), -1)]
                    });
                    (text, terms)
                } else {
                    let cc = (l + 2).checked_sub(b);
                    let text = alloc::format!("f[{i},l-b+2]⊗t^{b} - f[{},l-b+2]⊗st^{} (l={l})", i + 1, b - 1);
                    let terms = cc.and_then(|cc| {
                        f(i, cc).zip(f(i + 1, cc)).map(|(p1, p2)| {
                            vec![(p1, monomial(field, 0, b), 1), (p2, monomial(field, 1, b - 1), -1)]
                        })
                    });
                    (text, terms)
                }
            } else {
                let i: usize = section.label.strip_prefix("dx_").expect("label").parse().expect("label index");
                if k >= b {
                    (alloc::format!("x{l}*x{i}⊗s^{b}"), (l <= e).then(|| vec![(xx(l, i), monomial(field, b, 0), 1)]))
                } else {
                    let a = l.checked_sub(b).filter(|a| *a <= e);
                    (
                        alloc::format!("x(l-b)*x{i}⊗t^{b} (l={l})"),
                        a.map(|a| vec![(xx(a, i), monomial(field, 0, b), 1)]),
                    )
                }
            };
            let preimage = match terms {
                Some(terms) => {
                    let got = combine(field, &coords, &terms)?;
                    Preimage { target: label, formula: Some(formula), verified: got == target }
                }
                None => Preimage { target: label, formula: None, verified: false },
            };
            preimages.push(preimage);
        }
    }
    Ok(RathmannReport {
        e,
        n,
        b,
        source_dim: columns.len(),
        target_dim,
        rank,
        surjective: rank == target_dim,
        preimages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};

    #[test]
    fn small_cases() {
        let r = rathmann_check(Rationals, 3, 3, 1).unwrap();
        assert_eq!((r.source_dim, r.target_dim, r.rank), (6, 6, 6));
        assert!(r.preimages_verified());
        assert_eq!(r.inapplicable(), 0);
        let r = rathmann_check(Rationals, 3, 4, 1).unwrap();
        assert_eq!((r.source_dim, r.target_dim), (16, 11));
        assert!(r.surjective && r.preimages_verified());
    }

    #[test]
    fn agrees_over_q_and_fp() {
        let a = rathmann_check(Rationals, 4, 6, 2).unwrap();
        let b = rathmann_check(PrimeField::new(32003).unwrap(), 4, 6, 2).unwrap();
        assert!(a.surjective && b.surjective);
        assert_eq!(a.rank, b.rank);
        assert!(a.preimages_verified());
    }

    #[test]
    fn preimage_count_matches_target() {
        let r = rathmann_check(Rationals, 4, 5, 3).unwrap();
        assert_eq!(r.preimages.len(), r.target_dim);
    }
}
