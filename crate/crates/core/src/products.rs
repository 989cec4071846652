//! Normal bundles of general rational curves in products.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::bundles::{kernel_splitting, SplittingType};
use crate::curves::{conormal_pn, differential_form, euler_cotangent_model, validate_curve, CurveMap};
use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::{formmat, EchelonBasis, Field};

/// `V_{i,d}`: the image of `H⁰(f*T*X(d))` in `H⁰(T*P¹(d)) = H⁰(O(d−2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSubspace<F: Field> {
    pub d: i64,
    /// Linearly independent forms of degree `d − 2`.
    pub basis: Vec<BinForm<F>>,
}

impl<F: Field> TwistSubspace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.d >= 2 && self.basis.len() as i64 == self.d - 1
    }
}

/// `h⁰` inputs of one factor: `f*T*X` and `N*_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorProfile {
    pub cotangent: SplittingType,
    pub conormal: SplittingType,
}

impl FactorProfile {
    pub fn new(cotangent: SplittingType, conormal: SplittingType) -> Result<Self> {
        if conormal.rank() + 1 != cotangent.rank() || conormal.degree() != cotangent.degree() + 2 {
            return Err(Error::Hypothesis(alloc::format!(
                "conormal {conormal} is not the kernel of {cotangent} onto O(-2)"
            )));
        }
        Ok(FactorProfile { cotangent, conormal })
    }

    /// Profiles of a curve in a product of projective spaces.
    pub fn of_curve<F: Field>(c: &CurveMap<F>) -> Result<Self> {
        let cotangent = euler_cotangent_model(c)?.splitting();
        let conormal = conormal_pn(c)?.splitting();
        Self::new(cotangent, conormal)
    }
}

fn span_of<F: Field>(field: F, d: i64, forms: impl IntoIterator<Item = BinForm<F>>) -> TwistSubspace<F> {
    if d < 2 {
        return TwistSubspace { d, basis: Vec::new() };
    }
    let deg = (d - 2) as usize;
    let mut echelon = EchelonBasis::new(field, deg + 1);
    let mut basis = Vec::new();
    for h in forms {
        if !h.is_zero() && echelon.insert(&h.coeffs_in_degree(deg)) {
            basis.push(h);
        }
        if basis.len() == deg + 1 {
            break;
        }
    }
    TwistSubspace { d, basis }
}

/// `V_d` for a curve in a product of projective spaces.
pub fn factor_image<F: Field>(c: &CurveMap<F>, d: i64) -> Result<TwistSubspace<F>> {
    let f = c.field();
    let model = euler_cotangent_model(c)?;
    let gens = model.generators();
    let mut images = Vec::new();
    if d >= 2 {
        for (l, cl) in model.degrees().iter().enumerate() {
            let deg = cl + d;
            if deg < 0 {
                continue;
            }
            let column = gens.column(l);
            for k in 0..=deg as usize {
                let m = BinForm::monomial(f, deg as usize, k, f.one());
                let g: Vec<BinForm<F>> = column.iter().map(|x| x.mul(&m)).collect();
                images.push(differential_form(c, &g)?);
            }
        }
    }
    Ok(span_of(f, d, images))
}

/// `dim(V₁ + … + V_r)` inside `H⁰(O(d−2))`.
pub fn sum_dim<F: Field>(field: F, spaces: &[TwistSubspace<F>]) -> usize {
    let d = spaces.first().map_or(0, |v| v.d);
    span_of(field, d, spaces.iter().flat_map(|v| v.basis.iter().cloned())).dim()
}

/// The smallest `d ≥ 2` at which either factor's subspace is everything,
/// searched up to `max_d`.
pub fn d0<F: Field>(c1: &CurveMap<F>, c2: &CurveMap<F>, max_d: i64) -> Result<Option<i64>> {
    for d in 2..=max_d {
        if factor_image(c1, d)?.is_full() || factor_image(c2, d)?.is_full() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// `det [∂_t^j g_i]` for `0 ≤ j < len`.
pub fn wronskian<F: Field>(field: F, forms: &[BinForm<F>]) -> Result<BinForm<F>> {
    let n = forms.len();
    let rows: Vec<Vec<BinForm<F>>> = forms
        .iter()
        .map(|g| {
            let mut row = Vec::with_capacity(n);
            let mut h = g.clone();
            for _ in 0..n {
                row.push(h.clone());
                h = h.partial_t();
            }
            row
        })
        .collect();
    formmat::det(field, &rows)
}

/// `h⁰(N*_g(d))` predicted for a general twisted product.
///
/// The image of `H⁰(f*T*X(d))` in `H⁰(O(d−2))` has dimension at most
/// `max(d−1, 0)`, and the bound is attained unless the factors' conormal
/// sections alone are more numerous.
pub fn product_formula(profiles: &[FactorProfile], d: i64) -> usize {
    let total: usize = profiles.iter().map(|p| p.cotangent.h0(d)).sum();
    let image = (d - 1).max(0) as usize;
    let separate: usize = profiles.iter().map(|p| p.conormal.h0(d)).sum();
    total.saturating_sub(image).max(separate)
}

/// The splitting of `N*_g` whose `h⁰` profile is [`product_formula`].
pub fn predicted_conormal(profiles: &[FactorProfile]) -> Result<SplittingType> {
    let total = profiles.iter().fold(SplittingType::default(), |acc, p| acc.sum(&p.cotangent));
    let rank = total.rank().checked_sub(1).ok_or_else(|| Error::Hypothesis(String::from("no factors")))?;
    let start = -total.max().unwrap_or(0) - 1;
    let steps = (total.max().unwrap_or(0) - total.min().unwrap_or(0) + 8) as usize;
    let conormal = SplittingType::from_h0(rank, start, steps, |d| Ok(product_formula(profiles, d)))?;
    if conormal.degree() != total.degree() + 2 {
        return Err(Error::InconsistentProfile(alloc::format!("predicted {conormal} has the wrong degree")));
    }
    Ok(conormal)
}

/// An automorphism of P¹ drawn uniformly among invertible matrices.
pub fn random_alpha<F: Field, R: RngCore + ?Sized>(field: F, rng: &mut R) -> [[F::Elem; 2]; 2] {
    loop {
        let a = [[field.random(rng), field.random(rng)], [field.random(rng), field.random(rng)]];
        let det = field.sub(&field.mul(&a[0][0], &a[1][1]), &field.mul(&a[0][1], &a[1][0]));
        if !field.is_zero(&det) {
            return a;
        }
    }
}

pub fn identity_alpha<F: Field>(field: F) -> [[F::Elem; 2]; 2] {
    [[field.one(), field.zero()], [field.zero(), field.one()]]
}

/// `(f₁∘α₁, …, f_r∘α_r)`, checking that each factor's pulled-back cotangent
/// bundle is unchanged.
pub fn twisted_product<F: Field>(curves: &[CurveMap<F>], alphas: &[[[F::Elem; 2]; 2]]) -> Result<CurveMap<F>> {
    if curves.len() != alphas.len() {
        return Err(Error::Shape(alloc::format!("{} curves and {} automorphisms", curves.len(), alphas.len())));
    }
    let mut twisted = Vec::with_capacity(curves.len());
    for (c, a) in curves.iter().zip(alphas) {
        validate_curve(c)?.into_result()?;
        let t = c.compose(a)?;
        if kernel_splitting(&t.euler_map())? != kernel_splitting(&c.euler_map())? {
            return Err(Error::Verification(String::from("precomposition changed the cotangent splitting")));
        }
        twisted.push(t);
    }
    CurveMap::product(&twisted)
}

/// Whether the characteristic allows the transversality argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCondition {
    pub characteristic: u64,
    pub d0: Option<i64>,
    pub holds: bool,
    pub reason: String,
}

pub fn char_condition<F: Field>(curves: &[CurveMap<F>], max_d: i64) -> Result<CharCondition> {
    let p = curves.first().map_or(0, |c| c.field().characteristic());
    let d0 = match curves {
        [a, b, ..] => d0(a, b, max_d)?,
        [a] => d0(a, a, max_d)?,
        [] => None,
    };
    if p == 0 {
        return Ok(CharCondition { characteristic: 0, d0, holds: true, reason: String::from("characteristic 0") });
    }
    if let Some(d) = d0 {
        if p as i64 >= d - 1 {
            return Ok(CharCondition { characteristic: p, d0, holds: true, reason: alloc::format!("p >= d0 - 1 = {}", d - 1) });
        }
    }
    for (i, c) in curves.iter().enumerate() {
        if factor_image(c, p as i64 + 2)?.is_full() {
            return Ok(CharCondition {
                characteristic: p,
                d0,
                holds: true,
                reason: alloc::format!("factor {i} surjects onto T*P1({})", p + 2),
            });
        }
    }
    Ok(CharCondition { characteristic: p, d0, holds: false, reason: String::from("no sufficient condition holds") })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCheck {
    pub d: i64,
    pub observed: usize,
    pub formula: usize,
    /// `dim(V₁ + αV₂ + …) = min(d−1, Σ vᵢ)`
    pub transversal: bool,
    pub image_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTrial {
    pub per_d: Vec<TwistCheck>,
    pub conormal: SplittingType,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub profiles: Vec<FactorProfile>,
    pub condition: CharCondition,
    pub predicted_conormal: SplittingType,
    pub predicted_normal: SplittingType,
    pub trials: Vec<ProductTrial>,
    /// Some trial matched the formula at every twist.
    pub pass: bool,
    pub best: Option<usize>,
}

/// Samples twisted products and compares `h⁰(N*_g(d))` with the formula.
pub fn verify_product_theorem<F: Field, R: RngCore + ?Sized>(
    curves: &[CurveMap<F>],
    d_range: core::ops::RangeInclusive<i64>,
    trials: usize,
    rng: &mut R,
) -> Result<ProductReport> {
    let f = curves.first().ok_or_else(|| Error::Hypothesis(String::from("no factors")))?.field();
    let profiles = curves.iter().map(FactorProfile::of_curve).collect::<Result<Vec<_>>>()?;
    let predicted_conormal = predicted_conormal(&profiles)?;
    let condition = char_condition(curves, *d_range.end().max(&2) + 8)?;
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut alphas = vec![identity_alpha(f)];
        alphas.extend((1..curves.len()).map(|_| random_alpha(f, rng)));
        let g = twisted_product(curves, &alphas)?;
        let factors: Vec<CurveMap<F>> = (0..curves.len()).map(|j| curve_factor(&g, curves, j)).collect();
        let conormal_map = g.conormal_map();
        let mut per_d = Vec::new();
        for d in d_range.clone() {
            let spaces = factors.iter().map(|c| factor_image(c, d)).collect::<Result<Vec<_>>>()?;
            let image_dim = sum_dim(f, &spaces);
            let expected = (d - 1).max(0).min(spaces.iter().map(|v| v.dim() as i64).sum()) as usize;
            per_d.push(TwistCheck {
                d,
                observed: conormal_map.kernel_h0(d),
                formula: product_formula(&profiles, d),
                transversal: image_dim == expected,
                image_dim,
            });
        }
        let conormal = kernel_splitting(&conormal_map)?;
        let pass = per_d.iter().all(|c| c.observed == c.formula) && conormal == predicted_conormal;
        out.push(ProductTrial { per_d, conormal, pass });
    }
    let best = out.iter().position(|t| t.pass).or_else(|| {
        (0..out.len()).min_by_key(|&i| out[i].per_d.iter().map(|c| c.observed - c.formula.min(c.observed)).sum::<usize>())
    });
    Ok(ProductReport {
        pass: out.iter().any(|t| t.pass),
        predicted_normal: predicted_conormal.dual(),
        profiles,
        condition,
        predicted_conormal,
        trials: out,
        best,
    })
}

// The blocks of `g` belonging to the `j`-th input curve.
fn curve_factor<F: Field>(g: &CurveMap<F>, curves: &[CurveMap<F>], j: usize) -> CurveMap<F> {
    let start: usize = curves[..j].iter().map(|c| c.blocks().len()).sum();
    let parts: Vec<CurveMap<F>> = (start..start + curves[j].blocks().len()).map(|b| g.factor(b)).collect();
    CurveMap::product(&parts).expect("nonempty")
}

/// `(s^(p+1), s^p t, s t^p, t^(p+1))`.
pub fn frobenius_curve<F: Field>(field: F) -> Result<CurveMap<F>> {
    let p = field.characteristic();
    if p < 3 {
        return Err(Error::Hypothesis(alloc::format!("needs characteristic p >= 3, got {p}")));
    }
    let p = p as usize;
    let m = |t: usize| BinForm::monomial(field, p + 1, t, field.one());
    CurveMap::new(field, vec![vec![m(0), m(1), m(p), m(p + 1)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};
    use rand_core::SeedableRng;

    fn st(v: &[i64]) -> SplittingType {
        SplittingType::new(v.to_vec())
    }

    #[test]
    fn twisted_cubic_images() {
        let c = CurveMap::rational_normal(Rationals, 3, 3).unwrap();
        let dims: Vec<usize> = (2..=5).map(|d| factor_image(&c, d).unwrap().dim()).collect();
        assert_eq!(dims, vec![0, 0, 3, 4]);
        assert_eq!(d0(&c, &c, 10).unwrap(), Some(4));
    }

    #[test]
    fn formula_examples() {
        let intro = FactorProfile::new(st(&[-6, -5, -5]), st(&[-8, -6])).unwrap();
        let p = predicted_conormal(&[intro.clone(), intro]).unwrap();
        assert_eq!(p.dual().summands(), &[6, 6, 6, 6, 6]);
        let cubic = FactorProfile::new(st(&[-4, -4, -4]), st(&[-5, -5])).unwrap();
        assert_eq!(product_formula(&[cubic.clone(), cubic.clone()], 4), 3);
        assert_eq!(product_formula(&[cubic.clone(), cubic.clone()], 5), 8);
        assert_eq!(predicted_conormal(&[cubic.clone(), cubic.clone()]).unwrap().dual().summands(), &[4, 4, 4, 5, 5]);
        for d in -3..10 {
            assert_eq!(product_formula(core::slice::from_ref(&cubic), d), cubic.conormal.h0(d));
        }
    }

    #[test]
    fn wronskian_of_conic() {
        let f = Rationals;
        let forms: Vec<_> = (0..3).map(|k| BinForm::monomial(f, 2, k, f.one())).collect();
        let w = wronskian(f, &forms).unwrap();
        assert_eq!(w, BinForm::monomial(f, 3, 0, f.from_i64(2)));
    }

    #[test]
    fn twisted_cubic_pair() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let c = CurveMap::rational_normal(f, 3, 3).unwrap();
        let r = verify_product_theorem(&[c.clone(), c], 2..=8, 2, &mut rng).unwrap();
        assert!(r.condition.holds);
        assert!(r.pass);
        assert_eq!(r.predicted_normal.summands(), &[4, 4, 4, 5, 5]);
        assert!(r.trials.iter().all(|t| t.per_d.iter().all(|c| c.observed >= c.formula)));
    }

    // h ∈ H⁰(O(d−2)) is in the image iff hs and ht lie in (s^p, t^p); the
    // condition is monomial.
    fn frobenius_oracle(p: i64, d: i64) -> usize {
        (0..=(d - 2).max(-1))
            .filter(|&a| {
                let b = d - 2 - a;
                (a >= p - 1 || b >= p) && (a >= p || b >= p - 1)
            })
            .count()
    }

    #[test]
    fn frobenius_counterexample() {
        for p in [3u64, 5] {
            let f = PrimeField::new(p).unwrap();
            let q = p as i64;
            let c = frobenius_curve(f).unwrap();
            let prof = FactorProfile::of_curve(&c).unwrap();
            assert_eq!(prof.cotangent.summands(), &[-2 * q, -q - 2, -q - 2]);
            for d in 2..=2 * q + 2 {
                assert_eq!(factor_image(&c, d).unwrap().dim(), frobenius_oracle(q, d), "p = {p}, d = {d}");
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
            let r = verify_product_theorem(&[c.clone(), c], 2..=2 * q + 2, 3, &mut rng).unwrap();
            assert!(!r.pass);
            assert!(!r.condition.holds);
            for t in &r.trials {
                assert_eq!(t.conormal.summands(), &[-2 * q - 1, -2 * q - 1, -2 * q, -q - 2, -q - 2]);
                assert!(!t.per_d.iter().find(|c| c.d == q + 2).unwrap().transversal);
            }
        }
    }

    #[test]
    fn alpha_invariance_of_dimension() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let c = CurveMap::new(
            f,
            vec![(0..4).map(|k| BinForm::monomial(f, 4, [0, 1, 3, 4][k], f.one())).collect()],
        )
        .unwrap();
        for d in 2..7 {
            let v = factor_image(&c, d).unwrap().dim();
            for _ in 0..5 {
                let t = c.compose(&random_alpha(f, &mut rng)).unwrap();
                assert_eq!(factor_image(&t, d).unwrap().dim(), v);
            }
        }
    }
}
