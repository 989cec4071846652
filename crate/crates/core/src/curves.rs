//! Parametrized rational curves in (products of) projective spaces.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bundles::{kernel_model, BundleMap, SplittingType, SubbundleModel};
use crate::error::{Error, Result};
use crate::exact::form::{describe_zero, BinForm};
use crate::exact::{formmat, Field};

/// A map `P¹ → P^{n₁} × … × P^{n_k}`, one block of coordinate forms per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveMap<F: Field> {
    field: F,
    blocks: Vec<Vec<BinForm<F>>>,
    degrees: Vec<usize>,
}

/// Exact base-point and immersion diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCertificate {
    pub basepoint_free: bool,
    pub immersion: bool,
    /// `(block, point)` for every block with a common zero.
    pub basepoints: Vec<(usize, String)>,
    /// A point where the differential drops rank, if any.
    pub ramification: Option<String>,
}

impl CurveCertificate {
    pub fn is_valid(&self) -> bool {
        self.basepoint_free && self.immersion
    }

    pub fn into_result(self) -> Result<Self> {
        if let Some((b, at)) = self.basepoints.first() {
            return Err(Error::InvalidCurve(alloc::format!("block {b} has a base point at {at}")));
        }
        if let Some(at) = &self.ramification {
            return Err(Error::InvalidCurve(alloc::format!("not an immersion at {at}")));
        }
        Ok(self)
    }
}

impl<F: Field> CurveMap<F> {
    /// Each block needs a nonzero form; all nonzero forms in a block share a
    /// positive degree.
    pub fn new(field: F, blocks: Vec<Vec<BinForm<F>>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidCurve(String::from("a curve needs at least one block")));
        }
        let mut degrees = Vec::with_capacity(blocks.len());
        for (j, block) in blocks.iter().enumerate() {
            if block.len() < 2 {
                return Err(Error::InvalidCurve(alloc::format!("block {j} needs at least two coordinates")));
            }
            let mut deg = None;
            for g in block {
                field.check_same(&g.field())?;
                if let Some(e) = g.degree() {
                    match deg {
                        None => deg = Some(e),
                        Some(d0) if d0 != e => {
                            return Err(Error::InvalidCurve(alloc::format!(
                                "block {j} mixes degrees {d0} and {e}"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            match deg {
                Some(e) if e >= 1 => degrees.push(e),
                Some(_) => return Err(Error::InvalidCurve(alloc::format!("block {j} is constant"))),
                None => return Err(Error::InvalidCurve(alloc::format!("block {j} is identically zero"))),
            }
        }
        Ok(CurveMap { field, blocks, degrees })
    }

    /// The curve `(s^e, s^(e−1)t, …, t^e, 0, …, 0)` in `Pⁿ`.
    pub fn rational_normal(field: F, e: usize, n: usize) -> Result<Self> {
        if e == 0 || e > n {
            return Err(Error::InvalidCurve(alloc::format!("need 1 <= e <= n, got e={e}, n={n}")));
        }
        let block = (0..=n)
            .map(|i| if i <= e { BinForm::monomial(field, e, i, field.one()) } else { BinForm::zero(field) })
            .collect();
        Self::new(field, vec![block])
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn blocks(&self) -> &[Vec<BinForm<F>>] {
        &self.blocks
    }

    /// Degree `e_j` of each block.
    pub fn block_degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Dimension `n_j` of each projective factor.
    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len() - 1).collect()
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn num_coordinates(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// All coordinate forms, block after block.
    pub fn coordinates(&self) -> Vec<BinForm<F>> {
        self.blocks.iter().flatten().cloned().collect()
    }

    /// `O(−e_j)` for every coordinate, the Euler-sequence source.
    pub fn euler_degrees(&self) -> Vec<i64> {
        self.blocks
            .iter()
            .zip(&self.degrees)
            .flat_map(|(b, e)| core::iter::repeat_n(-(*e as i64), b.len()))
            .collect()
    }

    /// Precomposes with an automorphism of P¹ (`s ↦ a·s + b·t`, `t ↦ c·s + d·t`).
    pub fn compose(&self, alpha: &[[F::Elem; 2]; 2]) -> Result<Self> {
        let f = self.field;
        let det = f.sub(&f.mul(&alpha[0][0], &alpha[1][1]), &f.mul(&alpha[0][1], &alpha[1][0]));
        if f.is_zero(&det) {
            return Err(Error::SingularAutomorphism);
        }
        let blocks = self.blocks.iter().map(|b| b.iter().map(|g| g.compose(alpha)).collect()).collect();
        Ok(CurveMap { field: f, blocks, degrees: self.degrees.clone() })
    }

    /// Concatenates the blocks of several curves, giving a map to the product.
    pub fn product(curves: &[Self]) -> Result<Self> {
        let first = curves.first().ok_or_else(|| Error::InvalidCurve(String::from("empty product")))?;
        let f = first.field;
        let mut blocks = Vec::new();
        let mut degrees = Vec::new();
        for c in curves {
            f.check_same(&c.field)?;
            blocks.extend(c.blocks.iter().cloned());
            degrees.extend_from_slice(&c.degrees);
        }
        Ok(CurveMap { field: f, blocks, degrees })
    }

    /// The curve given by block `j` alone.
    pub fn factor(&self, j: usize) -> Self {
        CurveMap { field: self.field, blocks: vec![self.blocks[j].clone()], degrees: vec![self.degrees[j]] }
    }

    /// The map `⊕_j O(−e_j)^(n_j+1) → O^k` with one Euler row per block.
    pub fn euler_map(&self) -> BundleMap<F> {
        let f = self.field;
        let source = self.euler_degrees();
        let mut entries = Vec::with_capacity(self.blocks.len());
        let mut col = 0;
        for block in &self.blocks {
            let mut row = vec![BinForm::zero(f); source.len()];
            for g in block {
                row[col] = g.clone();
                col += 1;
            }
            entries.push(row);
        }
        BundleMap::new(f, source, vec![0; self.blocks.len()], entries).expect("Euler rows have consistent degrees")
    }

    /// Euler rows plus the two rows pairing with `∂_s f` and `∂_t f`.
    pub fn conormal_map(&self) -> BundleMap<F> {
        let f = self.field;
        let coords = self.coordinates();
        let ds: Vec<BinForm<F>> = coords.iter().map(BinForm::partial_s).collect();
        let dt: Vec<BinForm<F>> = coords.iter().map(BinForm::partial_t).collect();
        let derivative = BundleMap::new(f, self.euler_degrees(), vec![-1, -1], vec![ds, dt])
            .expect("derivative rows have consistent degrees");
        self.euler_map().stack(&derivative).expect("same source")
    }
}

fn point_text<F: Field>(g: &BinForm<F>) -> String {
    match g.find_zero() {
        Some(z) => describe_zero(&g.field(), &z),
        None => alloc::format!("{g}"),
    }
}

/// Checks that every block is base-point free and that the curve is immersed.
///
/// The differential is injective at a point iff for some block the rows
/// `f, ∂_s f, ∂_t f` span a plane there, so the immersion certificate is the
/// gcd of all 2×2 minors of those three rows, taken over all blocks.
pub fn validate_curve<F: Field>(c: &CurveMap<F>) -> Result<CurveCertificate> {
    let f = c.field();
    let mut basepoints = Vec::new();
    for (j, block) in c.blocks().iter().enumerate() {
        let g = BinForm::gcd_all(f, block.iter());
        if !g.is_constant() {
            basepoints.push((j, point_text(&g)));
        }
    }
    let mut minors_gcd = BinForm::zero(f);
    'blocks: for block in c.blocks() {
        let rows = [
            block.clone(),
            block.iter().map(BinForm::partial_s).collect::<Vec<_>>(),
            block.iter().map(BinForm::partial_t).collect::<Vec<_>>(),
        ];
        for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
            for pair in formmat::combinations(block.len(), 2) {
                let (a, b) = (pair[0], pair[1]);
                let m = rows[r1][a].mul(&rows[r2][b]).sub(&rows[r1][b].mul(&rows[r2][a]))?;
                if m.is_zero() {
                    continue;
                }
                minors_gcd = minors_gcd.gcd(&m);
                if minors_gcd.is_constant() {
                    break 'blocks;
                }
            }
        }
    }
    let immersion = minors_gcd.is_constant();
    let ramification = if immersion {
        None
    } else if minors_gcd.is_zero() {
        Some(String::from("every point"))
    } else {
        Some(point_text(&minors_gcd))
    };
    Ok(CurveCertificate { basepoint_free: basepoints.is_empty(), immersion, basepoints, ramification })
}

/// `f*Ω` of the product of projective spaces, as the kernel of the Euler rows.
pub fn euler_cotangent_model<F: Field>(c: &CurveMap<F>) -> Result<SubbundleModel<F>> {
    validate_curve(c)?.into_result()?;
    kernel_model(&c.euler_map())
}

/// The conormal bundle of the curve in the product of projective spaces.
pub fn conormal_pn<F: Field>(c: &CurveMap<F>) -> Result<SubbundleModel<F>> {
    validate_curve(c)?.into_result()?;
    let model = kernel_model(&c.conormal_map())?;
    let expected_rank = c.block_dims().iter().sum::<usize>() - 1;
    if model.rank() != expected_rank {
        return Err(Error::RankDrop(alloc::format!(
            "conormal model has rank {}, expected {expected_rank}",
            model.rank()
        )));
    }
    Ok(model)
}

/// The coordinate `h` of `Σ g_l df_l = h·(s dt − t ds)` for a section tuple
/// `g` of `f*Ω(d)` in Euler coordinates; `h` has degree `d − 2`.
pub fn differential_form<F: Field>(c: &CurveMap<F>, g: &[BinForm<F>]) -> Result<BinForm<F>> {
    let f = c.field();
    let coords = c.coordinates();
    if g.len() != coords.len() {
        return Err(Error::Shape(alloc::format!("expected {} forms, got {}", coords.len(), g.len())));
    }
    let mut a = BinForm::zero(f);
    let mut b = BinForm::zero(f);
    for (gl, fl) in g.iter().zip(&coords) {
        a = a.add(&gl.try_mul(&fl.partial_t())?)?;
        b = b.add(&gl.try_mul(&fl.partial_s())?)?;
    }
    let h = a.exact_div(&BinForm::s(f))?;
    let h2 = b.exact_div(&BinForm::t(f))?.neg();
    if h != h2 {
        return Err(Error::InexactDivision);
    }
    Ok(h)
}

/// A section of the conormal bundle of the canonical rational normal curve,
/// given at a fixed twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSection<F: Field> {
    pub label: String,
    pub twist: i64,
    pub forms: Vec<BinForm<F>>,
}

/// `dx_i` (`e < i ≤ n`) at twist `e` and
/// `q_i = s²dx_{i+2} + t²dx_i − 2st·dx_{i+1}` (`0 ≤ i ≤ e−2`) at twist `e+2`.
pub fn rnc_conormal_basis<F: Field>(field: F, e: usize, n: usize) -> Vec<BasisSection<F>> {
    let mut out = Vec::new();
    for i in e + 1..=n {
        let mut forms = vec![BinForm::zero(field); n + 1];
        forms[i] = BinForm::one(field);
        out.push(BasisSection { label: alloc::format!("dx_{i}"), twist: e as i64, forms });
    }
    for i in 0..e.saturating_sub(1) {
        out.push(BasisSection { label: alloc::format!("q_{i}"), twist: e as i64 + 2, forms: q_section(field, n, i) });
    }
    out
}

fn q_section<F: Field>(field: F, n: usize, i: usize) -> Vec<BinForm<F>> {
    let mut forms = vec![BinForm::zero(field); n + 1];
    forms[i + 2] = BinForm::monomial(field, 2, 0, field.one());
    forms[i] = BinForm::monomial(field, 2, 2, field.one());
    forms[i + 1] = BinForm::monomial(field, 2, 1, field.from_i64(-2));
    forms
}

/// `[−e−2]^(e−1) ⊕ [−e]^(n−e)`
pub fn rnc_conormal_formula(e: usize, n: usize) -> SplittingType {
    let mut v = vec![-(e as i64) - 2; e.saturating_sub(1)];
    v.extend(core::iter::repeat_n(-(e as i64), n - e));
    SplittingType::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};

    fn q(c: &[i64]) -> BinForm<Rationals> {
        BinForm::from_i64s(Rationals, c)
    }

    #[test]
    fn twisted_cubic_is_valid() {
        let c = CurveMap::rational_normal(Rationals, 3, 3).unwrap();
        let cert = validate_curve(&c).unwrap();
        assert!(cert.is_valid());
        assert_eq!(euler_cotangent_model(&c).unwrap().splitting().summands(), &[-4, -4, -4]);
        assert_eq!(conormal_pn(&c).unwrap().splitting().summands(), &[-5, -5]);
    }

    #[test]
    fn basepoint_is_pinpointed() {
        let c = CurveMap::new(Rationals, vec![vec![q(&[1, 0, 0]), q(&[0, 1, 0])]]).unwrap();
        let cert = validate_curve(&c).unwrap();
        assert!(!cert.basepoint_free);
        assert_eq!(cert.basepoints, vec![(0, String::from("(0:1)"))]);
    }

    #[test]
    fn line_cotangent_and_trivialization() {
        let line = CurveMap::new(Rationals, vec![vec![q(&[1, 0]), q(&[0, 1])]]).unwrap();
        assert_eq!(euler_cotangent_model(&line).unwrap().splitting().summands(), &[-2]);
        let h = differential_form(&line, &[q(&[0, 1]), q(&[-1, 0])]).unwrap();
        assert_eq!(h, q(&[-1]));
    }

    #[test]
    fn charp_curve_is_immersed() {
        let f = PrimeField::new(3).unwrap();
        let c = CurveMap::new(
            f,
            vec![vec![
                BinForm::monomial(f, 4, 0, 1),
                BinForm::monomial(f, 4, 1, 1),
                BinForm::monomial(f, 4, 3, 1),
                BinForm::monomial(f, 4, 4, 1),
            ]],
        )
        .unwrap();
        assert!(validate_curve(&c).unwrap().is_valid());
    }

    #[test]
    fn frobenius_like_curve_is_not_immersed() {
        // (s³, t³) in characteristic 3 has vanishing differential
        let f = PrimeField::new(3).unwrap();
        let c = CurveMap::new(f, vec![vec![BinForm::monomial(f, 3, 0, 1), BinForm::monomial(f, 3, 3, 1)]]).unwrap();
        let cert = validate_curve(&c).unwrap();
        assert!(cert.basepoint_free && !cert.immersion);
    }

    #[test]
    fn conormal_formula_small_cases() {
        for (e, n) in [(3, 3), (4, 4), (3, 5)] {
            let c = CurveMap::rational_normal(Rationals, e, n).unwrap();
            let model = conormal_pn(&c).unwrap();
            assert_eq!(model.splitting(), rnc_conormal_formula(e, n));
            for sec in rnc_conormal_basis(Rationals, e, n) {
                assert!(model.express(&sec.forms, sec.twist).is_ok(), "{}", sec.label);
            }
        }
    }

    #[test]
    fn conormal_sections_have_zero_differential() {
        let c = CurveMap::rational_normal(Rationals, 3, 4).unwrap();
        for sec in rnc_conormal_basis(Rationals, 3, 4) {
            assert!(differential_form(&c, &sec.forms).unwrap().is_zero());
        }
    }

    #[test]
    fn conic_pair_cotangent() {
        let f = PrimeField::new(32003).unwrap();
        let conic = CurveMap::rational_normal(f, 2, 2).unwrap();
        let pair = CurveMap::product(&[conic.clone(), conic]).unwrap();
        let model = euler_cotangent_model(&pair).unwrap();
        assert_eq!(model.rank(), 4);
        assert_eq!(model.splitting().degree(), -12);
    }

    #[test]
    fn singular_alpha_is_rejected() {
        let c = CurveMap::rational_normal(Rationals, 2, 2).unwrap();
        let one = Rationals.one();
        assert_eq!(c.compose(&[[one.clone(), one.clone()], [one.clone(), one]]), Err(Error::SingularAutomorphism));
    }
}
