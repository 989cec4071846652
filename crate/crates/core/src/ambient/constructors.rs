use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::along::{validate_along_curve, AlongCertificate};
use super::{pluecker_subsets, weighted_monomials, Ambient, AmbientKind};
use crate::bundles::{BundleMap, SplittingType, SubbundleModel};
use crate::curves::CurveMap;
use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::{formmat, EchelonBasis, Field};

/// The explicit rational curve in a flag variety with its certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCurve<F: Field> {
    pub curve: CurveMap<F>,
    pub ambient: Ambient<F>,
    /// `k_i × n` matrices whose row spans are the subspaces, per factor.
    pub frames: Vec<Vec<Vec<BinForm<F>>>>,
    /// Dimension of the span of all products of one coordinate per factor.
    pub span_dim: usize,
    /// Splitting of the universal subbundle on the top factor.
    pub tautological: SplittingType,
    pub along: AlongCertificate,
}

/// A monomial curve in a weighted projective space, seen in the degree-`a`
/// embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpsCurve<F: Field> {
    pub curve: CurveMap<F>,
    pub ambient: Ambient<F>,
    pub b: Option<Vec<u32>>,
    /// The weighted coordinates `f_i` of degree `m·a_i`.
    pub weighted: Vec<BinForm<F>>,
    pub span_dim: usize,
    pub along: AlongCertificate,
}

/// Dimension of the span of `Π_j x_{j,i_j}(s,t)` over all choices of one
/// coordinate per block.
pub fn product_span_dim<F: Field>(c: &CurveMap<F>) -> usize {
    let f = c.field();
    let mut basis = vec![BinForm::one(f)];
    let mut degree = 0;
    for (block, e) in c.blocks().iter().zip(c.block_degrees()) {
        degree += e;
        let mut echelon = EchelonBasis::new(f, degree + 1);
        let mut next = Vec::new();
        for g in &basis {
            for x in block {
                let p = g.mul(x);
                if !p.is_zero() && echelon.insert(&p.coeffs_in_degree(degree)) {
                    next.push(p);
                }
            }
        }
        basis = next;
    }
    basis.len()
}

fn frame_rows<F: Field>(field: F, ks: &[usize], n: usize) -> Vec<Vec<Vec<BinForm<F>>>> {
    let r = ks.len();
    let top = ks[r - 1];
    let width = n - top;
    let mut frames = vec![Vec::new(); r];
    frames[r - 1] = (0..top)
        .map(|j| {
            let mut row = vec![BinForm::zero(field); n];
            for i in 0..=width {
                row[i + j] = BinForm::monomial(field, width, i, field.one());
            }
            row
        })
        .collect();
    for level in (0..r - 1).rev() {
        let delta = ks[level + 1] - ks[level];
        let upper = frames[level + 1].clone();
        let sd = BinForm::s(field).pow(delta);
        let td = BinForm::t(field).pow(delta);
        frames[level] = (0..ks[level])
            .map(|j| {
                upper[j]
                    .iter()
                    .zip(&upper[j + delta])
                    .map(|(a, b)| {
                        let x = sd.mul(a);
                        let y = td.mul(b);
                        if x.is_zero() {
                            y
                        } else if y.is_zero() {
                            x
                        } else {
                            x.add(&y).expect("equal degrees")
                        }
                    })
                    .collect()
            })
            .collect();
    }
    frames
}

/// The curve whose flag at `(s:t)` is spanned by the frame rows, in Plücker
/// coordinates.
pub fn flag_curve<F: Field>(field: F, ks: &[usize], n: usize) -> Result<FlagCurve<F>> {
    let ambient = Ambient::construct(field, AmbientKind::Flag { ks: ks.to_vec(), n })?;
    let frames = frame_rows(field, ks, n);
    let mut blocks = Vec::with_capacity(ks.len());
    for (frame, &k) in frames.iter().zip(ks) {
        let mut block = Vec::new();
        for cols in pluecker_subsets(k, n) {
            let rows: Vec<usize> = (0..k).collect();
            block.push(formmat::det(field, &formmat::submatrix(frame, &rows, &cols))?);
        }
        blocks.push(block);
    }
    let curve = CurveMap::new(field, blocks)?;
    for (e, &k) in curve.block_degrees().iter().zip(ks) {
        if *e != k * (n - k) {
            return Err(Error::Verification(alloc::format!("Plücker degree {e} on G({k},{n})")));
        }
    }
    let along = validate_along_curve(&ambient, &curve)?;
    let span_dim = product_span_dim(&curve);
    let top = *ks.last().expect("nonempty");
    let taut = &frames[ks.len() - 1];
    let entries: Vec<Vec<BinForm<F>>> = (0..n).map(|i| taut.iter().map(|row| row[i].clone()).collect()).collect();
    let inclusion = BundleMap::new(field, vec![top as i64 - n as i64; top], vec![0; n], entries)?;
    let tautological = SubbundleModel::from_generators(inclusion)?.splitting();
    Ok(FlagCurve { curve, ambient, frames, span_dim, tautological, along })
}

/// Rational normal curves of the given degrees in a product of projective
/// spaces of the same dimensions.
pub fn product_curve<F: Field>(field: F, degrees: &[usize]) -> Result<(CurveMap<F>, Ambient<F>)> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::InvalidCurve(alloc::format!("degrees must be positive, got {degrees:?}")));
    }
    let parts = degrees.iter().map(|&e| CurveMap::rational_normal(field, e, e)).collect::<Result<Vec<_>>>()?;
    let curve = CurveMap::product(&parts)?;
    let ambient = Ambient::construct(field, AmbientKind::Product { dims: degrees.to_vec() })?;
    Ok((curve, ambient))
}

fn exponent(c: &[u32], b: &[u32]) -> u64 {
    c.iter().zip(b).map(|(x, y)| *x as u64 * *y as u64).sum()
}

/// Checks that every `0 ≤ ℓ ≤ m·a` is `Σ cᵢbᵢ` for a monomial `Πxᵢ^cᵢ` of
/// weighted degree `a`.
pub fn check_b_sequence(weights: &[u32], a: u32, b: &[u32]) -> Result<()> {
    if b.len() != weights.len() {
        return Err(Error::Shape(alloc::format!("{} exponents for {} weights", b.len(), weights.len())));
    }
    let m = weights.len() as u32 - 1;
    if let Some(i) = (0..b.len()).find(|&i| b[i] > m * weights[i]) {
        return Err(Error::Hypothesis(alloc::format!("b_{i} = {} exceeds m·a_{i} = {}", b[i], m * weights[i])));
    }
    let mut hit = vec![false; (m * a) as usize + 1];
    for c in weighted_monomials(weights, a) {
        hit[exponent(&c, b) as usize] = true;
    }
    match hit.iter().position(|h| !h) {
        Some(ell) => Err(Error::InexpressibleExponent { ell: ell as u64 }),
        None => Ok(()),
    }
}

/// The lexicographically first valid b-sequence, if any.
pub fn b_search(weights: &[u32], a: u32) -> Option<Vec<u32>> {
    if weights.len() < 2 {
        return None;
    }
    let m = weights.len() as u32 - 1;
    let bounds: Vec<u32> = weights.iter().map(|w| m * w).collect();
    let mut b = vec![0u32; weights.len()];
    loop {
        if check_b_sequence(weights, a, &b).is_ok() {
            return Some(b);
        }
        let mut i = b.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if b[i] < bounds[i] {
                b[i] += 1;
                break;
            }
            b[i] = 0;
        }
    }
}

fn through_embedding<F: Field>(
    field: F,
    weights: &[u32],
    a: u32,
    weighted: Vec<BinForm<F>>,
    b: Option<Vec<u32>>,
) -> Result<WpsCurve<F>> {
    let ambient = Ambient::construct(field, AmbientKind::Wps { weights: weights.to_vec(), a })?;
    let m = weights.len() - 1;
    let coords: Vec<BinForm<F>> = weighted_monomials(weights, a)
        .iter()
        .map(|c| {
            c.iter().zip(&weighted).fold(BinForm::one(field), |acc, (e, g)| acc.mul(&g.pow(*e as usize)))
        })
        .collect();
    let curve = CurveMap::new(field, vec![coords])?;
    let span_dim = product_span_dim(&curve);
    let degree = m * a as usize;
    if curve.total_degree() != degree || span_dim != degree + 1 {
        return Err(Error::Verification(alloc::format!(
            "image has degree {} and spans a space of dimension {}, not a rational normal curve of degree {degree}",
            curve.total_degree(),
            span_dim as i64 - 1
        )));
    }
    let along = validate_along_curve(&ambient, &curve)?;
    Ok(WpsCurve { curve, ambient, b, weighted, span_dim, along })
}

/// `xᵢ = s^bᵢ t^(m·aᵢ − bᵢ)` composed with the degree-`a` embedding.
pub fn wps_curve<F: Field>(field: F, weights: &[u32], a: u32, b: &[u32]) -> Result<WpsCurve<F>> {
    check_b_sequence(weights, a, b)?;
    let m = weights.len() - 1;
    let weighted = weights
        .iter()
        .zip(b)
        .map(|(w, bi)| {
            let deg = m * *w as usize;
            BinForm::monomial(field, deg, deg - *bi as usize, field.one())
        })
        .collect();
    through_embedding(field, weights, a, weighted, Some(b.to_vec()))
}

/// A curve with random weighted coordinates of degrees `m·aᵢ`.
pub fn wps_general_curve<F: Field, R: RngCore + ?Sized>(
    field: F,
    weights: &[u32],
    a: u32,
    rng: &mut R,
) -> Result<WpsCurve<F>> {
    let m = weights.len().saturating_sub(1);
    let weighted = weights
        .iter()
        .map(|w| {
            let deg = m * *w as usize;
            BinForm::from_coeffs(field, (0..=deg).map(|_| field.random(rng)).collect())
        })
        .collect();
    through_embedding(field, weights, a, weighted, None)
}
