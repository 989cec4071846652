use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Ambient;
use crate::bundles::{cokernel_model, kernel_splitting, BundleMap, QuotientModel, SplittingType, SubbundleModel};
use crate::curves::{conormal_pn, euler_cotangent_model, validate_curve, CurveMap};
use crate::error::{Error, Result};
use crate::exact::form::{describe_zero, BinForm, CommonZero};
use crate::exact::{formmat, Field};

/// Evidence that an ambient is smooth of the expected dimension along a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlongCertificate {
    pub codim: usize,
    pub generic_rank: usize,
    /// The Jacobian image is saturated, so its rank is the same at every point.
    pub constant_rank: bool,
    /// Jacobian ranks at a few fixed points, as `((s:t), rank)`.
    pub spot_ranks: Vec<(String, usize)>,
}

/// `TX|_C` computed from the Euler model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentData<F: Field> {
    pub euler_model: SubbundleModel<F>,
    /// Jacobian columns in the coordinates of the Euler model.
    pub gradients: BundleMap<F>,
    pub cotangent: QuotientModel<F>,
    pub tangent: SplittingType,
    pub anticanonical_degree: i64,
}

/// `N_{C|X}` computed from the conormal bundle in the embedding space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConormalData<F: Field> {
    pub conormal_pn: SubbundleModel<F>,
    pub gradients: BundleMap<F>,
    /// `N*_{C|P} → N*_{C|X}`.
    pub quotient: QuotientModel<F>,
    pub conormal: SplittingType,
    pub normal: SplittingType,
}

fn check_blocks<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<()> {
    let dims: Vec<usize> = c.blocks().iter().map(Vec::len).collect();
    if dims != x.blocks {
        return Err(Error::Shape(alloc::format!("curve blocks {dims:?} do not match ambient blocks {:?}", x.blocks)));
    }
    x.field.check_same(&c.field())
}

/// `D_q·C` for equation `q`.
fn equation_degree<F: Field>(x: &Ambient<F>, c: &CurveMap<F>, q: usize) -> i64 {
    x.equations[q].multidegree.iter().zip(c.block_degrees()).map(|(d, e)| *d as i64 * *e as i64).sum()
}

/// `(∂F_q/∂x_i)(f)` for every coordinate `i`.
pub fn gradient_tuple<F: Field>(x: &Ambient<F>, c: &CurveMap<F>, q: usize) -> Result<Vec<BinForm<F>>> {
    check_blocks(x, c)?;
    let coords = c.coordinates();
    let poly = &x.equations[q].poly;
    (0..coords.len()).map(|i| poly.partial(i).pullback(&coords)).collect()
}

/// The Jacobian `⊕_q O(−D_q·C) → ⊕_j O(−e_j)^(n_j+1)`, one column per equation.
pub fn gradient_map<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<BundleMap<F>> {
    let f = x.field;
    let target = c.euler_degrees();
    let source: Vec<i64> = (0..x.equations.len()).map(|q| -equation_degree(x, c, q)).collect();
    let mut entries = vec![Vec::with_capacity(source.len()); target.len()];
    for q in 0..x.equations.len() {
        for (i, g) in gradient_tuple(x, c, q)?.into_iter().enumerate() {
            entries[i].push(g);
        }
    }
    if target.is_empty() {
        return Ok(BundleMap::zero(f, source, target));
    }
    BundleMap::new(f, source, target, entries)
}

fn point_name<F: Field>(field: F, s: &F::Elem, t: &F::Elem) -> String {
    alloc::format!("({}:{})", field.render(s), field.render(t))
}

/// Certifies containment and constant Jacobian rank `codim X` along `C`.
pub fn validate_along_curve<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<AlongCertificate> {
    check_blocks(x, c)?;
    validate_curve(c)?.into_result()?;
    let f = x.field;
    let coords = c.coordinates();
    for (q, eq) in x.equations.iter().enumerate() {
        if !eq.poly.pullback(&coords)?.is_zero() {
            return Err(Error::NotContained { index: q, equation: x.render_equation(q) });
        }
    }
    let codim = x.codim();
    let j = gradient_map(x, c)?;
    let cert = j.generic_rank();
    if cert.rank != codim {
        return Err(Error::RankDrop(alloc::format!(
            "Jacobian has generic rank {} along the curve but the codimension is {codim}",
            cert.rank
        )));
    }
    let torsion = image_torsion(&j)?;
    if torsion != 0 {
        let at = rank_drop_point(&j, codim, &cert.rows, &cert.cols)?;
        return Err(Error::RankDrop(alloc::format!(
            "Jacobian rank drops below {codim} at {at} (cokernel torsion of length {torsion})"
        )));
    }
    let points = [(f.one(), f.zero()), (f.zero(), f.one()), (f.one(), f.one()), (f.one(), f.from_i64(2))];
    let mut spot_ranks = Vec::new();
    for (s0, t0) in &points {
        if f.is_zero(s0) && f.is_zero(t0) {
            continue;
        }
        let rank = if codim == 0 { 0 } else { j.eval(s0, t0)?.rank() };
        if rank != codim {
            return Err(Error::RankDrop(alloc::format!("Jacobian rank {rank} at {}", point_name(f, s0, t0))));
        }
        spot_ranks.push((point_name(f, s0, t0), rank));
    }
    Ok(AlongCertificate { codim, generic_rank: cert.rank, constant_rank: true, spot_ranks })
}

// Length of the torsion of coker J: the degree of the saturated image minus
// the degree of the image. It vanishes iff J has constant rank on P¹.
fn image_torsion<F: Field>(j: &BundleMap<F>) -> Result<i64> {
    if j.cols() == 0 || j.rows() == 0 {
        return Ok(0);
    }
    let image = j.source().iter().sum::<i64>() - kernel_splitting(j)?.degree();
    let saturated = j.target().iter().sum::<i64>() + kernel_splitting(&j.transpose())?.degree();
    Ok(saturated - image)
}

// Some point where the rank drops: a zero of the certificate minor at which
// the evaluated rank is too small.
fn rank_drop_point<F: Field>(j: &BundleMap<F>, k: usize, rows: &[usize], cols: &[usize]) -> Result<String> {
    let f = j.field();
    let mut g = formmat::det(f, &formmat::submatrix(j.entries(), rows, cols))?;
    while let Some(z) = g.find_zero() {
        let CommonZero::Point(s0, t0) = &z else {
            return Ok(describe_zero(&f, &z));
        };
        if j.eval(s0, t0)?.rank() < k {
            return Ok(describe_zero(&f, &z));
        }
        let linear = BinForm::from_coeffs(f, vec![f.neg(t0), s0.clone()]);
        while let Ok(q) = g.exact_div(&linear) {
            g = q;
        }
    }
    Ok(String::from("a point over an extension of the base field"))
}

fn express_columns<F: Field>(
    model: &SubbundleModel<F>,
    j: &BundleMap<F>,
    what: &str,
) -> Result<BundleMap<F>> {
    let f = model.field();
    let source = j.source().to_vec();
    let mut entries = vec![Vec::with_capacity(source.len()); model.rank()];
    for (q, d) in source.iter().enumerate() {
        let u = model.express(&j.column(q), -d).map_err(|e| match e {
            Error::NotInModel(_) => {
                Error::NotInModel(alloc::format!("gradient of equation {q} is not a section of {what}"))
            }
            other => other,
        })?;
        for (l, g) in u.into_iter().enumerate() {
            entries[l].push(g);
        }
    }
    if model.rank() == 0 {
        return Ok(BundleMap::zero(f, source, Vec::new()));
    }
    BundleMap::new(f, source, model.degrees().to_vec(), entries)
}

fn cokernel_or_identity<F: Field>(u: &BundleMap<F>) -> Result<QuotientModel<F>> {
    if u.cols() == 0 {
        let f = u.field();
        let dual: Vec<i64> = u.target().iter().map(|a| -a).collect();
        let annihilator = SubbundleModel::from_generators(BundleMap::identity(f, dual))?;
        let quotient = annihilator.generators().transpose();
        return Ok(QuotientModel { quotient, annihilator });
    }
    cokernel_model(u)
}

/// `TX|_C` as the dual of `f*Ω_P / N*_X`, cross-checked against `−K_X·C`.
pub fn tangent_splitting<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<TangentData<F>> {
    validate_along_curve(x, c)?;
    let euler_model = euler_cotangent_model(c)?;
    let j = gradient_map(x, c)?;
    let gradients = express_columns(&euler_model, &j, "the cotangent bundle of the embedding space")?;
    let cotangent = cokernel_or_identity(&gradients)?;
    let tangent = cotangent.splitting().dual();
    let anticanonical_degree = x.anticanonical.dot(c)?;
    if tangent.rank() != x.dim {
        return Err(Error::Verification(alloc::format!("tangent bundle has rank {}, expected {}", tangent.rank(), x.dim)));
    }
    if tangent.degree() != anticanonical_degree {
        return Err(Error::Verification(alloc::format!(
            "tangent bundle has degree {}, but the anticanonical class gives {anticanonical_degree}",
            tangent.degree()
        )));
    }
    Ok(TangentData { euler_model, gradients, cotangent, tangent, anticanonical_degree })
}

/// `N*_{C|X}` as the quotient of `N*_{C|P}` by the Jacobian columns.
pub fn conormal_in_ambient<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<ConormalData<F>> {
    validate_along_curve(x, c)?;
    if x.dim < 2 {
        return Err(Error::Hypothesis(alloc::format!("the ambient must have dimension at least 2, got {}", x.dim)));
    }
    let model = conormal_pn(c)?;
    let j = gradient_map(x, c)?;
    let gradients = express_columns(&model, &j, "the conormal bundle of the curve")?;
    let quotient = cokernel_or_identity(&gradients)?;
    let conormal = quotient.splitting();
    let normal = conormal.dual();
    if normal.rank() != x.dim - 1 {
        return Err(Error::RankDrop(alloc::format!("normal bundle has rank {}, expected {}", normal.rank(), x.dim - 1)));
    }
    let expected = x.anticanonical.dot(c)? - 2;
    if normal.degree() != expected {
        return Err(Error::Verification(alloc::format!(
            "normal bundle has degree {}, expected {expected}",
            normal.degree()
        )));
    }
    Ok(ConormalData { conormal_pn: model, gradients, quotient, conormal, normal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{AmbientKind, DivisorClass, Poly};
    use crate::exact::{PrimeField, Rationals};

    fn pn(n: usize) -> Ambient<Rationals> {
        Ambient::construct(Rationals, AmbientKind::Projective { n }).unwrap()
    }

    #[test]
    fn twisted_cubic_in_p3() {
        let c = CurveMap::rational_normal(Rationals, 3, 3).unwrap();
        let cert = validate_along_curve(&pn(3), &c).unwrap();
        assert_eq!(cert.codim, 0);
        let t = tangent_splitting(&pn(3), &c).unwrap();
        assert_eq!(t.tangent.summands(), &[4, 4, 4]);
        assert_eq!(t.anticanonical_degree, 12);
    }

    #[test]
    fn quartic_normal_bundle_in_p4() {
        let c = CurveMap::rational_normal(Rationals, 4, 4).unwrap();
        let n = conormal_in_ambient(&pn(4), &c).unwrap();
        assert_eq!(n.normal.summands(), &[6, 6, 6]);
    }

    #[test]
    fn line_in_p1() {
        let c = CurveMap::rational_normal(Rationals, 1, 1).unwrap();
        assert_eq!(tangent_splitting(&pn(1), &c).unwrap().tangent.summands(), &[2]);
    }

    #[test]
    fn diagonal_in_p1xp1() {
        let x = Ambient::construct(Rationals, AmbientKind::Product { dims: vec![1, 1] }).unwrap();
        let line = CurveMap::rational_normal(Rationals, 1, 1).unwrap();
        let c = CurveMap::product(&[line.clone(), line]).unwrap();
        assert_eq!(conormal_in_ambient(&x, &c).unwrap().normal.summands(), &[2]);
        assert_eq!(tangent_splitting(&x, &c).unwrap().tangent.summands(), &[2, 2]);
    }

    #[test]
    fn conic_on_a_quadric_surface() {
        // x0 x2 − x1² ⊂ P³ contains the conic (s², st, t², 0)
        let f = Rationals;
        let v = |i| Poly::var(f, 4, i);
        let quadric = v(0).mul(&v(2)).sub(&v(1).mul(&v(1)));
        let p3 = pn(3);
        let cone = p3
            .intersect(core::slice::from_ref(&quadric), &[DivisorClass::hyperplane_multiple(2)])
            .unwrap();
        let conic = CurveMap::new(
            f,
            vec![vec![
                BinForm::from_i64s(f, &[1, 0, 0]),
                BinForm::from_i64s(f, &[0, 1, 0]),
                BinForm::from_i64s(f, &[0, 0, 1]),
                BinForm::zero(f),
            ]],
        )
        .unwrap();
        let t = tangent_splitting(&cone, &conic).unwrap();
        assert_eq!(t.tangent.degree(), 4);
        // a line off the cone is rejected by name
        let line = CurveMap::new(f, vec![vec![BinForm::s(f), BinForm::t(f), BinForm::zero(f), BinForm::zero(f)]]).unwrap();
        match validate_along_curve(&cone, &line) {
            Err(Error::NotContained { index: 0, equation }) => assert!(equation.contains("x1^2"), "{equation}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vertex_of_a_cone_is_reported() {
        let f = PrimeField::new(101).unwrap();
        let v = |i| Poly::var(f, 4, i);
        let quadric = v(0).mul(&v(2)).sub(&v(1).mul(&v(1)));
        let p3 = Ambient::construct(f, AmbientKind::Projective { n: 3 }).unwrap();
        let cone = p3.intersect(&[quadric], &[DivisorClass::hyperplane_multiple(2)]).unwrap();
        // a ruling through the vertex (0:0:0:1), reached at s = 0
        let line = CurveMap::new(f, vec![vec![BinForm::zero(f), BinForm::zero(f), BinForm::s(f), BinForm::t(f)]]).unwrap();
        let err = validate_along_curve(&cone, &line).unwrap_err();
        assert!(matches!(err, Error::RankDrop(ref m) if m.contains("(0:1)")), "{err}");
    }
}
