//! Complete intersections containing a curve and their normal bundles.

mod rathmann;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::ambient::poly::monomials;
use crate::ambient::{conormal_in_ambient, tangent_splitting, Ambient, AmbientKind, ConormalData, DivisorClass, Poly};
use crate::bundles::{forms_to_vector, generic_kernel_splitting, kernel_splitting, BundleMap, SplittingType};
use crate::curves::CurveMap;
use crate::error::{Error, Result};
use crate::exact::{Field, Mat};

pub use rathmann::{quadric_f, rathmann_check, Preimage, RathmannReport};

/// A basis of the forms of one class vanishing on a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSections<F: Field> {
    pub class: DivisorClass,
    pub basis: Vec<Poly<F>>,
    pub monomials: usize,
    /// Rank of restriction to the curve; `D·C + 1` when it is surjective.
    pub restriction_rank: usize,
    pub curve_degree: i64,
}

impl<F: Field> IdealSections<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn restriction_surjective(&self) -> bool {
        self.restriction_rank as i64 == self.curve_degree + 1
    }

    /// `Σ cᵢ Fᵢ` for a coefficient vector in basis order.
    pub fn combine(&self, coeffs: &[F::Elem]) -> Poly<F> {
        let mut acc = Poly::zero(self.basis[0].field(), self.basis[0].nvars());
        for (p, c) in self.basis.iter().zip(coeffs) {
            acc = acc.add(&p.scale(c));
        }
        acc
    }
}

fn check_class<F: Field>(x: &Ambient<F>, d: &DivisorClass) -> Result<Vec<u32>> {
    if d.multidegree.len() != x.blocks.len() || !d.is_nonnegative() {
        return Err(Error::Hypothesis(alloc::format!(
            "class {:?} must be a nonnegative multidegree with {} entries",
            d.multidegree,
            x.blocks.len()
        )));
    }
    Ok(d.multidegree.iter().map(|v| *v as u32).collect())
}

/// Forms of multidegree `D` whose pullback to the curve vanishes.
pub fn ideal_sections<F: Field>(x: &Ambient<F>, c: &CurveMap<F>, d: &DivisorClass) -> Result<IdealSections<F>> {
    let f = x.field;
    let md = check_class(x, d)?;
    let dc = d.dot(c);
    let monos = monomials(&x.blocks, &md);
    let coords = c.coordinates();
    let mut columns = Vec::with_capacity(monos.len());
    for e in &monos {
        let g = Poly::monomial(f, e.clone(), f.one()).pullback(&coords)?;
        columns.push(if g.is_zero() { vec![f.zero(); dc as usize + 1] } else { g.coeffs_in_degree(dc as usize) });
    }
    let m = Mat::from_columns(f, dc as usize + 1, &columns)?;
    let basis = m
        .kernel()
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(f, coords.len());
            for (e, c) in monos.iter().zip(&v) {
                p = p.add(&Poly::monomial(f, e.clone(), c.clone()));
            }
            p
        })
        .collect();
    Ok(IdealSections {
        class: d.clone(),
        basis,
        monomials: monos.len(),
        restriction_rank: m.rank(),
        curve_degree: dc,
    })
}

/// Outcome of the conormal surjectivity test for one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NstarReport {
    pub class: DivisorClass,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub corank: usize,
    pub surjective: bool,
}

/// Matrix of `F ↦ image of dF in H⁰(N*_{C|X}(D·C))`, one column per form.
fn nstar_matrix<F: Field>(
    x: &Ambient<F>,
    c: &CurveMap<F>,
    data: &ConormalData<F>,
    forms: &[Poly<F>],
    dc: i64,
) -> Result<Mat<F>> {
    let f = x.field;
    let coords = c.coordinates();
    let tuples = forms
        .iter()
        .map(|p| (0..coords.len()).map(|i| p.partial(i).pullback(&coords)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let quotient = &data.quotient.quotient;
    let target = quotient.target().to_vec();
    let rows = target.iter().map(|a| crate::bundles::h0_line(*a, dc)).sum();
    let mut columns = Vec::with_capacity(forms.len());
    for (k, u) in data.conormal_pn.express_many(&tuples, dc).into_iter().enumerate() {
        let u = u.map_err(|e| Error::Verification(alloc::format!("gradient of form {k}: {e}")))?;
        columns.push(forms_to_vector(f, &target, dc, &quotient.apply(&u)?)?);
    }
    Mat::from_columns(f, rows, &columns)
}

/// Whether every section of `N*_{C|X}(D)` comes from a form of class `D`
/// vanishing on `C`.
pub fn nstar_surjective<F: Field>(x: &Ambient<F>, c: &CurveMap<F>, d: &DivisorClass) -> Result<NstarReport> {
    let data = conormal_in_ambient(x, c)?;
    nstar_with(x, c, &data, d)
}

fn nstar_with<F: Field>(x: &Ambient<F>, c: &CurveMap<F>, data: &ConormalData<F>, d: &DivisorClass) -> Result<NstarReport> {
    let ideal = ideal_sections(x, c, d)?;
    let dc = ideal.curve_degree;
    let target_dim = data.conormal.h0(dc);
    let rank = if ideal.basis.is_empty() { 0 } else { nstar_matrix(x, c, data, &ideal.basis, dc)?.rank() };
    Ok(NstarReport {
        class: d.clone(),
        source_dim: ideal.dim(),
        target_dim,
        rank,
        corank: target_dim - rank,
        surjective: rank == target_dim,
    })
}

/// Splitting of `N*_{X|P}|_C`, the conormal bundle of the ambient along `C`.
pub fn ambient_conormal_splitting<F: Field>(x: &Ambient<F>, c: &CurveMap<F>) -> Result<SplittingType> {
    let t = tangent_splitting(x, c)?;
    kernel_splitting(&t.cotangent.quotient)
}

/// A map `q: N_{C|X} → ⊕ O(Dᵢ·C)` in the coordinates of the conormal model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectionData<F: Field> {
    pub q: BundleMap<F>,
    pub degrees: Vec<DivisorClass>,
}

impl<F: Field> SurjectionData<F> {
    /// Checks shapes against the normal bundle degrees and fiberwise surjectivity.
    pub fn new(q: BundleMap<F>, degrees: Vec<DivisorClass>, normal: &[i64], c: &CurveMap<F>) -> Result<Self> {
        let expected: Vec<i64> = degrees.iter().map(|d| d.dot(c)).collect();
        if q.source() != normal || q.target() != expected.as_slice() {
            return Err(Error::Shape(alloc::format!(
                "q must map {normal:?} to {expected:?}, got {:?} -> {:?}",
                q.source(),
                q.target()
            )));
        }
        q.check_fiberwise_surjective()?;
        Ok(SurjectionData { q, degrees })
    }

    /// A random fiberwise surjective `q`, retrying a bounded number of times.
    pub fn random<R: RngCore + ?Sized>(
        data: &ConormalData<F>,
        c: &CurveMap<F>,
        degrees: Vec<DivisorClass>,
        rng: &mut R,
    ) -> Result<Self> {
        let f = c.field();
        let normal = normal_degrees(data);
        let target: Vec<i64> = degrees.iter().map(|d| d.dot(c)).collect();
        for _ in 0..20 {
            let q = BundleMap::random(f, normal.clone(), target.clone(), rng);
            if q.check_fiberwise_surjective().is_ok() {
                return Ok(SurjectionData { q, degrees });
            }
        }
        Err(Error::AllDegenerate { trials: 20 })
    }
}

/// Degrees of `N_{C|X}` in the order of the conormal quotient model.
pub fn normal_degrees<F: Field>(data: &ConormalData<F>) -> Vec<i64> {
    data.quotient.quotient.target().iter().map(|a| -a).collect()
}

/// Hypersurfaces realizing a prescribed quotient of the normal bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction<F: Field> {
    pub forms: Vec<Poly<F>>,
    pub complete_intersection: Ambient<F>,
    pub normal: SplittingType,
    pub kernel: SplittingType,
}

/// Lifts each row of `q` to a form vanishing on `C` and checks that the
/// resulting complete intersection has normal bundle `ker q`.
pub fn construct_from_surjection<F: Field>(
    x: &Ambient<F>,
    c: &CurveMap<F>,
    sd: &SurjectionData<F>,
) -> Result<Construction<F>> {
    let f = x.field;
    let count = sd.degrees.len();
    if count + 2 > x.dim {
        return Err(Error::Hypothesis(alloc::format!("{count} hypersurfaces in dimension {}", x.dim)));
    }
    sd.q.check_fiberwise_surjective()?;
    let data = conormal_in_ambient(x, c)?;
    let normal = normal_degrees(&data);
    if sd.q.source() != normal.as_slice() {
        return Err(Error::Shape(alloc::format!("q has source {:?}, the normal model is {normal:?}", sd.q.source())));
    }
    let conormal = data.quotient.quotient.target().to_vec();
    let mut forms = Vec::with_capacity(count);
    for (i, d) in sd.degrees.iter().enumerate() {
        let ideal = ideal_sections(x, c, d)?;
        let dc = ideal.curve_degree;
        if sd.q.target()[i] != dc {
            return Err(Error::Shape(alloc::format!("row {i} of q has degree {}, expected {dc}", sd.q.target()[i])));
        }
        if ideal.basis.is_empty() {
            return Err(Error::LiftInfeasible(alloc::format!("no form of class {:?} vanishes on the curve", d.multidegree)));
        }
        let m = nstar_matrix(x, c, &data, &ideal.basis, dc)?;
        let row: Vec<_> = sd.q.entries()[i].clone();
        let rhs = forms_to_vector(f, &conormal, dc, &row)?;
        let y = m.solve(&rhs).ok_or_else(|| {
            Error::LiftInfeasible(alloc::format!(
                "row {i} is not the image of a form of class {:?} (corank {})",
                d.multidegree,
                m.rows() - m.rank()
            ))
        })?;
        forms.push(ideal.combine(&y));
    }
    let y = x.intersect(&forms, &sd.degrees)?;
    let n = conormal_in_ambient(&y, c)?.normal;
    let kernel = kernel_splitting(&sd.q)?;
    if n != kernel {
        return Err(Error::Verification(alloc::format!("normal bundle {n} differs from ker q = {kernel}")));
    }
    Ok(Construction { forms, complete_intersection: y, normal: n, kernel })
}

/// Normal bundles of random complete intersections containing a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericCi {
    pub splitting: SplittingType,
    /// `None` for samples singular along the curve.
    pub samples: Vec<Option<SplittingType>>,
    /// Generic kernel of `N_{C|X} → ⊕ O(Dᵢ·C)`.
    pub predicted: SplittingType,
    pub agrees: bool,
}

pub fn generic_ci_splitting<F: Field, R: RngCore + ?Sized>(
    x: &Ambient<F>,
    c: &CurveMap<F>,
    degrees: &[DivisorClass],
    trials: usize,
    rng: &mut R,
) -> Result<GenericCi> {
    let f = x.field;
    if degrees.len() + 2 > x.dim {
        return Err(Error::Hypothesis(alloc::format!("{} hypersurfaces in dimension {}", degrees.len(), x.dim)));
    }
    if trials == 0 {
        return Err(Error::Hypothesis(String::from("at least one trial is required")));
    }
    let data = conormal_in_ambient(x, c)?;
    let ideals = degrees.iter().map(|d| ideal_sections(x, c, d)).collect::<Result<Vec<_>>>()?;
    let mut samples = Vec::with_capacity(trials);
    let mut best: Option<SplittingType> = None;
    for _ in 0..trials {
        let forms: Vec<Poly<F>> = ideals
            .iter()
            .map(|id| id.combine(&(0..id.dim()).map(|_| f.random(rng)).collect::<Vec<_>>()))
            .collect();
        if forms.iter().any(Poly::is_zero) {
            samples.push(None);
            continue;
        }
        let sample = x.intersect(&forms, degrees).and_then(|y| conormal_in_ambient(&y, c));
        match sample {
            Ok(d) => {
                let k = d.normal;
                best = match best {
                    Some(b) if b.h0_dominated_by(&k) => Some(b),
                    _ => Some(k.clone()),
                };
                samples.push(Some(k));
            }
            Err(Error::RankDrop(_) | Error::Verification(_)) => samples.push(None),
            Err(e) => return Err(e),
        }
    }
    let splitting = best.ok_or(Error::AllDegenerate { trials })?;
    let target = SplittingType::new(degrees.iter().map(|d| d.dot(c)).collect());
    let predicted = generic_kernel_splitting(f, &data.normal, &target, trials, rng)?.splitting;
    Ok(GenericCi { agrees: predicted == splitting, splitting, samples, predicted })
}

/// The curve-level numerical condition and its inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    /// `−K_X·C`
    pub kxc: i64,
    /// `Σ Dᵢ·C`
    pub dc: i64,
    pub m: usize,
    pub c: usize,
    pub threshold: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFlags {
    pub smooth_along_c: bool,
    pub ample: bool,
    pub balanced: bool,
    pub very_free: bool,
}

/// Summary of the very-free-curve test for a complete intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ambient: String,
    pub degrees: Vec<DivisorClass>,
    pub gate: Gate,
    /// `e(n − Σdᵢ) > k(n−k) − c` for Grassmannians with `Dᵢ = dᵢH`.
    pub grassmannian_inequality: Option<bool>,
    /// `−K_X − ΣDᵢ` has positive multidegree.
    pub fano: bool,
    /// `dᵢ ≥ max(gen_degree, 3)` for each class, using its smallest entry.
    pub degree_hypotheses: Vec<bool>,
    pub splitting: Option<SplittingType>,
    pub predicted: Option<SplittingType>,
    pub flags: CertificateFlags,
    pub characteristic: u64,
    pub trials: usize,
    /// The ambient was not taken from the catalog, so its ideal is unverified.
    pub user_supplied: bool,
    pub notes: Vec<String>,
}

pub fn src_certificate<F: Field, R: RngCore + ?Sized>(
    x: &Ambient<F>,
    c: &CurveMap<F>,
    degrees: &[DivisorClass],
    trials: usize,
    rng: &mut R,
) -> Result<Certificate> {
    for d in degrees {
        check_class(x, d)?;
    }
    let kxc = tangent_splitting(x, c)?.tangent.degree();
    let dc: i64 = degrees.iter().map(|d| d.dot(c)).sum();
    let (m, count) = (x.dim, degrees.len());
    let threshold = m as i64 - count as i64 + 1;
    let gate = Gate { kxc, dc, m, c: count, threshold, pass: kxc - dc >= threshold };
    let mut notes = Vec::new();
    let grassmannian_inequality = match x.kind {
        AmbientKind::Grassmannian { k, n } => {
            let e = c.total_degree() as i64;
            let sum_d: i64 = degrees.iter().map(|d| d.multidegree[0]).sum();
            let holds = e * (n as i64 - sum_d) > (k * (n - k)) as i64 - count as i64;
            if holds != gate.pass {
                notes.push(String::from("Grassmannian inequality disagrees with the gate"));
            }
            Some(holds)
        }
        _ => None,
    };
    let fano = x.anticanonical.minus_is_positive(degrees);
    let bound = x.gen_degree.max(3) as i64;
    let degree_hypotheses =
        degrees.iter().map(|d| d.multidegree.iter().copied().min().unwrap_or(0) >= bound).collect();
    if !x.is_catalogued() {
        notes.push(String::from("ambient ideal supplied by the caller and not verified beyond the curve"));
    }
    let (splitting, predicted) = match generic_ci_splitting(x, c, degrees, trials, rng) {
        Ok(g) => {
            if !g.agrees {
                notes.push(alloc::format!("sampled splitting {} differs from the generic kernel {}", g.splitting, g.predicted));
            }
            (Some(g.splitting), Some(g.predicted))
        }
        Err(Error::AllDegenerate { .. }) => {
            notes.push(alloc::format!("all {trials} samples were singular along the curve"));
            (None, None)
        }
        Err(e) => return Err(e),
    };
    let smooth_along_c = splitting.is_some();
    let ample = splitting.as_ref().is_some_and(SplittingType::is_ample);
    let balanced = splitting.as_ref().is_some_and(SplittingType::is_balanced);
    let flags = CertificateFlags { smooth_along_c, ample, balanced, very_free: gate.pass && ample && smooth_along_c };
    Ok(Certificate {
        ambient: x.label.clone(),
        degrees: degrees.to_vec(),
        gate,
        grassmannian_inequality,
        fano,
        degree_hypotheses,
        splitting,
        predicted,
        flags,
        characteristic: x.field.characteristic(),
        trials,
        user_supplied: !x.is_catalogued(),
        notes,
    })
}
