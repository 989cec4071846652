use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::map::{forms_to_vector, section_dims, section_offsets, vector_to_forms, BundleMap};
use super::splitting::{h0_line, SplittingType};
use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::{EchelonBasis, Field};

/// A split bundle `K = ⊕ O(c_l)` realized inside `E` by an explicit
/// fiberwise injective generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbundleModel<F: Field> {
    inclusion: BundleMap<F>,
}

/// Quotient of a target bundle by the saturation of an image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModel<F: Field> {
    /// `F → Q`, fiberwise surjective.
    pub quotient: BundleMap<F>,
    /// Model of the annihilator whose transpose is `quotient`.
    pub annihilator: SubbundleModel<F>,
}

impl<F: Field> QuotientModel<F> {
    pub fn splitting(&self) -> SplittingType {
        self.quotient.target_type()
    }
}

impl<F: Field> SubbundleModel<F> {
    /// Wraps a generator matrix after checking fiberwise injectivity.
    pub fn from_generators(inclusion: BundleMap<F>) -> Result<Self> {
        inclusion.check_fiberwise_injective().map_err(|e| Error::Verification(alloc::format!("{e}")))?;
        Ok(SubbundleModel { inclusion })
    }

    pub fn field(&self) -> F {
        self.inclusion.field()
    }

    /// Degrees of the ambient bundle `E`, in column order of the defining map.
    pub fn ambient(&self) -> &[i64] {
        self.inclusion.target()
    }

    /// Model degrees `c_l` in generator order.
    pub fn degrees(&self) -> &[i64] {
        self.inclusion.source()
    }

    pub fn generators(&self) -> &BundleMap<F> {
        &self.inclusion
    }

    pub fn rank(&self) -> usize {
        self.inclusion.cols()
    }

    pub fn splitting(&self) -> SplittingType {
        self.inclusion.source_type()
    }

    /// Coefficients `u` with `G·u = v` for a section tuple `v` of `E(d)`.
    pub fn express(&self, v: &[BinForm<F>], d: i64) -> Result<Vec<BinForm<F>>> {
        self.express_many(&[v.to_vec()], d).pop().expect("one input")
    }

    pub fn express_many(&self, vs: &[Vec<BinForm<F>>], d: i64) -> Vec<Result<Vec<BinForm<F>>>> {
        let f = self.field();
        let m = self.inclusion.sections_matrix(d);
        let mut rhs = Vec::with_capacity(vs.len());
        let mut bad = Vec::with_capacity(vs.len());
        for v in vs {
            match forms_to_vector(f, self.ambient(), d, v) {
                Ok(x) => {
                    rhs.push(x);
                    bad.push(None);
                }
                Err(e) => {
                    rhs.push(vec![f.zero(); m.rows()]);
                    bad.push(Some(e));
                }
            }
        }
        let sols = m.solve_many(&rhs);
        sols.into_iter()
            .zip(bad)
            .enumerate()
            .map(|(k, (sol, err))| {
                if let Some(e) = err {
                    return Err(e);
                }
                let u = sol.ok_or_else(|| {
                    Error::NotInModel(alloc::format!("section tuple {k} at twist {d} is not in the modeled subsheaf"))
                })?;
                Ok(vector_to_forms(f, self.degrees(), d, &u))
            })
            .collect()
    }
}

/// `s·w` and `t·w` for a stacked section vector `w` of `E(d − 1)`.
fn shift<T: Clone>(degrees: &[i64], d: i64, w: &[T], zero: T) -> [Vec<T>; 2] {
    let (src_off, _) = section_offsets(degrees, d - 1);
    let (dst_off, total) = section_offsets(degrees, d);
    let mut by_s = vec![zero.clone(); total];
    let mut by_t = vec![zero; total];
    for (i, a) in degrees.iter().enumerate() {
        let n = h0_line(*a, d - 1);
        for k in 0..n {
            by_s[dst_off[i] + k] = w[src_off[i] + k].clone();
            by_t[dst_off[i] + k + 1] = w[src_off[i] + k].clone();
        }
    }
    [by_s, by_t]
}

fn search_bound(m: &BundleMap<impl Field>, generic_rank: usize) -> (i64, i64) {
    let e = m.source();
    let rho = e.len() - generic_rank;
    let max_a = e.iter().copied().max().unwrap_or(0);
    let mut targets: Vec<i64> = m.target().to_vec();
    targets.sort_unstable_by(|a, b| b.cmp(a));
    let sigma: i64 = targets.iter().take(generic_rank).sum();
    let deg_e: i64 = e.iter().sum();
    let d_star = -(deg_e - sigma) + (rho as i64 - 1) * max_a;
    (-max_a, d_star)
}

/// Minimal generators of the kernel of `M` on global sections of all twists,
/// packaged as a split subbundle of the source.
pub fn kernel_model<F: Field>(m: &BundleMap<F>) -> Result<SubbundleModel<F>> {
    let f = m.field();
    let e = m.source().to_vec();
    let generic = m.generic_rank().rank;
    let rho = e.len() - generic;
    if rho == 0 {
        let g = BundleMap::zero(f, Vec::new(), e);
        return Ok(SubbundleModel { inclusion: g });
    }
    let (start, d_star) = search_bound(m, generic);
    let mut gens: Vec<(i64, Vec<F::Elem>)> = Vec::new();
    let mut prev_kernel: Vec<Vec<F::Elem>> = Vec::new();
    let mut d = start;
    while d <= d_star && gens.len() < rho {
        let kernel = m.sections_matrix(d).kernel();
        if !kernel.is_empty() {
            let total: usize = section_dims(&e, d).iter().sum();
            let mut span = EchelonBasis::new(f, total);
            for w in &prev_kernel {
                for shifted in shift(&e, d, w, f.zero()) {
                    span.insert(&shifted);
                }
            }
            for v in &kernel {
                if span.insert(v) {
                    gens.push((d, v.clone()));
                }
            }
        }
        prev_kernel = kernel;
        d += 1;
    }
    if gens.len() != rho {
        return Err(Error::KernelSearch {
            bound: d_star,
            detail: alloc::format!("found {} of {rho} generators by twist {d_star}", gens.len()),
        });
    }
    let source: Vec<i64> = gens.iter().map(|(dl, _)| -dl).collect();
    let columns: Vec<Vec<BinForm<F>>> = gens.iter().map(|(dl, v)| vector_to_forms(f, &e, *dl, v)).collect();
    let entries = (0..e.len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let g = BundleMap::new(f, source, e, entries)?;

    if !m.compose(&g)?.is_zero() {
        return Err(Error::Verification(String::from("kernel generators are not annihilated by the map")));
    }
    g.check_fiberwise_injective().map_err(|err| Error::KernelSearch {
        bound: d_star,
        detail: alloc::format!("generators are not saturated: {err}"),
    })?;
    let model = SubbundleModel { inclusion: g };
    let k = model.splitting();
    for dv in [d_star + 1, d_star + 2] {
        let observed = m.kernel_h0(dv);
        if observed != k.h0(dv) {
            return Err(Error::KernelSearch {
                bound: d_star,
                detail: alloc::format!("h0 at twist {dv} is {observed}, model predicts {}", k.h0(dv)),
            });
        }
    }
    Ok(model)
}

/// Splitting type of the kernel from section counts alone, without building
/// generators.
pub fn kernel_splitting<F: Field>(m: &BundleMap<F>) -> Result<SplittingType> {
    let generic = m.generic_rank().rank;
    let rho = m.cols() - generic;
    if rho == 0 {
        return Ok(SplittingType::default());
    }
    let (start, d_star) = search_bound(m, generic);
    let steps = (d_star - start + 4).max(1) as usize;
    SplittingType::from_h0(rho, start - 1, steps, |d| Ok(m.kernel_h0(d)))
}

/// The quotient of the target by the saturated image of `M`.
pub fn cokernel_model<F: Field>(m: &BundleMap<F>) -> Result<QuotientModel<F>> {
    let annihilator = kernel_model(&m.transpose())?;
    let quotient = annihilator.generators().transpose();
    Ok(QuotientModel { quotient, annihilator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{PrimeField, Rationals};
    use rand_core::SeedableRng;

    fn q(c: &[i64]) -> BinForm<Rationals> {
        BinForm::from_i64s(Rationals, c)
    }

    fn cubic_row() -> BundleMap<Rationals> {
        let row = vec![vec![q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0]), q(&[0, 0, 0, 1])]];
        BundleMap::new(Rationals, vec![-3; 4], vec![0], row).unwrap()
    }

    #[test]
    fn twisted_cubic_cotangent() {
        let k = kernel_model(&cubic_row()).unwrap();
        assert_eq!(k.splitting().summands(), &[-4, -4, -4]);
        assert_eq!(kernel_splitting(&cubic_row()).unwrap().summands(), &[-4, -4, -4]);
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let m = BundleMap::zero(Rationals, vec![1, -2], vec![3]);
        let k = kernel_model(&m).unwrap();
        assert_eq!(k.splitting().summands(), &[-2, 1]);
    }

    #[test]
    fn euler_sequence_quotient() {
        let m = BundleMap::new(Rationals, vec![-1], vec![0, 0], vec![vec![q(&[1, 0])], vec![q(&[0, 1])]]).unwrap();
        let qm = cokernel_model(&m).unwrap();
        assert_eq!(qm.splitting().summands(), &[1]);
        let row = &qm.quotient.entries()[0];
        // (t, −s) up to a scalar
        assert!(row[0].coeff(0) == Rationals.zero() && row[1].coeff(1) == Rationals.zero());
        assert!(qm.quotient.compose(&m).unwrap().is_zero());
        assert!(qm.quotient.check_fiberwise_surjective().is_ok());
    }

    #[test]
    fn redundant_columns_give_same_quotient() {
        let m1 = BundleMap::new(Rationals, vec![-1], vec![0, 0], vec![vec![q(&[1, 0])], vec![q(&[0, 1])]]).unwrap();
        let entries = vec![vec![q(&[1, 0]), q(&[2, 0])], vec![q(&[0, 1]), q(&[0, 2])]];
        let m2 = BundleMap::new(Rationals, vec![-1, -1], vec![0, 0], entries).unwrap();
        assert_eq!(cokernel_model(&m1).unwrap().splitting(), cokernel_model(&m2).unwrap().splitting());
    }

    #[test]
    fn express_round_trip() {
        let k = kernel_model(&cubic_row()).unwrap();
        let g = k.generators();
        // s·(column 0) + t·(column 1) at twist 5
        let s = BinForm::s(Rationals);
        let t = BinForm::t(Rationals);
        let v: Vec<BinForm<Rationals>> = (0..4)
            .map(|i| s.mul(g.entry(i, 0)).add(&t.mul(g.entry(i, 1))).unwrap())
            .collect();
        let u = k.express(&v, 5).unwrap();
        assert_eq!(u[0], s);
        assert_eq!(u[1], t);
        assert!(u[2].is_zero());
        let bad = vec![q(&[1, 0, 0]), BinForm::zero(Rationals), BinForm::zero(Rationals), BinForm::zero(Rationals)];
        assert!(matches!(k.express(&bad, 5), Err(Error::NotInModel(_))));
    }

    #[test]
    fn random_maps_satisfy_model_invariants() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = BundleMap::random(f, vec![0, 1, 1, 2], vec![3, 4], &mut rng);
            let k = kernel_model(&m).unwrap();
            assert!(m.compose(k.generators()).unwrap().is_zero());
            for d in -3..8 {
                assert_eq!(m.kernel_h0(d), k.splitting().h0(d));
            }
            assert_eq!(k.splitting(), kernel_splitting(&m).unwrap());
        }
    }
}
