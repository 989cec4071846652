use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::kernel::kernel_splitting;
use super::map::BundleMap;
use super::splitting::SplittingType;
use crate::error::{Error, Result};
use crate::exact::form::BinForm;
use crate::exact::Field;

/// Outcome of sampling random maps `E → F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericKernel {
    /// The twist-wise `h⁰`-minimal kernel splitting among full-rank samples.
    pub splitting: SplittingType,
    /// Kernel splitting of every sample, `None` for rank-deficient ones.
    pub samples: Vec<Option<SplittingType>>,
    pub characteristic: u64,
}

/// Estimates the kernel splitting of a general map `E → F` by sampling.
///
/// Each sample gives an upper bound on the generic `h⁰` profile, so the
/// reported type is the one whose profile is smallest at every twist.
pub fn generic_kernel_splitting<F: Field, R: RngCore + ?Sized>(
    field: F,
    source: &SplittingType,
    target: &SplittingType,
    trials: usize,
    rng: &mut R,
) -> Result<GenericKernel> {
    if trials == 0 {
        return Err(Error::Hypothesis(String::from("at least one trial is required")));
    }
    let full = source.rank().min(target.rank());
    let mut samples = Vec::with_capacity(trials);
    let mut best: Option<SplittingType> = None;
    for _ in 0..trials {
        let m = BundleMap::random(field, source.summands().to_vec(), target.summands().to_vec(), rng);
        if m.generic_rank().rank < full {
            samples.push(None);
            continue;
        }
        let k = kernel_splitting(&m)?;
        best = match best {
            Some(b) if b.h0_dominated_by(&k) => Some(b),
            Some(b) if !k.h0_dominated_by(&b) && total_h0(&b, &k) <= total_h0(&k, &b) => Some(b),
            _ => Some(k.clone()),
        };
        samples.push(Some(k));
    }
    let splitting = best.ok_or(Error::AllDegenerate { trials })?;
    Ok(GenericKernel { splitting, samples, characteristic: field.characteristic() })
}

// Sum of h0 over the twists where two profiles of equal rank can differ;
// only used to break ties between incomparable (non-generic) samples.
fn total_h0(x: &SplittingType, other: &SplittingType) -> usize {
    let lo = -x.max().unwrap_or(0).max(other.max().unwrap_or(0)) - 1;
    let hi = -x.min().unwrap_or(0).min(other.min().unwrap_or(0)) + 1;
    (lo..=hi).map(|d| x.h0(d)).sum()
}

/// The explicit map `E → O(b)` whose kernel is globally generated when
/// `0 ≤ aᵢ ≤ b`, `Σaᵢ ≥ b` and `rk E > 1`.
///
/// Columns with `aᵢ = 0` are zero. The remaining columns carry
/// `s^(b−Aᵢ) t^(Aᵢ₋₁)` with `Aᵢ` the partial sums of the positive `aᵢ`
/// capped at `b`; once the cap is reached the entry becomes `t^(b−aᵢ)`.
pub fn phi_witness<F: Field>(field: F, source: &SplittingType, b: i64) -> Result<BundleMap<F>> {
    let a = source.summands();
    if a.len() < 2 {
        return Err(Error::Hypothesis(String::from("source rank must exceed 1")));
    }
    if a.iter().any(|x| *x < 0 || *x > b) {
        return Err(Error::Hypothesis(alloc::format!("summands must lie in [0, {b}]")));
    }
    if source.degree() < b {
        return Err(Error::Hypothesis(alloc::format!("source degree {} is below {b}", source.degree())));
    }
    let mut row = Vec::with_capacity(a.len());
    let mut prev = 0i64;
    for &ai in a {
        if ai == 0 {
            row.push(BinForm::zero(field));
            continue;
        }
        let deg = (b - ai) as usize;
        if prev + ai <= b {
            let next = prev + ai;
            row.push(BinForm::monomial(field, deg, prev as usize, field.one()));
            prev = next;
        } else {
            row.push(BinForm::monomial(field, deg, deg, field.one()));
            prev = b;
        }
    }
    BundleMap::new(field, a.to_vec(), vec![b], vec![row])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::kernel::kernel_model;
    use crate::exact::{PrimeField, Rationals};
    use rand_core::SeedableRng;

    fn st(v: &[i64]) -> SplittingType {
        SplittingType::new(v.to_vec())
    }

    #[test]
    fn unbalanced_generic_kernel() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = generic_kernel_splitting(f, &st(&[0, 2, 2]), &st(&[2]), 5, &mut rng).unwrap();
        assert_eq!(g.splitting.summands(), &[0, 2]);
        let g = generic_kernel_splitting(f, &st(&[1, 1, 1]), &st(&[2]), 5, &mut rng).unwrap();
        assert_eq!(g.splitting.summands(), &[0, 1]);
        let g = generic_kernel_splitting(f, &st(&[6, 6, 6]), &st(&[12]), 5, &mut rng).unwrap();
        assert_eq!(g.splitting.summands(), &[3, 3]);
    }

    #[test]
    fn degenerate_samples_are_reported() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let err = generic_kernel_splitting(f, &st(&[3]), &st(&[0]), 3, &mut rng).unwrap_err();
        assert_eq!(err, Error::AllDegenerate { trials: 3 });
    }

    #[test]
    fn phi_examples() {
        let phi = phi_witness(Rationals, &st(&[0, 1, 2]), 3).unwrap();
        assert!(phi.entry(0, 0).is_zero());
        assert_eq!(phi.entry(0, 1), &BinForm::from_i64s(Rationals, &[1, 0, 0]));
        assert_eq!(phi.entry(0, 2), &BinForm::from_i64s(Rationals, &[0, 1]));
        let k = kernel_model(&phi).unwrap();
        assert_eq!(k.splitting().summands(), &[0, 0]);

        let phi = phi_witness(Rationals, &st(&[1, 1]), 2).unwrap();
        assert_eq!(phi.entry(0, 0), &BinForm::s(Rationals));
        assert_eq!(phi.entry(0, 1), &BinForm::t(Rationals));
        assert_eq!(kernel_model(&phi).unwrap().splitting().summands(), &[0]);

        let phi = phi_witness(Rationals, &st(&[0, 0, 3]), 3).unwrap();
        assert_eq!(phi.entry(0, 2), &BinForm::one(Rationals));
        assert_eq!(kernel_model(&phi).unwrap().splitting().summands(), &[0, 0]);
    }

    #[test]
    fn phi_with_capped_partial_sums() {
        let phi = phi_witness(Rationals, &st(&[2, 2, 2]), 3).unwrap();
        assert!(phi.check_fiberwise_surjective().is_ok());
        let k = kernel_model(&phi).unwrap();
        assert!(k.splitting().is_globally_generated());
    }

    #[test]
    fn phi_rejects_bad_input() {
        assert!(phi_witness(Rationals, &st(&[3]), 3).is_err());
        assert!(phi_witness(Rationals, &st(&[1, 4]), 3).is_err());
        assert!(phi_witness(Rationals, &st(&[1, 1]), 3).is_err());
    }
}
