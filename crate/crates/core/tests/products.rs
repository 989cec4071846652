use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use vfree_core::curves::CurveMap;
use vfree_core::exact::{BinForm, Field, PrimeField};
use vfree_core::products::{d0, factor_image, random_alpha, verify_product_theorem, FactorProfile};

fn fp() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn rnc(e: usize, n: usize) -> CurveMap<PrimeField> {
    CurveMap::rational_normal(fp(), e, n).unwrap()
}

#[test]
fn three_twisted_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cubic = rnc(3, 3);
    let r = verify_product_theorem(&[cubic.clone(), cubic.clone(), cubic], 2..=9, 3, &mut rng).unwrap();
    assert!(r.condition.holds);
    assert!(r.pass, "best trial {:?}", r.best.map(|i| &r.trials[i]));
    assert_eq!(r.predicted_normal.rank(), 8);
}

#[test]
fn mixed_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = verify_product_theorem(&[rnc(2, 2), rnc(4, 4), rnc(3, 3)], 2..=10, 3, &mut rng).unwrap();
    assert!(r.pass);
}

// Extra coordinates only add sections to the Euler kernel.
#[test]
fn adding_coordinates_enlarges_the_image() {
    let f = fp();
    let m = |deg: usize, t: usize| BinForm::monomial(f, deg, t, f.one());
    let smaller = CurveMap::new(f, vec![vec![m(4, 0), m(4, 1), m(4, 3), m(4, 4)]]).unwrap();
    let larger = rnc(4, 4);
    let conic = rnc(2, 2);
    for d in 2..=8 {
        let (a, b) = (factor_image(&smaller, d).unwrap().dim(), factor_image(&larger, d).unwrap().dim());
        assert!(a <= b, "twist {d}: {a} > {b}");
    }
    let small_d0 = d0(&smaller, &conic, 12).unwrap().unwrap();
    let large_d0 = d0(&larger, &conic, 12).unwrap().unwrap();
    assert!(large_d0 <= small_d0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn image_dimension_is_reparametrization_invariant(e in 2usize..6, extra in 0usize..2, d in 2i64..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = rnc(e, e + extra);
        let alpha = random_alpha(fp(), &mut rng);
        let moved = c.compose(&alpha).unwrap();
        prop_assert_eq!(factor_image(&moved, d).unwrap().dim(), factor_image(&c, d).unwrap().dim());
    }

    #[test]
    fn observed_sections_split_as_kernel_plus_image(e1 in 2usize..5, e2 in 2usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let curves = [rnc(e1, e1), rnc(e2, e2)];
        let r = verify_product_theorem(&curves, 0..=10, 2, &mut rng).unwrap();
        let profiles: Vec<FactorProfile> = curves.iter().map(|c| FactorProfile::of_curve(c).unwrap()).collect();
        for t in &r.trials {
            for c in &t.per_d {
                let total: usize = profiles.iter().map(|p| p.cotangent.h0(c.d)).sum();
                prop_assert_eq!(c.observed + c.image_dim, total, "twist {}", c.d);
                prop_assert!(c.observed >= c.formula, "twist {}", c.d);
                prop_assert!(c.image_dim <= (c.d - 1).max(0) as usize);
            }
        }
    }
}
