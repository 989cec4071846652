use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use vfree_core::bundles::SubbundleModel;
use vfree_core::curves::{
    conormal_pn, differential_form, euler_cotangent_model, rnc_conormal_basis, rnc_conormal_formula, validate_curve,
    CurveMap,
};
use vfree_core::exact::{BinForm, Field, PrimeField, Rationals};

fn fp() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn random_form<F: Field>(f: F, deg: i64, rng: &mut impl RngCore) -> BinForm<F> {
    if deg < 0 {
        return BinForm::zero(f);
    }
    BinForm::from_coeffs(f, (0..=deg).map(|_| f.random(rng)).collect())
}

// (n_j, e_j) per block.
fn blocks() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((1usize..4, 1usize..4), 1..3)
}

fn random_curve(shape: &[(usize, usize)], rng: &mut impl RngCore) -> CurveMap<PrimeField> {
    let f = fp();
    let blocks = shape.iter().map(|&(n, e)| (0..=n).map(|_| random_form(f, e as i64, rng)).collect()).collect();
    CurveMap::new(f, blocks).unwrap()
}

// A random section of the model at twist d.
fn section<F: Field>(model: &SubbundleModel<F>, d: i64, rng: &mut impl RngCore) -> Vec<BinForm<F>> {
    let f = model.field();
    let coeffs: Vec<_> = model.degrees().iter().map(|a| random_form(f, a + d, rng)).collect();
    model.generators().apply(&coeffs).unwrap()
}

#[test]
fn rational_normal_conormal_splitting() {
    for n in 1..=8 {
        for e in 1..=n {
            let c = CurveMap::rational_normal(Rationals, e, n).unwrap();
            let model = conormal_pn(&c).unwrap();
            assert_eq!(model.splitting(), rnc_conormal_formula(e, n), "e={e}, n={n}");
            for b in rnc_conormal_basis(Rationals, e, n) {
                assert!(c.conormal_map().apply(&b.forms).unwrap().iter().all(BinForm::is_zero), "{} for e={e}, n={n}", b.label);
                assert!(model.express(&b.forms, b.twist).is_ok(), "{} for e={e}, n={n}", b.label);
            }
        }
    }
}

#[test]
fn conic_conormal_by_hand() {
    // The conic in P² has conormal O(-4).
    let c = CurveMap::rational_normal(Rationals, 2, 2).unwrap();
    assert_eq!(conormal_pn(&c).unwrap().splitting().summands(), &[-4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ranks_and_degrees(shape in blocks(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_curve(&shape, &mut rng);
        prop_assume!(validate_curve(&c).map(|v| v.is_valid()).unwrap_or(false));
        let dim: usize = shape.iter().map(|(n, _)| n).sum();
        let k: i64 = shape.iter().map(|&(n, e)| ((n + 1) * e) as i64).sum();
        let cotangent = euler_cotangent_model(&c).unwrap().splitting();
        prop_assert_eq!((cotangent.rank(), cotangent.degree()), (dim, -k));
        let conormal = conormal_pn(&c).unwrap().splitting();
        prop_assert_eq!((conormal.rank(), conormal.degree()), (dim - 1, 2 - k));
    }

    #[test]
    fn differential_form_is_linear(shape in blocks(), seed in any::<u64>(), d in 2i64..7) {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_curve(&shape, &mut rng);
        prop_assume!(validate_curve(&c).map(|v| v.is_valid()).unwrap_or(false));
        let model = euler_cotangent_model(&c).unwrap();
        let (g1, g2) = (section(&model, d, &mut rng), section(&model, d, &mut rng));
        let lambda = f.random(&mut rng);
        let mixed: Vec<_> = g1.iter().zip(&g2).map(|(a, b)| a.add(&b.scale(&lambda)).unwrap()).collect();
        let (h1, h2) = (differential_form(&c, &g1).unwrap(), differential_form(&c, &g2).unwrap());
        let h = differential_form(&c, &mixed).unwrap();
        prop_assert_eq!(h.clone(), h1.add(&h2.scale(&lambda)).unwrap());
        prop_assert!(h.is_zero() || h.degree() == Some((d - 2) as usize));
    }

    #[test]
    fn differential_form_vanishes_on_conormal(shape in blocks(), seed in any::<u64>(), d in 0i64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_curve(&shape, &mut rng);
        prop_assume!(validate_curve(&c).map(|v| v.is_valid()).unwrap_or(false));
        let g = section(&conormal_pn(&c).unwrap(), d, &mut rng);
        prop_assert!(differential_form(&c, &g).unwrap().is_zero());
    }

    #[test]
    fn conormal_invariant_under_reparametrization(shape in blocks(), seed in any::<u64>()) {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_curve(&shape, &mut rng);
        prop_assume!(validate_curve(&c).map(|v| v.is_valid()).unwrap_or(false));
        let alpha = [[f.random(&mut rng), f.random(&mut rng)], [f.random(&mut rng), f.random(&mut rng)]];
        let det = f.sub(&f.mul(&alpha[0][0], &alpha[1][1]), &f.mul(&alpha[0][1], &alpha[1][0]));
        prop_assume!(!f.is_zero(&det));
        let moved = c.compose(&alpha).unwrap();
        prop_assert_eq!(conormal_pn(&moved).unwrap().splitting(), conormal_pn(&c).unwrap().splitting());
    }
}
