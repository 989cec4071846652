use proptest::prelude::*;
use vfree_core::exact::{BinForm, Field, Mat, PrimeField, Rationals};

fn fp() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn form_of<F: Field>(f: F, coeffs: &[i64]) -> BinForm<F> {
    BinForm::from_i64s(f, coeffs)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..max_len)
}

proptest! {
    #[test]
    fn euler_identity(c in coeffs(9)) {
        let f = fp();
        let g = form_of(f, &c);
        let deg = c.len() as i64 - 1;
        let lhs = BinForm::s(f).mul(&g.partial_s()).add(&BinForm::t(f).mul(&g.partial_t())).unwrap();
        prop_assert_eq!(lhs, g.scale(&f.from_i64(deg)));
    }

    #[test]
    fn division_undoes_multiplication(a in coeffs(7), b in coeffs(6)) {
        let f = Rationals;
        let (x, y) = (form_of(f, &a), form_of(f, &b));
        prop_assume!(!y.is_zero());
        prop_assert_eq!(x.mul(&y).exact_div(&y).unwrap(), x);
    }

    #[test]
    fn gcd_divides_both(a in coeffs(6), b in coeffs(6), c in coeffs(4)) {
        let f = fp();
        let common = form_of(f, &c);
        prop_assume!(!common.is_zero());
        let x = form_of(f, &a).mul(&common);
        let y = form_of(f, &b).mul(&common);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let g = x.gcd(&y);
        prop_assert!(x.exact_div(&g).is_ok());
        prop_assert!(y.exact_div(&g).is_ok());
        prop_assert!(g.exact_div(&common).is_ok());
    }

    #[test]
    fn evaluation_is_multiplicative(a in coeffs(6), b in coeffs(6), s0 in -20i64..20, t0 in -20i64..20) {
        let f = fp();
        let (x, y) = (form_of(f, &a), form_of(f, &b));
        let (s0, t0) = (f.from_i64(s0), f.from_i64(t0));
        let lhs = x.mul(&y).eval(&s0, &t0).unwrap();
        prop_assert_eq!(lhs, f.mul(&x.eval(&s0, &t0).unwrap(), &y.eval(&s0, &t0).unwrap()));
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..7, seed in prop::collection::vec(-3i64..4, 42)) {
        let f = fp();
        let entries: Vec<Vec<_>> =
            (0..rows).map(|i| (0..cols).map(|j| f.from_i64(seed[i * cols + j])).collect()).collect();
        let m = Mat::from_rows(f, cols, entries).unwrap();
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        for v in kernel {
            prop_assert!(m.mul_vec(&v).iter().all(|x| f.is_zero(x)));
        }
    }
}

#[test]
fn composition_with_inverse_is_identity() {
    let f = Rationals;
    let g = form_of(f, &[1, -2, 0, 5]);
    let alpha = [[f.from_i64(2), f.from_i64(1)], [f.from_i64(1), f.from_i64(1)]];
    let inverse = [[f.from_i64(1), f.from_i64(-1)], [f.from_i64(-1), f.from_i64(2)]];
    // alpha has determinant 1, so the round trip is exact.
    assert_eq!(g.compose(&alpha).compose(&inverse), g);
}
