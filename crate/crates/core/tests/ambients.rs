use vfree_core::ambient::{
    b_search, check_b_sequence, conormal_in_ambient, flag_curve, product_curve, tangent_splitting, wps_curve, Ambient,
    AmbientKind,
};
use vfree_core::curves::CurveMap;
use vfree_core::exact::PrimeField;
use vfree_core::Error;

fn fp() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

struct Entry {
    name: String,
    ambient: Ambient<PrimeField>,
    curve: CurveMap<PrimeField>,
    /// −K·C computed from the shape of the ambient alone.
    kxc: i64,
    rnc: bool,
}

// −K of F(k_1 < … < k_m; n) is Σ (k_{i+1} − k_{i−1}) H_i with k_0 = 0, k_{m+1} = n.
fn flag_anticanonical(ks: &[usize], n: usize) -> Vec<i64> {
    let mut padded = vec![0];
    padded.extend_from_slice(ks);
    padded.push(n);
    (1..=ks.len()).map(|i| (padded[i + 1] - padded[i - 1]) as i64).collect()
}

fn catalog() -> Vec<Entry> {
    let f = fp();
    let mut out = Vec::new();
    for n in 2..=6 {
        for e in 1..=n {
            out.push(Entry {
                name: format!("P{n} degree {e}"),
                ambient: Ambient::construct(f, AmbientKind::Projective { n }).unwrap(),
                curve: CurveMap::rational_normal(f, e, n).unwrap(),
                kxc: ((n + 1) * e) as i64,
                rnc: true,
            });
        }
    }
    for dims in [vec![1, 1], vec![2, 1], vec![1, 2, 3]] {
        let (curve, ambient) = product_curve(f, &dims).unwrap();
        let kxc = dims.iter().map(|n| ((n + 1) * n) as i64).sum();
        out.push(Entry { name: format!("product {dims:?}"), ambient, curve, kxc, rnc: false });
    }
    for (ks, n) in [(vec![2], 4), (vec![2], 5), (vec![3], 5), (vec![1, 2], 3), (vec![1, 3], 4), (vec![2, 3], 4)] {
        let fc = flag_curve(f, &ks, n).unwrap();
        let kxc = flag_anticanonical(&ks, n).iter().zip(fc.curve.block_degrees()).map(|(a, e)| a * *e as i64).sum();
        out.push(Entry { name: format!("flag {ks:?} in {n}"), ambient: fc.ambient, curve: fc.curve, kxc, rnc: ks.len() == 1 });
    }
    for a in [2u32, 3, 4] {
        let weights = [1, 1, 1, a];
        let b = b_search(&weights, a).unwrap();
        let w = wps_curve(f, &weights, a, &b).unwrap();
        // The weighted coordinates have degrees 3·aᵢ.
        let kxc = 3 * weights.iter().map(|&w| w as i64).sum::<i64>();
        out.push(Entry { name: format!("P(1,1,1,{a})"), ambient: w.ambient, curve: w.curve, kxc, rnc: false });
    }
    out
}

#[test]
fn tangent_degree_is_anticanonical() {
    for entry in catalog() {
        let t = tangent_splitting(&entry.ambient, &entry.curve).unwrap();
        assert_eq!(t.tangent.rank(), entry.ambient.dim, "{}", entry.name);
        assert_eq!(t.tangent.degree(), entry.kxc, "{}", entry.name);
        assert!(t.tangent.is_globally_generated(), "{}", entry.name);
    }
}

#[test]
fn normal_bundle_bookkeeping() {
    for entry in catalog() {
        let t = tangent_splitting(&entry.ambient, &entry.curve).unwrap();
        let n = conormal_in_ambient(&entry.ambient, &entry.curve).unwrap().normal;
        assert_eq!(n.rank(), entry.ambient.dim - 1, "{}", entry.name);
        assert_eq!(n.degree(), t.tangent.degree() - 2, "{}", entry.name);
        // T_C = O(2) maps into TX|_C, so the normal bundle is a quotient of
        // a globally generated bundle.
        assert!(n.is_globally_generated(), "{}", entry.name);
    }
}

#[test]
fn normal_summands_of_normal_curves_are_bounded() {
    for entry in catalog().into_iter().filter(|e| e.rnc) {
        let e = entry.curve.total_degree() as i64;
        let n = conormal_in_ambient(&entry.ambient, &entry.curve).unwrap().normal;
        assert!(n.max().unwrap() <= e + 2, "{}: {n}", entry.name);
    }
}

#[test]
fn b_sequences_cover_every_exponent() {
    for a in 2u32..=6 {
        let weights = [1, 1, 1, a];
        let b = b_search(&weights, a).unwrap();
        assert!(check_b_sequence(&weights, a, &b).is_ok(), "a={a}");
    }
    // With b = (0,0,0,0) only the exponent 0 is reachable.
    assert!(matches!(check_b_sequence(&[1, 1, 1, 2], 2, &[0, 0, 0, 0]), Err(Error::InexpressibleExponent { ell: 1 })));
}
