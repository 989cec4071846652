//! Embedded ambient varieties and computations along curves inside them.

mod along;
mod constructors;
pub mod poly;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::curves::CurveMap;
use crate::error::{Error, Result};
use crate::exact::{formmat, EchelonBasis, Field};

pub use along::{
    conormal_in_ambient, gradient_map, gradient_tuple, tangent_splitting, validate_along_curve, AlongCertificate,
    ConormalData, TangentData,
};
pub use constructors::{
    b_search, check_b_sequence, flag_curve, product_curve, wps_curve, wps_general_curve, FlagCurve, WpsCurve,
};
pub use poly::Poly;

/// Which catalogued variety an [`Ambient`] is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbientKind {
    Projective { n: usize },
    Product { dims: Vec<usize> },
    Grassmannian { k: usize, n: usize },
    Flag { ks: Vec<usize>, n: usize },
    Wps { weights: Vec<u32>, a: u32 },
    /// An ambient cut further by user or constructed hypersurfaces.
    Custom,
}

/// A multidegree, one entry per coordinate block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub multidegree: Vec<i64>,
}

impl DivisorClass {
    pub fn new(multidegree: Vec<i64>) -> Self {
        DivisorClass { multidegree }
    }

    /// `d·H` on a single-block ambient.
    pub fn hyperplane_multiple(d: i64) -> Self {
        DivisorClass { multidegree: vec![d] }
    }

    /// `D·C = Σ d_j e_j`
    pub fn dot<F: Field>(&self, c: &CurveMap<F>) -> i64 {
        self.multidegree.iter().zip(c.block_degrees()).map(|(d, e)| d * *e as i64).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.multidegree.iter().all(|d| *d >= 0)
    }
}

/// `−K_X` as `(Σ_j num_j H_j) / den`; only weighted projective spaces need
/// a denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anticanonical {
    pub numerators: Vec<i64>,
    pub denominator: i64,
}

impl Anticanonical {
    pub fn integral(multidegree: Vec<i64>) -> Self {
        Anticanonical { numerators: multidegree, denominator: 1 }
    }

    /// `−K·C`, an error if the intersection is not an integer.
    pub fn dot<F: Field>(&self, c: &CurveMap<F>) -> Result<i64> {
        let num: i64 = self.numerators.iter().zip(c.block_degrees()).map(|(d, e)| d * *e as i64).sum();
        if num % self.denominator != 0 {
            return Err(Error::InvalidAmbient(alloc::format!(
                "anticanonical degree {num}/{} is not an integer",
                self.denominator
            )));
        }
        Ok(num / self.denominator)
    }

    /// `−K − ΣDᵢ` has positive multidegree in every block.
    pub fn minus_is_positive(&self, degrees: &[DivisorClass]) -> bool {
        (0..self.numerators.len()).all(|j| {
            let used: i64 = degrees.iter().map(|d| d.multidegree[j]).sum();
            self.numerators[j] > used * self.denominator
        })
    }
}

/// A multihomogeneous equation of an ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation<F: Field> {
    pub poly: Poly<F>,
    pub multidegree: Vec<u32>,
    pub label: String,
}

/// A variety embedded in a product of projective spaces by explicit
/// equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient<F: Field> {
    pub field: F,
    pub label: String,
    pub kind: AmbientKind,
    /// Number of coordinates in each block.
    pub blocks: Vec<usize>,
    pub dim: usize,
    pub equations: Vec<Equation<F>>,
    /// Maximal H-degree of the ideal generators.
    pub gen_degree: u32,
    pub anticanonical: Anticanonical,
    pub coordinate_names: Vec<String>,
}

impl<F: Field> Ambient<F> {
    pub fn construct(field: F, kind: AmbientKind) -> Result<Self> {
        match kind {
            AmbientKind::Projective { n } => {
                if n == 0 {
                    return Err(Error::InvalidAmbient(String::from("projective dimension must be positive")));
                }
                Ok(Self::plain(field, vec![n], AmbientKind::Projective { n }, alloc::format!("P^{n}")))
            }
            AmbientKind::Product { dims } => {
                if dims.is_empty() || dims.contains(&0) {
                    return Err(Error::InvalidAmbient(String::from("product factors must have positive dimension")));
                }
                let label = dims.iter().map(|n| alloc::format!("P^{n}")).collect::<Vec<_>>().join("x");
                Ok(Self::plain(field, dims.clone(), AmbientKind::Product { dims }, label))
            }
            AmbientKind::Grassmannian { k, n } => grassmannian(field, k, n),
            AmbientKind::Flag { ks, n } if ks.len() == 1 => grassmannian(field, ks[0], n),
            AmbientKind::Flag { ks, n } => flag(field, ks, n),
            AmbientKind::Wps { weights, a } => wps(field, weights, a),
            AmbientKind::Custom => Err(Error::InvalidAmbient(String::from("custom ambients are built from equations"))),
        }
    }

    fn plain(field: F, dims: Vec<usize>, kind: AmbientKind, label: String) -> Self {
        let blocks: Vec<usize> = dims.iter().map(|n| n + 1).collect();
        let mut names = Vec::new();
        for (j, b) in blocks.iter().enumerate() {
            for i in 0..*b {
                names.push(if blocks.len() == 1 { alloc::format!("x{i}") } else { alloc::format!("x{j}_{i}") });
            }
        }
        Ambient {
            field,
            label,
            kind,
            dim: dims.iter().sum(),
            blocks,
            equations: Vec::new(),
            gen_degree: 1,
            anticanonical: Anticanonical::integral(dims.iter().map(|n| *n as i64 + 1).collect()),
            coordinate_names: names,
        }
    }

    /// Builds an ambient from explicit equations; nothing beyond the declared
    /// multidegrees is assumed.
    pub fn custom(
        field: F,
        label: String,
        blocks: Vec<usize>,
        dim: usize,
        polys: Vec<Poly<F>>,
        anticanonical: Anticanonical,
    ) -> Result<Self> {
        let nvars: usize = blocks.iter().sum();
        let mut equations = Vec::new();
        let mut gen_degree = 1;
        for (q, p) in polys.into_iter().enumerate() {
            if p.nvars() != nvars {
                return Err(Error::InvalidAmbient(alloc::format!("equation {q} uses {} variables", p.nvars())));
            }
            let md = p
                .multidegree(&blocks)
                .ok_or_else(|| Error::InvalidAmbient(alloc::format!("equation {q} is not multihomogeneous")))?;
            gen_degree = gen_degree.max(md.iter().sum());
            equations.push(Equation { poly: p, multidegree: md, label: alloc::format!("F{q}") });
        }
        let names = (0..nvars).map(|i| alloc::format!("x{i}")).collect();
        Ok(Ambient {
            field,
            label,
            kind: AmbientKind::Custom,
            blocks,
            dim,
            equations,
            gen_degree,
            anticanonical,
            coordinate_names: names,
        })
    }

    pub fn num_coordinates(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Dimension of the product of projective spaces containing the ambient.
    pub fn embedding_dim(&self) -> usize {
        self.blocks.iter().map(|b| b - 1).sum()
    }

    pub fn codim(&self) -> usize {
        self.embedding_dim() - self.dim
    }

    pub fn is_catalogued(&self) -> bool {
        self.kind != AmbientKind::Custom
    }

    pub fn render_equation(&self, q: usize) -> String {
        self.equations[q].poly.render_with(&self.coordinate_names)
    }

    /// The complete intersection with further hypersurfaces of the given
    /// classes.
    pub fn intersect(&self, polys: &[Poly<F>], degrees: &[DivisorClass]) -> Result<Self> {
        if polys.len() != degrees.len() {
            return Err(Error::Shape(alloc::format!("{} forms for {} degrees", polys.len(), degrees.len())));
        }
        if polys.len() > self.dim {
            return Err(Error::InvalidAmbient(String::from("too many hypersurfaces")));
        }
        let mut equations = self.equations.clone();
        let mut gen_degree = self.gen_degree;
        for (i, (p, d)) in polys.iter().zip(degrees).enumerate() {
            let md = p
                .multidegree(&self.blocks)
                .ok_or_else(|| Error::InvalidAmbient(alloc::format!("hypersurface {i} is not multihomogeneous")))?;
            if md.iter().map(|x| *x as i64).ne(d.multidegree.iter().copied()) {
                return Err(Error::InvalidAmbient(alloc::format!("hypersurface {i} has multidegree {md:?}")));
            }
            gen_degree = gen_degree.max(md.iter().sum());
            equations.push(Equation { poly: p.clone(), multidegree: md, label: alloc::format!("Y{i}") });
        }
        let mut numerators = self.anticanonical.numerators.clone();
        for d in degrees {
            for (n, x) in numerators.iter_mut().zip(&d.multidegree) {
                *n -= x * self.anticanonical.denominator;
            }
        }
        Ok(Ambient {
            field: self.field,
            label: alloc::format!("{} ∩ {} hypersurfaces", self.label, polys.len()),
            kind: AmbientKind::Custom,
            blocks: self.blocks.clone(),
            dim: self.dim - polys.len(),
            equations,
            gen_degree,
            anticanonical: Anticanonical { numerators, denominator: self.anticanonical.denominator },
            coordinate_names: self.coordinate_names.clone(),
        })
    }
}

/// Plücker coordinate labels: `k`-subsets of `0..n` in lexicographic order.
pub fn pluecker_subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    formmat::combinations(n, k)
}

fn subset_index(subsets: &[Vec<usize>], seq: &[usize]) -> Option<(bool, usize)> {
    let mut sorted = seq.to_vec();
    let mut negative = false;
    // insertion sort tracking the permutation sign
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    subsets.binary_search(&sorted).ok().map(|i| (negative, i))
}

/// `Σ_l (−1)^l p_{I ∪ j_l} q_{J ∖ j_l}` for `p` on `k`-subsets in block
/// offset `off_p` and `q` on `k2`-subsets at `off_q`.
fn bilinear_relation<F: Field>(
    field: F,
    nvars: usize,
    (k, off_p): (usize, usize),
    (k2, off_q): (usize, usize),
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
) -> Poly<F> {
    let p_subsets = pluecker_subsets(k, n);
    let q_subsets = pluecker_subsets(k2, n);
    let mut rel = Poly::zero(field, nvars);
    for (l, &jl) in j_set.iter().enumerate() {
        let mut left = i_set.to_vec();
        left.push(jl);
        let right: Vec<usize> = j_set.iter().copied().filter(|&x| x != jl).collect();
        let (Some((neg_a, a)), Some((neg_b, b))) = (subset_index(&p_subsets, &left), subset_index(&q_subsets, &right))
        else {
            continue;
        };
        let negative = (l % 2 == 1) ^ neg_a ^ neg_b;
        let c = field.from_i64(if negative { -1 } else { 1 });
        let term = Poly::var(field, nvars, off_p + a).mul(&Poly::var(field, nvars, off_q + b)).scale(&c);
        rel = rel.add(&term);
    }
    rel
}

/// Keeps a linearly independent subset of quadratic relations.
fn independent<F: Field>(field: F, rels: Vec<Poly<F>>) -> Vec<Poly<F>> {
    let mut keys: Vec<Vec<u32>> = rels.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    keys.sort();
    keys.dedup();
    let mut basis = EchelonBasis::new(field, keys.len());
    let mut out = Vec::new();
    for p in rels {
        let mut v = vec![field.zero(); keys.len()];
        for (e, c) in p.terms() {
            v[keys.binary_search(e).expect("collected key")] = c.clone();
        }
        if basis.insert(&v) {
            out.push(p);
        }
    }
    out
}

fn pluecker_block_relations<F: Field>(
    field: F,
    nvars: usize,
    (k, off_p): (usize, usize),
    (k2, off_q): (usize, usize),
    n: usize,
) -> Vec<Poly<F>> {
    let mut rels = Vec::new();
    if k == 0 || k2 + 1 > n {
        return rels;
    }
    for i_set in formmat::combinations(n, k - 1) {
        for j_set in formmat::combinations(n, k2 + 1) {
            let r = bilinear_relation(field, nvars, (k, off_p), (k2, off_q), n, &i_set, &j_set);
            if !r.is_zero() {
                rels.push(r);
            }
        }
    }
    independent(field, rels)
}

fn pluecker_names(k: usize, n: usize, prefix: &str) -> Vec<String> {
    pluecker_subsets(k, n)
        .iter()
        .map(|s| {
            let idx: String = s.iter().map(|i| alloc::format!("{}", i + 1)).collect::<Vec<_>>().join("");
            alloc::format!("{prefix}{idx}")
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    formmat::combinations(n, k).len()
}

fn grassmannian<F: Field>(field: F, k: usize, n: usize) -> Result<Ambient<F>> {
    if k == 0 || k >= n {
        return Err(Error::InvalidAmbient(alloc::format!("G({k},{n}) needs 1 <= k <= n-1")));
    }
    let nvars = binomial(n, k);
    let polys = pluecker_block_relations(field, nvars, (k, 0), (k, 0), n);
    let equations = polys
        .into_iter()
        .enumerate()
        .map(|(q, p)| Equation { poly: p, multidegree: vec![2], label: alloc::format!("plucker{q}") })
        .collect::<Vec<_>>();
    Ok(Ambient {
        field,
        label: alloc::format!("G({k},{n})"),
        kind: AmbientKind::Grassmannian { k, n },
        blocks: vec![nvars],
        dim: k * (n - k),
        gen_degree: if equations.is_empty() { 1 } else { 2 },
        equations,
        anticanonical: Anticanonical::integral(vec![n as i64]),
        coordinate_names: pluecker_names(k, n, "p"),
    })
}

fn flag<F: Field>(field: F, ks: Vec<usize>, n: usize) -> Result<Ambient<F>> {
    if ks.is_empty() || ks[0] == 0 || *ks.last().expect("nonempty") >= n || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidAmbient(alloc::format!("flag type {ks:?} in dimension {n} is malformed")));
    }
    let blocks: Vec<usize> = ks.iter().map(|&k| binomial(n, k)).collect();
    let nvars: usize = blocks.iter().sum();
    let offsets: Vec<usize> = blocks.iter().scan(0, |acc, b| {
        let o = *acc;
        *acc += b;
        Some(o)
    }).collect();
    let mut equations = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let mut md = vec![0u32; ks.len()];
        md[i] = 2;
        for (q, p) in pluecker_block_relations(field, nvars, (k, offsets[i]), (k, offsets[i]), n).into_iter().enumerate() {
            equations.push(Equation { poly: p, multidegree: md.clone(), label: alloc::format!("plucker{}_{q}", i + 1) });
        }
    }
    for i in 0..ks.len().saturating_sub(1) {
        let mut md = vec![0u32; ks.len()];
        md[i] = 1;
        md[i + 1] = 1;
        let rels = pluecker_block_relations(field, nvars, (ks[i], offsets[i]), (ks[i + 1], offsets[i + 1]), n);
        for (q, p) in rels.into_iter().enumerate() {
            equations.push(Equation {
                poly: p,
                multidegree: md.clone(),
                label: alloc::format!("incidence{}{}_{q}", i + 1, i + 2),
            });
        }
    }
    let mut dim = 0;
    let mut prev = 0;
    for &k in &ks {
        dim += (k - prev) * (n - k);
        prev = k;
    }
    let anticanonical = (0..ks.len())
        .map(|i| {
            let next = ks.get(i + 1).copied().unwrap_or(n);
            let before = if i == 0 { 0 } else { ks[i - 1] };
            (next - before) as i64
        })
        .collect();
    let mut names = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        names.extend(pluecker_names(k, n, &alloc::format!("p{}_", i + 1)));
    }
    let label = alloc::format!(
        "F({};{n})",
        ks.iter().map(|k| alloc::format!("{k}")).collect::<Vec<_>>().join(",")
    );
    Ok(Ambient {
        field,
        label,
        kind: AmbientKind::Flag { ks, n },
        blocks,
        dim,
        gen_degree: 2,
        equations,
        anticanonical: Anticanonical::integral(anticanonical),
        coordinate_names: names,
    })
}

/// Exponent vectors `c` with `Σ cᵢ wᵢ = a`, lexicographically descending.
pub fn weighted_monomials(weights: &[u32], a: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], a: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if weights.is_empty() {
            if a == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let w = weights[0];
        for c in (0..=a / w).rev() {
            prefix.push(c);
            go(&weights[1..], a - c * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, a, &mut Vec::new(), &mut out);
    out
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

fn wps<F: Field>(field: F, weights: Vec<u32>, a: u32) -> Result<Ambient<F>> {
    if weights.len() < 2 || weights.contains(&0) || a == 0 {
        return Err(Error::InvalidAmbient(String::from("weights and degree must be positive, with at least two weights")));
    }
    for skip in 0..weights.len() {
        let g = weights.iter().enumerate().filter(|(i, _)| *i != skip).fold(0, |g, (_, w)| gcd_u32(g, *w));
        if g != 1 {
            return Err(Error::InvalidAmbient(alloc::format!("weights {weights:?} are not well formed")));
        }
    }
    let lcm = weights.iter().fold(1u32, |l, w| l / gcd_u32(l, *w) * w);
    if !a.is_multiple_of(lcm) {
        return Err(Error::InvalidAmbient(alloc::format!("degree {a} is not a multiple of lcm {lcm}")));
    }
    let coords = weighted_monomials(&weights, a);
    let nvars = coords.len();
    let mut groups: Vec<(Vec<u32>, Vec<(usize, usize)>)> = Vec::new();
    for i in 0..nvars {
        for j in i..nvars {
            let sum: Vec<u32> = coords[i].iter().zip(&coords[j]).map(|(x, y)| x + y).collect();
            match groups.iter_mut().find(|(s, _)| *s == sum) {
                Some((_, pairs)) => pairs.push((i, j)),
                None => groups.push((sum, vec![(i, j)])),
            }
        }
    }
    let mut polys = Vec::new();
    for (_, pairs) in &groups {
        let (i0, j0) = pairs[0];
        let base = Poly::var(field, nvars, i0).mul(&Poly::var(field, nvars, j0));
        for &(i, j) in &pairs[1..] {
            polys.push(base.sub(&Poly::var(field, nvars, i).mul(&Poly::var(field, nvars, j))));
        }
    }
    let polys = independent(field, polys);
    let equations = polys
        .into_iter()
        .enumerate()
        .map(|(q, p)| Equation { poly: p, multidegree: vec![2], label: alloc::format!("binomial{q}") })
        .collect::<Vec<_>>();
    let names = coords
        .iter()
        .map(|c| {
            let parts: Vec<String> = c
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { alloc::format!("x{i}") } else { alloc::format!("x{i}^{e}") })
                .collect();
            alloc::format!("[{}]", parts.join("*"))
        })
        .collect();
    let label = alloc::format!(
        "P({}) in degree {a}",
        weights.iter().map(|w| alloc::format!("{w}")).collect::<Vec<_>>().join(",")
    );
    let total: i64 = weights.iter().map(|w| *w as i64).sum();
    Ok(Ambient {
        field,
        label,
        kind: AmbientKind::Wps { weights: weights.clone(), a },
        blocks: vec![nvars],
        dim: weights.len() - 1,
        gen_degree: if equations.is_empty() { 1 } else { 2 },
        equations,
        anticanonical: Anticanonical { numerators: vec![total], denominator: a as i64 },
        coordinate_names: names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rationals;

    #[test]
    fn grassmannian_g24_has_one_quadric() {
        let g = Ambient::construct(Rationals, AmbientKind::Grassmannian { k: 2, n: 4 }).unwrap();
        assert_eq!(g.blocks, vec![6]);
        assert_eq!(g.dim, 4);
        assert_eq!(g.equations.len(), 1);
        let text = g.render_equation(0);
        for mono in ["p12*p34", "p13*p24", "p14*p23"] {
            assert!(text.contains(mono), "{text}");
        }
        assert_eq!(g.anticanonical.numerators, vec![4]);
    }

    #[test]
    fn grassmannian_g25_relations() {
        let g = Ambient::construct(Rationals, AmbientKind::Grassmannian { k: 2, n: 5 }).unwrap();
        assert_eq!(g.equations.len(), 5);
        assert_eq!(g.codim(), 3);
    }

    #[test]
    fn projective_space_has_no_equations() {
        let p = Ambient::construct(Rationals, AmbientKind::Projective { n: 3 }).unwrap();
        assert!(p.equations.is_empty());
        assert_eq!(p.anticanonical.numerators, vec![4]);
    }

    #[test]
    fn complete_flag_in_three_space() {
        let f = Ambient::construct(Rationals, AmbientKind::Flag { ks: vec![1, 2], n: 3 }).unwrap();
        assert_eq!(f.blocks, vec![3, 3]);
        assert_eq!(f.dim, 3);
        assert_eq!(f.equations.len(), 1);
        assert_eq!(f.equations[0].multidegree, vec![1, 1]);
        assert_eq!(f.anticanonical.numerators, vec![2, 2]);
    }

    #[test]
    fn weighted_cone() {
        let w = Ambient::construct(Rationals, AmbientKind::Wps { weights: vec![1, 1, 2], a: 2 }).unwrap();
        assert_eq!(w.blocks, vec![4]);
        assert_eq!(w.equations.len(), 1);
        assert_eq!(w.codim(), 1);
        let w = Ambient::construct(Rationals, AmbientKind::Wps { weights: vec![1, 1, 1, 2], a: 2 }).unwrap();
        assert_eq!(w.blocks, vec![7]);
        assert_eq!(w.equations.len(), 6);
        assert!(Ambient::construct(Rationals, AmbientKind::Wps { weights: vec![2, 2, 1], a: 2 }).is_err());
    }

    #[test]
    fn malformed_parameters() {
        assert!(Ambient::construct(Rationals, AmbientKind::Grassmannian { k: 4, n: 4 }).is_err());
        assert!(Ambient::construct(Rationals, AmbientKind::Flag { ks: vec![2, 1], n: 4 }).is_err());
        assert!(Ambient::construct(Rationals, AmbientKind::Projective { n: 0 }).is_err());
    }
}
