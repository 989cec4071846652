//! Text syntax for ambients, curves, classes and splitting types.

use rand_core::RngCore;
use vfree_core::ambient::{b_search, flag_curve, product_curve, wps_curve, wps_general_curve, Ambient, AmbientKind, DivisorClass};
use vfree_core::curves::CurveMap;
use vfree_core::exact::{BinForm, Field};
use vfree_core::products::frobenius_curve;

use crate::CliError;

pub fn int_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| CliError::usage(format!("cannot parse `{s}` as an integer"), text)))
        .collect()
}

/// `projective:n`, `product:n1,n2`, `grassmannian:k,n`, `flag:k1,k2/n`,
/// `wps:a0,...,am/a`.
pub fn ambient_kind(text: &str) -> Result<AmbientKind, CliError> {
    let (name, args) = text.split_once(':').ok_or_else(|| CliError::usage("expected KIND:ARGS", text))?;
    let bad = || CliError::usage("malformed ambient arguments", text);
    Ok(match name {
        "projective" | "p" => AmbientKind::Projective { n: args.trim().parse().map_err(|_| bad())? },
        "product" => AmbientKind::Product { dims: int_list(args)? },
        "grassmannian" | "g" => match int_list::<usize>(args)?.as_slice() {
            [k, n] => AmbientKind::Grassmannian { k: *k, n: *n },
            _ => return Err(bad()),
        },
        "flag" => {
            let (ks, n) = args.split_once('/').ok_or_else(bad)?;
            AmbientKind::Flag { ks: int_list(ks)?, n: n.trim().parse().map_err(|_| bad())? }
        }
        "wps" => {
            let (w, a) = args.split_once('/').ok_or_else(bad)?;
            AmbientKind::Wps { weights: int_list(w)?, a: a.trim().parse().map_err(|_| bad())? }
        }
        _ => return Err(CliError::usage(format!("unknown ambient kind `{name}`"), text)),
    })
}

/// Curve syntax:
/// - `auto`: the standard curve of the ambient (rational normal curve of
///   degree n in Pⁿ, product of rational normal curves, the explicit flag
///   curve, or a weighted monomial curve);
/// - `rnc:e` in a projective space;
/// - `monomials:e:k0,...,kn` for `s^(e−kᵢ) t^kᵢ` in a projective space;
/// - `frobenius` for `(s^(p+1), s^p t, s t^p, t^(p+1))` in P³;
/// - `random` for a general weighted curve.
pub fn curve<F: Field, R: RngCore + ?Sized>(
    field: F,
    kind: &AmbientKind,
    text: &str,
    rng: &mut R,
) -> Result<(Ambient<F>, CurveMap<F>), CliError> {
    let projective = || Ambient::construct(field, kind.clone()).map_err(CliError::from);
    match (kind, text.split(':').collect::<Vec<_>>().as_slice()) {
        (AmbientKind::Projective { n }, ["auto"]) => Ok((projective()?, CurveMap::rational_normal(field, *n, *n)?)),
        (AmbientKind::Projective { n }, ["rnc", e]) => {
            let e = e.parse().map_err(|_| CliError::usage("bad degree", text))?;
            Ok((projective()?, CurveMap::rational_normal(field, e, *n)?))
        }
        (AmbientKind::Projective { n }, ["monomials", e, ks]) => {
            let e: usize = e.parse().map_err(|_| CliError::usage("bad degree", text))?;
            let ks: Vec<usize> = int_list(ks)?;
            if ks.len() != n + 1 || ks.iter().any(|k| *k > e) {
                return Err(CliError::usage(format!("need {} exponents in 0..={e}", n + 1), text));
            }
            let block = ks.iter().map(|k| BinForm::monomial(field, e, *k, field.one())).collect();
            Ok((projective()?, CurveMap::new(field, vec![block])?))
        }
        (AmbientKind::Projective { n: 3 }, ["frobenius"]) => Ok((projective()?, frobenius_curve(field)?)),
        (AmbientKind::Product { dims }, ["auto"]) => {
            let (c, x) = product_curve(field, dims)?;
            Ok((x, c))
        }
        (AmbientKind::Grassmannian { k, n }, ["auto"]) => {
            let fc = flag_curve(field, &[*k], *n)?;
            Ok((fc.ambient, fc.curve))
        }
        (AmbientKind::Flag { ks, n }, ["auto"]) => {
            let fc = flag_curve(field, ks, *n)?;
            Ok((fc.ambient, fc.curve))
        }
        (AmbientKind::Wps { weights, a }, ["auto"]) => {
            let b = b_search(weights, *a)
                .ok_or_else(|| CliError::usage("no exponent sequence exists; use `random`", text))?;
            let w = wps_curve(field, weights, *a, &b)?;
            Ok((w.ambient, w.curve))
        }
        (AmbientKind::Wps { weights, a }, ["random"]) => {
            let w = wps_general_curve(field, weights, *a, rng)?;
            Ok((w.ambient, w.curve))
        }
        _ => Err(CliError::usage("curve syntax not available for this ambient", text)),
    }
}

/// Comma-separated classes; each is `d` (the same degree on every block)
/// or `d1xd2x...` (a multidegree).
pub fn classes(text: &str, blocks: usize) -> Result<Vec<DivisorClass>, CliError> {
    text.split(',')
        .map(|tok| {
            let parts: Vec<i64> = tok
                .split('x')
                .map(|p| p.trim().parse().map_err(|_| CliError::usage(format!("bad class `{tok}`"), text)))
                .collect::<Result<_, _>>()?;
            match parts.len() {
                1 => Ok(DivisorClass::new(vec![parts[0]; blocks])),
                l if l == blocks => Ok(DivisorClass::new(parts)),
                _ => Err(CliError::usage(format!("class `{tok}` needs {blocks} entries"), text)),
            }
        })
        .collect()
}

/// `[a1,a2,...]` or `a1,a2,...`
pub fn splitting(text: &str) -> Result<Vec<i64>, CliError> {
    int_list(text.trim().trim_start_matches('[').trim_end_matches(']'))
}
