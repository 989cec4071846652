use std::fmt::Write as _;

use serde::Serialize;
use vfree_core::ambient::{conormal_in_ambient, tangent_splitting, AmbientKind};
use vfree_core::bundles::{generic_kernel_splitting, SplittingType};
use vfree_core::ci::{
    construct_from_surjection, generic_ci_splitting, rathmann_check, src_certificate, Certificate, SurjectionData,
};
use vfree_core::curves::CurveMap;
use vfree_core::exact::{Field, PrimeField};
use vfree_core::products::{frobenius_curve, verify_product_theorem, ProductReport};

use crate::{bracket, parse, suite, with_field, CliError, Command, Report, RunConfig};

pub fn dispatch(command: &Command, config: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Splitting { source, target } => splitting(config, source, target),
        Command::NormalBundle { ambient, curve } => normal_bundle(config, ambient, curve),
        Command::Rathmann { e, n, b } => rathmann(config, *e, *n, *b),
        Command::Ci { ambient, curve, degrees, construct } => ci(config, ambient, curve, degrees, *construct),
        Command::SrcCertify { ambient, curve, degrees } => certify(config, ambient, curve, degrees),
        Command::Product { factors, d_min, d_max } => product(config, factors, *d_min, *d_max),
        Command::CharpDemo { p, d_max } => charp_demo(config, *p, *d_max),
        Command::VerifyPaper { only } => Ok(suite::report(&suite::run(config.seed, only))),
    }
}

#[derive(Serialize)]
struct SplittingDto {
    command: &'static str,
    characteristic: u64,
    seed: u64,
    source: Vec<i64>,
    target: Vec<i64>,
    splitting: Vec<i64>,
    rendered: String,
    globally_generated: bool,
    ample: bool,
    balanced: bool,
    samples: Vec<Option<Vec<i64>>>,
}

fn summands(s: &SplittingType) -> Vec<i64> {
    s.summands().to_vec()
}

fn line(label: &str, s: &SplittingType) -> String {
    format!("{label}: {s}  = {}\n", s.render_sum())
}

fn splitting(config: &RunConfig, source: &str, target: &str) -> Result<Report, CliError> {
    let e = SplittingType::new(parse::splitting(source)?);
    let f = SplittingType::new(parse::splitting(target)?);
    let mut rng = config.rng();
    let g = with_field!(config.field()?, fld => generic_kernel_splitting(fld, &e, &f, config.trials(), &mut rng)?);
    let dto = SplittingDto {
        command: "splitting",
        characteristic: g.characteristic,
        seed: config.seed,
        source: summands(&e),
        target: summands(&f),
        splitting: summands(&g.splitting),
        rendered: g.splitting.render_sum(),
        globally_generated: g.splitting.is_globally_generated(),
        ample: g.splitting.is_ample(),
        balanced: g.splitting.is_balanced(),
        samples: g.samples.iter().map(|s| s.as_ref().map(summands)).collect(),
    };
    let text = line(&format!("kernel of general {e} -> {f}"), &g.splitting);
    Ok(Report::new(&dto, text, true))
}

fn render_curve<F: Field>(c: &CurveMap<F>) -> Vec<Vec<String>> {
    c.blocks().iter().map(|b| b.iter().map(ToString::to_string).collect()).collect()
}

#[derive(Serialize)]
struct NormalBundleDto {
    command: &'static str,
    characteristic: u64,
    ambient: String,
    dimension: usize,
    curve: Vec<Vec<String>>,
    curve_degrees: Vec<usize>,
    anticanonical_degree: i64,
    tangent: Vec<i64>,
    normal: Vec<i64>,
    conormal: Vec<i64>,
    tangent_ample: bool,
    very_free: bool,
    balanced: bool,
}

fn normal_bundle(config: &RunConfig, ambient: &str, curve: &str) -> Result<Report, CliError> {
    let kind = parse::ambient_kind(ambient)?;
    let mut rng = config.rng();
    with_field!(config.field()?, fld => {
        let (x, c) = parse::curve(fld, &kind, curve, &mut rng)?;
        let t = tangent_splitting(&x, &c).map_err(|e| CliError::from(e).with_context(ambient))?;
        let n = conormal_in_ambient(&x, &c).map_err(|e| CliError::from(e).with_context(ambient))?;
        let dto = NormalBundleDto {
            command: "normal-bundle",
            characteristic: fld.characteristic(),
            ambient: x.label.clone(),
            dimension: x.dim,
            curve: render_curve(&c),
            curve_degrees: c.block_degrees().to_vec(),
            anticanonical_degree: t.anticanonical_degree,
            tangent: summands(&t.tangent),
            normal: summands(&n.normal),
            conormal: summands(&n.conormal),
            tangent_ample: t.tangent.is_ample(),
            very_free: n.normal.is_ample(),
            balanced: n.normal.is_balanced(),
        };
        let mut text = format!("{} (dimension {}), curve of degree {:?}\n", x.label, x.dim, c.block_degrees());
        text += &line("TX|_C", &t.tangent);
        text += &line("N_C|X", &n.normal);
        let _ = writeln!(text, "-K.C = {}, very free: {}", t.anticanonical_degree, dto.very_free);
        Ok(Report::new(&dto, text, true))
    })
}

#[derive(Serialize)]
struct PreimageDto {
    target: String,
    formula: Option<String>,
    verified: bool,
}

#[derive(Serialize)]
struct RathmannDto {
    command: &'static str,
    characteristic: u64,
    e: usize,
    n: usize,
    b: usize,
    source_dim: usize,
    target_dim: usize,
    rank: usize,
    surjective: bool,
    preimages_verified: bool,
    inapplicable: usize,
    preimages: Vec<PreimageDto>,
}

fn rathmann(config: &RunConfig, e: usize, n: usize, b: usize) -> Result<Report, CliError> {
    let kind = config.field()?;
    let r = with_field!(kind, fld => rathmann_check(fld, e, n, b)?);
    let dto = RathmannDto {
        command: "rathmann",
        characteristic: kind.characteristic(),
        e,
        n,
        b,
        source_dim: r.source_dim,
        target_dim: r.target_dim,
        rank: r.rank,
        surjective: r.surjective,
        preimages_verified: r.preimages_verified(),
        inapplicable: r.inapplicable(),
        preimages: r
            .preimages
            .iter()
            .map(|p| PreimageDto { target: p.target.clone(), formula: p.formula.clone(), verified: p.verified })
            .collect(),
    };
    let text = format!(
        "H0(I(2)) x H0(O({b})) -> H0(N*({})) for the degree {e} curve in P{n}: {} -> {}, rank {}, surjective: {}\n\
         closed-form preimages: {} verified, {} inapplicable\n",
        2 * e + b,
        r.source_dim,
        r.target_dim,
        r.rank,
        r.surjective,
        r.preimages.iter().filter(|p| p.verified).count(),
        r.inapplicable()
    );
    let pass = r.surjective && r.preimages_verified();
    Ok(Report::new(&dto, text, pass))
}

#[derive(Serialize)]
struct CiDto {
    command: &'static str,
    characteristic: u64,
    seed: u64,
    ambient: String,
    degrees: Vec<Vec<i64>>,
    mode: &'static str,
    normal_in_ambient: Vec<i64>,
    splitting: Vec<i64>,
    predicted: Vec<i64>,
    agrees: bool,
    samples: Vec<Option<Vec<i64>>>,
    forms: Vec<String>,
}

fn ci(config: &RunConfig, ambient: &str, curve: &str, degrees: &str, construct: bool) -> Result<Report, CliError> {
    let kind = parse::ambient_kind(ambient)?;
    let mut rng = config.rng();
    with_field!(config.field()?, fld => {
        let (x, c) = parse::curve(fld, &kind, curve, &mut rng)?;
        let classes = parse::classes(degrees, x.blocks.len())?;
        let data = conormal_in_ambient(&x, &c)?;
        let mut dto = CiDto {
            command: "ci",
            characteristic: fld.characteristic(),
            seed: config.seed,
            ambient: x.label.clone(),
            degrees: classes.iter().map(|d| d.multidegree.clone()).collect(),
            mode: if construct { "construct" } else { "sample" },
            normal_in_ambient: summands(&data.normal),
            splitting: Vec::new(),
            predicted: Vec::new(),
            agrees: false,
            samples: Vec::new(),
            forms: Vec::new(),
        };
        if construct {
            let sd = SurjectionData::random(&data, &c, classes.clone(), &mut rng)?;
            let built = construct_from_surjection(&x, &c, &sd)?;
            dto.splitting = summands(&built.normal);
            dto.predicted = summands(&built.kernel);
            dto.agrees = built.normal == built.kernel;
            dto.forms = built.forms.iter().map(|p| p.render_with(&x.coordinate_names)).collect();
        } else {
            let g = generic_ci_splitting(&x, &c, &classes, config.trials(), &mut rng)?;
            dto.splitting = summands(&g.splitting);
            dto.predicted = summands(&g.predicted);
            dto.agrees = g.agrees;
            dto.samples = g.samples.iter().map(|s| s.as_ref().map(summands)).collect();
        }
        let text = format!(
            "{} cut by {degrees}: N_C|Y = {} (expected {}), agrees: {}\n",
            x.label,
            bracket(&dto.splitting),
            bracket(&dto.predicted),
            dto.agrees
        );
        let pass = dto.agrees;
        Ok(Report::new(&dto, text, pass))
    })
}

#[derive(Serialize)]
struct GateDto {
    anticanonical_degree: i64,
    hypersurface_degree: i64,
    dimension: usize,
    count: usize,
    threshold: i64,
    pass: bool,
}

#[derive(Serialize)]
struct FlagsDto {
    smooth_along_c: bool,
    ample: bool,
    balanced: bool,
    very_free: bool,
}

#[derive(Serialize)]
pub struct CertificateDto {
    command: &'static str,
    characteristic: u64,
    seed: u64,
    ambient: String,
    degrees: Vec<Vec<i64>>,
    gate: GateDto,
    grassmannian_inequality: Option<bool>,
    fano: bool,
    degree_hypotheses: Vec<bool>,
    splitting: Option<Vec<i64>>,
    predicted: Option<Vec<i64>>,
    flags: FlagsDto,
    trials: usize,
    user_supplied: bool,
    notes: Vec<String>,
}

pub fn certificate_dto(c: &Certificate, seed: u64) -> CertificateDto {
    CertificateDto {
        command: "src-certify",
        characteristic: c.characteristic,
        seed,
        ambient: c.ambient.clone(),
        degrees: c.degrees.iter().map(|d| d.multidegree.clone()).collect(),
        gate: GateDto {
            anticanonical_degree: c.gate.kxc,
            hypersurface_degree: c.gate.dc,
            dimension: c.gate.m,
            count: c.gate.c,
            threshold: c.gate.threshold,
            pass: c.gate.pass,
        },
        grassmannian_inequality: c.grassmannian_inequality,
        fano: c.fano,
        degree_hypotheses: c.degree_hypotheses.clone(),
        splitting: c.splitting.as_ref().map(summands),
        predicted: c.predicted.as_ref().map(summands),
        flags: FlagsDto {
            smooth_along_c: c.flags.smooth_along_c,
            ample: c.flags.ample,
            balanced: c.flags.balanced,
            very_free: c.flags.very_free,
        },
        trials: c.trials,
        user_supplied: c.user_supplied,
        notes: c.notes.clone(),
    }
}

fn certify(config: &RunConfig, ambient: &str, curve: &str, degrees: &str) -> Result<Report, CliError> {
    let kind = parse::ambient_kind(ambient)?;
    let mut rng = config.rng();
    with_field!(config.field()?, fld => {
        let (x, c) = parse::curve(fld, &kind, curve, &mut rng)?;
        let classes = parse::classes(degrees, x.blocks.len())?;
        let cert = src_certificate(&x, &c, &classes, config.trials(), &mut rng)?;
        let dto = certificate_dto(&cert, config.seed);
        let mut text = format!(
            "{} cut by {degrees}\ngate: -K.C - D.C = {} - {} >= {}: {}\nfano: {}\n",
            cert.ambient, cert.gate.kxc, cert.gate.dc, cert.gate.threshold, cert.gate.pass, cert.fano
        );
        if let Some(g) = cert.grassmannian_inequality {
            let _ = writeln!(text, "grassmannian inequality: {g}");
        }
        match &cert.splitting {
            Some(s) => text += &line("N_C|Y", s),
            None => text += "N_C|Y: every sample was singular along C\n",
        }
        let _ = writeln!(text, "very free: {}", cert.flags.very_free);
        for n in &cert.notes {
            let _ = writeln!(text, "note: {n}");
        }
        Ok(Report::new(&dto, text, cert.flags.very_free))
    })
}

#[derive(Serialize)]
struct TwistDto {
    d: i64,
    observed: usize,
    formula: usize,
    transversal: bool,
    image_dim: usize,
}

#[derive(Serialize)]
struct TrialDto {
    trial: usize,
    conormal: Vec<i64>,
    pass: bool,
    per_d: Vec<TwistDto>,
}

#[derive(Serialize)]
struct ConditionDto {
    holds: bool,
    d0: Option<i64>,
    reason: String,
}

#[derive(Serialize)]
struct ProductDto {
    command: &'static str,
    characteristic: u64,
    seed: u64,
    factors: Vec<String>,
    d_range: [i64; 2],
    cotangent: Vec<Vec<i64>>,
    factor_conormal: Vec<Vec<i64>>,
    condition: ConditionDto,
    predicted_conormal: Vec<i64>,
    predicted_normal: Vec<i64>,
    best: Option<usize>,
    pass: bool,
    trials: Vec<TrialDto>,
}

fn product_dto(r: &ProductReport, factors: Vec<String>, d_range: [i64; 2], seed: u64) -> ProductDto {
    ProductDto {
        command: "product",
        characteristic: r.condition.characteristic,
        seed,
        factors,
        d_range,
        cotangent: r.profiles.iter().map(|p| summands(&p.cotangent)).collect(),
        factor_conormal: r.profiles.iter().map(|p| summands(&p.conormal)).collect(),
        condition: ConditionDto { holds: r.condition.holds, d0: r.condition.d0, reason: r.condition.reason.clone() },
        predicted_conormal: summands(&r.predicted_conormal),
        predicted_normal: summands(&r.predicted_normal),
        best: r.best,
        pass: r.pass,
        trials: r
            .trials
            .iter()
            .enumerate()
            .map(|(i, t)| TrialDto {
                trial: i,
                conormal: summands(&t.conormal),
                pass: t.pass,
                per_d: t
                    .per_d
                    .iter()
                    .map(|c| TwistDto {
                        d: c.d,
                        observed: c.observed,
                        formula: c.formula,
                        transversal: c.transversal,
                        image_dim: c.image_dim,
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn product_text(r: &ProductReport) -> String {
    let mut text = String::new();
    for (i, p) in r.profiles.iter().enumerate() {
        let _ = writeln!(text, "factor {i}: f*T*X = {}, N*_f = {}", p.cotangent, p.conormal);
    }
    let _ = writeln!(text, "characteristic condition: {} ({})", r.condition.holds, r.condition.reason);
    text += &line("predicted N_g", &r.predicted_normal);
    for (i, t) in r.trials.iter().enumerate() {
        let bad: Vec<i64> = t.per_d.iter().filter(|c| c.observed != c.formula).map(|c| c.d).collect();
        let _ = writeln!(
            text,
            "trial {i}: N*_g = {}, {}",
            t.conormal,
            if t.pass { String::from("matches the formula") } else { format!("differs at d = {bad:?}") }
        );
    }
    text
}

fn product(config: &RunConfig, factors: &[String], d_min: i64, d_max: i64) -> Result<Report, CliError> {
    if d_min > d_max {
        return Err(CliError::usage("empty twist range", format!("{d_min}..={d_max}")));
    }
    let mut rng = config.rng();
    with_field!(config.field()?, fld => {
        let mut curves = Vec::new();
        for spec in factors {
            let (a, c) = spec.split_once('@').unwrap_or((spec, "auto"));
            let kind = parse::ambient_kind(a)?;
            if !matches!(kind, AmbientKind::Projective { .. } | AmbientKind::Product { .. }) {
                return Err(CliError::usage("factors must be projective spaces or their products", spec.clone()));
            }
            curves.push(parse::curve(fld, &kind, c, &mut rng)?.1);
        }
        let r = verify_product_theorem(&curves, d_min..=d_max, config.trials(), &mut rng)?;
        let dto = product_dto(&r, factors.to_vec(), [d_min, d_max], config.seed);
        Ok(Report::new(&dto, product_text(&r), r.pass))
    })
}

#[derive(Serialize)]
struct ImageDto {
    d: i64,
    computed: usize,
    closed_form: i64,
}

#[derive(Serialize)]
struct CharpDto {
    command: &'static str,
    p: u64,
    seed: u64,
    cotangent: Vec<i64>,
    images: Vec<ImageDto>,
    closed_form_mismatches: Vec<i64>,
    observed_conormal: Vec<Vec<i64>>,
    predicted_conormal: Vec<i64>,
    formula_fails_for_every_alpha: bool,
    product: ProductDto,
}

/// `max(0, min(2(d−p−1), d−1))`, the closed form stated for the twisted pair.
pub fn stated_image_dim(p: i64, d: i64) -> i64 {
    (2 * (d - p - 1)).min(d - 1).max(0)
}

fn charp_demo(config: &RunConfig, p: u64, d_max: Option<i64>) -> Result<Report, CliError> {
    let f = PrimeField::new(p)?;
    let q = p as i64;
    let d_max = d_max.unwrap_or(2 * q + 2);
    let c = frobenius_curve(f)?;
    let mut rng = config.rng();
    let r = verify_product_theorem(&[c.clone(), c.clone()], 2..=d_max, config.trials(), &mut rng)?;
    let images: Vec<ImageDto> = r.trials[0]
        .per_d
        .iter()
        .map(|x| ImageDto { d: x.d, computed: x.image_dim, closed_form: stated_image_dim(q, x.d) })
        .collect();
    let mismatches: Vec<i64> = images.iter().filter(|i| i.computed as i64 != i.closed_form).map(|i| i.d).collect();
    let fails = r.trials.iter().all(|t| !t.pass);
    let dto = CharpDto {
        command: "charp-demo",
        p,
        seed: config.seed,
        cotangent: summands(&r.profiles[0].cotangent),
        closed_form_mismatches: mismatches.clone(),
        images,
        observed_conormal: r.trials.iter().map(|t| summands(&t.conormal)).collect(),
        predicted_conormal: summands(&r.predicted_conormal),
        formula_fails_for_every_alpha: fails,
        product: product_dto(&r, vec![String::from("frobenius"); 2], [2, d_max], config.seed),
    };
    let mut text = format!("p = {p}, curve (s^{0}, s^{p} t, s t^{p}, t^{0}) in P3\n", p + 1);
    text += &product_text(&r);
    let _ = writeln!(text, "image dimension of the pair vs max(0, min(2(d-p-1), d-1)):");
    for i in &dto.images {
        let _ = writeln!(text, "  d = {:>2}: {} vs {}", i.d, i.computed, i.closed_form);
    }
    let _ = writeln!(text, "general formula fails for every sampled automorphism: {fails}");
    Ok(Report::new(&dto, text, fails))
}
