//! Subcommand bodies. Each returns a verdict, summary lines and a JSON report.

use std::sync::Arc;

use lambda_buildings::apartment_morphisms::ApartmentMorphism;
use lambda_buildings::apartments::{ApartmentConfig, ModelApartment};
use lambda_buildings::building_morphisms::{
    instance_block_embedding, instance_field_change, instance_field_change_swapped, instance_identity, inversion_selfcheck,
    non_injectivity_witness, BuildingMorphism,
};
use lambda_buildings::lattice_building::LatticeBuilding;
use lambda_buildings::norm_building::{AdaptedNorm, NormBuilding};
use lambda_buildings::render::{render_rank2, RenderOptions};
use lambda_buildings::root_systems::{RootSystem, Tag};
use lambda_buildings::suite;
use lambda_buildings::valued_fields::{big_element_valuation_check, FieldMorphism, FieldMorphismKind};
use lambda_buildings::{FMatrix, OrderedGroupMorphism, Rational, ValuationSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{self, Result, UsageError};
use crate::{ApartmentCmd, BuildingArgs, BuildingCmd, Command, Common, Instance, LatticeCmd, MorphismCmd, NormCmd, RootsysCmd, WeylCmd};

pub struct Outcome {
    pub passed: bool,
    pub summary: Vec<String>,
    pub report: Value,
}

impl Outcome {
    fn new(passed: bool, summary: Vec<String>, report: Value) -> Self {
        Outcome { passed, summary, report }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn err<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

pub fn dispatch(cmd: Command) -> (Common, Result<Outcome>) {
    match cmd {
        Command::Rootsys(RootsysCmd::Verify { system, common }) => {
            let r = rootsys_verify(system.tag, system.rank);
            (common, r)
        }
        Command::Weyl(WeylCmd::Enumerate { system, common }) => {
            let r = weyl_enumerate(system.tag, system.rank);
            (common, r)
        }
        Command::Weyl(WeylCmd::Sigma { embed, common }) => (common, weyl_sigma(&embed)),
        Command::Apartment(ApartmentCmd::Verify { tag, rank, lambda_dim, config, common }) => {
            let r = apartment_verify(tag, rank, lambda_dim, config.as_deref(), &common);
            (common, r)
        }
        Command::Morphism(m) => match m {
            MorphismCmd::CheckTriangle { embed, common } => {
                let r = check_triangle(&embed, &common);
                (common, r)
            }
            MorphismCmd::Order { gamma, common } => {
                let r = order(&gamma, &common);
                (common, r)
            }
            MorphismCmd::Inversion { system, common } => (common, inversion(system.tag, system.rank)),
            MorphismCmd::Field { source, target, common } => {
                let r = field(source.into(), target.into(), &common);
                (common, r)
            }
        },
        Command::Lattice(l) => lattice(l),
        Command::Norm(n) => norm(n),
        Command::Building(BuildingCmd::Check { instance, building, m, common }) => {
            let r = building_check(instance, &building, m, &common);
            (common, r)
        }
        Command::Render { tag, rank, embed, svg, size, extent, no_labels, common } => {
            let opts = RenderOptions { size, extent, labels: !no_labels };
            let r = render(tag, rank, embed.as_deref(), &svg, &opts);
            (common, r)
        }
        Command::Suite { twice, common } => {
            let r = run_suite(twice, &common);
            (common, r)
        }
    }
}

fn rootsys_verify(tag: Tag, rank: usize) -> Result<Outcome> {
    let rs = RootSystem::standard(tag, rank).map_err(err)?;
    let axioms = rs.check_axioms();
    let ok = axioms.is_ok();
    let summary = vec![
        format!("{}: {} roots, {} positive, ambient dimension {}", tag.label(rank), rs.roots().len(), rs.num_positive(), rs.ambient_dim()),
        format!("axioms {}", verdict(ok)),
    ];
    let report = json!({
        "system": value(&rs.to_json()),
        "root_count": rs.roots().len(),
        "axioms": verdict(ok),
        "axiom_error": axioms.err().map(|e| e.to_string()),
    });
    Ok(Outcome::new(ok, summary, report))
}

fn weyl_enumerate(tag: Tag, rank: usize) -> Result<Outcome> {
    let rs = RootSystem::standard(tag, rank).map_err(err)?;
    let w = rs.enumerate_weyl_group().map_err(err)?;
    let words: Vec<&[usize]> = (0..w.len()).map(|i| w.word(i)).collect();
    let summary = vec![format!("|W({})| = {}", tag.label(rank), w.len())];
    Ok(Outcome::new(true, summary, json!({ "system": tag.label(rank), "order": w.len(), "words": words })))
}

fn weyl_sigma(embed: &str) -> Result<Outcome> {
    let spec = input::embedding(embed)?;
    let pair = spec.build().map_err(err)?;
    match pair.construct_sigma() {
        Ok(s) => {
            let summary = vec![
                format!("σ: |W| = {} → |W′| = {}, image size {}", s.table.len(), s.ambient_order, s.image_size),
                format!("injective {}, homomorphism {}, restricts to w on V {}", s.injective, s.homomorphism, s.restricts_to_w),
            ];
            Ok(Outcome::new(true, summary, json!({ "embedding": embed, "sigma": value(&s), "surjective": s.surjective() })))
        }
        Err(e) => Ok(Outcome::new(false, vec![format!("no σ: {e}")], json!({ "embedding": embed, "error": e.to_string() }))),
    }
}

fn apartment_verify(tag: Option<Tag>, rank: usize, k: usize, config: Option<&str>, common: &Common) -> Result<Outcome> {
    let apt = match config {
        Some(path) => {
            let cfg = ApartmentConfig::parse(&input::read_file(path)?).map_err(|e| UsageError(format!("`{path}`: {e}")))?;
            ModelApartment::from_config(&cfg).map_err(err)?
        }
        None => {
            let tag = tag.expect("clap requires --tag without --config");
            ModelApartment::full(RootSystem::standard(tag, rank).map_err(err)?, k).map_err(err)?
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let r = apt.verify_action(&mut rng, common.samples.unwrap_or(20));
    let summary = vec![format!("affine Weyl action: {} checks, {} failures", r.checks, r.failures.len())];
    Ok(Outcome::new(r.passed(), summary, json!({ "weyl_order": apt.weyl().len(), "lambda_dim": apt.lambda_dim(), "action": value(&r) })))
}

fn check_triangle(embed: &str, common: &Common) -> Result<Outcome> {
    let pair = input::embedding(embed)?.build().map_err(err)?;
    let exact = pair.check_condition_triangle();
    let confirmed = exact.witness.as_ref().map(|w| pair.confirm_witness(w));
    let oracle = pair.triangle_sampling_oracle(common.samples.unwrap_or(1000), common.seed);
    let consistent = !exact.passed || oracle.counterexamples == 0;
    let mut summary = vec![format!("condition (△): {} after {} pairs", verdict(exact.passed), exact.pairs_checked)];
    if let Some(w) = &exact.witness {
        summary.push(format!("witness x = ({}), w(x) = ({}), w′(x) = ({})", w.x.join(", "), w.w_x.join(", "), w.w_prime_x.join(", ")));
        summary.push(format!("witness confirmed: {}", confirmed == Some(true)));
    }
    summary.push(format!("sampling oracle: {} samples, {} counterexamples", oracle.samples, oracle.counterexamples));
    let report = json!({
        "embedding": embed,
        "condition": value(&exact),
        "witness_confirmed": confirmed,
        "oracle": value(&oracle),
        "oracle_consistent": consistent,
    });
    Ok(Outcome::new(exact.passed && consistent, summary, report))
}

fn order(gamma: &str, common: &Common) -> Result<Outcome> {
    let g = OrderedGroupMorphism::new(input::rational_matrix(gamma)?);
    let check = g.order_check();
    let violations = g.positivity_violations(common.samples.unwrap_or(1000), common.seed);
    let agrees = check.preserving == (violations == 0);
    let mut summary = vec![format!("order preserving: {}", check.preserving)];
    if let Some(w) = &check.witness {
        summary.push(format!("witness x = {w} > 0 with γ(x) = {} < 0", g.apply(w).map_err(err)?));
    }
    summary.push(format!("positivity oracle: {violations} violations, agrees {agrees}"));
    let report = json!({
        "gamma": value(&g),
        "decision": value(&check),
        "flags": value(&g.rank_flags()),
        "oracle_violations": violations,
        "oracle_agrees": agrees,
    });
    Ok(Outcome::new(check.preserving && agrees, summary, report))
}

fn inversion(tag: Tag, rank: usize) -> Result<Outcome> {
    let apt = Arc::new(ModelApartment::full(RootSystem::standard(tag, rank).map_err(err)?, 1).map_err(err)?);
    let tau = ApartmentMorphism::inversion(apt).map_err(err)?;
    let r = tau.verify();
    let summary = vec![format!("inversion on {}: {}", tag.label(rank), verdict(r.passed()))];
    Ok(Outcome::new(r.passed(), summary, json!({ "morphism": value(&tau.to_json()), "verification": value(&r) })))
}

fn field(source: ValuationSpec, target: ValuationSpec, common: &Common) -> Result<Outcome> {
    let eta = FieldMorphism::new(FieldMorphismKind::IdentityRevalue, source, target).map_err(err)?;
    let gamma = eta.induced_gamma().map_err(err)?;
    let square = eta.square_check(&gamma, common.samples.unwrap_or(100), common.seed);
    let summary = vec![
        format!("γ has rows {:?}", (0..gamma.target_dim()).map(|r| gamma.matrix().row(r).iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()),
        format!("γ∘v = v′ on {} samples: {} violations", square.samples, square.violations),
    ];
    Ok(Outcome::new(square.passed(), summary, json!({ "gamma": value(&gamma), "flags": value(&gamma.rank_flags()), "square": value(&square) })))
}

fn lattice_building(b: &BuildingArgs) -> Result<LatticeBuilding> {
    LatticeBuilding::new(b.valuation.into(), b.n).map_err(err)
}

fn lattice(cmd: LatticeCmd) -> (Common, Result<Outcome>) {
    match cmd {
        LatticeCmd::Valuation { valuation, common } => {
            let spec: ValuationSpec = valuation.into();
            let samples = common.samples.unwrap_or(200);
            let axioms = spec.axioms_check(samples, common.seed);
            let order = spec.order_compatibility_check(samples, common.seed ^ 1);
            let big = (spec.rank() == 1).then(|| big_element_valuation_check(spec, samples.min(50), 64, common.seed ^ 2));
            let ok = axioms.passed() && order.passed() && big.as_ref().is_none_or(|b| b.violations == 0);
            let summary = vec![
                format!("valuation axioms: {} violations in {samples}", axioms.violations),
                format!("order compatibility: {} violations in {samples}", order.violations),
                match &big {
                    Some(b) => format!("big element comparison: {} violations in {}", b.violations, b.samples.len()),
                    None => "big element comparison: needs a rank one valuation".into(),
                },
            ];
            let report = json!({ "valuation": spec, "axioms": value(&axioms), "order": value(&order), "big_element": value(&big) });
            (common, Ok(Outcome::new(ok, summary, report)))
        }
        LatticeCmd::Canon { building, matrix, common } => {
            let r = (|| {
                let b = lattice_building(&building)?;
                let m = input::field_matrix(&matrix, b.spec().field())?;
                let c = b.class_of(&m).map_err(err)?;
                let canon = b.class_json(&c);
                let summary = vec![format!("normal form {:?}", canon.entries)];
                Ok(Outcome::new(true, summary, json!({ "input": matrix, "canonical": value(&canon) })))
            })();
            (common, r)
        }
        LatticeCmd::Chart { building, matrix, point, common } => {
            let r = (|| {
                let b = lattice_building(&building)?;
                if let (Some(matrix), Some(point)) = (matrix, point) {
                    let e = input::field_matrix(&matrix, b.spec().field())?;
                    let x = input::point(&point)?;
                    let c = b.chart_eval(&e, &x).map_err(err)?;
                    let canon = b.class_json(&c);
                    return Ok(Outcome::new(true, vec![format!("f_E(x) = {:?}", canon.entries)], json!({ "point": value(&x), "class": value(&canon) })));
                }
                let samples = common.samples.unwrap_or(50);
                let twists = b.witness_invariance_check(samples, 10, common.seed);
                let diag = b.diagonal_roundtrip_check(samples, common.seed ^ 1);
                let summary = vec![
                    format!("witness invariance: {} failures in {}", twists.failures, twists.samples),
                    format!("diagonal roundtrip: {} failures in {}", diag.failures, diag.samples),
                ];
                Ok(Outcome::new(twists.passed() && diag.passed(), summary, json!({ "witness_invariance": value(&twists), "diagonal_roundtrip": value(&diag) })))
            })();
            (common, r)
        }
        LatticeCmd::Stab { building, matrix, common } => {
            let r = (|| {
                let b = lattice_building(&building)?;
                if let Some(matrix) = matrix {
                    let g = input::field_matrix(&matrix, b.spec().field())?;
                    let (fixes, integral) = b.stab_point_membership(&g).map_err(err)?;
                    let summary = vec![format!("fixes [L_0]: {fixes}; entries in 𝒪: {integral}")];
                    return Ok(Outcome::new(fixes == integral, summary, json!({ "fixes_base": fixes, "integral": integral })));
                }
                let r = b.stab_theorem_check(common.samples.unwrap_or(200), common.seed);
                let summary = vec![format!("dual-path stabilizer: {} disagreements in {} ({} members)", r.disagreements, r.samples, r.members)];
                Ok(Outcome::new(r.passed(), summary, value(&r)))
            })();
            (common, r)
        }
        LatticeCmd::CommonApartment { building, matrix, other, common } => {
            let r = (|| {
                let b = lattice_building(&building)?;
                let kind = b.spec().field();
                let c1 = b.class_of(&input::field_matrix(&matrix, kind)?).map_err(err)?;
                let c2 = b.class_of(&input::field_matrix(&other, kind)?).map_err(err)?;
                let ca = b.common_apartment(&c1, &c2).map_err(err)?;
                let ok = b.chart_eval(&ca.chart, &ca.x).ok().as_ref() == Some(&c1) && b.chart_eval(&ca.chart, &ca.y).ok().as_ref() == Some(&c2);
                let chart = lambda_buildings::json::FieldMatrixJson::with_kind(&ca.chart, kind);
                let summary = vec![format!("chart {:?} through x = {} and y = {}", chart.entries, ca.x, ca.y)];
                Ok(Outcome::new(ok, summary, json!({ "chart": value(&chart), "x": value(&ca.x), "y": value(&ca.y), "verified": ok })))
            })();
            (common, r)
        }
        LatticeCmd::Monomial { building, common } => {
            let r = (|| {
                let b = lattice_building(&building)?;
                let r = b.monomial_product_check(common.samples.unwrap_or(50), common.seed);
                Ok(Outcome::new(r.passed(), vec![format!("monomial products: {} failures in {}", r.failures, r.samples)], value(&r)))
            })();
            (common, r)
        }
    }
}

fn norm_building(b: &BuildingArgs) -> Result<NormBuilding> {
    NormBuilding::new(b.valuation.into(), b.n).map_err(err)
}

fn norm(cmd: NormCmd) -> (Common, Result<Outcome>) {
    match cmd {
        NormCmd::Eval { valuation, norm, vector, common } => {
            let r = (|| {
                let spec: ValuationSpec = valuation.into();
                let eta = AdaptedNorm::from_json(spec, &input::norm(&norm)?).map_err(err)?;
                let v = input::vector(&vector, spec.field())?;
                let exp = eta.exponent(&v).map_err(err)?;
                let shown = exp.as_ref().map_or("∞".to_string(), ToString::to_string);
                Ok(Outcome::new(true, vec![format!("exponent {shown}")], json!({ "exponent": exp.map(|e| e.to_string()) })))
            })();
            (common, r)
        }
        NormCmd::Chart { building, matrix, point, common } => {
            let r = (|| {
                let b = norm_building(&building)?;
                let e = match matrix {
                    Some(m) => input::field_matrix(&m, b.spec().field())?,
                    None => FMatrix::identity(b.n()),
                };
                let x = input::point(&point)?;
                let zero = vec![Rational::from_integer(0.into()); b.n()];
                let eta = b.chart_norm(&e, &zero, &x).map_err(err)?;
                let j = eta.to_json();
                Ok(Outcome::new(true, vec![format!("weights {:?}", j.weights)], value(&j)))
            })();
            (common, r)
        }
        NormCmd::Stab { building, matrix, point, common } => {
            let r = (|| {
                let b = norm_building(&building)?;
                if let (Some(matrix), Some(point)) = (matrix, point) {
                    let g = input::field_matrix(&matrix, b.spec().field())?;
                    let x = input::point(&point)?;
                    let by_inequalities = b.stab_inequality_membership(&g, &x).map_err(err)?;
                    let direct = b.stab_direct(&g, &x).map_err(err)?;
                    let defect = b.determinant_defect(&g, &x).map_err(err)?;
                    let ok = by_inequalities == direct && (!direct || defect == Rational::from_integer(0.into()));
                    let summary = vec![format!("inequalities {by_inequalities}, class equality {direct}, determinant defect {defect}")];
                    return Ok(Outcome::new(ok, summary, json!({ "inequalities": by_inequalities, "direct": direct, "determinant_defect": defect.to_string() })));
                }
                let r = b.stab_oracle_check(common.samples.unwrap_or(100), common.seed);
                let summary = vec![format!(
                    "norm stabilizer: {} disagreements, {} determinant failures in {} ({} members)",
                    r.disagreements, r.determinant_failures, r.samples, r.members
                )];
                Ok(Outcome::new(r.passed(), summary, value(&r)))
            })();
            (common, r)
        }
        NormCmd::Check { building, common } => {
            let r = (|| {
                let b = norm_building(&building)?;
                let samples = common.samples.unwrap_or(50);
                let axioms = b.axioms_check(samples, common.seed);
                let equality = b.equality_check(samples, 20, common.seed ^ 1);
                let summary = vec![
                    format!("ultrametric axioms: {} failures in {}", axioms.failures, axioms.samples),
                    format!("class equality vs evaluation: {} failures in {}", equality.failures, equality.samples),
                ];
                Ok(Outcome::new(axioms.passed() && equality.passed(), summary, json!({ "axioms": value(&axioms), "equality": value(&equality) })))
            })();
            (common, r)
        }
    }
}

fn building_check(instance: Instance, b: &BuildingArgs, m: usize, common: &Common) -> Result<Outcome> {
    let samples = common.samples.unwrap_or(30);
    let seed = common.seed;
    if instance == Instance::Inversion {
        let r = inversion_selfcheck(b.valuation.into(), b.n, samples, seed).map_err(err)?;
        let summary = vec![
            format!("inversion verified on the apartment: {}", r.morphism_verified),
            format!("diagonal self-check: {} failures in {}", r.checks.failures, r.checks.samples),
        ];
        return Ok(Outcome::new(r.passed(), summary, json!({ "instance": "inversion", "n": b.n, "report": value(&r) })));
    }
    let mor: BuildingMorphism = match instance {
        Instance::FieldChange => instance_field_change(b.n),
        Instance::FieldChangeSwapped => instance_field_change_swapped(b.n),
        Instance::BlockEmbed => instance_block_embedding(b.valuation.into(), m, b.n),
        Instance::Identity => instance_identity(b.valuation.into(), b.n),
        Instance::Inversion => unreachable!("handled above"),
    }
    .map_err(err)?;
    let cert = mor.check_conditions_baby(seed);
    let mut summary = vec![format!("{} → {}", cert.source, cert.target)];
    for c in &cert.conditions {
        summary.push(format!("condition ({}) {}", c.condition, verdict(c.passed)));
    }
    summary.push(format!("certificate {}", if cert.valid { "VALID" } else { "INVALID" }));
    let mut checks = serde_json::Map::new();
    let mut ok = cert.valid;
    if cert.valid {
        let mut run = |name: &str, t: lambda_buildings::building_morphisms::Tally| {
            summary.push(format!("{name}: {} failures in {}", t.failures, t.samples));
            ok &= t.passed();
            checks.insert(name.into(), value(&t));
        };
        run("collisions", mor.collision_check(samples, seed ^ 1));
        run("equivariance", mor.equivariance_check(samples, seed ^ 2));
        run("diagram", mor.diagram_check(samples, seed ^ 3));
        run("cosets", mor.coset_check(samples, seed ^ 4));
        if cert.flags.injective {
            run("injectivity", mor.injectivity_check(samples, seed ^ 5));
        }
        if let Ok(t) = mor.surjectivity_check(samples, seed ^ 6) {
            run("surjectivity", t);
        }
        if !cert.flags.injective {
            let w = non_injectivity_witness(&mor);
            summary.push(format!("non-injectivity witness: {}", w.is_some()));
            checks.insert("non_injectivity_witness".into(), json!(w.map(|(x, y)| [x.to_string(), y.to_string()])));
        }
    }
    let report = json!({ "instance": format!("{instance:?}"), "certificate": value(&cert), "checks": Value::Object(checks) });
    Ok(Outcome::new(ok, summary, report))
}

fn render(tag: Option<Tag>, rank: usize, embed: Option<&str>, svg: &std::path::Path, opts: &RenderOptions) -> Result<Outcome> {
    let (text, what) = match (tag, embed) {
        (_, Some(e)) => {
            let pair = input::embedding(e)?.build().map_err(err)?;
            (render_rank2(pair.ambient(), Some(pair.sub()), opts).map_err(err)?, format!("embedding {e}"))
        }
        (Some(tag), None) => {
            let rs = RootSystem::standard(tag, rank).map_err(err)?;
            (render_rank2(&rs, None, opts).map_err(err)?, tag.label(rank))
        }
        (None, None) => return Err(UsageError("render needs --tag or --embed".into())),
    };
    std::fs::write(svg, &text).map_err(|e| UsageError(format!("cannot write `{}`: {e}", svg.display())))?;
    let arrows = text.matches("marker-end").count();
    let summary = vec![format!("{what}: {arrows} arrows written to {}", svg.display())];
    Ok(Outcome::new(true, summary, json!({ "svg": svg.display().to_string(), "arrows": arrows, "bytes": text.len() })))
}

fn run_suite(twice: bool, common: &Common) -> Result<Outcome> {
    let first = suite::run(common.seed);
    let mut summary: Vec<String> =
        first.criteria.iter().map(|c| format!("criterion {:>2} {:<30} {}", c.id, c.name, verdict(c.passed))).collect();
    let mut passed = first.passed;
    let mut report = value(&first);
    if twice {
        let repro = suite::reproducibility(&first.to_json(), &suite::run(common.seed).to_json());
        summary.push(format!("criterion {:>2} {:<30} {}", repro.id, repro.name, verdict(repro.passed)));
        passed &= repro.passed;
        report["reproducibility"] = value(&repro);
    }
    Ok(Outcome::new(passed, summary, report))
}
