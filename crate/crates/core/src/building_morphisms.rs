//! Morphisms between lattice buildings built from a group map `ρ` and an
//! apartment morphism `τ`, with the three hypotheses checked on the instance.
//!
//! Points of the source are presented as `g·f(x)` with `g ∈ SL_n` and `f` the
//! standard chart; the morphism sends such a point to `ρ(g)·f′(τ(x))`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::apartment_morphisms::{ApartmentMorphism, MorphismError, MorphismJson};
use crate::apartments::{ApartmentPoint, ModelApartment};
use crate::json::FieldMatrixJson;
use crate::lattice_building::{LatticeBuilding, LatticeClass, LatticeError};
use crate::ordered_groups::{LexValue, OrderedGroupMorphism, RankFlags};
use crate::root_systems::RootSystem;
use crate::sampling;
use crate::valued_fields::{FieldError, FieldKind, FieldMorphism, FieldMorphismKind, ValuationSpec};
use crate::weyl_extension::{block_embedding, WeylExtensionError};
use crate::FMatrix;

#[derive(Debug, Error)]
pub enum BuildingMorphismError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Extension(#[from] WeylExtensionError),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, BuildingMorphismError>;

/// A lattice building with `SL_n(𝔽)` acting on classes and on charts `E ↦ gE`.
#[derive(Debug, Clone)]
pub struct GBuildingInstance {
    pub name: String,
    pub building: LatticeBuilding,
}

impl GBuildingInstance {
    pub fn new(name: impl Into<String>, building: LatticeBuilding) -> Self {
        GBuildingInstance { name: name.into(), building }
    }

    pub fn spec(&self) -> ValuationSpec {
        self.building.spec()
    }

    pub fn n(&self) -> usize {
        self.building.n()
    }

    fn id(&self) -> FMatrix {
        FMatrix::identity(self.n())
    }

    /// `g·f(x)`.
    pub fn point(&self, g: &FMatrix, x: &ApartmentPoint) -> Result<LatticeClass> {
        Ok(self.building.chart_eval(g, x)?)
    }

    pub fn base_point(&self) -> LatticeClass {
        self.building.base_class()
    }

    /// `g` with `g·f(0) = f(x)`, diagonal in the standard chart.
    pub fn translation_witness(&self, x: &ApartmentPoint) -> Result<FMatrix> {
        Ok(FMatrix::diagonal(&self.building.point_to_diag(x)?))
    }

    /// Some `(g, x)` with `g ∈ SL_n` and `g·f(x) = c`, read off a chart
    /// through `f(0)` and `c`.
    pub fn presentation(&self, c: &LatticeClass) -> Result<(FMatrix, ApartmentPoint)> {
        let b = &self.building;
        let ca = b.common_apartment(&b.base_class(), c)?;
        // f_E(0) = f(0) and E = g·diag(d, 1, …, 1) with det g = 1
        let d = ca.chart.determinant();
        let mut g = ca.chart.clone();
        g.scale_col(0, &d.recip().ok_or(LatticeError::Singular)?);
        let mut e = b.e_coords(&ca.y);
        e[0] = &e[0] + &self.spec().valuation(&d);
        Ok((g, b.from_e_coords(&e)))
    }

    /// `(g.f)(x) = g.(f(x))` on seeded samples.
    pub fn compatibility_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        let b = &self.building;
        for _ in 0..samples {
            let g = sampling::sl_general(&mut rng, self.spec(), self.n());
            let x = b.sample_point(&mut rng, 2);
            let lhs = b.chart_eval(&g, &x);
            let rhs = b.chart_eval(&self.id(), &x).and_then(|p| b.act(&g, &p));
            t.record(lhs.is_ok() && lhs == rhs, || format!("x = {x}"));
        }
        t
    }
}

/// `ρ` on matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupMap {
    /// Same group, possibly with a different valuation on the field.
    Identity,
    /// `g ↦ diag(g, Id_{n−m})`.
    Block { m: usize, n: usize },
}

impl GroupMap {
    pub fn apply(&self, g: &FMatrix) -> FMatrix {
        match *self {
            GroupMap::Identity => g.clone(),
            GroupMap::Block { m, n } => {
                assert_eq!(g.rows(), m, "block source size");
                let mut out = FMatrix::identity(n);
                for i in 0..m {
                    for j in 0..m {
                        out[(i, j)] = g[(i, j)].clone();
                    }
                }
                out
            }
        }
    }
}

/// Counts with the first failing sample.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub samples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert_with(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Verdict on one hypothesis, with how it was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub passed: bool,
    /// Argument used when a closed-form stabilizer description applies.
    pub exact: Option<String>,
    pub sampled: Tally,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismCertificate {
    pub source: String,
    pub target: String,
    pub rho: GroupMap,
    pub tau: MorphismJson,
    pub conditions: Vec<ConditionReport>,
    pub compatibility: Vec<Tally>,
    pub flags: RankFlags,
    pub valid: bool,
}

impl MorphismCertificate {
    pub fn first_failed_condition(&self) -> Option<u8> {
        self.conditions.iter().find(|c| !c.passed).map(|c| c.condition)
    }
}

/// A candidate morphism `(ψ, φ, τ)` between two lattice-building instances.
#[derive(Debug, Clone)]
pub struct BuildingMorphism {
    pub source: GBuildingInstance,
    pub target: GBuildingInstance,
    pub rho: GroupMap,
    pub tau: ApartmentMorphism,
    /// The field map under `ρ`; identity on representations.
    pub field: FieldMorphism,
}

const STAB_SAMPLES: usize = 100;
const POINT_SAMPLES: usize = 50;

impl BuildingMorphism {
    /// `ψ(g·f(x)) = ρ(g)·f′(τ(x))`.
    pub fn apply(&self, g: &FMatrix, x: &ApartmentPoint) -> Result<LatticeClass> {
        self.target.point(&self.rho.apply(g), &self.tau.apply_tau(x))
    }

    /// `ψ(c)` through a presentation of `c`.
    pub fn apply_class(&self, c: &LatticeClass) -> Result<LatticeClass> {
        let (g, x) = self.source.presentation(c)?;
        self.apply(&g, &x)
    }

    /// `φ(g·f) = ρ(g)·f′`, as a chart matrix.
    pub fn apply_chart(&self, g: &FMatrix) -> FMatrix {
        self.rho.apply(g)
    }

    /// The closed-form argument for `𝒪 ⊆ 𝒪′` under the field map, if any.
    fn ring_inclusion(&self) -> Option<String> {
        let gamma = self.field.induced_gamma().ok()?;
        gamma.is_order_preserving().then(|| {
            format!(
                "v′ = γ∘v with γ = {:?} order preserving, so v ≥ 0 implies v′ ≥ 0",
                gamma.matrix().row(0).iter().map(ToString::to_string).collect::<Vec<_>>()
            )
        })
    }

    fn condition_one(&self, rng: &mut ChaCha8Rng) -> ConditionReport {
        let exact = self.ring_inclusion().map(|ring| match self.rho {
            GroupMap::Identity => format!("Stab(f(0)) = SL_n(𝒪) entrywise; {ring}"),
            GroupMap::Block { .. } => format!("diag(k, Id) is integral iff k is; {ring}"),
        });
        let mut sampled = Tally::default();
        let (src, tgt) = (&self.source, &self.target);
        for _ in 0..STAB_SAMPLES {
            let k = sampling::sl_integral(rng, src.spec(), src.n());
            let image = self.rho.apply(&k);
            let fixed = tgt.building.act(&image, &tgt.base_point()).map(|p| p == tgt.base_point()).unwrap_or(false);
            sampled.record(fixed, || format!("{:?}", FieldMatrixJson::with_kind(&k, src.spec().field()).entries));
        }
        let witness = sampled.first_failure.clone();
        ConditionReport { condition: 1, passed: exact.is_some() && sampled.passed(), exact, sampled, witness }
    }

    fn condition_two(&self, rng: &mut ChaCha8Rng) -> ConditionReport {
        let exact = self.ring_inclusion().map(|_| "the pointwise stabilizer is the unit diagonal, and units map to units".to_string());
        let mut sampled = Tally::default();
        let (src, tgt) = (&self.source, &self.target);
        let id = tgt.id();
        for _ in 0..STAB_SAMPLES {
            let mut d: Vec<_> = (0..src.n() - 1).map(|_| sampling::unit(rng, src.spec())).collect();
            let prod = d.iter().fold(crate::valued_fields::FieldElement::from_int(1), |a, b| &a * b);
            d.push(prod.recip().expect("unit"));
            let g = FMatrix::diagonal(&d);
            let ok = src.building.stab_apartment_membership(&g, &src.id()).unwrap_or(false)
                && tgt.building.stab_apartment_membership(&self.rho.apply(&g), &id).unwrap_or(false);
            sampled.record(ok, || format!("{:?}", FieldMatrixJson::with_kind(&g, src.spec().field()).entries));
        }
        let witness = sampled.first_failure.clone();
        ConditionReport { condition: 2, passed: exact.is_some() && sampled.passed(), exact, sampled, witness }
    }

    /// For sampled `x`, `g = diag(witnesses)` gives `g·f(0) = f(x)` and must
    /// give `ρ(g)·f′(0) = f′(τ(x))`.
    fn condition_three(&self, rng: &mut ChaCha8Rng) -> ConditionReport {
        let mut sampled = Tally::default();
        let (src, tgt) = (&self.source, &self.target);
        for _ in 0..POINT_SAMPLES {
            let x = src.building.sample_point(rng, 3);
            let g = src.translation_witness(&x).expect("integral point");
            let here = src.building.act(&g, &src.base_point()).ok() == src.point(&src.id(), &x).ok();
            let there = tgt.building.act(&self.rho.apply(&g), &tgt.base_point()).ok()
                == tgt.point(&tgt.id(), &self.tau.apply_tau(&x)).ok();
            sampled.record(here && there, || {
                format!(
                    "x = {x}, τ(x) = {}, g = {:?}",
                    self.tau.apply_tau(&x),
                    FieldMatrixJson::with_kind(&g, src.spec().field()).entries
                )
            });
        }
        let witness = sampled.first_failure.clone();
        ConditionReport { condition: 3, passed: sampled.passed(), exact: None, sampled, witness }
    }

    pub fn check_conditions_baby(&self, seed: u64) -> MorphismCertificate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let conditions = vec![self.condition_one(&mut rng), self.condition_two(&mut rng), self.condition_three(&mut rng)];
        let compatibility =
            vec![self.source.compatibility_check(POINT_SAMPLES, seed ^ 1), self.target.compatibility_check(POINT_SAMPLES, seed ^ 2)];
        let valid = conditions.iter().all(|c| c.passed) && compatibility.iter().all(Tally::passed);
        MorphismCertificate {
            source: self.source.name.clone(),
            target: self.target.name.clone(),
            rho: self.rho,
            tau: self.tau.to_json(),
            conditions,
            compatibility,
            flags: self.tau.flags(),
            valid,
        }
    }

    /// Bivariate entries grow quickly under products, so the checks over
    /// `ℚ(X,Y)` draw from the short-entry sampler.
    fn group_sample<R: Rng>(&self, rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
        match spec.field() {
            FieldKind::Bivariate => sampling::sl_light(rng, spec, n),
            FieldKind::Univariate => sampling::sl_general(rng, spec, n),
        }
    }

    fn sample_source_point<R: Rng>(&self, rng: &mut R) -> (FMatrix, ApartmentPoint) {
        let b = &self.source.building;
        let g = self.group_sample(rng, b.spec(), b.n());
        // mean removal gives every type of vertex, not only integral points
        let e: Vec<LexValue> = (0..b.n()).map(|_| sampling::lex_value(rng, b.spec().rank(), 2)).collect();
        let x = b.from_e_coords(&e);
        if self.target.building.point_to_diag(&self.tau.apply_tau(&x)).is_ok() {
            return (g, x);
        }
        // τ(x) is not a vertex of the target; fall back to the integral points
        (g, b.from_e_coords(&e.iter().map(|c| c.scale(&crate::Rational::from_integer(b.n().into()))).collect::<Vec<_>>()))
    }

    /// Two presentations of one source point must have equal images.
    pub fn collision_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        for _ in 0..samples {
            let (g, x) = self.sample_source_point(&mut rng);
            let p = self.source.point(&g, &x).expect("realizable point");
            let (h, y) = self.source.presentation(&p).expect("invertible");
            let same_point = self.source.point(&h, &y).ok().as_ref() == Some(&p);
            let image = self.apply(&g, &x).ok();
            let agree = image.is_some() && image == self.apply(&h, &y).ok();
            t.record(same_point && agree, || format!("x = {x}, y = {y}"));
        }
        t
    }

    /// `ψ(h·p) = ρ(h)·ψ(p)` with `ψ(p)` computed from a fresh presentation.
    pub fn equivariance_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        let (src, tgt) = (&self.source, &self.target);
        for _ in 0..samples {
            let (g, x) = self.sample_source_point(&mut rng);
            let h = self.group_sample(&mut rng, src.spec(), src.n());
            let p = src.point(&g, &x).expect("realizable point");
            let hp = src.building.act(&h, &p).expect("square");
            let lhs = self.apply_class(&hp).ok();
            let rhs = self.apply_class(&p).ok().and_then(|q| tgt.building.act(&self.rho.apply(&h), &q).ok());
            t.record(lhs.is_some() && lhs == rhs, || format!("x = {x}"));
        }
        t
    }

    /// `ψ ∘ z = φ(z) ∘ τ` for charts `z = g·f`, evaluating `ψ` on classes.
    pub fn diagram_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        for _ in 0..samples {
            let (g, x) = self.sample_source_point(&mut rng);
            let zx = self.source.point(&g, &x).expect("realizable point");
            let lhs = self.apply_class(&zx).ok();
            let rhs = self.target.point(&self.apply_chart(&g), &self.tau.apply_tau(&x)).ok();
            t.record(lhs.is_some() && lhs == rhs, || format!("x = {x}"));
        }
        t
    }

    /// Monomial `g` acting on `f` as `w` has `ρ(g)` acting on `f′` as `σ(w)`.
    pub fn coset_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        let (src, tgt) = (&self.source, &self.target);
        for _ in 0..samples {
            let g = sampling::monomial_sl(&mut rng, src.spec(), src.n());
            let w = src.building.monomial_to_affine_weyl(&g, &src.id()).expect("monomial");
            let image = tgt.building.monomial_to_affine_weyl(&self.rho.apply(&g), &tgt.id());
            t.record(image.as_ref().ok() == Some(&self.tau.apply_sigma(&w)), || format!("w = {w:?}"));
        }
        t
    }

    /// Distinct source classes have distinct images.
    pub fn injectivity_check(&self, samples: usize, seed: u64) -> Tally {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        for _ in 0..samples {
            let (g1, x1) = self.sample_source_point(&mut rng);
            let (g2, x2) = self.sample_source_point(&mut rng);
            let p1 = self.source.point(&g1, &x1).expect("realizable");
            let p2 = self.source.point(&g2, &x2).expect("realizable");
            let same = p1 == p2;
            let (i1, i2) = (self.apply(&g1, &x1).ok(), self.apply(&g2, &x2).ok());
            t.record(i1.is_some() && i2.is_some() && same == (i1 == i2), || format!("x1 = {x1}, x2 = {x2}"));
        }
        t
    }

    /// Every sampled target point `g′·f′(x′)` is hit by `ψ(g′·f(x))` for some
    /// lift `x` of `x′`. Needs `ρ = Id` and a surjective `τ`.
    pub fn surjectivity_check(&self, samples: usize, seed: u64) -> Result<Tally> {
        if self.rho != GroupMap::Identity || !self.tau.flags().surjective {
            return Err(BuildingMorphismError::Unsupported("surjectivity needs ρ = Id and a surjective τ".into()));
        }
        let lift = right_inverse(self.tau.gamma())
            .ok_or_else(|| BuildingMorphismError::Unsupported("γ has no rational right inverse".into()))?;
        let li = self.tau.l().inverse().ok_or_else(|| BuildingMorphismError::Unsupported("L is not invertible".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Tally::default();
        let tb = &self.target.building;
        for _ in 0..samples {
            let g = sampling::sl_general(&mut rng, tb.spec(), tb.n());
            let e: Vec<LexValue> = (0..tb.n()).map(|_| sampling::lex_value(&mut rng, tb.spec().rank(), 2)).collect();
            let xp = tb.from_e_coords(&e);
            let y = xp.transform(&li);
            let x = ApartmentPoint::new(y.coords.iter().map(|c| lift.apply(c).expect("dimension")).collect());
            let ok = self.tau.apply_tau(&x) == xp && self.apply(&g, &x).ok() == self.target.point(&g, &xp).ok();
            t.record(ok, || format!("x′ = {xp}"));
        }
        Ok(t)
    }
}

/// `Gᵀ(GGᵀ)⁻¹` for a full-row-rank `G`.
fn right_inverse(g: &OrderedGroupMorphism) -> Option<OrderedGroupMorphism> {
    let m = g.matrix();
    let mt = m.transpose();
    let inv = (m * &mt).inverse()?;
    Some(OrderedGroupMorphism::new(&mt * &inv))
}

/// Source and target equal, `ρ = Id`, `τ = Id`.
pub fn instance_identity(spec: ValuationSpec, n: usize) -> Result<BuildingMorphism> {
    let b = LatticeBuilding::new(spec, n)?;
    let tau = ApartmentMorphism::identity(b.apartment().clone());
    let name = format!("lattice {spec:?} n={n}");
    Ok(BuildingMorphism {
        source: GBuildingInstance::new(name.clone(), b.clone()),
        target: GBuildingInstance::new(name, b),
        rho: GroupMap::Identity,
        tau,
        field: FieldMorphism::new(FieldMorphismKind::IdentityRevalue, spec, spec)?,
    })
}

/// `ℚ(X, Y)` with the lexicographic valuation to `ℚ(X, Y)` with the `X`-degree
/// valuation, `ρ = Id` and `τ` changing `Λ` along `gamma`.
fn field_change_with(n: usize, gamma: OrderedGroupMorphism) -> Result<BuildingMorphism> {
    if !(2..=3).contains(&n) {
        return Err(BuildingMorphismError::Unsupported(format!("field change for n = {n}")));
    }
    let src = LatticeBuilding::new(ValuationSpec::LexMultideg, n)?;
    let tgt = LatticeBuilding::new(ValuationSpec::FirstVar, n)?;
    let tau = ApartmentMorphism::lambda_change(src.apartment().clone(), tgt.apartment().clone(), gamma)?;
    Ok(BuildingMorphism {
        source: GBuildingInstance::new(format!("lattice LexMultideg n={n}"), src),
        target: GBuildingInstance::new(format!("lattice FirstVar n={n}"), tgt),
        rho: GroupMap::Identity,
        tau,
        field: FieldMorphism::new(FieldMorphismKind::IdentityRevalue, ValuationSpec::LexMultideg, ValuationSpec::FirstVar)?,
    })
}

/// `τ = (Id, pr_1, id)`.
pub fn instance_field_change(n: usize) -> Result<BuildingMorphism> {
    field_change_with(n, OrderedGroupMorphism::projection(2, 0))
}

/// The field change with `γ` the coordinate swap followed by `pr_1`, which
/// reads the `Y`-exponent instead of the `X`-exponent.
pub fn instance_field_change_swapped(n: usize) -> Result<BuildingMorphism> {
    field_change_with(n, OrderedGroupMorphism::projection(2, 1))
}

/// `SL_m ↪ SL_n` as the upper-left block, `[L] ↦ [L ⊕ 𝒪^{n−m}]`, with `τ`
/// induced by `A_{m−1} ⊂ A_{n−1}`.
pub fn instance_block_embedding(spec: ValuationSpec, m: usize, n: usize) -> Result<BuildingMorphism> {
    if !(2 <= m && m < n && n <= 4) {
        return Err(BuildingMorphismError::Unsupported(format!("block embedding {m} ⊂ {n}")));
    }
    let pair = block_embedding(m, n).build()?;
    let sigma = pair.construct_sigma()?;
    let k = spec.rank();
    let tau = pair.apartment_morphism(&sigma, k, OrderedGroupMorphism::identity(k))?;
    // the same simple roots, on the first m coordinates
    let cut = |v: &Vec<crate::Rational>| v[..m].to_vec();
    let sub = pair.sub();
    let roots: Vec<_> = sub.roots().iter().map(cut).collect();
    let small = RootSystem::custom(roots, crate::QMatrix::identity(m), None)
        .and_then(|rs| rs.with_base(sub.simple_roots().iter().map(cut).collect()))
        .map_err(WeylExtensionError::from)?;
    let src_apt = Arc::new(ModelApartment::full(small, k).map_err(LatticeError::from)?);
    let src = LatticeBuilding::with_apartment(spec, src_apt)?;
    let same_words = (0..src.apartment().weyl().len()).all(|i| src.apartment().weyl().word(i) == tau.source().weyl().word(i));
    if !same_words {
        return Err(BuildingMorphismError::Unsupported("Weyl group orders differ after restriction".into()));
    }
    let tgt = LatticeBuilding::with_apartment(spec, tau.target().clone())?;
    Ok(BuildingMorphism {
        source: GBuildingInstance::new(format!("lattice {spec:?} n={m}"), src),
        target: GBuildingInstance::new(format!("lattice {spec:?} n={n}"), tgt),
        rho: GroupMap::Block { m, n },
        tau,
        field: FieldMorphism::new(FieldMorphismKind::IdentityRevalue, spec, spec)?,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InversionReport {
    pub morphism_verified: bool,
    pub checks: Tally,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.morphism_verified && self.checks.passed()
    }
}

/// With `a` the witness diagonal of `y`: `f(y) = a·f(0)` and
/// `f(τ(y)) = a⁻¹·f(0)` for the inversion `τ`.
pub fn inversion_selfcheck(spec: ValuationSpec, n: usize, samples: usize, seed: u64) -> Result<InversionReport> {
    let b = LatticeBuilding::new(spec, n)?;
    let tau = ApartmentMorphism::inversion(b.apartment().clone())?;
    let morphism_verified = tau.verify().passed();
    let id = FMatrix::identity(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Tally::default();
    for k in 0..samples {
        let y = if k == 0 { b.apartment().zero() } else { b.sample_point(&mut rng, 3) };
        let a = b.point_to_diag(&y)?;
        let ai: Vec<_> = a.iter().map(|x| x.recip().expect("nonzero")).collect();
        let forward = b.act(&FMatrix::diagonal(&a), &b.base_class())? == b.chart_eval(&id, &y)?;
        let backward = b.act(&FMatrix::diagonal(&ai), &b.base_class())? == b.chart_eval(&id, &tau.apply_tau(&y))?;
        let point = b.diag_to_point(&ai)? == tau.apply_tau(&y);
        checks.record(forward && backward && point, || format!("y = {y}"));
    }
    Ok(InversionReport { morphism_verified, checks })
}

/// A pair `x ≠ y` with `τ(x) = τ(y)` and `f(x) ≠ f(y)` whose images agree.
pub fn non_injectivity_witness(mor: &BuildingMorphism) -> Option<(ApartmentPoint, ApartmentPoint)> {
    let b = &mor.source.building;
    let k = b.spec().rank();
    let zero = b.apartment().zero();
    let id = FMatrix::identity(b.n());
    (0..k).rev().find_map(|i| {
        let mut e = vec![LexValue::zero(k); b.n()];
        e[0] = LexValue::unit(k, i);
        let x = b.from_e_coords(&e);
        let differs = mor.source.point(&id, &x).ok() != mor.source.point(&id, &zero).ok();
        let collapses = mor.tau.apply_tau(&x) == mor.tau.apply_tau(&zero)
            && mor.apply(&id, &x).ok() == mor.apply(&id, &zero).ok();
        (differs && collapses && !x.sub(&zero).is_zero()).then(|| (x, zero.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_instance_is_valid() {
        let mor = instance_identity(ValuationSpec::Degree, 2).unwrap();
        let cert = mor.check_conditions_baby(1);
        assert!(cert.valid, "{cert:?}");
        let o = mor.source.base_point();
        assert_eq!(mor.apply_class(&o).unwrap(), mor.target.base_point());
        assert!(mor.collision_check(20, 2).passed());
        assert!(mor.diagram_check(20, 3).passed());
    }

    #[test]
    fn field_change() {
        for n in [2, 3] {
            let mor = instance_field_change(n).unwrap();
            let cert = mor.check_conditions_baby(7);
            assert!(cert.valid, "{cert:?}");
            assert_eq!(cert.flags, RankFlags { injective: false, surjective: true });
            assert!(cert.conditions[0].exact.is_some());
            let c = mor.collision_check(50, 4);
            assert!(c.passed(), "{c:?}");
            assert!(mor.surjectivity_check(20, 5).unwrap().passed());
            let (x, y) = non_injectivity_witness(&mor).expect("pr_1 forgets the Y-exponent");
            assert_ne!(x, y);
        }
        let mor = instance_field_change(2).unwrap();
        assert!(mor.coset_check(30, 6).passed());
        assert!(mor.equivariance_check(20, 8).passed());
        assert!(mor.diagram_check(25, 9).passed());
    }

    #[test]
    fn swapped_field_change_fails_condition_three() {
        let mor = instance_field_change_swapped(2).unwrap();
        let cert = mor.check_conditions_baby(7);
        assert!(!cert.valid);
        assert_eq!(cert.first_failed_condition(), Some(3));
        assert!(cert.conditions[2].witness.is_some());
    }

    #[test]
    fn block_embedding() {
        for (m, n) in [(2, 3), (2, 4), (3, 4)] {
            let mor = instance_block_embedding(ValuationSpec::Degree, m, n).unwrap();
            let cert = mor.check_conditions_baby(3);
            assert!(cert.valid, "{m} {n}: {cert:?}");
            assert_eq!(cert.flags, RankFlags { injective: true, surjective: false });
            assert_eq!(mor.apply_class(&mor.source.base_point()).unwrap(), mor.target.base_point());
        }
        let mor = instance_block_embedding(ValuationSpec::Degree, 2, 3).unwrap();
        // S_2 ↪ S_3 fixing the third letter
        assert_eq!(mor.tau.sigma_s_image_size(), 2);
        assert!(mor.injectivity_check(50, 1).passed());
        assert!(mor.collision_check(30, 2).passed());
        assert!(mor.coset_check(50, 3).passed());
        assert!(mor.equivariance_check(30, 4).passed());
        assert!(mor.diagram_check(25, 5).passed());
        assert!(mor.surjectivity_check(5, 1).is_err());
    }

    #[test]
    fn inversion() {
        for n in [2, 3] {
            let r = inversion_selfcheck(ValuationSpec::Degree, n, 50, 4).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn group_map_block() {
        let g = FMatrix::identity(2).scale(&crate::valued_fields::FieldElement::from_int(3));
        let h = GroupMap::Block { m: 2, n: 3 }.apply(&g);
        assert!(h[(2, 2)] == crate::valued_fields::FieldElement::from_int(1) && h[(0, 2)] == crate::valued_fields::FieldElement::from_int(0));
    }
}
