//! Model apartments `𝔸 = Span_ℚ(Φ) ⊗ Λ` with the action of `W_a = T ⋊ W_s`.
//!
//! Points are stored in the coordinates of the chosen base `Δ`: a point is a
//! tuple `(λ_α)_{α ∈ Δ}` of values in `Λ = ℚ^k`. Spherical Weyl elements act
//! through their rational `|Δ| × |Δ|` matrices in these coordinates.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordered_groups::LexValue;
use crate::root_systems::{RootSystem, RootSystemError, Tag, WeylGroup};
use crate::scalar::qi;
use crate::{QMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApartmentError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("point has {found} coordinates, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("value of dimension {found} in an apartment over Λ = ℚ^{expected}")]
    ValueDimension { expected: usize, found: usize },
    #[error("translation generators are linearly dependent")]
    DependentGenerators,
    #[error("translation group is not normalized by W_s: generator {generator} under simple reflection {reflection}")]
    NotNormalized { generator: usize, reflection: usize },
    #[error("translation {0} is not in T")]
    NotATranslation(String),
    #[error("config: {0}")]
    Config(String),
}

/// A point `Σ λ_α α` given by its `Δ`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ApartmentPoint {
    pub coords: Vec<LexValue>,
}

impl ApartmentPoint {
    pub fn new(coords: Vec<LexValue>) -> Self {
        ApartmentPoint { coords }
    }

    pub fn zero(rank: usize, k: usize) -> Self {
        ApartmentPoint { coords: vec![LexValue::zero(k); rank] }
    }

    /// `Σ q_α α ⊗ μ` for rational `Δ`-coordinates `q`.
    pub fn from_rational(q: &[Rational], mu: &LexValue) -> Self {
        ApartmentPoint { coords: q.iter().map(|c| mu.scale(c)).collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        ApartmentPoint { coords: rows.iter().map(|r| LexValue::from_ints(r)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(LexValue::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        ApartmentPoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ApartmentPoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        ApartmentPoint { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// `M·x` for a rational matrix acting on the coordinate index.
    pub fn transform(&self, m: &QMatrix) -> Self {
        let k = self.coords.first().and_then(LexValue::dim).unwrap_or(1);
        let coords = (0..m.rows())
            .map(|r| {
                (0..m.cols()).fold(LexValue::zero(k), |acc, c| {
                    if m[(r, c)].is_zero() {
                        acc
                    } else {
                        &acc + &self.coords[c].scale(&m[(r, c)])
                    }
                })
            })
            .collect();
        ApartmentPoint { coords }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(LexValue::is_integral)
    }
}

impl fmt::Display for ApartmentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// An element `t^x w` of the affine Weyl group. `spherical` indexes the
/// apartment's enumerated spherical Weyl group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineWeylElement {
    pub translation: ApartmentPoint,
    pub spherical: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// `H^±_{α,k} = {x : ±(⟨x, α⟩ − k) ≥ 0}`; `root` indexes the root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfApartment {
    pub root: usize,
    pub threshold: LexValue,
    pub side: Side,
}

/// A finite intersection of half-apartments; the empty list is all of `𝔸`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClosedSet {
    pub halves: Vec<HalfApartment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Translations {
    Full,
    /// The `ℤ`-span (`integral`) or `ℚ`-span of independent generators.
    Generated { generators: Vec<ApartmentPoint>, integral: bool },
}

/// The model apartment `𝔸(Φ, Λ, T)`.
#[derive(Debug, Clone)]
pub struct ModelApartment {
    root_system: RootSystem,
    k: usize,
    translations: Translations,
    weyl: WeylGroup,
    /// `Δ`-coordinate matrix of every Weyl element, in enumeration order.
    delta_mats: Vec<QMatrix>,
    base_gram: QMatrix,
    /// `Δ`-coordinates of every root.
    root_coords: Vec<Vec<Rational>>,
}

impl ModelApartment {
    pub fn new(root_system: RootSystem, k: usize, translations: Translations) -> Result<Self, ApartmentError> {
        let weyl = root_system.enumerate_weyl_group()?;
        let b = root_system.basis_matrix();
        let delta_mats = weyl
            .elements()
            .iter()
            .map(|w| b.solve_matrix(&(&w.matrix * &b)).expect("Weyl group preserves the span"))
            .collect();
        let base_gram = root_system.base_gram();
        let root_coords = (0..root_system.roots().len()).map(|i| root_system.root_coords(i).clone()).collect();
        let apt = ModelApartment { root_system, k, translations, weyl, delta_mats, base_gram, root_coords };
        apt.validate_translations()?;
        Ok(apt)
    }

    pub fn full(root_system: RootSystem, k: usize) -> Result<Self, ApartmentError> {
        Self::new(root_system, k, Translations::Full)
    }

    fn validate_translations(&self) -> Result<(), ApartmentError> {
        let Translations::Generated { generators, .. } = &self.translations else { return Ok(()) };
        for g in generators {
            self.check_point(g)?;
        }
        if !generators.is_empty() && self.generator_matrix().rank() < generators.len() {
            return Err(ApartmentError::DependentGenerators);
        }
        let simple_elems: Vec<usize> = (0..self.rank())
            .map(|s| self.weyl.index_of(&self.root_system.reflection(&self.root_system.simple_roots()[s]).expect("simple root").matrix).expect("in W"))
            .collect();
        for (gi, g) in generators.iter().enumerate() {
            for (si, &s) in simple_elems.iter().enumerate() {
                if !self.in_translations(&self.apply_spherical(s, g)) {
                    return Err(ApartmentError::NotNormalized { generator: gi, reflection: si });
                }
            }
        }
        Ok(())
    }

    /// Flattened generators as columns of a `(|Δ|·k) × #gens` matrix.
    fn generator_matrix(&self) -> QMatrix {
        let Translations::Generated { generators, .. } = &self.translations else {
            return QMatrix::zeros(0, 0);
        };
        let cols: Vec<Vec<Rational>> = generators.iter().map(flatten).collect();
        QMatrix::from_columns(&cols, self.rank() * self.k)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn lambda_dim(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn translations(&self) -> &Translations {
        &self.translations
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    /// `Δ`-coordinate matrix of the spherical element `w`.
    pub fn delta_matrix(&self, w: usize) -> &QMatrix {
        &self.delta_mats[w]
    }

    /// Index of the spherical element with the given `Δ`-matrix.
    pub fn spherical_index(&self, m: &QMatrix) -> Option<usize> {
        self.delta_mats.iter().position(|x| x == m)
    }

    pub fn root_delta_coords(&self, i: usize) -> &[Rational] {
        &self.root_coords[i]
    }

    pub fn zero(&self) -> ApartmentPoint {
        ApartmentPoint::zero(self.rank(), self.k)
    }

    pub fn check_point(&self, x: &ApartmentPoint) -> Result<(), ApartmentError> {
        if x.rank() != self.rank() {
            return Err(ApartmentError::Arity { expected: self.rank(), found: x.rank() });
        }
        for c in &x.coords {
            let d = c.dim().unwrap_or(0);
            if d != self.k {
                return Err(ApartmentError::ValueDimension { expected: self.k, found: d });
            }
        }
        Ok(())
    }

    /// `⟨x, β⟩` for `β` in `Δ`-coordinates.
    pub fn pairing(&self, x: &ApartmentPoint, beta: &[Rational]) -> LexValue {
        let gb = self.base_gram.mul_vec(beta);
        x.coords.iter().zip(&gb).fold(LexValue::zero(self.k), |acc, (l, g)| {
            if g.is_zero() {
                acc
            } else {
                &acc + &l.scale(g)
            }
        })
    }

    /// `⟨x, α_i⟩` for the root with index `i`.
    pub fn root_pairing(&self, x: &ApartmentPoint, i: usize) -> LexValue {
        self.pairing(x, &self.root_coords[i])
    }

    /// `∥x∥ = Σ_{α ∈ Φ} |⟨x, α⟩|`.
    pub fn norm(&self, x: &ApartmentPoint) -> LexValue {
        (0..self.root_coords.len()).fold(LexValue::zero(self.k), |acc, i| &acc + &self.root_pairing(x, i).abs())
    }

    pub fn apply_spherical(&self, w: usize, x: &ApartmentPoint) -> ApartmentPoint {
        x.transform(&self.delta_mats[w])
    }

    pub fn act(&self, w: &AffineWeylElement, x: &ApartmentPoint) -> ApartmentPoint {
        self.apply_spherical(w.spherical, x).add(&w.translation)
    }

    /// `(t_1, w_1)(t_2, w_2) = (t_1 + w_1(t_2), w_1 w_2)`.
    pub fn compose(&self, a: &AffineWeylElement, b: &AffineWeylElement) -> AffineWeylElement {
        AffineWeylElement {
            translation: a.translation.add(&self.apply_spherical(a.spherical, &b.translation)),
            spherical: self.weyl.mul(a.spherical, b.spherical),
        }
    }

    pub fn inverse(&self, a: &AffineWeylElement) -> AffineWeylElement {
        let wi = self.weyl.inverse(a.spherical);
        AffineWeylElement { translation: self.apply_spherical(wi, &a.translation).neg(), spherical: wi }
    }

    pub fn identity_element(&self) -> AffineWeylElement {
        AffineWeylElement { translation: self.zero(), spherical: self.weyl.identity() }
    }

    pub fn spherical_element(&self, w: usize) -> AffineWeylElement {
        AffineWeylElement { translation: self.zero(), spherical: w }
    }

    /// The translation `t^x`, when `x ∈ T`.
    pub fn translation(&self, x: ApartmentPoint) -> Result<AffineWeylElement, ApartmentError> {
        if !self.in_translations(&x) {
            return Err(ApartmentError::NotATranslation(x.to_string()));
        }
        Ok(AffineWeylElement { translation: x, spherical: self.weyl.identity() })
    }

    pub fn in_translations(&self, x: &ApartmentPoint) -> bool {
        match &self.translations {
            Translations::Full => true,
            Translations::Generated { generators, integral } => {
                if generators.is_empty() {
                    return x.is_zero();
                }
                match self.generator_matrix().solve(&flatten(x)) {
                    None => false,
                    Some(c) => !integral || c.iter().all(Rational::is_integer),
                }
            }
        }
    }

    /// The reflection in the wall `M_{α,k}`, if its translation part lies in `T`.
    pub fn wall_reflection(&self, root: usize, k: &LexValue) -> Result<AffineWeylElement, ApartmentError> {
        let alpha = self.root_system.root(root).clone();
        let r = self.root_system.reflection(&alpha)?;
        let spherical = self.weyl.index_of(&r.matrix).expect("reflections lie in W");
        let len2 = self.root_system.pairing(&alpha, &alpha);
        let coef: Vec<Rational> = self.root_coords[root].iter().map(|c| c * qi(2) / &len2).collect();
        self.translation(ApartmentPoint::from_rational(&coef, k))
            .map(|t| AffineWeylElement { translation: t.translation, spherical })
    }

    pub fn half_contains(&self, h: &HalfApartment, x: &ApartmentPoint) -> bool {
        let d = &self.root_pairing(x, h.root) - &h.threshold;
        match h.side {
            Side::Plus => !d.is_negative(),
            Side::Minus => !d.is_positive(),
        }
    }

    pub fn on_wall(&self, root: usize, k: &LexValue, x: &ApartmentPoint) -> bool {
        self.root_pairing(x, root) == *k
    }

    pub fn closed_set_contains(&self, set: &ClosedSet, x: &ApartmentPoint) -> bool {
        set.halves.iter().all(|h| self.half_contains(h, x))
    }

    /// `C_0` as the intersection of `H^+_{α,0}` over `α ∈ Δ`.
    pub fn fundamental_chamber(&self) -> ClosedSet {
        let halves = self
            .root_system
            .simple_indices()
            .iter()
            .map(|&root| HalfApartment { root, threshold: LexValue::zero(self.k), side: Side::Plus })
            .collect();
        ClosedSet { halves }
    }

    /// Whether `x ∈ b + w(C_0)`, the sector based at `b` with direction `w`.
    pub fn in_sector(&self, x: &ApartmentPoint, w: usize, base: &ApartmentPoint) -> bool {
        let y = self.apply_spherical(self.weyl.inverse(w), &x.sub(base));
        self.root_system.simple_indices().iter().all(|&i| !self.root_pairing(&y, i).is_negative())
    }

    /// A point with every simple pairing equal to `μ` (a `ρ`-analog when `μ > 0`).
    pub fn rho_point(&self, mu: &LexValue) -> ApartmentPoint {
        let ones = vec![Rational::one(); self.rank()];
        let z = self.base_gram.solve(&ones).expect("base gram is invertible");
        ApartmentPoint::from_rational(&z, mu)
    }

    /// Random point with integral coordinates in `[-bound, bound]`.
    pub fn sample_point<R: Rng>(&self, rng: &mut R, bound: i64) -> ApartmentPoint {
        ApartmentPoint::new((0..self.rank()).map(|_| crate::sampling::lex_value(rng, self.k, bound)).collect())
    }

    /// Random element of `T`.
    pub fn sample_translation<R: Rng>(&self, rng: &mut R, bound: i64) -> ApartmentPoint {
        match &self.translations {
            Translations::Full => self.sample_point(rng, bound),
            Translations::Generated { generators, .. } => generators.iter().fold(self.zero(), |acc, g| {
                let c = qi(rng.gen_range(-bound..=bound));
                acc.add(&g.transform(&QMatrix::diagonal(&vec![c; self.rank()])))
            }),
        }
    }

    pub fn sample_element<R: Rng>(&self, rng: &mut R, bound: i64) -> AffineWeylElement {
        AffineWeylElement { translation: self.sample_translation(rng, bound), spherical: rng.gen_range(0..self.weyl.len()) }
    }

    /// Exhaustive action check over `W_s` with sampled translations.
    pub fn verify_action<R: Rng>(&self, rng: &mut R, samples: usize) -> ActionReport {
        let mut report = ActionReport { checks: 0, failures: Vec::new() };
        let zero = self.zero();
        for _ in 0..samples {
            let x = self.sample_point(rng, 4);
            let t1 = self.sample_translation(rng, 3);
            let t2 = self.sample_translation(rng, 3);
            for w in 0..self.weyl.len() {
                let a = AffineWeylElement { translation: t1.clone(), spherical: w };
                let b = AffineWeylElement { translation: t2.clone(), spherical: rng.gen_range(0..self.weyl.len()) };
                report.checks += 1;
                if self.act(&self.identity_element(), &x) != x {
                    report.failures.push(format!("identity moves {x}"));
                }
                if self.act(&a, &self.act(&b, &x)) != self.act(&self.compose(&a, &b), &x) {
                    report.failures.push(format!("associativity fails at {x}"));
                }
                if self.norm(&self.apply_spherical(w, &x)) != self.norm(&x) {
                    report.failures.push(format!("norm not invariant at {x}"));
                }
            }
            let t = AffineWeylElement { translation: t1.clone(), spherical: self.weyl.identity() };
            if self.act(&t, &zero) != t1 {
                report.failures.push(format!("translation {t1} not recovered"));
            }
        }
        report
    }

    pub fn from_config(cfg: &ApartmentConfig) -> Result<Self, ApartmentError> {
        let rs = RootSystem::standard(cfg.root_system.tag, cfg.root_system.rank)?;
        let translations = match &cfg.translations {
            None => Translations::Full,
            Some(t) => match t.mode.as_str() {
                "full" => Translations::Full,
                "generated" => Translations::Generated {
                    generators: t.generators.iter().cloned().map(ApartmentPoint::new).collect(),
                    integral: t.integral,
                },
                other => return Err(ApartmentError::Config(format!("unknown translation mode `{other}`"))),
            },
        };
        Self::new(rs, cfg.lambda_dim, translations)
    }
}

fn flatten(x: &ApartmentPoint) -> Vec<Rational> {
    x.coords.iter().flat_map(|c| c.finite().iter().cloned()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// TOML apartment configuration.
#[derive(Debug, Clone, Deserialize)]
pub struct ApartmentConfig {
    pub root_system: RootSystemRef,
    #[serde(default = "one")]
    pub lambda_dim: usize,
    pub translations: Option<TranslationsConfig>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
pub struct RootSystemRef {
    pub tag: Tag,
    pub rank: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TranslationsConfig {
    pub mode: String,
    #[serde(default)]
    pub generators: Vec<Vec<LexValue>>,
    #[serde(default = "yes")]
    pub integral: bool,
}

fn yes() -> bool {
    true
}

impl ApartmentConfig {
    pub fn parse(src: &str) -> Result<Self, ApartmentError> {
        toml::from_str(src).map_err(|e| ApartmentError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::standard;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(rank: usize, k: usize) -> ModelApartment {
        ModelApartment::full(standard(Tag::A, rank).unwrap(), k).unwrap()
    }

    #[test]
    fn pairings() {
        let apt = a(1, 1);
        let x = ApartmentPoint::from_ints(&[&[3]]);
        assert_eq!(apt.pairing(&x, &[qi(1)]), LexValue::from_ints(&[6]));
        assert_eq!(apt.norm(&x), LexValue::from_ints(&[12]));
        let apt = a(2, 1);
        let x = ApartmentPoint::from_ints(&[&[1], &[0]]);
        assert_eq!(apt.pairing(&x, &[qi(0), qi(1)]), LexValue::from_ints(&[-1]));
        assert!(apt.norm(&apt.zero()).is_zero());
    }

    #[test]
    fn a1_reflection_then_translate() {
        let apt = a(1, 2);
        let r = (0..2).find(|&w| w != apt.weyl().identity()).unwrap();
        let w = AffineWeylElement { translation: ApartmentPoint::from_ints(&[&[5, 1]]), spherical: r };
        let x = ApartmentPoint::from_ints(&[&[2, -3]]);
        assert_eq!(apt.act(&w, &x), ApartmentPoint::from_ints(&[&[3, 4]]));
    }

    #[test]
    fn action_is_a_group_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (tag, rank) in [(Tag::A, 2), (Tag::B, 2), (Tag::G2, 2)] {
            let apt = ModelApartment::full(standard(tag, rank).unwrap(), 2).unwrap();
            let report = apt.verify_action(&mut rng, 10);
            assert!(report.passed(), "{:?}", report.failures);
        }
    }

    #[test]
    fn chambers_and_half_apartments() {
        let apt = a(2, 1);
        let zero = apt.zero();
        let h = HalfApartment { root: 0, threshold: LexValue::zero(1), side: Side::Plus };
        assert!(apt.half_contains(&h, &zero));
        assert!(apt.half_contains(&HalfApartment { side: Side::Minus, ..h.clone() }, &zero));
        let rho = apt.rho_point(&LexValue::from_ints(&[1]));
        assert!(apt.closed_set_contains(&apt.fundamental_chamber(), &rho));
        assert!(apt.in_sector(&rho, apt.weyl().identity(), &zero));
        assert!(apt.closed_set_contains(&ClosedSet::default(), &rho));
        for &i in apt.root_system().simple_indices() {
            assert_eq!(apt.root_pairing(&rho, i), LexValue::from_ints(&[1]));
        }
        // the reflection in M_{α,k} swaps the two sides
        let k = LexValue::from_ints(&[3]);
        let r = apt.wall_reflection(0, &k).unwrap();
        let plus = HalfApartment { root: 0, threshold: k.clone(), side: Side::Plus };
        let minus = HalfApartment { side: Side::Minus, ..plus.clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let x = apt.sample_point(&mut rng, 5);
            assert_eq!(apt.half_contains(&plus, &x), apt.half_contains(&minus, &apt.act(&r, &x)));
        }
    }

    #[test]
    fn generated_translations() {
        let rs = standard(Tag::A, 1).unwrap();
        let gens = vec![ApartmentPoint::from_ints(&[&[1]])];
        let apt = ModelApartment::new(rs.clone(), 1, Translations::Generated { generators: gens, integral: true }).unwrap();
        assert!(apt.in_translations(&ApartmentPoint::from_ints(&[&[-4]])));
        assert!(!apt.in_translations(&ApartmentPoint::new(vec![LexValue::scalar(crate::scalar::q(1, 2))])));
        assert!(apt.translation(ApartmentPoint::new(vec![LexValue::scalar(crate::scalar::q(1, 2))])).is_err());
        let dep = vec![ApartmentPoint::from_ints(&[&[1]]), ApartmentPoint::from_ints(&[&[2]])];
        assert_eq!(
            ModelApartment::new(rs, 1, Translations::Generated { generators: dep, integral: true }).unwrap_err(),
            ApartmentError::DependentGenerators
        );
        // ℤα_1 alone is not W_s-stable in A_2
        let gens = vec![ApartmentPoint::from_ints(&[&[1], &[0]])];
        let err = ModelApartment::new(standard(Tag::A, 2).unwrap(), 1, Translations::Generated { generators: gens, integral: true });
        assert!(matches!(err, Err(ApartmentError::NotNormalized { .. })));
    }

    #[test]
    fn toml_config() {
        let cfg = ApartmentConfig::parse(
            r#"
lambda_dim = 2
[root_system]
tag = "B"
rank = 2
[translations]
mode = "generated"
generators = [[["1", "0"], ["0", "0"]], [["0", "0"], ["1", "0"]]]
"#,
        )
        .unwrap();
        let apt = ModelApartment::from_config(&cfg).unwrap();
        assert_eq!(apt.weyl().len(), 8);
        assert!(apt.in_translations(&ApartmentPoint::from_ints(&[&[2, 0], &[-1, 0]])));
        assert!(!apt.in_translations(&ApartmentPoint::from_ints(&[&[0, 1], &[0, 0]])));
    }
}
