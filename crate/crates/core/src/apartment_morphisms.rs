//! Morphisms of model apartments `(L, γ, σ)`.
//!
//! `τ = L ⊗ γ` acts on `Δ`-coordinates. The affine map `σ` is never tabulated:
//! `σ(t^x w) = t^{τ(x)} σ_s(w)` is derived from `τ` and the spherical table.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::apartments::{AffineWeylElement, ApartmentPoint, ModelApartment, Translations};
use crate::json::RationalMatrixJson;
use crate::ordered_groups::{LexValue, OrderedGroupMorphism, RankFlags};
use crate::QMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("L is {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("γ maps ℚ^{found_src} → ℚ^{found_tgt}, expected ℚ^{src} → ℚ^{tgt}")]
    GammaShape { src: usize, tgt: usize, found_src: usize, found_tgt: usize },
    #[error("σ_s table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("σ_s entry {0} out of range")]
    TableEntry(usize),
    #[error("codomain of the inner morphism differs from the domain of the outer one")]
    NotComposable,
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("verification failed: {0}")]
    Verification(String),
}

/// Outcome of one verification step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(detail: impl Into<String>) -> Self {
        Check { passed: true, detail: detail.into(), witness: None }
    }

    pub fn fail(detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { passed: false, detail: detail.into(), witness: Some(witness.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub homomorphism: Check,
    pub diagram: Check,
    pub translations: Check,
    pub affine_samples: Check,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.homomorphism.passed && self.diagram.passed && self.translations.passed && self.affine_samples.passed
    }

    fn first_failure(&self) -> Option<String> {
        [&self.homomorphism, &self.diagram, &self.translations, &self.affine_samples]
            .into_iter()
            .find(|c| !c.passed)
            .map(|c| format!("{}: {}", c.detail, c.witness.clone().unwrap_or_default()))
    }
}

#[derive(Debug, Clone)]
pub struct ApartmentMorphism {
    source: Arc<ModelApartment>,
    target: Arc<ModelApartment>,
    l: QMatrix,
    gamma: OrderedGroupMorphism,
    sigma_s: Vec<usize>,
}

const AFFINE_SAMPLES: usize = 100;
const AFFINE_SEED: u64 = 0xa1f;

impl ApartmentMorphism {
    /// Assembles a morphism after shape checks only; see [`Self::verify`].
    pub fn from_parts(
        source: Arc<ModelApartment>,
        target: Arc<ModelApartment>,
        l: QMatrix,
        gamma: OrderedGroupMorphism,
        sigma_s: Vec<usize>,
    ) -> Result<Self, MorphismError> {
        let expected = (target.rank(), source.rank());
        if (l.rows(), l.cols()) != expected {
            return Err(MorphismError::Shape { expected, found: (l.rows(), l.cols()) });
        }
        if gamma.source_dim() != source.lambda_dim() || gamma.target_dim() != target.lambda_dim() {
            return Err(MorphismError::GammaShape {
                src: source.lambda_dim(),
                tgt: target.lambda_dim(),
                found_src: gamma.source_dim(),
                found_tgt: gamma.target_dim(),
            });
        }
        if sigma_s.len() != source.weyl().len() {
            return Err(MorphismError::TableSize { expected: source.weyl().len(), found: sigma_s.len() });
        }
        if let Some(&bad) = sigma_s.iter().find(|&&s| s >= target.weyl().len()) {
            return Err(MorphismError::TableEntry(bad));
        }
        Ok(ApartmentMorphism { source, target, l, gamma, sigma_s })
    }

    /// Assembles and verifies; only verified morphisms are returned.
    pub fn new(
        source: Arc<ModelApartment>,
        target: Arc<ModelApartment>,
        l: QMatrix,
        gamma: OrderedGroupMorphism,
        sigma_s: Vec<usize>,
    ) -> Result<Self, MorphismError> {
        let m = Self::from_parts(source, target, l, gamma, sigma_s)?;
        let report = m.verify();
        match report.first_failure() {
            None => Ok(m),
            Some(msg) => Err(MorphismError::Verification(msg)),
        }
    }

    pub fn identity(apt: Arc<ModelApartment>) -> Self {
        let n = apt.weyl().len();
        let (r, k) = (apt.rank(), apt.lambda_dim());
        Self::from_parts(apt.clone(), apt, QMatrix::identity(r), OrderedGroupMorphism::identity(k), (0..n).collect())
            .expect("identity shapes")
    }

    /// `L = −Id`, `γ = Id`, `σ_s = id`; `σ(t^x) = t^{−x}`.
    pub fn inversion(apt: Arc<ModelApartment>) -> Result<Self, MorphismError> {
        let n = apt.weyl().len();
        let (r, k) = (apt.rank(), apt.lambda_dim());
        let l = QMatrix::identity(r).scale(&-crate::scalar::qi(1));
        Self::new(apt.clone(), apt, l, OrderedGroupMorphism::identity(k), (0..n).collect())
    }

    /// Change of value group along `γ` with the same root system.
    pub fn lambda_change(
        source: Arc<ModelApartment>,
        target: Arc<ModelApartment>,
        gamma: OrderedGroupMorphism,
    ) -> Result<Self, MorphismError> {
        let n = source.weyl().len();
        let r = source.rank();
        Self::new(source, target, QMatrix::identity(r), gamma, (0..n).collect())
    }

    pub fn source(&self) -> &Arc<ModelApartment> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ModelApartment> {
        &self.target
    }

    pub fn l(&self) -> &QMatrix {
        &self.l
    }

    pub fn gamma(&self) -> &OrderedGroupMorphism {
        &self.gamma
    }

    pub fn sigma_s(&self) -> &[usize] {
        &self.sigma_s
    }

    pub fn apply_tau(&self, x: &ApartmentPoint) -> ApartmentPoint {
        let g = ApartmentPoint::new(
            x.coords.iter().map(|c| self.gamma.apply(c).expect("dimension checked")).collect(),
        );
        g.transform(&self.l)
    }

    /// `σ(t^x w) = t^{τ(x)} σ_s(w)`.
    pub fn apply_sigma(&self, w: &AffineWeylElement) -> AffineWeylElement {
        AffineWeylElement { translation: self.apply_tau(&w.translation), spherical: self.sigma_s[w.spherical] }
    }

    pub fn flags(&self) -> RankFlags {
        let g = self.gamma.rank_flags();
        let rank = self.l.rank();
        RankFlags {
            injective: g.injective && rank == self.l.cols(),
            surjective: g.surjective && rank == self.l.rows(),
        }
    }

    pub fn sigma_s_injective(&self) -> bool {
        let mut seen = vec![false; self.target.weyl().len()];
        self.sigma_s.iter().all(|&s| !std::mem::replace(&mut seen[s], true))
    }

    pub fn sigma_s_image_size(&self) -> usize {
        let mut img = self.sigma_s.clone();
        img.sort_unstable();
        img.dedup();
        img.len()
    }

    pub fn verify(&self) -> MorphismReport {
        let homomorphism = self.check_homomorphism();
        let diagram = self.check_diagram();
        let translations = self.check_translations();
        let affine_samples = if translations.passed {
            self.check_affine_samples()
        } else {
            Check::fail("affine σ", "skipped: τ(T) ⊄ T′")
        };
        MorphismReport { homomorphism, diagram, translations, affine_samples }
    }

    fn check_homomorphism(&self) -> Check {
        let (w, w2) = (self.source.weyl(), self.target.weyl());
        for a in 0..w.len() {
            for b in 0..w.len() {
                if self.sigma_s[w.mul(a, b)] != w2.mul(self.sigma_s[a], self.sigma_s[b]) {
                    return Check::fail("σ_s homomorphism", format!("pair ({a}, {b})"));
                }
            }
        }
        Check::pass(format!("σ_s homomorphism on {} pairs", w.len() * w.len()))
    }

    /// `L·M_w = M_{σ_s(w)}·L` for every `w`, unless `γ = 0`.
    fn check_diagram(&self) -> Check {
        if self.gamma.is_zero() {
            return Check::pass("diagram (γ = 0)");
        }
        let unit = (0..self.source.lambda_dim())
            .map(|i| LexValue::unit(self.source.lambda_dim(), i))
            .find(|u| !self.gamma.apply(u).expect("dimension").is_zero())
            .expect("γ ≠ 0");
        for w in 0..self.source.weyl().len() {
            let lhs = &self.l * self.source.delta_matrix(w);
            let rhs = self.target.delta_matrix(self.sigma_s[w]) * &self.l;
            if lhs != rhs {
                let j = (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j)).expect("matrices differ");
                let mut x = self.source.zero();
                x.coords[j] = unit.clone();
                let left = self.apply_tau(&self.source.apply_spherical(w, &x));
                let right = self.target.apply_spherical(self.sigma_s[w], &self.apply_tau(&x));
                return Check::fail(
                    "diagram τ(w·x) = σ_s(w)·τ(x)",
                    format!("w = {:?}, x = {x}: {left} ≠ {right}", self.source.weyl().word(w)),
                );
            }
        }
        Check::pass(format!("diagram on all {} elements of W_s", self.source.weyl().len()))
    }

    fn check_translations(&self) -> Check {
        let (basis, divisible) = translation_basis(&self.source);
        let target_integral = matches!(self.target.translations(), Translations::Generated { integral: true, .. });
        for b in &basis {
            let img = self.apply_tau(b);
            if !self.target.in_translations(&img) || (divisible && target_integral && !img.is_zero()) {
                return Check::fail("τ(T) ⊆ T′", format!("generator {b} ↦ {img}"));
            }
        }
        Check::pass(format!("τ(T) ⊆ T′ on {} generators", basis.len()))
    }

    fn check_affine_samples(&self) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(AFFINE_SEED);
        for _ in 0..AFFINE_SAMPLES {
            let a = self.source.sample_element(&mut rng, 3);
            let b = self.source.sample_element(&mut rng, 3);
            let lhs = self.apply_sigma(&self.source.compose(&a, &b));
            let rhs = self.target.compose(&self.apply_sigma(&a), &self.apply_sigma(&b));
            if lhs != rhs {
                return Check::fail("affine σ homomorphism", format!("{a:?}, {b:?}"));
            }
        }
        Check::pass(format!("affine σ homomorphism on {AFFINE_SAMPLES} sampled pairs"))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, MorphismError> {
        if !same_apartment(&inner.target, &self.source) {
            return Err(MorphismError::NotComposable);
        }
        let gamma = self.gamma.compose(&inner.gamma).map_err(|_| MorphismError::NotComposable)?;
        let sigma = inner.sigma_s.iter().map(|&s| self.sigma_s[s]).collect();
        Self::new(inner.source.clone(), self.target.clone(), &self.l * &inner.l, gamma, sigma)
    }

    pub fn inverse(&self) -> Result<Self, MorphismError> {
        let l = self.l.inverse().ok_or(MorphismError::NotInvertible("L"))?;
        let gamma = self.gamma.inverse().ok_or(MorphismError::NotInvertible("γ"))?;
        if self.source.weyl().len() != self.target.weyl().len() || !self.sigma_s_injective() {
            return Err(MorphismError::NotInvertible("σ_s"));
        }
        let mut sigma = vec![0; self.target.weyl().len()];
        for (w, &s) in self.sigma_s.iter().enumerate() {
            sigma[s] = w;
        }
        Self::new(self.target.clone(), self.source.clone(), l, gamma, sigma)
    }

    /// Equality of the defining data.
    pub fn same_as(&self, other: &Self) -> bool {
        same_apartment(&self.source, &other.source)
            && same_apartment(&self.target, &other.target)
            && self.l == other.l
            && self.gamma == other.gamma
            && self.sigma_s == other.sigma_s
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            l: RationalMatrixJson::from(&self.l),
            gamma: RationalMatrixJson::from(self.gamma.matrix()),
            sigma_s: self.sigma_s.clone(),
            flags: self.flags(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismJson {
    #[serde(rename = "L")]
    pub l: RationalMatrixJson,
    pub gamma: RationalMatrixJson,
    pub sigma_s: Vec<usize>,
    pub flags: RankFlags,
}

fn same_apartment(a: &ModelApartment, b: &ModelApartment) -> bool {
    a.root_system() == b.root_system() && a.lambda_dim() == b.lambda_dim() && a.translations() == b.translations()
}

/// Generators of `T` and whether `T` is divisible.
fn translation_basis(apt: &ModelApartment) -> (Vec<ApartmentPoint>, bool) {
    match apt.translations() {
        Translations::Full => {
            let (r, k) = (apt.rank(), apt.lambda_dim());
            let mut out = Vec::with_capacity(r * k);
            for j in 0..r {
                for i in 0..k {
                    let mut x = apt.zero();
                    x.coords[j] = LexValue::unit(k, i);
                    out.push(x);
                }
            }
            (out, true)
        }
        Translations::Generated { generators, integral } => (generators.clone(), !integral),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{standard, Tag};
    use crate::scalar::qi;
    use rand::SeedableRng;

    fn apt(tag: Tag, rank: usize, k: usize) -> Arc<ModelApartment> {
        Arc::new(ModelApartment::full(standard(tag, rank).unwrap(), k).unwrap())
    }

    #[test]
    fn identity_and_inversion() {
        for rank in 1..=3 {
            let a = apt(Tag::A, rank, 1);
            let id = ApartmentMorphism::identity(a.clone());
            assert!(id.verify().passed());
            let inv = ApartmentMorphism::inversion(a.clone()).unwrap();
            assert!(inv.verify().passed());
            assert!(inv.sigma_s().iter().enumerate().all(|(i, &s)| i == s));
            assert!(inv.inverse().unwrap().same_as(&inv));
            assert!(inv.compose(&inv).unwrap().same_as(&id));
            let flags = inv.flags();
            assert!(flags.injective && flags.surjective);
            let x = a.sample_point(&mut rand_chacha::ChaCha8Rng::seed_from_u64(rank as u64), 5);
            assert_eq!(inv.apply_tau(&x), x.neg());
            let t = a.translation(x.clone()).unwrap();
            assert_eq!(inv.apply_sigma(&t).translation, x.neg());
        }
    }

    #[test]
    fn projection_of_values() {
        let src = apt(Tag::A, 1, 2);
        let tgt = apt(Tag::A, 1, 1);
        let m = ApartmentMorphism::lambda_change(src.clone(), tgt.clone(), OrderedGroupMorphism::projection(2, 0)).unwrap();
        let x = ApartmentPoint::from_ints(&[&[3, 5]]);
        assert_eq!(m.apply_tau(&x), ApartmentPoint::from_ints(&[&[3]]));
        assert!(m.apply_tau(&src.zero()).is_zero());
        let f = m.flags();
        assert!(!f.injective && f.surjective);
        let inc = ApartmentMorphism::lambda_change(tgt.clone(), src, OrderedGroupMorphism::inclusion(1, 2)).unwrap();
        let back = m.compose(&inc).unwrap();
        assert!(back.gamma().matrix().is_identity());
        assert!(back.same_as(&ApartmentMorphism::identity(tgt)));
    }

    #[test]
    fn broken_sigma_is_rejected_with_witness() {
        let a = apt(Tag::A, 2, 1);
        let n = a.weyl().len();
        let id = a.weyl().identity();
        let refl = (0..n).find(|&w| a.weyl().word(w).len() == 1).unwrap();
        let mut table: Vec<usize> = (0..n).collect();
        table[refl] = id;
        let m = ApartmentMorphism::from_parts(a.clone(), a.clone(), QMatrix::identity(2), OrderedGroupMorphism::identity(1), table.clone())
            .unwrap();
        let report = m.verify();
        assert!(!report.diagram.passed);
        assert!(report.diagram.witness.is_some());
        assert!(ApartmentMorphism::new(a.clone(), a, QMatrix::identity(2), OrderedGroupMorphism::identity(1), table).is_err());
    }

    #[test]
    fn compose_is_associative_with_identity_neutral() {
        let a = apt(Tag::B, 2, 1);
        let inv = ApartmentMorphism::inversion(a.clone()).unwrap();
        let id = ApartmentMorphism::identity(a.clone());
        let scale = ApartmentMorphism::new(
            a.clone(),
            a.clone(),
            QMatrix::identity(2).scale(&qi(3)),
            OrderedGroupMorphism::identity(1),
            (0..8).collect(),
        )
        .unwrap();
        assert!(scale.compose(&id).unwrap().same_as(&scale));
        assert!(id.compose(&scale).unwrap().same_as(&scale));
        let left = scale.compose(&inv).unwrap().compose(&scale).unwrap();
        let right = scale.compose(&inv.compose(&scale).unwrap()).unwrap();
        assert!(left.same_as(&right));
        let back = scale.inverse().unwrap().compose(&scale).unwrap();
        assert!(back.same_as(&id));
    }

    #[test]
    fn translation_lattice_must_be_respected() {
        let rs = standard(Tag::A, 1).unwrap();
        let lattice = Arc::new(
            ModelApartment::new(
                rs.clone(),
                1,
                Translations::Generated { generators: vec![ApartmentPoint::from_ints(&[&[1]])], integral: true },
            )
            .unwrap(),
        );
        let full = apt(Tag::A, 1, 1);
        assert!(ApartmentMorphism::lambda_change(lattice.clone(), full.clone(), OrderedGroupMorphism::identity(1)).is_ok());
        let m = ApartmentMorphism::from_parts(full, lattice, QMatrix::identity(1), OrderedGroupMorphism::identity(1), vec![0, 1])
            .unwrap();
        assert!(!m.verify().translations.passed);
    }
}
