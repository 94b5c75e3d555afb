//! Extending a Weyl group action from a subspace `V` to an ambient `V′`.
//!
//! A sub-system `Σ` is realized by explicit vectors in the ambient space of
//! `Σ′`, with the ambient gram. Weyl elements of both systems are ambient
//! matrices, so `w(x)` and `w′(x)` can be compared directly for `x ∈ V`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apartment_morphisms::{ApartmentMorphism, MorphismError};
use crate::apartments::ModelApartment;
use crate::json::RationalMatrixJson;
use crate::ordered_groups::OrderedGroupMorphism;
use crate::polyhedral::analyse_cone;
use crate::root_systems::{parse_vectors, RootSystem, RootSystemError, Tag, Vector, WeylGroup};
use crate::scalar::{fmt_rational, qi};
use crate::{QMatrix, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylExtensionError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("sub-system does not lie in the span of the ambient roots")]
    NotASubspace,
    #[error("no V-regular point in C_0 ∩ C_0′: {0}")]
    NoRegularPoint(String),
    #[error("dimension {0} exceeds the supported bound of 4")]
    DimensionGuard(usize),
    #[error("condition (△) fails: {0}")]
    Triangle(String),
    #[error("chamber location is ambiguous for {0}")]
    Ambiguous(String),
    #[error("σ verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("embedding spec: {0}")]
    Spec(String),
}

const MAX_DIM: usize = 4;
const REGULAR_ATTEMPTS: usize = 64;

/// A sub-system `Σ ⊂ V` inside `Σ′ ⊂ V′` with chosen chambers `C_0`, `C_0′`.
#[derive(Debug, Clone)]
pub struct EmbeddedPair {
    ambient: RootSystem,
    sub: RootSystem,
    w: WeylGroup,
    w_prime: WeylGroup,
    /// Ambient roots vanishing on `V`.
    sigma_v: Vec<usize>,
    /// Rows `α^T G B` of the chamber constraints in `V`-coordinates.
    chamber_rows: Vec<Vec<Rational>>,
    p: Vector,
}

impl EmbeddedPair {
    /// Uses the bases of `ambient` and `sub` as given.
    pub fn new(ambient: RootSystem, sub: RootSystem) -> Result<Self, WeylExtensionError> {
        if sub.ambient_dim() != ambient.ambient_dim() || sub.gram() != ambient.gram() {
            return Err(WeylExtensionError::NotASubspace);
        }
        let amb_span = QMatrix::from_columns(ambient.roots(), ambient.ambient_dim());
        if sub.roots().iter().any(|r| amb_span.solve(r).is_none()) {
            return Err(WeylExtensionError::NotASubspace);
        }
        if sub.rank() > MAX_DIM {
            return Err(WeylExtensionError::DimensionGuard(sub.rank()));
        }
        let w = sub.enumerate_weyl_group()?;
        let w_prime = ambient.enumerate_weyl_group()?;
        let sigma_v = ambient.vanishing_roots(&sub.simple_roots());
        let b = sub.basis_matrix();
        let chamber_rows = sub
            .simple_roots()
            .iter()
            .chain(ambient.simple_roots().iter())
            .map(|a| covector_rows(&ambient, a, &b))
            .collect();
        let mut pair = EmbeddedPair { ambient, sub, w, w_prime, sigma_v, chamber_rows, p: Vec::new() };
        pair.p = pair.search_regular_point()?;
        Ok(pair)
    }

    /// Re-bases the ambient system so that `C_0′` contains a `V`-regular point
    /// of the open chamber `C_0`, then builds the pair.
    pub fn with_auto_chamber(ambient: RootSystem, sub: RootSystem) -> Result<Self, WeylExtensionError> {
        let sigma_v = ambient.vanishing_roots(&sub.simple_roots());
        let coweights = fundamental_coweights(&sub);
        let primes = primes(REGULAR_ATTEMPTS + coweights.len());
        for attempt in 0..REGULAR_ATTEMPTS {
            let p = combine(&coweights, &primes[attempt..attempt + coweights.len()]);
            if ambient.vanishing_roots(std::slice::from_ref(&p)) == sigma_v {
                let rebased = ambient.with_base_from_point(&p)?;
                return Self::new(rebased, sub);
            }
        }
        Err(WeylExtensionError::NoRegularPoint("no V-regular point found in the open chamber C_0".into()))
    }

    pub fn ambient(&self) -> &RootSystem {
        &self.ambient
    }

    pub fn sub(&self) -> &RootSystem {
        &self.sub
    }

    pub fn sub_weyl(&self) -> &WeylGroup {
        &self.w
    }

    pub fn ambient_weyl(&self) -> &WeylGroup {
        &self.w_prime
    }

    /// `Σ′_V` as indices into the ambient roots.
    pub fn sigma_v(&self) -> &[usize] {
        &self.sigma_v
    }

    /// The `V`-regular point fixed at construction.
    pub fn regular_point(&self) -> &Vector {
        &self.p
    }

    pub fn v_dim(&self) -> usize {
        self.sub.rank()
    }

    fn to_ambient(&self, c: &[Rational]) -> Vector {
        self.sub.basis_matrix().mul_vec(c)
    }

    /// Extreme rays of `C_0 ∩ C_0′ ∩ V` in `V`-coordinates, sorted.
    fn extreme_rays(&self) -> Vec<Vec<Rational>> {
        let m = self.v_dim();
        let rows = &self.chamber_rows;
        let inside = |r: &[Rational]| rows.iter().all(|a| !dot(a, r).is_negative());
        let mut rays = BTreeSet::new();
        for subset in subsets(rows.len(), m - 1) {
            let sel: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let null = if sel.is_empty() { identity_rows(m) } else { QMatrix::from_rows(sel, m).nullspace() };
            if null.len() != 1 {
                continue;
            }
            let r = &null[0];
            let neg: Vec<Rational> = r.iter().map(|x| -x).collect();
            for cand in [r.clone(), neg] {
                if inside(&cand) {
                    rays.insert(primitive(&cand));
                }
            }
        }
        rays.into_iter().collect()
    }

    /// `p = Σ c_i r_i` over the extreme rays with distinct prime weights.
    fn search_regular_point(&self) -> Result<Vector, WeylExtensionError> {
        let rays = self.extreme_rays();
        let m = self.v_dim();
        if rays.is_empty() || QMatrix::from_rows(rays.clone(), m).rank() < m {
            return Err(WeylExtensionError::NoRegularPoint(
                "C_0 ∩ C_0′ ∩ V has empty interior in V (hypothesis failure)".into(),
            ));
        }
        let primes = primes(REGULAR_ATTEMPTS + rays.len());
        for attempt in 0..REGULAR_ATTEMPTS {
            let c = combine(&rays, &primes[attempt..attempt + rays.len()]);
            let p = self.to_ambient(&c);
            if self.ambient.vanishing_roots(std::slice::from_ref(&p)) == self.sigma_v && self.sub.is_regular(&p) {
                return Ok(p);
            }
        }
        Err(WeylExtensionError::NoRegularPoint(format!("{REGULAR_ATTEMPTS} prime tuples exhausted")))
    }

    fn cone_rows(&self, w: usize, wp: usize) -> Vec<Vec<Rational>> {
        let wm = &self.w.element(w).matrix;
        let wpm = &self.w_prime.element(wp).matrix;
        let b = self.sub.basis_matrix();
        let wb = wm * &b;
        let mut rows = self.chamber_rows.clone();
        for a in self.ambient.simple_roots() {
            rows.push(covector_rows(&self.ambient, &wpm.mul_vec(&a), &wb));
        }
        rows
    }

    /// Exact decision of condition (△) over all pairs `(w, w′)`.
    pub fn check_condition_triangle(&self) -> TriangleReport {
        let b = self.sub.basis_matrix();
        let mut pairs = 0;
        for w in 0..self.w.len() {
            for wp in 0..self.w_prime.len() {
                pairs += 1;
                let rows = self.cone_rows(w, wp);
                let cone = analyse_cone(&rows, &[], self.v_dim());
                let diff = &(&self.w.element(w).matrix - &self.w_prime.element(wp).matrix) * &b;
                if cone.span.iter().all(|n| diff.mul_vec(n).iter().all(Zero::is_zero)) {
                    continue;
                }
                let c = self.witness_in_cone(&rows, &cone.implicit, &cone.relative_interior, &cone.span, &diff);
                let x = self.to_ambient(&c);
                let wx = self.w.element(w).apply(&x);
                let wpx = self.w_prime.element(wp).apply(&x);
                return TriangleReport {
                    passed: false,
                    pairs_checked: pairs,
                    witness: Some(TriangleWitness {
                        w: self.w.word(w).to_vec(),
                        w_prime: self.w_prime.word(wp).to_vec(),
                        w_index: w,
                        w_prime_index: wp,
                        x: fmt_vec(&x),
                        w_x: fmt_vec(&wx),
                        w_prime_x: fmt_vec(&wpx),
                    }),
                };
            }
        }
        TriangleReport { passed: true, pairs_checked: pairs, witness: None }
    }

    /// A relative-interior point where `w − w′` does not vanish.
    fn witness_in_cone(
        &self,
        rows: &[Vec<Rational>],
        implicit: &[usize],
        start: &[Rational],
        span: &[Vec<Rational>],
        diff: &QMatrix,
    ) -> Vec<Rational> {
        let nonzero = |c: &[Rational]| diff.mul_vec(c).iter().any(|v| !v.is_zero());
        if nonzero(start) {
            return start.to_vec();
        }
        let strict = |c: &[Rational]| {
            rows.iter().enumerate().all(|(i, a)| implicit.contains(&i) || dot(a, c).is_positive())
        };
        for n in span.iter().filter(|n| nonzero(n)) {
            let mut eps = Rational::one();
            for _ in 0..64 {
                let c: Vec<Rational> = start.iter().zip(n).map(|(s, d)| s + &eps * d).collect();
                if strict(&c) {
                    return c;
                }
                eps /= qi(2);
            }
        }
        unreachable!("w − w′ vanishes on a relative-interior neighbourhood yet not on the span")
    }

    /// Seeded sampling oracle: points of `C_0 ∩ C_0′` as nonnegative ray
    /// combinations, checked against every pair with `w(x) ∈ w′(C̄_0′)`.
    pub fn triangle_sampling_oracle(&self, samples: usize, seed: u64) -> OracleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rays = self.extreme_rays();
        let chambers: Vec<Vec<Vector>> = (0..self.w_prime.len())
            .map(|wp| {
                let m = &self.w_prime.element(wp).matrix;
                self.ambient.simple_roots().iter().map(|a| self.ambient.gram().vec_mul(&m.mul_vec(a))).collect()
            })
            .collect();
        let mut counterexamples = 0;
        let mut first = None;
        let mut checked = 0;
        for _ in 0..samples {
            let weights: Vec<Rational> = rays
                .iter()
                .map(|_| if rng.gen_ratio(1, 5) { Rational::zero() } else { qi(rng.gen_range(1..=9)) / qi(rng.gen_range(1..=4)) })
                .collect();
            let c = rays.iter().zip(&weights).fold(vec![Rational::zero(); self.v_dim()], |acc, (r, t)| {
                acc.iter().zip(r).map(|(a, x)| a + t * x).collect()
            });
            let x = self.to_ambient(&c);
            for w in 0..self.w.len() {
                let wx = self.w.element(w).apply(&x);
                for (wp, rows) in chambers.iter().enumerate() {
                    if rows.iter().all(|r| !dot(r, &wx).is_negative()) {
                        checked += 1;
                        if self.w_prime.element(wp).apply(&x) != wx {
                            counterexamples += 1;
                            first.get_or_insert_with(|| fmt_vec(&x));
                        }
                    }
                }
            }
        }
        OracleReport { samples, pairs_checked: checked, counterexamples, first_counterexample: first }
    }

    /// Directly confirms a failure witness: `w(x) ∈ w′(C̄_0′)`, `x ∈ C_0 ∩ C_0′` and `w(x) ≠ w′(x)`.
    pub fn confirm_witness(&self, wit: &TriangleWitness) -> bool {
        let x: Vector = match parse_vectors(std::slice::from_ref(&wit.x)) {
            Ok(mut v) => v.remove(0),
            Err(_) => return false,
        };
        let c = match self.sub.base_coords(&x) {
            Some(c) => c,
            None => return false,
        };
        let in_c0 = self.chamber_rows.iter().all(|a| !dot(a, &c).is_negative());
        let wx = self.w.element(wit.w_index).apply(&x);
        let wpm = &self.w_prime.element(wit.w_prime_index).matrix;
        let in_chamber = self
            .ambient
            .simple_roots()
            .iter()
            .all(|a| !self.ambient.pairing(&wpm.mul_vec(a), &wx).is_negative());
        in_c0 && in_chamber && wx != wpm.mul_vec(&x)
    }

    /// `σ: W → W′` with `σ(w)|_V = w`, via the canonical chambers `C′_w ⊆ F`.
    pub fn construct_sigma(&self) -> Result<SigmaTable, WeylExtensionError> {
        let tri = self.check_condition_triangle();
        if let Some(w) = tri.witness {
            return Err(WeylExtensionError::Triangle(format!("w = {:?}, w′ = {:?}, x = {:?}", w.w, w.w_prime, w.x)));
        }
        let v_prime = self.ambient.rho_point();
        let sigma_v: BTreeSet<usize> = self.sigma_v.iter().copied().collect();
        let mut table = Vec::with_capacity(self.w.len());
        for w in 0..self.w.len() {
            let y = self.w.element(w).apply(&self.p);
            if self.ambient.vanishing_roots(std::slice::from_ref(&y)) != self.sigma_v {
                return Err(WeylExtensionError::Verification(format!("w(p) is not V-regular for w = {:?}", self.w.word(w))));
            }
            // q = w(p) + εv′ keeps the signs of non-vanishing roots and takes the F side on Σ′_V
            let mut eps = Rational::one();
            for (i, a) in self.ambient.roots().iter().enumerate() {
                if sigma_v.contains(&i) {
                    continue;
                }
                let bound = self.ambient.pairing(a, &y).abs() / (qi(2) * self.ambient.pairing(a, &v_prime).abs());
                if bound < eps {
                    eps = bound;
                }
            }
            let q: Vector = y.iter().zip(&v_prime).map(|(a, b)| a + &eps * b).collect();
            let (_, wp) = self.ambient.chamber_of(&q).map_err(|_| WeylExtensionError::Ambiguous(fmt_vec(&y).join(", ")))?;
            table.push(self.w_prime.index_of(&wp.matrix).expect("chamber_of returns a Weyl element"));
        }
        let sigma = SigmaTable::verified(self, table)?;
        Ok(sigma)
    }

    /// The injective apartment morphism induced by the embedding.
    pub fn apartment_morphism(
        &self,
        sigma: &SigmaTable,
        k: usize,
        gamma: OrderedGroupMorphism,
    ) -> Result<ApartmentMorphism, WeylExtensionError> {
        let source = Arc::new(ModelApartment::full(self.sub.clone(), k).map_err(|e| WeylExtensionError::Spec(e.to_string()))?);
        let target = Arc::new(
            ModelApartment::full(self.ambient.clone(), gamma.target_dim()).map_err(|e| WeylExtensionError::Spec(e.to_string()))?,
        );
        let l = self
            .ambient
            .basis_matrix()
            .solve_matrix(&self.sub.basis_matrix())
            .ok_or(WeylExtensionError::NotASubspace)?;
        Ok(ApartmentMorphism::new(source, target, l, gamma, sigma.table.clone())?)
    }
}

/// The table of `σ` with its verification results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaTable {
    pub table: Vec<usize>,
    pub image_size: usize,
    pub ambient_order: usize,
    pub injective: bool,
    pub homomorphism: bool,
    pub restricts_to_w: bool,
    pub preserves_f: bool,
}

impl SigmaTable {
    fn verified(pair: &EmbeddedPair, table: Vec<usize>) -> Result<Self, WeylExtensionError> {
        let (w, wp) = (&pair.w, &pair.w_prime);
        let homomorphism =
            (0..w.len()).all(|a| (0..w.len()).all(|b| table[w.mul(a, b)] == wp.mul(table[a], table[b])));
        let image: BTreeSet<usize> = table.iter().copied().collect();
        let injective = image.len() == table.len();
        let b = pair.sub.basis_matrix();
        let restricts_to_w =
            (0..w.len()).all(|i| &wp.element(table[i]).matrix * &b == &w.element(i).matrix * &b);
        let positive_v: BTreeSet<Vector> = pair
            .sigma_v
            .iter()
            .filter(|&&i| i < pair.ambient.num_positive())
            .map(|&i| pair.ambient.root(i).clone())
            .collect();
        let preserves_f = table.iter().all(|&s| {
            positive_v.iter().map(|a| wp.element(s).apply(a)).collect::<BTreeSet<_>>() == positive_v
        });
        let t = SigmaTable {
            image_size: image.len(),
            ambient_order: wp.len(),
            table,
            injective,
            homomorphism,
            restricts_to_w,
            preserves_f,
        };
        if t.homomorphism && t.injective && t.restricts_to_w && t.preserves_f {
            Ok(t)
        } else {
            Err(WeylExtensionError::Verification(format!(
                "homomorphism {}, injective {}, restriction {}, F-invariance {}",
                t.homomorphism, t.injective, t.restricts_to_w, t.preserves_f
            )))
        }
    }

    pub fn surjective(&self) -> bool {
        self.image_size == self.ambient_order
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleWitness {
    /// Words in the simple reflections.
    pub w: Vec<usize>,
    pub w_prime: Vec<usize>,
    pub w_index: usize,
    pub w_prime_index: usize,
    pub x: Vec<String>,
    pub w_x: Vec<String>,
    pub w_prime_x: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub witness: Option<TriangleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub pairs_checked: usize,
    pub counterexamples: usize,
    pub first_counterexample: Option<Vec<String>>,
}

/// JSON embedding description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub ambient: AmbientSpec,
    pub sub_roots: Vec<Vec<String>>,
    /// Simple roots of `Σ` fixing `C_0`; lexicographic positivity otherwise.
    #[serde(default)]
    pub sub_base: Option<Vec<Vec<String>>>,
    /// Simple roots of `Σ′` fixing `C_0′`; chosen automatically otherwise.
    #[serde(default)]
    pub ambient_base: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmbientSpec {
    Standard { tag: Tag, rank: usize },
    Custom { roots: Vec<Vec<String>>, gram: Option<RationalMatrixJson> },
}

impl EmbeddingSpec {
    pub fn parse(src: &str) -> Result<Self, WeylExtensionError> {
        serde_json::from_str(src).map_err(|e| WeylExtensionError::Spec(e.to_string()))
    }

    pub fn build(&self) -> Result<EmbeddedPair, WeylExtensionError> {
        let spec_err = WeylExtensionError::Spec;
        let ambient = match &self.ambient {
            AmbientSpec::Standard { tag, rank } => RootSystem::standard(*tag, *rank)?,
            AmbientSpec::Custom { roots, gram } => {
                let roots = parse_vectors(roots).map_err(spec_err)?;
                let d = roots.first().map_or(0, Vec::len);
                let gram = match gram {
                    Some(g) => g.to_matrix().map_err(spec_err)?,
                    None => QMatrix::identity(d),
                };
                RootSystem::custom(roots, gram, None)?
            }
        };
        let roots = parse_vectors(&self.sub_roots).map_err(spec_err)?;
        let mut sub = RootSystem::custom(roots, ambient.gram().clone(), None)?;
        if let Some(base) = &self.sub_base {
            sub = sub.with_base(parse_vectors(base).map_err(spec_err)?)?;
        }
        match &self.ambient_base {
            Some(base) => {
                let ambient = ambient.with_base(parse_vectors(base).map_err(spec_err)?)?;
                EmbeddedPair::new(ambient, sub)
            }
            None => EmbeddedPair::with_auto_chamber(ambient, sub),
        }
    }
}

fn strs(v: &[i64]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn pm(vs: &[&[i64]]) -> Vec<Vec<String>> {
    vs.iter().flat_map(|v| [strs(v), strs(&v.iter().map(|x| -x).collect::<Vec<_>>())]).collect()
}

/// Named embeddings used by tests, the acceptance suite and the CLI.
pub fn preset(name: &str) -> Option<EmbeddingSpec> {
    let std = |tag, rank| AmbientSpec::Standard { tag, rank };
    let a1xa1 = AmbientSpec::Custom { roots: pm(&[&[1, 0], &[0, 1]]), gram: None };
    let (ambient, sub_roots) = match name {
        "a1-perp-in-a2" => (std(Tag::A, 2), pm(&[&[1, -1, 0]])),
        "a1-tilted-in-a2" => (std(Tag::A, 2), pm(&[&[3, -1, -2]])),
        "a1-diag-in-a1xa1" => (a1xa1, pm(&[&[1, 1]])),
        "a1-axis-in-a1xa1" => (a1xa1, pm(&[&[1, 0]])),
        "a2-in-g2" => (std(Tag::G2, 2), pm(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])),
        "a2-in-b3" => (std(Tag::B, 3), pm(&[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])),
        "b2-in-a3" => (std(Tag::A, 3), pm(&[&[1, -1, 1, -1], &[1, 1, -1, -1], &[2, 0, 0, -2], &[0, 2, -2, 0]])),
        "a2-in-a3" => (std(Tag::A, 3), pm(&[&[1, -1, 0, 0], &[1, 0, -1, 0], &[0, 1, -1, 0]])),
        "a2-in-a2" => (std(Tag::A, 2), pm(&[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])),
        _ => return None,
    };
    Some(EmbeddingSpec { name: Some(name.into()), ambient, sub_roots, sub_base: None, ambient_base: None })
}

pub const PRESETS: [&str; 9] = [
    "a1-perp-in-a2",
    "a1-tilted-in-a2",
    "a1-diag-in-a1xa1",
    "a1-axis-in-a1xa1",
    "a2-in-g2",
    "a2-in-b3",
    "b2-in-a3",
    "a2-in-a3",
    "a2-in-a2",
];

/// `A_{m−1}` on the first `m` coordinates inside `A_{n−1}`.
pub fn block_embedding(m: usize, n: usize) -> EmbeddingSpec {
    assert!(2 <= m && m <= n, "block sizes");
    let mut roots = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut v = vec![0i64; n];
                v[i] = 1;
                v[j] = -1;
                roots.push(strs(&v));
            }
        }
    }
    EmbeddingSpec {
        name: Some(format!("a{}-block-in-a{}", m - 1, n - 1)),
        ambient: AmbientSpec::Standard { tag: Tag::A, rank: n - 1 },
        sub_roots: roots,
        sub_base: None,
        ambient_base: None,
    }
}

/// `α^T G M` as a row acting on `V`-coordinates.
fn covector_rows(rs: &RootSystem, alpha: &[Rational], m: &QMatrix) -> Vec<Rational> {
    m.vec_mul(&rs.gram().vec_mul(alpha))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn identity_rows(m: usize) -> Vec<Vec<Rational>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// Scales so the first nonzero entry has absolute value one.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let s = v.iter().find(|x| !x.is_zero()).map(Signed::abs).unwrap_or_else(Rational::one);
    v.iter().map(|x| x / &s).collect()
}

fn combine(vs: &[Vec<Rational>], weights: &[u64]) -> Vec<Rational> {
    let d = vs.first().map_or(0, Vec::len);
    vs.iter().zip(weights).fold(vec![Rational::zero(); d], |acc, (v, &c)| {
        acc.iter().zip(v).map(|(a, x)| a + x * qi(c as i64)).collect()
    })
}

/// The dual basis of the simple roots inside the span of `rs`.
fn fundamental_coweights(rs: &RootSystem) -> Vec<Vector> {
    let inv = rs.base_gram().inverse().expect("base gram is invertible");
    let b = rs.basis_matrix();
    (0..rs.rank()).map(|i| b.mul_vec(&inv.column(i))).collect()
}

fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut k = 2u64;
    while out.len() < n {
        if (2..k).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d)) {
            out.push(k);
        }
        k += 1;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(name: &str) -> EmbeddedPair {
        preset(name).unwrap().build().unwrap()
    }

    #[test]
    fn regular_points() {
        let p = pair("a1-perp-in-a2");
        assert!(p.sigma_v().is_empty());
        assert!(p.ambient().is_regular(p.regular_point()));
        let p = pair("a1-diag-in-a1xa1");
        assert!(p.sigma_v().is_empty());
        let p = pair("a1-axis-in-a1xa1");
        assert_eq!(p.sigma_v().len(), 2);
        assert!(!p.ambient().is_regular(p.regular_point()));
        let p = pair("a2-in-a2");
        assert!(p.sigma_v().is_empty());
    }

    #[test]
    fn triangle_verdicts() {
        assert!(pair("a1-perp-in-a2").check_condition_triangle().passed);
        let tilted = pair("a1-tilted-in-a2");
        let report = tilted.check_condition_triangle();
        assert!(!report.passed);
        assert!(tilted.confirm_witness(report.witness.as_ref().unwrap()));
        assert!(pair("a2-in-a2").check_condition_triangle().passed);
    }

    #[test]
    fn sigma_for_long_roots_in_g2() {
        let p = pair("a2-in-g2");
        let s = p.construct_sigma().unwrap();
        assert_eq!(s.image_size, 6);
        assert_eq!(s.ambient_order, 12);
        assert!(!s.surjective());
        assert_eq!(s.table[p.sub_weyl().identity()], p.ambient_weyl().identity());
    }

    #[test]
    fn sigma_on_the_axis_picks_the_f_side() {
        let p = pair("a1-axis-in-a1xa1");
        let s = p.construct_sigma().unwrap();
        let r = 1 - p.sub_weyl().identity();
        // σ(r) is the reflection in e_1, not its product with the reflection in e_2
        let m = &p.ambient_weyl().element(s.table[r]).matrix;
        assert_eq!(m.mul_vec(&[qi(0), qi(1)]), vec![qi(0), qi(1)]);
        let p = pair("a1-diag-in-a1xa1");
        let s = p.construct_sigma().unwrap();
        let r = 1 - p.sub_weyl().identity();
        assert_eq!(p.ambient_weyl().element(s.table[r]).matrix, QMatrix::identity(2).scale(&qi(-1)));
    }

    #[test]
    fn embedding_morphisms() {
        let p = preset("b2-in-a3").unwrap().build().unwrap();
        let s = p.construct_sigma().unwrap();
        assert_eq!((s.image_size, s.ambient_order), (8, 24));
        let m = p.apartment_morphism(&s, 1, OrderedGroupMorphism::identity(1)).unwrap();
        assert!(m.flags().injective && !m.flags().surjective);
        let p = block_embedding(2, 3).build().unwrap();
        let s = p.construct_sigma().unwrap();
        assert_eq!(s.image_size, 2);
        let id = pair("a2-in-a2");
        let s = id.construct_sigma().unwrap();
        let m = id.apartment_morphism(&s, 1, OrderedGroupMorphism::identity(1)).unwrap();
        assert!(m.l().is_identity());
        assert!(s.table.iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn sampling_oracle_agrees_with_exact_verdicts() {
        for name in PRESETS {
            let p = pair(name);
            let exact = p.check_condition_triangle().passed;
            let oracle = p.triangle_sampling_oracle(1000, 7);
            eprintln!("{name}: exact {exact}, counterexamples {}", oracle.counterexamples);
            if exact {
                assert_eq!(oracle.counterexamples, 0, "{name}");
            }
        }
    }

    #[test]
    fn explicit_chambers_without_common_regular_point_fail() {
        let mut spec = preset("a1-perp-in-a2").unwrap();
        spec.ambient_base = Some(vec![strs(&[1, -1, 0]), strs(&[0, 1, -1])]);
        assert!(matches!(spec.build(), Err(WeylExtensionError::NoRegularPoint(_))));
    }
}
