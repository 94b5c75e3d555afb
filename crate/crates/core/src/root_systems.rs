//! Crystallographic root systems in rational coordinates and their Weyl groups.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::RationalMatrixJson;
use crate::scalar::{fmt_rational, q, qi, sign};
use crate::{QMatrix, Rational};

/// Largest Weyl group the enumerator will build.
pub const WEYL_GROUP_CAP: usize = 1152;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("invalid rank {rank} for type {tag}")]
    InvalidRank { tag: String, rank: usize },
    #[error("axiom {axiom} violated: {witness}")]
    Axiom { axiom: &'static str, witness: String },
    #[error("gram matrix is not symmetric positive definite")]
    Gram,
    #[error("not a base: {0}")]
    Base(String),
    #[error("vector is not a root")]
    NotARoot,
    #[error("Weyl group exceeds the size cap of {WEYL_GROUP_CAP}")]
    TooLarge,
    #[error("point is not regular")]
    NotRegular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    A,
    B,
    C,
    D,
    G2,
    Custom,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tag::A => "A",
            Tag::B => "B",
            Tag::C => "C",
            Tag::D => "D",
            Tag::G2 => "G2",
            Tag::Custom => "CUSTOM",
        };
        f.write_str(s)
    }
}

impl Tag {
    /// `A2`, `B3`, `G2`; the rank is implicit for `G2`.
    pub fn label(self, rank: usize) -> String {
        match self {
            Tag::G2 => "G2".into(),
            t => format!("{t}{rank}"),
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Tag::A),
            "B" => Ok(Tag::B),
            "C" => Ok(Tag::C),
            "D" => Ok(Tag::D),
            "G2" | "G" => Ok(Tag::G2),
            "CUSTOM" => Ok(Tag::Custom),
            other => Err(format!("unknown root system tag `{other}`")),
        }
    }
}

pub type Vector = Vec<Rational>;

/// A reduced crystallographic root system with a chosen base.
///
/// Roots are stored positive roots first (by height, then lexicographically),
/// followed by their negatives in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    tag: Tag,
    gram: QMatrix,
    roots: Vec<Vector>,
    simple: Vec<usize>,
    num_positive: usize,
    /// Coordinates of every root in the base.
    coords: Vec<Vector>,
}

fn unit(d: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); d];
    v[i] = Rational::one();
    v
}

fn combo(d: usize, parts: &[(usize, i64)]) -> Vector {
    let mut v = vec![Rational::zero(); d];
    for &(i, c) in parts {
        v[i] += qi(c);
    }
    v
}

fn neg(v: &[Rational]) -> Vector {
    v.iter().map(|x| -x).collect()
}

fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Sign of the first nonzero coordinate.
fn lex_sign(v: &[Rational]) -> i8 {
    v.iter().find(|x| !x.is_zero()).map_or(0, sign)
}

impl RootSystem {
    /// Standard rational realization of a named type.
    pub fn standard(tag: Tag, rank: usize) -> Result<Self, RootSystemError> {
        let bad = || RootSystemError::InvalidRank { tag: tag.to_string(), rank };
        let (d, mut roots, simple): (usize, Vec<Vector>, Vec<Vector>) = match tag {
            Tag::A => {
                if rank < 1 {
                    return Err(bad());
                }
                let d = rank + 1;
                let mut r = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            r.push(combo(d, &[(i, 1), (j, -1)]));
                        }
                    }
                }
                (d, r, (0..rank).map(|i| combo(d, &[(i, 1), (i + 1, -1)])).collect())
            }
            Tag::B | Tag::C | Tag::D => {
                let min = if tag == Tag::D { 4 } else { 2 };
                if rank < min {
                    return Err(bad());
                }
                let d = rank;
                let mut r = Vec::new();
                for i in 0..d {
                    for j in i + 1..d {
                        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                            r.push(combo(d, &[(i, a), (j, b)]));
                        }
                    }
                    match tag {
                        Tag::B => r.extend([unit(d, i), neg(&unit(d, i))]),
                        Tag::C => r.extend([combo(d, &[(i, 2)]), combo(d, &[(i, -2)])]),
                        _ => {}
                    }
                }
                let mut s: Vec<Vector> = (0..d - 1).map(|i| combo(d, &[(i, 1), (i + 1, -1)])).collect();
                s.push(match tag {
                    Tag::B => unit(d, d - 1),
                    Tag::C => combo(d, &[(d - 1, 2)]),
                    _ => combo(d, &[(d - 2, 1), (d - 1, 1)]),
                });
                (d, r, s)
            }
            Tag::G2 => {
                if rank != 2 {
                    return Err(bad());
                }
                let mut r = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        if i != j {
                            r.push(combo(3, &[(i, 1), (j, -1)]));
                        }
                    }
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    r.push(combo(3, &[(i, 2), (j, -1), (k, -1)]));
                    r.push(combo(3, &[(i, -2), (j, 1), (k, 1)]));
                }
                (3, r, vec![combo(3, &[(0, 1), (1, -1)]), combo(3, &[(0, -2), (1, 1), (2, 1)])])
            }
            Tag::Custom => return Err(bad()),
        };
        roots.sort();
        let base: Vec<usize> = simple
            .iter()
            .map(|s| roots.iter().position(|r| r == s).expect("simple root present"))
            .collect();
        Self::build(tag, roots, QMatrix::identity(d), Some(base))
    }

    /// A root system from explicit roots, a gram matrix and an optional base.
    ///
    /// Without a base, the positive roots are those whose first nonzero
    /// coordinate is positive.
    pub fn custom(roots: Vec<Vector>, gram: QMatrix, base: Option<Vec<usize>>) -> Result<Self, RootSystemError> {
        Self::build(Tag::Custom, roots, gram, base)
    }

    fn build(tag: Tag, roots: Vec<Vector>, gram: QMatrix, base: Option<Vec<usize>>) -> Result<Self, RootSystemError> {
        let d = gram.rows();
        check_gram(&gram)?;
        if roots.is_empty() {
            return Err(RootSystemError::Axiom { axiom: "RS_I", witness: "empty root set".into() });
        }
        for r in &roots {
            if r.len() != d {
                return Err(RootSystemError::Dimension { expected: d, found: r.len() });
            }
        }
        let base_vecs: Option<Vec<Vector>> = match base {
            Some(b) => Some(
                b.iter()
                    .map(|&i| roots.get(i).cloned().ok_or_else(|| RootSystemError::Base(format!("index {i} out of range"))))
                    .collect::<Result<_, _>>()?,
            ),
            None => None,
        };
        let raw = RootSystem {
            tag,
            gram,
            roots,
            simple: Vec::new(),
            num_positive: 0,
            coords: Vec::new(),
        };
        raw.check_axioms()?;
        let simple = match base_vecs {
            Some(b) => b,
            None => raw.simple_from_order(|v| lex_sign(v) > 0),
        };
        raw.with_base(simple)
    }

    /// Positive system `{α : f(α)}` and its indecomposable elements.
    fn simple_from_order(&self, positive: impl Fn(&[Rational]) -> bool) -> Vec<Vector> {
        let pos: Vec<&Vector> = self.roots.iter().filter(|r| positive(r)).collect();
        pos.iter()
            .filter(|a| {
                !pos.iter().any(|b| {
                    let rest: Vector = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                    pos.iter().any(|c| **c == rest)
                })
            })
            .map(|a| (*a).clone())
            .collect()
    }

    /// Reorders the roots around a new base and validates it.
    pub fn with_base(&self, simple: Vec<Vector>) -> Result<Self, RootSystemError> {
        let d = self.gram.rows();
        let b = QMatrix::from_columns(&simple, d);
        if b.rank() != simple.len() {
            return Err(RootSystemError::Base("simple roots are linearly dependent".into()));
        }
        let mut pos: Vec<(Vector, Vector)> = Vec::new();
        for r in &self.roots {
            let c = b
                .solve(r)
                .ok_or_else(|| RootSystemError::Base(format!("root {} outside the span of the base", fmt_vec(r))))?;
            if c.iter().any(|x| !x.is_integer()) {
                return Err(RootSystemError::Base(format!("root {} has non-integral coordinates", fmt_vec(r))));
            }
            let nonneg = c.iter().all(|x| !x.is_negative());
            let nonpos = c.iter().all(|x| !x.is_positive());
            if !nonneg && !nonpos {
                return Err(RootSystemError::Base(format!("root {} has mixed signs", fmt_vec(r))));
            }
            if nonneg {
                pos.push((c, r.clone()));
            }
        }
        pos.sort_by(|(ca, ra), (cb, rb)| {
            let h = |c: &Vector| c.iter().fold(Rational::zero(), |a, x| a + x);
            h(ca).cmp(&h(cb)).then_with(|| cb.cmp(ca)).then_with(|| ra.cmp(rb))
        });
        let mut roots: Vec<Vector> = pos.iter().map(|(_, r)| r.clone()).collect();
        let mut coords: Vec<Vector> = pos.iter().map(|(c, _)| c.clone()).collect();
        roots.extend(pos.iter().map(|(_, r)| neg(r)));
        coords.extend(pos.iter().map(|(c, _)| neg(c)));
        let simple_idx = simple
            .iter()
            .map(|s| roots.iter().position(|r| r == s).expect("simple root is a root"))
            .collect();
        Ok(RootSystem {
            tag: self.tag,
            gram: self.gram.clone(),
            roots,
            simple: simple_idx,
            num_positive: pos.len(),
            coords,
        })
    }

    /// A new base: the positive roots are those positive at `p`, ties broken by
    /// the sign of the first nonzero coordinate.
    pub fn with_base_from_point(&self, p: &[Rational]) -> Result<Self, RootSystemError> {
        let simple = self.simple_from_order(|r| match sign(&self.pairing(r, p)) {
            0 => lex_sign(r) > 0,
            s => s > 0,
        });
        self.with_base(simple)
    }

    /// Verifies RS_I–RS_III and reducedness.
    pub fn check_axioms(&self) -> Result<(), RootSystemError> {
        let err = |axiom, witness: String| Err(RootSystemError::Axiom { axiom, witness });
        for (i, a) in self.roots.iter().enumerate() {
            if is_zero(a) {
                return err("RS_I", "zero vector in root set".into());
            }
            for b in &self.roots[i + 1..] {
                if a == b {
                    return err("RS_I", format!("duplicate root {}", fmt_vec(a)));
                }
                let c = self.coroot_value(a, b);
                if !c.is_integer() {
                    return err("RS_III", format!("coroot of {} on {} is {}", fmt_vec(a), fmt_vec(b), fmt_rational(&c)));
                }
                let c2 = self.coroot_value(b, a);
                if !c2.is_integer() {
                    return err("RS_III", format!("coroot of {} on {} is {}", fmt_vec(b), fmt_vec(a), fmt_rational(&c2)));
                }
                if proportional(a, b) && *b != neg(a) {
                    return err("RS_I", format!("non-reduced pair {} and {}", fmt_vec(a), fmt_vec(b)));
                }
            }
        }
        for a in &self.roots {
            for b in &self.roots {
                let r = self.reflect(a, b);
                if !self.roots.contains(&r) {
                    return err("RS_II", format!("reflection in {} sends {} outside", fmt_vec(a), fmt_vec(b)));
                }
            }
        }
        Ok(())
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn roots(&self) -> &[Vector] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Vector {
        &self.roots[i]
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.roots[..self.num_positive]
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn simple_roots(&self) -> Vec<Vector> {
        self.simple.iter().map(|&i| self.roots[i].clone()).collect()
    }

    /// Coordinates of root `i` in the base.
    pub fn root_coords(&self, i: usize) -> &Vector {
        &self.coords[i]
    }

    pub fn index_of(&self, v: &[Rational]) -> Option<usize> {
        self.roots.iter().position(|r| r.as_slice() == v)
    }

    /// `d × r` matrix whose columns are the simple roots.
    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_columns(&self.simple_roots(), self.ambient_dim())
    }

    /// Gram matrix of the simple roots.
    pub fn base_gram(&self) -> QMatrix {
        let b = self.basis_matrix();
        &(&b.transpose() * &self.gram) * &b
    }

    /// Coordinates of `v` in the base, when `v` lies in the span.
    pub fn base_coords(&self, v: &[Rational]) -> Option<Vector> {
        self.basis_matrix().solve(v)
    }

    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let gb = self.gram.mul_vec(b);
        a.iter().zip(&gb).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
    }

    /// `α∨(x) = 2⟨α, x⟩ / ⟨α, α⟩`.
    pub fn coroot_value(&self, alpha: &[Rational], x: &[Rational]) -> Rational {
        qi(2) * self.pairing(alpha, x) / self.pairing(alpha, alpha)
    }

    /// The coroot of `α` as a row covector.
    pub fn coroot(&self, alpha: &[Rational]) -> Result<Vector, RootSystemError> {
        self.index_of(alpha).ok_or(RootSystemError::NotARoot)?;
        let s = qi(2) / self.pairing(alpha, alpha);
        Ok(self.gram.vec_mul(alpha).into_iter().map(|x| x * &s).collect())
    }

    fn reflect(&self, alpha: &[Rational], x: &[Rational]) -> Vector {
        let c = self.coroot_value(alpha, x);
        x.iter().zip(alpha).map(|(xi, ai)| xi - &c * ai).collect()
    }

    /// The reflection `r_α` as a Weyl element.
    pub fn reflection(&self, alpha: &[Rational]) -> Result<WeylElement, RootSystemError> {
        let cov = self.coroot(alpha)?;
        let d = self.ambient_dim();
        let mut m = QMatrix::identity(d);
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] = &m[(r, c)] - &alpha[r] * &cov[c];
            }
        }
        Ok(WeylElement::new(m))
    }

    pub fn is_regular(&self, p: &[Rational]) -> bool {
        self.positive_roots().iter().all(|a| !self.pairing(a, p).is_zero())
    }

    /// Indices of roots vanishing on every vector of `s`.
    pub fn vanishing_roots(&self, s: &[Vector]) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| s.iter().all(|v| self.pairing(&self.roots[i], v).is_zero()))
            .collect()
    }

    /// The chamber of a regular point and the Weyl element carrying `C_0` onto it.
    pub fn chamber_of(&self, p: &[Rational]) -> Result<(Chamber, WeylElement), RootSystemError> {
        if p.len() != self.ambient_dim() {
            return Err(RootSystemError::Dimension { expected: self.ambient_dim(), found: p.len() });
        }
        if !self.is_regular(p) {
            return Err(RootSystemError::NotRegular);
        }
        let chamber = Chamber {
            signs: self.positive_roots().iter().map(|a| sign(&self.pairing(a, p))).collect(),
        };
        let mut x = p.to_vec();
        let mut w = QMatrix::identity(self.ambient_dim());
        let reflections: Vec<QMatrix> = self
            .simple_roots()
            .iter()
            .map(|a| self.reflection(a).expect("simple root").matrix)
            .collect();
        'descent: loop {
            for (k, a) in self.simple_roots().iter().enumerate() {
                if self.pairing(a, &x).is_negative() {
                    x = reflections[k].mul_vec(&x);
                    w = &w * &reflections[k];
                    continue 'descent;
                }
            }
            break;
        }
        Ok((chamber, WeylElement::new(w)))
    }

    /// A point of the open fundamental chamber inside the span:
    /// every simple root takes the value 1 on it.
    pub fn rho_point(&self) -> Vector {
        let ones = vec![Rational::one(); self.rank()];
        let z = self.base_gram().solve(&ones).expect("base gram is invertible");
        self.basis_matrix().mul_vec(&z)
    }

    /// Closure of the simple reflections under multiplication.
    pub fn enumerate_weyl_group(&self) -> Result<WeylGroup, RootSystemError> {
        let gens: Vec<QMatrix> = self
            .simple_roots()
            .iter()
            .map(|a| self.reflection(a).expect("simple root").matrix)
            .collect();
        let id = QMatrix::identity(self.ambient_dim());
        let mut seen: BTreeMap<QMatrix, Vec<usize>> = BTreeMap::new();
        seen.insert(id.clone(), Vec::new());
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            let word = seen[&m].clone();
            for (k, g) in gens.iter().enumerate() {
                let next = &m * g;
                if !seen.contains_key(&next) {
                    if seen.len() == WEYL_GROUP_CAP {
                        return Err(RootSystemError::TooLarge);
                    }
                    let mut w = word.clone();
                    w.push(k);
                    seen.insert(next.clone(), w);
                    queue.push_back(next);
                }
            }
        }
        Ok(WeylGroup::from_map(seen))
    }

    pub fn to_json(&self) -> RootSystemJson {
        RootSystemJson {
            tag: self.tag,
            rank: self.rank(),
            roots: self.roots.iter().map(|r| r.iter().map(fmt_rational).collect()).collect(),
            gram: RationalMatrixJson::from(&self.gram),
            basis: self.simple.clone(),
        }
    }

    /// Sub-system of the roots satisfying a predicate, with the ambient gram.
    pub fn subsystem(&self, keep: impl Fn(&Vector) -> bool) -> Result<Self, RootSystemError> {
        let roots: Vec<Vector> = self.roots.iter().filter(|r| keep(r)).cloned().collect();
        Self::custom(roots, self.gram.clone(), None)
    }
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else { return false };
    if b[i].is_zero() {
        return false;
    }
    let c = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| x * &c == *y)
}

fn check_gram(g: &QMatrix) -> Result<(), RootSystemError> {
    if !g.is_square() || *g != g.transpose() {
        return Err(RootSystemError::Gram);
    }
    for k in 1..=g.rows() {
        let idx: Vec<usize> = (0..k).collect();
        let minor = QMatrix::from_rows(idx.iter().map(|&r| idx.iter().map(|&c| g[(r, c)].clone()).collect()).collect(), k);
        if !minor.determinant().is_positive() {
            return Err(RootSystemError::Gram);
        }
    }
    Ok(())
}

pub(crate) fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

/// JSON form of a root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemJson {
    pub tag: Tag,
    pub rank: usize,
    pub roots: Vec<Vec<String>>,
    pub gram: RationalMatrixJson,
    pub basis: Vec<usize>,
}

impl RootSystemJson {
    pub fn to_root_system(&self) -> Result<RootSystem, String> {
        if self.tag != Tag::Custom {
            return RootSystem::standard(self.tag, self.rank).map_err(|e| e.to_string());
        }
        let roots = parse_vectors(&self.roots)?;
        let gram = self.gram.to_matrix()?;
        RootSystem::custom(roots, gram, Some(self.basis.clone())).map_err(|e| e.to_string())
    }
}

pub fn parse_vectors(raw: &[Vec<String>]) -> Result<Vec<Vector>, String> {
    raw.iter()
        .map(|r| {
            r.iter()
                .map(|s| crate::scalar::parse_rational(s).ok_or_else(|| format!("bad rational `{s}`")))
                .collect()
        })
        .collect()
}

/// A Weyl group element, canonicalized by its matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub matrix: QMatrix,
}

impl WeylElement {
    pub fn new(matrix: QMatrix) -> Self {
        WeylElement { matrix }
    }

    pub fn identity(d: usize) -> Self {
        Self::new(QMatrix::identity(d))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.matrix * &other.matrix)
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        self.matrix.mul_vec(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// Sign pattern of a chamber over the positive roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Chamber {
    pub signs: Vec<i8>,
}

/// An enumerated Weyl group, sorted by matrix.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    words: Vec<Vec<usize>>,
    index: BTreeMap<QMatrix, usize>,
    identity: usize,
}

impl WeylGroup {
    fn from_map(map: BTreeMap<QMatrix, Vec<usize>>) -> Self {
        let mut elements = Vec::with_capacity(map.len());
        let mut words = Vec::with_capacity(map.len());
        let mut index = BTreeMap::new();
        let mut identity = 0;
        for (i, (m, w)) in map.into_iter().enumerate() {
            if m.is_identity() {
                identity = i;
            }
            index.insert(m.clone(), i);
            elements.push(WeylElement::new(m));
            words.push(w);
        }
        WeylGroup { elements, words, index, identity }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    /// Shortest word in the simple reflections (indices into the base).
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, m: &QMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = &self.elements[a].matrix * &self.elements[b].matrix;
        self.index_of(&m).expect("group is closed")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let m = self.elements[a].matrix.inverse().expect("invertible");
        self.index_of(&m).expect("group is closed")
    }

    /// Full multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|a| (0..self.len()).map(|b| self.mul(a, b)).collect()).collect()
    }
}

/// `(A, 1)`, `(A, 2)`, … realized as their standard systems; used in tests and the CLI.
pub fn standard(tag: Tag, rank: usize) -> Result<RootSystem, RootSystemError> {
    RootSystem::standard(tag, rank)
}

/// `A_1 × A_1` as `{±e_1, ±e_2}` with the identity gram.
pub fn a1_times_a1() -> RootSystem {
    let roots = vec![unit(2, 0), neg(&unit(2, 0)), unit(2, 1), neg(&unit(2, 1))];
    RootSystem::custom(roots, QMatrix::identity(2), None).expect("valid system")
}

/// `B_2` inside `ℚ^4` on the plane `{(a, b, −b, −a)}`.
pub fn b2_sp4_plane() -> RootSystem {
    let v = |a: [i64; 4]| a.iter().map(|&x| qi(x)).collect::<Vector>();
    let base = [v([1, -1, 1, -1]), v([1, 1, -1, -1]), v([2, 0, 0, -2]), v([0, 2, -2, 0])];
    let mut roots = Vec::new();
    for b in &base {
        roots.push(b.clone());
        roots.push(neg(b));
    }
    RootSystem::custom(roots, QMatrix::identity(4), None).expect("valid system")
}

/// Half-integer helper for examples: `n/2`.
pub fn half(n: i64) -> Rational {
    q(n, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add(a: &[Rational], b: &[Rational]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn root_counts() {
        assert_eq!(standard(Tag::A, 2).unwrap().roots().len(), 6);
        assert_eq!(standard(Tag::B, 2).unwrap().roots().len(), 8);
        assert_eq!(standard(Tag::C, 3).unwrap().roots().len(), 18);
        assert_eq!(standard(Tag::D, 4).unwrap().roots().len(), 24);
        let g2 = standard(Tag::G2, 2).unwrap();
        assert_eq!(g2.roots().len(), 12);
        let long = g2.subsystem(|r| g2.pairing(r, r) == qi(6)).unwrap();
        assert_eq!(long.roots().len(), 6);
        assert_eq!(long.enumerate_weyl_group().unwrap().len(), 6);
        assert!(standard(Tag::D, 3).is_err());
        assert!(standard(Tag::G2, 3).is_err());
    }

    #[test]
    fn custom_a1() {
        let rs = RootSystem::custom(vec![v(&[1]), v(&[-1])], QMatrix::diagonal(&[qi(2)]), None).unwrap();
        assert_eq!(rs.rank(), 1);
        assert_eq!(rs.coroot_value(rs.root(0), rs.root(0)), qi(2));
    }

    #[test]
    fn custom_rejections() {
        let bc = RootSystem::custom(vec![v(&[1]), v(&[-1]), v(&[2]), v(&[-2])], QMatrix::identity(1), None);
        assert!(matches!(bc, Err(RootSystemError::Axiom { axiom: "RS_I", .. })));
        let not_closed = RootSystem::custom(vec![v(&[1, 0]), v(&[-1, 0]), v(&[1, 1]), v(&[-1, -1])], QMatrix::identity(2), None);
        assert!(matches!(not_closed, Err(RootSystemError::Axiom { .. })));
        let bad_gram = RootSystem::custom(vec![v(&[1]), v(&[-1])], QMatrix::diagonal(&[qi(-1)]), None);
        assert_eq!(bad_gram, Err(RootSystemError::Gram));
    }

    #[test]
    fn reflection_examples() {
        let a2 = standard(Tag::A, 2).unwrap();
        let s = a2.simple_roots();
        let r1 = a2.reflection(&s[0]).unwrap();
        assert_eq!(r1.apply(&s[0]), neg(&s[0]));
        assert_eq!(r1.apply(&s[1]), add(&s[0], &s[1]));
        assert!(r1.compose(&r1).is_identity());
        assert_eq!(a2.coroot_value(&s[0], &s[1]), qi(-1));
    }

    #[test]
    fn weyl_orders() {
        for (tag, rank, order) in [(Tag::A, 2, 6), (Tag::B, 2, 8), (Tag::G2, 2, 12), (Tag::A, 3, 24), (Tag::C, 3, 48), (Tag::D, 4, 192)] {
            let w = standard(tag, rank).unwrap().enumerate_weyl_group().unwrap();
            assert_eq!(w.len(), order, "{tag}{rank}");
            assert!(w.element(w.identity()).is_identity());
        }
    }

    #[test]
    fn vanishing_examples() {
        let a2 = standard(Tag::A, 2).unwrap();
        assert_eq!(a2.vanishing_roots(&[vec![Rational::zero(); 3]]).len(), 6);
        assert!(a2.vanishing_roots(&[a2.root(0).clone()]).is_empty());
        let p = a1_times_a1();
        assert!(p.vanishing_roots(&[v(&[1, 1])]).is_empty());
        let van = p.vanishing_roots(&[v(&[1, 0])]);
        let vecs: Vec<Vector> = van.iter().map(|&i| p.root(i).clone()).collect();
        assert_eq!(vecs.len(), 2);
        assert!(vecs.contains(&v(&[0, 1])) && vecs.contains(&v(&[0, -1])));
    }

    #[test]
    fn regularity_and_chambers() {
        let a2 = standard(Tag::A, 2).unwrap();
        let rho = a2.rho_point();
        assert!(a2.is_regular(&rho));
        let (ch, w) = a2.chamber_of(&rho).unwrap();
        assert!(w.is_identity());
        assert!(ch.signs.iter().all(|&s| s == 1));
        assert!(!a2.is_regular(&[Rational::zero(), Rational::zero(), Rational::zero()]));
        let on_wall = v(&[1, 1, -2]);
        assert!(!a2.is_regular(&on_wall));
        assert_eq!(a2.chamber_of(&on_wall).unwrap_err(), RootSystemError::NotRegular);
    }

    #[test]
    fn b2_plane_is_b2() {
        let b2 = b2_sp4_plane();
        assert_eq!(b2.rank(), 2);
        assert_eq!(b2.enumerate_weyl_group().unwrap().len(), 8);
    }
}
