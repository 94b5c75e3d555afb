//! The value groups `Λ = ℚ^k` with lexicographic order, and group morphisms between them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::json::RationalMatrixJson;
use crate::scalar::{fmt_rational, parse_rational, qi};
use crate::QMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("infinite value where a finite one is required")]
    Infinite,
}

/// An element of `ℚ^k` (lexicographically ordered) or the valuation sentinel `∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LexValue {
    Finite(Vec<BigRational>),
    Infinity,
}

impl LexValue {
    pub fn zero(k: usize) -> Self {
        LexValue::Finite(vec![BigRational::zero(); k])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        LexValue::Finite(coords.iter().map(|&c| qi(c)).collect())
    }

    pub fn scalar(x: BigRational) -> Self {
        LexValue::Finite(vec![x])
    }

    /// Unit vector `e_i` in `ℚ^k`.
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![BigRational::zero(); k];
        v[i] = BigRational::one();
        LexValue::Finite(v)
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            LexValue::Finite(c) => Some(c.len()),
            LexValue::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LexValue::Infinity)
    }

    pub fn coords(&self) -> Option<&[BigRational]> {
        match self {
            LexValue::Finite(c) => Some(c),
            LexValue::Infinity => None,
        }
    }

    /// Coordinates of a finite value.
    ///
    /// # Panics
    /// On `∞`.
    pub fn finite(&self) -> &[BigRational] {
        self.coords().expect("finite value expected")
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LexValue::Finite(c) if c.iter().all(Zero::is_zero))
    }

    /// Sign of the first nonzero coordinate; `∞` counts as positive.
    pub fn signum(&self) -> i8 {
        match self {
            LexValue::Infinity => 1,
            LexValue::Finite(c) => match c.iter().find(|x| !x.is_zero()) {
                None => 0,
                Some(x) if x.is_positive() => 1,
                Some(_) => -1,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Index of the first nonzero coordinate.
    pub fn lead(&self) -> Option<usize> {
        self.coords()?.iter().position(|x| !x.is_zero())
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational scalar multiple. `∞` is only scaled by positive numbers.
    pub fn scale(&self, s: &BigRational) -> Self {
        match self {
            LexValue::Finite(c) => LexValue::Finite(c.iter().map(|x| x * s).collect()),
            LexValue::Infinity => {
                assert!(s.is_positive(), "cannot scale infinity by a non-positive number");
                LexValue::Infinity
            }
        }
    }

    /// Whether all coordinates are integers.
    pub fn is_integral(&self) -> bool {
        matches!(self, LexValue::Finite(c) if c.iter().all(BigRational::is_integer))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, OrderError> {
        match (self, other) {
            (LexValue::Finite(a), LexValue::Finite(b)) => {
                if a.len() != b.len() {
                    return Err(OrderError::DimensionMismatch { left: a.len(), right: b.len() });
                }
                Ok(LexValue::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Ok(LexValue::Infinity),
        }
    }

    pub fn min<'a>(&'a self, other: &'a Self) -> &'a Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for LexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexValue::Infinity => write!(f, "inf"),
            LexValue::Finite(c) if c.len() == 1 => write!(f, "{}", fmt_rational(&c[0])),
            LexValue::Finite(c) => {
                let parts: Vec<String> = c.iter().map(fmt_rational).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// Lexicographic comparison with dimension checking.
pub fn compare(a: &LexValue, b: &LexValue) -> Result<Ordering, OrderError> {
    if let (Some(x), Some(y)) = (a.dim(), b.dim()) {
        if x != y {
            return Err(OrderError::DimensionMismatch { left: x, right: y });
        }
    }
    Ok(a.cmp(b))
}

impl Ord for LexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LexValue::Infinity, LexValue::Infinity) => Ordering::Equal,
            (LexValue::Infinity, _) => Ordering::Greater,
            (_, LexValue::Infinity) => Ordering::Less,
            (LexValue::Finite(a), LexValue::Finite(b)) => {
                debug_assert_eq!(a.len(), b.len(), "comparing values of different rank");
                a.cmp(b)
            }
        }
    }
}

impl PartialOrd for LexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LexValue {
    type Output = LexValue;
    fn add(self, rhs: &LexValue) -> LexValue {
        self.checked_add(rhs).expect("rank mismatch in LexValue addition")
    }
}

impl Add for LexValue {
    type Output = LexValue;
    fn add(self, rhs: LexValue) -> LexValue {
        &self + &rhs
    }
}

impl Neg for &LexValue {
    type Output = LexValue;
    fn neg(self) -> LexValue {
        match self {
            LexValue::Finite(c) => LexValue::Finite(c.iter().map(|x| -x).collect()),
            LexValue::Infinity => panic!("negation of infinity"),
        }
    }
}

impl Neg for LexValue {
    type Output = LexValue;
    fn neg(self) -> LexValue {
        -&self
    }
}

impl Sub for &LexValue {
    type Output = LexValue;
    fn sub(self, rhs: &LexValue) -> LexValue {
        self + &(-rhs)
    }
}

impl Sub for LexValue {
    type Output = LexValue;
    fn sub(self, rhs: LexValue) -> LexValue {
        &self - &rhs
    }
}

impl Serialize for LexValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LexValue::Infinity => s.serialize_str("inf"),
            LexValue::Finite(c) => s.collect_seq(c.iter().map(fmt_rational)),
        }
    }
}

impl<'de> Deserialize<'de> for LexValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Coords(Vec<String>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) if t == "inf" => Ok(LexValue::Infinity),
            Raw::Text(t) => parse_rational(&t)
                .map(LexValue::scalar)
                .ok_or_else(|| D::Error::custom(format!("bad value `{t}`"))),
            Raw::Coords(c) => c
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))))
                .collect::<Result<Vec<_>, _>>()
                .map(LexValue::Finite),
        }
    }
}

/// Result of the order-preservation decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub preserving: bool,
    /// A vector `x >_lex 0` with `γ(x) <_lex 0` when not preserving.
    pub witness: Option<LexValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFlags {
    pub injective: bool,
    pub surjective: bool,
}

/// A group morphism `ℚ^k → ℚ^m` given by an `m×k` rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedGroupMorphism {
    matrix: QMatrix,
}

impl OrderedGroupMorphism {
    pub fn new(matrix: QMatrix) -> Self {
        OrderedGroupMorphism { matrix }
    }

    pub fn identity(k: usize) -> Self {
        Self::new(QMatrix::identity(k))
    }

    /// Projection `ℚ^k → ℚ` onto coordinate `i`.
    pub fn projection(k: usize, i: usize) -> Self {
        let mut m = QMatrix::zeros(1, k);
        m[(0, i)] = BigRational::one();
        Self::new(m)
    }

    /// Inclusion `ℚ^k → ℚ^m` onto the first `k` coordinates.
    pub fn inclusion(k: usize, m: usize) -> Self {
        assert!(k <= m);
        let mut mat = QMatrix::zeros(m, k);
        for i in 0..k {
            mat[(i, i)] = BigRational::one();
        }
        Self::new(mat)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &LexValue) -> Result<LexValue, OrderError> {
        match x {
            LexValue::Infinity => Ok(LexValue::Infinity),
            LexValue::Finite(c) => {
                if c.len() != self.source_dim() {
                    return Err(OrderError::DimensionMismatch { left: c.len(), right: self.source_dim() });
                }
                Ok(LexValue::Finite(self.matrix.mul_vec(c)))
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, OrderError> {
        if self.source_dim() != inner.target_dim() {
            return Err(OrderError::DimensionMismatch { left: self.source_dim(), right: inner.target_dim() });
        }
        Ok(Self::new(&self.matrix * &inner.matrix))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.matrix.inverse().map(Self::new)
    }

    pub fn rank_flags(&self) -> RankFlags {
        let r = self.matrix.rank();
        RankFlags {
            injective: r == self.source_dim(),
            surjective: r == self.target_dim(),
        }
    }

    /// Exact decision whether `x >_lex 0` implies `γ(x) ≥_lex 0`.
    ///
    /// Column `i` must be lex-nonnegative, and every later column must vanish on
    /// all coordinates up to the leading index of column `i` (all of them, when
    /// column `i` is zero).
    pub fn order_check(&self) -> OrderCheck {
        let k = self.source_dim();
        let cols: Vec<LexValue> = self.matrix.columns().into_iter().map(LexValue::Finite).collect();
        for i in 0..k {
            let vi = &cols[i];
            if vi.is_negative() {
                return self.refuted(LexValue::unit(k, i));
            }
            let lead = vi.lead();
            for (j, vj) in cols.iter().enumerate().skip(i + 1) {
                let Some(m) = vj.lead() else { continue };
                let mut x = vec![BigRational::zero(); k];
                x[i] = BigRational::one();
                match lead {
                    None => {
                        x[j] = if vj.is_positive() { -BigRational::one() } else { BigRational::one() };
                    }
                    Some(l) if m <= l => {
                        let vjm = &vj.finite()[m];
                        let mag = if m < l {
                            BigRational::one()
                        } else {
                            &vi.finite()[l] / vjm.abs() + BigRational::one()
                        };
                        x[j] = if vjm.is_positive() { -mag } else { mag };
                    }
                    Some(_) => continue,
                }
                return self.refuted(LexValue::Finite(x));
            }
        }
        OrderCheck { preserving: true, witness: None }
    }

    fn refuted(&self, witness: LexValue) -> OrderCheck {
        debug_assert!(witness.is_positive());
        debug_assert!(self.apply(&witness).unwrap().is_negative());
        OrderCheck { preserving: false, witness: Some(witness) }
    }

    pub fn is_order_preserving(&self) -> bool {
        self.order_check().preserving
    }

    /// Number of seeded samples `x >_lex 0` with `γ(x) <_lex 0`.
    ///
    /// Coordinates mix zeros with magnitudes across six orders so that
    /// violations needing a tiny leading coordinate are reachable.
    pub fn positivity_violations(&self, samples: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.source_dim();
        let mut count = 0;
        let mut drawn = 0;
        while drawn < samples {
            let x: Vec<BigRational> = (0..k)
                .map(|_| {
                    if rng.gen_ratio(1, 4) {
                        return BigRational::zero();
                    }
                    let num = BigInt::from(rng.gen_range(1..=1000i64) * if rng.gen_bool(0.5) { 1 } else { -1 });
                    let den = BigInt::from(rng.gen_range(1..=1000i64));
                    BigRational::new(num, den)
                })
                .collect();
            let x = LexValue::Finite(x);
            if !x.is_positive() {
                continue;
            }
            drawn += 1;
            if self.apply(&x).expect("dimension").is_negative() {
                count += 1;
            }
        }
        count
    }
}

impl Serialize for OrderedGroupMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalMatrixJson::from(&self.matrix).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedGroupMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RationalMatrixJson::deserialize(d)?;
        raw.to_matrix().map(Self::new).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn lv(c: &[(i64, i64)]) -> LexValue {
        LexValue::Finite(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn gamma(rows: &[&[i64]]) -> OrderedGroupMorphism {
        let cols = rows[0].len();
        OrderedGroupMorphism::new(QMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect(),
            cols,
        ))
    }

    #[test]
    fn lexicographic_comparison() {
        assert_eq!(compare(&LexValue::from_ints(&[1, -100]), &LexValue::from_ints(&[0, 100])), Ok(Ordering::Greater));
        assert_eq!(compare(&LexValue::zero(2), &LexValue::zero(2)), Ok(Ordering::Equal));
        assert_eq!(compare(&lv(&[(2, 1), (3, 1)]), &lv(&[(2, 1), (7, 2)])), Ok(Ordering::Less));
        assert!(compare(&LexValue::zero(1), &LexValue::zero(2)).is_err());
        assert_eq!(compare(&LexValue::Infinity, &LexValue::from_ints(&[5])), Ok(Ordering::Greater));
    }

    #[test]
    fn apply_examples() {
        let pr1 = OrderedGroupMorphism::projection(2, 0);
        assert_eq!(pr1.apply(&LexValue::from_ints(&[3, 5])).unwrap(), LexValue::from_ints(&[3]));
        let id = OrderedGroupMorphism::identity(2);
        assert_eq!(id.apply(&LexValue::from_ints(&[3, 5])).unwrap(), LexValue::from_ints(&[3, 5]));
        let inc = OrderedGroupMorphism::inclusion(1, 2);
        assert_eq!(inc.apply(&LexValue::from_ints(&[4])).unwrap(), LexValue::from_ints(&[4, 0]));
        assert_eq!(inc.apply(&LexValue::Infinity).unwrap(), LexValue::Infinity);
        assert!(pr1.apply(&LexValue::zero(3)).is_err());
    }

    #[test]
    fn order_preservation_examples() {
        assert!(OrderedGroupMorphism::projection(2, 0).is_order_preserving());
        assert!(OrderedGroupMorphism::identity(3).is_order_preserving());
        let swap = gamma(&[&[0, 1], &[1, 0]]);
        let check = swap.order_check();
        assert!(!check.preserving);
        assert_eq!(check.witness, Some(LexValue::from_ints(&[1, -1])));
        assert!(!OrderedGroupMorphism::projection(2, 1).is_order_preserving());
    }

    #[test]
    fn positivity_oracle_agrees_with_decision() {
        assert_eq!(OrderedGroupMorphism::projection(2, 0).positivity_violations(500, 1), 0);
        assert!(gamma(&[&[0, 1], &[1, 0]]).positivity_violations(500, 1) > 0);
        // needs a leading coordinate much smaller than the second one
        assert!(gamma(&[&[1, -1], &[0, 0]]).positivity_violations(1000, 2) > 0);
        assert_eq!(gamma(&[&[1, 0], &[-5, 1]]).positivity_violations(500, 3), 0);
    }

    #[test]
    fn rank_flags_examples() {
        let f = OrderedGroupMorphism::projection(2, 0).rank_flags();
        assert_eq!(f, RankFlags { injective: false, surjective: true });
        let f = OrderedGroupMorphism::inclusion(1, 2).rank_flags();
        assert_eq!(f, RankFlags { injective: true, surjective: false });
        let f = OrderedGroupMorphism::identity(2).rank_flags();
        assert_eq!(f, RankFlags { injective: true, surjective: true });
    }

    #[test]
    fn json_roundtrip() {
        let g = gamma(&[&[1, 0], &[2, 1]]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[["1","0"],["2","1"]]}"#);
        let back: OrderedGroupMorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let v: LexValue = serde_json::from_str(r#"["1/2","-3"]"#).unwrap();
        assert_eq!(v, lv(&[(1, 2), (-3, 1)]));
    }
}
