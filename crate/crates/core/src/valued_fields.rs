//! Rational function fields `ℚ(t)` and `ℚ(X, Y)` with degree-type valuations,
//! their monomial orders, and morphisms of valued fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ordered_groups::{LexValue, OrderedGroupMorphism};
use crate::poly::Poly;
use crate::sampling;
use crate::scalar::qi;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("parse error at {position}: {message} (near `{token}`)")]
    Parse { token: String, position: usize, message: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("value {0} is not realized by a monomial")]
    Unrealizable(String),
    #[error("no order-preserving value-group morphism for {0}")]
    NoGamma(String),
    #[error("field mismatch: {0}")]
    Mismatch(String),
}

/// Which rational function field an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// `ℚ(t)`.
    Univariate,
    /// `ℚ(X, Y)`.
    Bivariate,
}

impl FieldKind {
    pub fn var_names(self) -> &'static [&'static str] {
        match self {
            FieldKind::Univariate => &["t"],
            FieldKind::Bivariate => &["X", "Y"],
        }
    }
}

/// A reduced fraction of polynomials: `gcd(num, den) = 1` and the lex-leading
/// coefficient of `den` is 1. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(FieldKind::Bivariate))
    }
}

/// Prints with variables `X`, `Y`; use [`FieldElement::format`] for `ℚ(t)`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(FieldKind::Bivariate))
    }
}

impl FieldElement {
    pub fn new(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return FieldElement { num, den: Poly::one() };
        }
        if den.is_constant() {
            let c = den.constant_term();
            return FieldElement { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff().recip();
        FieldElement { num: num.scale(&lc), den: den.scale(&lc) }
    }

    /// Normalizes a fraction already known to be in lowest terms.
    fn coprime(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return FieldElement { num, den };
        }
        let inv = lc.recip();
        FieldElement { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        FieldElement { num: p, den: Poly::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(qi(n))
    }

    /// `X^a Y^b` with integer (possibly negative) exponents.
    pub fn monomial(exp: [i64; 2]) -> Self {
        let pos = [exp[0].max(0) as u32, exp[1].max(0) as u32];
        let neg = [(-exp[0]).max(0) as u32, (-exp[1]).max(0) as u32];
        FieldElement {
            num: Poly::monomial(BigRational::one(), pos),
            den: Poly::monomial(BigRational::one(), neg),
        }
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.uses_var(var)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::coprime(self.den.clone(), self.num.clone()))
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip().expect("negative power of zero") } else { self.clone() };
        let mut out = FieldElement::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Sign under the monomial order `X ≫ Y ≫ ℚ`.
    pub fn signum(&self) -> i8 {
        let c = self.num.leading_coeff();
        if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Order comparison in the ordered field.
    pub fn cmp_order(&self, other: &Self) -> Ordering {
        (other - self).signum().cmp(&0).reverse()
    }

    pub fn format(&self, kind: FieldKind) -> String {
        let names = kind.var_names();
        let n = self.num.format(names);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.format(names);
        let wrap = |s: String, p: &Poly| if p.num_terms() > 1 || s.contains('*') { format!("({s})") } else { s };
        let n = if self.num.num_terms() > 1 || self.num.leading_coeff().is_negative() {
            format!("({n})")
        } else {
            n
        };
        format!("{}/{}", n, wrap(d, &self.den))
    }

    /// Swaps the roles of `X` and `Y`.
    fn swap_vars(&self) -> Self {
        let sw = |p: &Poly| {
            let mut out = Poly::zero();
            for (e, c) in p.terms() {
                out = &out + &Poly::monomial(c.clone(), [e[1], e[0]]);
            }
            out
        };
        Self::reduce(sw(&self.num), sw(&self.den))
    }

    /// Polynomial part of the Laurent expansion in `1/X` over `ℚ(Y)`.
    fn polypart_x(&self) -> Self {
        if self.den.degree(0) == Some(0) {
            return self.clone();
        }
        let (s, quot, _) = self.num.pseudo_divmod_x(&self.den);
        let lc = lc_in_x(&self.den);
        let mut denom = Poly::one();
        for _ in 0..s {
            denom = &denom * &lc;
        }
        Self::reduce(quot, denom)
    }

    /// Coefficient of `X^0` of an element that is polynomial in `X` over `ℚ(Y)`.
    fn x0_coefficient(&self) -> Self {
        debug_assert!(!self.den.uses_var(0));
        let c = self.num.x_coefficients().remove(&0).unwrap_or_default();
        Self::reduce(c, self.den.clone())
    }
}

fn lc_in_x(p: &Poly) -> Poly {
    p.x_coefficients().into_iter().next_back().map(|(_, c)| c).unwrap_or_default()
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement { num: Poly::one(), den: Poly::one() }
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return FieldElement::from_poly(&self.num + &rhs.num);
            }
            return FieldElement::reduce(&self.num + &rhs.num, self.den.clone());
        }
        // Henrici: only the gcd of the denominators can cancel
        let d = Poly::gcd(&self.den, &rhs.den);
        if d.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return FieldElement::coprime(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&d).expect("gcd divides");
        let d2 = rhs.den.div_exact(&d).expect("gcd divides");
        let t = &(&self.num * &d2) + &(&rhs.num * &d1);
        if t.is_zero() {
            return FieldElement::zero();
        }
        let g = Poly::gcd(&t, &d);
        let (t, d) = if g.is_one() { (t, d) } else { (t.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides")) };
        FieldElement::coprime(t, &(&d1 * &d2) * &d)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so that only small gcds are computed
        let cancel = |n: &Poly, d: &Poly| {
            let g = Poly::gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).expect("gcd divides"), d.div_exact(&g).expect("gcd divides"))
            }
        };
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        FieldElement::coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.recip().expect("division by zero in field")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// The valuation attached to a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValuationSpec {
    /// `ℚ(t)`, `v(P/Q) = deg Q − deg P`, value group `ℚ`.
    Degree,
    /// `ℚ(X, Y)`, minus the lex-leading exponent, value group `ℚ²`.
    LexMultideg,
    /// `ℚ(X, Y)`, the `X`-degree valuation, value group `ℚ`.
    FirstVar,
}

impl ValuationSpec {
    pub fn rank(self) -> usize {
        match self {
            ValuationSpec::LexMultideg => 2,
            _ => 1,
        }
    }

    pub fn field(self) -> FieldKind {
        match self {
            ValuationSpec::Degree => FieldKind::Univariate,
            _ => FieldKind::Bivariate,
        }
    }

    pub fn valuation(self, x: &FieldElement) -> LexValue {
        if x.is_zero() {
            return LexValue::Infinity;
        }
        match self {
            ValuationSpec::Degree | ValuationSpec::FirstVar => {
                let d = |p: &Poly| i64::from(p.degree(0).unwrap_or(0));
                LexValue::from_ints(&[d(&x.den) - d(&x.num)])
            }
            ValuationSpec::LexMultideg => {
                let l = |p: &Poly| *p.leading().expect("nonzero").0;
                let (n, d) = (l(&x.num), l(&x.den));
                LexValue::from_ints(&[i64::from(d[0]) - i64::from(n[0]), i64::from(d[1]) - i64::from(n[1])])
            }
        }
    }

    pub fn in_valuation_ring(self, x: &FieldElement) -> bool {
        !self.valuation(x).is_negative()
    }

    pub fn is_unit(self, x: &FieldElement) -> bool {
        self.valuation(x).is_zero()
    }

    /// The canonical monomial `x_λ` with `v(x_λ) = λ`.
    pub fn element_with_valuation(self, lambda: &LexValue) -> Result<FieldElement, FieldError> {
        let unreal = || FieldError::Unrealizable(lambda.to_string());
        let c = lambda.coords().ok_or_else(unreal)?;
        if c.len() != self.rank() || !lambda.is_integral() {
            return Err(unreal());
        }
        let to_i64 = |r: &BigRational| -> Result<i64, FieldError> {
            i64::try_from(r.to_integer()).map_err(|_| unreal())
        };
        match self {
            ValuationSpec::Degree | ValuationSpec::FirstVar => Ok(FieldElement::monomial([-to_i64(&c[0])?, 0])),
            ValuationSpec::LexMultideg => Ok(FieldElement::monomial([-to_i64(&c[0])?, -to_i64(&c[1])?])),
        }
    }

    /// Canonical representative of `h` modulo `{x : v(x) ≥ mu}`.
    ///
    /// The representative keeps exactly the part of the Laurent expansion whose
    /// terms have valuation below `mu`.
    pub fn truncate(self, h: &FieldElement, mu: &LexValue) -> FieldElement {
        if h.is_zero() {
            return FieldElement::zero();
        }
        let m = mu.finite();
        let k1 = exponent_bound(&m[0]);
        let head = FieldElement::monomial([k1, 0]);
        let shifted = h * &FieldElement::monomial([-k1, 0]);
        let upper = &shifted.polypart_x() * &head;
        match self {
            ValuationSpec::Degree | ValuationSpec::FirstVar => upper,
            ValuationSpec::LexMultideg => {
                if !m[0].is_integer() {
                    return upper;
                }
                let e = i64::try_from(m[0].to_integer()).expect("exponent fits");
                let c = (h * &FieldElement::monomial([e, 0])).polypart_x().x0_coefficient();
                if c.is_zero() {
                    return upper;
                }
                let k2 = exponent_bound(&m[1]);
                let cy = (&c.swap_vars() * &FieldElement::monomial([-k2, 0])).polypart_x();
                let tail = &(&cy * &FieldElement::monomial([k2, 0])).swap_vars() * &FieldElement::monomial([-e, 0]);
                &upper + &tail
            }
        }
    }

    /// Axioms `v(xy) = v(x) + v(y)` and `v(x + y) ≥ min(v(x), v(y))` on seeded samples.
    pub fn axioms_check(self, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = SampleReport::new(samples);
        for _ in 0..samples {
            let x = sampling::field_element(&mut rng, self.field());
            let y = sampling::field_element(&mut rng, self.field());
            let (vx, vy) = (self.valuation(&x), self.valuation(&y));
            if self.valuation(&(&x * &y)) != &vx + &vy {
                report.violation(format!("v(xy) for x = {x}, y = {y}"));
            }
            if self.valuation(&(&x + &y)) < vx.clone().min(vy.clone()) {
                report.violation(format!("v(x+y) for x = {x}, y = {y}"));
            }
        }
        report
    }

    /// `0 < x ≤ y ⟹ v(x) ≥ v(y)` on seeded samples.
    pub fn order_compatibility_check(self, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = SampleReport::new(samples);
        for _ in 0..samples {
            let a = sampling::nonzero_field_element(&mut rng, self.field()).abs();
            let b = sampling::nonzero_field_element(&mut rng, self.field()).abs();
            let (x, y) = if a.cmp_order(&b) == Ordering::Greater { (b, a) } else { (a, b) };
            if self.valuation(&x) < self.valuation(&y) {
                report.violation(format!("x = {x}, y = {y}"));
            }
        }
        report
    }
}

/// Smallest integer strictly greater than `-mu`.
fn exponent_bound(mu: &BigRational) -> i64 {
    let f = (-mu).floor().to_integer() + BigInt::one();
    i64::try_from(f).expect("exponent fits")
}

/// Outcome of a sampled property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

impl SampleReport {
    pub fn new(samples: usize) -> Self {
        SampleReport { samples, violations: 0, examples: Vec::new() }
    }

    pub fn violation(&mut self, what: String) {
        self.violations += 1;
        if self.examples.len() < 5 {
            self.examples.push(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FieldMorphismKind {
    /// Same field, different valuation.
    IdentityRevalue,
    /// `ℚ(t) ↪ ℚ(X, Y)`, `t ↦ X`.
    VariableInclusion,
}

/// A morphism of valued fields between the shipped models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldMorphism {
    pub kind: FieldMorphismKind,
    pub source: ValuationSpec,
    pub target: ValuationSpec,
}

impl FieldMorphism {
    pub fn new(kind: FieldMorphismKind, source: ValuationSpec, target: ValuationSpec) -> Result<Self, FieldError> {
        let ok = match kind {
            FieldMorphismKind::IdentityRevalue => source.field() == target.field(),
            FieldMorphismKind::VariableInclusion => {
                source.field() == FieldKind::Univariate && target.field() == FieldKind::Bivariate
            }
        };
        if !ok {
            return Err(FieldError::Mismatch(format!("{kind:?} from {source:?} to {target:?}")));
        }
        let eta = FieldMorphism { kind, source, target };
        eta.induced_gamma()?;
        Ok(eta)
    }

    /// Image of an element. Both kinds act as the identity on representations.
    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        x.clone()
    }

    /// The value-group morphism `γ` with `γ ∘ v = v' ∘ η`, validated on samples.
    pub fn induced_gamma(&self) -> Result<OrderedGroupMorphism, FieldError> {
        use ValuationSpec::*;
        let gamma = match (self.source, self.target) {
            (s, t) if s == t => OrderedGroupMorphism::identity(s.rank()),
            (LexMultideg, FirstVar) => OrderedGroupMorphism::projection(2, 0),
            (Degree, FirstVar) => OrderedGroupMorphism::identity(1),
            (Degree, LexMultideg) => OrderedGroupMorphism::inclusion(1, 2),
            (s, t) => return Err(FieldError::NoGamma(format!("{s:?} -> {t:?}"))),
        };
        if !gamma.is_order_preserving() {
            return Err(FieldError::NoGamma(format!("{:?} -> {:?}", self.source, self.target)));
        }
        let check = self.square_check(&gamma, 100, 0x5eed);
        if !check.passed() {
            return Err(FieldError::NoGamma(check.examples.join("; ")));
        }
        Ok(gamma)
    }

    /// Checks `γ(v(x)) = v'(η(x))` on seeded samples.
    pub fn square_check(&self, gamma: &OrderedGroupMorphism, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = SampleReport::new(samples);
        for _ in 0..samples {
            let x = sampling::nonzero_field_element(&mut rng, self.source.field());
            let lhs = gamma.apply(&self.source.valuation(&x)).expect("dimensions match");
            let rhs = self.target.valuation(&self.apply(&x));
            if lhs != rhs {
                report.violation(format!("x = {x}: {lhs} vs {rhs}"));
            }
        }
        report
    }
}

/// Per-sample record of the big-element valuation comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BigElementSample {
    pub element: String,
    pub valuation: LexValue,
    /// The truncated infimum of `{p/q : |x|^q < b^p, 1 ≤ q ≤ N}`.
    pub truncated_inf: LexValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BigElementReport {
    pub bound: u32,
    pub samples: Vec<BigElementSample>,
    pub violations: usize,
}

/// Truncated infimum of `{p/q : |x|^q < X^p, 1 ≤ q ≤ n}` for nonzero `x`.
///
/// For each `q` the candidate `p` starts one below `q·deg_X(x)`, where the
/// inequality fails by a degree count, and increases until it holds.
pub fn big_element_inf(x: &FieldElement, n: u32) -> BigRational {
    assert!(!x.is_zero() && n >= 1);
    // Only the lex-leading monomial c·X^a·Y^b of |x| decides X^p > |x|^q.
    let (en, cn) = x.num().leading().expect("nonzero");
    let (ed, _) = x.den().leading().expect("nonzero");
    let a = i64::from(en[0]) - i64::from(ed[0]);
    let b = i64::from(en[1]) - i64::from(ed[1]);
    let c = cn.abs();
    let mut best: Option<BigRational> = None;
    for q in 1..=i64::from(n) {
        let exceeds_at_qa = b < 0 || (b == 0 && c.pow(q as i32) < BigRational::one());
        let p = if exceeds_at_qa { a * q } else { a * q + 1 };
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        if best.as_ref().is_none_or(|m| r < *m) {
            best = Some(r);
        }
    }
    best.expect("n ≥ 1")
}

/// Compares `−v(x)` with the truncated big-element infimum for `b = X` (or `t`).
pub fn big_element_valuation_check(spec: ValuationSpec, samples: usize, bound: u32, seed: u64) -> BigElementReport {
    assert!(spec.rank() == 1, "big-element check needs a rank-one valuation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut violations = 0;
    let tol = BigRational::new(BigInt::one(), BigInt::from(bound));
    for _ in 0..samples {
        let x = sampling::nonzero_field_element(&mut rng, spec.field());
        let v = spec.valuation(&x);
        let inf = big_element_inf(&x, bound);
        let gap = &inf + &v.finite()[0];
        if gap.is_negative() || gap > tol {
            violations += 1;
        }
        out.push(BigElementSample {
            element: x.format(spec.field()),
            valuation: v,
            truncated_inf: LexValue::scalar(inf),
        });
    }
    BigElementReport { bound, samples: out, violations }
}

/// Parses a field element in the grammar of signed rational polynomials with
/// one optional top-level `/`.
pub fn parse_field_element(src: &str, kind: FieldKind) -> Result<FieldElement, FieldError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, kind };
    let num = p.expr()?;
    let value = if p.eat(&Tok::Slash) {
        let den = p.expr()?;
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        &num / &den
    } else {
        num
    };
    if let Some((t, at)) = p.tokens.get(p.pos) {
        return Err(FieldError::Parse {
            token: t.text(),
            position: *at,
            message: if *t == Tok::Slash { "more than one top-level '/'".into() } else { "unexpected token".into() },
        });
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(n) => n.to_string(),
            Tok::Var(v) => v.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, FieldError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Num(s.parse().expect("digits")), start));
                continue;
            }
            'a'..='z' | 'A'..='Z' => Tok::Var(c.to_string()),
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(FieldError::Parse {
                    token: c.to_string(),
                    position: i,
                    message: "unexpected character".into(),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    kind: FieldKind,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: &str) -> FieldError {
        match self.tokens.get(self.pos) {
            Some((t, at)) => FieldError::Parse { token: t.text(), position: *at, message: message.into() },
            None => FieldError::Parse {
                token: "<end>".into(),
                position: self.tokens.last().map_or(0, |(_, p)| p + 1),
                message: message.into(),
            },
        }
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement, FieldError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(&n).ok().filter(|&e| e <= 256).ok_or_else(|| self.error("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(i64::from(e)))
                }
                _ => Err(self.error("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    if let Some((Tok::Num(d), _)) = self.tokens.get(self.pos + 1).cloned() {
                        if d.is_zero() {
                            self.pos += 1;
                            return Err(FieldError::ZeroDenominator);
                        }
                        self.pos += 2;
                        return Ok(FieldElement::from_rational(BigRational::new(n, d)));
                    }
                }
                Ok(FieldElement::from_rational(BigRational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                let idx = self.kind.var_names().iter().position(|n| *n == v);
                match idx {
                    Some(i) => {
                        self.pos += 1;
                        Ok(FieldElement::var(i))
                    }
                    None => Err(self.error("unknown variable")),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(s: &str) -> FieldElement {
        parse_field_element(s, FieldKind::Bivariate).unwrap()
    }
    fn ft(s: &str) -> FieldElement {
        parse_field_element(s, FieldKind::Univariate).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(ValuationSpec::Degree.valuation(&ft("t^2 + 1")), LexValue::from_ints(&[-2]));
        assert_eq!(ValuationSpec::Degree.valuation(&FieldElement::one()), LexValue::from_ints(&[0]));
        assert_eq!(ValuationSpec::LexMultideg.valuation(&FieldElement::one()), LexValue::from_ints(&[0, 0]));
        assert_eq!(ValuationSpec::LexMultideg.valuation(&fx("X^2*Y + X")), LexValue::from_ints(&[-2, -1]));
        assert_eq!(ValuationSpec::FirstVar.valuation(&fx("X^2*Y + X")), LexValue::from_ints(&[-2]));
        assert_eq!(ValuationSpec::Degree.valuation(&FieldElement::zero()), LexValue::Infinity);
        let t = ft("t");
        assert_eq!(ValuationSpec::Degree.valuation(&(&t + &(-&t))), LexValue::Infinity);
        let xy = &fx("X") * &fx("Y");
        assert_eq!(ValuationSpec::LexMultideg.valuation(&xy), LexValue::from_ints(&[-1, -1]));
    }

    #[test]
    fn valuation_ring_examples() {
        assert!(ValuationSpec::Degree.in_valuation_ring(&ft("1/t")));
        assert!(!ValuationSpec::Degree.in_valuation_ring(&ft("t")));
        assert!(ValuationSpec::Degree.in_valuation_ring(&FieldElement::zero()));
    }

    #[test]
    fn witness_examples() {
        let s = ValuationSpec::Degree;
        assert_eq!(s.element_with_valuation(&LexValue::from_ints(&[1])).unwrap(), ft("1/t"));
        assert_eq!(s.element_with_valuation(&LexValue::from_ints(&[0])).unwrap(), FieldElement::one());
        let l = ValuationSpec::LexMultideg;
        assert_eq!(l.element_with_valuation(&LexValue::from_ints(&[0, 2])).unwrap(), fx("1/Y^2"));
        let half = LexValue::scalar(crate::scalar::q(1, 2));
        assert!(matches!(s.element_with_valuation(&half), Err(FieldError::Unrealizable(_))));
    }

    #[test]
    fn order_examples() {
        let l = ValuationSpec::LexMultideg;
        assert!(l.valuation(&fx("Y")) >= l.valuation(&fx("X")));
        assert_eq!(fx("Y").cmp_order(&fx("X")), Ordering::Less);
        assert_eq!(ft("1").cmp_order(&ft("t")), Ordering::Less);
        assert_eq!(fx("-X + Y^5").signum(), -1);
    }

    #[test]
    fn parser_examples() {
        let e = fx("(X^2*Y + 3/2*X)/(Y - 1)");
        assert_eq!(e.num().format(&["X", "Y"]), "X^2*Y + 3/2*X");
        assert_eq!(e.den().format(&["X", "Y"]), "Y - 1");
        assert_eq!(fx("X/2"), fx("1/2*X"));
        assert_eq!(parse_field_element("1/(t - t)", FieldKind::Univariate), Err(FieldError::ZeroDenominator));
        assert_eq!(parse_field_element("3/0", FieldKind::Univariate), Err(FieldError::ZeroDenominator));
        assert!(matches!(parse_field_element("X/Y/X", FieldKind::Bivariate), Err(FieldError::Parse { .. })));
        assert!(matches!(parse_field_element("t + Z", FieldKind::Univariate), Err(FieldError::Parse { token, .. }) if token == "Z"));
        assert!(matches!(parse_field_element("X", FieldKind::Univariate), Err(FieldError::Parse { .. })));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["(X^2*Y + 3/2*X)/(Y - 1)", "-X/(X*Y + 1)", "1/X^2", "-3/4", "(X - 1)/Y", "3/(5*X*Y)", "(-5/2*X*Y^2 - 1/3)/(X^2*Y^3)"] {
            let e = fx(s);
            assert_eq!(fx(&e.to_string()), e, "{s}");
        }
        assert_eq!(ft("(t^2 + 1)/t").format(FieldKind::Univariate), "(t^2 + 1)/t");
    }

    #[test]
    fn arithmetic_roundtrip() {
        let x = fx("(X^2*Y + 3/2*X)/(Y - 1)");
        let y = fx("(X + Y)/(X - Y^2)");
        assert_eq!(&(&x + &y) - &y, x);
        assert!((&x * &x.recip().unwrap()).is_one());
        assert_eq!(&(&x * &y) / &y, x);
    }

    #[test]
    fn induced_gamma_examples() {
        let eta = FieldMorphism::new(FieldMorphismKind::IdentityRevalue, ValuationSpec::LexMultideg, ValuationSpec::FirstVar).unwrap();
        assert_eq!(eta.induced_gamma().unwrap(), OrderedGroupMorphism::projection(2, 0));
        let same = FieldMorphism::new(FieldMorphismKind::IdentityRevalue, ValuationSpec::LexMultideg, ValuationSpec::LexMultideg).unwrap();
        assert_eq!(same.induced_gamma().unwrap(), OrderedGroupMorphism::identity(2));
        let inc = FieldMorphism::new(FieldMorphismKind::VariableInclusion, ValuationSpec::Degree, ValuationSpec::FirstVar).unwrap();
        assert_eq!(inc.induced_gamma().unwrap(), OrderedGroupMorphism::identity(1));
        let f = fx("X^2*Y + X");
        let g = eta.induced_gamma().unwrap();
        assert_eq!(g.apply(&(-ValuationSpec::LexMultideg.valuation(&f))).unwrap(), LexValue::from_ints(&[2]));
        assert!(FieldMorphism::new(FieldMorphismKind::IdentityRevalue, ValuationSpec::FirstVar, ValuationSpec::LexMultideg).is_err());
    }

    #[test]
    fn big_element_examples() {
        let n = 8;
        let tol = crate::scalar::q(1, 8);
        for (x, expected) in [(fx("X^3"), 3), (FieldElement::one(), 0), (fx("1/X^2"), -2), (fx("2*X"), 1)] {
            let inf = big_element_inf(&x, n);
            let gap = &inf - &qi(expected);
            assert!(!gap.is_negative() && gap <= tol, "{x}: {inf}");
        }
        assert_eq!(big_element_inf(&fx("X^3"), n), crate::scalar::q(25, 8));
        assert_eq!(big_element_inf(&fx("X^3/2"), n), qi(3));
        assert_eq!(big_element_inf(&fx("X^3*Y"), n), crate::scalar::q(25, 8));
        assert_eq!(big_element_inf(&fx("X^3/Y"), n), qi(3));
        let report = big_element_valuation_check(ValuationSpec::FirstVar, 20, 6, 3);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn truncation_is_a_canonical_residue() {
        let s = ValuationSpec::Degree;
        let h = ft("(t^3 + 2*t + 5)/(t^2 - 1)");
        // terms with valuation below 0: t
        assert_eq!(s.truncate(&h, &LexValue::from_ints(&[0])), ft("t"));
        let l = ValuationSpec::LexMultideg;
        let h = &(&fx("X*Y + Y^2 + 3*Y") + &fx("1/Y")) + &fx("X/(Y + 1)");
        let mu = LexValue::from_ints(&[0, 0]);
        let r = l.truncate(&h, &mu);
        assert!(l.valuation(&(&h - &r)) >= mu);
        assert_eq!(r, &fx("X*Y + Y^2 + 3*Y") + &fx("X/(Y + 1)"));
    }
}
