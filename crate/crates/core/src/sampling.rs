//! Seeded random generators for property checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::ordered_groups::LexValue;
use crate::poly::Poly;
use crate::scalar::q;
use crate::valued_fields::{FieldElement, FieldKind, ValuationSpec};
use crate::FMatrix;

pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let n = rng.gen_range(-6..=6);
    let d = rng.gen_range(1..=3);
    q(n, d)
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let x = small_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Small integer as a rational.
pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}

pub fn poly<R: Rng>(rng: &mut R, kind: FieldKind) -> Poly {
    let terms = rng.gen_range(1..=3);
    let mut p = Poly::zero();
    for _ in 0..terms {
        let ex = rng.gen_range(0..=2);
        let ey = match kind {
            FieldKind::Univariate => 0,
            FieldKind::Bivariate => rng.gen_range(0..=2),
        };
        p = &p + &Poly::monomial(nonzero_rational(rng), [ex, ey]);
    }
    p
}

/// Random element; zero with small probability.
pub fn field_element<R: Rng>(rng: &mut R, kind: FieldKind) -> FieldElement {
    if rng.gen_ratio(1, 25) {
        return FieldElement::zero();
    }
    nonzero_field_element(rng, kind)
}

pub fn nonzero_field_element<R: Rng>(rng: &mut R, kind: FieldKind) -> FieldElement {
    loop {
        let num = poly(rng, kind);
        let den = if rng.gen_bool(0.5) { Poly::one() } else { poly(rng, kind) };
        if num.is_zero() || den.is_zero() {
            continue;
        }
        let shift = FieldElement::monomial([rng.gen_range(-1..=1), 0]);
        return &FieldElement::new(num, den).expect("nonzero denominator") * &shift;
    }
}

/// A unit of the valuation ring: `(a + b·m)/(c + d·m′)` with `v(m), v(m′) > 0`.
pub fn unit<R: Rng>(rng: &mut R, spec: ValuationSpec) -> FieldElement {
    let small = |rng: &mut R| -> FieldElement {
        let e = match spec.field() {
            FieldKind::Univariate => [-rng.gen_range(1..=2), 0],
            FieldKind::Bivariate => match rng.gen_range(0..3) {
                0 => [-1, 0],
                1 => [-1, rng.gen_range(1..=2)],
                _ => [0, -1],
            },
        };
        FieldElement::monomial(e)
    };
    let side = |rng: &mut R| {
        let c = FieldElement::from_rational(nonzero_rational(rng));
        if rng.gen_bool(0.3) {
            return c;
        }
        let d = FieldElement::from_rational(nonzero_rational(rng));
        &c + &(&d * &small(rng))
    };
    let num = side(rng);
    let den = side(rng);
    &num / &den
}

/// Random integral value with coordinates in `[-bound, bound]`.
pub fn lex_value<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> LexValue {
    LexValue::Finite((0..rank).map(|_| small_int(rng, bound)).collect())
}

/// Random element of valuation at least zero; zero with small probability.
pub fn integral<R: Rng>(rng: &mut R, spec: ValuationSpec) -> FieldElement {
    if rng.gen_ratio(1, 6) {
        return FieldElement::zero();
    }
    let mut lam = lex_value(rng, spec.rank(), 2);
    if lam.is_negative() {
        lam = -lam;
    }
    &unit(rng, spec) * &spec.element_with_valuation(&lam).expect("integral")
}

/// Random element with the given valuation.
pub fn with_valuation<R: Rng>(rng: &mut R, spec: ValuationSpec, lam: &LexValue) -> FieldElement {
    &unit(rng, spec) * &spec.element_with_valuation(lam).expect("integral")
}

/// Random element of `SL_n(𝒪)`: a unit diagonal times elementary integral shears.
pub fn sl_integral<R: Rng>(rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
    let mut diag = Vec::with_capacity(n);
    let mut prod = FieldElement::one();
    for _ in 0..n - 1 {
        let u = unit(rng, spec);
        prod = &prod * &u;
        diag.push(u);
    }
    diag.push(prod.recip().expect("unit"));
    let mut g = FMatrix::diagonal(&diag);
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = integral(rng, spec);
        g.add_col_multiple(j, i, &c);
    }
    g
}

/// Random element of `SL_n(𝔽)` mixing integral and non-integral shears and torus parts.
pub fn sl_general<R: Rng>(rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
    if rng.gen_bool(0.4) {
        return sl_integral(rng, spec, n);
    }
    let mut g = sl_integral(rng, spec, n);
    let mut lams: Vec<LexValue> = (0..n - 1).map(|_| lex_value(rng, spec.rank(), 1)).collect();
    let total = lams.iter().fold(LexValue::zero(spec.rank()), |a, b| &a + b);
    lams.push(-total);
    let torus: Vec<FieldElement> =
        lams.iter().map(|l| spec.element_with_valuation(l).expect("integral")).collect();
    g = &g * &FMatrix::diagonal(&torus);
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let lam = lex_value(rng, spec.rank(), 2);
        let c = with_valuation(rng, spec, &lam);
        g.add_row_multiple(j, i, &c);
    }
    g
}

/// Random element of `SL_n(𝔽)` whose entries stay short: a torus of
/// monomials followed by a few shears with rational-times-monomial coefficients.
pub fn sl_light<R: Rng>(rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
    let mut lams: Vec<LexValue> = (0..n - 1).map(|_| lex_value(rng, spec.rank(), 1)).collect();
    let total = lams.iter().fold(LexValue::zero(spec.rank()), |a, b| &a + b);
    lams.push(-total);
    let torus: Vec<FieldElement> =
        lams.iter().map(|l| spec.element_with_valuation(l).expect("integral")).collect();
    let mut g = FMatrix::diagonal(&torus);
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let lam = lex_value(rng, spec.rank(), 2);
        let c = &FieldElement::from_rational(nonzero_rational(rng)) * &spec.element_with_valuation(&lam).expect("finite");
        g.add_row_multiple(j, i, &c);
    }
    g
}

/// Random invertible matrix over `𝔽`.
pub fn gl_general<R: Rng>(rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
    let mut g = sl_general(rng, spec, n);
    let lam = lex_value(rng, spec.rank(), 2);
    let c = with_valuation(rng, spec, &lam);
    g.scale_col(rng.gen_range(0..n), &c);
    g
}

/// Random permutation of `0..n` as an image table.
pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Random monomial matrix `g e_i = d_i e_{π(i)}` with determinant one.
pub fn monomial_sl<R: Rng>(rng: &mut R, spec: ValuationSpec, n: usize) -> FMatrix {
    let perm = permutation(rng, n);
    let mut d: Vec<FieldElement> = (0..n)
        .map(|_| {
            let lam = lex_value(rng, spec.rank(), 2);
            with_valuation(rng, spec, &lam)
        })
        .collect();
    let mut g = FMatrix::zeros(n, n);
    for i in 0..n {
        g[(perm[i], i)] = d[i].clone();
    }
    let det = g.determinant();
    d[0] = &d[0] / &det;
    g[(perm[0], 0)] = d[0].clone();
    g
}
