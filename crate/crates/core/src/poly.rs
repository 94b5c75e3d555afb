//! Sparse polynomials over ℚ in at most two variables.
//!
//! Variable 0 is `X` (or `t`), variable 1 is `Y`. Exponent keys compare
//! lexicographically with `X` dominant, so the last map entry is the
//! lex-leading term.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::fmt_rational;

pub type Exponent = [u32; 2];

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, [0, 0])
    }

    pub fn monomial(c: BigRational, exp: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0, 0];
        e[i] = 1;
        Self::monomial(BigRational::one(), e)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0, 0]).is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0, 0])
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&[0, 0]).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lex-leading exponent and coefficient.
    pub fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    pub fn degree(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by `X^a Y^b`.
    pub fn shift(&self, exp: Exponent) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| ([e[0] + exp[0], e[1] + exp[1]], x.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, exp: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Coefficients of powers of `X`, each a polynomial in `Y` alone.
    pub fn x_coefficients(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e[0]).or_default().add_term([0, e[1]], c.clone());
        }
        out
    }

    /// Leading coefficient with respect to `X`, as a polynomial in `Y`.
    fn lc_x(&self) -> Poly {
        self.x_coefficients().into_iter().next_back().map(|(_, c)| c).unwrap_or_default()
    }

    /// Divides by the lex-leading coefficient so it becomes 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((re, rc)) = rem.leading() {
            if re[0] < de[0] || re[1] < de[1] {
                return None;
            }
            let e = [re[0] - de[0], re[1] - de[1]];
            let c = rc / dc;
            rem = &rem - &d.shift(e).scale(&c);
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Pseudo-division in `X`: returns `(s, q, r)` with `lc_X(b)^s · self = q·b + r`
    /// and `deg_X r < deg_X b`.
    pub fn pseudo_divmod_x(&self, b: &Poly) -> (u32, Poly, Poly) {
        assert!(!b.is_zero(), "pseudo-division by zero");
        let db = b.degree(0).unwrap_or(0);
        let lc = b.lc_x();
        let mut r = self.clone();
        let mut quot = Poly::zero();
        let mut s = 0;
        while let Some(dr) = r.degree(0) {
            if r.is_zero() || dr < db {
                break;
            }
            let lr = r.lc_x().shift([dr - db, 0]);
            r = &(&lc * &r) - &(&lr * b);
            quot = &(&lc * &quot) + &lr;
            s += 1;
        }
        (s, quot, r)
    }

    /// Division with remainder in a single variable; both operands may only use `var`.
    fn divrem_univariate(&self, b: &Poly, var: usize) -> (Poly, Poly) {
        let (be, bc) = b.leading().expect("division by zero");
        let db = be[var];
        let mut r = self.clone();
        let mut quot = Poly::zero();
        while let Some((re, rc)) = r.leading() {
            if re[var] < db {
                break;
            }
            let mut e = [0, 0];
            e[var] = re[var] - db;
            let c = rc / bc;
            r = &r - &b.shift(e).scale(&c);
            quot.add_term(e, c);
        }
        (quot, r)
    }

    fn gcd_univariate(a: &Poly, b: &Poly, var: usize) -> Poly {
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.divrem_univariate(&y, var);
            x = y;
            y = r.monic();
        }
        x
    }

    /// Rescales to integer coefficients with no common factor.
    fn integer_primitive(&self) -> Poly {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&BigRational::new(den, num))
    }

    /// Content with respect to `X`: the monic gcd of the `Y`-coefficients.
    fn content_x(&self) -> Poly {
        let mut g = Poly::zero();
        for c in self.x_coefficients().values() {
            g = Self::gcd_univariate(&g, c, 1);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content_x();
        self.div_exact(&c).expect("content divides")
    }

    /// `Y = y_0` substituted.
    fn eval_y(&self, y0: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..e[1] {
                v *= y0;
            }
            out.add_term([e[0], 0], v);
        }
        out
    }

    /// Sufficient test for a trivial gcd of `X`-primitive polynomials: a
    /// common factor of positive `X`-degree survives every substitution
    /// `Y = y_0` that keeps both leading coefficients nonzero.
    fn coprime_by_evaluation(p: &Poly, r: &Poly) -> bool {
        let (lp, lr) = (p.lc_x(), r.lc_x());
        for y in [2i64, 3, 5, -7, 11] {
            let y0 = BigRational::from_integer(BigInt::from(y));
            if lp.eval_y(&y0).is_zero() || lr.eval_y(&y0).is_zero() {
                continue;
            }
            return Self::gcd_univariate(&p.eval_y(&y0), &r.eval_y(&y0), 0).is_constant();
        }
        false
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if !a.uses_var(0) && !b.uses_var(0) {
            return Self::gcd_univariate(a, b, 1);
        }
        if !a.uses_var(1) && !b.uses_var(1) {
            return Self::gcd_univariate(a, b, 0);
        }
        let c = Self::gcd_univariate(&a.content_x(), &b.content_x(), 1);
        let (mut p, mut r) = (a.primitive_part_x().integer_primitive(), b.primitive_part_x().integer_primitive());
        if p.degree(0) < r.degree(0) {
            std::mem::swap(&mut p, &mut r);
        }
        if Self::coprime_by_evaluation(&p, &r) {
            return c.monic();
        }
        let pp = loop {
            if r.degree(0) == Some(0) {
                break Poly::one();
            }
            let (_, _, rem) = p.pseudo_divmod_x(&r);
            if rem.is_zero() {
                break r;
            }
            p = r;
            r = rem.primitive_part_x().integer_primitive();
        };
        (&c * &pp).monic()
    }

    /// Human-readable form using the given variable names.
    pub fn format(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = names.get(v).copied().unwrap_or("?");
                factors.push(if k == 1 { name.to_string() } else { format!("{name}^{k}") });
            }
            if factors.is_empty() {
                out.push_str(&fmt_rational(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&fmt_rational(&mag));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(qi(n))
    }

    #[test]
    fn gcd_bivariate() {
        // (X + Y)(X - 1) and (X + Y)(Y + 2)
        let f = &x() + &y();
        let a = &f * &(&x() - &c(1));
        let b = &f * &(&y() + &c(2));
        assert_eq!(Poly::gcd(&a, &b), f);
        let g = Poly::gcd(&(&x() * &y()), &(&(&x() * &x()) * &y()));
        assert_eq!(g, &x() * &y());
        assert!(Poly::gcd(&(&x() + &c(1)), &(&y() + &c(1))).is_one());
    }

    #[test]
    fn gcd_with_y_content() {
        let a = &(&y() - &c(1)) * &(&x() + &c(3));
        let b = &(&y() - &c(1)) * &(&y() + &c(1));
        assert_eq!(Poly::gcd(&a, &b), &y() - &c(1));
    }

    #[test]
    fn pseudo_division_identity() {
        let a = &(&(&x() * &x()) * &y()) + &x();
        let b = &(&y() * &x()) - &c(1);
        let (s, q, r) = a.pseudo_divmod_x(&b);
        let lc = y();
        let mut lhs = a.clone();
        for _ in 0..s {
            lhs = &lc * &lhs;
        }
        assert_eq!(lhs, &(&q * &b) + &r);
        assert!(r.degree(0).unwrap_or(0) < 1);
    }

    #[test]
    fn formatting() {
        let p = &(&(&(&x() * &x()) * &y()) + &Poly::monomial(crate::scalar::q(3, 2), [1, 0])) - &c(1);
        assert_eq!(p.format(&["X", "Y"]), "X^2*Y + 3/2*X - 1");
    }
}
