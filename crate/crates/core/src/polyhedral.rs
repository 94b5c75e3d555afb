//! Exact rational polyhedra via Fourier–Motzkin elimination.
//!
//! Only small dimensions are expected (at most four variables), so no
//! redundancy removal beyond normalization and deduplication is attempted.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::scalar::qi;
use crate::{QMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `≥ 0`
    Ge,
    /// `> 0`
    Gt,
    /// `= 0`
    Eq,
}

/// `coeffs·x + constant ⋈ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn homogeneous(coeffs: Vec<Rational>, rel: Relation) -> Self {
        Constraint { coeffs, constant: Rational::zero(), rel }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.rel {
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }

    /// Positive rescaling so the largest absolute coefficient is one.
    fn normalized(mut self) -> Self {
        let m = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        if !m.is_zero() && !m.is_one() {
            for c in &mut self.coeffs {
                *c = &*c / &m;
            }
            self.constant = &self.constant / &m;
        }
        self
    }
}

/// Bound on one variable from a constraint once the others are fixed.
enum Bound {
    Lower(Rational, bool),
    Upper(Rational, bool),
    Fixed(Rational),
    Constant(bool),
}

fn bound_on(c: &Constraint, j: usize, x: &[Rational]) -> Bound {
    let rest = c
        .coeffs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .fold(c.constant.clone(), |acc, (i, a)| acc + a * &x[i]);
    let a = &c.coeffs[j];
    if a.is_zero() {
        let ok = match c.rel {
            Relation::Ge => !rest.is_negative(),
            Relation::Gt => rest.is_positive(),
            Relation::Eq => rest.is_zero(),
        };
        return Bound::Constant(ok);
    }
    let v = -rest / a;
    match c.rel {
        Relation::Eq => Bound::Fixed(v),
        rel => {
            let strict = rel == Relation::Gt;
            if a.is_positive() {
                Bound::Lower(v, strict)
            } else {
                Bound::Upper(v, strict)
            }
        }
    }
}

/// Some point satisfying every constraint, or `None` when the system is infeasible.
pub fn feasible_point(constraints: &[Constraint], dim: usize) -> Option<Vec<Rational>> {
    let mut stage: BTreeSet<Constraint> = BTreeSet::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint dimension");
        match c.rel {
            Relation::Eq => {
                stage.insert(Constraint { rel: Relation::Ge, ..c.clone() }.normalized());
                let neg = Constraint {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    constant: -&c.constant,
                    rel: Relation::Ge,
                };
                stage.insert(neg.normalized());
            }
            _ => {
                stage.insert(c.clone().normalized());
            }
        }
    }
    // stages[j] only involves variables 0..j
    let mut stages: Vec<Vec<Constraint>> = vec![Vec::new(); dim + 1];
    for j in (0..dim).rev() {
        let current: Vec<Constraint> = stage.iter().cloned().collect();
        stages[j + 1] = current.clone();
        let mut next = BTreeSet::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in current {
            if c.coeffs[j].is_positive() {
                pos.push(c);
            } else if c.coeffs[j].is_negative() {
                neg.push(c);
            } else {
                next.insert(c);
            }
        }
        for p in &pos {
            for n in &neg {
                let (ap, an) = (&p.coeffs[j], -&n.coeffs[j]);
                let coeffs: Vec<Rational> = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &an + y * ap).collect();
                let constant = &p.constant * &an + &n.constant * ap;
                let rel = if p.rel == Relation::Gt || n.rel == Relation::Gt { Relation::Gt } else { Relation::Ge };
                next.insert(Constraint { coeffs, constant, rel }.normalized());
            }
        }
        stage = next;
    }
    for c in &stage {
        if !c.holds(&vec![Rational::zero(); dim]) {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); dim];
    for j in 0..dim {
        let mut lower: Option<(Rational, bool)> = None;
        let mut upper: Option<(Rational, bool)> = None;
        let mut fixed = None;
        for c in &stages[j + 1] {
            match bound_on(c, j, &x) {
                Bound::Lower(v, s) => {
                    if lower.as_ref().is_none_or(|(l, ls)| v > *l || (v == *l && s && !ls)) {
                        lower = Some((v, s));
                    }
                }
                Bound::Upper(v, s) => {
                    if upper.as_ref().is_none_or(|(u, us)| v < *u || (v == *u && s && !us)) {
                        upper = Some((v, s));
                    }
                }
                Bound::Fixed(v) => fixed = Some(v),
                Bound::Constant(ok) => debug_assert!(ok),
            }
        }
        x[j] = match (fixed, lower, upper) {
            (Some(v), _, _) => v,
            (None, Some((l, _)), Some((u, _))) if l == u => l,
            (None, Some((l, _)), Some((u, _))) => (l + u) / qi(2),
            (None, Some((l, _)), None) => l + Rational::one(),
            (None, None, Some((u, _))) => u - Rational::one(),
            (None, None, None) => Rational::zero(),
        };
    }
    debug_assert!(constraints.iter().all(|c| c.holds(&x)), "back-substitution left the polyhedron");
    Some(x)
}

/// A homogeneous cone `{x : A_= x = 0, A_≥ x ≥ 0}` with its implicit equalities.
#[derive(Debug, Clone)]
pub struct ConeAnalysis {
    /// Indices of the inequalities that hold with equality on the whole cone.
    pub implicit: Vec<usize>,
    /// Basis of the linear span of the cone.
    pub span: Vec<Vec<Rational>>,
    /// A point of the relative interior.
    pub relative_interior: Vec<Rational>,
}

/// Analyses `{x : ineq_i·x ≥ 0, eq_j·x = 0}`.
pub fn analyse_cone(ineqs: &[Vec<Rational>], eqs: &[Vec<Rational>], dim: usize) -> ConeAnalysis {
    let base: Vec<Constraint> = ineqs
        .iter()
        .map(|a| Constraint::homogeneous(a.clone(), Relation::Ge))
        .chain(eqs.iter().map(|a| Constraint::homogeneous(a.clone(), Relation::Eq)))
        .collect();
    let implicit: Vec<usize> = (0..ineqs.len())
        .filter(|&i| {
            let mut sys = base.clone();
            sys[i].rel = Relation::Gt;
            feasible_point(&sys, dim).is_none()
        })
        .collect();
    let rows: Vec<Vec<Rational>> = implicit.iter().map(|&i| ineqs[i].clone()).chain(eqs.iter().cloned()).collect();
    let span = if rows.is_empty() {
        (0..dim).map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        QMatrix::from_rows(rows, dim).nullspace()
    };
    let strict: Vec<Constraint> = ineqs
        .iter()
        .enumerate()
        .map(|(i, a)| Constraint::homogeneous(a.clone(), if implicit.contains(&i) { Relation::Eq } else { Relation::Gt }))
        .chain(eqs.iter().map(|a| Constraint::homogeneous(a.clone(), Relation::Eq)))
        .collect();
    let relative_interior = feasible_point(&strict, dim).expect("the relative interior of a cone is nonempty");
    ConeAnalysis { implicit, span, relative_interior }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn strict_infeasibility() {
        // x > 0 and -x ≥ 0
        let sys = [Constraint::homogeneous(v(&[1]), Relation::Gt), Constraint::homogeneous(v(&[-1]), Relation::Ge)];
        assert!(feasible_point(&sys, 1).is_none());
        let sys = [Constraint::homogeneous(v(&[1]), Relation::Ge), Constraint::homogeneous(v(&[-1]), Relation::Ge)];
        assert_eq!(feasible_point(&sys, 1), Some(v(&[0])));
    }

    #[test]
    fn back_substitution_finds_points() {
        // x + y > 3, x - y ≥ 1, y ≥ -2, x ≤ 10
        let sys = [
            Constraint { coeffs: v(&[1, 1]), constant: qi(-3), rel: Relation::Gt },
            Constraint { coeffs: v(&[1, -1]), constant: qi(-1), rel: Relation::Ge },
            Constraint { coeffs: v(&[0, 1]), constant: qi(2), rel: Relation::Ge },
            Constraint { coeffs: v(&[-1, 0]), constant: qi(10), rel: Relation::Ge },
        ];
        let x = feasible_point(&sys, 2).unwrap();
        assert!(sys.iter().all(|c| c.holds(&x)));
        let sys = [
            Constraint { coeffs: v(&[1, 1, 1]), constant: qi(-1), rel: Relation::Eq },
            Constraint::homogeneous(v(&[1, -1, 0]), Relation::Gt),
            Constraint::homogeneous(v(&[0, 1, -1]), Relation::Gt),
            Constraint::homogeneous(v(&[0, 0, 1]), Relation::Gt),
        ];
        let x = feasible_point(&sys, 3).unwrap();
        assert!(sys.iter().all(|c| c.holds(&x)));
    }

    #[test]
    fn implicit_equalities() {
        // x ≥ 0, y ≥ 0, -x - y ≥ 0 is the origin; x - y ≥ 0 and y - x ≥ 0 is a line
        let c = analyse_cone(&[v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], &[], 2);
        assert_eq!(c.implicit, vec![0, 1, 2]);
        assert!(c.span.is_empty());
        let c = analyse_cone(&[v(&[1, -1]), v(&[-1, 1]), v(&[1, 0])], &[], 2);
        assert_eq!(c.implicit, vec![0, 1]);
        assert_eq!(c.span.len(), 1);
        assert!(c.relative_interior[0].is_positive());
        let c = analyse_cone(&[v(&[1, 0]), v(&[0, 1])], &[], 2);
        assert!(c.implicit.is_empty());
        assert_eq!(c.span.len(), 2);
    }
}
