//! Multivariate polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{fmt_rational, Scalar};

/// Sorted `(variable, exponent)` pairs, exponents positive. Variables are 1-based.
pub type Monomial = Vec<(usize, u32)>;

/// Polynomial in variables `x_1, x_2, …`. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> MultiPoly<T> {
    pub fn constant(c: T) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn var(i: usize) -> Self {
        assert!(i >= 1, "variables are 1-based");
        Self::term(vec![(i, 1)], T::one())
    }

    fn term(m: Monomial, c: T) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[(usize, u32)]) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&(_, e)| e).sum())
            .max()
    }

    pub fn evaluate(&self, point: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            let v = m.iter().fold(c.clone(), |p, &(i, e)| {
                (0..e).fold(p, |p, _| p * point[i - 1].clone())
            });
            acc + v
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Render with variables named `{prefix}{i}`.
    pub fn render(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let vars: Vec<String> = m
                .iter()
                .map(|&(i, e)| {
                    if e == 1 {
                        format!("{prefix}{i}")
                    } else {
                        format!("{prefix}{i}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&abs), vars.join("*")));
            }
        }
        out
    }
}

fn mul_monomials(a: &[(usize, u32)], b: &[(usize, u32)]) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl<T: Scalar> Zero for MultiPoly<T> {
    fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Scalar> One for MultiPoly<T> {
    fn one() -> Self {
        MultiPoly::constant(T::one())
    }
}

impl<T: Scalar> Add for MultiPoly<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<T: Scalar> Neg for MultiPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<T: Scalar> Sub for MultiPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Mul for MultiPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mul_monomials(ma, mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("a"))
    }
}
