//! Sparse multivariate polynomials with rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, rat, Rational};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u8>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coeffs[i] · u_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u8]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in graded-descending lexicographic order (`u1³` before `u1²u2`).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&d| d as u32).sum()).max()
    }

    /// Degree if all monomials share the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&d| d as u32).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn degree_in(&self, var: usize) -> u8 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * rat(e[var] as i64));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&d, x)| if d == 0 { acc } else { acc * num_traits::pow(x.clone(), d as usize) })
            })
            .sum()
    }

    /// Fixes `var := value`; the variable stays in the signature with degree 0.
    pub fn substitute(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = std::mem::replace(&mut e2[var], 0);
            out.add_term(e2, c * num_traits::pow(value.clone(), d as usize));
        }
        out
    }

    /// Coefficient of `var^k` as a polynomial in the remaining variables.
    pub fn coefficient_of_power(&self, var: usize, k: u8) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Composition `p(L v)` where variable `i` is replaced by the linear form
    /// `Σ_k images[i][k] v_k` in `images[i].len()` new variables.
    pub fn compose_linear(&self, images: &[Vec<Rational>]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let new_vars = images.first().map_or(0, Vec::len);
        let lin: Vec<Polynomial> = images.iter().map(|row| Polynomial::linear(row)).collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(new_vars, c.clone());
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    term = term.mul(&lin[i].pow(d as u32));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// If every term of `self` equals `λ` times the matching term of `other`
    /// (`other` nonzero), returns `λ`.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        let (e, c) = other.terms.iter().next()?;
        let lambda = self.coefficient(e) / c;
        (self == &other.scale(&lambda)).then_some(lambda)
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(i, &d)| if d == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, d) })
                    .collect();
                if vars.is_empty() {
                    format_rational(c)
                } else {
                    format!("{}*{}", format_rational(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One term in serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u8>,
    #[serde(with = "crate::rational::serde_str")]
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub nvars: usize,
    pub terms: Vec<TermRecord>,
}

impl From<&Polynomial> for PolynomialRecord {
    fn from(p: &Polynomial) -> Self {
        PolynomialRecord {
            nvars: p.nvars,
            terms: p.terms().map(|(e, c)| TermRecord { exponents: e.clone(), coefficient: c.clone() }).collect(),
        }
    }
}

impl From<PolynomialRecord> for Polynomial {
    fn from(r: PolynomialRecord) -> Self {
        Polynomial::from_terms(r.nvars, r.terms.into_iter().map(|t| (t.exponents, t.coefficient)))
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PolynomialRecord::deserialize(d).map(Polynomial::from)
    }
}

/// Grid values in search order.
pub fn grid_values(radius: u32) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for k in 1..=radius as i64 {
        out.push(rat(k));
        out.push(rat(-k));
    }
    out
}

/// A point of the grid `{0, ±1, …, ±radius}^n` where `p` does not vanish, or
/// `None` when `p` is the zero polynomial (or the grid is too small for its
/// per-variable degree).
///
/// Picks variables one at a time: the leading coefficient in the current
/// variable is nonzero somewhere on the remaining grid by induction, and a
/// nonzero univariate polynomial of degree `d` has at most `d` roots, so one
/// of `2·radius + 1 > d` grid values works.
pub fn find_nonvanishing_point(p: &Polynomial, radius: u32) -> Option<Vec<Rational>> {
    if p.is_zero() {
        return None;
    }
    let grid = grid_values(radius);
    let mut point = vec![Rational::zero(); p.nvars()];
    assign_nonvanishing(p, &grid, &mut point)?;
    debug_assert!(!p.eval(&point).is_zero());
    Some(point)
}

fn assign_nonvanishing(p: &Polynomial, grid: &[Rational], point: &mut [Rational]) -> Option<()> {
    let Some(&var) = p.variables().first() else {
        return (!p.is_zero()).then_some(());
    };
    let top = p.degree_in(var);
    let lead = p.coefficient_of_power(var, top);
    assign_nonvanishing(&lead, grid, point)?;
    // every other variable of p is now fixed in `point` except `var`
    let others: Vec<usize> = p.variables().into_iter().filter(|&i| i != var).collect();
    let mut univariate = p.clone();
    for &i in &others {
        univariate = univariate.substitute(i, &point[i]);
    }
    let value = grid.iter().find(|g| !univariate.eval(&with_value(point, var, g)).is_zero())?;
    point[var] = value.clone();
    Some(())
}

fn with_value(point: &[Rational], var: usize, value: &Rational) -> Vec<Rational> {
    let mut v = point.to_vec();
    v[var] = value.clone();
    v
}
