//! Univariate rational polynomials and exact real-root isolation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, simplest_between, Rational};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(BigInt::from(k))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let l = l.clone();
                UniPoly(self.0.iter().map(|c| c / &l).collect())
            }
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().expect("nonzero").clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().expect("nonempty") / &lead;
            for (i, c) in divisor.0.iter().enumerate() {
                rem[k + i] -= &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Leading coefficient of the primitive integer multiple of `self`.
    fn integer_lead(&self) -> BigInt {
        let den = common_denominator(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c));
        (ints.last().expect("nonzero polynomial") / g).abs()
    }

    fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq[seq.len() - 1].is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(UniPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        seq.pop();
        seq
    }

    /// Strict bound on the absolute value of every root (Cauchy).
    fn root_bound(&self) -> Rational {
        let lead = self.lead().expect("nonzero polynomial");
        let max = self.0[..self.0.len() - 1].iter().map(|c| (c / lead).abs()).max().unwrap_or_else(Rational::zero);
        max + Rational::one()
    }
}

fn sign_changes(seq: &[UniPoly], x: &Rational) -> usize {
    let signs: Vec<bool> = seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root, either exact or isolated in an open interval whose
/// endpoints bracket a sign change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Rational(Rational),
    Isolated { lo: Rational, hi: Rational },
}

/// Real roots of a square-free polynomial in ascending order. Rational roots
/// are always reported exactly.
pub fn real_roots(p: &UniPoly) -> Vec<RealRoot> {
    assert!(p.degree().is_some_and(|d| d >= 1), "real_roots needs a nonconstant polynomial");
    let seq = p.sturm_sequence();
    let bound = p.root_bound();
    let mut intervals = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        match count {
            0 => {}
            1 => intervals.push((lo, hi)),
            _ => {
                let mid = split_point(p, &lo, &hi);
                // upper half first so the lower half is popped first
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    intervals.sort();
    // distinct rationals with denominators dividing the integer leading
    // coefficient L are at least 1/L² apart
    let lead = Rational::from_integer(p.integer_lead());
    let width = (Rational::from_integer(BigInt::from(2)) * &lead * &lead).recip();
    intervals
        .into_iter()
        .map(|(lo, hi)| match refine(p, lo, hi, &width) {
            RealRoot::Isolated { lo, hi } => {
                let s = simplest_between(&lo, &hi);
                if p.eval(&s).is_zero() {
                    RealRoot::Rational(s)
                } else {
                    RealRoot::Isolated { lo, hi }
                }
            }
            exact => exact,
        })
        .collect()
}

/// A point strictly inside `(lo, hi)` that is not a root.
fn split_point(p: &UniPoly, lo: &Rational, hi: &Rational) -> Rational {
    let n = p.degree().unwrap_or(0) as i64 + 2;
    (1..=n)
        .map(|k| lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(n + 1)))
        .find(|x| !p.eval(x).is_zero())
        .expect("more candidates than roots")
}

/// Bisects an isolating interval of a simple root until it is narrower than
/// `width`, or until a midpoint hits the root exactly.
pub fn refine(p: &UniPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> RealRoot {
    let lo_positive = p.eval(&lo).is_positive();
    let two = Rational::from_integer(BigInt::from(2));
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return RealRoot::Rational(mid);
        }
        if v.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RealRoot::Isolated { lo, hi }
}
