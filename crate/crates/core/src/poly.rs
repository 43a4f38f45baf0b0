//! Sparse multivariate polynomials.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! (and therefore every printed or serialized form) is deterministic. The
//! map never stores a zero coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector `[e1, ..., en]` standing for `x1^e1 * ... * xn^en`.
///
/// The derived ordering is lexicographic with `x1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn var(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `true` when every exponent is even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Total degree, with the zero polynomial sitting strictly below every
/// finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S> {
    dim: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(dim), c);
        }
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, S::one())
    }

    /// The coordinate function `x_{index+1}` (indices are zero-based).
    pub fn var(dim: usize, index: usize) -> Self {
        let mut p = Self::zero(dim);
        p.terms.insert(Monomial::var(dim, index), S::one());
        p
    }

    pub fn monomial(exponents: Vec<u32>, c: S) -> Self {
        let dim = exponents.len();
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Monomial(exponents), c);
        }
        p
    }

    /// Builds a polynomial from arbitrary terms, merging repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, S)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// `|x|^2 = x1^2 + ... + xn^2`.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 2;
            p.terms.insert(Monomial(e), S::one());
        }
        p
    }

    /// `|x|^{2a}`.
    pub fn norm_power(dim: usize, a: u32) -> Self {
        Self::norm_squared(dim).pow(a)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one(self.dim))
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// The common degree of all terms, or `None` if terms of different
    /// degrees are present. The zero polynomial is homogeneous of every
    /// degree and reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        match degrees.next() {
            None => Some(0),
            Some(d) => degrees.all(|e| e == d).then_some(d),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    fn ensure_finite(self) -> Result<Self> {
        if S::EXACT || self.terms.values().all(Scalar::is_finite) {
            Ok(self)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.ensure_finite()
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out.ensure_finite()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out.ensure_finite()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Drops coefficients with absolute value at most `abs_tol`. A no-op
    /// for exact scalars.
    pub fn chop(&self, abs_tol: f64) -> Self {
        if S::EXACT {
            return self.clone();
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.is_negligible(abs_tol))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn partial_derivative(&self, index: usize) -> Result<Self> {
        if index >= self.dim {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[index] -= 1;
            out.add_term(Monomial(exps), c.clone() * S::from_int(e as i64));
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> images[i]` for every coordinate.
    pub fn substitute(&self, images: &[Polynomial<S>]) -> Result<Self> {
        if images.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: images.len(),
            });
        }
        let target_dim = images.first().map_or(self.dim, |p| p.dim);
        let max_exp: Vec<u32> = (0..self.dim)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial<S>>> = images
            .iter()
            .zip(&max_exp)
            .map(|(img, &k)| {
                let mut v = Vec::with_capacity(k as usize + 1);
                v.push(Polynomial::one(target_dim));
                for j in 1..=k as usize {
                    let next = &v[j - 1] * img;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(target_dim);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_dim, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out.ensure_finite()
    }

    /// `p ∘ σ_v`, i.e. `x -> p(x - 2<x,v>/|v|^2 v)`.
    pub fn compose_reflection(&self, sigma: &Reflection<S>) -> Result<Self> {
        if sigma.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: sigma.dim(),
            });
        }
        if let Some(perm) = &sigma.signed_perm {
            let mut out = Self::zero(self.dim);
            for (m, c) in &self.terms {
                let mut exps = vec![0; self.dim];
                let mut negate = false;
                for (i, &e) in m.0.iter().enumerate() {
                    let (target, neg) = perm[i];
                    exps[target] = e;
                    negate ^= neg && e % 2 == 1;
                }
                let c = if negate { -c.clone() } else { c.clone() };
                out.terms.insert(Monomial(exps), c);
            }
            return Ok(out);
        }
        let images: Vec<Polynomial<S>> = sigma
            .matrix
            .iter()
            .map(|row| LinearForm::new(row.clone()).to_polynomial())
            .collect();
        self.substitute(&images)
    }

    /// Exact quotient by a linear form.
    ///
    /// Division is term-wise with respect to the first variable carrying a
    /// nonzero coefficient in `form` (the lexicographically leading one).
    /// Terms free of that variable go to the remainder; a nonzero remainder
    /// (beyond `1e-10 * max|coeff|` in float mode) is reported as
    /// [`Error::NotDivisible`].
    pub fn divide_by_linear_form(&self, form: &LinearForm<S>) -> Result<Self> {
        if form.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: form.dim(),
            });
        }
        let lead = form.leading_index().ok_or(Error::ZeroRoot)?;
        let lead_coeff = form.coeffs[lead].clone();
        let mut work = self.terms.clone();
        let mut quotient = Self::zero(self.dim);
        let mut remainder = Self::zero(self.dim);
        while let Some((m, c)) = work.pop_last() {
            if m.0[lead] == 0 {
                remainder.terms.insert(m, c);
                continue;
            }
            let mut qe = m.0.clone();
            qe[lead] -= 1;
            let t = c / lead_coeff.clone();
            for (k, a) in form.coeffs.iter().enumerate() {
                if k == lead || a.is_zero() {
                    continue;
                }
                let mut e = qe.clone();
                e[k] += 1;
                let delta = -(t.clone() * a.clone());
                let key = Monomial(e);
                match work.get_mut(&key) {
                    Some(existing) => {
                        let sum = existing.clone() + delta;
                        if sum.is_zero() {
                            work.remove(&key);
                        } else {
                            *existing = sum;
                        }
                    }
                    None => {
                        work.insert(key, delta);
                    }
                }
            }
            quotient.add_term(Monomial(qe), t);
        }
        let rem_norm = remainder.max_abs_coeff();
        let tol = if S::EXACT {
            0.0
        } else {
            1e-10 * self.max_abs_coeff()
        };
        if !remainder.is_zero() && (S::EXACT || rem_norm > tol) {
            return Err(Error::NotDivisible {
                remainder_norm: rem_norm,
            });
        }
        quotient.ensure_finite()
    }

    /// Splits into homogeneous parts, ascending by degree. Empty for zero.
    pub fn homogeneous_components(&self) -> Vec<(u32, Polynomial<S>)> {
        let mut parts: BTreeMap<u32, Polynomial<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.total_degree())
                .or_insert_with(|| Polynomial::zero(self.dim))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// The homogeneous part of degree `d` (possibly zero).
    pub fn homogeneous_part(&self, d: u32) -> Polynomial<S> {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Converts coefficients to another scalar type.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        -&self
    }
}

/// Prints in the grammar accepted by [`crate::cli::parse_polynomial`],
/// highest lexicographic term first: `3*x1^2*x2 - 1/2*x3`.
impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The linear functional `x -> <x, v>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> LinearForm<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        LinearForm { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn to_polynomial(&self) -> Polynomial<S> {
        let dim = self.dim();
        let mut p = Polynomial::zero(dim);
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::var(dim, i), c.clone());
        }
        p
    }
}

/// Orthogonal reflection `σ_v x = x - 2 <x,v>/|v|^2 v` through the
/// hyperplane orthogonal to `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection<S> {
    root: Vec<S>,
    matrix: Vec<Vec<S>>,
    /// Set when the matrix is a signed permutation: row `i` maps
    /// `x_i -> ±x_{target}`. Enables an exponent-shuffling fast path.
    signed_perm: Option<Vec<(usize, bool)>>,
}

impl<S: Scalar> Reflection<S> {
    pub fn new(root: &[S]) -> Result<Self> {
        let norm2 = dot(root, root);
        if norm2.is_zero() {
            return Err(Error::ZeroRoot);
        }
        let n = root.len();
        let two = S::from_int(2);
        let matrix: Vec<Vec<S>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let delta = if i == k { S::one() } else { S::zero() };
                        delta - two.clone() * root[i].clone() * root[k].clone() / norm2.clone()
                    })
                    .collect()
            })
            .collect();
        let signed_perm = matrix
            .iter()
            .map(|row| {
                let mut nonzero = row.iter().enumerate().filter(|(_, c)| !c.is_zero());
                match (nonzero.next(), nonzero.next()) {
                    (Some((k, c)), None) if c.is_one() => Some((k, false)),
                    (Some((k, c)), None) if (-c.clone()).is_one() => Some((k, true)),
                    _ => None,
                }
            })
            .collect::<Option<Vec<_>>>();
        Ok(Reflection {
            root: root.to_vec(),
            matrix,
            signed_perm,
        })
    }

    pub fn dim(&self) -> usize {
        self.root.len()
    }

    pub fn root(&self) -> &[S] {
        &self.root
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.matrix.iter().map(|row| dot(row, x)).collect()
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn x(dim: usize, i: usize) -> Polynomial<Q> {
        Polynomial::var(dim, i)
    }

    fn c(dim: usize, v: Q) -> Polynomial<Q> {
        Polynomial::constant(dim, v)
    }

    #[test]
    fn add_examples() {
        let x1 = x(2, 0);
        assert!((&x1 + &(-&x1)).is_zero());
        let s = &x1.pow(2) + &x(2, 1);
        assert_eq!(s.num_terms(), 2);
        let half = c(2, q(1, 2));
        assert_eq!(&(&half * &x1) + &(&half * &x1), x1);
    }

    #[test]
    fn mul_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        assert_eq!(&x1 * &x1, x1.pow(2));
        assert_eq!(&(&x1 + &x2) * &(&x1 - &x2), &x1.pow(2) - &x2.pow(2));
        assert!((&Polynomial::zero(2) * &x1).is_zero());
        assert_eq!((&x1 * &x2).degree(), Degree::Finite(2));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = x(2, 0).checked_add(&x(3, 0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
        assert!(x(2, 0).checked_mul(&x(3, 0)).is_err());
        assert!(x(2, 0).evaluate(&[q(1, 1)]).is_err());
    }

    #[test]
    fn zero_degree_is_minus_infinity() {
        let z: Polynomial<Q> = Polynomial::zero(3);
        assert_eq!(z.degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn reflection_examples() {
        let e1 = Reflection::new(&[q(1, 1), q(0, 1)]).unwrap();
        assert_eq!(x(2, 0).compose_reflection(&e1).unwrap(), -x(2, 0));

        let r2 = Polynomial::<Q>::norm_squared(2);
        let v = Reflection::new(&[q(3, 1), q(-7, 2)]).unwrap();
        assert_eq!(r2.compose_reflection(&v).unwrap(), r2);

        // e1 - e2 swaps coordinates; x1 x2 is symmetric.
        let swap = Reflection::new(&[q(1, 1), q(-1, 1)]).unwrap();
        let p = &x(2, 0) * &x(2, 1);
        assert_eq!(p.compose_reflection(&swap).unwrap(), p);
        let p = &x(2, 0) * &x(2, 1).pow(2);
        assert_eq!(
            p.compose_reflection(&swap).unwrap(),
            &x(2, 0).pow(2) * &x(2, 1)
        );
    }

    #[test]
    fn zero_root_rejected() {
        assert_eq!(
            Reflection::<Q>::new(&[q(0, 1), q(0, 1)]).unwrap_err(),
            Error::ZeroRoot
        );
    }

    #[test]
    fn signed_permutation_fast_path_matches_substitution() {
        let v = [q(1, 1), q(1, 1), q(0, 1)];
        let sigma = Reflection::new(&v).unwrap();
        assert!(sigma.signed_perm.is_some());
        let p = Polynomial::from_terms(
            3,
            vec![
                (vec![3, 1, 0], q(2, 1)),
                (vec![0, 2, 5], q(-1, 3)),
                (vec![1, 0, 1], q(1, 1)),
            ],
        )
        .unwrap();
        let images: Vec<_> = sigma
            .matrix()
            .iter()
            .map(|r| LinearForm::new(r.clone()).to_polynomial())
            .collect();
        assert_eq!(
            p.compose_reflection(&sigma).unwrap(),
            p.substitute(&images).unwrap()
        );
    }

    #[test]
    fn division_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let l = LinearForm::new(vec![q(1, 1), q(-1, 1)]);
        let p = &x1.pow(2) - &x2.pow(2);
        assert_eq!(p.divide_by_linear_form(&l).unwrap(), &x1 + &x2);

        let p = &c(2, q(2, 1)) * &(&x1 * &x2);
        let l = LinearForm::new(vec![q(1, 1), q(0, 1)]);
        assert_eq!(p.divide_by_linear_form(&l).unwrap(), c(2, q(2, 1)) * x2.clone());

        let p = &x1.pow(2) + &x2.pow(2);
        assert!(matches!(
            p.divide_by_linear_form(&l),
            Err(Error::NotDivisible { .. })
        ));

        let zero = LinearForm::new(vec![q(0, 1), q(0, 1)]);
        assert_eq!(p.divide_by_linear_form(&zero).unwrap_err(), Error::ZeroRoot);
    }

    #[test]
    fn float_division_tolerates_roundoff() {
        let s = 0.5f64.sqrt();
        let v = [s, s * 3f64.sqrt()];
        let sigma = Reflection::new(&v).unwrap();
        let p: Polynomial<f64> = Polynomial::from_terms(
            2,
            vec![(vec![3, 0], 1.0), (vec![1, 2], -2.5), (vec![0, 1], 0.25)],
        )
        .unwrap();
        let diff = &p - &p.compose_reflection(&sigma).unwrap();
        let form = LinearForm::new(v.to_vec());
        let qt = diff.divide_by_linear_form(&form).unwrap();
        let back = &qt * &form.to_polynomial();
        let resid = (&back - &diff).max_abs_coeff();
        assert!(resid < 1e-10 * diff.max_abs_coeff());
    }

    #[test]
    fn homogeneous_component_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let p = &(&x1.pow(2) + &x2) + &c(2, q(3, 1));
        let comps = p.homogeneous_components();
        assert_eq!(
            comps,
            vec![(0, c(2, q(3, 1))), (1, x2.clone()), (2, x1.pow(2))]
        );
        assert_eq!((&x1 * &x2).homogeneous_components(), vec![(2, &x1 * &x2)]);
        assert!(Polynomial::<Q>::zero(2).homogeneous_components().is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let p = &x1.pow(2) + &x2;
        assert_eq!(p.evaluate(&[q(2, 1), q(3, 1)]).unwrap(), q(7, 1));
        assert_eq!(c(2, q(5, 1)).evaluate(&[q(9, 4), q(-1, 7)]).unwrap(), q(5, 1));
        assert_eq!((&x1 * &x2).evaluate(&[q(1, 1), q(-1, 1)]).unwrap(), q(-1, 1));
    }

    #[test]
    fn display_format() {
        let p = Polynomial::from_terms(
            3,
            vec![(vec![2, 1, 0], q(3, 1)), (vec![0, 0, 1], q(-1, 2))],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3*x1^2*x2 - 1/2*x3");
        assert_eq!(Polynomial::<Q>::zero(2).to_string(), "0");
        assert_eq!((-x(2, 1)).to_string(), "-x2");
    }

    fn arb_poly(dim: usize, max_deg: u32) -> impl Strategy<Value = Polynomial<Q>> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0..=max_deg, dim),
                -6i64..=6,
                1i64..=4,
            ),
            0..8,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                dim,
                terms.into_iter().map(|(e, n, d)| (e, q(n, d))),
            )
            .unwrap()
        })
    }

    fn arb_root(dim: usize) -> impl Strategy<Value = Vec<Q>> {
        proptest::collection::vec(-3i64..=3, dim)
            .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
            .prop_map(|v| v.into_iter().map(|c| q(c, 1)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reflection_is_an_involution(p in arb_poly(3, 3), v in arb_root(3)) {
            let sigma = Reflection::new(&v).unwrap();
            let once = p.compose_reflection(&sigma).unwrap();
            prop_assert_eq!(once.degree(), p.degree());
            prop_assert_eq!(once.compose_reflection(&sigma).unwrap(), p);
        }

        #[test]
        fn difference_quotient_exists(p in arb_poly(3, 3), v in arb_root(3)) {
            let sigma = Reflection::new(&v).unwrap();
            let diff = &p - &p.compose_reflection(&sigma).unwrap();
            let form = LinearForm::new(v.clone());
            let quot = diff.divide_by_linear_form(&form).unwrap();
            prop_assert_eq!(&quot * &form.to_polynomial(), diff);
        }

        #[test]
        fn components_sum_back(p in arb_poly(3, 4)) {
            let total = p
                .homogeneous_components()
                .into_iter()
                .fold(Polynomial::zero(3), |acc, (d, h)| {
                    assert_eq!(h.homogeneous_degree(), Some(d));
                    &acc + &h
                });
            prop_assert_eq!(total, p);
        }

        #[test]
        fn root_rescaling_leaves_reflection_unchanged(
            p in arb_poly(2, 3),
            v in arb_root(2),
            n in 1i64..5,
            d in 1i64..5,
        ) {
            let lambda = q(n, d);
            let scaled: Vec<Q> = v.iter().map(|c| c * &lambda).collect();
            let a = p.compose_reflection(&Reflection::new(&v).unwrap()).unwrap();
            let b = p.compose_reflection(&Reflection::new(&scaled).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
