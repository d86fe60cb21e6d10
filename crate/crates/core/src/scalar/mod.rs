//! Exact coefficient fields.
//!
//! Two interchangeable backends implement [`Scalar`]:
//!
//! - [`Rat`]: arbitrary-precision rationals, used with concrete parameter values.
//! - [`RatFunc`]: reduced rational functions in the symbols `q`, `mu`, `b` over the rationals.
//!
//! Everything above this module is generic over the backend, so the same computation
//! can be run symbolically on small instances and specialized at random rational points
//! for identity testing.

mod poly;
mod ratfunc;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub use poly::{Poly, Var};
pub use ratfunc::{Point, RatFunc};
pub use rational::Rat;

pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;

    /// The value as a rational constant, if it is one.
    fn as_rational(&self) -> Option<BigRational>;

    /// Splits off a leading minus sign for printing: `(negative, magnitude)`.
    fn split_sign(&self) -> (bool, Self);

    /// Whether the printed form must be wrapped in parentheses when used as a factor.
    fn needs_parens(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.inv()?)
    }

    /// Integer-valued constants count as integers (`4/2` is an integer).
    fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * sq.clone();
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.clone() * sq;
            }
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith<F: Scalar>(a: &F, b: &F, op: FieldOp) -> Result<F> {
    match op {
        FieldOp::Add => Ok(a.clone() + b.clone()),
        FieldOp::Sub => Ok(a.clone() - b.clone()),
        FieldOp::Mul => Ok(a.clone() * b.clone()),
        FieldOp::Div => a.checked_div(b),
    }
}

/// Generalized binomial coefficient `b(b-1)...(b-j+1)/j!`.
pub fn binom<F: Scalar>(b: &F, j: u32) -> F {
    let mut num = F::one();
    let mut fact = BigInt::one();
    for i in 0..j {
        num = num * (b.clone() - F::from_i64(i64::from(i)));
        fact *= BigInt::from(i + 1);
    }
    num * F::from_rational(BigRational::new(BigInt::one(), fact))
}

/// Values of the parameters `q`, `mu` and (for twisted spaces) `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamEnv<F> {
    q: F,
    q_inv: F,
    mu: F,
    b: Option<F>,
}

impl<F: Scalar> ParamEnv<F> {
    pub fn new(q: F, mu: F, b: Option<F>) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroQ);
        }
        let q_inv = q.inv()?;
        Ok(Self { q, q_inv, mu, b })
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn mu(&self) -> &F {
        &self.mu
    }

    pub fn b(&self) -> Option<&F> {
        self.b.as_ref()
    }

    pub fn require_b(&self) -> Result<&F> {
        self.b.as_ref().ok_or(Error::MissingParameter("b"))
    }

    pub fn with_b(&self, b: Option<F>) -> Self {
        Self { b, ..self.clone() }
    }

    pub fn with_mu(&self, mu: F) -> Self {
        Self { mu, ..self.clone() }
    }

    /// `q^k` for any integer `k`.
    pub fn q_power(&self, k: i64) -> F {
        let base = if k < 0 { &self.q_inv } else { &self.q };
        let mut exp = k.unsigned_abs();
        let mut acc = F::one();
        let mut sq = base.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * sq.clone();
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.clone() * sq;
            }
        }
        acc
    }
}

impl ParamEnv<RatFunc> {
    /// All three parameters as independent symbols.
    pub fn symbolic() -> Self {
        Self::new(
            RatFunc::symbol(Var::Q),
            RatFunc::symbol(Var::Mu),
            Some(RatFunc::symbol(Var::B)),
        )
        .expect("q is a nonzero symbol")
    }
}

impl ParamEnv<Rat> {
    pub fn rational(q: BigRational, mu: BigRational, b: Option<BigRational>) -> Result<Self> {
        Self::new(Rat::from(q), Rat::from(mu), b.map(Rat::from))
    }
}

/// Shorthand for a rational constant `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::from(ratio(n, d))
    }

    #[test]
    fn add_halves_and_thirds() {
        assert_eq!(
            field_arith(&r(1, 2), &r(1, 3), FieldOp::Add).unwrap(),
            r(5, 6)
        );
    }

    #[test]
    fn symbolic_inverse_pair() {
        let q = RatFunc::symbol(Var::Q);
        let prod = field_arith(&q, &q.inv().unwrap(), FieldOp::Mul).unwrap();
        assert!(prod.is_one());
        let mu = RatFunc::symbol(Var::Mu);
        assert!(field_arith(&mu, &mu, FieldOp::Div).unwrap().is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            field_arith(&r(1, 2), &Rat::zero(), FieldOp::Div),
            Err(Error::DivisionByZero)
        );
        let mu = RatFunc::symbol(Var::Mu);
        assert_eq!(mu.checked_div(&RatFunc::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn q_powers() {
        let env = ParamEnv::rational(ratio(2, 3), ratio(0, 1), None).unwrap();
        assert!(env.q_power(0).is_one());
        assert_eq!(env.q_power(-2), r(9, 4));
        let sym = ParamEnv::symbolic();
        let q = RatFunc::symbol(Var::Q);
        assert_eq!(sym.q_power(3), q.clone() * q.clone() * q);
        assert_eq!(sym.q_power(3).to_string(), "q^3");
    }

    #[test]
    fn zero_q_rejected() {
        assert_eq!(
            ParamEnv::rational(ratio(0, 1), ratio(1, 1), None),
            Err(Error::ZeroQ)
        );
    }

    #[test]
    fn binomials() {
        // (1/2)(-1/2)/2
        assert_eq!(binom(&r(1, 2), 2), r(-1, 8));
        assert!(binom(&r(7, 3), 0).is_one());
        assert!(binom(&RatFunc::symbol(Var::B), 0).is_one());
        assert!(binom(&r(3, 1), 5).is_zero());
        assert_eq!(binom(&r(5, 1), 2), r(10, 1));
    }

    #[test]
    fn integer_predicate_counts_integer_valued_rationals() {
        assert!(r(4, 2).is_integer());
        assert!(!r(1, 2).is_integer());
        assert!(!RatFunc::symbol(Var::Mu).is_integer());
    }

    #[test]
    fn q_power_additive_in_exponent() {
        let env = ParamEnv::rational(ratio(-7, 5), ratio(0, 1), None).unwrap();
        for k1 in -10..=10 {
            for k2 in -10..=10 {
                assert_eq!(env.q_power(k1) * env.q_power(k2), env.q_power(k1 + k2));
            }
        }
    }
}
