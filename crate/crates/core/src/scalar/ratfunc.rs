use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{div_or_err, gcd, Poly, Var};
use super::Scalar;
use crate::error::{Error, Result};

/// A rational function in `q`, `mu`, `b`.
///
/// Canonical form: numerator and denominator are coprime, have integer coefficients
/// with joint content one, and the denominator's leading coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// A rational assignment of the three symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub q: BigRational,
    pub mu: BigRational,
    pub b: BigRational,
}

impl RatFunc {
    pub fn symbol(v: Var) -> Self {
        RatFunc {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn from_polys(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let num = div_or_err(&num, &g).expect("gcd divides numerator");
        let den = div_or_err(&den, &g).expect("gcd divides denominator");
        let c = joint_normalizer(&num, &den);
        RatFunc {
            num: num.scale(&c),
            den: den.scale(&c),
        }
    }

    /// Value at a rational point; errors when the denominator vanishes there.
    pub fn evaluate(&self, point: &Point) -> Result<BigRational> {
        let p = [point.q.clone(), point.mu.clone(), point.b.clone()];
        let d = self.den.eval(&p);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(&p) / d)
    }
}

/// The unique rational `c` making `c*num` and `c*den` integral with joint content one
/// and the leading coefficient of `c*den` positive.
fn joint_normalizer(num: &Poly, den: &Poly) -> BigRational {
    let coeffs = || num.terms().chain(den.terms()).map(|(_, c)| c);
    let mut lcm = BigInt::one();
    for c in coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in coeffs() {
        g = g.gcd(&(c * BigRational::from_integer(lcm.clone())).to_integer());
    }
    let mut factor = BigRational::new(lcm, g);
    if den.leading().is_some_and(|(_, c)| c.is_negative()) {
        factor = -factor;
    }
    factor
}

impl RatFunc {
    /// Numerator with a constant denominator folded into its coefficients.
    fn folded_numerator(&self) -> Option<Poly> {
        let c = self.den.as_constant()?;
        Some(self.num.scale(&c.recip()))
    }
}

/// Whether `p` can follow a `/` unparenthesized: a constant or a single power of one symbol.
/// Anything longer (`mu*b`) would bind as `(../mu)*b`.
fn is_bare_factor(p: &Poly) -> bool {
    match p.leading() {
        Some((e, c)) if p.len() == 1 => {
            p.as_constant().is_some() || (c.is_one() && e.iter().filter(|&&k| k > 0).count() == 1)
        }
        _ => false,
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.folded_numerator() {
            return write!(f, "{p}");
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if is_bare_factor(&self.den) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::reduce(self.num.add(&rhs.num), self.den);
        }
        RatFunc::reduce(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    fn from_rational(r: BigRational) -> Self {
        RatFunc::reduce(Poly::constant(r), Poly::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::reduce(self.den.clone(), self.num.clone()))
    }

    fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    fn split_sign(&self) -> (bool, Self) {
        // den has a positive leading coefficient, so the numerator carries the sign
        let neg = self.num.leading().is_some_and(|(_, c)| c.is_negative());
        if neg {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }

    fn needs_parens(&self) -> bool {
        match self.folded_numerator() {
            Some(p) => p.len() > 1,
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn sym(v: Var) -> RatFunc {
        RatFunc::symbol(v)
    }

    #[test]
    fn canonical_forms_are_unique() {
        let q = sym(Var::Q);
        let mu = sym(Var::Mu);
        // (q*mu + q) / (2*q) == (mu + 1)/2
        let a = (q.clone() * mu.clone() + q.clone())
            .checked_div(&(q.clone() * RatFunc::from_i64(2)))
            .unwrap();
        let b = (mu + RatFunc::one()) * RatFunc::from_rational(ratio(1, 2));
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2*mu + 1/2");
    }

    #[test]
    fn display_of_fractions() {
        let q = sym(Var::Q);
        let b = sym(Var::B);
        assert_eq!(q.inv().unwrap().to_string(), "1/q");
        let x = (b.clone() - RatFunc::one())
            .checked_div(&(q.clone() * RatFunc::from_i64(2)))
            .unwrap();
        assert_eq!(x.to_string(), "(b - 1)/(2*q)");
        assert_eq!(RatFunc::from_rational(ratio(-3, 4)).to_string(), "-3/4");
        let mu_b = sym(Var::Mu) * sym(Var::B);
        assert_eq!(mu_b.inv().unwrap().to_string(), "1/(mu*b)");
        assert_eq!(
            (sym(Var::Q) * sym(Var::Q)).inv().unwrap().to_string(),
            "1/q^2"
        );
    }

    #[test]
    fn evaluation_matches_rational_arithmetic() {
        let q = sym(Var::Q);
        let mu = sym(Var::Mu);
        let e = (q.clone() * q.clone() - mu.clone())
            .checked_div(&(mu + q))
            .unwrap();
        let pt = Point {
            q: ratio(2, 3),
            mu: ratio(-1, 5),
            b: ratio(0, 1),
        };
        let expect = (ratio(4, 9) + ratio(1, 5)) / (ratio(-1, 5) + ratio(2, 3));
        assert_eq!(e.evaluate(&pt).unwrap(), expect);
        let pole = Point {
            q: ratio(1, 5),
            mu: ratio(-1, 5),
            b: ratio(0, 1),
        };
        assert_eq!(e.evaluate(&pole), Err(Error::Pole));
    }
}
