//! Sparse polynomials in `q`, `mu`, `b` with rational coefficients, and their gcd.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const NVARS: usize = 3;

type Exps = [u32; NVARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q,
    Mu,
    B,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Q, Var::Mu, Var::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::Mu => "mu",
            Var::B => "b",
        }
    }
}

/// Polynomial keyed by exponent vectors; the greatest key (lex, `q` first) is the leading term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        let mut p = Self::zero();
        p.add_term(e, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0; NVARS]).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exps(e1, e2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, e: &Exps, c: &BigRational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e1, c1)| (add_exps(e1, e), c1 * c))
                .collect(),
        }
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_e, lead_c) = divisor.leading()?;
        let mut quotient = Poly::zero();
        let mut rem = self.clone();
        while let Some((re, rc)) = rem.leading() {
            if !(0..NVARS).all(|i| re[i] >= lead_e[i]) {
                return None;
            }
            let mut e = [0; NVARS];
            for i in 0..NVARS {
                e[i] = re[i] - lead_e[i];
            }
            let c = rc / lead_c;
            rem = rem.sub(&divisor.mul_term(&e, &c));
            quotient.add_term(e, c);
        }
        Some(quotient)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Coefficients as a polynomial in variable `v`: index `k` holds the coefficient of `v^k`.
    fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    fn content_in(&self, v: usize) -> Poly {
        self.coefficients_in(v)
            .iter()
            .filter(|c| !c.is_zero())
            .fold(Poly::zero(), |acc, c| gcd(&acc, c))
    }

    fn primitive_part_in(&self, v: usize) -> Poly {
        let content = self.content_in(v);
        self.div_exact(&content)
            .expect("content divides its polynomial")
    }

    /// Pseudo-remainder `lc(divisor)^(deg self - deg divisor + 1) * self mod divisor`,
    /// as polynomials in `v` (requires `deg self >= deg divisor`).
    fn pseudo_rem(&self, divisor: &Poly, v: usize) -> Poly {
        let db = divisor.degree_in(v);
        let lc_b = divisor.leading_coefficient_in(v);
        let mut rem = self.clone();
        let mut multiplications = self.degree_in(v) - db + 1;
        while !rem.is_zero() && rem.degree_in(v) >= db {
            let dr = rem.degree_in(v);
            let lc_r = rem.leading_coefficient_in(v);
            let mut shift = [0; NVARS];
            shift[v] = dr - db;
            let shifted = divisor.mul(&lc_r).mul_term(&shift, &BigRational::one());
            rem = rem.mul(&lc_b).sub(&shifted);
            multiplications -= 1;
        }
        for _ in 0..multiplications {
            rem = rem.mul(&lc_b);
        }
        rem
    }

    fn leading_coefficient_in(&self, v: usize) -> Poly {
        self.coefficients_in(v).pop().unwrap_or_default()
    }

    fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[BigRational; NVARS]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..NVARS {
                if e[i] > 0 {
                    t *= num_traits::pow(point[i].clone(), e[i] as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

fn add_exps(a: &Exps, b: &Exps) -> Exps {
    let mut e = [0; NVARS];
    for i in 0..NVARS {
        e[i] = a[i] + b[i];
    }
    e
}

/// Monic greatest common divisor (zero only when both inputs are zero).
///
/// Univariate inputs use the Euclidean algorithm over the rationals. Multivariate inputs
/// try the heuristic integer-evaluation gcd first and fall back to the subresultant
/// remainder sequence, which keeps intermediate coefficients small without recomputing
/// contents at every step.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let Some(v) = (0..NVARS).rev().find(|&v| a.uses_var(v) || b.uses_var(v)) else {
        return Poly::one();
    };
    if v == 0 {
        return univariate_gcd(a, b);
    }
    if let Some(g) = heuristic::gcd(&heuristic::integral(a), &heuristic::integral(b)) {
        return g.monic();
    }
    subresultant_gcd(a, b, v)
}

/// Gcd of nonzero `a` and `b` whose main variable is `v`, by the subresultant sequence.
fn subresultant_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let content = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut r = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < r.degree_in(v) {
        std::mem::swap(&mut p, &mut r);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        if r.degree_in(v) == 0 {
            return content.monic();
        }
        let delta = p.degree_in(v) - r.degree_in(v);
        let rem = p.pseudo_rem(&r, v);
        if rem.is_zero() {
            break;
        }
        p = r;
        r = rem
            .div_exact(&g.mul(&h.pow(delta)))
            .expect("subresultant division is exact");
        g = p.leading_coefficient_in(v);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
    content.mul(&r.primitive_part_in(v)).monic()
}

fn univariate_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut p = a.monic();
    let mut r = b.monic();
    if p.degree_in(0) < r.degree_in(0) {
        std::mem::swap(&mut p, &mut r);
    }
    while !r.is_zero() {
        // the divisor is monic, so the pseudo-remainder is the true remainder
        let rem = p.pseudo_rem(&r, 0);
        p = r;
        r = rem.monic();
    }
    p
}

/// The heuristic gcd: evaluate the main variable at a large integer, take the gcd of the
/// images recursively, and lift it back by a balanced expansion in that integer. A lifted
/// candidate is accepted only after it divides both inputs exactly.
mod heuristic {
    use super::*;

    const ATTEMPTS: usize = 6;
    /// Give up (and let the caller fall back) once the images get this many bits wide.
    const MAX_BITS: u64 = 4000;

    /// `p` scaled to have integer coefficients.
    pub(super) fn integral(p: &Poly) -> Poly {
        let lcm = p
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        p.scale(&BigRational::from_integer(lcm))
    }

    fn content(p: &Poly) -> BigInt {
        p.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    fn max_norm(p: &Poly) -> BigInt {
        p.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_default()
    }

    fn evaluate(p: &Poly, v: usize, xi: &BigInt) -> Poly {
        let mut powers = vec![BigInt::one()];
        let mut out = Poly::zero();
        for (e, c) in &p.terms {
            let k = e[v] as usize;
            while powers.len() <= k {
                let next = powers.last().expect("nonempty") * xi;
                powers.push(next);
            }
            let mut e2 = *e;
            e2[v] = 0;
            out.add_term(e2, c * BigRational::from_integer(powers[k].clone()));
        }
        out
    }

    fn balanced_mod(c: &BigInt, xi: &BigInt) -> BigInt {
        let r = c.mod_floor(xi);
        if &r * 2 > *xi {
            r - xi
        } else {
            r
        }
    }

    /// Reads the coefficients of `v^0, v^1, ...` off the balanced `xi`-adic digits of `image`.
    fn lift(image: &Poly, v: usize, xi: &BigInt) -> Poly {
        let mut out = Poly::zero();
        let mut rest = image.clone();
        let mut k = 0;
        while !rest.is_zero() {
            let mut digit = Poly::zero();
            for (e, c) in &rest.terms {
                let d = balanced_mod(c.numer(), xi);
                if !d.is_zero() {
                    digit.add_term(*e, BigRational::from_integer(d));
                }
            }
            rest = rest
                .sub(&digit)
                .scale(&BigRational::new(BigInt::one(), xi.clone()));
            for (e, c) in &digit.terms {
                let mut e2 = *e;
                e2[v] = k;
                out.add_term(e2, c.clone());
            }
            k += 1;
        }
        out
    }

    /// Gcd of two nonzero polynomials with integer coefficients, as a polynomial with
    /// integer coefficients, or `None` when the heuristic gives up.
    pub(super) fn gcd(a: &Poly, b: &Poly) -> Option<Poly> {
        if a.is_zero() || b.is_zero() {
            return None;
        }
        let ca = content(a);
        let cb = content(b);
        let c = ca.gcd(&cb);
        let Some(v) = (0..NVARS).rev().find(|&v| a.uses_var(v) || b.uses_var(v)) else {
            return Some(Poly::constant(BigRational::from_integer(c)));
        };
        let a = a.scale(&BigRational::new(BigInt::one(), ca));
        let b = b.scale(&BigRational::new(BigInt::one(), cb));
        let degree = u64::from(a.degree_in(v).max(b.degree_in(v)).max(1));
        let mut xi: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 29;
        for _ in 0..ATTEMPTS {
            if xi.bits() * degree > MAX_BITS {
                return None;
            }
            let image = gcd(&evaluate(&a, v, &xi), &evaluate(&b, v, &xi))?;
            let candidate = lift(&image, v, &xi);
            if !candidate.is_zero() {
                let k = content(&candidate);
                let candidate = candidate.scale(&BigRational::new(BigInt::one(), k));
                if a.div_exact(&candidate).is_some() && b.div_exact(&candidate).is_some() {
                    return Some(candidate.scale(&BigRational::from_integer(c)));
                }
            }
            xi = xi * 73794 / 27011;
        }
        None
    }
}

pub(crate) fn div_or_err(a: &Poly, b: &Poly) -> Result<Poly> {
    a.div_exact(b).ok_or(Error::DivisionByZero)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            let mut parts: Vec<String> = Vec::new();
            if is_const || !mag.is_one() {
                parts.push(if mag.is_integer() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => parts.push(v.name().to_string()),
                    k => parts.push(format!("{}^{}", v.name(), k)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn c(n: i64) -> Poly {
        Poly::constant(ratio(n, 1))
    }

    #[test]
    fn gcd_of_products() {
        let q = Poly::var(Var::Q);
        let mu = Poly::var(Var::Mu);
        let b = Poly::var(Var::B);
        let common = q.add(&mu.mul(&b)).sub(&c(3));
        let x = common.mul(&q.mul(&q).add(&b));
        let y = common.mul(&mu.add(&c(1))).mul(&q);
        assert_eq!(gcd(&x, &y), common.monic());
    }

    #[test]
    fn gcd_of_dense_trivariate_products() {
        let q = Poly::var(Var::Q);
        let mu = Poly::var(Var::Mu);
        let b = Poly::var(Var::B);
        // factors that made the plain remainder sequence blow up
        let f1 = c(-1)
            .mul(&q)
            .mul(&q)
            .mul(&mu)
            .mul(&b)
            .add(&c(5).mul(&mu).mul(&mu).mul(&b))
            .sub(&c(3).mul(&mu).mul(&mu));
        let f2 = c(3)
            .mul(&q)
            .mul(&q)
            .mul(&mu)
            .sub(&c(2).mul(&q).mul(&mu).mul(&b))
            .sub(&c(2).mul(&b));
        let f3 = c(4)
            .mul(&q)
            .mul(&q)
            .sub(&c(2).mul(&mu).mul(&mu).mul(&b))
            .add(&mu.mul(&b));
        let common = f2.mul(&f3);
        let a = f1.mul(&common);
        let d = f1.add(&c(1)).mul(&common).mul(&q.add(&b));
        assert_eq!(gcd(&a, &d), common.monic());
        let small = f2.mul(&q);
        assert_eq!(subresultant_gcd(&small, &f2.mul(&mu), 2), f2.monic());
        assert_eq!(subresultant_gcd(&f1.mul(&f3), &f3.mul(&b), 2), f3.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let q = Poly::var(Var::Q);
        let mu = Poly::var(Var::Mu);
        assert!(gcd(&q.add(&c(1)), &mu).is_one());
        assert!(gcd(&q, &c(5)).is_one());
    }

    #[test]
    fn gcd_univariate_powers() {
        let q = Poly::var(Var::Q);
        let q2 = q.mul(&q);
        let q3 = q2.mul(&q);
        assert_eq!(gcd(&q3, &q2.scale(&ratio(-4, 3))), q2);
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let q = Poly::var(Var::Q);
        let mu = Poly::var(Var::Mu);
        assert!(q.div_exact(&mu).is_none());
        let prod = q.add(&mu).mul(&q.sub(&mu));
        assert_eq!(prod.div_exact(&q.add(&mu)), Some(q.sub(&mu)));
    }

    #[test]
    fn display() {
        let q = Poly::var(Var::Q);
        let mu = Poly::var(Var::Mu);
        let p = q.mul(&q).scale(&ratio(3, 2)).sub(&mu).add(&c(1));
        assert_eq!(p.to_string(), "3/2*q^2 - mu + 1");
    }
}
