//! Module elements: finite sums of Laurent monomials in the variables `x[n]`, `n` in Z^2.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ParamEnv, Scalar};

/// A point of Z^2, ordered lexicographically.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct GridIndex {
    pub m1: i64,
    pub m2: i64,
}

impl GridIndex {
    pub const ZERO: GridIndex = GridIndex { m1: 0, m2: 0 };

    pub const fn new(m1: i64, m2: i64) -> Self {
        GridIndex { m1, m2 }
    }

    /// `m1*n2 - m2*n1`; zero exactly when the two points are collinear with the origin.
    pub fn cross(self, other: GridIndex) -> i64 {
        self.m1 * other.m2 - self.m2 * other.m1
    }

    pub fn scaled(self, k: i64) -> GridIndex {
        GridIndex::new(self.m1 * k, self.m2 * k)
    }

    pub fn max_abs(self) -> i64 {
        self.m1.abs().max(self.m2.abs())
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m1, self.m2)
    }
}

impl Add for GridIndex {
    type Output = GridIndex;
    fn add(self, o: GridIndex) -> GridIndex {
        GridIndex::new(self.m1 + o.m1, self.m2 + o.m2)
    }
}

impl Sub for GridIndex {
    type Output = GridIndex;
    fn sub(self, o: GridIndex) -> GridIndex {
        GridIndex::new(self.m1 - o.m1, self.m2 - o.m2)
    }
}

impl Neg for GridIndex {
    type Output = GridIndex;
    fn neg(self) -> GridIndex {
        GridIndex::new(-self.m1, -self.m2)
    }
}

/// A Laurent monomial: sorted `(index, exponent)` pairs with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(GridIndex, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(n: GridIndex) -> Self {
        Monomial(vec![(n, 1)])
    }

    pub fn power(n: GridIndex, k: i64) -> Self {
        if k == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(n, k)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeated indices.
    pub fn from_pairs<I: IntoIterator<Item = (GridIndex, i64)>>(pairs: I) -> Self {
        let mut map: BTreeMap<GridIndex, i64> = BTreeMap::new();
        for (n, k) in pairs {
            *map.entry(n).or_insert(0) += k;
        }
        Monomial(map.into_iter().filter(|&(_, k)| k != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, n: GridIndex) -> i64 {
        self.0
            .binary_search_by(|(i, _)| i.cmp(&n))
            .map(|pos| self.0[pos].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GridIndex, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn indices(&self) -> impl Iterator<Item = GridIndex> + '_ {
        self.0.iter().map(|(n, _)| *n)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    /// Adds `delta` to the exponent of each listed index.
    pub fn shifted(&self, deltas: &[(GridIndex, i64)]) -> Monomial {
        let mut out = self.0.clone();
        for &(n, d) in deltas {
            match out.binary_search_by(|(i, _)| i.cmp(&n)) {
                Ok(pos) => {
                    out[pos].1 += d;
                    if out[pos].1 == 0 {
                        out.remove(pos);
                    }
                }
                Err(pos) => {
                    if d != 0 {
                        out.insert(pos, (n, d));
                    }
                }
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.shifted(&other.0)
    }

    pub fn without(&self, n: GridIndex) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(i, _)| *i != n).collect())
    }

    /// Checks exponents against the space: only the distinguished index may be non-positive.
    pub fn validate_in(&self, kind: &SpaceKind) -> Result<()> {
        let special = kind.distinguished();
        for &(n, k) in &self.0 {
            if k < 1 && Some(n) != special {
                return Err(Error::InvalidMonomial {
                    index: n,
                    exponent: k,
                    space: kind.name(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (n, k)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x[{},{}]", n.m1, n.m2)?;
            if *k != 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// Which module a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// The polynomial highest weight module.
    Plain,
    /// Localization at `e21(m)`: `x[m]` may carry negative exponents.
    Localized(GridIndex),
    /// Localization twisted by the automorphism `Theta_b`.
    Twisted(GridIndex),
    /// The localized module modulo the polynomial submodule.
    Quotient(GridIndex),
}

impl SpaceKind {
    pub fn distinguished(&self) -> Option<GridIndex> {
        match *self {
            SpaceKind::Plain => None,
            SpaceKind::Localized(m) | SpaceKind::Twisted(m) | SpaceKind::Quotient(m) => Some(m),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::Plain => "plain",
            SpaceKind::Localized(_) => "localized",
            SpaceKind::Twisted(_) => "twisted",
            SpaceKind::Quotient(_) => "quotient",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpace<F> {
    pub kind: SpaceKind,
    pub env: ParamEnv<F>,
}

impl<F: Scalar> ModuleSpace<F> {
    pub fn plain(env: ParamEnv<F>) -> Self {
        ModuleSpace {
            kind: SpaceKind::Plain,
            env,
        }
    }

    pub fn localized(env: ParamEnv<F>, m: GridIndex) -> Self {
        ModuleSpace {
            kind: SpaceKind::Localized(m),
            env,
        }
    }

    pub fn quotient(env: ParamEnv<F>, m: GridIndex) -> Self {
        ModuleSpace {
            kind: SpaceKind::Quotient(m),
            env,
        }
    }

    pub fn twisted(env: ParamEnv<F>, m: GridIndex) -> Result<Self> {
        env.require_b()?;
        Ok(ModuleSpace {
            kind: SpaceKind::Twisted(m),
            env,
        })
    }

    pub fn new(kind: SpaceKind, env: ParamEnv<F>) -> Result<Self> {
        if matches!(kind, SpaceKind::Twisted(_)) {
            env.require_b()?;
        }
        Ok(ModuleSpace { kind, env })
    }

    pub fn distinguished(&self) -> Option<GridIndex> {
        self.kind.distinguished()
    }

    /// Validates `v` and, in a quotient space, returns its canonical representative.
    pub fn canonical(&self, v: MVector<F>) -> Result<MVector<F>> {
        v.validate_in(&self.kind)?;
        Ok(match self.kind {
            SpaceKind::Quotient(m) => v.project_mod_m(m),
            _ => v,
        })
    }
}

/// A finite linear combination of monomials, kept canonical (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MVector<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> Default for MVector<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> MVector<F> {
    pub fn zero() -> Self {
        MVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(mono: Monomial, c: F) -> Self {
        let mut v = Self::zero();
        v.add_term(mono, c);
        v
    }

    pub fn monomial(mono: Monomial) -> Self {
        Self::term(mono, F::one())
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn var(n: GridIndex) -> Self {
        Self::monomial(Monomial::var(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, mono: &Monomial) -> F {
        self.terms.get(mono).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, mono: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(mono, s);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &MVector<F>, c: &F) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &MVector<F>) -> MVector<F> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MVector<F>) -> MVector<F> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MVector<F> {
        MVector {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> MVector<F> {
        if c.is_zero() {
            return Self::zero();
        }
        MVector {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies every monomial by `mono` (no validity check).
    pub fn mono_mul(&self, mono: &Monomial) -> MVector<F> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.mul(mono), c.clone());
        }
        out
    }

    pub fn validate_in(&self, kind: &SpaceKind) -> Result<()> {
        self.terms.keys().try_for_each(|m| m.validate_in(kind))
    }

    /// Formal partial derivative in `x[n]`; also valid for negative powers.
    pub fn partial(&self, n: GridIndex) -> MVector<F> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.exponent(n);
            if k != 0 {
                out.add_term(m.shifted(&[(n, -1)]), c.clone() * F::from_i64(k));
            }
        }
        out
    }

    /// Drops every monomial whose `x[m]` exponent is non-negative.
    pub fn project_mod_m(&self, m: GridIndex) -> MVector<F> {
        MVector {
            terms: self
                .terms
                .iter()
                .filter(|(mono, _)| mono.exponent(m) < 0)
                .map(|(mono, c)| (mono.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Result<i64> {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .ok_or(Error::ZeroVector)
    }

    /// Smallest exponent of `x[m]` over all monomials (absent counts as zero).
    pub fn min_exponent(&self, m: GridIndex) -> Result<i64> {
        self.terms
            .keys()
            .map(|mono| mono.exponent(m))
            .min()
            .ok_or(Error::ZeroVector)
    }

    /// Total degree minus the minimal `x[m]` exponent.
    pub fn xm_hat_degree(&self, m: GridIndex) -> Result<i64> {
        Ok(self.total_degree()? - self.min_exponent(m)?)
    }

    pub fn homogeneous_components(&self) -> BTreeMap<i64, MVector<F>> {
        let mut out: BTreeMap<i64, MVector<F>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.total_degree())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_components().len() <= 1
    }

    /// The scalar `c` with `self == c * other`, if any.
    pub fn ratio_to(&self, other: &MVector<F>) -> Option<F> {
        if other.is_zero() {
            return self.is_zero().then(F::zero);
        }
        let (m, c) = other.terms.iter().next()?;
        let r = self.coefficient(m).checked_div(c).ok()?;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn map_coefficients<G: Scalar>(&self, f: impl Fn(&F) -> Result<G>) -> Result<MVector<G>> {
        let mut out = MVector::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl<F: Scalar> FromIterator<(Monomial, F)> for MVector<F> {
    fn from_iter<I: IntoIterator<Item = (Monomial, F)>>(iter: I) -> Self {
        let mut v = MVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VecOp {
    Add,
    Sub,
}

pub fn vec_arith<F: Scalar>(
    space: &ModuleSpace<F>,
    u: &MVector<F>,
    v: &MVector<F>,
    op: VecOp,
) -> Result<MVector<F>> {
    let out = match op {
        VecOp::Add => u.add(v),
        VecOp::Sub => u.sub(v),
    };
    space.canonical(out)
}

pub fn vec_scale<F: Scalar>(space: &ModuleSpace<F>, c: &F, v: &MVector<F>) -> Result<MVector<F>> {
    space.canonical(v.scale(c))
}

/// Monomial multiplication checked against the space.
pub fn mono_mul<F: Scalar>(
    space: &ModuleSpace<F>,
    mono: &Monomial,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    space.canonical(v.mono_mul(mono))
}

pub(crate) fn write_coefficient<F: Scalar>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &F,
    body: &str,
) -> fmt::Result {
    let (neg, mag) = c.split_sign();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let coeff = if mag.needs_parens() {
        format!("({mag})")
    } else {
        mag.to_string()
    };
    match (body.is_empty(), mag.is_one()) {
        (true, _) => write!(f, "{coeff}"),
        (false, true) => write!(f, "{body}"),
        (false, false) => write!(f, "{coeff}*{body}"),
    }
}

impl<F: Scalar> fmt::Display for MVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = if m.is_one() {
                String::new()
            } else {
                m.to_string()
            };
            write_coefficient(f, i == 0, c, &body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rat};

    fn g(a: i64, b: i64) -> GridIndex {
        GridIndex::new(a, b)
    }

    fn env() -> ParamEnv<Rat> {
        ParamEnv::rational(ratio(2, 1), ratio(1, 3), None).unwrap()
    }

    #[test]
    fn cancellation() {
        let x: MVector<Rat> = MVector::var(g(1, 0));
        assert!(x.add(&x.neg()).is_zero());
        assert_eq!(x.add(&x.neg()).to_string(), "0");
    }

    #[test]
    fn mono_mul_adds_exponents() {
        let v: MVector<Rat> = MVector::monomial(Monomial::from_pairs([(g(1, 0), 2), (g(0, 1), 1)]));
        let out = v.mono_mul(&Monomial::var(g(1, 0)));
        assert_eq!(
            out,
            MVector::monomial(Monomial::from_pairs([(g(1, 0), 3), (g(0, 1), 1)]))
        );
    }

    #[test]
    fn localized_inverse_pair() {
        let space = ModuleSpace::localized(env(), g(1, 0));
        let v = MVector::var(g(1, 0));
        let out = mono_mul(&space, &Monomial::power(g(1, 0), -1), &v).unwrap();
        assert_eq!(out, MVector::one());
    }

    #[test]
    fn invalid_negative_exponent_names_the_index() {
        let space = ModuleSpace::localized(env(), g(1, 0));
        let v = MVector::var(g(0, 1));
        let err = mono_mul(&space, &Monomial::power(g(0, 1), -2), &v).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidMonomial {
                index: g(0, 1),
                exponent: -1,
                space: "localized"
            }
        );
        let plain = ModuleSpace::plain(env());
        assert!(mono_mul(&plain, &Monomial::power(g(1, 0), -1), &MVector::one()).is_err());
    }

    #[test]
    fn degree_accessors() {
        let m = g(1, 0);
        let n = g(0, 1);
        let v: MVector<Rat> = MVector::monomial(Monomial::from_pairs([(m, -1), (n, 2)]));
        assert_eq!(v.total_degree().unwrap(), 1);
        assert_eq!(v.xm_hat_degree(m).unwrap(), 2);
        assert_eq!(MVector::<Rat>::one().total_degree().unwrap(), 0);
        assert_eq!(
            MVector::<Rat>::zero().total_degree(),
            Err(Error::ZeroVector)
        );

        let k = g(2, 2);
        let w: MVector<Rat> = MVector::monomial(Monomial::power(n, 2))
            .add(&MVector::monomial(Monomial::from_pairs([(n, 1), (k, 1)])));
        let comps = w.homogeneous_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&2], w);
    }

    #[test]
    fn projection_mod_m() {
        let m = g(1, 0);
        let n = g(0, 1);
        let xm_inv: MVector<Rat> = MVector::monomial(Monomial::power(m, -1));
        let v = xm_inv.add(&MVector::var(n));
        assert_eq!(v.project_mod_m(m), xm_inv);
        assert!(MVector::<Rat>::monomial(Monomial::power(n, 2))
            .project_mod_m(m)
            .is_zero());
        let rep: MVector<Rat> = MVector::monomial(Monomial::from_pairs([(m, -2), (n, 1)]));
        assert_eq!(rep.project_mod_m(m), rep);
    }

    #[test]
    fn formal_derivative_of_negative_power() {
        let m = g(1, 0);
        let v: MVector<Rat> = MVector::monomial(Monomial::power(m, -3));
        assert_eq!(
            v.partial(m),
            MVector::term(Monomial::power(m, -4), Rat::from(-3))
        );
    }

    #[test]
    fn display_is_sorted_and_signed() {
        let v: MVector<Rat> = MVector::term(Monomial::var(g(2, 2)), Rat::from(ratio(-3, 2))).add(
            &MVector::monomial(Monomial::from_pairs([(g(1, 0), 2), (g(0, -1), 1)])),
        );
        assert_eq!(v.to_string(), "x[0,-1]*x[1,0]^2 - 3/2*x[2,2]");
    }
}
