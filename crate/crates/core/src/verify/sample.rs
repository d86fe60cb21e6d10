//! Seeded random inputs for identity testing.
//!
//! Rational parameters have numerator and denominator drawn from `[-50, 50] \ {0}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Generator;
use crate::fock::{GridIndex, MVector, Monomial, SpaceKind};
use crate::scalar::{ParamEnv, Rat, Scalar};

pub type TrialRng = ChaCha8Rng;

const BOUND: i64 = 50;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(splitmix(
        splitmix(seed) ^ trial.wrapping_mul(0xA24B_AED4_963E_E407),
    ))
}

fn nonzero(rng: &mut TrialRng) -> i64 {
    loop {
        let v = rng.gen_range(-BOUND..=BOUND);
        if v != 0 {
            return v;
        }
    }
}

pub fn rational(rng: &mut TrialRng) -> BigRational {
    BigRational::new(BigInt::from(nonzero(rng)), BigInt::from(nonzero(rng)))
}

/// A random rational that is not an integer.
pub fn non_integer(rng: &mut TrialRng) -> BigRational {
    loop {
        let r = rational(rng);
        if !r.is_integer() {
            return r;
        }
    }
}

/// How parameters are drawn for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EnvPolicy {
    pub with_b: bool,
    pub mu_non_integer: bool,
    pub b_non_integer: bool,
}

pub fn env(rng: &mut TrialRng, policy: EnvPolicy) -> ParamEnv<Rat> {
    let q = rational(rng);
    let mu = if policy.mu_non_integer {
        non_integer(rng)
    } else {
        rational(rng)
    };
    let b = policy.with_b.then(|| {
        if policy.b_non_integer {
            non_integer(rng)
        } else {
            rational(rng)
        }
    });
    ParamEnv::rational(q, mu, b).expect("q is nonzero by construction")
}

pub fn index(rng: &mut TrialRng, window: i64) -> GridIndex {
    GridIndex::new(
        rng.gen_range(-window..=window),
        rng.gen_range(-window..=window),
    )
}

pub fn generator(rng: &mut TrialRng, window: i64) -> Generator {
    let n = index(rng, window);
    match rng.gen_range(0..6) {
        0 => Generator::E11(n),
        1 => Generator::E12(n),
        2 => Generator::E21(n),
        3 => Generator::E22(n),
        4 => Generator::D1,
        _ => Generator::D2,
    }
}

/// A generator of the given kind (0..6 in the order E11, E12, E21, E22, D1, D2).
pub fn generator_of_kind(rng: &mut TrialRng, kind: usize, window: i64) -> Generator {
    let n = index(rng, window);
    match kind % 6 {
        0 => Generator::E11(n),
        1 => Generator::E12(n),
        2 => Generator::E21(n),
        3 => Generator::E22(n),
        4 => Generator::D1,
        _ => Generator::D2,
    }
}

/// Shape limits for random vectors.
#[derive(Debug, Clone, Copy)]
pub struct VectorShape {
    pub window: i64,
    pub max_vars: usize,
    pub max_exp: i64,
    pub max_terms: usize,
    /// Range of the distinguished exponent in localized spaces.
    pub special_exp: (i64, i64),
}

impl Default for VectorShape {
    fn default() -> Self {
        VectorShape {
            window: 2,
            max_vars: 2,
            max_exp: 2,
            max_terms: 3,
            special_exp: (-3, 2),
        }
    }
}

/// A random monomial valid in `kind`, built from indices other than the distinguished one
/// plus (in localized kinds) a power of the distinguished variable.
pub fn monomial(rng: &mut TrialRng, kind: &SpaceKind, shape: &VectorShape) -> Monomial {
    let special = kind.distinguished();
    let nvars = rng.gen_range(0..=shape.max_vars);
    let mut pairs = Vec::new();
    for _ in 0..nvars {
        let n = index(rng, shape.window);
        if Some(n) == special {
            continue;
        }
        pairs.push((n, rng.gen_range(1..=shape.max_exp)));
    }
    if let Some(m) = special {
        pairs.push((m, rng.gen_range(shape.special_exp.0..=shape.special_exp.1)));
    }
    let mono = Monomial::from_pairs(pairs);
    if matches!(kind, SpaceKind::Quotient(m) if mono.exponent(*m) >= 0) {
        let m = special.expect("quotient has a distinguished index");
        return mono.shifted(&[(m, -mono.exponent(m) - 1)]);
    }
    mono
}

/// A random nonzero vector with small integer coefficients.
pub fn vector<F: Scalar>(rng: &mut TrialRng, kind: &SpaceKind, shape: &VectorShape) -> MVector<F> {
    loop {
        let terms = rng.gen_range(1..=shape.max_terms);
        let mut v = MVector::zero();
        for _ in 0..terms {
            let c = F::from_i64(*[-3, -2, -1, 1, 2, 3, 5].choose(rng).expect("nonempty"));
            v.add_term(monomial(rng, kind, shape), c);
        }
        if !v.is_zero() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_seeds_are_deterministic_and_distinct() {
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_vectors_are_valid() {
        let m = GridIndex::new(1, 0);
        for kind in [
            SpaceKind::Plain,
            SpaceKind::Localized(m),
            SpaceKind::Quotient(m),
        ] {
            for t in 0..50 {
                let mut rng = trial_rng(1, t);
                let v: MVector<Rat> = vector(&mut rng, &kind, &VectorShape::default());
                v.validate_in(&kind).unwrap();
                if let SpaceKind::Quotient(m) = kind {
                    assert_eq!(v.project_mod_m(m), v);
                }
            }
        }
    }

    #[test]
    fn non_integer_sampling() {
        let mut rng = trial_rng(0, 0);
        for _ in 0..100 {
            assert!(!non_integer(&mut rng).is_integer());
        }
    }
}
