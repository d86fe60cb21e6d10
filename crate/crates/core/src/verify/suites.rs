use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::action::{act_element, act_generator, act_untwisted, apply_e, apply_e_power};
use crate::algebra::{bracket, bracket_with, theta_closed, theta_series, AlgElement, Generator};
use crate::error::Error;
use crate::fock::{GridIndex, MVector, ModuleSpace, Monomial, SpaceKind};
use crate::scalar::{ParamEnv, Rat, Scalar};

use super::report::{ProbeReport, Verdict, Witness};
use super::sample::{self, EnvPolicy, TrialRng, VectorShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Bracket,
    Theta,
    Lemmas,
    Homomorphism,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 4] = [
        Suite::Bracket,
        Suite::Theta,
        Suite::Lemmas,
        Suite::Homomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bracket => "bracket",
            Suite::Theta => "theta",
            Suite::Lemmas => "lemmas",
            Suite::Homomorphism => "homomorphism",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Suite::All]
            .into_iter()
            .chain(Suite::INDIVIDUAL)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown suite `{s}` (expected bracket, theta, lemmas, homomorphism or all)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub trials: u64,
    pub seed: u64,
    /// Random vectors checked per parameter point.
    pub vectors_per_trial: usize,
    /// Independent parameter points per trial.
    pub points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 100,
            seed: 0,
            vectors_per_trial: 2,
            points: 3,
        }
    }
}

type Trial = std::result::Result<(), Witness>;

fn env_text(env: &ParamEnv<Rat>) -> String {
    match env.b() {
        Some(b) => format!("q={}, mu={}, b={}", env.q(), env.mu(), b),
        None => format!("q={}, mu={}", env.q(), env.mu()),
    }
}

fn engine_failure(inputs: String, err: Error) -> Witness {
    Witness {
        inputs,
        expected: "a value".into(),
        got: format!("error: {err}"),
    }
}

fn compare<T: PartialEq + fmt::Display>(
    inputs: impl FnOnce() -> String,
    expected: &T,
    got: &T,
) -> Trial {
    if expected == got {
        Ok(())
    } else {
        Err(Witness {
            inputs: inputs(),
            expected: expected.to_string(),
            got: got.to_string(),
        })
    }
}

fn nonzero_index(rng: &mut TrialRng, window: i64) -> GridIndex {
    loop {
        let m = sample::index(rng, window);
        if m != GridIndex::ZERO {
            return m;
        }
    }
}

/// A monomial free of `x[m]` with total degree at most `max_degree`.
fn free_monomial(rng: &mut TrialRng, m: GridIndex, window: i64, max_degree: i64) -> Monomial {
    let mut pairs = Vec::new();
    let mut budget = rng.gen_range(0..=max_degree);
    while budget > 0 {
        let n = sample::index(rng, window);
        if n == m {
            continue;
        }
        let k = rng.gen_range(1..=budget);
        pairs.push((n, k));
        budget -= k;
    }
    Monomial::from_pairs(pairs)
}

fn homomorphism_trial(config: &SuiteConfig, trial: u64) -> Trial {
    let mut rng = sample::trial_rng(config.seed, trial);
    let shape = VectorShape::default();
    for point in 0..config.points {
        let m = nonzero_index(&mut rng, 1);
        let kind = match trial % 3 {
            0 => SpaceKind::Plain,
            1 => SpaceKind::Localized(m),
            _ => SpaceKind::Twisted(m),
        };
        let policy = EnvPolicy {
            with_b: matches!(kind, SpaceKind::Twisted(_)),
            ..EnvPolicy::default()
        };
        let env = sample::env(&mut rng, policy);
        let x = sample::generator(&mut rng, shape.window);
        let y = sample::generator(&mut rng, shape.window);
        let xy = bracket(x, y, &env);
        let space = ModuleSpace::new(kind, env.clone()).expect("sampled parameters are complete");
        for _ in 0..config.vectors_per_trial {
            let v: MVector<Rat> = sample::vector(&mut rng, &kind, &shape);
            let inputs = || {
                format!(
                    "trial {trial} point {point}: [{x}, {y}] on {v} in {} ({})",
                    kind.name(),
                    env_text(&env)
                )
            };
            let run = || -> crate::Result<(MVector<Rat>, MVector<Rat>)> {
                let xy_v = act_generator(&space, x, &act_generator(&space, y, &v)?)?;
                let yx_v = act_generator(&space, y, &act_generator(&space, x, &v)?)?;
                Ok((act_element(&space, &xy, &v)?, xy_v.sub(&yx_v)))
            };
            let (expected, got) = run().map_err(|e| engine_failure(inputs(), e))?;
            compare(inputs, &expected, &got)?;
        }
    }
    Ok(())
}

fn bracket_trial(config: &SuiteConfig, trial: u64) -> Trial {
    let mut rng = sample::trial_rng(config.seed, trial);
    for point in 0..config.points {
        let env = sample::env(&mut rng, EnvPolicy::default());
        let x = sample::generator(&mut rng, 2);
        let y = sample::generator(&mut rng, 2);
        let z = sample::generator(&mut rng, 2);
        let at = |what: &'static str| {
            let env = env_text(&env);
            move || format!("trial {trial} point {point}: {what} for {x}, {y}, {z} ({env})")
        };
        let sum = bracket(x, y, &env).add(&bracket(y, x, &env));
        compare(at("antisymmetry"), &AlgElement::zero(), &sum)?;
        let jacobi = [(x, y, z), (y, z, x), (z, x, y)]
            .into_iter()
            .map(|(a, b, c)| {
                bracket_with(a, &bracket(b, c, &env), &env).expect("brackets are linear")
            })
            .fold(AlgElement::zero(), |acc, t| acc.add(&t));
        compare(at("Jacobi identity"), &AlgElement::zero(), &jacobi)?;
    }
    Ok(())
}

fn theta_trial(config: &SuiteConfig, trial: u64) -> Trial {
    let mut rng = sample::trial_rng(config.seed, trial);
    let kind_index = (trial % 6) as usize;
    let k = ((trial / 6) % 7) as i64 - 3;
    for point in 0..config.points {
        let m = nonzero_index(&mut rng, 1);
        let env = sample::env(
            &mut rng,
            EnvPolicy {
                with_b: true,
                ..EnvPolicy::default()
            },
        );
        let g = sample::generator_of_kind(&mut rng, kind_index, 2);
        let b = env.b().expect("sampled with b").clone();
        let localized = ModuleSpace::localized(env.clone(), m);
        let env_k = env.with_b(Some(Rat::from_i64(k)));
        let twisted_k = ModuleSpace::twisted(env_k.clone(), m).expect("b is set");
        let shape = VectorShape::default();
        let series = theta_series(&AlgElement::gen(g), &b, m, &env)
            .map_err(|e| engine_failure(format!("trial {trial}: Theta series of {g}"), e))?;
        let closed = theta_closed(g, &b, m, &env);
        for _ in 0..config.vectors_per_trial {
            let v: MVector<Rat> = sample::vector(&mut rng, &SpaceKind::Localized(m), &shape);
            let inputs = |what: &str| {
                let env = env_text(&env);
                let what = what.to_string();
                let v = v.to_string();
                move || format!("trial {trial} point {point}: {what} of {g}, m={m}, on {v} ({env})")
            };
            let pair = act_element(&localized, &closed, &v)
                .and_then(|c| Ok((c, act_element(&localized, &series, &v)?)))
                .map_err(|e| engine_failure(inputs("closed form vs series")(), e))?;
            compare(inputs("closed form vs series"), &pair.1, &pair.0)?;

            // Theta_k is conjugation by e21(m)^k
            let got = act_generator(&twisted_k, g, &v)
                .map_err(|e| engine_failure(inputs("integer twist")(), e))?;
            let inner = v.mono_mul(&Monomial::power(m, -k));
            let expected = act_untwisted(&env_k, g, &inner).mono_mul(&Monomial::power(m, k));
            compare(inputs(&format!("conjugation by x{m}^{k}")), &expected, &got)?;
        }
    }
    Ok(())
}

fn lemmas_trial(config: &SuiteConfig, trial: u64) -> Trial {
    let mut rng = sample::trial_rng(config.seed, trial);
    for point in 0..config.points {
        let env = sample::env(&mut rng, EnvPolicy::default());
        let m = nonzero_index(&mut rng, 3);
        let v0 = free_monomial(&mut rng, m, 3, 5);
        let i: i64 = rng.gen_range(1..=4);
        let d = v0.total_degree();
        let qm = env.q_power(-m.m1 * m.m2);
        let space = ModuleSpace::localized(env.clone(), m);
        let at = |what: &'static str| {
            let env = env_text(&env);
            let v0 = v0.to_string();
            move || format!("trial {trial} point {point}: {what}, m={m}, i={i}, v0={v0} ({env})")
        };
        let base: MVector<Rat> = MVector::monomial(v0.clone());
        let lowered = base.mono_mul(&Monomial::power(m, -i));
        let image = act_generator(&space, Generator::E12(-m), &lowered)
            .map_err(|e| engine_failure(at("item (1)")(), e))?;

        let mut expected = apply_e(m, &base, &env)
            .mono_mul(&Monomial::power(m, -i))
            .neg();
        let c = (Rat::from_i64(2 * d - i - 1) - env.mu().clone()) * Rat::from_i64(i) * qm.clone();
        expected.add_scaled(&base.mono_mul(&Monomial::power(m, -i - 1)), &c);
        compare(at("item (1)"), &expected, &image)?;

        let lone: MVector<Rat> = MVector::monomial(Monomial::power(m, -i));
        let c = (-env.mu().clone() - Rat::from_i64(i + 1)) * Rat::from_i64(i) * qm.clone();
        let expected = MVector::term(Monomial::power(m, -i - 1), c);
        let got = act_generator(&space, Generator::E12(-m), &lone)
            .map_err(|e| engine_failure(at("item (2)")(), e))?;
        compare(at("item (2)"), &expected, &got)?;

        let vanished = apply_e_power(m, (d + 1) as usize, &base, &env);
        compare(at("item (3)"), &MVector::zero(), &vanished)?;

        let mut split = lowered.partial(m).scale(&(qm.clone() * env.mu().clone()));
        split = split.sub(&apply_e(m, &lowered, &env));
        compare(at("e12(-m) = q^(-m1 m2) mu d/dx[m] - E_m"), &split, &image)?;
    }
    Ok(())
}

fn run_suite(suite: Suite, config: &SuiteConfig) -> ProbeReport {
    let start = Instant::now();
    let trial: fn(&SuiteConfig, u64) -> Trial = match suite {
        Suite::Bracket => bracket_trial,
        Suite::Theta => theta_trial,
        Suite::Lemmas => lemmas_trial,
        Suite::Homomorphism => homomorphism_trial,
        Suite::All => unreachable!("expanded by the caller"),
    };
    let outcomes: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|i| trial(config, i))
        .collect();
    let failure = outcomes
        .into_iter()
        .enumerate()
        .find_map(|(i, r)| r.err().map(|w| (i, w)));
    let verdict = if failure.is_some() {
        Verdict::Counterexample
    } else {
        Verdict::Verified
    };
    let mut report = ProbeReport::new(suite.name(), verdict)
        .trials(config.trials)
        .seed(config.seed)
        .param("points", config.points)
        .param("vectors_per_trial", config.vectors_per_trial);
    if let Some((i, witness)) = failure {
        report = report.param("failing_trial", i);
        report.witness = Some(witness);
    }
    report.timed(start)
}

/// Runs the randomized identity batteries. Trial `i` draws everything from a sub-seed of
/// `(seed, i)`, and the reported witness is the failing trial with the smallest index.
pub fn identity_suites(suite: Suite, config: &SuiteConfig) -> ProbeReport {
    if suite != Suite::All {
        return run_suite(suite, config);
    }
    let start = Instant::now();
    let parts: Vec<ProbeReport> = Suite::INDIVIDUAL
        .into_iter()
        .map(|s| run_suite(s, config))
        .collect();
    let verdict = parts
        .iter()
        .fold(Verdict::Verified, |acc, p| acc.worst(p.verdict));
    let mut report = ProbeReport::new(Suite::All.name(), verdict)
        .trials(config.trials)
        .seed(config.seed)
        .param("points", config.points)
        .param("vectors_per_trial", config.vectors_per_trial);
    report.parts = parts;
    report.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: u64) -> SuiteConfig {
        SuiteConfig {
            trials,
            seed: 11,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suites_pass() {
        for suite in Suite::INDIVIDUAL {
            let r = identity_suites(suite, &config(30));
            assert!(r.is_verified(), "{r}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = identity_suites(Suite::All, &config(12)).without_timing();
        let b = identity_suites(Suite::All, &config(12)).without_timing();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.parts.len(), 4);
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::INDIVIDUAL.into_iter().chain([Suite::All]) {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
