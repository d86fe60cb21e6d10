//! Command dispatch.
//!
//! Every command produces a [`ProbeReport`] (the JSON form) and a human-readable text;
//! the exit code follows the report's verdict.

use std::str::FromStr;

use gl2q_core::action::{act_element, act_generator, weight_of, WeightValue};
use gl2q_core::algebra::Generator;
use gl2q_core::fock::{GridIndex, ModuleSpace, SpaceKind};
use gl2q_core::scalar::{ParamEnv, Rat, RatFunc, Scalar, Var};
use gl2q_core::verify::{
    cyclicity_run, identity_suites, nilpotency_probe, singular_vector, span_probe, ProbeReport,
    Suite, SuiteConfig, Verdict,
};
use thiserror::Error;

use crate::args::{Command, ParamArgs, SpaceArgs, SpaceName};
use crate::parse::{parse_scalar, parse_vector, parse_word, ParseError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("--{flag}: {source}")]
    Parse {
        flag: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] gl2q_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_USAGE
    }
}

/// Result of a successful run: the report and its human-readable rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ProbeReport,
    pub text: String,
}

impl Outcome {
    fn from_report(report: ProbeReport) -> Self {
        let text = report.to_string();
        Outcome { report, text }
    }

    pub fn exit_code(&self) -> u8 {
        match self.report.verdict {
            Verdict::Verified => EXIT_OK,
            Verdict::Counterexample => EXIT_COUNTEREXAMPLE,
            Verdict::InconclusiveBudget => EXIT_INCONCLUSIVE,
        }
    }

    /// The JSON report; wall-clock fields are dropped unless `timing` is set, so that
    /// identical commands produce identical bytes.
    pub fn json(&self, timing: bool) -> String {
        if timing {
            self.report.to_json()
        } else {
            self.report.clone().without_timing().to_json()
        }
    }
}

/// Parameters are exact rationals when every one given is a constant, and rational
/// functions of the symbols otherwise.
enum Backend {
    Exact(ParamEnv<Rat>),
    Symbolic(ParamEnv<RatFunc>),
}

macro_rules! with_backend {
    ($backend:expr, $env:ident => $body:expr) => {
        match $backend {
            Backend::Exact($env) => $body,
            Backend::Symbolic($env) => $body,
        }
    };
}

fn scalar_flag(flag: &'static str, text: Option<&str>, default: Var) -> Result<RatFunc, CliError> {
    match text {
        Some(t) => parse_scalar(t).map_err(|source| CliError::Parse { flag, source }),
        None => Ok(RatFunc::symbol(default)),
    }
}

fn backend(params: &ParamArgs, with_b: bool) -> Result<Backend, CliError> {
    let q = scalar_flag("q", params.q.as_deref(), Var::Q)?;
    let mu = scalar_flag("mu", params.mu.as_deref(), Var::Mu)?;
    let b = if with_b {
        Some(scalar_flag("b", params.b.as_deref(), Var::B)?)
    } else {
        None
    };
    let exact = (
        q.as_rational(),
        mu.as_rational(),
        b.as_ref().map(|b| b.as_rational()),
    );
    Ok(match exact {
        (Some(q), Some(mu), None) => Backend::Exact(ParamEnv::rational(q, mu, None)?),
        (Some(q), Some(mu), Some(Some(b))) => Backend::Exact(ParamEnv::rational(q, mu, Some(b))?),
        _ => Backend::Symbolic(ParamEnv::new(q, mu, b)?),
    })
}

fn space_kind(args: &SpaceArgs) -> Result<SpaceKind, CliError> {
    if args.params.b.is_some() && args.space != SpaceName::Twisted {
        return Err(CliError::Usage(
            "--b only applies to --space twisted".to_string(),
        ));
    }
    let m = || {
        args.m.ok_or_else(|| {
            CliError::Usage(format!("--space {:?} needs --m", args.space).to_lowercase())
        })
    };
    Ok(match args.space {
        SpaceName::Plain => SpaceKind::Plain,
        SpaceName::Localized => SpaceKind::Localized(m()?),
        SpaceName::Twisted => SpaceKind::Twisted(m()?),
        SpaceName::Quotient => SpaceKind::Quotient(m()?),
    })
}

fn describe_space<F: Scalar>(report: ProbeReport, space: &ModuleSpace<F>) -> ProbeReport {
    let mut report = report
        .param("space", space.kind.name())
        .param("q", space.env.q())
        .param("mu", space.env.mu());
    if let Some(m) = space.distinguished() {
        report = report.param("m", m);
    }
    if let Some(b) = space.env.b() {
        report = report.param("b", b);
    }
    report
}

fn vector_flag<F: Scalar>(
    flag: &'static str,
    text: &str,
    space: &ModuleSpace<F>,
) -> Result<gl2q_core::fock::MVector<F>, CliError> {
    parse_vector(text, space).map_err(|source| CliError::Parse { flag, source })
}

fn weight_text<F: Scalar>(w: &WeightValue<F>) -> String {
    format!(
        "e11(0) = {}, e22(0) = {}, d1 = {}, d2 = {}",
        w.e11, w.e22, w.d1, w.d2
    )
}

fn act<F: Scalar>(
    env: ParamEnv<F>,
    kind: SpaceKind,
    op: &str,
    vec: &str,
) -> Result<Outcome, CliError> {
    let space = ModuleSpace::new(kind, env)?;
    let u = parse_word(op, &space).map_err(|source| CliError::Parse { flag: "op", source })?;
    let v = vector_flag("vec", vec, &space)?;
    let image = act_element(&space, &u, &v)?;
    let report = describe_space(ProbeReport::new("act", Verdict::Verified), &space)
        .param("op", &u)
        .param("vector", &v)
        .param("result", &image);
    Ok(Outcome {
        report,
        text: image.to_string(),
    })
}

fn weights<F: Scalar>(env: ParamEnv<F>, kind: SpaceKind, vec: &str) -> Result<Outcome, CliError> {
    let space = ModuleSpace::new(kind, env)?;
    let v = vector_flag("vec", vec, &space)?;
    let w = weight_of(&space, &v)?;
    let report = describe_space(ProbeReport::new("weights", Verdict::Verified), &space)
        .param("vector", &v)
        .param("e11(0)", &w.e11)
        .param("e22(0)", &w.e22)
        .param("d1", &w.d1)
        .param("d2", &w.d2);
    Ok(Outcome {
        report,
        text: weight_text(&w),
    })
}

fn singular<F: Scalar>(
    env: ParamEnv<F>,
    mu: i64,
    m: GridIndex,
    n: GridIndex,
    d: i64,
) -> Result<Outcome, CliError> {
    let w = singular_vector(mu, m, n, d, &env)?;
    let space = ModuleSpace::localized(env.with_mu(F::from_i64(mu)), m);
    let image = act_generator(&space, Generator::E12(-m), &w)?;
    let weight = weight_of(&space, &w)?;
    let verdict = if image.is_zero() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    let report = describe_space(ProbeReport::new("singular", verdict), &space)
        .param("n", n)
        .param("d", d)
        .param("w", &w)
        .param("annihilator_image", &image)
        .param("weight", weight_text(&weight));
    let text = format!(
        "w = {w}\nweight: {}\nE12{} . w = {image}\nannihilation: {verdict}",
        weight_text(&weight),
        -m
    );
    Ok(Outcome { report, text })
}

fn integer_flag(flag: &'static str, text: &str) -> Result<i64, CliError> {
    let value = parse_scalar(text).map_err(|source| CliError::Parse { flag, source })?;
    value
        .as_integer()
        .and_then(|n| i64::try_from(n).ok())
        .ok_or_else(|| CliError::Usage(format!("--{flag} must be an integer, got `{text}`")))
}

fn generator_flag<F: Scalar>(text: &str, space: &ModuleSpace<F>) -> Result<Generator, CliError> {
    let u = parse_word(text, space).map_err(|source| CliError::Parse { flag: "op", source })?;
    match u.as_generator_combination().as_deref() {
        Some([(g, c)]) if c.is_one() => Ok(*g),
        _ => Err(CliError::Usage(format!(
            "--op must be a single generator, got `{u}`"
        ))),
    }
}

/// Runs a parsed command.
pub fn run_command(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Act { space, op, vec, .. } => {
            let kind = space_kind(space)?;
            let backend = backend(&space.params, matches!(kind, SpaceKind::Twisted(_)))?;
            with_backend!(backend, env => act(env, kind, op, vec))
        }
        Command::Weights { space, vec, .. } => {
            let kind = space_kind(space)?;
            let backend = backend(&space.params, matches!(kind, SpaceKind::Twisted(_)))?;
            with_backend!(backend, env => weights(env, kind, vec))
        }
        Command::Singular { mu, q, m, n, d, .. } => {
            let mu_value = integer_flag("mu", mu)?;
            let params = ParamArgs {
                q: q.clone(),
                mu: Some(mu.clone()),
                b: None,
            };
            with_backend!(backend(&params, false)?, env => singular(env, mu_value, *m, *n, *d))
        }
        Command::Reduce {
            params,
            m,
            vec,
            budget,
            ..
        } => {
            if params.b.is_some() {
                return Err(CliError::Usage("--b does not apply to reduce".to_string()));
            }
            with_backend!(backend(params, false)?, env => {
                let space = ModuleSpace::quotient(env.clone(), *m);
                let v = vector_flag("vec", vec, &space)?;
                Ok(Outcome::from_report(cyclicity_run(&v, &env, *m, *budget)?))
            })
        }
        Command::ProbeSpan {
            space,
            vec,
            target,
            window,
            degree_cap,
            budget,
            ..
        } => {
            let kind = space_kind(space)?;
            let backend = backend(&space.params, matches!(kind, SpaceKind::Twisted(_)))?;
            with_backend!(backend, env => {
                let space = ModuleSpace::new(kind, env)?;
                let seed = vector_flag("vec", vec, &space)?;
                let target = vector_flag("target", target, &space)?;
                let probe = span_probe(&seed, &space, *window, *degree_cap, &target, *budget)?;
                Ok(Outcome::from_report(probe.report))
            })
        }
        Command::ProbeNilp {
            space,
            op,
            vec,
            budget,
            ..
        } => {
            let kind = space_kind(space)?;
            let backend = backend(&space.params, matches!(kind, SpaceKind::Twisted(_)))?;
            with_backend!(backend, env => {
                let space = ModuleSpace::new(kind, env)?;
                let g = generator_flag(op, &space)?;
                let v = vector_flag("vec", vec, &space)?;
                Ok(Outcome::from_report(nilpotency_probe(&space, g, &v, *budget)?))
            })
        }
        Command::Verify {
            suite,
            trials,
            seed,
            points,
            ..
        } => {
            let suite = Suite::from_str(suite)?;
            let config = SuiteConfig {
                trials: *trials,
                seed: *seed,
                points: *points,
                ..SuiteConfig::default()
            };
            Ok(Outcome::from_report(identity_suites(suite, &config)))
        }
    }
}
