use std::collections::BTreeMap;
use std::time::Instant;

use crate::action::act_generator;
use crate::algebra::Generator;
use crate::error::{Error, Result};
use crate::fock::{GridIndex, MVector, ModuleSpace, Monomial};
use crate::scalar::{ParamEnv, Scalar};

use super::report::{ProbeReport, Verdict};

/// Checks that `v = x[m]^{-1} f` with `f` free of `x[m]` and homogeneous; returns `deg f`.
fn inverse_shape<F: Scalar>(v: &MVector<F>, m: GridIndex) -> Result<i64> {
    if v.is_zero() {
        return Err(Error::Shape("the vector is zero".into()));
    }
    let mut degree = None;
    for mono in v.monomials() {
        if mono.exponent(m) != -1 {
            return Err(Error::Shape(format!(
                "monomial {mono} does not have x{m}-exponent -1"
            )));
        }
        let d = mono.total_degree() + 1;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(Error::Shape(format!(
                    "x{m}^-1 * f with f not homogeneous (degrees {e} and {d})"
                )))
            }
            Some(_) => {}
        }
    }
    Ok(degree.expect("nonzero vector"))
}

/// The index of a variable other than `x[m]` with the largest exponent in `v`;
/// ties go to the lexicographically smallest index.
fn leading_variable<F: Scalar>(v: &MVector<F>, m: GridIndex) -> Option<(GridIndex, i64)> {
    let mut best: Option<(GridIndex, i64)> = None;
    for mono in v.monomials() {
        for (n, k) in mono.iter() {
            if n == m {
                continue;
            }
            let better = match best {
                None => true,
                Some((bn, bk)) => k > bk || (k == bk && n < bn),
            };
            if better {
                best = Some((n, k));
            }
        }
    }
    best
}

fn require_non_integer_mu<F: Scalar>(env: &ParamEnv<F>) -> Result<()> {
    if env.mu().is_integer() {
        return Err(Error::Criterion(format!(
            "degree reduction needs a non-integer mu, got {}",
            env.mu()
        )));
    }
    Ok(())
}

/// One degree-lowering step in the quotient by the polynomial module.
///
/// For `v = x[m]^{-1} f` with `f` homogeneous of degree `d >= 1`, applies
/// `(e12(-m) e21(m) + B)(e12(-m) e21(m) + A) e12(-n1)` where `x[n1]` has the largest
/// exponent in `f`, `A = -2(2d - mu - 1) q^{-m1 m2}` and `B = -(2d - mu - 2) q^{-m1 m2}`.
/// The result is `x[m]^{-1} f1` with `f1` nonzero and homogeneous of degree `d - 1`.
pub fn reduce_step<F: Scalar>(
    v: &MVector<F>,
    env: &ParamEnv<F>,
    m: GridIndex,
) -> Result<(MVector<F>, GridIndex)> {
    require_non_integer_mu(env)?;
    let d = inverse_shape(v, m)?;
    if d < 1 {
        return Err(Error::Shape(format!(
            "x{m}^-1 * f needs deg f >= 1, got {d}"
        )));
    }
    let (n1, _) = leading_variable(v, m).expect("positive degree has a variable");
    let space = ModuleSpace::quotient(env.clone(), m);
    let qm = env.q_power(-m.m1 * m.m2);
    let twice = F::from_i64(2 * d);
    let a = -(F::from_i64(2) * (twice.clone() - env.mu().clone() - F::one())) * qm.clone();
    let b = -(twice - env.mu().clone() - F::from_i64(2)) * qm;

    let lift = |x: &MVector<F>, c: &F| -> Result<MVector<F>> {
        let raised = act_generator(&space, Generator::E21(m), x)?;
        let mut out = act_generator(&space, Generator::E12(-m), &raised)?;
        out.add_scaled(x, c);
        Ok(out)
    };
    let u1 = act_generator(&space, Generator::E12(-n1), v)?;
    let u2 = lift(&u1, &a)?;
    let u3 = lift(&u2, &b)?;

    let d1 = inverse_shape(&u3, m)
        .map_err(|e| Error::Shape(format!("reduction step from {v} produced {u3}: {e}")))?;
    if d1 != d - 1 {
        return Err(Error::Shape(format!(
            "reduction step from degree {d} landed in degree {d1}"
        )));
    }
    Ok((u3, n1))
}

/// The chain for one homogeneous component of the prepared vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRun<F> {
    /// Degree of `f` in `x[m]^{-1} f`.
    pub degree: i64,
    pub steps: usize,
    pub reached: bool,
    pub chain: Vec<String>,
    pub last: MVector<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicityOutcome<F> {
    /// Power of `e21(m)` applied to bring the lowest `x[m]`-exponent to `-1`.
    pub raise: i64,
    pub prepared: MVector<F>,
    pub components: Vec<ComponentRun<F>>,
}

impl<F> CyclicityOutcome<F> {
    pub fn reached(&self) -> bool {
        self.components.iter().all(|c| c.reached)
    }
}

/// Prepares `v` and runs [`reduce_step`] on each homogeneous component until it is a
/// multiple of `x[m]^{-1}` or `max_steps` steps have been spent on it.
///
/// Preparation multiplies by `x[m]^{k}` (the action of `e21(m)^k`) so that the lowest
/// `x[m]`-exponent becomes `-1`; all other terms vanish in the quotient. The components
/// are `e22(0)`-eigenvectors with distinct eigenvalues, so each lies in the submodule
/// generated by the prepared vector.
pub fn cyclicity_chain<F: Scalar>(
    v: &MVector<F>,
    env: &ParamEnv<F>,
    m: GridIndex,
    max_steps: usize,
) -> Result<CyclicityOutcome<F>> {
    require_non_integer_mu(env)?;
    let space = ModuleSpace::quotient(env.clone(), m);
    let v = space.canonical(v.clone())?;
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let lowest = v.min_exponent(m)?;
    let raise = -1 - lowest;
    let prepared = v.mono_mul(&Monomial::power(m, raise)).project_mod_m(m);

    let mut components = Vec::new();
    for (_, part) in prepared.homogeneous_components() {
        let degree = inverse_shape(&part, m)?;
        let mut chain = vec![format!("start: {part}")];
        let mut current = part;
        let mut steps = 0;
        while steps < max_steps && inverse_shape(&current, m)? > 0 {
            let (next, n1) = reduce_step(&current, env, m)?;
            steps += 1;
            chain.push(format!("step {steps} via E12{}: {next}", -n1));
            current = next;
        }
        components.push(ComponentRun {
            degree,
            steps,
            reached: inverse_shape(&current, m)? == 0,
            chain,
            last: current,
        });
    }
    Ok(CyclicityOutcome {
        raise,
        prepared,
        components,
    })
}

/// [`cyclicity_chain`] as a report: `verified` when every component reaches a nonzero
/// multiple of `x[m]^{-1}`, `inconclusive-budget` when the step budget runs out.
pub fn cyclicity_run<F: Scalar>(
    v: &MVector<F>,
    env: &ParamEnv<F>,
    m: GridIndex,
    max_steps: usize,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let outcome = cyclicity_chain(v, env, m, max_steps)?;
    let verdict = if outcome.reached() {
        Verdict::Verified
    } else {
        Verdict::InconclusiveBudget
    };
    let mut chain = Vec::new();
    if outcome.raise != 0 {
        chain.push(format!(
            "apply E21{m}^{}: {}",
            outcome.raise, outcome.prepared
        ));
    }
    let mut steps = BTreeMap::new();
    for c in &outcome.components {
        steps.insert(c.degree, c.steps);
        chain.extend(c.chain.iter().map(|s| format!("[degree {}] {s}", c.degree)));
    }
    let mut report = ProbeReport::new("cyclicity", verdict)
        .param("m", m)
        .param("mu", env.mu())
        .param("q", env.q())
        .param("max_steps", max_steps)
        .param("vector", v);
    for (degree, n) in steps {
        report = report.param(&format!("steps[degree {degree}]"), n);
    }
    report.chain = Some(chain);
    Ok(report.timed(start))
}
