use std::time::Instant;

use crate::action::{act_element, act_generator};
use crate::algebra::{AlgElement, Atom, Generator, Word};
use crate::error::Result;
use crate::fock::{GridIndex, MVector, ModuleSpace, Monomial};
use crate::scalar::{ParamEnv, Scalar};

use super::report::{ProbeReport, Verdict, Witness};

/// `(-1)^i q^{-i m1 m2} j(j+1)...(j+i-1) (mu+j+1)(mu+j+2)...(mu+j+i)`, the coefficient of
/// `x[m]^{-j-i}` in `e12(-m)^i x[m]^{-j}` in the quotient by the polynomial module.
pub fn quotient_ladder_coefficient<F: Scalar>(
    env: &ParamEnv<F>,
    m: GridIndex,
    j: i64,
    i: i64,
) -> F {
    let mut c = env.q_power(-i * m.m1 * m.m2);
    if i % 2 == 1 {
        c = -c;
    }
    for t in 0..i {
        c = c * F::from_i64(j + t) * (env.mu().clone() + F::from_i64(j + 1 + t));
    }
    c
}

/// Compares `e12(-m)^i x[m]^{-j}` with the closed form for `i = 1..=i_max` and
/// `j = 1..=i_max`; `j = 1` is the generator ladder on `x[m]^{-1}`.
pub fn quotient_generator_ladder<F: Scalar>(
    env: &ParamEnv<F>,
    m: GridIndex,
    i_max: i64,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let space = ModuleSpace::quotient(env.clone(), m);
    let g = Generator::E12(-m);
    let mut report = ProbeReport::new("quotient-ladder", Verdict::Verified)
        .param("m", m)
        .param("mu", env.mu())
        .param("q", env.q())
        .param("i_max", i_max);
    let mut checks = 0;
    'outer: for j in 1..=i_max.max(1) {
        let mut v = MVector::monomial(Monomial::power(m, -j));
        for i in 1..=i_max {
            v = act_generator(&space, g, &v)?;
            checks += 1;
            let c = quotient_ladder_coefficient(env, m, j, i);
            let expected = MVector::term(Monomial::power(m, -j - i), c.clone());
            if v != expected {
                report.verdict = Verdict::Counterexample;
                report.witness = Some(Witness {
                    inputs: format!("{g}^{i} . x{m}^{}", -j),
                    expected: expected.to_string(),
                    got: v.to_string(),
                });
                break 'outer;
            }
            if c.is_zero() {
                report
                    .notes
                    .push(format!("coefficient vanishes at j = {j}, i = {i}"));
                break;
            }
        }
    }
    report.trials = checks;
    Ok(report.timed(start))
}

/// `B_k = (k + b - p)(2d - b - mu - 1 - k - p) q^{-m1 m2}`.
pub fn ladder_b<F: Scalar>(env: &ParamEnv<F>, m: GridIndex, d: i64, p: i64, k: i64) -> Result<F> {
    let b = env.require_b()?.clone();
    let mu = env.mu().clone();
    Ok((F::from_i64(k - p) + b.clone())
        * (F::from_i64(2 * d - 1 - k - p) - b - mu)
        * env.q_power(-m.m1 * m.m2))
}

struct Checker {
    report: ProbeReport,
    checks: u64,
}

impl Checker {
    fn check<F: Scalar>(
        &mut self,
        what: impl FnOnce() -> String,
        expected: &MVector<F>,
        got: &MVector<F>,
    ) -> bool {
        self.checks += 1;
        if expected == got {
            return true;
        }
        if self.report.witness.is_none() {
            self.report.verdict = Verdict::Counterexample;
            self.report.witness = Some(Witness {
                inputs: what(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
        false
    }
}

/// Twisted-module checks at one parameter point:
///
/// - the commutator `e21(m)^{-1} e12(-m) - e12(-m) e21(m)^{-1}
///   = q^{-m1 m2} e21(m)^{-1} (e11(0) - e22(0)) e21(m)^{-1}` on vectors `x[m]^j x[n]^e`;
/// - with `w = x[m]^d` and `p = d`: `e12(-m) e21(m)^{-k} w = B_k e21(m)^{-k-1} w`,
///   the product formula for `e12(-m)^k w`, and `B_k = B_0 - q^{-m1 m2} k (mu - 2d + 2b + k + 1)`,
///   for `k = 0..=k_max`.
///
/// When `b + mu` is not an integer, the factor `2d - b - mu - 1 - k - p` of every `B_k` is
/// checked to be nonzero; vanishing of the other factor (integer `b`) is recorded as a note.
pub fn twisted_ladder_check<F: Scalar>(
    env: &ParamEnv<F>,
    m: GridIndex,
    d: i64,
    k_max: i64,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let b = env.require_b()?.clone();
    let space = ModuleSpace::twisted(env.clone(), m)?;
    let qm = env.q_power(-m.m1 * m.m2);
    let inv = Atom::InvE21(m);
    let e12 = Atom::Gen(Generator::E12(-m));
    let mut checker = Checker {
        report: ProbeReport::new("twisted-ladder", Verdict::Verified)
            .param("m", m)
            .param("d", d)
            .param("k_max", k_max)
            .param("q", env.q())
            .param("mu", env.mu())
            .param("b", &b),
        checks: 0,
    };

    let mut lhs = AlgElement::word(Word::new([inv, e12]));
    lhs.add_term(Word::new([e12, inv]), -F::one());
    let mut rhs = AlgElement::term(
        Word::new([inv, Atom::Gen(Generator::E11(GridIndex::ZERO)), inv]),
        qm.clone(),
    );
    rhs.add_term(
        Word::new([inv, Atom::Gen(Generator::E22(GridIndex::ZERO)), inv]),
        -qm.clone(),
    );
    let n = if m.m1 == 0 && m.m2 == 1 {
        GridIndex::new(1, 0)
    } else {
        GridIndex::new(0, 1)
    };
    for j in -2..=2 {
        for e in 0..=2 {
            let v = MVector::monomial(Monomial::from_pairs([(m, j), (n, e)]));
            let got = act_element(&space, &lhs, &v)?;
            let want = act_element(&space, &rhs, &v)?;
            checker.check(|| format!("commutator on {v}"), &want, &got);
        }
    }

    let p = d;
    let b0 = ladder_b(env, m, d, p, 0)?;
    let mut product = F::one();
    let w = MVector::monomial(Monomial::power(m, d));
    let mut power = w;
    for k in 0..=k_max {
        let bk = ladder_b(env, m, d, p, k)?;
        let alternate = b0.clone()
            - qm.clone()
                * F::from_i64(k)
                * (env.mu().clone() + b.clone() * F::from_i64(2) + F::from_i64(k + 1 - 2 * d));
        checker.check(
            || format!("B_{k} against B_0 - q^(-m1 m2) k (mu - 2d + 2b + k + 1)"),
            &MVector::term(Monomial::one(), alternate),
            &MVector::term(Monomial::one(), bk.clone()),
        );

        let lowered = MVector::monomial(Monomial::power(m, d - k));
        let got = act_generator(&space, Generator::E12(-m), &lowered)?;
        let want = MVector::term(Monomial::power(m, d - k - 1), bk.clone());
        checker.check(|| format!("E12{} . x{m}^{}", -m, d - k), &want, &got);

        let want = MVector::term(Monomial::power(m, d - k), product.clone());
        checker.check(|| format!("E12{}^{k} . x{m}^{d}", -m), &want, &power);
        power = act_generator(&space, Generator::E12(-m), &power)?;
        product = product * bk.clone();

        let second = F::from_i64(2 * d - 1 - k - p) - b.clone() - env.mu().clone();
        if second.is_zero() {
            let generic = !(b.clone() + env.mu().clone()).is_integer();
            if generic {
                checker.check(
                    || format!("B_{k} second factor at b + mu not an integer"),
                    &MVector::<F>::one(),
                    &MVector::zero(),
                );
            }
        } else if bk.is_zero() {
            checker.report.notes.push(format!(
                "B_{k} vanishes through its first factor (b = {})",
                b
            ));
        }
    }
    // the product formula one step past k_max
    let want = MVector::term(Monomial::power(m, d - k_max - 1), product);
    checker.check(
        || format!("E12{}^{} . x{m}^{d}", -m, k_max + 1),
        &want,
        &power,
    );

    let mut report = checker.report;
    report.trials = checker.checks;
    Ok(report.timed(start))
}
