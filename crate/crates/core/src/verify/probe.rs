use std::time::Instant;

use crate::action::act_generator;
use crate::algebra::Generator;
use crate::error::Result;
use crate::fock::{MVector, ModuleSpace};
use crate::scalar::Scalar;

use super::report::{ProbeReport, Verdict};

/// Vectors longer than this are summarized rather than printed in the chain.
const PRINT_LIMIT: usize = 12;

fn describe<F: Scalar>(v: &MVector<F>) -> String {
    if v.len() <= PRINT_LIMIT {
        return v.to_string();
    }
    let degrees: Vec<String> = v
        .homogeneous_components()
        .into_iter()
        .map(|(d, part)| format!("{}@{d}", part.len()))
        .collect();
    format!("{} terms (terms@degree: {})", v.len(), degrees.join(", "))
}

/// Applies `g` to `v` until the result vanishes or `max_iter` applications are spent.
///
/// `verified` carries the minimal `k` with `g^k . v = 0` in the `nilpotent_at` parameter;
/// `inconclusive-budget` means every iterate up to `max_iter` is nonzero, which on a simple
/// module is evidence that `g` acts without torsion.
pub fn nilpotency_probe<F: Scalar>(
    space: &ModuleSpace<F>,
    g: Generator,
    v: &MVector<F>,
    max_iter: usize,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let mut current = space.canonical(v.clone())?;
    let mut chain = vec![format!("{g}^0 . v = {}", describe(&current))];
    let mut killed_at = current.is_zero().then_some(0);
    let mut k = 0;
    while killed_at.is_none() && k < max_iter {
        current = act_generator(space, g, &current)?;
        k += 1;
        chain.push(format!("{g}^{k} . v = {}", describe(&current)));
        if current.is_zero() {
            killed_at = Some(k);
        }
    }
    let verdict = if killed_at.is_some() {
        Verdict::Verified
    } else {
        Verdict::InconclusiveBudget
    };
    let mut report = ProbeReport::new("nilpotency", verdict)
        .param("space", space.kind.name())
        .param("generator", g)
        .param("vector", v)
        .param("max_iter", max_iter)
        .param("q", space.env.q())
        .param("mu", space.env.mu());
    if let Some(m) = space.distinguished() {
        report = report.param("m", m);
    }
    if let Some(b) = space.env.b() {
        report = report.param("b", b);
    }
    report.trials = k as u64;
    match killed_at {
        Some(k) => report = report.param("nilpotent_at", k),
        None => report.notes.push(format!(
            "survives {max_iter} applications: {}",
            describe(&current)
        )),
    }
    report.chain = Some(chain);
    Ok(report.timed(start))
}
