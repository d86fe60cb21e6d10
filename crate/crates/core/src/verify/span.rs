use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use crate::action::act_generator;
use crate::algebra::Generator;
use crate::error::{Error, Result};
use crate::fock::{GridIndex, MVector, ModuleSpace, Monomial};
use crate::scalar::Scalar;

use super::report::{ProbeReport, Verdict};

/// A fully row-reduced basis of a finite-dimensional subspace.
///
/// Each row is keyed by its pivot, its largest monomial. Every row has coefficient 1 at its
/// own pivot and 0 at every other pivot, so reducing a vector takes a single pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis<F> {
    rows: BTreeMap<Monomial, MVector<F>>,
}

impl<F: Scalar> Default for SpanBasis<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> SpanBasis<F> {
    pub fn new() -> Self {
        SpanBasis {
            rows: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Monomial, &MVector<F>)> {
        self.rows.iter()
    }

    /// The remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &MVector<F>) -> MVector<F> {
        let hits: Vec<(Monomial, F)> = v
            .iter()
            .filter(|(mono, _)| self.rows.contains_key(*mono))
            .map(|(mono, c)| (mono.clone(), c.clone()))
            .collect();
        let mut out = v.clone();
        for (pivot, c) in hits {
            out.add_scaled(&self.rows[&pivot], &-c);
        }
        out
    }

    pub fn contains(&self, v: &MVector<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns the new normalized row, or `None` if `v` was already
    /// in the span.
    pub fn insert(&mut self, v: &MVector<F>) -> Result<Option<MVector<F>>> {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back() else {
            return Ok(None);
        };
        let pivot = pivot.clone();
        let row = r.scale(&lead.inv()?);
        for existing in self.rows.values_mut() {
            let c = existing.coefficient(&pivot);
            if !c.is_zero() {
                existing.add_scaled(&row, &-c);
            }
        }
        self.rows.insert(pivot, row.clone());
        Ok(Some(row))
    }
}

/// Outcome of [`span_probe`]: the report and the basis that was built.
#[derive(Debug, Clone)]
pub struct SpanProbe<F> {
    pub report: ProbeReport,
    pub basis: SpanBasis<F>,
}

struct Truncation {
    bound: i64,
    degree_cap: i64,
}

impl Truncation {
    fn admits<F: Scalar>(&self, v: &MVector<F>) -> bool {
        v.monomials().all(|mono| {
            let d = mono.total_degree();
            -self.degree_cap <= d
                && d <= self.degree_cap
                && mono.indices().all(|n| n.max_abs() <= self.bound)
        })
    }
}

fn window_generators(window: i64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for a in -window..=window {
        for b in -window..=window {
            let n = GridIndex::new(a, b);
            gens.extend([
                Generator::E11(n),
                Generator::E12(n),
                Generator::E21(n),
                Generator::E22(n),
            ]);
        }
    }
    gens.extend([Generator::D1, Generator::D2]);
    gens
}

fn max_index<F: Scalar>(v: &MVector<F>) -> i64 {
    v.monomials()
        .flat_map(|mono| mono.indices())
        .map(GridIndex::max_abs)
        .max()
        .unwrap_or(0)
}

/// Breadth-first closure of `seed` under `e_ij(n)` with `|n1|, |n2| <= gen_window` and
/// `d1`, `d2`, looking for `target`.
///
/// Vectors are kept only if every monomial has total degree in `[-degree_cap, degree_cap]`
/// and indices bounded by `gen_window` plus the largest coordinate among the seed, the
/// target and the distinguished index. Images leaving that box are dropped, so the span
/// built is always a subspace of the true submodule: `verified` is a proof of membership,
/// while `inconclusive-budget` is only evidence of non-membership.
pub fn span_probe<F: Scalar>(
    seed: &MVector<F>,
    space: &ModuleSpace<F>,
    gen_window: i64,
    degree_cap: i64,
    target: &MVector<F>,
    max_dim: usize,
) -> Result<SpanProbe<F>> {
    let start = Instant::now();
    let seed = space.canonical(seed.clone())?;
    let target = space.canonical(target.clone())?;
    if seed.is_zero() {
        return Err(Error::ZeroVector);
    }
    let base = max_index(&seed)
        .max(max_index(&target))
        .max(space.distinguished().map_or(0, GridIndex::max_abs));
    let truncation = Truncation {
        bound: base + gen_window,
        degree_cap,
    };
    if !truncation.admits(&seed) {
        return Err(Error::Precondition(format!(
            "seed {seed} has a degree outside [-{degree_cap}, {degree_cap}]"
        )));
    }
    let gens = window_generators(gen_window);

    let mut basis = SpanBasis::new();
    let mut queue = VecDeque::new();
    if let Some(row) = basis.insert(&seed)? {
        queue.push_back(row);
    }
    let mut applications: u64 = 0;
    let mut found = basis.contains(&target);
    let mut capped = false;
    'bfs: while !found {
        let Some(v) = queue.pop_front() else {
            break;
        };
        for &g in &gens {
            let w = act_generator(space, g, &v)?;
            applications += 1;
            if w.is_zero() || !truncation.admits(&w) {
                continue;
            }
            if let Some(row) = basis.insert(&w)? {
                queue.push_back(row);
                if basis.contains(&target) {
                    found = true;
                    break 'bfs;
                }
                if basis.dimension() >= max_dim {
                    capped = true;
                    break 'bfs;
                }
            }
        }
    }

    let verdict = if found {
        Verdict::Verified
    } else {
        Verdict::InconclusiveBudget
    };
    let mut report = ProbeReport::new("span", verdict)
        .param("space", space.kind.name())
        .param("seed", &seed)
        .param("target", &target)
        .param("gen_window", gen_window)
        .param("degree_cap", degree_cap)
        .param("index_bound", truncation.bound)
        .param("max_dim", max_dim)
        .param("q", space.env.q())
        .param("mu", space.env.mu());
    if let Some(m) = space.distinguished() {
        report = report.param("m", m);
    }
    if let Some(b) = space.env.b() {
        report = report.param("b", b);
    }
    report.trials = applications;
    report.dimension = Some(basis.dimension());
    if !found {
        report.notes.push(if capped {
            format!("dimension cap {max_dim} reached")
        } else {
            "truncated closure exhausted without reaching the target".to_string()
        });
    }
    Ok(SpanProbe {
        report: report.timed(start),
        basis,
    })
}
