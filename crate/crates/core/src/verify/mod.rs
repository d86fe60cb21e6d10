//! Constructions from the irreducibility arguments and finite certificates for them.
//!
//! Every probe returns a [`ProbeReport`]. Randomized suites are seeded, and trial `i`
//! draws from a sub-seed derived from `(seed, i)`, so reports do not depend on scheduling.

mod cyclic;
mod ladder;
mod probe;
mod report;
pub mod sample;
mod singular;
mod span;
mod suites;

pub use cyclic::{cyclicity_chain, cyclicity_run, reduce_step, ComponentRun, CyclicityOutcome};
pub use ladder::{
    ladder_b, quotient_generator_ladder, quotient_ladder_coefficient, twisted_ladder_check,
};
pub use probe::nilpotency_probe;
pub use report::{ProbeReport, Verdict, Witness};
pub use singular::singular_vector;
pub use span::{span_probe, SpanBasis, SpanProbe};
pub use suites::{identity_suites, Suite, SuiteConfig};
