//! Verification and reproduction: bound-versus-sweep checks, the worked
//! examples, the randomized experiment and the RLC ladder generator.

mod experiment;
mod fixtures;
mod ladder;
mod random;
mod reproduce;
mod verify;

pub use experiment::{run_randomized_experiment, summarize, CellSummary, ExperimentReport, ModelRecord};
pub use fixtures::{example1, example1_system, example2, example2_system, ExampleFixture, Scenario};
pub use ladder::{generate_ladder, LadderParams};
pub use random::{generate_random_models, random_stable, RandomModelSpec, RandomModels};
pub use reproduce::{
    reproduce_example, two_sided_grid, write_bundle, Assertion, ExampleBundle, ExampleName,
    LabeledSweep, Measurement, LADDER_CASE1_BAND, LADDER_CASE2_BAND, LADDER_ORDER,
    LADDER_SF_EPSILON,
};
pub use verify::{passes, verify_all, verify_bound, BoundKind, VerificationRecord, BAND_POINTS};
