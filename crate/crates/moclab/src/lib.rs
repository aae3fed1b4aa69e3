//! moclab: a numerical laboratory for modulus-of-continuity bounds.
//!
//! The crate evolves scalar fields under isotropic quasilinear flows on a
//! small zoo of model geometries, extracts sharp moduli of continuity from
//! the discrete solutions, runs one-dimensional comparison equations next to
//! them, and verifies that the flow never overtakes its comparison profile
//! within an explicit tolerance budget.
//!
//! Start with [`scenarios::builtin_scenarios`] and [`verifier::verify`], or
//! run the bundled examples; the thin `moclab` binary drives the same
//! pipeline from scenario config files.

pub mod comparison;
pub mod config;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod harness;
pub mod modulus;
pub mod plot;
pub mod scenarios;
pub mod verifier;

pub use comparison::{
    build_supersolution_initial, check_comparison, invert_profile, solve_comparison,
    solve_height_profile, CheckResult, ComparisonParams, ComparisonProfile, DriftTerm,
};
pub use config::{parse_config, ConfigError, RunConfig};
pub use error::{Error, Result};
pub use harness::{cli_main, run_all, run_scenario, ScenarioOutcome};
pub use flow::{
    cfl_timestep, evolve, isotropic_rhs, DriftPotential, Field, FlowSpec,
    Grid, Preset,
};
pub use geometry::{
    c_kappa, c_kappa_prime, drift_coefficient, geodesic_distance, manifold_constants, Boundary,
    ManifoldKind, ManifoldModel, Point,
};
pub use modulus::{extract_modulus, increasing_envelope, oscillation, ModulusCurve, ModulusParams};
pub use plot::emit_scenario_plots;
pub use scenarios::{builtin_scenario, builtin_scenarios, registry_table};
pub use verifier::{
    admissibility_ratio, alpha_admissible, build_initial_field, isotropic_matrix, verify,
    BudgetBreakdown, CheckpointReport, CurveSnapshot, FlowKind, InitialProfile, Outcome,
    Provenance, ScenarioSpec, TheoremTag, VerificationReport,
};
