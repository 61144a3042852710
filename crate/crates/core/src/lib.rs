//! Finite-model workbench for possibility of tasks, information predicates,
//! unpredictability certificates, ensemble convergence and game values.
//!
//! Substrates, attributes, variables and tasks live in [`kernel`]. Task
//! possibility is decided by the classical oracle in [`classical`] or the
//! unitary oracle in [`quantum`]; everything above that is built on those two.

pub mod classical;
pub mod decision;
pub mod ensembles;
pub mod error;
pub mod kernel;
pub mod label;
pub mod linalg;
pub mod predicates;
pub mod quantum;
pub mod state;
pub mod tolerance;
pub mod unpredictability;

pub use classical::{ClassicalModel, ClassicalWitness};
pub use decision::{
    check_decision_support, check_equal_value, compose_games, derive_value, game_value, make_game, transform_game,
    DecisionSupportReport, DerivationStep, DerivationTrace, Game, Rule, Transform,
};
pub use ensembles::{
    deviant_weight, frequency, partition_of_unity, verify_convergence, verify_e1_e2, ConvergenceRow, Probabilities,
};
pub use error::{CtError, Result};
pub use kernel::{
    coarsen_variable, is_task_possible, validate_variable, Attribute, Coarsening, Kind, Model, PossibilityVerdict,
    Status, SubstrateSpec, Task, Variable,
};
pub use label::Label;
pub use predicates::{Evidence, PredicateReport};
pub use quantum::{MeasurerSpec, QuantumModel, QuantumWitness};
pub use state::{MixedState, PureState, QState};
pub use tolerance::{set_tol, tol};
pub use unpredictability::{unpredictability_certificate, UnpredictabilityReport};
