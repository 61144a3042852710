//! Games of chance, adders, value derivations and the decision-support checker.

pub mod adder;
pub mod derivation;
pub mod game;
pub mod support;

pub use adder::{AdderRealization, AdderSpec};
pub use derivation::{check_equal_value, derive_game_value, derive_value, DerivationStep, DerivationTrace, Rule};
pub use game::{
    compose_games, expected_payoff, game_partition, game_value, game_value_exact, label_permutation, make_game,
    payoff_observable, transform_attribute, transform_game, Game, Transform,
};
pub use support::{check_decision_support, ConditionVerdict, DecisionSupportReport, NO_COMPLEMENTARY};
