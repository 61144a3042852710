//! Substrates, attributes, variables and tasks, plus backend dispatch.

mod attribute;
mod substrate;
mod task;
mod variable;

pub use attribute::{Attribute, Repr};
pub use substrate::{compose_all, compose_substrates, Kind, SubstrateSpec, Universe};
pub use task::{
    check_witness, is_task_possible, parallel_task, Certificate, Model, PossibilityVerdict, Status, Task, Witness,
};
pub use variable::{coarsen_variable, validate_variable, Coarsening, Variable};
