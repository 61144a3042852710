//! Finite-dimensional unitary quantum backend.

pub mod comparer;
pub mod measurer;
pub mod oracle;
pub mod permutation;

pub use comparer::{build_comparer, Comparer, ComparerResult, Comparison};
pub use measurer::{build_measurer, Branch, Labeling, MeasurerSpec};
pub use oracle::{gram, unitary_task_feasible, GramMatrix, QuantumModel, QuantumWitness};
pub use permutation::{permutation_computation, permutation_unitary, variable_basis, LabelPermutation};

use crate::error::Result;
use crate::state::MixedState;

/// Reduced state of one factor of a joint state.
pub fn intrinsic_part(joint: &MixedState, factor: usize) -> Result<MixedState> {
    joint.reduce(&[factor])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CtError;
    use crate::state::PureState;

    #[test]
    fn product_state_reduction() {
        let s = 0.5f64.sqrt();
        let plus = PureState::from_real(&[s, s]).unwrap();
        let joint = PureState::basis(2, 0).tensor(&plus).density();
        assert!(intrinsic_part(&joint, 1).unwrap().approx_eq(&plus.density()));
        assert!(matches!(intrinsic_part(&joint, 2), Err(CtError::BadFactor { .. })));
    }
}
