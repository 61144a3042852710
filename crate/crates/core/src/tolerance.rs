//! Process-wide numeric tolerance.
//!
//! Every quantum comparison in the crate (state equality up to phase,
//! orthogonality, sharpness, Hermiticity) reads the same value so predicates
//! stay mutually consistent.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default tolerance for all floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

static TOL_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current global tolerance.
pub fn tol() -> f64 {
    f64::from_bits(TOL_BITS.load(Ordering::Relaxed))
}

/// Override the global tolerance. Non-finite or non-positive values are ignored.
pub fn set_tol(value: f64) -> bool {
    if value.is_finite() && value > 0.0 {
        TOL_BITS.store(value.to_bits(), Ordering::Relaxed);
        true
    } else {
        false
    }
}

/// Threshold used when deciding linear independence during Gram–Schmidt.
/// Kept tighter than the square root of machine epsilon but looser than
/// the state tolerance so that rank decisions are stable on d <= 64.
pub(crate) fn rank_tol() -> f64 {
    tol().max(1e-12) * 1e3
}
