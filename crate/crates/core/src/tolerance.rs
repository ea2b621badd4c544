//! Central numerical tolerances.
//!
//! The density-matrix validation tolerance is process-wide and may be
//! overridden once at start-up (the CLI reads `WERNER_TOL`). Everything else
//! is a fixed constant.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default tolerance for Hermiticity, unit trace and positivity checks.
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-10;

/// Imaginary parts of Pauli expectation values below this are dropped.
pub const IMAG_DISCARD_TOL: f64 = 1e-12;

/// Imaginary parts above this signal a corrupt input.
pub const IMAG_REJECT_TOL: f64 = 1e-10;

/// Slack used when clamping measures into their nominal ranges.
pub const RANGE_SLACK: f64 = 1e-12;

/// Negative square-root arguments above this are clamped to zero in the
/// closed-form decay laws.
pub const SQRT_ARG_CLAMP: f64 = 1e-12;

// 0 means "no override".
static VALIDATION_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Tolerance currently used for density-matrix validation.
pub fn validation() -> f64 {
    match VALIDATION_OVERRIDE.load(Ordering::Relaxed) {
        0 => DEFAULT_VALIDATION_TOL,
        bits => f64::from_bits(bits),
    }
}

/// Overrides the validation tolerance. Returns `false` and leaves the
/// setting untouched for non-positive or non-finite values.
pub fn set_validation(tol: f64) -> bool {
    if !(tol.is_finite() && tol > 0.0) {
        return false;
    }
    VALIDATION_OVERRIDE.store(tol.to_bits(), Ordering::Relaxed);
    true
}

/// Restores the default validation tolerance.
pub fn reset_validation() {
    VALIDATION_OVERRIDE.store(0, Ordering::Relaxed);
}
