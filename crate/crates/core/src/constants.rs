//! Physical constants (CODATA 2018) and fixed conventions.

/// Molar gas constant, J/(mol·K).
pub const R: f64 = 8.314462618;

/// Faraday constant, C/mol.
pub const F: f64 = 96485.33212;

/// Default standard pressure, Pa.
pub const P_STANDARD: f64 = 1.0e5;

/// Reference temperature used to scale the temperature axis when tracing, K.
pub const T_REF: f64 = 298.15;
