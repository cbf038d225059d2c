//! CODATA 2018 exact and recommended values, SI units.

/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.2973525693e-3;
