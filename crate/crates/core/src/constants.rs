//! Physical constants (CODATA 2018, SI).

/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.997_924_58e8;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// `sqrt(4π ε₀ ħ c)`, the dipole-moment scale per unit length (C).
///
/// A dipole difference `Δd` across plates separated by `L` has coupling
/// `α = |Δd| / (L · dipole_scale())`.
pub fn dipole_scale() -> f64 {
    (4.0 * std::f64::consts::PI * EPSILON_0 * HBAR * C).sqrt()
}

/// Name/value pairs of every constant above, for run manifests.
pub fn listing() -> [(&'static str, f64); 4] {
    [
        ("c", C),
        ("hbar", HBAR),
        ("epsilon_0", EPSILON_0),
        ("e", ELEMENTARY_CHARGE),
    ]
}
