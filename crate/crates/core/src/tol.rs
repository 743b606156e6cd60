//! Numeric tolerances shared across the crate.
//!
//! All tolerances are relative to the polynomial magnitude scale
//! max|c_i| * max(1, |u|)^d unless noted otherwise.

/// Root residual: accepted roots r of F(u) = h satisfy |F(r) - h| below this.
pub const TOL_ROOT: f64 = 1e-12;

/// Energy and derivative equality tests (h == h0, F'(m) == 0, ...).
/// The classification is discontinuous exactly at these equalities.
pub const TOL_ENERGY: f64 = 1e-10;

/// Default quadrature tolerance for transit times and periods.
pub const QUAD_TOL: f64 = 1e-10;

/// Maximum number of adaptive quadrature panels.
pub const MAX_PANELS: usize = 10_000;

/// Normalized residual gate for the strong / strong-singular / weak-singular
/// verdicts.
pub const VERDICT_GATE: f64 = 1e-6;

/// Normalized residuals above this are hard verification failures.
pub const FAIL_GATE: f64 = 1e-3;

/// Samples closer than this many base spacings to a singular point are
/// excluded from the first-integral sup norm.
pub const DELTA_S_SPACINGS: f64 = 10.0;

/// Half-infinite elementary forms are truncated where |u - m| drops below
/// this.
pub const TAIL_EPS: f64 = 1e-8;

/// Default number of points in an elementary form's time-of-flight table.
pub const ARC_SAMPLES: usize = 512;
