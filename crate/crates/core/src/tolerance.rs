/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed ||n| - 1| for a director handed to a constructor.
    pub unit: f64,
    /// Relative norm discarded by `hn_inverse` before it refuses the input.
    pub range: f64,
    /// Relative pole guard for 4cs - b.
    pub pole: f64,
    /// Allowed |T(Q0)| for a critical point.
    pub critical: f64,
}

pub const TOL: Tolerances = Tolerances { unit: 1e-12, range: 1e-8, pole: 1e-12, critical: 1e-10 };
