/// Thresholds used by the model itself (not by validation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// A fermion term is excluded when `1 - |overlap|^2` falls below this.
    pub exclusion: f64,
    /// Allowed deviation of `|a|^2 + |b|^2` from one.
    pub coefficients: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exclusion: 1e-12,
            coefficients: 1e-12,
        }
    }
}
