use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A physics parameter violates its admissible range.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The static Liouvillian has no unique steady state at these parameters.
    #[error("singular static Liouvillian (rcond estimate {rcond:.3e})")]
    SingularMatrix { rcond: f64 },

    /// A Floquet resolvent (M0 + i m Δ I) is numerically singular, i.e. mΔ
    /// hits an eigenvalue of i M0.
    #[error("singular resolvent at harmonic m = {harmonic}, Δ = {delta_beat} (rcond estimate {rcond:.3e})")]
    SingularResolvent {
        harmonic: i32,
        delta_beat: f64,
        rcond: f64,
    },

    #[error("integration step dt = {dt} too large: dt·{rate} > {limit}")]
    StepSizeTooLarge { dt: f64, rate: f64, limit: f64 },

    #[error("state became non-finite at t = {t}")]
    Divergence { t: f64 },

    #[error("extraction window of {window} time units does not span an integer number of beat periods (period {period})")]
    WindowMismatch { window: f64, period: f64 },

    #[error("grid is not uniform: spacing {found} differs from {expected}")]
    NonUniformGrid { expected: f64, found: f64 },

    #[error("need at least {needed} grid points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
}
