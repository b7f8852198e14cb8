//! Weak-probe response of a four-level atom driven by a strong coupling
//! field and a pair of weak perturbing fields on the upper transition.
//!
//! The residual beat between the two perturbing fields makes the master
//! equation periodically time dependent; [`floquet`] solves it through a
//! perturbative harmonic hierarchy, [`oracle`] integrates it directly in
//! the time domain as an independent check, and [`spectra`] turns the
//! probe coherence into susceptibility sweeps and group indices.

pub mod error;
pub mod floquet;
pub mod model;
pub mod oracle;
pub mod spectra;

pub use error::Error;
pub use model::{
    build_liouvillian, reassemble_generator, reconstruct_rho33, CMat, CVec, C64,
    DeltaConvention, DensityVector, LiouvillianParts, SystemParams, DIM,
};

pub type Result<T> = std::result::Result<T, Error>;
