//! Multipartite quantum discord for the N-qubit family
//! `ρ = (I + Σ_j c_j σ_j^{⊗N}) / 2^N`.
//!
//! * [`linalg`]: dense complex matrices, partial trace, spectra, entropy.
//! * [`family`]: state construction, closed-form spectra, physicality.
//! * [`measurement`]: projective frames, conditional measurement trees.
//! * [`discord`]: closed forms, the discord objective and a brute-force oracle.
//! * [`dynamics`]: phase-flip decoherence, frozen plateaus, transition points.
//! * [`surface`]: discord level surfaces over the coefficient cube.

pub mod discord;
pub mod dynamics;
pub mod error;
pub mod family;
pub mod linalg;
pub mod measurement;
pub mod numfmt;
pub mod optimize;
pub mod surface;

pub use discord::{
    classify, closed_form_discord, discord_objective, entropy_defect, oracle_discord, Category,
    ClosedFormReport, OracleConfig, OracleResult,
};
pub use error::{Error, Result};
pub use family::{FamilyCoefficients, SpectrumReport};
pub use linalg::{ComplexMatrix, DensityMatrix};
pub use measurement::{MeasurementFrame, MeasurementTree};
