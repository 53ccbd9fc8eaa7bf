//! Eigenvector delocalization for non-Hermitian random matrices.
//!
//! The crate is organised by concern:
//!
//! * [`randgen`] samples entry distributions, real and genuinely complex
//!   matrix ensembles and uniform sphere vectors from counter-based seed
//!   streams.
//! * [`linalg`] holds the dense complex kernels: Hessenberg/Schur
//!   eigensolver, Golub–Kahan SVD, kernel vectors, subspace distances.
//! * [`deloc`] computes subset-mass statistics, localization events and
//!   the threshold/parameter formulas of the delocalization bounds.
//! * [`structure`] is the arithmetic-structure toolkit (LCD search,
//!   compressibility, spread sets, Lévy concentration).
//! * [`baseline`] gives closed forms and simulations for vectors uniform
//!   on the sphere.
//! * [`experiments`] is the Monte Carlo harness tying everything together.

pub mod baseline;
pub mod deloc;
pub mod error;
pub mod experiments;
pub mod fmt;
pub mod linalg;
pub mod quad;
pub mod randgen;
pub mod stats;
pub mod structure;

pub use num_complex::Complex64;

pub use crate::deloc::{DelocProfile, ParameterSet};
pub use crate::error::{Error, Result};
pub use crate::experiments::{RunReport, TailCurve};
pub use crate::linalg::{ComplexMatrix, EigenPair, Spectrum};
pub use crate::randgen::{EntryDistribution, EntryKind, Field, MatrixEnsemble, SeedStream};
pub use crate::structure::{LcdQuery, LcdResult, LcdStatus};
