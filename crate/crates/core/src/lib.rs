//! Exact computations for `Gm`-actions: restricted local cohomology on
//! `A^1/Gm`, weights and strata of linear actions, window subcategories,
//! K-theoretic localization, and monodromy of quasi-symmetric windows.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gm_geometry;
pub mod graded_complexes;
pub mod k_localization;
pub mod linalg;
pub mod weight_algebra;
pub mod windows_walls;

pub use error::{Error, Result};
