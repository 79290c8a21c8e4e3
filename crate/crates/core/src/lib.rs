//! Exact parity complexity toolkit for Boolean functions over F₂ⁿ.
//!
//! The crate is organised bottom-up:
//!
//! - [`f2linalg`]: vectors, affine systems in reduced row echelon form,
//!   exhaustive enumeration of affine subspaces and the product-basis
//!   normal form for systems over F₂ⁿ × F₂ᵏ.
//! - [`boolfn`]: bit-packed truth tables, composition and powering,
//!   restriction to affine subspaces and the named function families.
//! - [`spectral`]: exact Walsh–Hadamard spectra over scaled integers.
//! - [`solvers`]: certificate complexity, parity certificate complexity,
//!   decision tree and parity decision tree depth, with witnesses.
//! - [`paperlab`]: the reproduction checklist and the conjecture scanner.
//!
//! Coordinates are 1-based at every public boundary (x₁ … xₙ) and 0-based
//! internally. Coordinate x₁ is the least significant bit of a packed vector
//! and of a truth-table index.

pub mod boolfn;
pub mod error;
pub mod f2linalg;
pub mod paperlab;
pub mod solvers;
pub mod spectral;

pub use boolfn::{BooleanFunction, Family, RestrictedFunction};
pub use error::{Error, Result};
pub use f2linalg::{AffineSystem, F2Matrix, F2Vector, ProductBasisPartition, Reduction};
pub use spectral::{Dyadic, FourierSpectrum};
