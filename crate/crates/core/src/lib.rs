//! Persistent homology of planar point clouds and landscape-based comparison
//! of persistence diagrams.
//!
//! The crate is `no_std` (it needs `alloc`). Pipeline:
//!
//! * [`sampling`] draws seeded point clouds from a disc, an annulus or a circle.
//! * [`rips`] builds the Vietoris–Rips filtration of a distance matrix.
//! * [`persistence`] reduces the boundary matrix over Z₂ and assembles diagrams.
//! * [`diagram`] holds the bottleneck and p-Wasserstein distances.
//! * [`landscape`] builds exact piecewise-linear persistence landscapes,
//!   their norms and inner product.
//! * [`similarity`] holds the landscape cosine similarity, cosine distance,
//!   the ρ variation and the orthogonality predicates.
//!
//! ```
//! use pdsim_core::persistence::PersistenceDiagram;
//! use pdsim_core::similarity::cosine_similarity;
//!
//! let a = PersistenceDiagram::from_pairs(1, vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
//! let b = PersistenceDiagram::from_pairs(1, vec![(0.0, 1.0)]).unwrap();
//! let s = cosine_similarity(&a, &b).unwrap();
//! assert!((s - 1.0 / 2f64.sqrt()).abs() < 1e-12);
//! ```
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod diagram;
mod error;
pub mod landscape;
mod math;
pub mod persistence;
pub mod rips;
pub mod sampling;
pub mod similarity;

pub use error::{Error, Result};
