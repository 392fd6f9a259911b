//! Spectral analysis of multiple quantum return times.
//!
//! The central object is the Gram matrix of a sequence of unit vectors
//! `φ_0, U φ_0, U² φ_0, …` generated by a quantum map `U`. Its eigenvalue
//! distribution encodes how often the orbit returns close to itself. This
//! crate builds the two standard quantum-chaos models (the quantized baker
//! map on the torus and the kicked top on the sphere), coherent initial
//! states for both, the random-vector reference model with its
//! Marchenko-Pastur limit law, and the classical return-time statistics
//! (Kac's lemma, exponential hitting laws) that motivate the construction.

pub mod classical;
pub mod error;
pub mod gram;
pub mod maps;
pub mod numerics;
pub mod randmat;
pub mod states;

pub use error::{Error, Result};
