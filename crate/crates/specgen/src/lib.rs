//! Spectrum generation for superintegrable systems with a quadratic symmetry
//! algebra, following the deformed-oscillator realization technique.
//!
//! The pipeline is: pick a system and its charges ([`systems`]), assemble the
//! structure function of the associated deformed oscillator ([`algebra`]),
//! locate finite-dimensional unitary representations ([`repfinder`]), and
//! optionally rebuild the symmetry generators as explicit matrices to check
//! the algebra numerically ([`repcheck`]). Reports are serialized through
//! [`report`], and [`cli`] wires everything into the `specgen` binary.

pub mod algebra;
pub mod cli;
pub mod poly;
pub mod repcheck;
pub mod repfinder;
pub mod report;
pub mod systems;

pub use algebra::{Reading, StructureConstants};
pub use repfinder::{find_representations, spectrum_table, Representation, SolveOptions};
pub use systems::{Charges, SystemId};

