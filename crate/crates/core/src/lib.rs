//! Bound-state energies and radial wavefunctions of the D-dimensional
//! Schrödinger equation with the standard Woods-Saxon potential.
//!
//! The centrifugal term is replaced by a three-term expansion in the
//! Woods-Saxon shape, matched to second order at the minimum of the
//! effective potential ([`pekeris`]). The resulting radial problem is solved
//! in closed form twice, once with the Nikiforov-Uvarov construction
//! ([`nu`]) and once through a shape-invariant superpotential ([`susy`]).
//! A Numerov shooting solver ([`numerov`]) provides an independent numerical
//! check for both the approximated and the exact effective Hamiltonian.
//!
//! Units: energies in MeV, lengths in fm, masses in atomic mass units.

// `!(x > 0.0)` style guards reject NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod nu;
pub mod numerov;
pub mod pekeris;
pub mod potential;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod solution;
pub mod susy;
pub mod wavefunction;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use nu::{DimensionlessTriple, Status};
pub use pekeris::{Extremum, PekerisExpansion};
pub use potential::{ChannelSpec, Model, PotentialParams};
pub use solution::{solve_channel, ChannelSolution};
pub use wavefunction::WavefunctionDescriptor;
