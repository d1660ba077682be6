//! Exact finite-Fourier pseudodifferential calculus on the torus, resonance
//! geometry, quasi-resonant averaging, the iterative normal form and
//! quasimode construction, all validated against a dense spectral oracle.

pub mod context;
pub mod cutoff;
pub mod error;
pub mod expr;
pub mod fit;
pub mod grid;
pub mod hamiltonian;
pub mod lattice;
pub mod par;
pub mod symbol;

pub use context::SemiclassicalContext;
pub use error::{Error, Result};
pub use expr::CoefField;
pub use grid::GridSpec;
pub use hamiltonian::Hamiltonian;
pub use lattice::ResonanceLattice;
pub use symbol::FourierSymbol;
