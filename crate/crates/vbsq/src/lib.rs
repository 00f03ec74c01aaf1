//! Numerical toolkit for q-deformed higher-spin valence-bond-solid (VBS)
//! states on periodic chains.
//!
//! The toolkit is organized in layers:
//!
//! - [`qalgebra`]: SU_q(2) representation machinery — q-numbers, spin
//!   representations and the coproduct, q-deformed Clebsch-Gordan tables
//!   built by highest-weight construction, q-6j symbols and the F-matrix
//!   obtained by direct contraction.
//! - [`mps`]: the matrix-product representation of the spin-S VBS state at
//!   deformation q, its transfer matrix, and the closed-form transfer
//!   eigensystem (eigenvalues from q-6j symbols, eigenvectors from q-CG
//!   coefficients).
//! - [`rdm`]: exact reduced density matrices of a block of `l` contiguous
//!   spins — in the double scaling limit, for finite blocks in an infinite
//!   chain, and for finite periodic chains — together with their
//!   magnetization-sector decomposition and spectra.
//! - [`spectra`]: closed-form Rényi and von Neumann entropies, exact
//!   isotropic block spectra, first-order perturbative spectra at q < 1,
//!   and the effective boundary models that reproduce them.
//! - [`oracle`]: a brute-force ground truth that builds the explicit state
//!   vector on small periodic chains, checks that the parent Hamiltonian
//!   annihilates it, and computes block spectra by literal partial trace.
//! - [`cli`]: the `vbsq` command-line front end emitting CSV/JSON datasets.
//!
//! All quantities are evaluated against a [`DeformationContext`] holding the
//! deformation parameter q ∈ (0, 1] and the numeric tolerances. Spin and
//! magnetic quantum numbers are carried as exact half-integers ([`HalfInt`]);
//! half-integer sign factors (-1)^x are evaluated as exp(iπx), so internal
//! matrix arithmetic is complex while every physical output is checked to be
//! real.

pub mod cli;
pub mod context;
pub mod halfint;
pub mod linalg;
pub mod mps;
pub mod oracle;
pub mod qalgebra;
pub mod rdm;
pub mod spectra;

pub use context::{ ContextError, DeformationContext };
pub use halfint::HalfInt;
