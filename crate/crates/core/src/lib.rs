//! Explicit eigenvalue spectra of scaling quantum graphs.
//!
//! The spectral function of a scaling quantum graph is a finite cosine sum
//! (see [`trigcore`]). When its subleading amplitudes are small enough the
//! extrema of the leading cosine separate its roots; otherwise repeated
//! differentiation (the derivative ladder) reaches a level where they are,
//! and the roots of each level then separate the roots of the level below.
//! [`solver`] runs that recursion down to the physical spectrum, and
//! [`oracle`] cross-checks it with a brute-force scan.

pub mod cli;
pub mod error;
pub mod graphs;
pub mod oracle;
pub mod solver;
pub mod trigcore;

pub use error::{Error, Result};
pub use graphs::{build_chain, build_star, ChainGraphSpec, StarGraphSpec};
pub use solver::{solve_ladder, RootKind, RootTable, SolverConfig, Spectrum};
pub use trigcore::{build_ladder, normalize, DerivativeLadder, Term, TrigSpectralFunction};
