//! Numerics for the generalized isotonic oscillator: the deformed ladder
//! algebra on its truncated shifted Fock space, nonlinear and canonical
//! coherent states, and the full set of non-classicality diagnostics
//! (A3, Mandel Q, g2(0), quadrature / amplitude-squared squeezing,
//! quadrature distribution, and s-parameterized quasi-probability
//! functions).
//!
//! Level `n = 2` is absent from the oscillator spectrum and `f(n)` vanishes
//! at `n = 1, 3`, so the physical Hilbert space splits into the isolated
//! ground state and the sub-space spanned by `|3>, |4>, ...`. All operators
//! act on the shifted basis `|ñ> := |n+3>` truncated at a configurable
//! `n_max`.

pub mod cli;
pub mod eigenbasis;
pub mod error;
pub mod fockspace;
pub mod quasiprob;
pub mod specfun;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
