//! Gate-synthesis compiler and randomized-compilation simulator for
//! single-qubit z rotations over the {H, S, T} gate set.
//!
//! The crate decomposes continuous R_Z rotations into discrete gate words
//! via a Solovay-Kitaev synthesizer, generates ensembles of degenerate
//! decompositions of one target rotation, executes them on a statevector
//! simulator under a coherent over-rotation noise model, and scores the
//! randomized-compilation average against single-sequence baselines.
//!
//! Module map:
//! - [`su2`]: 2×2 unitary algebra, Bloch geometry, distance measures.
//! - [`word`]: {H,S,T} words, canonical normal form, inversion, counts.
//! - [`net`] / [`synth`]: base approximation net and the SK recursion.
//! - [`ensemble`]: degenerate decomposition ensembles.
//! - [`sim`]: noisy statevector execution and tomography.
//! - [`protocol`]: randomization statistics, sweeps, and reports.

pub mod ensemble;
pub mod error;
pub mod net;
pub mod normal_form;
pub mod protocol;
pub mod seeds;
pub mod sim;
pub mod su2;
pub mod synth;
pub mod word;
