//! Diagram twists, separations and rigidity analysis for Coxeter systems.
//!
//! A Coxeter system is encoded purely by its order matrix: generators
//! `s, t` with `o(st) ∈ {2, 3, …} ∪ {∞}`. On top of that representation the
//! crate provides:
//!
//! * connectivity, commutation and the σ/ν decomposition of subsets
//!   ([`diagram`]);
//! * finite-type recognition and the longest-element automorphism ω
//!   ([`sphericity`]), with brute-force permutation models as an independent
//!   ground truth ([`oracle`]);
//! * separating spherical products, twist-rigid subsets, separators,
//!   separations and minimal separations ([`separation`]);
//! * the standard separation with its type(I)/type(II) classification
//!   ([`standard`]);
//! * elementary diagram twists, twist orbits up to canonical isomorphism,
//!   and bounded compatibility checks ([`twist`], [`canon`]);
//! * untangle chains between spherical-product subsets and the permutation
//!   groups induced by closed chains ([`untangle`]).
//!
//! The `coxtwist` binary exposes the same operations over JSON diagram
//! files; see [`cli`]. Runnable walkthroughs live in `examples/`.

pub mod canon;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod oracle;
pub mod separation;
pub mod sphericity;
pub mod standard;
pub mod twist;
pub mod untangle;

pub use diagram::{CoxeterDiagram, Order, SigmaNuSplit, Subset};
pub use error::{Error, Result};
