//! The Q-Grounding language: terms built from three constants, six
//! non-growth functions and the indeterminate walk primitive `theta`,
//! together with a Goedel byte codec, a Hilbert-style proof kernel, the
//! self-referential axiom generator and finite-model probes.

pub mod axioms;
pub mod classes;
pub mod cli;
pub mod codec;
pub mod encoders;
pub mod kernel;
pub mod nat;
pub mod par;
pub mod probe;
pub mod semantics;
pub mod syntax;

pub use nat::Nat;
pub use syntax::{Const, DagNode, DagTerm, Formula, Func, Recognizer, Rel, Term};
