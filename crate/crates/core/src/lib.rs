//! Surgery obstructions for knots: diagrams, classical invariants, and the
//! sign and parity tests built on them.

pub mod algebra;
pub mod census;
pub mod codec;
pub mod diagram;
pub mod hfk;
pub mod invariants;
pub mod obstructions;
pub mod plumbing;
