//! Verification and cost analysis for measurement-based computation on the
//! RHG cluster state.
//!
//! - [`complex`]: the cuboid cell complex and its boundary operators.
//! - [`gf2`]: packed binary matrices, rank and solving.
//! - [`pattern`]: measurement patterns, logical targets, the circuit file
//!   format and the built-in catalog.
//! - [`verifier`]: relative boundary operators and per-target surface checks.
//! - [`overhead`]: the topological error model and distillation costs.

pub mod complex;
pub mod gf2;
pub mod overhead;
pub mod pattern;
pub mod verifier;

pub use complex::{Cell, CellRef, ChainComplex, ComplexError, LatticeShape};
pub use gf2::{BitMatrix, BitVector, Gf2Error, Solvability};
pub use overhead::{
    BudgetTable, CostParams, DistillationBudgets, DistillationSchedule, Gate, GateBudget, OverheadError, OverheadResult,
    SearchBounds,
};
pub use pattern::{CircuitSpec, LogicalTarget, MeasurementPattern, PatternError, TargetKind};
pub use verifier::{verify, RelativeOperators, VerificationReport};
