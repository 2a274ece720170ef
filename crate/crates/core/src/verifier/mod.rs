//! Surface-existence checks for measurement patterns.
//!
//! A primal target `c` is realized iff some set of unmeasured faces has
//! relative boundary `c`, i.e. `d2r · x = c` is solvable, where `d2r` is ∂₂
//! with measured-edge rows and measured-face columns zeroed. Dual targets are
//! checked the same way against ∂₂ᵀ with the roles of the measured sets
//! swapped and the outermost edges removed.

mod oracle;
mod report;

use std::collections::BTreeSet;
use std::time::Instant;

use thiserror::Error;

use crate::complex::{Cell, ChainComplex};
use crate::gf2::{self, BitMatrix, BitVector};
use crate::pattern::{validate_pattern, CircuitSpec, LogicalTarget, MeasurementPattern, TargetKind};

pub use oracle::{brute_force_surface_exists, OracleError};
pub use report::{exit_code_from_machine, MachineSummary, TargetVerdict, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("pattern shape {pattern} does not match complex shape {complex}")]
    ShapeMismatch { pattern: String, complex: String },
    #[error("target `{id}`: cell {cell} has dimension {got}, a {kind} target needs dimension {want}")]
    TargetDimension { id: String, cell: String, kind: TargetKind, got: usize, want: usize },
    #[error("target `{id}`: cell {cell} is not part of the complex")]
    TargetCell { id: String, cell: String },
}

/// Boundary operators of the complex relative to a measurement pattern.
#[derive(Debug, Clone)]
pub struct RelativeOperators {
    /// ∂₂ with rows of measured edges and columns of measured faces zeroed (m1 × m2).
    pub d2r: BitMatrix,
    /// ∂₂ᵀ with rows of measured faces, columns of measured edges and columns of
    /// outermost edges zeroed (m2 × m1).
    pub d2r_dual: BitMatrix,
    pub measured_edges: Vec<usize>,
    pub measured_faces: Vec<usize>,
    pub outermost_edges: Vec<usize>,
}

fn check_shape(complex: &ChainComplex, pattern: &MeasurementPattern) -> Result<(), VerifyError> {
    if complex.shape() != pattern.shape() {
        return Err(VerifyError::ShapeMismatch {
            pattern: pattern.shape().to_string(),
            complex: complex.shape().to_string(),
        });
    }
    Ok(())
}

fn indices<'a>(complex: &ChainComplex, cells: impl Iterator<Item = &'a Cell>) -> Vec<usize> {
    cells.map(|c| complex.index_of(c).expect("pattern cells are validated against the shape")).collect()
}

/// Zeroes the columns of edges lying in a boundary plane of the cuboid.
#[must_use]
pub fn smooth_dual(complex: &ChainComplex, op: &BitMatrix) -> BitMatrix {
    let mut out = op.clone();
    for j in outermost_edge_indices(complex) {
        out.clear_col(j);
    }
    out
}

fn outermost_edge_indices(complex: &ChainComplex) -> Vec<usize> {
    complex.cells(1).iter().enumerate().filter(|(_, e)| complex.is_outermost_edge(e)).map(|(j, _)| j).collect()
}

pub fn relative_operators(complex: &ChainComplex, pattern: &MeasurementPattern) -> Result<RelativeOperators, VerifyError> {
    check_shape(complex, pattern)?;
    let measured_edges = indices(complex, pattern.primal_z().iter());
    let measured_faces = indices(complex, pattern.dual_z().iter());
    let d2 = complex.boundary_matrix(2).expect("2 is a valid dimension");
    let mut d2r = d2.clone();
    for &e in &measured_edges {
        d2r.clear_row(e);
    }
    for &f in &measured_faces {
        d2r.clear_col(f);
    }
    let mut dual = complex.dual_boundary_matrix();
    for &f in &measured_faces {
        dual.clear_row(f);
    }
    for &e in &measured_edges {
        dual.clear_col(e);
    }
    Ok(RelativeOperators {
        d2r,
        d2r_dual: smooth_dual(complex, &dual),
        measured_edges,
        measured_faces,
        outermost_edges: outermost_edge_indices(complex),
    })
}

/// ∂₁ relative to the primal lines: measured-edge columns and the rows of
/// their endpoint vertices zeroed.
pub fn relative_d1(complex: &ChainComplex, pattern: &MeasurementPattern) -> Result<BitMatrix, VerifyError> {
    check_shape(complex, pattern)?;
    let mut d1 = complex.boundary_matrix(1).expect("1 is a valid dimension").clone();
    for e in pattern.primal_z() {
        if let Cell::Edge(a, b) = *e {
            for v in [a, b] {
                d1.clear_row(complex.index_of(&Cell::Vertex(v)).expect("endpoint of a valid edge"));
            }
        }
        d1.clear_col(complex.index_of(e).expect("validated edge"));
    }
    Ok(d1)
}

impl RelativeOperators {
    /// The operator whose column space holds the boundaries of `kind` surfaces.
    #[must_use]
    pub fn operator(&self, kind: TargetKind) -> &BitMatrix {
        match kind {
            TargetKind::Primal => &self.d2r,
            TargetKind::Dual => &self.d2r_dual,
        }
    }
}

/// Encodes a target's boundary cells as a chain vector.
pub fn target_vector(complex: &ChainComplex, target: &LogicalTarget) -> Result<BitVector, VerifyError> {
    let want = target.kind.boundary_dim();
    let mut v = BitVector::zeros(complex.count(want));
    for cell in &target.boundary {
        if cell.dim() != want {
            return Err(VerifyError::TargetDimension {
                id: target.id.clone(),
                cell: cell.to_string(),
                kind: target.kind,
                got: cell.dim(),
                want,
            });
        }
        let i = complex
            .index_of(cell)
            .ok_or_else(|| VerifyError::TargetCell { id: target.id.clone(), cell: cell.to_string() })?;
        v.set(i, true);
    }
    Ok(v)
}

/// Cells of a surface given as a chain over faces (primal) or edges (dual).
#[must_use]
pub fn chain_cells(complex: &ChainComplex, kind: TargetKind, chain: &BitVector) -> Vec<Cell> {
    let dim = match kind {
        TargetKind::Primal => 2,
        TargetKind::Dual => 1,
    };
    chain.iter_ones().map(|i| complex.cells(dim)[i]).collect()
}

/// Checks every target of `spec`. Targets are grouped by kind and each group
/// is answered by a single elimination; the two groups run in parallel.
pub fn verify(complex: &ChainComplex, spec: &CircuitSpec, want_witness: bool) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let ops = relative_operators(complex, &spec.pattern)?;
    let vectors: Vec<BitVector> =
        spec.targets.iter().map(|t| target_vector(complex, t)).collect::<Result<_, _>>()?;

    let group = |kind: TargetKind| -> Vec<usize> { (0..spec.targets.len()).filter(|&i| spec.targets[i].kind == kind).collect() };
    let run = |kind: TargetKind| {
        let ids = group(kind);
        let rhs: Vec<BitVector> = ids.iter().map(|&i| vectors[i].clone()).collect();
        let out = gf2::analyze(ops.operator(kind), &rhs, want_witness).expect("target lengths match operator rows");
        ids.into_iter().zip(out).collect::<Vec<_>>()
    };
    let (primal, dual) = rayon::join(|| run(TargetKind::Primal), || run(TargetKind::Dual));

    let mut results: Vec<Option<TargetVerdict>> = vec![None; spec.targets.len()];
    for (i, s) in primal.into_iter().chain(dual) {
        let t = &spec.targets[i];
        let mut warnings = Vec::new();
        let off = t.off_plane_cells(&spec.pattern.shape());
        if !off.is_empty() && !t.interior {
            warnings.push(format!("{} boundary cell(s) lie off the in/out planes", off.len()));
        }
        results[i] = Some(TargetVerdict {
            id: t.id.clone(),
            kind: t.kind,
            accepted: s.is_solvable(),
            rank: s.rank,
            aug_rank: s.aug_rank,
            witness: s.solution,
            warnings,
        });
    }
    Ok(VerificationReport {
        circuit: spec.name.clone(),
        shape: complex.shape(),
        targets: results.into_iter().map(|r| r.expect("every target answered")).collect(),
        warnings: validate_pattern(&spec.pattern).iter().map(ToString::to_string).collect(),
        elapsed: start.elapsed(),
    })
}

/// Convenience for checking a single boundary chain against a pattern.
pub fn target_realized(
    complex: &ChainComplex,
    pattern: &MeasurementPattern,
    kind: TargetKind,
    boundary: &BTreeSet<Cell>,
) -> Result<bool, VerifyError> {
    let ops = relative_operators(complex, pattern)?;
    let mut t = LogicalTarget::new("query", kind);
    t.boundary = boundary.clone();
    let v = target_vector(complex, &t)?;
    Ok(gf2::solvable(ops.operator(kind), &v).expect("target length matches operator rows"))
}
