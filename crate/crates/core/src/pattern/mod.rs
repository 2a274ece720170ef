//! Measurement patterns and the logical targets a pattern is meant to realize.
//!
//! Primal Z-lines are sets of edges. Dual Z-lines are sets of faces, each
//! face standing for the dual edge that pierces it. Every other bulk qubit is
//! implicitly measured in the X basis.

mod catalog;
mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::complex::{format_half, Cell, ChainComplex, ComplexError, LatticeShape, P3};

pub use catalog::{catalog, catalog_entry, catalog_names, catalog_source};
pub use format::{parse_circuit, serialize_circuit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: cell {cell} is outside the lattice {shape}")]
    OutOfRange { line: usize, cell: String, shape: LatticeShape },
    #[error("line {line}: duplicate cell {cell}")]
    DuplicateCell { line: usize, cell: String },
    #[error("line {line}: unknown section `{name}`")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: duplicate target id `{id}`")]
    DuplicateTarget { line: usize, id: String },
    #[error("{0}")]
    Shape(#[from] ComplexError),
    #[error("cell {cell} has dimension {got}, expected {expected}")]
    WrongDimension { cell: String, got: usize, expected: usize },
    #[error("cell {cell} is outside the lattice {shape}")]
    NotInShape { cell: String, shape: LatticeShape },
}

/// Which lattice a target or surface lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetKind {
    /// Boundary made of primal edges; the surface is a set of primal faces.
    Primal,
    /// Boundary made of faces (dual edges); the surface is a set of primal edges (dual faces).
    Dual,
}

impl TargetKind {
    /// Dimension of the primal cells carrying the target boundary.
    #[must_use]
    pub fn boundary_dim(self) -> usize {
        match self {
            TargetKind::Primal => 1,
            TargetKind::Dual => 2,
        }
    }

    #[must_use]
    pub fn keyword(self) -> &'static str {
        match self {
            TargetKind::Primal => "PRIMAL",
            TargetKind::Dual => "DUAL",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::Primal => "primal",
            TargetKind::Dual => "dual",
        })
    }
}

/// Z-measured primal edges and dual edges (as faces) on a cuboid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementPattern {
    shape: LatticeShape,
    primal_z: BTreeSet<Cell>,
    dual_z: BTreeSet<Cell>,
}

impl MeasurementPattern {
    #[must_use]
    pub fn empty(shape: LatticeShape) -> Self {
        Self { shape, primal_z: BTreeSet::new(), dual_z: BTreeSet::new() }
    }

    pub fn new<I, J>(shape: LatticeShape, primal_z: I, dual_z: J) -> Result<Self, PatternError>
    where
        I: IntoIterator<Item = Cell>,
        J: IntoIterator<Item = Cell>,
    {
        let mut p = Self::empty(shape);
        for c in primal_z {
            p.insert_primal(c)?;
        }
        for c in dual_z {
            p.insert_dual(c)?;
        }
        Ok(p)
    }

    /// Adds a measured edge. Returns whether it was new.
    pub fn insert_primal(&mut self, cell: Cell) -> Result<bool, PatternError> {
        check_cell(&self.shape, &cell, 1)?;
        Ok(self.primal_z.insert(cell))
    }

    /// Adds a measured face. Returns whether it was new.
    pub fn insert_dual(&mut self, cell: Cell) -> Result<bool, PatternError> {
        check_cell(&self.shape, &cell, 2)?;
        Ok(self.dual_z.insert(cell))
    }

    #[must_use]
    pub fn shape(&self) -> LatticeShape {
        self.shape
    }

    #[must_use]
    pub fn primal_z(&self) -> &BTreeSet<Cell> {
        &self.primal_z
    }

    #[must_use]
    pub fn dual_z(&self) -> &BTreeSet<Cell> {
        &self.dual_z
    }

    /// All measured cells, primal edges first, each group in canonical order.
    pub fn measured_cells(&self) -> impl Iterator<Item = &Cell> {
        self.primal_z.iter().chain(&self.dual_z)
    }

    #[must_use]
    pub fn measured_count(&self) -> usize {
        self.primal_z.len() + self.dual_z.len()
    }

    /// A copy with the `n`-th measured cell (1-based, canonical order) un-measured.
    ///
    /// This deliberately damages the pattern; it exists for negative controls.
    #[must_use]
    pub fn without_measured(&self, n: usize) -> Option<Self> {
        let cell = *self.measured_cells().nth(n.checked_sub(1)?)?;
        let mut out = self.clone();
        if cell.dim() == 1 {
            out.primal_z.remove(&cell);
        } else {
            out.dual_z.remove(&cell);
        }
        Some(out)
    }
}

pub(crate) fn check_cell(shape: &LatticeShape, cell: &Cell, dim: usize) -> Result<(), PatternError> {
    if cell.dim() != dim {
        return Err(PatternError::WrongDimension { cell: cell.to_string(), got: cell.dim(), expected: dim });
    }
    if !ChainComplex::shape_admits(shape, cell) {
        return Err(PatternError::NotInShape { cell: cell.to_string(), shape: *shape });
    }
    Ok(())
}

/// A boundary chain on the in/out planes that a surface must connect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalTarget {
    pub id: String,
    pub kind: TargetKind,
    pub boundary: BTreeSet<Cell>,
    pub description: String,
    /// Marks a test chain that intentionally leaves the in/out planes.
    pub interior: bool,
}

impl LogicalTarget {
    #[must_use]
    pub fn new(id: impl Into<String>, kind: TargetKind) -> Self {
        Self { id: id.into(), kind, boundary: BTreeSet::new(), description: String::new(), interior: false }
    }

    /// Toggles a cell in the boundary chain (GF(2) addition).
    pub fn toggle(&mut self, cell: Cell) {
        if !self.boundary.remove(&cell) {
            self.boundary.insert(cell);
        }
    }

    /// Cells that sit on neither the in plane nor the out plane.
    #[must_use]
    pub fn off_plane_cells(&self, shape: &LatticeShape) -> Vec<Cell> {
        self.boundary.iter().copied().filter(|c| io_plane(shape, self.kind, c).is_none()).collect()
    }
}

/// Which of the two distinguished planes a target cell sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IoPlane {
    In,
    Out,
}

/// Locates a target cell on the in (x = 0) or out (x = s1 − 1) plane.
///
/// Primal cells are edges lying in those planes. Dual cells are faces whose
/// dual edge runs inside the first or last layer of cubes, parallel to the plane.
#[must_use]
pub fn io_plane(shape: &LatticeShape, kind: TargetKind, cell: &Cell) -> Option<IoPlane> {
    let x_max = shape.max_doubled(0);
    let x = cell.center()[0];
    let (first, last) = match kind {
        TargetKind::Primal if cell.dim() == 1 && cell.axis() != Some(0) => (0, x_max),
        TargetKind::Dual if cell.dim() == 2 && cell.axis() != Some(0) => (1, x_max - 1),
        _ => return None,
    };
    if x == first {
        Some(IoPlane::In)
    } else if x == last {
        Some(IoPlane::Out)
    } else {
        None
    }
}

/// A pattern plus the targets it should realize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSpec {
    pub name: String,
    pub pattern: MeasurementPattern,
    pub targets: Vec<LogicalTarget>,
    pub metadata: BTreeMap<String, String>,
}

impl CircuitSpec {
    #[must_use]
    pub fn target(&self, id: &str) -> Option<&LogicalTarget> {
        self.targets.iter().find(|t| t.id == id)
    }
}

/// A non-fatal issue found in a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternWarning {
    /// A primal Z-line ends at a vertex strictly inside the bulk.
    DanglingPrimal { vertex: P3 },
    /// A dual Z-line ends at a cube strictly inside the bulk.
    DanglingDual { cube: P3 },
}

impl fmt::Display for PatternWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pt = |p: &P3| p.iter().map(|&v| format_half(v)).collect::<Vec<_>>().join(",");
        match self {
            PatternWarning::DanglingPrimal { vertex } => {
                write!(f, "primal Z-line ends inside the bulk at vertex ({})", pt(vertex))
            }
            PatternWarning::DanglingDual { cube } => write!(f, "dual Z-line ends inside the bulk at cube ({})", pt(cube)),
        }
    }
}

/// Reports Z-lines that neither close up nor end on the lattice boundary.
#[must_use]
pub fn validate_pattern(pattern: &MeasurementPattern) -> Vec<PatternWarning> {
    let shape = pattern.shape();
    let mut vertex_parity: BTreeMap<P3, bool> = BTreeMap::new();
    for e in pattern.primal_z() {
        if let Cell::Edge(a, b) = *e {
            for v in [a, b] {
                *vertex_parity.entry(v).or_default() ^= true;
            }
        }
    }
    let mut cube_parity: BTreeMap<P3, bool> = BTreeMap::new();
    for f in pattern.dual_z() {
        if let Cell::Face(a, b) = *f {
            for m in [a, b] {
                *cube_parity.entry(m).or_default() ^= true;
            }
        }
    }
    let on_boundary = |v: &P3| (0..3).any(|k| v[k] == 0 || v[k] == shape.max_doubled(k));
    let mut out: Vec<PatternWarning> = vertex_parity
        .into_iter()
        .filter(|(v, odd)| *odd && !on_boundary(v))
        .map(|(vertex, _)| PatternWarning::DanglingPrimal { vertex })
        .collect();
    out.extend(
        cube_parity
            .into_iter()
            .filter(|(m, odd)| *odd && ChainComplex::shape_admits(&shape, &Cell::Cube(*m)))
            .map(|(cube, _)| PatternWarning::DanglingDual { cube }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(a: usize, b: usize, c: usize) -> LatticeShape {
        LatticeShape::new(a, b, c).unwrap()
    }

    #[test]
    fn isolated_edge_has_two_dangling_ends() {
        let p = MeasurementPattern::new(shape(5, 5, 5), [Cell::edge_from([4, 4, 4], 0)], []).unwrap();
        assert_eq!(validate_pattern(&p).len(), 2);
    }

    #[test]
    fn closed_dual_loop_has_no_warnings() {
        // Four faces around the edge (1,1,1)-(2,1,1), as a ring of dual edges.
        let c = ChainComplex::build(shape(4, 4, 4));
        let edge = Cell::edge_from([2, 2, 2], 0);
        let col = c.index_of(&edge).unwrap();
        let d2 = c.boundary_matrix(2).unwrap();
        let faces: Vec<Cell> = c.cells(2).iter().enumerate().filter(|(j, _)| d2.get(col, *j)).map(|(_, f)| *f).collect();
        assert_eq!(faces.len(), 4);
        let p = MeasurementPattern::new(c.shape(), [], faces).unwrap();
        assert!(validate_pattern(&p).is_empty());
    }

    #[test]
    fn line_through_the_lattice_is_clean() {
        let edges = (0..4).map(|x| Cell::edge_from([2 * x, 2, 2], 0));
        let p = MeasurementPattern::new(shape(5, 3, 3), edges, []).unwrap();
        assert!(validate_pattern(&p).is_empty());
    }

    #[test]
    fn rejects_wrong_dimension_and_range() {
        let mut p = MeasurementPattern::empty(shape(3, 3, 3));
        assert!(matches!(p.insert_primal(Cell::Face([1, 1, 1], [3, 1, 1])), Err(PatternError::WrongDimension { .. })));
        assert!(matches!(p.insert_primal(Cell::edge_from([4, 0, 0], 0)), Err(PatternError::NotInShape { .. })));
    }

    #[test]
    fn without_measured_counts_primal_first() {
        let p = MeasurementPattern::new(
            shape(3, 3, 3),
            [Cell::edge_from([0, 2, 2], 0)],
            [Cell::face_from([1, 1, 1], 0)],
        )
        .unwrap();
        let q = p.without_measured(2).unwrap();
        assert_eq!(q.primal_z().len(), 1);
        assert!(q.dual_z().is_empty());
        assert!(p.without_measured(0).is_none());
        assert!(p.without_measured(3).is_none());
    }

    #[test]
    fn plane_membership() {
        let s = shape(4, 3, 3);
        assert_eq!(io_plane(&s, TargetKind::Primal, &Cell::edge_from([0, 0, 2], 1)), Some(IoPlane::In));
        assert_eq!(io_plane(&s, TargetKind::Primal, &Cell::edge_from([6, 0, 2], 2)), Some(IoPlane::Out));
        assert_eq!(io_plane(&s, TargetKind::Primal, &Cell::edge_from([0, 0, 2], 0)), None);
        assert_eq!(io_plane(&s, TargetKind::Dual, &Cell::face_from([1, 1, 1], 1)), Some(IoPlane::In));
        assert_eq!(io_plane(&s, TargetKind::Dual, &Cell::face_from([5, 1, 1], 2)), Some(IoPlane::Out));
        assert_eq!(io_plane(&s, TargetKind::Dual, &Cell::face_from([3, 1, 1], 2)), None);
    }
}
