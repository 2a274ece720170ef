//! The cuboid cell complex and its boundary operators.
//!
//! Coordinates are stored doubled so that half-integer cube midpoints stay
//! exact: a vertex `(1, 0, 2)` is `[2, 0, 4]` and a cube midpoint
//! `(0.5, 0.5, 0.5)` is `[1, 1, 1]`. Edges are pairs of adjacent vertices and
//! faces are pairs of adjacent cube midpoints; both keep the smaller endpoint
//! first. A face on the outer boundary pairs an interior cube with a virtual
//! one just outside the cuboid.
//!
//! Cells of each dimension are ordered by orientation axis (x, then y, then z;
//! vertices and cubes have a single group) and then lexicographically by their
//! lower endpoint. The [`Ord`] impl on [`Cell`] is this order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gf2::BitMatrix;

/// A point in doubled coordinates.
pub type P3 = [i32; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("lattice extents must be at least 1, got ({0}, {1}, {2})")]
    ZeroExtent(usize, usize, usize),
    #[error("cell {0} is not part of the complex")]
    NotInComplex(String),
    #[error("boundary operator index must be 1, 2 or 3, got {0}")]
    DimensionOutOfRange(usize),
    #[error("vertices have no boundary")]
    VertexBoundary,
}

/// Number of primal vertices along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeShape {
    s: [usize; 3],
}

impl LatticeShape {
    pub fn new(s1: usize, s2: usize, s3: usize) -> Result<Self, ComplexError> {
        if s1 == 0 || s2 == 0 || s3 == 0 {
            return Err(ComplexError::ZeroExtent(s1, s2, s3));
        }
        Ok(Self { s: [s1, s2, s3] })
    }

    #[must_use]
    pub fn extents(&self) -> [usize; 3] {
        self.s
    }

    /// Closed-form cell count in dimension `n`.
    #[must_use]
    pub fn cell_count(&self, n: usize) -> usize {
        let [a, b, c] = self.s;
        match n {
            0 => a * b * c,
            1 => b * c * (a - 1) + a * c * (b - 1) + a * b * (c - 1),
            2 => a * (b - 1) * (c - 1) + b * (a - 1) * (c - 1) + c * (a - 1) * (b - 1),
            3 => (a - 1) * (b - 1) * (c - 1),
            _ => 0,
        }
    }

    /// Largest doubled vertex coordinate along `axis`.
    #[must_use]
    pub fn max_doubled(&self, axis: usize) -> i32 {
        2 * (self.s[axis] as i32 - 1)
    }

    fn vertex_ok(&self, p: P3) -> bool {
        (0..3).all(|k| p[k] % 2 == 0 && p[k] >= 0 && p[k] <= self.max_doubled(k))
    }

    fn cube_ok(&self, p: P3) -> bool {
        (0..3).all(|k| self.cube_coord_ok(k, p[k]))
    }

    fn cube_coord_ok(&self, axis: usize, v: i32) -> bool {
        v.rem_euclid(2) == 1 && v >= 1 && v < self.max_doubled(axis)
    }
}

impl fmt::Display for LatticeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s[0], self.s[1], self.s[2])
    }
}

/// A cell in doubled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Vertex(P3),
    Edge(P3, P3),
    Face(P3, P3),
    Cube(P3),
}

fn axis_between(a: P3, b: P3) -> Option<usize> {
    let diffs: Vec<usize> = (0..3).filter(|&k| a[k] != b[k]).collect();
    match diffs.as_slice() {
        [k] if b[*k] - a[*k] == 2 => Some(*k),
        _ => None,
    }
}

fn shifted(p: P3, axis: usize, by: i32) -> P3 {
    let mut q = p;
    q[axis] += by;
    q
}

impl Cell {
    /// An edge from `lo` one step along `axis`.
    #[must_use]
    pub fn edge_from(lo: P3, axis: usize) -> Cell {
        Cell::Edge(lo, shifted(lo, axis, 2))
    }

    /// A face from cube midpoint `lo` one step along `axis`.
    #[must_use]
    pub fn face_from(lo: P3, axis: usize) -> Cell {
        Cell::Face(lo, shifted(lo, axis, 2))
    }

    /// Builds an edge or face from two endpoints in either order.
    #[must_use]
    pub fn pair(dim: usize, a: P3, b: P3) -> Option<Cell> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        axis_between(lo, hi)?;
        match dim {
            1 => Some(Cell::Edge(lo, hi)),
            2 => Some(Cell::Face(lo, hi)),
            _ => None,
        }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::Edge(..) => 1,
            Cell::Face(..) => 2,
            Cell::Cube(_) => 3,
        }
    }

    /// Edge direction or face normal; `None` for vertices, cubes and malformed pairs.
    #[must_use]
    pub fn axis(&self) -> Option<usize> {
        match *self {
            Cell::Edge(a, b) | Cell::Face(a, b) => axis_between(a, b),
            _ => None,
        }
    }

    /// Centre of the cell in doubled coordinates.
    #[must_use]
    pub fn center(&self) -> P3 {
        match *self {
            Cell::Vertex(p) | Cell::Cube(p) => p,
            Cell::Edge(a, b) | Cell::Face(a, b) => [(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2],
        }
    }

    /// The lower endpoint (or the point itself).
    #[must_use]
    pub fn lower(&self) -> P3 {
        match *self {
            Cell::Vertex(p) | Cell::Cube(p) => p,
            Cell::Edge(a, _) | Cell::Face(a, _) => a,
        }
    }

    fn sort_key(&self) -> (usize, usize, P3) {
        (self.dim(), self.axis().unwrap_or(0), self.lower())
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| format!("{self:?}").cmp(&format!("{other:?}")))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Formats a doubled coordinate as an integer or a `.5` decimal.
#[must_use]
pub fn format_half(v: i32) -> String {
    if v % 2 == 0 {
        (v / 2).to_string()
    } else {
        let sign = if v < 0 { "-" } else { "" };
        format!("{sign}{}.5", v.abs() / 2)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<P3> = match *self {
            Cell::Vertex(p) | Cell::Cube(p) => vec![p],
            Cell::Edge(a, b) | Cell::Face(a, b) => vec![a, b],
        };
        let parts: Vec<String> = pts.iter().flat_map(|p| p.iter().map(|&v| format_half(v))).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A cell together with its index among the cells of its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellRef {
    pub cell: Cell,
    pub index: usize,
}

/// The cell complex of a cuboid, with index dictionaries and boundary matrices.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    shape: LatticeShape,
    cells: [Vec<Cell>; 4],
    index: [HashMap<Cell, usize>; 4],
    boundary: [BitMatrix; 3],
}

fn enumerate(shape: &LatticeShape) -> [Vec<Cell>; 4] {
    let range = |k: usize, odd: bool| -> Vec<i32> {
        let max = shape.max_doubled(k);
        if odd {
            (1..max).step_by(2).collect()
        } else {
            (0..=max).step_by(2).collect()
        }
    };
    let grid = |odd: [bool; 3]| -> Vec<P3> {
        let mut out = Vec::new();
        for &x in &range(0, odd[0]) {
            for &y in &range(1, odd[1]) {
                for &z in &range(2, odd[2]) {
                    out.push([x, y, z]);
                }
            }
        }
        out
    };
    let vertices = grid([false; 3]).into_iter().map(Cell::Vertex).collect();
    let cubes = grid([true; 3]).into_iter().map(Cell::Cube).collect();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for axis in 0..3 {
        edges.extend(
            grid([false; 3])
                .into_iter()
                .filter(|p| p[axis] < shape.max_doubled(axis))
                .map(|p| Cell::edge_from(p, axis)),
        );
        // Face centres sit on vertex planes along the normal and on cube
        // coordinates across it.
        let mut odd = [true; 3];
        odd[axis] = false;
        faces.extend(grid(odd).into_iter().map(|c| Cell::face_from(shifted(c, axis, -1), axis)));
    }
    [vertices, edges, faces, cubes]
}

impl ChainComplex {
    #[must_use]
    pub fn build(shape: LatticeShape) -> Self {
        let cells = enumerate(&shape);
        let index = cells.clone().map(|list| list.into_iter().enumerate().map(|(i, c)| (c, i)).collect());
        let mut out = Self {
            shape,
            cells,
            index,
            boundary: [BitMatrix::zeros(0, 0), BitMatrix::zeros(0, 0), BitMatrix::zeros(0, 0)],
        };
        for n in 1..=3 {
            let mut m = BitMatrix::zeros(out.cells[n - 1].len(), out.cells[n].len());
            for (j, cell) in out.cells[n].iter().enumerate() {
                for b in raw_boundary(cell) {
                    m.set(out.index[n - 1][&b], j, true);
                }
            }
            out.boundary[n - 1] = m;
        }
        out
    }

    #[must_use]
    pub fn shape(&self) -> LatticeShape {
        self.shape
    }

    /// Number of cells of dimension `n`.
    #[must_use]
    pub fn count(&self, n: usize) -> usize {
        self.cells.get(n).map_or(0, Vec::len)
    }

    /// # Panics
    /// Panics if `n > 3`.
    #[must_use]
    pub fn cells(&self, n: usize) -> &[Cell] {
        &self.cells[n]
    }

    #[must_use]
    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        self.index[cell.dim()].get(cell).copied()
    }

    #[must_use]
    pub fn contains(&self, cell: &Cell) -> bool {
        self.index_of(cell).is_some()
    }

    pub fn cell_ref(&self, cell: &Cell) -> Result<CellRef, ComplexError> {
        self.index_of(cell)
            .map(|index| CellRef { cell: *cell, index })
            .ok_or_else(|| ComplexError::NotInComplex(cell.to_string()))
    }

    /// The cells of dimension `n − 1` incident to `cell`.
    pub fn boundary_of(&self, cell: &Cell) -> Result<Vec<CellRef>, ComplexError> {
        if cell.dim() == 0 {
            return Err(ComplexError::VertexBoundary);
        }
        self.cell_ref(cell)?;
        raw_boundary(cell).into_iter().map(|b| self.cell_ref(&b)).collect()
    }

    /// The matrix of ∂ₙ, with rows indexed by (n−1)-cells and columns by n-cells.
    pub fn boundary_matrix(&self, n: usize) -> Result<&BitMatrix, ComplexError> {
        match n {
            1..=3 => Ok(&self.boundary[n - 1]),
            _ => Err(ComplexError::DimensionOutOfRange(n)),
        }
    }

    /// The dual boundary on dual 2-chains, written on primal cells: the transpose of ∂₂.
    #[must_use]
    pub fn dual_boundary_matrix(&self) -> BitMatrix {
        self.boundary[1].transpose()
    }

    /// Whether an edge lies entirely inside one of the six boundary planes.
    #[must_use]
    pub fn is_outermost_edge(&self, cell: &Cell) -> bool {
        let Some(axis) = cell.axis().filter(|_| cell.dim() == 1) else { return false };
        let c = cell.center();
        (0..3).any(|k| k != axis && (c[k] == 0 || c[k] == self.shape.max_doubled(k)))
    }

    /// Checks a cell's coordinates against the shape without touching the dictionaries.
    #[must_use]
    pub fn shape_admits(shape: &LatticeShape, cell: &Cell) -> bool {
        match *cell {
            Cell::Vertex(p) => shape.vertex_ok(p),
            Cell::Cube(p) => shape.cube_ok(p),
            Cell::Edge(a, b) => axis_between(a, b).is_some() && shape.vertex_ok(a) && shape.vertex_ok(b),
            Cell::Face(a, b) => {
                let Some(axis) = axis_between(a, b) else { return false };
                let c = cell.center();
                (0..3).all(|k| {
                    if k == axis {
                        c[k] % 2 == 0 && c[k] >= 0 && c[k] <= shape.max_doubled(k)
                    } else {
                        shape.cube_coord_ok(k, c[k])
                    }
                })
            }
        }
    }
}

fn raw_boundary(cell: &Cell) -> Vec<Cell> {
    match *cell {
        Cell::Vertex(_) => Vec::new(),
        Cell::Edge(a, b) => vec![Cell::Vertex(a), Cell::Vertex(b)],
        Cell::Face(..) => {
            let normal = cell.axis().expect("face endpoints must be adjacent");
            let c = cell.center();
            let mut out = Vec::with_capacity(4);
            for along in (0..3).filter(|&k| k != normal) {
                let across = 3 - normal - along;
                for off in [-1, 1] {
                    let lo = shifted(shifted(c, along, -1), across, off);
                    out.push(Cell::edge_from(lo, along));
                }
            }
            out
        }
        Cell::Cube(m) => {
            let mut out = Vec::with_capacity(6);
            for axis in 0..3 {
                out.push(Cell::face_from(shifted(m, axis, -2), axis));
                out.push(Cell::face_from(m, axis));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(a: usize, b: usize, c: usize) -> ChainComplex {
        ChainComplex::build(LatticeShape::new(a, b, c).unwrap())
    }

    #[test]
    fn unit_cube_counts() {
        let c = cx(2, 2, 2);
        assert_eq!((0..4).map(|n| c.count(n)).collect::<Vec<_>>(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn zero_extent_rejected() {
        assert_eq!(LatticeShape::new(0, 2, 2), Err(ComplexError::ZeroExtent(0, 2, 2)));
    }

    #[test]
    fn degenerate_shape_has_no_cubes() {
        let c = cx(2, 1, 1);
        assert_eq!((0..4).map(|n| c.count(n)).collect::<Vec<_>>(), vec![2, 1, 0, 0]);
        let d1 = c.boundary_matrix(1).unwrap();
        assert_eq!(*d1, BitMatrix::from_rows(&[[1u8], [1]]));
    }

    #[test]
    fn edge_boundary_is_its_endpoints() {
        let c = cx(2, 2, 2);
        let b = c.boundary_of(&Cell::Edge([0, 0, 0], [2, 0, 0])).unwrap();
        let cells: Vec<Cell> = b.iter().map(|r| r.cell).collect();
        assert_eq!(cells, vec![Cell::Vertex([0, 0, 0]), Cell::Vertex([2, 0, 0])]);
    }

    #[test]
    fn face_boundary_matches_sextuple_rule() {
        // Face between cube midpoints (0.5,0.5,0.5) and (1.5,0.5,0.5) on shape (3,2,2).
        let c = cx(3, 2, 2);
        let f = Cell::Face([1, 1, 1], [3, 1, 1]);
        let mut got: Vec<Cell> = c.boundary_of(&f).unwrap().into_iter().map(|r| r.cell).collect();
        got.sort();
        let mut want = vec![
            Cell::Edge([2, 0, 0], [2, 0, 2]),
            Cell::Edge([2, 2, 0], [2, 2, 2]),
            Cell::Edge([2, 0, 0], [2, 2, 0]),
            Cell::Edge([2, 0, 2], [2, 2, 2]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn cube_has_six_faces() {
        let c = cx(3, 3, 3);
        for cube in c.cells(3) {
            assert_eq!(c.boundary_of(cube).unwrap().len(), 6);
        }
    }

    #[test]
    fn foreign_cell_rejected() {
        let c = cx(2, 2, 2);
        assert!(matches!(c.boundary_of(&Cell::Edge([2, 0, 0], [4, 0, 0])), Err(ComplexError::NotInComplex(_))));
        assert_eq!(c.boundary_of(&Cell::Vertex([0, 0, 0])), Err(ComplexError::VertexBoundary));
        assert!(c.boundary_matrix(4).is_err());
    }

    #[test]
    fn enumeration_is_sorted() {
        let c = cx(3, 4, 2);
        for n in 0..4 {
            let cells = c.cells(n);
            assert!(cells.windows(2).all(|w| w[0] < w[1]), "dimension {n}");
        }
    }

    #[test]
    fn boundary_faces_use_virtual_cubes() {
        let c = cx(2, 2, 2);
        assert!(c.contains(&Cell::Face([-1, 1, 1], [1, 1, 1])));
        assert!(c.contains(&Cell::Face([1, 1, 1], [3, 1, 1])));
        assert!(!c.contains(&Cell::Face([3, 1, 1], [5, 1, 1])));
    }

    #[test]
    fn display_uses_half_integers() {
        assert_eq!(Cell::Face([-1, 1, 3], [1, 1, 3]).to_string(), "(-0.5,0.5,1.5,0.5,0.5,1.5)");
        assert_eq!(Cell::Edge([0, 2, 0], [2, 2, 0]).to_string(), "(0,1,0,1,1,0)");
    }

    #[test]
    fn outermost_edges() {
        let c = cx(4, 4, 4);
        assert!(c.is_outermost_edge(&Cell::Edge([0, 2, 2], [0, 4, 2])));
        assert!(!c.is_outermost_edge(&Cell::Edge([0, 2, 2], [2, 2, 2])));
    }
}
