//! Exhaustive surface search, used as an independent check of the rank test.
//!
//! The search never touches the boundary matrices. It rebuilds incidences
//! from cell geometry and walks the free cells in spatial order, checking each
//! boundary cell's parity as soon as its last free neighbour is decided.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::complex::{Cell, ChainComplex};
use crate::pattern::{MeasurementPattern, TargetKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{free} free cells exceed the oracle limit of {limit}")]
    TooManyFreeCells { free: usize, limit: usize },
    #[error("target cell {0} is not a boundary cell of the requested kind")]
    BadTargetCell(String),
    #[error("pattern shape does not match the complex")]
    ShapeMismatch,
}

struct Problem {
    /// For each free cell, in search order, the constraint rows it touches.
    touches: Vec<Vec<usize>>,
    /// Required parity of each constraint row.
    want: Vec<bool>,
    /// Rows whose last free cell is the given search position.
    closes: Vec<Vec<usize>>,
    /// Rows with no free cell at all.
    fixed: Vec<usize>,
}

fn build(
    complex: &ChainComplex,
    pattern: &MeasurementPattern,
    kind: TargetKind,
    target: &BTreeSet<Cell>,
) -> Result<Problem, OracleError> {
    if complex.shape() != pattern.shape() {
        return Err(OracleError::ShapeMismatch);
    }
    let (row_dim, col_dim) = match kind {
        TargetKind::Primal => (1, 2),
        TargetKind::Dual => (2, 1),
    };
    let rows: Vec<Cell> = complex.cells(row_dim).to_vec();
    let row_pos: HashMap<Cell, usize> = rows.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let row_measured = |c: &Cell| match kind {
        TargetKind::Primal => pattern.primal_z().contains(c),
        TargetKind::Dual => pattern.dual_z().contains(c),
    };
    let col_free = |c: &Cell| match kind {
        TargetKind::Primal => !pattern.dual_z().contains(c),
        TargetKind::Dual => !pattern.primal_z().contains(c) && !complex.is_outermost_edge(c),
    };

    let mut free: Vec<Cell> = complex.cells(col_dim).iter().copied().filter(|c| col_free(c)).collect();
    free.sort_by_key(|c| {
        let m = c.center();
        (m, c.axis())
    });

    let mut touches: Vec<Vec<usize>> = vec![Vec::new(); free.len()];
    match kind {
        TargetKind::Primal => {
            for (k, face) in free.iter().enumerate() {
                for e in complex.boundary_of(face).expect("face of the complex") {
                    touches[k].push(row_pos[&e.cell]);
                }
            }
        }
        TargetKind::Dual => {
            // A face belongs to the dual boundary of every edge on its own boundary.
            let mut faces_of_edge: HashMap<Cell, Vec<usize>> = HashMap::new();
            for (fi, face) in rows.iter().enumerate() {
                for e in complex.boundary_of(face).expect("face of the complex") {
                    faces_of_edge.entry(e.cell).or_default().push(fi);
                }
            }
            for (k, edge) in free.iter().enumerate() {
                touches[k] = faces_of_edge.get(edge).cloned().unwrap_or_default();
            }
        }
    }
    for t in &mut touches {
        t.retain(|&r| !row_measured(&rows[r]));
    }

    let mut want = vec![false; rows.len()];
    for c in target {
        let r = *row_pos.get(c).ok_or_else(|| OracleError::BadTargetCell(c.to_string()))?;
        want[r] = true;
    }
    let mut last: Vec<Option<usize>> = vec![None; rows.len()];
    for (k, t) in touches.iter().enumerate() {
        for &r in t {
            last[r] = Some(k);
        }
    }
    let mut closes = vec![Vec::new(); free.len()];
    let mut fixed = Vec::new();
    for (r, l) in last.iter().enumerate() {
        match l {
            Some(k) => closes[*k].push(r),
            None => fixed.push(r),
        }
    }
    Ok(Problem { touches, want, closes, fixed })
}

impl Problem {
    fn search(&self, k: usize, parity: &mut Vec<bool>) -> bool {
        if k == self.touches.len() {
            return true;
        }
        for take in [false, true] {
            if take {
                for &r in &self.touches[k] {
                    parity[r] ^= true;
                }
            }
            let ok = self.closes[k].iter().all(|&r| parity[r] == self.want[r]);
            if ok && self.search(k + 1, parity) {
                return true;
            }
            if take {
                for &r in &self.touches[k] {
                    parity[r] ^= true;
                }
            }
        }
        false
    }
}

/// Decides by exhaustive search whether some surface over the free cells has
/// relative boundary exactly `target`.
///
/// Free cells are unmeasured faces for primal targets and unmeasured,
/// non-outermost edges for dual targets. The search refuses to run when there
/// are more than `max_free_cells` of them.
pub fn brute_force_surface_exists(
    complex: &ChainComplex,
    pattern: &MeasurementPattern,
    kind: TargetKind,
    target: &BTreeSet<Cell>,
    max_free_cells: usize,
) -> Result<bool, OracleError> {
    let problem = build(complex, pattern, kind, target)?;
    let free = problem.touches.len();
    if free > max_free_cells {
        return Err(OracleError::TooManyFreeCells { free, limit: max_free_cells });
    }
    if problem.fixed.iter().any(|&r| problem.want[r]) {
        return Ok(false);
    }
    let mut parity = vec![false; problem.want.len()];
    Ok(problem.search(0, &mut parity))
}
