//! Shared inputs for the benchmarks.

use rhg_core::pattern::catalog_entry;
use rhg_core::{BitMatrix, ChainComplex, CircuitSpec};

/// Deterministic pseudo-random `rows × cols` matrix with roughly one bit in four set.
#[must_use]
pub fn scrambled_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    let mut x = seed | 1;
    for r in 0..rows {
        for c in 0..cols {
            // xorshift64
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            if x & 3 == 0 {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// A catalog circuit together with its complex.
///
/// # Panics
/// Panics if `name` is not in the catalog.
#[must_use]
pub fn fixture(name: &str) -> (CircuitSpec, ChainComplex) {
    let spec = catalog_entry(name).expect("catalog entry");
    let complex = ChainComplex::build(spec.pattern.shape());
    (spec, complex)
}
