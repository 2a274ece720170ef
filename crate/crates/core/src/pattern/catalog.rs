//! Built-in circuit fixtures, embedded from `catalog/*.rhg`.

use super::{parse_circuit, CircuitSpec};

const ENTRIES: &[(&str, &str)] = &[
    ("identity", include_str!("../../catalog/identity.rhg")),
    ("cnot", include_str!("../../catalog/cnot.rhg")),
    ("loop_pair_a", include_str!("../../catalog/loop_pair_a.rhg")),
    ("loop_pair_b", include_str!("../../catalog/loop_pair_b.rhg")),
    ("eight_line_loop", include_str!("../../catalog/eight_line_loop.rhg")),
    ("folded_box", include_str!("../../catalog/folded_box.rhg")),
];

#[must_use]
pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// The raw file text of a catalog entry, comments included.
#[must_use]
pub fn catalog_source(name: &str) -> Option<&'static str> {
    ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// # Panics
/// Panics if an embedded fixture fails to parse, which the test suite rules out.
#[must_use]
pub fn catalog_entry(name: &str) -> Option<CircuitSpec> {
    catalog_source(name).map(|s| parse_circuit(s).unwrap_or_else(|e| panic!("catalog entry {name}: {e}")))
}

/// All built-in specs in catalog order.
#[must_use]
pub fn catalog() -> Vec<CircuitSpec> {
    catalog_names().into_iter().filter_map(catalog_entry).collect()
}
