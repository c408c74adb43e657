//! Reference databases with pinned labels, used by the demo files, the CLI
//! and the verification suites.

use crate::boolean::TruthTable;
use crate::oracle::Entry;

/// Eight-name example database with explicit 4-bit labels (bit j of the
/// value is label bit l_j). "Bob" and "Grace" intentionally collide.
pub fn names() -> Vec<(Entry, u64)> {
    [
        ("Alice", 0b0011),
        ("Bob", 0b1010),
        ("Craig", 0b1100),
        ("Dan", 0b1011),
        ("Eve", 0b1000),
        ("Faythe", 0b0100),
        ("Grace", 0b1010),
        ("Heidi", 0b1001),
    ]
    .iter()
    .map(|(name, v)| (Entry::Str((*name).to_string()), *v))
    .collect()
}

pub const NAMES_K: usize = 4;

/// Sixteen-entry database with 6-bit labels shaped for similarity search:
/// the entry at index 6 has label 110011, indices 10 and 12 sit at Hamming
/// distance 1 from it, and every other label is at distance two or more.
pub fn similarity16() -> Vec<(Entry, u64)> {
    const LABELS: [u64; 16] = [
        0b000000, // d=4
        0b000101, // d=4
        0b011000, // d=4
        0b101010, // d=3
        0b000011, // d=2
        0b100100, // d=4
        0b110011, // the query target
        0b001111, // d=4
        0b111111, // d=2
        0b010101, // d=3
        0b010011, // d=1
        0b100001, // d=2
        0b111011, // d=1
        0b001001, // d=4
        0b011110, // d=4
        0b101101, // d=4
    ];
    LABELS
        .iter()
        .enumerate()
        .map(|(i, &v)| (Entry::Str(format!("item-{i:02}")), v))
        .collect()
}

pub const SIMILARITY_K: usize = 6;

/// The 3-input, 3-column truth table of the worked CSE example, columns
/// evaluated from f0 = x0*x2 + x0 + x1 + x2, f1 = x0*x1 + x0*x2 + x1 + x2
/// + 1, f2 = x0*x1*x2.
pub fn cse_example_table() -> TruthTable {
    let cols = vec![
        vec![false, true, true, false, true, true, false, false],
        vec![true, true, false, true, false, true, true, true],
        vec![false, false, false, false, false, false, false, true],
    ];
    TruthTable::from_columns(3, cols).expect("static table is well formed")
}

/// Fixture file content (JSON [{"entry", "label"}]) for a labeled database;
/// labels are MSB-first bitstrings.
pub fn to_fixture_json(pairs: &[(Entry, u64)], k: usize) -> String {
    let items: Vec<serde_json::Value> = pairs
        .iter()
        .map(|(e, v)| {
            let label: String = (0..k)
                .rev()
                .map(|j| if (v >> j) & 1 == 1 { '1' } else { '0' })
                .collect();
            serde_json::json!({ "entry": e, "label": label })
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("fixture serializes")
}
