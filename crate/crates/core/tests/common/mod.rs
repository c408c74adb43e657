//! Shared helpers for the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;

use qoracle::circuit::Circuit;
use qoracle::oracle::EncodedDatabase;
use qoracle::sim;

/// Deterministic generator for test inputs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

/// Run an oracle on every |i>|0>|0..> basis state and return the diagonal
/// phase it applies to the index register. Panics if any run leaks
/// amplitude out of the input basis state (label/ancilla not restored).
pub fn effective_index_diagonal(circuit: &Circuit, n_index: usize) -> Vec<Complex64> {
    let mut diag = Vec::with_capacity(1 << n_index);
    for i in 0..(1u64 << n_index) {
        let state = sim::run(circuit, Some(i)).expect("within qubit cap");
        for (basis, amp) in state.amplitudes().iter().enumerate() {
            if basis as u64 != i {
                assert!(
                    amp.norm() < 1e-9,
                    "index {i} leaks {:.3e} onto basis {basis}",
                    amp.norm()
                );
            }
        }
        let amp = state.amplitudes()[i as usize];
        assert!(
            (amp.norm() - 1.0).abs() < 1e-9,
            "index {i} amplitude magnitude {}",
            amp.norm()
        );
        diag.push(amp);
    }
    diag
}

/// The diagonal a perfect oracle applies: -1 exactly where the stored
/// label equals the query label.
pub fn classical_oracle_diagonal(enc: &EncodedDatabase, query_label: u64) -> Vec<Complex64> {
    enc.labels
        .iter()
        .map(|&l| {
            if l == query_label {
                -Complex64::ONE
            } else {
                Complex64::ONE
            }
        })
        .collect()
}
