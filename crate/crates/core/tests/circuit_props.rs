//! Circuit-level invariants: lowering preserves the unitary, inversion
//! round-trips, the simulator preserves norm, and every gate kind is
//! unitary.

mod common;

use common::Lcg;
use num_complex::Complex64;
use std::f64::consts::PI;

use qoracle::circuit::{Circuit, Gate, Qubit, Register};
use qoracle::sim;

fn random_circuit(rng: &mut Lcg, n_qubits: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(vec![Register::new("q", n_qubits)]).unwrap();
    for _ in 0..len {
        let q = Qubit((rng.next_u64() % n_qubits as u64) as usize);
        let gate = match rng.next_u64() % 6 {
            0 => Gate::H(q),
            1 => Gate::X(q),
            2 => {
                // Dyadic angles only, so metrics stay well defined.
                let m = 1 + (rng.next_u64() % 4) as i32;
                let a = 1 + 2 * (rng.next_u64() % 4) as i32;
                let sign = if rng.next_bool() { 1.0 } else { -1.0 };
                Gate::rz(sign * PI * f64::from(a) / f64::from(1 << m), q)
            }
            3 => {
                let t = Qubit(
                    ((q.0 + 1 + (rng.next_u64() % (n_qubits as u64 - 1)) as usize) % n_qubits)
                        as usize,
                );
                Gate::Cx {
                    control: q,
                    target: t,
                }
            }
            4 => {
                let mut picks: Vec<Qubit> = (0..n_qubits).map(Qubit).collect();
                for i in (1..picks.len()).rev() {
                    picks.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
                }
                let count = 3.min(picks.len());
                Gate::Mcx {
                    controls: picks[..count - 1].to_vec(),
                    target: picks[count - 1],
                }
            }
            _ => {
                let mut picks: Vec<Qubit> = (0..n_qubits).map(Qubit).collect();
                for i in (1..picks.len()).rev() {
                    picks.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
                }
                let count = 2 + (rng.next_u64() % 2) as usize;
                Gate::mcz(picks[..count.min(picks.len())].to_vec())
            }
        };
        c.push(gate).unwrap();
    }
    c
}

#[test]
fn lowering_preserves_the_unitary_up_to_global_phase() {
    let mut rng = Lcg(11);
    for trial in 0..12 {
        let n = 3 + trial % 3;
        let circuit = random_circuit(&mut rng, n, 12);
        let lowered = circuit.lower().unwrap();
        assert!(lowered.gates().iter().all(Gate::is_elementary));
        let got = sim::matrix(&lowered).unwrap();
        let want = sim::matrix(&circuit).unwrap();
        assert!(
            sim::matrices_equal_up_to_global_phase(&got, &want, 1e-9),
            "trial {trial} with {n} qubits"
        );
    }
}

#[test]
fn inverse_composes_to_identity_on_every_basis_state() {
    let mut rng = Lcg(23);
    for trial in 0..8 {
        let n = 3 + trial % 3;
        let circuit = random_circuit(&mut rng, n, 20);
        let round = circuit.concat(&circuit.inverse()).unwrap();
        for x in 0..(1u64 << n) {
            let s = sim::run(&round, Some(x)).unwrap();
            assert!(
                (s.amplitudes()[x as usize].norm() - 1.0).abs() < 1e-9,
                "trial {trial} basis {x}"
            );
        }
        assert_eq!(circuit.inverse().inverse(), circuit);
    }
}

#[test]
fn norm_is_preserved_over_a_hundred_thousand_gates() {
    let mut rng = Lcg(37);
    let circuit = random_circuit(&mut rng, 6, 100_000);
    let state = sim::run(&circuit, Some(5)).unwrap();
    assert!((state.norm_sq() - 1.0).abs() <= 1e-9);
}

#[test]
fn every_gate_kind_is_unitary() {
    let gates = vec![
        Gate::H(Qubit(0)),
        Gate::X(Qubit(1)),
        Gate::rz(0.7, Qubit(2)),
        Gate::Cx {
            control: Qubit(0),
            target: Qubit(3),
        },
        Gate::Mcx {
            controls: vec![Qubit(0), Qubit(1), Qubit(2)],
            target: Qubit(3),
        },
        Gate::mcz(vec![Qubit(0), Qubit(1), Qubit(2), Qubit(3)]),
    ];
    for gate in gates {
        let mut c = Circuit::new(vec![Register::new("q", 4)]).unwrap();
        c.push(gate.clone()).unwrap();
        let m = sim::matrix(&c).unwrap();
        let dim = m.len();
        for i in 0..dim {
            for j in 0..dim {
                // (M M^dagger)[i][j] = sum_k M[k][i]* conj-transposed; with
                // m[x] = column x, the inner product of columns i and j.
                let dot: Complex64 = (0..dim).map(|k| m[i][k] * m[j][k].conj()).sum();
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert!((dot - expect).norm() <= 1e-12, "{gate:?} at ({i}, {j})");
            }
        }
    }
}
