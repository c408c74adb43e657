//! Dense complex-amplitude statevector simulator.
//!
//! Exact application of the circuit gate set, composites included, with
//! little-endian basis indexing. Big enough for every oracle this crate
//! verifies at desk scale (default cap 24 qubits).

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, Register};
use crate::error::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 24;
const MATRIX_QUBIT_CAP: usize = 10;

/// 2^q complex amplitudes plus the register map they were produced under.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
    registers: Vec<Register>,
}

impl StateVector {
    /// Basis state |index> over the given layout.
    pub fn basis(registers: Vec<Register>, index: u64) -> Self {
        let n_qubits: usize = registers.iter().map(|r| r.size).sum();
        let mut amps = vec![Complex64::ZERO; 1usize << n_qubits];
        amps[index as usize] = Complex64::ONE;
        StateVector {
            n_qubits,
            amps,
            registers,
        }
    }

    /// Arbitrary amplitude vector; normalizes nothing, trusts the caller.
    pub fn from_amplitudes(registers: Vec<Register>, amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits: usize = registers.iter().map(|r| r.size).sum();
        if amps.len() != 1 << n_qubits {
            return Err(Error::Layout(format!(
                "amplitude vector of length {} does not match {} qubits",
                amps.len(),
                n_qubits
            )));
        }
        Ok(StateVector {
            n_qubits,
            amps,
            registers,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amps, gate);
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) {
        for g in circuit.gates() {
            self.apply(g);
        }
    }

    /// Probabilities of each basis state of the full system.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn apply_gate(amps: &mut [Complex64], gate: &Gate) {
    match gate {
        Gate::H(q) => {
            let bit = 1usize << q.0;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let a = amps[i];
                    let b = amps[i | bit];
                    amps[i] = (a + b) * s;
                    amps[i | bit] = (a - b) * s;
                }
            }
        }
        Gate::X(q) => {
            let bit = 1usize << q.0;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    amps.swap(i, i | bit);
                }
            }
        }
        Gate::Rz { angle, qubit } => {
            let bit = 1usize << qubit.0;
            let minus = Complex64::from_polar(1.0, -angle / 2.0);
            let plus = Complex64::from_polar(1.0, angle / 2.0);
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= if i & bit == 0 { minus } else { plus };
            }
        }
        Gate::Cx { control, target } => {
            let c = 1usize << control.0;
            let t = 1usize << target.0;
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::Mcx { controls, target } => {
            let mask: usize = controls.iter().map(|q| 1usize << q.0).sum();
            let t = 1usize << target.0;
            for i in 0..amps.len() {
                if i & mask == mask && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::Mcz { qubits } => {
            let mask: usize = qubits.iter().map(|q| 1usize << q.0).sum();
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *a = -*a;
                }
            }
        }
    }
}

/// Run a circuit from a basis state (default |0...0>).
pub fn run(circuit: &Circuit, initial: Option<u64>) -> Result<StateVector> {
    run_capped(circuit, initial, DEFAULT_QUBIT_CAP)
}

pub fn run_capped(circuit: &Circuit, initial: Option<u64>, cap: usize) -> Result<StateVector> {
    let n = circuit.num_qubits();
    if n > cap {
        return Err(Error::QubitCapExceeded { needed: n, cap });
    }
    let init = initial.unwrap_or(0);
    if init >= (1u64 << n) {
        return Err(Error::Layout(format!(
            "initial basis index {init} outside {n}-qubit space"
        )));
    }
    let mut state = StateVector::basis(circuit.registers().to_vec(), init);
    state.apply_circuit(circuit);
    Ok(state)
}

/// Full unitary matrix, column by column. Limited to 10 qubits.
pub fn matrix(circuit: &Circuit) -> Result<Vec<Vec<Complex64>>> {
    let n = circuit.num_qubits();
    if n > MATRIX_QUBIT_CAP {
        return Err(Error::QubitCapExceeded {
            needed: n,
            cap: MATRIX_QUBIT_CAP,
        });
    }
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for x in 0..dim {
        cols.push(run(circuit, Some(x as u64))?.amps);
    }
    Ok(cols)
}

/// Marginal probabilities of one register, summed over everything else.
/// The result sums to 1 within numerical noise.
pub fn measure_distribution(state: &StateVector, register: &str) -> Result<Vec<f64>> {
    let mut offset = 0;
    let mut size = None;
    for r in &state.registers {
        if r.name == register {
            size = Some(r.size);
            break;
        }
        offset += r.size;
    }
    let size = size.ok_or_else(|| Error::Layout(format!("no register named {register:?}")))?;
    let mask = ((1usize << size) - 1) << offset;
    let mut probs = vec![0.0; 1 << size];
    for (i, a) in state.amps.iter().enumerate() {
        probs[(i & mask) >> offset] += a.norm_sqr();
    }
    Ok(probs)
}

/// True when a = e^{i gamma} b for the gamma aligning the largest-magnitude
/// amplitude, within `tol` elementwise.
pub fn equal_up_to_global_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let pivot = b
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
        .map(|(i, _)| i);
    let Some(p) = pivot else {
        return true;
    };
    if b[p].norm() < tol {
        // b is the zero vector; compare directly.
        return a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol);
    }
    if (a[p].norm() - b[p].norm()).abs() > tol {
        return false;
    }
    let gamma = a[p] / b[p];
    let gamma = gamma / gamma.norm();
    a.iter().zip(b).all(|(x, y)| (x - y * gamma).norm() <= tol)
}

/// Matrix variant of [`equal_up_to_global_phase`]: one phase for the whole
/// operator, found from the largest entry.
pub fn matrices_equal_up_to_global_phase(
    a: &[Vec<Complex64>],
    b: &[Vec<Complex64>],
    tol: f64,
) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let flat_a: Vec<Complex64> = a.iter().flatten().copied().collect();
    let flat_b: Vec<Complex64> = b.iter().flatten().copied().collect();
    equal_up_to_global_phase(&flat_a, &flat_b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Qubit, Register};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn simple(n: usize) -> Circuit {
        Circuit::new(vec![Register::new("q", n)]).unwrap()
    }

    #[test]
    fn hadamard_makes_equal_superposition() {
        let mut c = simple(1);
        c.push(Gate::H(Qubit(0))).unwrap();
        let s = run(&c, None).unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cx_control_is_little_endian_qubit_zero() {
        // |10> means q0=0, q1=1 (index 2). CX with control q0 leaves it alone.
        let mut c = simple(2);
        c.push(Gate::Cx {
            control: Qubit(0),
            target: Qubit(1),
        })
        .unwrap();
        let s = run(&c, Some(0b10)).unwrap();
        assert!((s.amplitudes()[0b10].norm() - 1.0).abs() < 1e-12);
        // Control set: |01> (q0=1) flips the target.
        let s = run(&c, Some(0b01)).unwrap();
        assert!((s.amplitudes()[0b11].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mcz_matrix_is_diagonal_with_single_minus_one() {
        let mut c = simple(3);
        c.push(Gate::mcz(vec![Qubit(0), Qubit(1), Qubit(2)]))
            .unwrap();
        let m = matrix(&c).unwrap();
        for (x, col) in m.iter().enumerate() {
            for (y, v) in col.iter().enumerate() {
                let expect = if x == y {
                    if x == 7 {
                        -Complex64::ONE
                    } else {
                        Complex64::ONE
                    }
                } else {
                    Complex64::ZERO
                };
                assert!((v - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_circuit_matrix_is_identity() {
        let c = simple(2);
        let m = matrix(&c).unwrap();
        for (x, col) in m.iter().enumerate() {
            for (y, v) in col.iter().enumerate() {
                let expect = if x == y {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                assert!((v - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn uniform_state_measures_uniform_distribution() {
        let mut c = simple(3);
        for q in 0..3 {
            c.push(Gate::H(Qubit(q))).unwrap();
        }
        let s = run(&c, None).unwrap();
        let d = measure_distribution(&s, "q").unwrap();
        assert_eq!(d.len(), 8);
        for p in d {
            assert!((p - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_distribution_over_subregister() {
        let mut c = Circuit::new(vec![Register::new("a", 1), Register::new("b", 1)]).unwrap();
        c.push(Gate::H(Qubit(0))).unwrap();
        c.push(Gate::Cx {
            control: Qubit(0),
            target: Qubit(1),
        })
        .unwrap();
        let s = run(&c, None).unwrap();
        let d = measure_distribution(&s, "b").unwrap();
        assert!((d[0] - 0.5).abs() < 1e-12);
        assert!((d[1] - 0.5).abs() < 1e-12);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qubit_cap_enforced() {
        let c = simple(30);
        assert!(matches!(run(&c, None), Err(Error::QubitCapExceeded { .. })));
    }

    #[test]
    fn inverse_round_trips_every_basis_state() {
        let mut c = simple(3);
        c.push(Gate::H(Qubit(0))).unwrap();
        c.push(Gate::rz(1.5, Qubit(1))).unwrap();
        c.push(Gate::Cx {
            control: Qubit(0),
            target: Qubit(2),
        })
        .unwrap();
        c.push(Gate::Mcx {
            controls: vec![Qubit(0), Qubit(1)],
            target: Qubit(2),
        })
        .unwrap();
        let round = c.concat(&c.inverse()).unwrap();
        for x in 0..8u64 {
            let s = run(&round, Some(x)).unwrap();
            assert!((s.amplitudes()[x as usize].norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn global_phase_comparison() {
        let a = vec![Complex64::ONE, Complex64::ZERO];
        let b = vec![Complex64::from_polar(1.0, 1.2), Complex64::ZERO];
        assert!(equal_up_to_global_phase(&a, &b, 1e-9));
        let c = vec![Complex64::ZERO, Complex64::ONE];
        assert!(!equal_up_to_global_phase(&a, &c, 1e-9));
    }
}
