//! Quantum circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over named qubit registers. Basis
//! states are indexed little-endian: qubit 0 is the least significant bit.
//! The lowered gate alphabet is {H, X, RZ, CX}; MCX and MCZ are composites
//! that [`Circuit::lower`] rewrites into it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat wire index into a circuit's layout.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Qubit(pub usize);

/// A named block of qubits within a circuit's layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub size: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Register {
            name: name.into(),
            size,
        }
    }
}

/// Reference to a qubit by register name and offset, used in builder APIs
/// and error messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitRef {
    pub register: String,
    pub index: usize,
}

/// Normalize an angle to the canonical interval (-pi, pi]. Angles already
/// in range pass through bit-exactly, so inversion is an involution.
pub fn normalize_angle(theta: f64) -> f64 {
    if !theta.is_finite() || (theta > -PI && theta <= PI) {
        return theta;
    }
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(Qubit),
    X(Qubit),
    Rz { angle: f64, qubit: Qubit },
    Cx { control: Qubit, target: Qubit },
    Mcx { controls: Vec<Qubit>, target: Qubit },
    Mcz { qubits: Vec<Qubit> },
}

impl Gate {
    /// RZ with the angle normalized to (-pi, pi].
    pub fn rz(angle: f64, qubit: Qubit) -> Gate {
        Gate::Rz {
            angle: normalize_angle(angle),
            qubit,
        }
    }

    /// MCZ in canonical (sorted) operand order.
    pub fn mcz(mut qubits: Vec<Qubit>) -> Gate {
        qubits.sort();
        Gate::Mcz { qubits }
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Rz { qubit: q, .. } => vec![*q],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Mcx { controls, target } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::Mcz { qubits } => qubits.clone(),
        }
    }

    /// True when the gate belongs to the lowered alphabet {H, X, RZ, CX}.
    pub fn is_elementary(&self) -> bool {
        matches!(
            self,
            Gate::H(_) | Gate::X(_) | Gate::Rz { .. } | Gate::Cx { .. }
        )
    }
}

/// Gate counts extracted from a lowered circuit.
///
/// `tm_histogram` maps m to the number of T_m gates (phase gates of angle
/// pi/2^m) needed to realize every RZ in the circuit; `t_order` is the
/// largest m present, 0 when there are no phase gates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub cnot_count: u64,
    pub u_count: u64,
    pub tm_histogram: BTreeMap<u32, u64>,
    pub t_order: u32,
    pub qubit_count: usize,
}

impl GateMetrics {
    pub fn tm_total(&self) -> u64 {
        self.tm_histogram.values().sum()
    }

    /// Combine metrics of two circuits over the same layout.
    pub fn merge(&self, other: &GateMetrics) -> GateMetrics {
        let mut hist = self.tm_histogram.clone();
        for (m, c) in &other.tm_histogram {
            *hist.entry(*m).or_insert(0) += c;
        }
        GateMetrics {
            cnot_count: self.cnot_count + other.cnot_count,
            u_count: self.u_count + other.u_count,
            t_order: hist.keys().next_back().copied().unwrap_or(0),
            tm_histogram: hist,
            qubit_count: self.qubit_count.max(other.qubit_count),
        }
    }
}

const DYADIC_TOLERANCE: f64 = 1e-9;
const DYADIC_MAX_M: u32 = 40;

/// Decompose a normalized RZ angle into (a, m) with theta = pi*a/2^m, a odd.
/// Returns `None` for an (effectively) zero angle.
///
/// The match at level m must be within the 1e-9 tolerance and locked to
/// 1/4096 of the level's grid spacing; without the latter every real
/// number would "match" once pi/2^m drops below the tolerance. Angles
/// produced by synthesis carry only accumulated float noise (~1e-13) and
/// always satisfy both bounds at their true level.
fn dyadic_angle(theta: f64) -> Result<Option<(i64, u32)>> {
    if theta.abs() <= DYADIC_TOLERANCE {
        return Ok(None);
    }
    for m in 0..=DYADIC_MAX_M {
        let pow = (2f64).powi(m as i32);
        let a = (theta * pow / PI).round();
        let tolerance = DYADIC_TOLERANCE.min(PI / pow / 4096.0);
        if (theta - PI * a / pow).abs() <= tolerance {
            let a = a as i64;
            if a == 0 {
                return Ok(None);
            }
            if a % 2 != 0 {
                return Ok(Some((a, m)));
            }
            // Even numerator reduces to a smaller m already rejected by the
            // tolerance check, so keep scanning.
        }
    }
    Err(Error::NonDyadicAngle {
        angle: theta,
        tolerance: DYADIC_TOLERANCE,
        max_m: DYADIC_MAX_M,
    })
}

/// Ordered gate list over named registers. Immutable once built; all
/// operations return fresh circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    registers: Vec<Register>,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for r in &registers {
            if r.size == 0 {
                return Err(Error::Layout(format!("register {:?} has size 0", r.name)));
            }
            if !seen.insert(r.name.clone()) {
                return Err(Error::Layout(format!("duplicate register {:?}", r.name)));
            }
        }
        Ok(Circuit {
            registers,
            gates: Vec::new(),
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_qubits(&self) -> usize {
        self.registers.iter().map(|r| r.size).sum()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Resolve a (register, index) pair to a flat qubit.
    pub fn qubit(&self, register: &str, index: usize) -> Result<Qubit> {
        let mut offset = 0;
        for r in &self.registers {
            if r.name == register {
                if index < r.size {
                    return Ok(Qubit(offset + index));
                }
                return Err(Error::Layout(format!(
                    "index {index} out of range for register {register:?} of size {}",
                    r.size
                )));
            }
            offset += r.size;
        }
        Err(Error::Layout(format!("no register named {register:?}")))
    }

    /// All qubits of a register, in offset order.
    pub fn register_qubits(&self, register: &str) -> Result<Vec<Qubit>> {
        let (offset, size) = self.register_span(register)?;
        Ok((offset..offset + size).map(Qubit).collect())
    }

    /// (offset, size) of a register within the flat layout.
    pub fn register_span(&self, register: &str) -> Result<(usize, usize)> {
        let mut offset = 0;
        for r in &self.registers {
            if r.name == register {
                return Ok((offset, r.size));
            }
            offset += r.size;
        }
        Err(Error::Layout(format!("no register named {register:?}")))
    }

    /// Map a flat qubit back to its (register, index) pair.
    pub fn qubit_ref(&self, q: Qubit) -> Result<QubitRef> {
        let mut offset = 0;
        for r in &self.registers {
            if q.0 < offset + r.size {
                return Ok(QubitRef {
                    register: r.name.clone(),
                    index: q.0 - offset,
                });
            }
            offset += r.size;
        }
        Err(Error::Layout(format!("qubit {} outside layout", q.0)))
    }

    fn validate_gate(&self, gate: &Gate) -> Result<()> {
        let qs = gate.qubits();
        let n = self.num_qubits();
        let mut seen = std::collections::HashSet::new();
        for q in &qs {
            if q.0 >= n {
                return Err(Error::Layout(format!(
                    "qubit {} outside layout of {n} qubits",
                    q.0
                )));
            }
            if !seen.insert(q.0) {
                return Err(Error::DuplicateOperand(format!("{gate:?}")));
            }
        }
        if qs.is_empty() {
            return Err(Error::Layout("gate with no operands".into()));
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.validate_gate(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn push_all(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Concatenate another circuit over the same layout.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.registers != other.registers {
            return Err(Error::Layout("cannot concatenate different layouts".into()));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Rewrite composites so only {H, X, RZ, CX} remain. The result is
    /// unitarily equivalent to the input up to global phase.
    pub fn lower(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.registers.clone())?;
        for gate in &self.gates {
            self.validate_gate(gate)?;
            match gate {
                g if g.is_elementary() => out.gates.push(g.clone()),
                Gate::Mcx { controls, target } => match controls.len() {
                    0 => out.gates.push(Gate::X(*target)),
                    1 => out.gates.push(Gate::Cx {
                        control: controls[0],
                        target: *target,
                    }),
                    _ => {
                        let mut qs = controls.clone();
                        qs.push(*target);
                        out.gates.push(Gate::H(*target));
                        out.gates.extend(crate::phase::mcz_gates(&qs));
                        out.gates.push(Gate::H(*target));
                    }
                },
                Gate::Mcz { qubits } => {
                    if qubits.len() == 1 {
                        out.gates.push(Gate::rz(PI, qubits[0]));
                    } else {
                        out.gates.extend(crate::phase::mcz_gates(qubits));
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok(out)
    }

    /// Reverse the gate list, inverting each gate. Self-inverse gates are
    /// kept; RZ(theta) becomes RZ(-theta).
    pub fn inverse(&self) -> Circuit {
        let mut out = self.clone();
        out.gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match g {
                Gate::Rz { angle, qubit } => Gate::rz(-angle, *qubit),
                other => other.clone(),
            })
            .collect();
        out
    }

    /// Count gates of a lowered circuit. Errors on composites and on RZ
    /// angles that are not dyadic multiples of pi (a synthesis bug).
    pub fn metrics(&self) -> Result<GateMetrics> {
        let mut m = GateMetrics {
            qubit_count: self.num_qubits(),
            ..GateMetrics::default()
        };
        for gate in &self.gates {
            match gate {
                Gate::Cx { .. } => m.cnot_count += 1,
                Gate::H(_) | Gate::X(_) => m.u_count += 1,
                Gate::Rz { angle, .. } => {
                    m.u_count += 1;
                    if let Some((a, order)) = dyadic_angle(*angle)? {
                        let mag = a.unsigned_abs();
                        for bit in 0..64 {
                            if mag & (1 << bit) != 0 {
                                *m.tm_histogram.entry(order - bit as u32).or_insert(0) += 1;
                            }
                        }
                        m.t_order = m.t_order.max(order);
                    }
                }
                Gate::Mcx { .. } | Gate::Mcz { .. } => return Err(Error::MustLowerFirst),
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let parsed: CircuitJson = serde_json::from_str(text)?;
        parsed.try_into()
    }

    /// OpenQASM 2.0 text for a lowered circuit.
    pub fn to_qasm2(&self) -> Result<String> {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        for r in &self.registers {
            out.push_str(&format!("qreg {}[{}];\n", r.name, r.size));
        }
        for gate in &self.gates {
            let fmt = |q: Qubit| -> Result<String> {
                let r = self.qubit_ref(q)?;
                Ok(format!("{}[{}]", r.register, r.index))
            };
            match gate {
                Gate::H(q) => out.push_str(&format!("h {};\n", fmt(*q)?)),
                Gate::X(q) => out.push_str(&format!("x {};\n", fmt(*q)?)),
                Gate::Rz { angle, qubit } => {
                    out.push_str(&format!("rz({angle:.17}) {};\n", fmt(*qubit)?))
                }
                Gate::Cx { control, target } => {
                    out.push_str(&format!("cx {},{};\n", fmt(*control)?, fmt(*target)?))
                }
                _ => return Err(Error::MustLowerFirst),
            }
        }
        Ok(out)
    }
}

/// Serialized form: registers plus `{"kind", "qubits", "angle"?}` gates with
/// flat little-endian qubit indices.
#[derive(Serialize, Deserialize)]
struct CircuitJson {
    registers: Vec<Register>,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    kind: String,
    qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| {
                let qubits = g.qubits().iter().map(|q| q.0).collect();
                match g {
                    Gate::H(_) => GateJson {
                        kind: "h".into(),
                        qubits,
                        angle: None,
                    },
                    Gate::X(_) => GateJson {
                        kind: "x".into(),
                        qubits,
                        angle: None,
                    },
                    Gate::Rz { angle, .. } => GateJson {
                        kind: "rz".into(),
                        qubits,
                        angle: Some(*angle),
                    },
                    Gate::Cx { .. } => GateJson {
                        kind: "cx".into(),
                        qubits,
                        angle: None,
                    },
                    Gate::Mcx { .. } => GateJson {
                        kind: "mcx".into(),
                        qubits,
                        angle: None,
                    },
                    Gate::Mcz { .. } => GateJson {
                        kind: "mcz".into(),
                        qubits,
                        angle: None,
                    },
                }
            })
            .collect();
        CircuitJson {
            registers: c.registers.clone(),
            gates,
        }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(value: CircuitJson) -> Result<Circuit> {
        let mut circuit = Circuit::new(value.registers)?;
        for g in value.gates {
            let qs: Vec<Qubit> = g.qubits.iter().map(|&i| Qubit(i)).collect();
            let gate = match (g.kind.as_str(), qs.len()) {
                ("h", 1) => Gate::H(qs[0]),
                ("x", 1) => Gate::X(qs[0]),
                ("rz", 1) => Gate::rz(
                    g.angle
                        .ok_or_else(|| Error::Layout("rz without angle".into()))?,
                    qs[0],
                ),
                ("cx", 2) => Gate::Cx {
                    control: qs[0],
                    target: qs[1],
                },
                ("mcx", n) if n >= 1 => Gate::Mcx {
                    controls: qs[..n - 1].to_vec(),
                    target: qs[n - 1],
                },
                ("mcz", n) if n >= 1 => Gate::mcz(qs),
                (kind, n) => {
                    return Err(Error::Layout(format!(
                        "bad gate {kind:?} with {n} operands"
                    )))
                }
            };
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}
