//! Diagonal-unitary and truth-table synthesis via phase polynomials.
//!
//! A diagonal unitary over m wires is decomposed into RZ rotations on
//! parity operators (XORs of wire variables) loaded by CNOT networks. The
//! rotation angles come from the Walsh-Hadamard transform of the target
//! phases; routes decide the CNOT order. Phase-tolerant synthesis truncates
//! the walk to the operators containing the output wire, halving the CNOT
//! count at the price of garbage phases that the oracle's uncomputation
//! cancels.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::boolean::{
    cap_degree, cse, reed_muller_expand, CseResult, F2Polynomial, TruthTable, Var,
};
use crate::circuit::{normalize_angle, Circuit, Gate, Qubit, Register};
use crate::error::{Error, Result};

/// Coefficients below this threshold are dropped before routing.
const THETA_EPSILON: f64 = 1e-12;

/// Nonzero bit-set over the wires of a synthesis register: bit w set means
/// variable x_w participates in the XOR.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ParityOp(pub u64);

impl ParityOp {
    pub fn evaluate(&self, x: u64) -> bool {
        (self.0 & x).count_ones() % 2 == 1
    }
}

/// Desired phase per computational basis state, length a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpec {
    phis: Vec<f64>,
}

impl PhaseSpec {
    pub fn new(phis: Vec<f64>) -> Result<Self> {
        if phis.len() < 2 || !phis.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(phis.len()));
        }
        Ok(PhaseSpec { phis })
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    pub fn wires(&self) -> usize {
        self.phis.len().trailing_zeros() as usize
    }

    pub fn phases(&self) -> &[f64] {
        &self.phis
    }
}

/// RZ angles keyed by parity-operator mask, plus the discarded global term.
#[derive(Clone, Debug, Default)]
pub struct ThetaSolution {
    pub wires: usize,
    pub thetas: BTreeMap<u64, f64>,
    /// Coefficient of the empty operator; it only contributes a global
    /// phase and is never emitted.
    pub global: f64,
}

impl ThetaSolution {
    pub fn theta(&self, mask: u64) -> f64 {
        self.thetas.get(&mask).copied().unwrap_or(0.0)
    }

    /// Angles listed in a route's visiting order (zeros for unused
    /// operators, the trailing empty operator omitted).
    pub fn in_route_order(&self, route: &Route) -> Vec<f64> {
        route
            .visited_masks()
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| self.theta(m))
            .collect()
    }
}

/// Unnormalized fast Walsh-Hadamard transform, H_N * values in O(N log N).
pub fn fwht(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() || !values.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(values.len()));
    }
    let mut v = values.to_vec();
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(h * 2) {
            for i in block..block + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(v)
}

/// Solve the phase equation for the physical RZ angles.
///
/// The Walsh index i pairs with the parity operator whose mask is i; the
/// empty-operator coefficient is recorded but discarded from the table, and
/// near-zero coefficients are dropped. Angles are normalized to (-pi, pi].
pub fn solve_theta(spec: &PhaseSpec) -> Result<ThetaSolution> {
    let w = fwht(spec.phases())?;
    let n = spec.len() as f64;
    let mut thetas = BTreeMap::new();
    for (i, &coef) in w.iter().enumerate().skip(1) {
        let theta = normalize_angle(-2.0 * coef / n);
        if theta.abs() > THETA_EPSILON {
            thetas.insert(i as u64, theta);
        }
    }
    Ok(ThetaSolution {
        wires: spec.wires(),
        thetas,
        global: normalize_angle(-2.0 * w[0] / n),
    })
}

/// One element of a parity-operator traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteOp {
    /// CNOT from a pure source wire onto the carrier holding the walk.
    Cnot { source: usize, target: usize },
    /// The carrier wire now holds this operator; mask 0 marks the final
    /// global-phase column.
    Visit { mask: u64, wire: usize },
}

/// Ordered parity-operator traversal. Replaying the CNOT list on a wire
/// parity vector returns every wire to its initial state.
#[derive(Clone, Debug)]
pub struct Route {
    wires: usize,
    ops: Vec<RouteOp>,
    transitions: usize,
}

impl Route {
    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn ops(&self) -> &[RouteOp] {
        &self.ops
    }

    /// Number of single-operator moves including closure; for the full
    /// Gray walk on m wires this is 2^m.
    pub fn transition_count(&self) -> usize {
        self.transitions
    }

    pub fn cnot_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, RouteOp::Cnot { .. }))
            .count()
    }

    /// Visited operator masks in order (a trailing 0 marks the global
    /// column when present).
    pub fn visited_masks(&self) -> Vec<u64> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                RouteOp::Visit { mask, .. } => Some(*mask),
                _ => None,
            })
            .collect()
    }

    /// Check the structural invariants: every visit sees its mask loaded on
    /// the stated wire and the walk restores the identity configuration.
    pub fn replay(&self) -> Result<()> {
        let mut parity: Vec<u64> = (0..self.wires).map(|w| 1 << w).collect();
        for op in &self.ops {
            match op {
                RouteOp::Cnot { source, target } => {
                    let s = parity[*source];
                    parity[*target] ^= s;
                }
                RouteOp::Visit { mask, wire } => {
                    if *mask != 0 && parity[*wire] != *mask {
                        return Err(Error::RouteMissesOperator { mask: *mask });
                    }
                }
            }
        }
        for (w, p) in parity.iter().enumerate() {
            if *p != (1 << w) {
                return Err(Error::Layout(format!(
                    "route leaves wire {w} holding {p:#b}"
                )));
            }
        }
        Ok(())
    }

    /// Debug dump of the traversal: one `mask=0b101 rz=-1.5707963268` line
    /// per visited operator that carries a rotation.
    pub fn debug_dump(&self, theta: &ThetaSolution) -> String {
        let mut out = String::new();
        for op in &self.ops {
            if let RouteOp::Visit { mask, .. } = op {
                if *mask != 0 {
                    let angle = theta.theta(*mask);
                    if angle.abs() > THETA_EPSILON {
                        out.push_str(&format!("mask={mask:#b} rz={angle:.10}\n"));
                    }
                }
            }
        }
        out
    }
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Full cyclic reflected-Gray traversal of all nonzero parity operators on
/// m wires, in the descending per-wire segment order of the reference
/// 3-wire network (x0^x2, x0^x1^x2, x1^x2, x2, x0^x1, x1, x0, empty). Each
/// wire w >= 1 carries a cyclic walk over the subsets of the wires below it
/// (2^w CNOTs including closure); wire 0 and the empty operator are visited
/// for free, giving 2^m transitions and 2^m - 2 CNOTs in total.
///
/// With a support filter the walk is unchanged but only support operators
/// are listed as visits.
pub fn gray_route(m: usize, support: Option<&BTreeSet<u64>>) -> Route {
    assert!((1..63).contains(&m), "gray_route wires out of range");
    let keep = |mask: u64| support.is_none_or(|s| s.contains(&mask));
    let mut ops = Vec::new();
    let mut transitions = 0usize;
    for w in (1..m).rev() {
        for i in 1..(1u64 << w) {
            let sub = gray(i);
            let j = i.trailing_zeros() as usize;
            ops.push(RouteOp::Cnot {
                source: j,
                target: w,
            });
            transitions += 1;
            let mask = sub | (1 << w);
            if keep(mask) {
                ops.push(RouteOp::Visit { mask, wire: w });
            }
        }
        ops.push(RouteOp::Cnot {
            source: w - 1,
            target: w,
        });
        transitions += 1;
        if keep(1 << w) {
            ops.push(RouteOp::Visit {
                mask: 1 << w,
                wire: w,
            });
        }
    }
    transitions += 1;
    if keep(1) {
        ops.push(RouteOp::Visit { mask: 1, wire: 0 });
    }
    transitions += 1;
    ops.push(RouteOp::Visit { mask: 0, wire: 0 });
    Route {
        wires: m,
        ops,
        transitions,
    }
}

/// Cyclic reflected-Gray walk over the control subsets of `controls` wires,
/// every CNOT landing on the carrier wire (index `controls`). Visits all
/// 2^controls operators containing the carrier with exactly 2^controls
/// CNOTs; the closing transition restores every wire.
pub fn phase_tolerant_route(controls: usize) -> Route {
    assert!((1..62).contains(&controls));
    let carrier = controls;
    let top = 1u64 << carrier;
    let mut ops = Vec::new();
    for i in 1..(1u64 << controls) {
        ops.push(RouteOp::Cnot {
            source: i.trailing_zeros() as usize,
            target: carrier,
        });
        ops.push(RouteOp::Visit {
            mask: gray(i) | top,
            wire: carrier,
        });
    }
    ops.push(RouteOp::Cnot {
        source: controls - 1,
        target: carrier,
    });
    ops.push(RouteOp::Visit {
        mask: top,
        wire: carrier,
    });
    Route {
        wires: controls + 1,
        ops,
        transitions: 1 << controls,
    }
}

/// Two-salesman greedy route over control subsets (Hamming-distance TSP).
///
/// Both salesmen start at the identity configuration; they strictly
/// alternate moves starting with salesman 1, each moving to the unvisited
/// subset of minimum Hamming distance (ties toward the smallest mask).
/// The final route is salesman 1's path, then salesman 2's path reversed,
/// then the closure back to the identity; its CNOT count is the sum of
/// Hamming distances along that cycle. Subset masks range over `controls`
/// wires and load onto the carrier wire (index `controls`).
pub fn htsp_route(support: &BTreeSet<u64>, controls: usize) -> Route {
    assert!((1..62).contains(&controls));
    let carrier = controls;
    let top = 1u64 << carrier;
    let mut ops = Vec::new();
    if support.contains(&0) {
        ops.push(RouteOp::Visit {
            mask: top,
            wire: carrier,
        });
    }
    let mut unvisited: BTreeSet<u64> = support.iter().copied().filter(|&s| s != 0).collect();
    let mut pos = [0u64; 2];
    let mut paths: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
    let mut turn = 0usize;
    while !unvisited.is_empty() {
        let cur = pos[turn];
        let best = unvisited
            .iter()
            .copied()
            .min_by_key(|t| ((cur ^ t).count_ones(), *t))
            .expect("nonempty");
        paths[turn].push(best);
        pos[turn] = best;
        unvisited.remove(&best);
        turn ^= 1;
    }
    let mut cursor = 0u64;
    let mut transitions = 0usize;
    let combined = paths[0]
        .iter()
        .copied()
        .chain(paths[1].iter().rev().copied());
    for sub in combined {
        let mut diff = cursor ^ sub;
        while diff != 0 {
            let bit = diff.trailing_zeros() as usize;
            ops.push(RouteOp::Cnot {
                source: bit,
                target: carrier,
            });
            transitions += 1;
            diff &= diff - 1;
        }
        cursor = sub;
        ops.push(RouteOp::Visit {
            mask: sub | top,
            wire: carrier,
        });
    }
    let mut diff = cursor;
    while diff != 0 {
        let bit = diff.trailing_zeros() as usize;
        ops.push(RouteOp::Cnot {
            source: bit,
            target: carrier,
        });
        transitions += 1;
        diff &= diff - 1;
    }
    Route {
        wires: controls + 1,
        ops,
        transitions,
    }
}

/// Emit the CNOT network of a route with RZ gates at each visited operator
/// carrying a nonzero angle. Route wire w acts on `qubits[w]`.
pub fn synthesize_phase_network(
    theta: &ThetaSolution,
    route: &Route,
    qubits: &[Qubit],
) -> Result<Vec<Gate>> {
    if qubits.len() != route.wires() {
        return Err(Error::SizeMismatch {
            register: qubits.len(),
            phases: route.wires(),
        });
    }
    let visited: BTreeSet<u64> = route.visited_masks().into_iter().collect();
    for mask in theta.thetas.keys() {
        if !visited.contains(mask) {
            return Err(Error::RouteMissesOperator { mask: *mask });
        }
    }
    let mut gates = Vec::new();
    for op in route.ops() {
        match op {
            RouteOp::Cnot { source, target } => gates.push(Gate::Cx {
                control: qubits[*source],
                target: qubits[*target],
            }),
            RouteOp::Visit { mask, wire } => {
                if *mask != 0 {
                    let angle = theta.theta(*mask);
                    if angle.abs() > THETA_EPSILON {
                        gates.push(Gate::rz(angle, qubits[*wire]));
                    }
                }
            }
        }
    }
    Ok(gates)
}

/// Synthesize an arbitrary diagonal unitary: U|y> = exp(i phi_y)|y> up to
/// global phase, with at most 2^m CNOTs.
pub fn gray_synthesize_diagonal(spec: &PhaseSpec, qubits: &[Qubit]) -> Result<Vec<Gate>> {
    if qubits.len() != spec.wires() {
        return Err(Error::SizeMismatch {
            register: qubits.len(),
            phases: spec.len(),
        });
    }
    let theta = solve_theta(spec)?;
    let route = gray_route(spec.wires(), None);
    synthesize_phase_network(&theta, &route, qubits)
}

/// Gates realizing a multi-controlled Z on the given qubits (at least 2),
/// lowered to {CX, RZ}: the diagonal with a single pi phase on the all-ones
/// state.
pub fn mcz_gates(qubits: &[Qubit]) -> Vec<Gate> {
    let q = qubits.len();
    debug_assert!(q >= 2);
    let mut phis = vec![0.0; 1 << q];
    phis[(1 << q) - 1] = PI;
    let spec = PhaseSpec::new(phis).expect("power of two by construction");
    gray_synthesize_diagonal(&spec, qubits).expect("sizes match by construction")
}

/// Phase vector of one table column on inputs + output wire: 0 on the
/// out=0 branch and pi*T(x) on the out=1 branch.
fn column_phases(table: &TruthTable, column: usize) -> Vec<f64> {
    let n = table.n_inputs();
    let rows = 1usize << n;
    let mut phis = vec![0.0; rows * 2];
    for x in 0..rows {
        if table.value(column, x) {
            phis[rows + x] = PI;
        }
    }
    phis
}

/// Exact synthesis of one column into an output qubit initialized to |0>:
/// H on out, diagonal synthesis over inputs + out, H on out. The net action
/// is |x>|0> -> |x>|T(x)> with no garbage phase.
pub fn gray_synthesize_column(
    table: &TruthTable,
    column: usize,
    inputs: &[Qubit],
    out: Qubit,
) -> Result<Vec<Gate>> {
    if inputs.len() != table.n_inputs() {
        return Err(Error::SizeMismatch {
            register: inputs.len(),
            phases: table.num_rows(),
        });
    }
    let spec = PhaseSpec::new(column_phases(table, column))?;
    let mut qubits = inputs.to_vec();
    qubits.push(out);
    let mut gates = vec![Gate::H(out)];
    gates.extend(gray_synthesize_diagonal(&spec, &qubits)?);
    gates.push(Gate::H(out));
    Ok(gates)
}

/// Phase-tolerant synthesis of one column: only the 2^n parity operators
/// containing the out wire are traversed, so the CNOT count per column is
/// exactly 2^n. The action is |x>|0> -> exp(i chi_x)|x>|T(x)> for garbage
/// phases chi_x that uncomputation cancels.
pub fn phase_tolerant_synthesize_column(
    table: &TruthTable,
    column: usize,
    inputs: &[Qubit],
    out: Qubit,
) -> Result<Vec<Gate>> {
    pt_column_with_route(table, column, inputs, out, false)
}

/// Phase-tolerant column synthesis routed by the two-salesman heuristic
/// over the operators with nonvanishing coefficients.
pub fn phase_tolerant_htsp_column(
    table: &TruthTable,
    column: usize,
    inputs: &[Qubit],
    out: Qubit,
) -> Result<Vec<Gate>> {
    pt_column_with_route(table, column, inputs, out, true)
}

fn pt_column_with_route(
    table: &TruthTable,
    column: usize,
    inputs: &[Qubit],
    out: Qubit,
    htsp: bool,
) -> Result<Vec<Gate>> {
    let n = table.n_inputs();
    if inputs.len() != n {
        return Err(Error::SizeMismatch {
            register: inputs.len(),
            phases: table.num_rows(),
        });
    }
    let spec = PhaseSpec::new(column_phases(table, column))?;
    let full = solve_theta(&spec)?;
    let top = 1u64 << n;
    let restricted = ThetaSolution {
        wires: n + 1,
        thetas: full
            .thetas
            .iter()
            .filter(|(mask, _)| *mask & top != 0)
            .map(|(m, t)| (*m, *t))
            .collect(),
        global: full.global,
    };
    let route = if htsp {
        let support: BTreeSet<u64> = restricted.thetas.keys().map(|m| m & !top).collect();
        htsp_route(&support, n)
    } else {
        phase_tolerant_route(n)
    };
    let mut qubits = inputs.to_vec();
    qubits.push(out);
    let mut gates = vec![Gate::H(out)];
    gates.extend(synthesize_phase_network(&restricted, &route, &qubits)?);
    gates.push(Gate::H(out));
    Ok(gates)
}

/// Positive-polarity Reed-Muller synthesis: one multi-controlled X per
/// monomial of each column's polynomial (X for the constant term). Emits
/// composite MCX gates; the action |x>|0..0> -> |x>|T(x)> is exact.
pub fn pprm_synthesize(
    table: &TruthTable,
    inputs: &[Qubit],
    outputs: &[Qubit],
) -> Result<Vec<Gate>> {
    pprm_with_mcx(table, inputs, outputs, false)
}

/// PPRM with multi-controlled X gates outsourced to the phase-tolerant
/// algorithm (2^c CNOTs per c-controlled X instead of the exact lowering).
pub fn pprm_pt_mcx_synthesize(
    table: &TruthTable,
    inputs: &[Qubit],
    outputs: &[Qubit],
) -> Result<Vec<Gate>> {
    pprm_with_mcx(table, inputs, outputs, true)
}

fn pprm_with_mcx(
    table: &TruthTable,
    inputs: &[Qubit],
    outputs: &[Qubit],
    pt_mcx: bool,
) -> Result<Vec<Gate>> {
    if inputs.len() != table.n_inputs() || outputs.len() != table.num_columns() {
        return Err(Error::SizeMismatch {
            register: inputs.len() + outputs.len(),
            phases: table.num_rows(),
        });
    }
    let mut gates = Vec::new();
    for (c, &out) in outputs.iter().enumerate() {
        let poly = reed_muller_expand(table, c);
        let wire = |v: &Var| match v {
            Var::Input(i) => inputs[*i],
            Var::Aux(_) => unreachable!("reed_muller_expand emits inputs only"),
        };
        gates.extend(poly_monomial_gates(&poly, &wire, out, pt_mcx));
    }
    Ok(gates)
}

/// Gates computing one polynomial into `out` (XOR-accumulated), one
/// (multi-controlled) X per monomial.
fn poly_monomial_gates(
    poly: &F2Polynomial,
    wire: &dyn Fn(&Var) -> Qubit,
    out: Qubit,
    pt_mcx: bool,
) -> Vec<Gate> {
    let mut gates = Vec::new();
    for mono in poly.monomials() {
        let controls: Vec<Qubit> = mono.0.iter().map(wire).collect();
        match controls.len() {
            0 => gates.push(Gate::X(out)),
            1 => gates.push(Gate::Cx {
                control: controls[0],
                target: out,
            }),
            _ if pt_mcx => gates.extend(pt_mcx_gates(&controls, out)),
            _ => gates.push(Gate::Mcx {
                controls,
                target: out,
            }),
        }
    }
    gates
}

/// Multi-controlled X via phase-tolerant synthesis of the enclosed MCZ:
/// 2^c CNOTs for c controls, exact X action with a garbage phase depending
/// only on the controls.
pub fn pt_mcx_gates(controls: &[Qubit], target: Qubit) -> Vec<Gate> {
    let c = controls.len();
    debug_assert!(c >= 2);
    let mut phis = vec![0.0; 1 << (c + 1)];
    phis[(1 << (c + 1)) - 1] = PI;
    let spec = PhaseSpec::new(phis).expect("power of two");
    let full = solve_theta(&spec).expect("valid spec");
    let top = 1u64 << c;
    let restricted = ThetaSolution {
        wires: c + 1,
        thetas: full
            .thetas
            .into_iter()
            .filter(|(mask, _)| mask & top != 0)
            .collect(),
        global: full.global,
    };
    let route = phase_tolerant_route(c);
    let mut qubits = controls.to_vec();
    qubits.push(target);
    let mut gates = vec![Gate::H(target)];
    gates.extend(
        synthesize_phase_network(&restricted, &route, &qubits).expect("route covers support"),
    );
    gates.push(Gate::H(target));
    gates
}

/// Truth-table synthesis method names used across the pool, the benchmark
/// and the CLI.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Method {
    Pprm,
    PprmPtMcx,
    Gray,
    PhaseTolerant,
    PhaseTolerantHtsp,
    Cse,
    Auto,
}

impl Method {
    /// The select_best pool in its canonical order.
    pub const POOL: [Method; 4] = [
        Method::Pprm,
        Method::PprmPtMcx,
        Method::Gray,
        Method::PhaseTolerant,
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Pprm => "pprm",
            Method::PprmPtMcx => "pprm-pt-mcx",
            Method::Gray => "gray",
            Method::PhaseTolerant => "phase-tolerant",
            Method::PhaseTolerantHtsp => "phase-tolerant-htsp",
            Method::Cse => "cse",
            Method::Auto => "auto",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pprm" => Ok(Method::Pprm),
            "pprm-pt-mcx" => Ok(Method::PprmPtMcx),
            "gray" => Ok(Method::Gray),
            "phase-tolerant" => Ok(Method::PhaseTolerant),
            "phase-tolerant-htsp" => Ok(Method::PhaseTolerantHtsp),
            "cse" => Ok(Method::Cse),
            "auto" => Ok(Method::Auto),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Synthesize a whole table with one pool method, column by column.
pub fn synthesize_table(
    table: &TruthTable,
    method: Method,
    inputs: &[Qubit],
    outputs: &[Qubit],
) -> Result<Vec<Gate>> {
    match method {
        Method::Pprm => pprm_synthesize(table, inputs, outputs),
        Method::PprmPtMcx => pprm_pt_mcx_synthesize(table, inputs, outputs),
        Method::Gray => {
            let mut gates = Vec::new();
            for (c, &out) in outputs.iter().enumerate() {
                gates.extend(gray_synthesize_column(table, c, inputs, out)?);
            }
            Ok(gates)
        }
        Method::PhaseTolerant => {
            let mut gates = Vec::new();
            for (c, &out) in outputs.iter().enumerate() {
                gates.extend(phase_tolerant_synthesize_column(table, c, inputs, out)?);
            }
            Ok(gates)
        }
        Method::PhaseTolerantHtsp => {
            let mut gates = Vec::new();
            for (c, &out) in outputs.iter().enumerate() {
                gates.extend(phase_tolerant_htsp_column(table, c, inputs, out)?);
            }
            Ok(gates)
        }
        Method::Cse | Method::Auto => Err(Error::UnknownMethod(format!(
            "{method} is not a pool method"
        ))),
    }
}

/// CNOT count of a gate list after lowering, measured on a scratch layout.
pub fn lowered_cnot_count(gates: &[Gate], n_qubits: usize) -> Result<u64> {
    let mut scratch = Circuit::new(vec![Register::new("q", n_qubits.max(1))])?;
    scratch.push_all(gates.iter().cloned())?;
    Ok(scratch.lower()?.metrics()?.cnot_count)
}

fn scratch_width(gates: &[Gate], fallback: usize) -> usize {
    gates
        .iter()
        .flat_map(|g| g.qubits())
        .map(|q| q.0 + 1)
        .max()
        .unwrap_or(fallback)
        .max(fallback)
}

/// Synthesize with every pool method, lower, and keep the lowest CNOT
/// count; ties resolve to the earlier pool entry. Returns the lowered
/// gates of the winner and its tag.
pub fn select_best(
    table: &TruthTable,
    inputs: &[Qubit],
    outputs: &[Qubit],
    pool: &[Method],
) -> Result<(Vec<Gate>, Method)> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let min_width = inputs
        .iter()
        .chain(outputs.iter())
        .map(|q| q.0 + 1)
        .max()
        .unwrap_or(1);
    let mut best: Option<(u64, Vec<Gate>, Method)> = None;
    for &method in pool {
        let gates = synthesize_table(table, method, inputs, outputs)?;
        let width = scratch_width(&gates, min_width);
        let mut scratch = Circuit::new(vec![Register::new("q", width)])?;
        scratch.push_all(gates.iter().cloned())?;
        let lowered = scratch.lower()?;
        let count = lowered.metrics()?.cnot_count;
        if best.as_ref().is_none_or(|(c, _, _)| count < *c) {
            best = Some((count, lowered.gates().to_vec(), method));
        }
    }
    let (_, gates, method) = best.expect("pool checked nonempty");
    Ok((gates, method))
}

/// The classical plan behind CSE synthesis: Reed-Muller polynomials, shared
/// fragment extraction, then degree capping to 2 so every emitted gate
/// stays within T-order 2.
pub fn cse_plan(table: &TruthTable) -> CseResult {
    let polys: Vec<F2Polynomial> = (0..table.num_columns())
        .map(|c| reed_muller_expand(table, c))
        .collect();
    cap_degree(cse(&polys), 2)
}

/// Per-step record of a CSE synthesis.
#[derive(Clone, Debug)]
pub struct CseReport {
    pub ancillas: usize,
    pub step_methods: Vec<(String, Method)>,
    pub max_degree: usize,
}

/// Emit a CSE plan: each intermediate is computed into its ancilla via the
/// pool-selected method, then outputs are computed from inputs and
/// intermediates. Intermediates are left computed; the enclosing oracle's
/// uncomputation resets them.
pub fn cse_emit(
    plan: &CseResult,
    inputs: &[Qubit],
    outputs: &[Qubit],
    ancillas: &[Qubit],
    pool: &[Method],
) -> Result<(Vec<Gate>, CseReport)> {
    if ancillas.len() < plan.intermediates.len() {
        return Err(Error::AncillaBudgetExceeded {
            budget: ancillas.len(),
            needed: plan.intermediates.len(),
        });
    }
    if outputs.len() != plan.outputs.len() {
        return Err(Error::SizeMismatch {
            register: outputs.len(),
            phases: plan.outputs.len(),
        });
    }
    let mut gates = Vec::new();
    let mut step_methods = Vec::new();
    for (j, poly) in plan.intermediates.iter().enumerate() {
        let (g, m) = synthesize_poly(poly, inputs, ancillas, ancillas[j], pool)?;
        gates.extend(g);
        step_methods.push((format!("g{j}"), m));
    }
    for (c, poly) in plan.outputs.iter().enumerate() {
        let (g, m) = synthesize_poly(poly, inputs, ancillas, outputs[c], pool)?;
        gates.extend(g);
        step_methods.push((format!("f{c}"), m));
    }
    let report = CseReport {
        ancillas: plan.intermediates.len(),
        step_methods,
        max_degree: plan.max_degree(),
    };
    Ok((gates, report))
}

/// CSE synthesis as a standalone circuit: plans the elimination, allocates
/// an ancilla register ("anc") next to inputs ("x") and outputs ("y"), and
/// emits with the full method pool. Errors when the plan needs more
/// ancillas than the optional budget allows.
pub fn cse_synthesize(
    table: &TruthTable,
    ancilla_budget: Option<usize>,
) -> Result<(Circuit, CseReport)> {
    let plan = cse_plan(table);
    let needed = plan.intermediates.len();
    if let Some(budget) = ancilla_budget {
        if needed > budget {
            return Err(Error::AncillaBudgetExceeded { budget, needed });
        }
    }
    let mut registers = vec![
        Register::new("x", table.n_inputs()),
        Register::new("y", table.num_columns()),
    ];
    if needed > 0 {
        registers.push(Register::new("anc", needed));
    }
    let mut circuit = Circuit::new(registers)?;
    let inputs = circuit.register_qubits("x")?;
    let outputs = circuit.register_qubits("y")?;
    let ancillas = if needed > 0 {
        circuit.register_qubits("anc")?
    } else {
        Vec::new()
    };
    let (gates, report) = cse_emit(&plan, &inputs, &outputs, &ancillas, &Method::POOL)?;
    circuit.push_all(gates)?;
    Ok((circuit, report))
}

/// Largest support for which gray / phase-tolerant candidates are built
/// when synthesizing a single polynomial (their tables are 2^v rows).
const POLY_TABLE_CAP: usize = 12;

/// Pool selection for a single polynomial over input and ancilla wires.
fn synthesize_poly(
    poly: &F2Polynomial,
    inputs: &[Qubit],
    ancillas: &[Qubit],
    out: Qubit,
    pool: &[Method],
) -> Result<(Vec<Gate>, Method)> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let wire = |v: &Var| match v {
        Var::Input(i) => inputs[*i],
        Var::Aux(j) => ancillas[*j],
    };
    let support: Vec<Var> = poly.support().into_iter().collect();
    let mut best: Option<(u64, Vec<Gate>, Method)> = None;
    for &method in pool {
        let gates = match method {
            Method::Pprm => poly_monomial_gates(poly, &wire, out, false),
            Method::PprmPtMcx => poly_monomial_gates(poly, &wire, out, true),
            Method::Gray | Method::PhaseTolerant => {
                if support.is_empty() || support.len() > POLY_TABLE_CAP {
                    continue;
                }
                let sub = poly_truth_table(poly, &support)?;
                let sub_inputs: Vec<Qubit> = support.iter().map(&wire).collect();
                if method == Method::Gray {
                    gray_synthesize_column(&sub, 0, &sub_inputs, out)?
                } else {
                    phase_tolerant_synthesize_column(&sub, 0, &sub_inputs, out)?
                }
            }
            _ => {
                return Err(Error::UnknownMethod(format!(
                    "{method} is not a pool method"
                )))
            }
        };
        let width = scratch_width(&gates, out.0 + 1);
        let count = lowered_cnot_count(&gates, width)?;
        if best.as_ref().is_none_or(|(c, _, _)| count < *c) {
            best = Some((count, gates, method));
        }
    }
    let (_, gates, method) = best.ok_or(Error::EmptyPool)?;
    Ok((gates, method))
}

/// Single-column truth table of a polynomial over its support variables
/// (position p in `support` becomes table input p).
fn poly_truth_table(poly: &F2Polynomial, support: &[Var]) -> Result<TruthTable> {
    let v = support.len();
    let mut col = vec![false; 1 << v];
    for (bits, cell) in col.iter_mut().enumerate() {
        let assignment: BTreeMap<Var, bool> = support
            .iter()
            .enumerate()
            .map(|(p, var)| (*var, bits & (1 << p) != 0))
            .collect();
        *cell = poly.evaluate(&assignment)?;
    }
    TruthTable::from_columns(v, vec![col])
}

/// Reconstruct the parity matrix of a route: D[x][j] = (-1)^{p_j(x)} with
/// columns in visiting order (the trailing empty operator is the all-ones
/// column).
pub fn parity_matrix(route: &Route) -> Vec<Vec<i8>> {
    let masks = route.visited_masks();
    let rows = 1usize << route.wires();
    (0..rows)
        .map(|x| {
            masks
                .iter()
                .map(|&m| {
                    if ParityOp(m).evaluate(x as u64) {
                        -1
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect()
}
