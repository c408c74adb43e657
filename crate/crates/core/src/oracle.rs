//! Database labeling, database-circuit encoding, query-oracle assembly,
//! similarity tags, the diffuser, and Grover program construction.
//!
//! The encoded database is a unitary U_D with U_D|i>|0> = |i>|l(e_i)>
//! (up to a per-state phase for the phase-tolerant methods). A query oracle
//! is U_D^dagger * Tag * U_D, which phase-tags exactly the indices whose
//! label matches the query's and returns label and ancilla registers to
//! |0>.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::boolean::table_from_labels;
use crate::circuit::{Circuit, Gate, Qubit, Register};
use crate::error::{Error, Result};
use crate::phase::{
    cse_emit, cse_plan, gray_synthesize_diagonal, select_best, synthesize_table, CseReport, Method,
    PhaseSpec,
};

pub const INDEX_REGISTER: &str = "idx";
pub const LABEL_REGISTER: &str = "lbl";
pub const ANCILLA_REGISTER: &str = "anc";

/// A database entry: string, integer, or raw bytes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Str(String),
    #[serde(skip)]
    Bytes(Vec<u8>),
}

impl Entry {
    /// Canonical byte encoding: UTF-8 for strings, 8-byte little-endian for
    /// integers, raw for blobs. Pinned so labels are portable.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        match self {
            Entry::Str(s) => s.as_bytes().to_vec(),
            Entry::Int(i) => i.to_le_bytes().to_vec(),
            Entry::Bytes(b) => b.clone(),
        }
    }
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Entry::Str(s) => write!(f, "{s}"),
            Entry::Int(i) => write!(f, "{i}"),
            Entry::Bytes(b) => write!(f, "{b:02x?}"),
        }
    }
}

/// Ordered collection of entries to encode.
#[derive(Clone, Debug, PartialEq)]
pub struct Database {
    pub entries: Vec<Entry>,
}

impl Database {
    pub fn new(entries: Vec<Entry>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::EmptyDatabase);
        }
        Ok(Database { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// k-bit label; bit j of `value` is label bit l_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label {
    pub value: u64,
    pub k: usize,
}

impl Label {
    pub fn new(value: u64, k: usize) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::BadLabelSize(k));
        }
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Ok(Label {
            value: value & mask,
            k,
        })
    }

    pub fn bit(&self, j: usize) -> bool {
        (self.value >> j) & 1 == 1
    }

    /// Parse an MSB-first numeral like "0101" (rightmost character is bit 0).
    pub fn from_bitstring(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::BadBitstring(s.to_string()));
        }
        let value = u64::from_str_radix(s, 2).map_err(|_| Error::BadBitstring(s.to_string()))?;
        Label::new(value, s.len())
    }

    /// MSB-first numeral of width k.
    pub fn to_bitstring(&self) -> String {
        (0..self.k)
            .rev()
            .map(|j| if self.bit(j) { '1' } else { '0' })
            .collect()
    }
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Deterministic k-bit label: FNV-1a over the entry's canonical bytes,
/// truncated to the k low-order bits.
pub fn label(entry: &Entry, k: usize) -> Result<Label> {
    Label::new(fnv1a64(&entry.canonical_bytes()), k)
}

/// How entries map to labels: the pinned hash, or an explicit fixture
/// table.
#[derive(Clone, Debug)]
pub enum Labeling {
    Hash,
    Explicit(Vec<(Entry, u64)>),
}

impl Labeling {
    pub fn label_of(&self, entry: &Entry, k: usize) -> Result<Label> {
        match self {
            Labeling::Hash => label(entry, k),
            Labeling::Explicit(pairs) => pairs
                .iter()
                .find(|(e, _)| e == entry)
                .map(|(_, v)| Label::new(*v, k))
                .ok_or(Error::QueryNotLabeled)?,
        }
    }
}

/// A compiled database circuit plus everything needed to query it.
#[derive(Clone, Debug)]
pub struct EncodedDatabase {
    /// U_D over registers idx, lbl and (for CSE) anc.
    pub circuit: Circuit,
    pub n_index: usize,
    pub k: usize,
    /// Real entry count before padding.
    pub n_entries: usize,
    /// Padded label list, one per index register value.
    pub labels: Vec<u64>,
    pub method: Method,
    pub padded: bool,
    pub ancillas: usize,
    pub labeling: Labeling,
    pub cse_report: Option<CseReport>,
}

impl EncodedDatabase {
    pub fn index_qubits(&self) -> Vec<Qubit> {
        self.circuit
            .register_qubits(INDEX_REGISTER)
            .expect("layout built by encode")
    }

    pub fn label_qubits(&self) -> Vec<Qubit> {
        self.circuit
            .register_qubits(LABEL_REGISTER)
            .expect("layout built by encode")
    }

    /// Fresh circuit over this encoding's layout.
    pub fn empty_circuit(&self) -> Circuit {
        Circuit::new(self.circuit.registers().to_vec()).expect("valid layout")
    }

    /// Indices whose label equals the given one (collisions included).
    pub fn matching_indices(&self, label_value: u64) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, &l)| l == label_value && *i < self.n_entries)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Build U_D for a database under the pinned hash labeling.
pub fn encode_database(db: &Database, k: usize, method: Method) -> Result<EncodedDatabase> {
    let labels: Vec<u64> = db
        .entries
        .iter()
        .map(|e| label(e, k).map(|l| l.value))
        .collect::<Result<_>>()?;
    encode_with_labels(labels, db.len(), k, method, Labeling::Hash)
}

/// Build U_D from an explicit entry -> label fixture.
pub fn encode_labeled(pairs: &[(Entry, u64)], k: usize, method: Method) -> Result<EncodedDatabase> {
    if pairs.len() < 2 {
        return Err(Error::EmptyDatabase);
    }
    let labels: Vec<u64> = pairs.iter().map(|(_, v)| *v).collect();
    encode_with_labels(
        labels,
        pairs.len(),
        k,
        method,
        Labeling::Explicit(pairs.to_vec()),
    )
}

fn encode_with_labels(
    labels: Vec<u64>,
    n_entries: usize,
    k: usize,
    method: Method,
    labeling: Labeling,
) -> Result<EncodedDatabase> {
    let (table, padded) = table_from_labels(&labels, k)?;
    let n = table.n_inputs();
    let mut padded_labels = labels;
    padded_labels.resize(1 << n, 0);

    let (registers, ancillas, plan) = match method {
        Method::Cse => {
            let plan = cse_plan(&table);
            let ancillas = plan.intermediates.len();
            let mut regs = vec![
                Register::new(INDEX_REGISTER, n),
                Register::new(LABEL_REGISTER, k),
            ];
            if ancillas > 0 {
                regs.push(Register::new(ANCILLA_REGISTER, ancillas));
            }
            (regs, ancillas, Some(plan))
        }
        _ => (
            vec![
                Register::new(INDEX_REGISTER, n),
                Register::new(LABEL_REGISTER, k),
            ],
            0,
            None,
        ),
    };

    let mut circuit = Circuit::new(registers)?;
    let inputs = circuit.register_qubits(INDEX_REGISTER)?;
    let outputs = circuit.register_qubits(LABEL_REGISTER)?;

    let mut cse_report = None;
    let (gates, method_tag) = match method {
        Method::Auto => select_best(&table, &inputs, &outputs, &Method::POOL)?,
        Method::Cse => {
            let plan = plan.expect("built above");
            let anc = if ancillas > 0 {
                circuit.register_qubits(ANCILLA_REGISTER)?
            } else {
                Vec::new()
            };
            let (gates, report) = cse_emit(&plan, &inputs, &outputs, &anc, &Method::POOL)?;
            cse_report = Some(report);
            (gates, Method::Cse)
        }
        m => (synthesize_table(&table, m, &inputs, &outputs)?, m),
    };
    circuit.push_all(gates)?;

    Ok(EncodedDatabase {
        circuit,
        n_index: n,
        k,
        n_entries,
        labels: padded_labels,
        method: method_tag,
        padded,
        ancillas,
        labeling,
        cse_report,
    })
}

/// Phase-tag one label value: |l> -> -|l> iff l equals the target, realized
/// as a multi-controlled Z enclosed by X gates on the zero bits.
pub fn phase_tag(target: &Label, label_qubits: &[Qubit]) -> Result<Vec<Gate>> {
    if label_qubits.len() != target.k {
        return Err(Error::SizeMismatch {
            register: label_qubits.len(),
            phases: target.k,
        });
    }
    let mut gates = Vec::new();
    let flips: Vec<Gate> = (0..target.k)
        .filter(|&j| !target.bit(j))
        .map(|j| Gate::X(label_qubits[j]))
        .collect();
    gates.extend(flips.iter().cloned());
    gates.push(Gate::mcz(label_qubits.to_vec()));
    gates.extend(flips);
    Ok(gates)
}

/// Phase shifts proportional to Hamming agreement with the query label:
/// one RZ(-(-1)^{l_j(q)} * 2 pi / k) per label qubit. A basis label at
/// Hamming distance d receives phase pi (k - 2d) / k.
pub fn hamming_similarity_tag(target: &Label, label_qubits: &[Qubit]) -> Result<Vec<Gate>> {
    if label_qubits.len() != target.k {
        return Err(Error::SizeMismatch {
            register: label_qubits.len(),
            phases: target.k,
        });
    }
    let k = target.k as f64;
    Ok((0..target.k)
        .map(|j| {
            let sign = if target.bit(j) { -1.0 } else { 1.0 };
            Gate::rz(-sign * 2.0 * PI / k, label_qubits[j])
        })
        .collect())
}

/// Monotone remap of a similarity measure onto [0, 1].
pub type Contrast = dyn Fn(f64) -> f64;

/// The logistic contrast that sharpens amplification: midpoint 0.5 at 0.78.
pub fn default_contrast(x: f64) -> f64 {
    1.0 / ((30.0 * (0.78 - x)).exp() + 1.0)
}

/// Check that a contrast is monotone non-decreasing and stays in [0, 1],
/// sampled on a 1e-3 grid.
pub fn validate_contrast(contrast: &Contrast) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=1000 {
        let x = i as f64 / 1000.0;
        let y = contrast(x);
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::MeasureOutOfRange(y));
        }
        if y < prev - 1e-12 {
            return Err(Error::MeasureOutOfRange(y));
        }
        prev = y;
    }
    Ok(())
}

/// Set-overlap similarity of two equal-length bitstrings; two empty sets
/// count as identical.
pub fn dice_coefficient(x: &Label, y: &Label) -> Result<f64> {
    if x.k != y.k {
        return Err(Error::SizeMismatch {
            register: x.k,
            phases: y.k,
        });
    }
    let both = (x.value & y.value).count_ones() as f64;
    let total = (x.value.count_ones() + y.value.count_ones()) as f64;
    if total == 0.0 {
        return Ok(1.0);
    }
    Ok(2.0 * both / total)
}

/// Diagonal similarity tag from an arbitrary measure f(q, y) in [0, 1]:
/// phases phi_y = (-1)^y * pi * Lambda(f(q, y)), synthesized over the label
/// register with at most 2^k CNOTs. The alternating sign keeps the phase
/// center of mass near zero.
pub fn advanced_similarity_tag(
    measure: &dyn Fn(u64) -> f64,
    contrast: Option<&Contrast>,
    label_qubits: &[Qubit],
) -> Result<Vec<Gate>> {
    let k = label_qubits.len();
    if k > 12 {
        return Err(Error::LabelTooWideForTag(k));
    }
    let mut phis = Vec::with_capacity(1 << k);
    for y in 0..(1u64 << k) {
        let f = measure(y);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::MeasureOutOfRange(f));
        }
        let shaped = contrast.map_or(f, |c| c(f));
        let sign = if y % 2 == 0 { 1.0 } else { -1.0 };
        phis.push(sign * PI * shaped);
    }
    if phis.iter().all(|p| p.abs() < 1e-15) {
        return Ok(Vec::new());
    }
    gray_synthesize_diagonal(&PhaseSpec::new(phis)?, label_qubits)
}

/// Tag selection for query oracles.
pub enum TagKind<'a> {
    Exact,
    Hamming,
    Advanced {
        measure: &'a dyn Fn(u64) -> f64,
        contrast: Option<&'a Contrast>,
    },
}

/// A query oracle O = U_D^dagger * Tag(l(q)) * U_D plus bookkeeping.
pub struct QueryOracle {
    pub circuit: Circuit,
    pub query_label: Label,
    /// Entries sharing the query label (the winners).
    pub matches: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Assemble the query oracle for one entry.
pub fn build_query_oracle(
    enc: &EncodedDatabase,
    query: &Entry,
    tag: &TagKind,
) -> Result<QueryOracle> {
    let query_label = enc.labeling.label_of(query, enc.k)?;
    let mut warnings = Vec::new();
    if enc.padded && query_label.value == 0 {
        warnings.push(
            "query label is the all-zero padding label; padded rows will be tagged too".into(),
        );
    }
    let label_qubits = enc.label_qubits();
    let tag_gates = match tag {
        TagKind::Exact => phase_tag(&query_label, &label_qubits)?,
        TagKind::Hamming => hamming_similarity_tag(&query_label, &label_qubits)?,
        TagKind::Advanced { measure, contrast } => {
            advanced_similarity_tag(*measure, *contrast, &label_qubits)?
        }
    };
    let mut circuit = enc.circuit.clone();
    circuit.push_all(tag_gates)?;
    let assembled = circuit.concat(&enc.circuit.inverse())?;
    Ok(QueryOracle {
        circuit: assembled,
        query_label,
        matches: enc.matching_indices(query_label.value),
        warnings,
    })
}

/// Expected number of entries sharing a label: 1 + (N - 1) 2^-k.
pub fn expected_collisions(n: usize, k: usize) -> f64 {
    1.0 + (n as f64 - 1.0) * (2f64).powi(-(k as i32))
}

/// Iteration counts for M tagged states out of N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IterationCount {
    /// max(1, floor(pi / (4 asin sqrt(M/N)))) - the standard optimum.
    pub optimal: usize,
    /// ceil((pi/4) sqrt(N/M)) - the looser literature bound.
    pub literature_bound: usize,
}

pub fn iteration_count(n: usize, m: usize) -> Result<IterationCount> {
    if m == 0 || m > n {
        return Err(Error::TooManyTagged { m, n });
    }
    let theta = (m as f64 / n as f64).sqrt().asin();
    let optimal = ((PI / (4.0 * theta)).floor() as usize).max(1);
    let literature_bound = (PI / 4.0 * (n as f64 / m as f64).sqrt()).ceil() as usize;
    Ok(IterationCount {
        optimal,
        literature_bound,
    })
}

/// The Grover reflection about the uniform superposition:
/// H^n X^n MCZ X^n H^n, equal to 2|s><s| - I up to global phase.
pub fn diffuser(index_qubits: &[Qubit]) -> Vec<Gate> {
    let mut gates = Vec::new();
    for &q in index_qubits {
        gates.push(Gate::H(q));
    }
    for &q in index_qubits {
        gates.push(Gate::X(q));
    }
    if index_qubits.len() == 1 {
        gates.push(Gate::rz(PI, index_qubits[0]));
    } else {
        gates.push(Gate::mcz(index_qubits.to_vec()));
    }
    for &q in index_qubits {
        gates.push(Gate::X(q));
    }
    for &q in index_qubits {
        gates.push(Gate::H(q));
    }
    gates
}

/// A full Grover program: initialization plus iterations of oracle and
/// diffuser.
pub struct GroverProgram {
    pub circuit: Circuit,
    pub iterations: usize,
    /// The collision estimate used when iterations were chosen automatically.
    pub estimated_m: usize,
    pub query_label: Label,
    pub warnings: Vec<String>,
}

/// Build the Grover search circuit for a query. With `iterations: None`
/// the count comes from the collision estimator: M = round(E(M)), minimum 1.
pub fn build_grover(
    enc: &EncodedDatabase,
    query: &Entry,
    tag: &TagKind,
    iterations: Option<usize>,
) -> Result<GroverProgram> {
    let oracle = build_query_oracle(enc, query, tag)?;
    let n = 1usize << enc.n_index;
    let estimated_m = (expected_collisions(n, enc.k).round() as usize).max(1);
    let iterations = match iterations {
        Some(r) => r.max(1),
        None => iteration_count(n, estimated_m)?.optimal,
    };
    let mut circuit = enc.empty_circuit();
    for q in enc.index_qubits() {
        circuit.push(Gate::H(q))?;
    }
    let step = oracle.circuit.concat(&{
        let mut d = enc.empty_circuit();
        d.push_all(diffuser(&enc.index_qubits()))?;
        d
    })?;
    for _ in 0..iterations {
        circuit = circuit.concat(&step)?;
    }
    Ok(GroverProgram {
        circuit,
        iterations,
        estimated_m,
        query_label: oracle.query_label,
        warnings: oracle.warnings,
    })
}

/// Center of mass and amplification factors of a phase vector after one
/// diffuser application: A_x = sqrt(1 + 4 r^2 - 4 r cos(phi_x - phi_cm)).
#[derive(Clone, Debug)]
pub struct Amplification {
    pub r_cm: f64,
    pub phi_cm: f64,
    pub factors: Vec<f64>,
}

pub fn amplification_analysis(phases: &[f64]) -> Amplification {
    let n = phases.len() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for &p in phases {
        re += p.cos();
        im += p.sin();
    }
    re /= n;
    im /= n;
    let r_cm = (re * re + im * im).sqrt();
    let phi_cm = if r_cm <= 1e-12 { 0.0 } else { im.atan2(re) };
    let factors = phases
        .iter()
        .map(|&p| (1.0 + 4.0 * r_cm * r_cm - 4.0 * r_cm * (p - phi_cm).cos()).sqrt())
        .collect();
    Amplification {
        r_cm,
        phi_cm,
        factors,
    }
}

/// Search report emitted by the CLI and tests.
#[derive(Serialize, Deserialize, Debug)]
pub struct SearchReport {
    pub probabilities: Vec<f64>,
    pub top: Vec<TopHit>,
    pub iterations: usize,
    #[serde(rename = "estimated_M")]
    pub estimated_m: usize,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct TopHit {
    pub index: usize,
    pub p: f64,
}

impl SearchReport {
    /// Rank indices by probability; `top` keeps every index within 1e-9 of
    /// the maximum.
    pub fn from_distribution(probs: Vec<f64>, iterations: usize, estimated_m: usize) -> Self {
        let max = probs.iter().copied().fold(0.0, f64::max);
        let top = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= max - 1e-9)
            .map(|(index, &p)| TopHit { index, p })
            .collect();
        SearchReport {
            probabilities: probs,
            top,
            iterations,
            estimated_m,
        }
    }
}
