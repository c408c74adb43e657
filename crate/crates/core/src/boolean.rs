//! Truth tables, F2 polynomials, Reed-Muller expansion and common
//! subexpression elimination.
//!
//! A polynomial is a set of monomials (XOR of AND products) over input
//! variables `x_i` and intermediate symbols `g_j`. Set semantics make the
//! F2 cancellation automatic: adding a monomial twice removes it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variable of an F2 polynomial: a table input or an intermediate symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Input(usize),
    Aux(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Input(i) => write!(f, "x{i}"),
            Var::Aux(j) => write!(f, "g{j}"),
        }
    }
}

/// AND product of variables; the empty product is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub BTreeSet<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeSet::new())
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Self {
        Monomial(vars.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains_all(&self, fragment: &BTreeSet<Var>) -> bool {
        fragment.is_subset(&self.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Degree-descending, then lexicographic, so the canonical text
        // reads "x0*x2 + x0 + x1 + x2" with the constant term last.
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// XOR of AND monomials. The empty polynomial is the constant 0.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct F2Polynomial {
    monomials: BTreeSet<Monomial>,
}

impl F2Polynomial {
    pub fn zero() -> Self {
        F2Polynomial::default()
    }

    pub fn one() -> Self {
        let mut p = F2Polynomial::default();
        p.toggle(Monomial::one());
        p
    }

    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = F2Polynomial::default();
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    /// Single-variable polynomial.
    pub fn var(v: Var) -> Self {
        F2Polynomial::from_monomials([Monomial::from_vars([v])])
    }

    /// XOR a monomial in (duplicates cancel).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<Var> {
        self.monomials
            .iter()
            .flat_map(|m| m.0.iter().copied())
            .collect()
    }

    /// XOR over monomials of AND over member variables.
    pub fn evaluate(&self, assignment: &BTreeMap<Var, bool>) -> Result<bool> {
        let mut acc = false;
        for m in &self.monomials {
            let mut prod = true;
            for v in &m.0 {
                match assignment.get(v) {
                    Some(b) => prod &= *b,
                    None => return Err(Error::UnassignedVariable(v.to_string())),
                }
            }
            acc ^= prod;
        }
        Ok(acc)
    }
}

impl fmt::Display for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.monomials.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// n-input, k-column bit matrix: column c holds output bit c for every input
/// row in natural (little-endian integer) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n_inputs: usize,
    columns: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct TruthTableJson {
    n_inputs: usize,
    columns: Vec<String>,
}

impl TruthTable {
    pub fn from_columns(n_inputs: usize, columns: Vec<Vec<bool>>) -> Result<Self> {
        if n_inputs == 0 {
            return Err(Error::Layout("truth table needs at least one input".into()));
        }
        let rows = 1usize << n_inputs;
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Layout(format!(
                    "column {c} has {} entries, expected {rows}",
                    col.len()
                )));
            }
        }
        Ok(TruthTable { n_inputs, columns })
    }

    /// Single column written row-0-first, e.g. "1001".
    pub fn from_column_str(bits: &str) -> Result<Self> {
        let col: Vec<bool> = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadBitstring(bits.to_string())),
            })
            .collect::<Result<_>>()?;
        if !col.len().is_power_of_two() || col.len() < 2 {
            return Err(Error::NotPowerOfTwo(col.len()));
        }
        let n = col.len().trailing_zeros() as usize;
        TruthTable::from_columns(n, vec![col])
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn num_rows(&self) -> usize {
        1 << self.n_inputs
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn value(&self, column: usize, row: usize) -> bool {
        self.columns[column][row]
    }

    pub fn column(&self, column: usize) -> &[bool] {
        &self.columns[column]
    }

    pub fn to_json(&self) -> Result<String> {
        let cols = self
            .columns
            .iter()
            .map(|c| c.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        Ok(serde_json::to_string_pretty(&TruthTableJson {
            n_inputs: self.n_inputs,
            columns: cols,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: TruthTableJson = serde_json::from_str(text)?;
        let columns = parsed
            .columns
            .iter()
            .map(|s| {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::BadBitstring(s.clone())),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        TruthTable::from_columns(parsed.n_inputs, columns)
    }
}

/// Build the table for a list of k-bit labels: column j holds bit j of each
/// label, rows in entry order. Lists that are not a power of two are padded
/// with all-zero labels; the returned flag says whether padding happened.
pub fn table_from_labels(labels: &[u64], k: usize) -> Result<(TruthTable, bool)> {
    if labels.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    if k == 0 || k > 64 {
        return Err(Error::BadLabelSize(k));
    }
    let padded_len = labels.len().next_power_of_two().max(2);
    let padded = padded_len != labels.len();
    let n = padded_len.trailing_zeros() as usize;
    let mut columns = vec![vec![false; padded_len]; k];
    for (row, &label) in labels.iter().enumerate() {
        for (j, col) in columns.iter_mut().enumerate() {
            col[row] = (label >> j) & 1 == 1;
        }
    }
    Ok((TruthTable::from_columns(n, columns)?, padded))
}

/// Positive-polarity Reed-Muller expansion of one column, computed with the
/// F2 Moebius transform: the monomial S is present iff the XOR of the column
/// over all rows x with x a subset of S is 1. The result is the unique
/// positive-polarity form, independent of any recursion order.
pub fn reed_muller_expand(table: &TruthTable, column: usize) -> F2Polynomial {
    let rows = table.num_rows();
    let mut coef: Vec<bool> = table.column(column).to_vec();
    for i in 0..table.n_inputs() {
        let bit = 1usize << i;
        for x in 0..rows {
            if x & bit != 0 {
                coef[x] ^= coef[x ^ bit];
            }
        }
    }
    let mut poly = F2Polynomial::zero();
    for (mask, &c) in coef.iter().enumerate() {
        if c {
            let vars = (0..table.n_inputs())
                .filter(|i| mask & (1 << i) != 0)
                .map(Var::Input);
            poly.toggle(Monomial::from_vars(vars));
        }
    }
    poly
}

/// Outcome of common subexpression elimination: intermediates in dependency
/// order (no forward references) plus rewritten outputs.
#[derive(Clone, Debug, Default)]
pub struct CseResult {
    pub intermediates: Vec<F2Polynomial>,
    pub outputs: Vec<F2Polynomial>,
}

impl CseResult {
    /// Evaluate the outputs at one input assignment, computing the
    /// intermediates in order.
    pub fn evaluate(&self, inputs: &BTreeMap<Var, bool>) -> Result<Vec<bool>> {
        let mut assignment = inputs.clone();
        for (j, g) in self.intermediates.iter().enumerate() {
            let v = g.evaluate(&assignment)?;
            assignment.insert(Var::Aux(j), v);
        }
        self.outputs
            .iter()
            .map(|p| p.evaluate(&assignment))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.intermediates
            .iter()
            .chain(self.outputs.iter())
            .map(F2Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Number of uses of each intermediate across intermediates + outputs.
    pub fn use_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.intermediates.len()];
        let polys = self.intermediates.iter().chain(self.outputs.iter());
        for p in polys {
            for m in p.monomials() {
                for v in &m.0 {
                    if let Var::Aux(j) = v {
                        counts[*j] += 1;
                    }
                }
            }
        }
        counts
    }
}

struct CseState {
    defs: Vec<F2Polynomial>,
    outputs: Vec<F2Polynomial>,
}

impl CseState {
    fn polys(&self) -> impl Iterator<Item = &F2Polynomial> {
        self.defs.iter().chain(self.outputs.iter())
    }

    fn polys_mut(&mut self) -> impl Iterator<Item = &mut F2Polynomial> {
        self.defs.iter_mut().chain(self.outputs.iter_mut())
    }

    /// Replace the pair everywhere it occurs with a fresh aux variable.
    fn extract_pair(&mut self, pair: &BTreeSet<Var>) {
        let g = Var::Aux(self.defs.len());
        for poly in self.polys_mut() {
            let hits: Vec<Monomial> = poly
                .monomials()
                .filter(|m| m.contains_all(pair))
                .cloned()
                .collect();
            for m in hits {
                poly.toggle(m.clone());
                let mut vars = m.0.clone();
                for v in pair {
                    vars.remove(v);
                }
                vars.insert(g);
                poly.toggle(Monomial(vars));
            }
        }
        self.defs
            .push(F2Polynomial::from_monomials([Monomial(pair.clone())]));
    }

    /// Replace the shared XOR group with a fresh aux variable in every
    /// polynomial that contains all of its terms.
    fn extract_group(&mut self, group: &BTreeSet<Monomial>) {
        let g = Var::Aux(self.defs.len());
        for poly in self.polys_mut() {
            if group.iter().all(|m| poly.monomials.contains(m)) {
                for m in group {
                    poly.toggle(m.clone());
                }
                poly.toggle(Monomial::from_vars([g]));
            }
        }
        self.defs
            .push(F2Polynomial::from_monomials(group.iter().cloned()));
    }

    /// Highest-occurrence variable pair appearing in >= 2 monomials across
    /// the working set; ties break toward the lexicographically smallest.
    fn best_shared_pair(&self) -> Option<BTreeSet<Var>> {
        let mut counts: HashMap<(Var, Var), usize> = HashMap::new();
        for poly in self.polys() {
            for m in poly.monomials() {
                let vars: Vec<Var> = m.0.iter().copied().collect();
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        *counts.entry((vars[i], vars[j])).or_insert(0) += 1;
                    }
                }
            }
        }
        counts
            .into_iter()
            .filter(|(_, c)| *c >= 2)
            .max_by(|(pa, ca), (pb, cb)| ca.cmp(cb).then_with(|| pb.cmp(pa)))
            .map(|((a, b), _)| BTreeSet::from([a, b]))
    }

    /// Best XOR group of >= 2 monomials shared by >= 2 polynomials, scored
    /// by occurrences x (terms - 1); candidates come from pairwise
    /// polynomial intersections.
    fn best_shared_group(&self) -> Option<BTreeSet<Monomial>> {
        let all: Vec<&F2Polynomial> = self.polys().collect();
        let mut candidates: BTreeSet<Vec<Monomial>> = BTreeSet::new();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let inter: Vec<Monomial> = all[i]
                    .monomials
                    .intersection(&all[j].monomials)
                    .cloned()
                    .collect();
                if inter.len() >= 2 {
                    candidates.insert(inter);
                }
            }
        }
        let mut best: Option<(usize, BTreeSet<Monomial>)> = None;
        for cand in candidates {
            let group: BTreeSet<Monomial> = cand.into_iter().collect();
            let occurrences = all
                .iter()
                .filter(|p| group.iter().all(|m| p.monomials.contains(m)))
                .count();
            if occurrences < 2 {
                continue;
            }
            let score = occurrences * (group.len() - 1);
            let better = match &best {
                None => true,
                Some((s, g)) => score > *s || (score == *s && group < *g),
            };
            if better {
                best = Some((score, group));
            }
        }
        best.map(|(_, g)| g)
    }

    /// Renumber aux variables into dependency order. Extraction can rewrite
    /// an earlier definition to use a later symbol, so the raw indices are
    /// not topological.
    fn into_result(self) -> CseResult {
        let n = self.defs.len();
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        // Kahn-style sweep; each def only references existing symbols so this
        // always makes progress.
        while order.len() < n {
            let before = order.len();
            for j in 0..n {
                if placed[j] {
                    continue;
                }
                let deps_ok = self.defs[j].support().iter().all(|v| match v {
                    Var::Input(_) => true,
                    Var::Aux(d) => placed[*d],
                });
                if deps_ok {
                    placed[j] = true;
                    order.push(j);
                }
            }
            assert!(order.len() > before, "cyclic intermediate dependency");
        }
        let mut renumber = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let remap = |poly: &F2Polynomial| -> F2Polynomial {
            F2Polynomial::from_monomials(poly.monomials().map(|m| {
                Monomial(
                    m.0.iter()
                        .map(|v| match v {
                            Var::Aux(j) => Var::Aux(renumber[*j]),
                            other => *other,
                        })
                        .collect(),
                )
            }))
        };
        CseResult {
            intermediates: order.iter().map(|&j| remap(&self.defs[j])).collect(),
            outputs: self.outputs.iter().map(remap).collect(),
        }
    }
}

/// Greedy common subexpression elimination. Shared products (variable
/// pairs) are exhausted before shared XOR groups on every round; both kinds
/// require at least two occurrences, so every intermediate is used at least
/// twice and the maximum monomial degree never increases.
pub fn cse(polys: &[F2Polynomial]) -> CseResult {
    let mut state = CseState {
        defs: Vec::new(),
        outputs: polys.to_vec(),
    };
    let budget = 64 + 4 * polys.iter().map(F2Polynomial::num_monomials).sum::<usize>();
    for _ in 0..budget {
        if let Some(pair) = state.best_shared_pair() {
            state.extract_pair(&pair);
        } else if let Some(group) = state.best_shared_group() {
            state.extract_group(&group);
        } else {
            break;
        }
    }
    state.into_result()
}

/// Break every monomial of degree > `max_degree` into chained pair
/// intermediates, allowing single-use extractions. Used by CSE synthesis to
/// pin the T-order; plain [`cse`] never does this.
pub fn cap_degree(result: CseResult, max_degree: usize) -> CseResult {
    let mut state = CseState {
        defs: result.intermediates,
        outputs: result.outputs,
    };
    loop {
        let offending = state
            .polys()
            .flat_map(|p| p.monomials())
            .filter(|m| m.degree() > max_degree)
            .min()
            .cloned();
        let Some(m) = offending else { break };
        let pair: BTreeSet<Var> = m.0.iter().take(2).copied().collect();
        state.extract_pair(&pair);
    }
    state.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Var {
        Var::Input(i)
    }

    fn mono(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().map(|&i| x(i)))
    }

    use crate::fixtures::cse_example_table as example_table;

    fn assignment(n: usize, bits: usize) -> BTreeMap<Var, bool> {
        (0..n).map(|i| (x(i), bits & (1 << i) != 0)).collect()
    }

    #[test]
    fn reed_muller_of_example_first_column() {
        let t = example_table();
        let p = reed_muller_expand(&t, 0);
        let expect =
            F2Polynomial::from_monomials([mono(&[0, 2]), mono(&[0]), mono(&[1]), mono(&[2])]);
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "x0*x2 + x0 + x1 + x2");
    }

    #[test]
    fn reed_muller_of_example_third_column() {
        let t = example_table();
        assert_eq!(
            reed_muller_expand(&t, 2),
            F2Polynomial::from_monomials([mono(&[0, 1, 2])])
        );
    }

    #[test]
    fn reed_muller_of_example_second_column() {
        let t = example_table();
        assert_eq!(
            reed_muller_expand(&t, 1),
            F2Polynomial::from_monomials([
                mono(&[0, 1]),
                mono(&[0, 2]),
                mono(&[1]),
                mono(&[2]),
                Monomial::one(),
            ])
        );
    }

    #[test]
    fn reed_muller_of_all_zero_column() {
        let t = TruthTable::from_columns(2, vec![vec![false; 4]]).unwrap();
        assert!(reed_muller_expand(&t, 0).is_zero());
    }

    #[test]
    fn reed_muller_matches_table_exhaustively() {
        let t = example_table();
        for c in 0..3 {
            let p = reed_muller_expand(&t, c);
            for row in 0..8 {
                assert_eq!(
                    p.evaluate(&assignment(3, row)).unwrap(),
                    t.value(c, row),
                    "column {c} row {row}"
                );
            }
        }
    }

    #[test]
    fn evaluate_basic_cases() {
        let p = F2Polynomial::from_monomials([mono(&[0, 1]), mono(&[0])]);
        assert!(!p.evaluate(&assignment(2, 0b11)).unwrap()); // 1 xor 1 = 0
        assert!(F2Polynomial::one().evaluate(&assignment(1, 0)).unwrap());
        // f1 of the example at (0,0,0) is 1.
        let t = example_table();
        let f1 = reed_muller_expand(&t, 1);
        assert!(f1.evaluate(&assignment(3, 0)).unwrap());
    }

    #[test]
    fn evaluate_rejects_unassigned_variables() {
        let p = F2Polynomial::var(x(3));
        assert!(matches!(
            p.evaluate(&assignment(2, 0)),
            Err(Error::UnassignedVariable(_))
        ));
    }

    #[test]
    fn cse_reproduces_worked_example() {
        let t = example_table();
        let polys: Vec<F2Polynomial> = (0..3).map(|c| reed_muller_expand(&t, c)).collect();
        let result = cse(&polys);

        assert_eq!(result.intermediates.len(), 2);
        assert_eq!(
            result.intermediates[0],
            F2Polynomial::from_monomials([mono(&[0, 2])])
        );
        assert_eq!(
            result.intermediates[1],
            F2Polynomial::from_monomials([
                Monomial::from_vars([Var::Aux(0)]),
                mono(&[1]),
                mono(&[2]),
            ])
        );
        // f0 = g1 + x0, f1 = g1 + x0*x1 + 1, f2 = g0*x1
        assert_eq!(
            result.outputs[0],
            F2Polynomial::from_monomials([Monomial::from_vars([Var::Aux(1)]), mono(&[0])])
        );
        assert_eq!(
            result.outputs[1],
            F2Polynomial::from_monomials([
                Monomial::from_vars([Var::Aux(1)]),
                mono(&[0, 1]),
                Monomial::one(),
            ])
        );
        assert_eq!(
            result.outputs[2],
            F2Polynomial::from_monomials([Monomial::from_vars([Var::Aux(0), x(1)])])
        );
        assert_eq!(result.max_degree(), 2);

        // Functional equivalence on every input.
        for row in 0..8 {
            let got = result.evaluate(&assignment(3, row)).unwrap();
            for c in 0..3 {
                assert_eq!(got[c], t.value(c, row));
            }
        }
    }

    #[test]
    fn cse_leaves_single_variable_alone() {
        let result = cse(&[F2Polynomial::var(x(0))]);
        assert!(result.intermediates.is_empty());
        assert_eq!(result.outputs[0], F2Polynomial::var(x(0)));
    }

    #[test]
    fn cse_shares_duplicated_columns() {
        // No shared products to pre-empt the XOR group: the duplicate column
        // becomes a single intermediate referenced by both outputs.
        let p = F2Polynomial::from_monomials([mono(&[0]), mono(&[1]), Monomial::one()]);
        let result = cse(&[p.clone(), p.clone()]);
        assert_eq!(result.intermediates.len(), 1);
        assert_eq!(result.intermediates[0], p);
        let g0 = Monomial::from_vars([Var::Aux(0)]);
        assert_eq!(
            result.outputs[0],
            F2Polynomial::from_monomials([g0.clone()])
        );
        assert_eq!(result.outputs[1], F2Polynomial::from_monomials([g0]));
        for bits in 0..4 {
            let inputs = assignment(2, bits);
            let got = result.evaluate(&inputs).unwrap();
            let want = p.evaluate(&inputs).unwrap();
            assert_eq!(got, vec![want, want]);
        }
    }

    #[test]
    fn cse_shares_duplicated_columns_with_products() {
        // With a shared product inside, the pair is extracted first and the
        // remaining XOR group second; both outputs still reference one
        // shared symbol and the semantics are unchanged.
        let p = F2Polynomial::from_monomials([mono(&[0, 1]), mono(&[2])]);
        let result = cse(&[p.clone(), p.clone()]);
        assert_eq!(result.outputs[0], result.outputs[1]);
        assert_eq!(result.outputs[0].num_monomials(), 1);
        for bits in 0..8 {
            let inputs = assignment(3, bits);
            let got = result.evaluate(&inputs).unwrap();
            let want = p.evaluate(&inputs).unwrap();
            assert_eq!(got, vec![want, want]);
        }
    }

    #[test]
    fn cse_intermediates_used_at_least_twice() {
        let t = example_table();
        let polys: Vec<F2Polynomial> = (0..3).map(|c| reed_muller_expand(&t, c)).collect();
        let result = cse(&polys);
        for (j, uses) in result.use_counts().iter().enumerate() {
            assert!(*uses >= 2, "g{j} used {uses} times");
        }
    }

    #[test]
    fn cap_degree_reaches_two_even_without_sharing() {
        let p = F2Polynomial::from_monomials([mono(&[0, 1, 2, 3, 4])]);
        let capped = cap_degree(cse(&[p.clone()]), 2);
        assert!(capped.max_degree() <= 2);
        for bits in 0..32 {
            let inputs = assignment(5, bits);
            assert_eq!(
                capped.evaluate(&inputs).unwrap()[0],
                p.evaluate(&inputs).unwrap()
            );
        }
    }

    #[test]
    fn table_from_reference_labels() {
        // Label columns of the example name table, bit j = l_j.
        let labels: Vec<u64> = vec![3, 10, 12, 11, 8, 4, 10, 9];
        let (t, padded) = table_from_labels(&labels, 4).unwrap();
        assert!(!padded);
        assert_eq!(t.n_inputs(), 3);
        assert_eq!(t.num_columns(), 4);
        // Row 1 (Bob): l = (0, 1, 0, 1).
        let bob: Vec<bool> = (0..4).map(|j| t.value(j, 1)).collect();
        assert_eq!(bob, vec![false, true, false, true]);
    }

    #[test]
    fn table_from_two_labels_is_identity_column() {
        let (t, padded) = table_from_labels(&[0, 1], 1).unwrap();
        assert!(!padded);
        assert_eq!(t.n_inputs(), 1);
        assert_eq!(t.column(0), &[false, true]);
    }

    #[test]
    fn table_pads_to_next_power_of_two() {
        let labels = vec![5, 6, 7, 1, 2];
        let (t, padded) = table_from_labels(&labels, 3).unwrap();
        assert!(padded);
        assert_eq!(t.n_inputs(), 3);
        for row in 5..8 {
            for j in 0..3 {
                assert!(!t.value(j, row), "pad rows must hold the zero label");
            }
        }
    }

    #[test]
    fn empty_label_list_is_an_error() {
        assert!(matches!(
            table_from_labels(&[], 2),
            Err(Error::EmptyDatabase)
        ));
    }

    #[test]
    fn truth_table_json_round_trip() {
        let t = example_table();
        let text = t.to_json().unwrap();
        assert_eq!(TruthTable::from_json(&text).unwrap(), t);
    }

    #[test]
    fn reed_muller_is_idempotent_under_re_expansion() {
        // Expanding the truth table of a polynomial's own values returns
        // the same polynomial: the positive-polarity form is unique.
        let mut state = 0xABCDu64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 62 & 1 == 1
        };
        for n in 2..=6usize {
            let rows = 1usize << n;
            let column: Vec<bool> = (0..rows).map(|_| next()).collect();
            let table = TruthTable::from_columns(n, vec![column]).unwrap();
            let poly = reed_muller_expand(&table, 0);
            let revalued: Vec<bool> = (0..rows)
                .map(|row| poly.evaluate(&assignment(n, row)).unwrap())
                .collect();
            let again =
                reed_muller_expand(&TruthTable::from_columns(n, vec![revalued]).unwrap(), 0);
            assert_eq!(poly, again, "n = {n}");
        }
    }
}
