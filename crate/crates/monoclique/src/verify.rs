//! Exhaustive verification: equivalence sweeps, semantic monotonicity
//! checks, the two negation-elimination theorem harnesses, randomized
//! counterexample search, and size blow-up measurement.
//!
//! Every sweep enumerates assignments in lexicographic order and reports
//! the first mismatch, so results are stable across runs and thread counts.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Assignment, BoolFn, Circuit, InvalidCircuit, NodeId, NodeKind};
use crate::clique::{
    build_monotone_dnf_circuit, build_pon_circuit, build_shannon_circuit, canonical_dnf,
    CliqueError, CliqueOracle, CliqueSpec,
};
use crate::dnf::{
    eliminate_negation_dnf, monotonize_dnf, to_dnf_with_budget, to_raw_dnf, DnfError,
    DEFAULT_BUDGET,
};
use crate::passes::{
    monotonize_circuit_level, negated_vars, standardize, substitute_literal, PassError,
};

/// Default cap on the variable count for exhaustive sweeps (about a million
/// assignments).
pub const DEFAULT_GUARD: usize = 20;

/// Hard cap the guard itself cannot exceed.
pub const MAX_GUARD: usize = 24;

/// Knobs shared by the verification harnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Maximum variable count for exhaustive sweeps.
    pub guard: usize,
    /// Monomial budget for DNF expansions.
    pub budget: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            guard: DEFAULT_GUARD,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Error from a verification harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid circuit: {0}")]
    Invalid(#[from] InvalidCircuit),
    #[error("circuit is not standard (it contains NOT gates)")]
    NotStandard,
    #[error("{n} variables exceed the exhaustive guard of {guard}")]
    GuardExceeded { n: usize, guard: usize },
    #[error("guard {guard} exceeds the hard maximum of {max}")]
    GuardTooLarge { guard: usize, max: usize },
    #[error("compared functions have {left} and {right} variables, expected {n}")]
    ArityMismatch { left: usize, right: usize, n: usize },
    #[error("variable index {var} out of range for {num_vars} variables")]
    InvalidVariable { var: usize, num_vars: usize },
    #[error("circuit has {circuit_vars} variables but CLIQUE({m},{s}) has {spec_vars} edges")]
    SpecMismatch {
        m: usize,
        s: usize,
        circuit_vars: usize,
        spec_vars: usize,
    },
    #[error("input is not a clique circuit: differs from the CLIQUE({m},{s}) oracle at {witness}")]
    NotCliqueCircuit { m: usize, s: usize, witness: String },
    #[error(transparent)]
    Dnf(#[from] DnfError),
    #[error(transparent)]
    Pass(#[from] PassError),
    #[error(transparent)]
    Clique(#[from] CliqueError),
}

/// Outcome of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    BudgetExceeded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Inequivalent => "inequivalent",
            Verdict::BudgetExceeded => "budget-exceeded",
        })
    }
}

/// Which case of the proof's split on p the witness falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofCase {
    /// p evaluates to 0 at the witness.
    PZero,
    /// p evaluates to 1 at the witness.
    POne,
}

impl fmt::Display for ProofCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofCase::PZero => "p0",
            ProofCase::POne => "p1",
        })
    }
}

/// Result of one exhaustive comparison. The witness, when present, is the
/// lexicographically first assignment on which the two functions differ,
/// re-checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub witness: Option<Assignment>,
    pub assignments_checked: u64,
    pub size_before: Option<usize>,
    pub size_after: Option<usize>,
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict={}", self.verdict)?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness={w}")?;
        }
        write!(f, "checked={}", self.assignments_checked)?;
        if let Some(s) = self.size_before {
            write!(f, "\nsize_before={s}")?;
        }
        if let Some(s) = self.size_after {
            write!(f, "\nsize_after={s}")?;
        }
        Ok(())
    }
}

/// Result of one theorem harness run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub spec: CliqueSpec,
    pub mode: Mode,
    /// Variable indices whose negated literals were replaced.
    pub vars: Vec<usize>,
    pub verdict: Verdict,
    pub witness: Option<Assignment>,
    pub assignments_checked: u64,
    /// Gate count of the input circuit.
    pub size_before: usize,
    /// Gate count after circuit-level replacement.
    pub size_after: Option<usize>,
    /// Monomial count of the input's DNF, when one was computed.
    pub dnf_monomials_before: Option<usize>,
    /// Monomial count after DNF-level replacement.
    pub dnf_monomials_after: Option<usize>,
    /// Value of the factored part p at the witness: p=1 or p=0.
    pub case: Option<ProofCase>,
    /// Whether a contradictory monomial containing the replaced negated
    /// literal drives p to 1 at the witness, before any simplification.
    pub contradictory_monomial: Option<bool>,
    /// Whether the replacement avoided a size increase, in the measure of
    /// the representation used.
    pub size_not_increased: Option<bool>,
    /// Search replay bookkeeping: master seed and trial index.
    pub seed: Option<u64>,
    pub trial: Option<u64>,
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict={}", self.verdict)?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness={w}")?;
        }
        write!(f, "checked={}", self.assignments_checked)?;
        write!(f, "\nsize_before={}", self.size_before)?;
        if let Some(s) = self.size_after {
            write!(f, "\nsize_after={s}")?;
        }
        if let Some(k) = self.dnf_monomials_before {
            write!(f, "\ndnf_monomials_before={k}")?;
        }
        if let Some(k) = self.dnf_monomials_after {
            write!(f, "\ndnf_monomials_after={k}")?;
        }
        if let Some(c) = self.case {
            write!(f, "\ncase={c}")?;
        }
        if let Some(s) = self.seed {
            write!(f, "\nseed={s}")?;
        }
        if !self.vars.is_empty() {
            let vars = self
                .vars
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(f, "\nvar={vars}")?;
        }
        if let Some(c) = self.contradictory_monomial {
            write!(
                f,
                "\ncontradictory_monomial={}",
                if c { "present" } else { "absent" }
            )?;
        }
        if let Some(s) = self.size_not_increased {
            write!(f, "\nsize_not_increased={s}")?;
        }
        if let Some(t) = self.trial {
            write!(f, "\ntrial={t}")?;
        }
        Ok(())
    }
}

/// Replacement granularity for the theorem harnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Replace negated-input nodes in the circuit and fold.
    Circuit,
    /// Expand to a DNF first, then drop negated literals there.
    Dnf,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Circuit => "circuit",
            Mode::Dnf => "dnf",
        })
    }
}

fn check_guard(n: usize, guard: usize) -> Result<(), VerifyError> {
    if guard > MAX_GUARD {
        return Err(VerifyError::GuardTooLarge {
            guard,
            max: MAX_GUARD,
        });
    }
    if n > guard {
        return Err(VerifyError::GuardExceeded { n, guard });
    }
    Ok(())
}

/// Compare two functions on all 2^n assignments in lexicographic order.
/// The first mismatch becomes the witness; `assignments_checked` counts the
/// assignments actually looked at (all of them when equivalent).
pub fn equiv_exhaustive<F, G>(
    f: &F,
    g: &G,
    n: usize,
    guard: usize,
) -> Result<EquivalenceReport, VerifyError>
where
    F: BoolFn + ?Sized,
    G: BoolFn + ?Sized,
{
    if f.num_vars() != n || g.num_vars() != n {
        return Err(VerifyError::ArityMismatch {
            left: f.num_vars(),
            right: g.num_vars(),
            n,
        });
    }
    check_guard(n, guard)?;
    let total = 1u64 << n;
    let mismatch = (0..total).into_par_iter().find_first(|&i| {
        let a = Assignment::from_index(i, n);
        f.value(&a) != g.value(&a)
    });
    let (verdict, witness, checked) = match mismatch {
        Some(i) => (
            Verdict::Inequivalent,
            Some(Assignment::from_index(i, n)),
            i + 1,
        ),
        None => (Verdict::Equivalent, None, total),
    };
    if let Some(w) = &witness {
        assert_ne!(f.value(w), g.value(w), "witness does not distinguish");
    }
    Ok(EquivalenceReport {
        verdict,
        witness,
        assignments_checked: checked,
        size_before: f.report_size(),
        size_after: g.report_size(),
    })
}

/// A pair of assignments with `low <= high` bitwise but `f(low) > f(high)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub low: Assignment,
    pub high: Assignment,
}

/// Check `f(a) <= f(a')` for every assignment and every single 0 to 1 bit
/// flip, which suffices by transitivity. Returns the first violating pair
/// in lexicographic (assignment, flipped bit) order, or `None` when the
/// function is monotone.
pub fn is_monotone_semantic<F>(
    f: &F,
    n: usize,
    guard: usize,
) -> Result<Option<MonotoneViolation>, VerifyError>
where
    F: BoolFn + ?Sized,
{
    if f.num_vars() != n {
        return Err(VerifyError::ArityMismatch {
            left: f.num_vars(),
            right: f.num_vars(),
            n,
        });
    }
    check_guard(n, guard)?;
    if n == 0 {
        return Ok(None);
    }
    let total = (1u64 << n) * n as u64;
    let hit = (0..total).into_par_iter().find_first(|&i| {
        let a = Assignment::from_index(i / n as u64, n);
        let j = (i % n as u64) as usize;
        !a.get(j) && f.value(&a) && !f.value(&a.with_bit(j, true))
    });
    Ok(hit.map(|i| {
        let low = Assignment::from_index(i / n as u64, n);
        let j = (i % n as u64) as usize;
        MonotoneViolation {
            high: low.with_bit(j, true),
            low,
        }
    }))
}

fn validate_clique_input(
    c: &Circuit,
    spec: CliqueSpec,
    cfg: VerifyConfig,
) -> Result<CliqueOracle, VerifyError> {
    c.validate()?;
    if !c.is_standard() {
        return Err(VerifyError::NotStandard);
    }
    if c.num_vars() != spec.num_vars() {
        return Err(VerifyError::SpecMismatch {
            m: spec.m(),
            s: spec.s(),
            circuit_vars: c.num_vars(),
            spec_vars: spec.num_vars(),
        });
    }
    let oracle = CliqueOracle::new(spec);
    let pre = equiv_exhaustive(c, &oracle, c.num_vars(), cfg.guard)?;
    if let Some(w) = pre.witness {
        return Err(VerifyError::NotCliqueCircuit {
            m: spec.m(),
            s: spec.s(),
            witness: w.to_string(),
        });
    }
    Ok(oracle)
}

// Diagnosis for a replacement failure at `witness`: factor the expansion of
// the ORIGINAL circuit, taken before contradiction elimination, on `var`,
// and evaluate the factored part p there. Budget exhaustion leaves the
// diagnosis empty rather than failing the harness.
fn classify_witness(
    c: &Circuit,
    var: usize,
    witness: &Assignment,
    budget: usize,
) -> (Option<ProofCase>, Option<bool>) {
    let raw = match to_raw_dnf(c, budget) {
        Ok(raw) => raw,
        Err(_) => return (None, None),
    };
    let mask = witness.to_mask();
    let mut p_value = false;
    let mut contradictory = false;
    for m in raw.monomials() {
        if !m.contains_neg(var) || !m.without_neg(var).eval_mask(mask) {
            continue;
        }
        p_value = true;
        if m.is_contradictory() {
            contradictory = true;
        }
    }
    let case = if p_value {
        ProofCase::POne
    } else {
        ProofCase::PZero
    };
    (Some(case), Some(contradictory))
}

/// Test single-variable negation elimination on a circuit that computes
/// CLIQUE(m,s): replace `~var` by constant 1 at the chosen level and
/// compare the result with the oracle on every assignment. Inputs that do
/// not compute the clique function are refused. On failure the witness is
/// classified by the value of the factored part p of the original
/// expansion, taken before contradiction elimination.
pub fn check_theorem1(
    c: &Circuit,
    spec: CliqueSpec,
    var: usize,
    mode: Mode,
    cfg: VerifyConfig,
) -> Result<TheoremReport, VerifyError> {
    if var >= spec.num_vars() {
        return Err(VerifyError::InvalidVariable {
            var,
            num_vars: spec.num_vars(),
        });
    }
    let oracle = validate_clique_input(c, spec, cfg)?;
    let n = c.num_vars();
    let mut report = TheoremReport {
        spec,
        mode,
        vars: vec![var],
        verdict: Verdict::Equivalent,
        witness: None,
        assignments_checked: 0,
        size_before: c.size(),
        size_after: None,
        dnf_monomials_before: None,
        dnf_monomials_after: None,
        case: None,
        contradictory_monomial: None,
        size_not_increased: None,
        seed: None,
        trial: None,
    };
    let cmp = match mode {
        Mode::Circuit => {
            let sub = substitute_literal(c, var)?;
            report.size_after = Some(sub.size());
            equiv_exhaustive(&sub, &oracle, n, cfg.guard)?
        }
        Mode::Dnf => {
            let d = match to_dnf_with_budget(c, cfg.budget) {
                Ok(d) => d,
                Err(DnfError::BudgetExceeded { .. }) => {
                    report.verdict = Verdict::BudgetExceeded;
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            let e = eliminate_negation_dnf(&d, var);
            report.dnf_monomials_before = Some(d.len());
            report.dnf_monomials_after = Some(e.len());
            equiv_exhaustive(&e, &oracle, n, cfg.guard)?
        }
    };
    report.verdict = cmp.verdict;
    report.assignments_checked = cmp.assignments_checked;
    if let Some(w) = cmp.witness {
        let (case, contradictory) = classify_witness(c, var, &w, cfg.budget);
        report.case = case;
        report.contradictory_monomial = contradictory;
        report.witness = Some(w);
    }
    Ok(report)
}

/// Test full monotonization of a circuit that computes CLIQUE(m,s):
/// replace every negated literal by constant 1 at the chosen level,
/// compare with the oracle exhaustively, and record whether the
/// replacement avoided a size increase in the representation used.
pub fn check_theorem2(
    c: &Circuit,
    spec: CliqueSpec,
    mode: Mode,
    cfg: VerifyConfig,
) -> Result<TheoremReport, VerifyError> {
    let oracle = validate_clique_input(c, spec, cfg)?;
    let n = c.num_vars();
    let mut report = TheoremReport {
        spec,
        mode,
        vars: negated_vars(c),
        verdict: Verdict::Equivalent,
        witness: None,
        assignments_checked: 0,
        size_before: c.size(),
        size_after: None,
        dnf_monomials_before: None,
        dnf_monomials_after: None,
        case: None,
        contradictory_monomial: None,
        size_not_increased: None,
        seed: None,
        trial: None,
    };
    let cmp = match mode {
        Mode::Circuit => {
            let mono = monotonize_circuit_level(c)?;
            report.size_after = Some(mono.size());
            report.size_not_increased = Some(mono.size() <= c.size());
            equiv_exhaustive(&mono, &oracle, n, cfg.guard)?
        }
        Mode::Dnf => {
            let d = match to_dnf_with_budget(c, cfg.budget) {
                Ok(d) => d,
                Err(DnfError::BudgetExceeded { .. }) => {
                    report.verdict = Verdict::BudgetExceeded;
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            let mono = monotonize_dnf(&d);
            report.dnf_monomials_before = Some(d.len());
            report.dnf_monomials_after = Some(mono.len());
            report.size_not_increased = Some(mono.len() <= d.len());
            equiv_exhaustive(&mono, &oracle, n, cfg.guard)?
        }
    };
    report.verdict = cmp.verdict;
    report.assignments_checked = cmp.assignments_checked;
    report.witness = cmp.witness;
    Ok(report)
}

// A reference to one use of a node: a child slot of a later node, or the
// circuit's output pointer.
#[derive(Clone, Copy)]
enum Consumer {
    Child { node: usize, slot: u8 },
    Output,
}

fn consumers_of(c: &Circuit, t: usize) -> Vec<Consumer> {
    let target = NodeId(t as u32);
    let mut found = Vec::new();
    for (i, kind) in c.nodes().iter().enumerate() {
        match *kind {
            NodeKind::Not(x) => {
                if x == target {
                    found.push(Consumer::Child { node: i, slot: 0 });
                }
            }
            NodeKind::And(x, y) | NodeKind::Or(x, y) => {
                if x == target {
                    found.push(Consumer::Child { node: i, slot: 0 });
                }
                if y == target {
                    found.push(Consumer::Child { node: i, slot: 1 });
                }
            }
            _ => {}
        }
    }
    if c.output() == target {
        found.push(Consumer::Output);
    }
    found
}

fn set_child(kind: &mut NodeKind, slot: u8, new: NodeId) {
    match kind {
        NodeKind::Not(x) => *x = new,
        NodeKind::And(x, y) | NodeKind::Or(x, y) => {
            if slot == 0 {
                *x = new;
            } else {
                *y = new;
            }
        }
        _ => unreachable!("inputs have no children"),
    }
}

// Rebuild `c` with `inserted` spliced in directly after node `t` (their
// children may reference ids up to t plus earlier inserted nodes), then
// redirect one use of `t` to the last inserted node.
fn splice_after(c: &Circuit, t: usize, inserted: &[NodeKind], redirect: Consumer) -> Circuit {
    let shift = inserted.len() as u32;
    let bump = |id: NodeId| {
        if id.index() > t {
            NodeId(id.0 + shift)
        } else {
            id
        }
    };
    let mut nodes = Vec::with_capacity(c.nodes().len() + inserted.len());
    for (i, &kind) in c.nodes().iter().enumerate() {
        let mapped = match kind {
            NodeKind::Not(x) => NodeKind::Not(bump(x)),
            NodeKind::And(x, y) => NodeKind::And(bump(x), bump(y)),
            NodeKind::Or(x, y) => NodeKind::Or(bump(x), bump(y)),
            input => input,
        };
        nodes.push(mapped);
        if i == t {
            nodes.extend_from_slice(inserted);
        }
    }
    let replacement = NodeId((t + inserted.len()) as u32);
    let mut output = bump(c.output());
    match redirect {
        Consumer::Child { node, slot } => {
            let node = if node > t {
                node + inserted.len()
            } else {
                node
            };
            set_child(&mut nodes[node], slot, replacement);
        }
        Consumer::Output => output = replacement,
    }
    let rewritten = Circuit::from_parts(c.num_vars(), nodes, output);
    debug_assert_eq!(rewritten.validate(), Ok(()));
    rewritten
}

fn pick_consumer(rng: &mut ChaCha8Rng, c: &Circuit, t: usize) -> Option<Consumer> {
    let cons = consumers_of(c, t);
    if cons.is_empty() {
        None
    } else {
        Some(cons[rng.gen_range(0..cons.len())])
    }
}

// t becomes Not(Not(t)) for one consumer, then the whole circuit is
// re-standardized to push the fresh NOT pair back out.
fn double_negation_rewrite(rng: &mut ChaCha8Rng, c: &Circuit) -> Result<Circuit, VerifyError> {
    let t = rng.gen_range(0..c.nodes().len());
    let Some(redirect) = pick_consumer(rng, c, t) else {
        return Ok(c.clone());
    };
    let inserted = [
        NodeKind::Not(NodeId(t as u32)),
        NodeKind::Not(NodeId((t + 1) as u32)),
    ];
    Ok(standardize(&splice_after(c, t, &inserted, redirect))?)
}

// t becomes (t AND y) OR (t AND ~y) for one consumer and a random variable
// y, introducing a genuine negated input while preserving the function.
fn expansion_rewrite(rng: &mut ChaCha8Rng, c: &Circuit) -> Circuit {
    if c.num_vars() == 0 {
        return c.clone();
    }
    let t = rng.gen_range(0..c.nodes().len());
    let y = rng.gen_range(0..c.num_vars());
    let Some(redirect) = pick_consumer(rng, c, t) else {
        return c.clone();
    };
    let id = |k: usize| NodeId(k as u32);
    let inserted = [
        NodeKind::InputVar(y),
        NodeKind::NegInputVar(y),
        NodeKind::And(id(t), id(t + 1)),
        NodeKind::And(id(t), id(t + 2)),
        NodeKind::Or(id(t + 3), id(t + 4)),
    ];
    splice_after(c, t, &inserted, redirect)
}

fn operand_swap_rewrite(rng: &mut ChaCha8Rng, c: &Circuit) -> Circuit {
    let gates: Vec<usize> = c
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, k)| matches!(k, NodeKind::And(..) | NodeKind::Or(..)))
        .map(|(i, _)| i)
        .collect();
    if gates.is_empty() {
        return c.clone();
    }
    let g = gates[rng.gen_range(0..gates.len())];
    let mut nodes = c.nodes().to_vec();
    nodes[g] = match nodes[g] {
        NodeKind::And(x, y) => NodeKind::And(y, x),
        NodeKind::Or(x, y) => NodeKind::Or(y, x),
        _ => unreachable!(),
    };
    Circuit::from_parts(c.num_vars(), nodes, c.output())
}

// OR the constantly-false term (~v AND v) onto the output, reproducing the
// adversarial pattern for a random variable.
fn contradictory_term_rewrite(rng: &mut ChaCha8Rng, c: &Circuit) -> Circuit {
    if c.num_vars() == 0 {
        return c.clone();
    }
    let v = rng.gen_range(0..c.num_vars());
    let mut nodes = c.nodes().to_vec();
    let base = nodes.len() as u32;
    nodes.push(NodeKind::NegInputVar(v));
    nodes.push(NodeKind::InputVar(v));
    nodes.push(NodeKind::And(NodeId(base), NodeId(base + 1)));
    nodes.push(NodeKind::Or(NodeId(base + 2), c.output()));
    Circuit::from_parts(c.num_vars(), nodes, NodeId(base + 3))
}

fn apply_random_rewrite(rng: &mut ChaCha8Rng, c: &Circuit) -> Result<Circuit, VerifyError> {
    match rng.gen_range(0..4u32) {
        0 => double_negation_rewrite(rng, c),
        1 => Ok(expansion_rewrite(rng, c)),
        2 => Ok(operand_swap_rewrite(rng, c)),
        _ => Ok(contradictory_term_rewrite(rng, c)),
    }
}

fn base_circuit(rng: &mut ChaCha8Rng, spec: CliqueSpec) -> Result<Circuit, VerifyError> {
    let n = spec.num_vars();
    let mut kinds: Vec<u32> = vec![0];
    if n >= 1 {
        kinds.push(1);
        kinds.push(3);
    }
    if n >= 2 {
        kinds.push(2);
    }
    let kind = kinds[rng.gen_range(0..kinds.len())];
    Ok(match kind {
        0 => build_monotone_dnf_circuit(spec),
        1 => build_shannon_circuit(spec, &[0])?,
        2 => build_shannon_circuit(spec, &[0, 1])?,
        _ => build_pon_circuit(spec),
    })
}

/// Probe single-variable negation elimination across randomly rewritten
/// clique circuits. Each trial derives a circuit from a generator output by
/// `rewrite_depth` random semantics-preserving rewrites (double-negation
/// insertion with re-standardization, `(x AND y) OR (x AND ~y)` expansion,
/// operand swaps, and OR-ing in a contradictory term), re-verifies oracle
/// equivalence, then runs the circuit-level theorem check on every negated
/// variable. Returns the failures, each carrying the master seed and trial
/// index for replay; an empty list means no trial produced one.
pub fn search_counterexample(
    spec: CliqueSpec,
    rewrite_depth: usize,
    trials: u64,
    seed: u64,
    cfg: VerifyConfig,
) -> Result<Vec<TheoremReport>, VerifyError> {
    let n = spec.num_vars();
    check_guard(n, cfg.guard)?;
    let oracle = CliqueOracle::new(spec);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let mut c = base_circuit(&mut rng, spec)?;
        for _ in 0..rewrite_depth {
            c = apply_random_rewrite(&mut rng, &c)?;
        }
        let pre = equiv_exhaustive(&c, &oracle, n, cfg.guard)?;
        assert_eq!(
            pre.verdict,
            Verdict::Equivalent,
            "rewrite changed the function (trial {trial})"
        );
        for var in negated_vars(&c) {
            let mut rep = check_theorem1(&c, spec, var, Mode::Circuit, cfg)?;
            if rep.verdict == Verdict::Inequivalent {
                rep.seed = Some(seed);
                rep.trial = Some(trial);
                failures.push(rep);
            }
        }
    }
    Ok(failures)
}

/// One measurement line of the blow-up table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupRow {
    pub m: usize,
    pub s: usize,
    /// Number of Shannon pivots (the first `pivots` edge variables).
    pub pivots: usize,
    /// Gate count of the Shannon circuit.
    pub gates: usize,
    /// Monomial count of its DNF; `None` when the budget was exceeded.
    pub dnf_monomials: Option<usize>,
    /// Monomial count after DNF-level monotonization.
    pub monotone_monomials: Option<usize>,
    /// Size of the canonical positive monomial set, C(m,s).
    pub canonical_count: usize,
}

/// Measure, for each m in the range and each pivot count, how the Shannon
/// circuit's gate count and monomial counts relate to the canonical C(m,s)
/// monomial set. Budget-exceeded expansions produce marked rows rather
/// than dropping the measurement.
pub fn blowup_report(
    m_range: std::ops::RangeInclusive<usize>,
    s: usize,
    pivot_counts: &[usize],
    budget: usize,
) -> Result<Vec<BlowupRow>, VerifyError> {
    let mut rows = Vec::new();
    for m in m_range {
        let spec = CliqueSpec::new(m, s)?;
        let canonical_count = canonical_dnf(spec).len();
        for &k in pivot_counts {
            let pivots: Vec<usize> = (0..k).collect();
            let c = build_shannon_circuit(spec, &pivots)?;
            let (dnf_monomials, monotone_monomials) = match to_dnf_with_budget(&c, budget) {
                Ok(d) => {
                    let mono = monotonize_dnf(&d);
                    (Some(d.len()), Some(mono.len()))
                }
                Err(DnfError::BudgetExceeded { .. }) => (None, None),
                Err(e) => return Err(e.into()),
            };
            rows.push(BlowupRow {
                m,
                s,
                pivots: k,
                gates: c.size(),
                dnf_monomials,
                monotone_monomials,
                canonical_count,
            });
        }
    }
    Ok(rows)
}

/// Comma-separated table with one header line; budget-exceeded counts
/// render as `budget_exceeded`.
pub fn render_blowup_csv(rows: &[BlowupRow]) -> String {
    let mut out =
        String::from("m,s,pivots,gates,dnf_monomials,monotone_monomials,canonical_count\n");
    for r in rows {
        let cell =
            |v: Option<usize>| v.map_or_else(|| "budget_exceeded".to_string(), |k| k.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m,
            r.s,
            r.pivots,
            r.gates,
            cell(r.dnf_monomials),
            cell(r.monotone_monomials),
            r.canonical_count
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn spec(m: usize, s: usize) -> CliqueSpec {
        CliqueSpec::new(m, s).unwrap()
    }

    #[test]
    fn equivalent_functions_check_every_assignment() {
        let oracle = CliqueOracle::new(spec(4, 3));
        let rep = equiv_exhaustive(&oracle, &oracle, 6, DEFAULT_GUARD).unwrap();
        assert_eq!(rep.verdict, Verdict::Equivalent);
        assert_eq!(rep.assignments_checked, 64);
        assert_eq!(rep.witness, None);
    }

    #[test]
    fn first_mismatch_becomes_the_witness() {
        // Or(x1, M) differs from CLIQUE(4,3) first at 100000.
        let monotone = crate::clique::build_monotone_dnf_circuit(spec(4, 3));
        let mut b = CircuitBuilder::new(6);
        let x = b.input(0);
        let m = b.append(&monotone);
        let o = b.or(x, m);
        let c = b.finish(o);
        let oracle = CliqueOracle::new(spec(4, 3));
        let rep = equiv_exhaustive(&c, &oracle, 6, DEFAULT_GUARD).unwrap();
        assert_eq!(rep.verdict, Verdict::Inequivalent);
        assert_eq!(rep.witness.unwrap().to_string(), "100000");
        assert_eq!(rep.assignments_checked, 33);
    }

    #[test]
    fn zero_variable_functions_compare_on_the_empty_assignment() {
        let mut b = CircuitBuilder::new(0);
        let f = b.constant(false);
        let zero = b.finish(f);
        let mut b = CircuitBuilder::new(0);
        let t = b.constant(true);
        let one = b.finish(t);
        let rep = equiv_exhaustive(&zero, &one, 0, DEFAULT_GUARD).unwrap();
        assert_eq!(rep.verdict, Verdict::Inequivalent);
        assert_eq!(rep.witness.unwrap().to_string(), "");
        assert_eq!(rep.assignments_checked, 1);
    }

    #[test]
    fn guard_limits_are_enforced() {
        let oracle = CliqueOracle::new(spec(7, 3));
        assert_eq!(
            equiv_exhaustive(&oracle, &oracle, 21, 20),
            Err(VerifyError::GuardExceeded { n: 21, guard: 20 })
        );
        assert_eq!(
            equiv_exhaustive(&oracle, &oracle, 21, 25),
            Err(VerifyError::GuardTooLarge { guard: 25, max: 24 })
        );
    }

    #[test]
    fn oracle_is_semantically_monotone() {
        let oracle = CliqueOracle::new(spec(4, 3));
        assert_eq!(is_monotone_semantic(&oracle, 6, DEFAULT_GUARD), Ok(None));
    }

    #[test]
    fn negated_literal_is_not_monotone() {
        let mut b = CircuitBuilder::new(1);
        let nx = b.neg_input(0);
        let c = b.finish(nx);
        let v = is_monotone_semantic(&c, 1, DEFAULT_GUARD).unwrap().unwrap();
        assert_eq!(v.low.to_string(), "0");
        assert_eq!(v.high.to_string(), "1");
    }

    #[test]
    fn xor_is_not_monotone() {
        let mut b = CircuitBuilder::new(2);
        let x = b.input(0);
        let ny = b.neg_input(1);
        let l = b.and(x, ny);
        let nx = b.neg_input(0);
        let y = b.input(1);
        let r = b.and(nx, y);
        let o = b.or(l, r);
        let c = b.finish(o);
        assert!(is_monotone_semantic(&c, 2, DEFAULT_GUARD)
            .unwrap()
            .is_some());
    }

    #[test]
    fn theorem1_flags_the_pon_circuit_at_circuit_level() {
        let sp = spec(4, 3);
        let pon = build_pon_circuit(sp);
        let rep = check_theorem1(&pon, sp, 0, Mode::Circuit, VerifyConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inequivalent);
        assert_eq!(rep.witness.as_ref().unwrap().to_string(), "100000");
        assert_eq!(rep.assignments_checked, 33);
        assert_eq!(rep.case, Some(ProofCase::POne));
        assert_eq!(rep.contradictory_monomial, Some(true));
    }

    #[test]
    fn theorem1_passes_the_pon_circuit_at_dnf_level() {
        let sp = spec(4, 3);
        let pon = build_pon_circuit(sp);
        let rep = check_theorem1(&pon, sp, 0, Mode::Dnf, VerifyConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Equivalent);
        assert_eq!(rep.dnf_monomials_before, Some(4));
        assert_eq!(rep.dnf_monomials_after, Some(4));
    }

    #[test]
    fn theorem1_passes_shannon_circuits_in_both_modes() {
        let sp = spec(4, 3);
        let c = build_shannon_circuit(sp, &[0]).unwrap();
        for mode in [Mode::Circuit, Mode::Dnf] {
            let rep = check_theorem1(&c, sp, 0, mode, VerifyConfig::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::Equivalent, "{mode}");
        }
    }

    #[test]
    fn theorem_harnesses_refuse_non_clique_inputs() {
        let mut b = CircuitBuilder::new(6);
        let f = b.constant(false);
        let c = b.finish(f);
        let err =
            check_theorem1(&c, spec(4, 3), 0, Mode::Circuit, VerifyConfig::default()).unwrap_err();
        match err {
            VerifyError::NotCliqueCircuit { witness, .. } => {
                // first graph with a triangle: {1,2,3} via the last three edges
                assert_eq!(witness, "000111");
            }
            other => panic!("expected a clique-circuit refusal, got {other:?}"),
        }
    }

    #[test]
    fn theorem1_rejects_out_of_range_variables() {
        let sp = spec(4, 3);
        let pon = build_pon_circuit(sp);
        assert_eq!(
            check_theorem1(&pon, sp, 6, Mode::Circuit, VerifyConfig::default()),
            Err(VerifyError::InvalidVariable {
                var: 6,
                num_vars: 6
            })
        );
    }

    #[test]
    fn theorem2_holds_for_shannon_circuits_at_circuit_level() {
        let sp = spec(4, 3);
        let c = build_shannon_circuit(sp, &[0, 1]).unwrap();
        let rep = check_theorem2(&c, sp, Mode::Circuit, VerifyConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Equivalent);
        assert_eq!(rep.size_not_increased, Some(true));
        assert_eq!(rep.vars, vec![0, 1]);
    }

    #[test]
    fn theorem2_fails_for_the_pon_circuit_at_circuit_level() {
        let sp = spec(4, 3);
        let pon = build_pon_circuit(sp);
        let rep = check_theorem2(&pon, sp, Mode::Circuit, VerifyConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Inequivalent);
        assert_eq!(rep.witness.unwrap().to_string(), "100000");
    }

    #[test]
    fn theorem2_holds_at_dnf_level_for_every_generator() {
        let sp = spec(4, 3);
        let circuits = [
            build_monotone_dnf_circuit(sp),
            build_shannon_circuit(sp, &[0]).unwrap(),
            build_shannon_circuit(sp, &[0, 1]).unwrap(),
            build_pon_circuit(sp),
        ];
        for c in &circuits {
            let rep = check_theorem2(c, sp, Mode::Dnf, VerifyConfig::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::Equivalent);
            assert_eq!(rep.dnf_monomials_after, Some(4));
        }
    }

    #[test]
    fn rewrites_preserve_the_function() {
        let sp = spec(4, 3);
        let oracle = CliqueOracle::new(sp);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut c = build_shannon_circuit(sp, &[0]).unwrap();
        for step in 0..12 {
            c = apply_random_rewrite(&mut rng, &c).unwrap();
            assert!(c.is_standard(), "step {step} left a NOT gate");
            let rep = equiv_exhaustive(&c, &oracle, 6, DEFAULT_GUARD).unwrap();
            assert_eq!(rep.verdict, Verdict::Equivalent, "step {step}");
        }
    }

    #[test]
    fn search_finds_the_adversarial_pattern() {
        let sp = spec(4, 3);
        let failures = search_counterexample(sp, 2, 40, 7, VerifyConfig::default()).unwrap();
        assert!(!failures.is_empty());
        for f in &failures {
            assert_eq!(f.verdict, Verdict::Inequivalent);
            assert_eq!(f.seed, Some(7));
            assert!(f.trial.is_some());
            let w = f.witness.as_ref().unwrap();
            // failures are one-sided: the replaced variable is 1 at the witness
            assert!(w.get(f.vars[0]));
        }
    }

    #[test]
    fn search_is_deterministic() {
        let sp = spec(4, 3);
        let a = search_counterexample(sp, 3, 25, 99, VerifyConfig::default()).unwrap();
        let b = search_counterexample(sp, 3, 25, 99, VerifyConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn blowup_rows_carry_the_canonical_counts() {
        let rows = blowup_report(4..=8, 3, &[0], DEFAULT_BUDGET).unwrap();
        let counts: Vec<usize> = rows.iter().map(|r| r.canonical_count).collect();
        assert_eq!(counts, vec![4, 10, 20, 35, 56]);
        for r in &rows {
            assert_eq!(r.dnf_monomials, Some(r.canonical_count));
            assert_eq!(r.monotone_monomials, Some(r.canonical_count));
        }
    }

    #[test]
    fn blowup_csv_has_the_fixed_header() {
        let rows = blowup_report(4..=4, 3, &[0, 1], DEFAULT_BUDGET).unwrap();
        let csv = render_blowup_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "m,s,pivots,gates,dnf_monomials,monotone_monomials,canonical_count"
        );
        assert_eq!(lines.next().unwrap(), "4,3,0,11,4,4,4");
        // one pivot: leaves of 2 and 4 monomials (5 and 9 gates) plus the
        // three expansion gates; the expansion has 6 monomials, two per
        // x1-triangle, and monotonization recovers the canonical 4
        assert_eq!(lines.next().unwrap(), "4,3,1,17,6,4,4");
    }

    #[test]
    fn report_rendering_is_line_oriented_key_value() {
        let sp = spec(4, 3);
        let pon = build_pon_circuit(sp);
        let rep = check_theorem1(&pon, sp, 0, Mode::Circuit, VerifyConfig::default()).unwrap();
        let text = rep.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec![
                "verdict=inequivalent",
                "witness=100000",
                "checked=33",
                "size_before=13",
                "size_after=12",
                "case=p1",
                "var=0",
                "contradictory_monomial=present",
            ]
        );
    }
}
