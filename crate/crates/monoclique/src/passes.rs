//! Circuit-to-circuit transforms: standardization (pushing negations down to
//! the inputs), constant folding, literal substitution, and circuit-level
//! monotonization.
//!
//! Every pass is a pure function from circuit to circuit and prunes dead
//! nodes before returning, so gate counts always describe the subgraph that
//! actually feeds the output.

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, InvalidCircuit, NodeId, NodeKind};

/// Error from a transform whose precondition was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PassError {
    #[error("invalid circuit: {0}")]
    Invalid(#[from] InvalidCircuit),
    #[error("circuit is not standard (it contains NOT gates)")]
    NotStandard,
}

/// Remove nodes unreachable from the output, renumbering survivors in their
/// original order.
pub fn prune(c: &Circuit) -> Circuit {
    let reach = c.reachable();
    let mut remap = vec![NodeId(0); c.nodes().len()];
    let mut b = CircuitBuilder::new(c.num_vars());
    for (i, &kind) in c.nodes().iter().enumerate() {
        if !reach[i] {
            continue;
        }
        let mapped = match kind {
            NodeKind::Not(x) => NodeKind::Not(remap[x.index()]),
            NodeKind::And(x, y) => NodeKind::And(remap[x.index()], remap[y.index()]),
            NodeKind::Or(x, y) => NodeKind::Or(remap[x.index()], remap[y.index()]),
            input => input,
        };
        remap[i] = b.push(mapped);
    }
    b.finish(remap[c.output().index()])
}

/// Convert to an equivalent standard circuit: no NOT gates, negations only
/// at the inputs.
///
/// Dual-rail construction: every node gets a positive and a negated rail,
/// with NOT pushed through AND/OR by De Morgan and absorbed into the rails
/// of inputs and constants. At most two gates per original gate, so the
/// result is at most double the size; rails the output never uses are
/// pruned.
pub fn standardize(c: &Circuit) -> Result<Circuit, PassError> {
    c.validate()?;
    let mut b = CircuitBuilder::new(c.num_vars());
    let mut pos = vec![NodeId(0); c.nodes().len()];
    let mut neg = vec![NodeId(0); c.nodes().len()];
    for (i, &kind) in c.nodes().iter().enumerate() {
        let (p, n) = match kind {
            NodeKind::InputVar(k) => (b.input(k), b.neg_input(k)),
            NodeKind::NegInputVar(k) => (b.neg_input(k), b.input(k)),
            NodeKind::Const(v) => (b.constant(v), b.constant(!v)),
            NodeKind::Not(x) => (neg[x.index()], pos[x.index()]),
            NodeKind::And(x, y) => (
                b.and(pos[x.index()], pos[y.index()]),
                b.or(neg[x.index()], neg[y.index()]),
            ),
            NodeKind::Or(x, y) => (
                b.or(pos[x.index()], pos[y.index()]),
                b.and(neg[x.index()], neg[y.index()]),
            ),
        };
        pos[i] = p;
        neg[i] = n;
    }
    let output = pos[c.output().index()];
    Ok(prune(&b.finish(output)))
}

#[derive(Clone, Copy)]
enum Folded {
    Const(bool),
    Node(NodeId),
}

/// Propagate constants to a fixpoint: `And(x,0) = 0`, `And(x,1) = x`,
/// `Or(x,1) = 1`, `Or(x,0) = x`, `Not(const)` flips. The result contains no
/// constant nodes at all unless the whole circuit folds to a single
/// constant. Folding is constant-driven only; contradictory subterms like
/// `And(NEG k, IN k)` are left alone.
pub fn constant_fold(c: &Circuit) -> Result<Circuit, PassError> {
    c.validate()?;
    let mut b = CircuitBuilder::new(c.num_vars());
    let mut folded: Vec<Folded> = Vec::with_capacity(c.nodes().len());
    for &kind in c.nodes() {
        let f = match kind {
            NodeKind::Const(v) => Folded::Const(v),
            NodeKind::InputVar(k) => Folded::Node(b.input(k)),
            NodeKind::NegInputVar(k) => Folded::Node(b.neg_input(k)),
            NodeKind::Not(x) => match folded[x.index()] {
                Folded::Const(v) => Folded::Const(!v),
                Folded::Node(id) => Folded::Node(b.not(id)),
            },
            NodeKind::And(x, y) => match (folded[x.index()], folded[y.index()]) {
                (Folded::Const(false), _) | (_, Folded::Const(false)) => Folded::Const(false),
                (Folded::Const(true), other) | (other, Folded::Const(true)) => other,
                (Folded::Node(a), Folded::Node(b2)) => Folded::Node(b.and(a, b2)),
            },
            NodeKind::Or(x, y) => match (folded[x.index()], folded[y.index()]) {
                (Folded::Const(true), _) | (_, Folded::Const(true)) => Folded::Const(true),
                (Folded::Const(false), other) | (other, Folded::Const(false)) => other,
                (Folded::Node(a), Folded::Node(b2)) => Folded::Node(b.or(a, b2)),
            },
        };
        folded.push(f);
    }
    Ok(match folded[c.output().index()] {
        Folded::Const(v) => {
            let mut b = CircuitBuilder::new(c.num_vars());
            let out = b.constant(v);
            b.finish(out)
        }
        Folded::Node(id) => prune(&b.finish(id)),
    })
}

/// Replace every negated-input node for `var` by constant 1 and fold.
/// Positive occurrences of the variable are untouched. Requires a standard
/// circuit.
pub fn substitute_literal(c: &Circuit, var: usize) -> Result<Circuit, PassError> {
    c.validate()?;
    if !c.is_standard() {
        return Err(PassError::NotStandard);
    }
    let nodes = c
        .nodes()
        .iter()
        .map(|&kind| match kind {
            NodeKind::NegInputVar(k) if k == var => NodeKind::Const(true),
            other => other,
        })
        .collect();
    constant_fold(&Circuit::from_parts(c.num_vars(), nodes, c.output()))
}

/// Variable indices with a negated-input occurrence, ascending.
pub fn negated_vars(c: &Circuit) -> Vec<usize> {
    let mut vars: Vec<usize> = c
        .nodes()
        .iter()
        .filter_map(|&kind| match kind {
            NodeKind::NegInputVar(k) => Some(k),
            _ => None,
        })
        .collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// Apply [`substitute_literal`] for every variable with a negated-input
/// occurrence, in ascending index order. The result is syntactically
/// monotone and never larger than the input. Whether it still computes the
/// same function is a separate, empirical question for the verification
/// harness; no equivalence is promised here.
pub fn monotonize_circuit_level(c: &Circuit) -> Result<Circuit, PassError> {
    c.validate()?;
    if !c.is_standard() {
        return Err(PassError::NotStandard);
    }
    let mut cur = c.clone();
    for var in negated_vars(c) {
        cur = substitute_literal(&cur, var)?;
    }
    Ok(cur)
}
