//! Core circuit IR: a directed acyclic graph of AND/OR/NOT gates over
//! variable, negated-variable and constant input nodes.
//!
//! Node ids are dense, 0-based and assigned in definition order, so a node
//! may only refer to nodes with smaller ids. This makes acyclicity a
//! construction-time property and evaluation a single forward sweep.

mod netlist;

pub use netlist::{parse, serialize, ParseError, ParseErrorKind};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Identifier of a node within a [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A single circuit node.
///
/// `InputVar`, `NegInputVar` and `Const` are input nodes; `Not`, `And` and
/// `Or` are gates. A negated variable is a distinct input-node kind, not a
/// NOT gate over an input: only the standardization pass introduces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Variable x_{k+1} (indices are 0-based, display names 1-based).
    InputVar(usize),
    /// Negated variable, an input node evaluating to NOT x_{k+1}.
    NegInputVar(usize),
    /// Constant 0 or 1.
    Const(bool),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
}

impl NodeKind {
    /// True for `Not`/`And`/`Or`. Input nodes do not count toward size.
    #[inline]
    pub fn is_gate(&self) -> bool {
        matches!(
            self,
            NodeKind::Not(_) | NodeKind::And(_, _) | NodeKind::Or(_, _)
        )
    }

    /// The node's operands, in order.
    pub fn children(self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match self {
            NodeKind::Not(x) => (Some(x), None),
            NodeKind::And(x, y) | NodeKind::Or(x, y) => (Some(x), Some(y)),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// A complete Boolean assignment: bit `j` holds the value of variable
/// x_{j+1}. The textual form is a string of `0`/`1` characters, leftmost
/// character first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// The `index`-th assignment of `n` variables in lexicographic order of
    /// the textual form: index 0 is all zeros, and bit 0 (variable x1) is
    /// the most significant position.
    pub fn from_index(index: u64, n: usize) -> Self {
        assert!(n <= 63, "from_index supports at most 63 variables");
        let bits = (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect();
        Assignment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        self.bits[var]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Copy with bit `var` set to `value`.
    pub fn with_bit(&self, var: usize, value: bool) -> Self {
        let mut bits = self.bits.clone();
        bits[var] = value;
        Assignment { bits }
    }

    /// Bitmask form with variable j at bit j. Requires at most 128 variables.
    pub fn to_mask(&self) -> u128 {
        assert!(
            self.bits.len() <= 128,
            "mask form supports at most 128 variables"
        );
        self.bits
            .iter()
            .enumerate()
            .fold(0u128, |m, (j, &b)| if b { m | (1 << j) } else { m })
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Error from parsing an assignment string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid assignment character `{0}` (expected 0 or 1)")]
pub struct AssignmentParseError(char);

impl FromStr for Assignment {
    type Err = AssignmentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(AssignmentParseError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment::new)
    }
}

/// First violated structural invariant of a circuit, naming the node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidCircuit {
    #[error("node {node}: forward reference to {child}")]
    ForwardReference { node: NodeId, child: NodeId },
    #[error("node {node}: variable x{} out of range (circuit has {num_vars} inputs)", var + 1)]
    VariableOutOfRange {
        node: NodeId,
        var: usize,
        num_vars: usize,
    },
    #[error("output {output} is not a defined node")]
    OutputOutOfRange { output: NodeId },
}

/// Error from [`Circuit::eval`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("assignment has {got} bits but the circuit has {want} variables")]
    LengthMismatch { got: usize, want: usize },
    #[error("invalid circuit: {0}")]
    Invalid(#[from] InvalidCircuit),
}

/// A single-output Boolean circuit.
///
/// Immutable after construction; evaluation is pure, so circuits can be
/// shared read-only across parallel sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_vars: usize,
    nodes: Vec<NodeKind>,
    output: NodeId,
}

impl Circuit {
    /// Assemble a circuit without checking invariants; pair with
    /// [`Circuit::validate`] when the parts come from outside.
    pub fn from_parts(num_vars: usize, nodes: Vec<NodeKind>, output: NodeId) -> Self {
        Circuit {
            num_vars,
            nodes,
            output,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> NodeKind {
        self.nodes[id.index()]
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    /// Check all structural invariants, reporting the first violation.
    pub fn validate(&self) -> Result<(), InvalidCircuit> {
        for (i, node) in self.nodes.iter().enumerate() {
            let id = NodeId(i as u32);
            match *node {
                NodeKind::InputVar(var) | NodeKind::NegInputVar(var) => {
                    if var >= self.num_vars {
                        return Err(InvalidCircuit::VariableOutOfRange {
                            node: id,
                            var,
                            num_vars: self.num_vars,
                        });
                    }
                }
                NodeKind::Const(_) => {}
                _ => {
                    for child in node.children() {
                        if child.index() >= i {
                            return Err(InvalidCircuit::ForwardReference { node: id, child });
                        }
                    }
                }
            }
        }
        if self.output.index() >= self.nodes.len() {
            return Err(InvalidCircuit::OutputOutOfRange {
                output: self.output,
            });
        }
        Ok(())
    }

    /// Evaluate the circuit on a complete assignment.
    pub fn eval(&self, a: &Assignment) -> Result<bool, EvalError> {
        if a.len() != self.num_vars {
            return Err(EvalError::LengthMismatch {
                got: a.len(),
                want: self.num_vars,
            });
        }
        self.validate()?;
        Ok(self.eval_unchecked(a))
    }

    /// Forward-sweep evaluation with no validity checks. Panics on invalid
    /// circuits or mismatched assignment lengths; sweep loops validate once
    /// up front and then call this.
    pub fn eval_unchecked(&self, a: &Assignment) -> bool {
        let mut values = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            values[i] = match *node {
                NodeKind::InputVar(k) => a.get(k),
                NodeKind::NegInputVar(k) => !a.get(k),
                NodeKind::Const(b) => b,
                NodeKind::Not(x) => !values[x.index()],
                NodeKind::And(x, y) => values[x.index()] && values[y.index()],
                NodeKind::Or(x, y) => values[x.index()] || values[y.index()],
            };
        }
        values[self.output.index()]
    }

    /// Per-node reachability from the output. Children precede parents, so a
    /// single reverse sweep suffices.
    pub fn reachable(&self) -> Vec<bool> {
        let mut reach = vec![false; self.nodes.len()];
        if self.output.index() < self.nodes.len() {
            reach[self.output.index()] = true;
            for i in (0..self.nodes.len()).rev() {
                if reach[i] {
                    for child in self.nodes[i].children() {
                        if child.index() < self.nodes.len() {
                            reach[child.index()] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    /// Number of gates (AND/OR/NOT) reachable from the output. Input nodes
    /// are not gates, and dead nodes do not count.
    pub fn size(&self) -> usize {
        let reach = self.reachable();
        self.nodes
            .iter()
            .zip(&reach)
            .filter(|(node, &r)| r && node.is_gate())
            .count()
    }

    /// True iff the circuit has no NOT gates (negated inputs allowed).
    pub fn is_standard(&self) -> bool {
        !self.nodes.iter().any(|n| matches!(n, NodeKind::Not(_)))
    }

    /// True iff the circuit has neither NOT gates nor negated inputs.
    pub fn is_syntactically_monotone(&self) -> bool {
        !self
            .nodes
            .iter()
            .any(|n| matches!(n, NodeKind::Not(_) | NodeKind::NegInputVar(_)))
    }
}

/// A Boolean function of a fixed arity, evaluatable on complete assignments.
///
/// Implemented by circuits, DNFs and the clique oracle so verification
/// sweeps can compare them uniformly. Implementations may panic on malformed
/// inputs; sweeps validate their inputs before iterating.
pub trait BoolFn: Sync {
    fn num_vars(&self) -> usize;

    fn value(&self, a: &Assignment) -> bool;

    /// Size for reports: gate count for circuits, monomial count for DNFs.
    fn report_size(&self) -> Option<usize> {
        None
    }
}

impl BoolFn for Circuit {
    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn value(&self, a: &Assignment) -> bool {
        assert_eq!(a.len(), self.num_vars, "assignment length mismatch");
        self.eval_unchecked(a)
    }

    fn report_size(&self) -> Option<usize> {
        Some(self.size())
    }
}

impl<T: BoolFn + ?Sized> BoolFn for &T {
    fn num_vars(&self) -> usize {
        (**self).num_vars()
    }

    fn value(&self, a: &Assignment) -> bool {
        (**self).value(a)
    }

    fn report_size(&self) -> Option<usize> {
        (**self).report_size()
    }
}

/// Incremental circuit builder. Definition order is topological by
/// construction. Methods panic on out-of-range arguments; the builder is
/// for code that constructs circuits, not for untrusted input (that is the
/// netlist parser's job).
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    num_vars: usize,
    nodes: Vec<NodeKind>,
}

impl CircuitBuilder {
    pub fn new(num_vars: usize) -> Self {
        CircuitBuilder {
            num_vars,
            nodes: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Append a node of any kind, checking its references.
    pub fn push(&mut self, kind: NodeKind) -> NodeId {
        match kind {
            NodeKind::InputVar(var) | NodeKind::NegInputVar(var) => {
                assert!(var < self.num_vars, "variable index {var} out of range");
            }
            NodeKind::Const(_) => {}
            _ => {
                for child in kind.children() {
                    assert!(
                        child.index() < self.nodes.len(),
                        "child {child} not yet defined"
                    );
                }
            }
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(kind);
        id
    }

    pub fn input(&mut self, var: usize) -> NodeId {
        self.push(NodeKind::InputVar(var))
    }

    pub fn neg_input(&mut self, var: usize) -> NodeId {
        self.push(NodeKind::NegInputVar(var))
    }

    pub fn constant(&mut self, bit: bool) -> NodeId {
        self.push(NodeKind::Const(bit))
    }

    pub fn not(&mut self, x: NodeId) -> NodeId {
        self.push(NodeKind::Not(x))
    }

    /// Append a copy of another circuit's nodes, remapped to this builder's
    /// id space, and return the copied output. The circuits must agree on
    /// the variable count.
    pub fn append(&mut self, c: &Circuit) -> NodeId {
        assert_eq!(c.num_vars(), self.num_vars, "variable count mismatch");
        let mut remap = Vec::with_capacity(c.nodes().len());
        for &kind in c.nodes() {
            let mapped = match kind {
                NodeKind::Not(x) => NodeKind::Not(remap[x.index()]),
                NodeKind::And(x, y) => NodeKind::And(remap[x.index()], remap[y.index()]),
                NodeKind::Or(x, y) => NodeKind::Or(remap[x.index()], remap[y.index()]),
                input => input,
            };
            remap.push(self.push(mapped));
        }
        remap[c.output().index()]
    }

    pub fn and(&mut self, x: NodeId, y: NodeId) -> NodeId {
        self.push(NodeKind::And(x, y))
    }

    pub fn or(&mut self, x: NodeId, y: NodeId) -> NodeId {
        self.push(NodeKind::Or(x, y))
    }

    pub fn finish(self, output: NodeId) -> Circuit {
        assert!(
            output.index() < self.nodes.len(),
            "output {output} not defined"
        );
        Circuit {
            num_vars: self.num_vars,
            nodes: self.nodes,
            output,
        }
    }
}
