//! Line-oriented textual netlist format.
//!
//! ```text
//! # comment
//! inputs 2
//! n0 = IN 0
//! n1 = NEG 1
//! n2 = AND n0 n1
//! output n2
//! ```
//!
//! Ids match `n<decimal>` and must be defined before use. The canonical form
//! emitted by [`serialize`] numbers nodes densely from n0 in definition
//! order; [`parse`] accepts arbitrary `n<decimal>` names and maps them to
//! dense ids, so parse∘serialize is the identity on circuits and
//! serialize∘parse is the identity on canonically formatted text.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, NodeId, NodeKind};

/// Netlist syntax or semantic error, with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `inputs <n>` before node definitions")]
    ExpectedInputs,
    #[error("bad count `{0}`")]
    BadCount(String),
    #[error("malformed node id `{0}` (expected n<decimal>)")]
    BadNodeId(String),
    #[error("undefined id n{0}")]
    Undefined(u64),
    #[error("duplicate definition of n{0}")]
    Duplicate(u64),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("expected `<id> = <op> <operands>` or `output <id>`")]
    MalformedLine,
    #[error("wrong operand count for {0}")]
    Arity(&'static str),
    #[error("variable index {var} out of range ({num_vars} inputs declared)")]
    VarOutOfRange { var: usize, num_vars: usize },
    #[error("bad constant `{0}` (expected 0 or 1)")]
    BadConst(String),
    #[error("missing `output` line")]
    MissingOutput,
    #[error("unexpected content after `output` line")]
    AfterOutput,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_id(token: &str) -> Option<u64> {
    let digits = token.strip_prefix('n')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Parse netlist text into a circuit. The result always satisfies
/// [`Circuit::validate`]; every violation is reported as a parse error.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut nodes: Vec<NodeKind> = Vec::new();
    let mut names: HashMap<u64, NodeId> = HashMap::new();
    let mut output: Option<NodeId> = None;
    let mut last_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        last_line = lineno;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if output.is_some() {
            return Err(err(lineno, ParseErrorKind::AfterOutput));
        }

        let Some(declared_vars) = num_vars else {
            // Header line.
            if tokens[0] != "inputs" {
                return Err(err(lineno, ParseErrorKind::ExpectedInputs));
            }
            if tokens.len() != 2 {
                return Err(err(lineno, ParseErrorKind::Arity("inputs")));
            }
            let n: usize = tokens[1]
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::BadCount(tokens[1].to_string())))?;
            num_vars = Some(n);
            continue;
        };

        if tokens[0] == "output" {
            if tokens.len() != 2 {
                return Err(err(lineno, ParseErrorKind::Arity("output")));
            }
            let name = parse_id(tokens[1])
                .ok_or_else(|| err(lineno, ParseErrorKind::BadNodeId(tokens[1].to_string())))?;
            let id = *names
                .get(&name)
                .ok_or_else(|| err(lineno, ParseErrorKind::Undefined(name)))?;
            output = Some(id);
            continue;
        }

        // Node definition: <id> = <op> <operands>
        if tokens.len() < 3 || tokens[1] != "=" {
            return Err(err(lineno, ParseErrorKind::MalformedLine));
        }
        let name = parse_id(tokens[0])
            .ok_or_else(|| err(lineno, ParseErrorKind::BadNodeId(tokens[0].to_string())))?;
        if names.contains_key(&name) {
            return Err(err(lineno, ParseErrorKind::Duplicate(name)));
        }
        let operands = &tokens[3..];
        let resolve = |token: &str| -> Result<NodeId, ParseError> {
            let child = parse_id(token)
                .ok_or_else(|| err(lineno, ParseErrorKind::BadNodeId(token.to_string())))?;
            names
                .get(&child)
                .copied()
                .ok_or_else(|| err(lineno, ParseErrorKind::Undefined(child)))
        };
        let var_operand = |op: &'static str| -> Result<usize, ParseError> {
            if operands.len() != 1 {
                return Err(err(lineno, ParseErrorKind::Arity(op)));
            }
            let var: usize = operands[0]
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::BadCount(operands[0].to_string())))?;
            if var >= declared_vars {
                return Err(err(
                    lineno,
                    ParseErrorKind::VarOutOfRange {
                        var,
                        num_vars: declared_vars,
                    },
                ));
            }
            Ok(var)
        };
        let kind = match tokens[2] {
            "IN" => NodeKind::InputVar(var_operand("IN")?),
            "NEG" => NodeKind::NegInputVar(var_operand("NEG")?),
            "CONST" => {
                if operands.len() != 1 {
                    return Err(err(lineno, ParseErrorKind::Arity("CONST")));
                }
                match operands[0] {
                    "0" => NodeKind::Const(false),
                    "1" => NodeKind::Const(true),
                    other => return Err(err(lineno, ParseErrorKind::BadConst(other.to_string()))),
                }
            }
            "NOT" => {
                if operands.len() != 1 {
                    return Err(err(lineno, ParseErrorKind::Arity("NOT")));
                }
                NodeKind::Not(resolve(operands[0])?)
            }
            "AND" | "OR" => {
                if operands.len() != 2 {
                    return Err(err(
                        lineno,
                        ParseErrorKind::Arity(if tokens[2] == "AND" { "AND" } else { "OR" }),
                    ));
                }
                let a = resolve(operands[0])?;
                let b = resolve(operands[1])?;
                if tokens[2] == "AND" {
                    NodeKind::And(a, b)
                } else {
                    NodeKind::Or(a, b)
                }
            }
            other => return Err(err(lineno, ParseErrorKind::UnknownOp(other.to_string()))),
        };
        let id = NodeId(nodes.len() as u32);
        nodes.push(kind);
        names.insert(name, id);
    }

    match output {
        Some(out) => {
            let circuit = Circuit::from_parts(num_vars.unwrap_or(0), nodes, out);
            debug_assert!(circuit.validate().is_ok());
            Ok(circuit)
        }
        None => Err(err(last_line + 1, ParseErrorKind::MissingOutput)),
    }
}

fn write_node(out: &mut String, id: usize, kind: NodeKind) {
    let _ = match kind {
        NodeKind::InputVar(k) => writeln!(out, "n{id} = IN {k}"),
        NodeKind::NegInputVar(k) => writeln!(out, "n{id} = NEG {k}"),
        NodeKind::Const(b) => writeln!(out, "n{id} = CONST {}", b as u8),
        NodeKind::Not(x) => writeln!(out, "n{id} = NOT {x}"),
        NodeKind::And(x, y) => writeln!(out, "n{id} = AND {x} {y}"),
        NodeKind::Or(x, y) => writeln!(out, "n{id} = OR {x} {y}"),
    };
}

/// Canonical textual form: dense `n<k>` names in definition order.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "inputs {}", c.num_vars());
    for (id, &kind) in c.nodes().iter().enumerate() {
        write_node(&mut out, id, kind);
    }
    let _ = writeln!(out, "output {}", c.output());
    out
}

/// Displays a circuit in its canonical netlist form.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::super::CircuitBuilder;
    use super::*;

    #[test]
    fn parses_three_node_example() {
        let text = "inputs 2\nn0 = IN 0\nn1 = NEG 1\nn2 = AND n0 n1\noutput n2\n";
        let c = parse(text).unwrap();
        assert_eq!(c.num_vars(), 2);
        assert_eq!(c.nodes().len(), 3);
        assert_eq!(c.node(NodeId(2)), NodeKind::And(NodeId(0), NodeId(1)));
        assert_eq!(c.output(), NodeId(2));
    }

    #[test]
    fn undefined_operand_names_the_id() {
        let text = "inputs 2\nn0 = IN 0\nn2 = AND n0 n5\noutput n2\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, ParseErrorKind::Undefined(5));
        assert!(e.to_string().contains("n5"));
    }

    #[test]
    fn comments_blanks_and_sparse_names_are_accepted() {
        let text = "# a comment\ninputs 2\n\nn10 = IN 0   # trailing\nn20 = NEG 1\nn7 = OR n10 n20\noutput n7\n";
        let c = parse(text).unwrap();
        assert_eq!(c.nodes().len(), 3);
        assert_eq!(c.node(NodeId(2)), NodeKind::Or(NodeId(0), NodeId(1)));
    }

    #[test]
    fn rejects_duplicate_definition() {
        let text = "inputs 1\nn0 = IN 0\nn0 = IN 0\noutput n0\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Duplicate(0));
    }

    #[test]
    fn rejects_missing_output() {
        let text = "inputs 1\nn0 = IN 0\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingOutput);
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let text = "inputs 6\nn0 = IN 7\noutput n0\n";
        let e = parse(text).unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::VarOutOfRange {
                var: 7,
                num_vars: 6
            }
        ));
    }

    #[test]
    fn rejects_content_after_output() {
        let text = "inputs 1\nn0 = IN 0\noutput n0\nn1 = IN 0\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::AfterOutput);
    }

    #[test]
    fn canonical_round_trip() {
        let mut b = CircuitBuilder::new(3);
        let x = b.input(0);
        let y = b.neg_input(2);
        let c1 = b.constant(true);
        let a = b.and(x, y);
        let o = b.or(a, c1);
        let n = b.not(o);
        let c = b.finish(n);

        let text = serialize(&c);
        let reparsed = parse(&text).unwrap();
        assert_eq!(reparsed, c);
        assert_eq!(serialize(&reparsed), text);
    }
}
