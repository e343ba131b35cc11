//! The CLIQUE(m,s) function: edge-variable indexing, a brute-force oracle,
//! and generators for circuits that compute it.
//!
//! Three circuit families cover the shapes the verification harness needs:
//! the canonical monotone DNF circuit, Shannon-expansion circuits that
//! compute the same function while genuinely using negated inputs, and the
//! adversarial circuit that ORs in the contradictory term `~x1 AND x1`.

use itertools::Itertools;
use thiserror::Error;

use crate::circuit::{Assignment, BoolFn, Circuit, CircuitBuilder, NodeId};
use crate::dnf::{Dnf, Monomial};

/// Vertex-count cap so every edge set fits in a 128-bit mask.
pub const MAX_VERTICES: usize = 16;

/// Error from clique-function construction or evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliqueError {
    #[error("clique size {s} is not in 1..={m}")]
    InvalidSpec { m: usize, s: usize },
    #[error("{m} vertices exceed the supported maximum of {max}")]
    TooManyVertices { m: usize, max: usize },
    #[error("assignment has {got} bits, the edge set has {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("pivot {var} is not a valid edge variable (edge count {num_vars})")]
    InvalidPivot { var: usize, num_vars: usize },
    #[error("pivot {var} appears twice")]
    DuplicatePivot { var: usize },
}

/// The pair (m, s): does an m-vertex graph contain an s-clique?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliqueSpec {
    m: usize,
    s: usize,
}

impl CliqueSpec {
    pub fn new(m: usize, s: usize) -> Result<CliqueSpec, CliqueError> {
        if m > MAX_VERTICES {
            return Err(CliqueError::TooManyVertices {
                m,
                max: MAX_VERTICES,
            });
        }
        if s < 1 || s > m {
            return Err(CliqueError::InvalidSpec { m, s });
        }
        Ok(CliqueSpec { m, s })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of edge variables, C(m,2).
    pub fn num_vars(&self) -> usize {
        self.m * (self.m - 1) / 2
    }
}

/// Bijection between edge variables and vertex pairs (u,v), u < v, in
/// lexicographic order: (0,1), (0,2), ..., (0,m-1), (1,2), ...
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIndexing {
    m: usize,
}

impl EdgeIndexing {
    pub fn new(m: usize) -> EdgeIndexing {
        assert!(m <= MAX_VERTICES, "vertex count {m} out of range");
        EdgeIndexing { m }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of edge variables, C(m,2).
    pub fn num_vars(&self) -> usize {
        self.m * (self.m - 1) / 2
    }

    /// Variable index of the edge (u,v). Requires u < v < m.
    pub fn index(&self, u: usize, v: usize) -> usize {
        assert!(u < v && v < self.m, "({u},{v}) is not an edge");
        u * (2 * self.m - u - 1) / 2 + (v - u - 1)
    }

    /// Edge (u,v) of a variable index. Requires j < C(m,2).
    pub fn edge(&self, j: usize) -> (usize, usize) {
        assert!(j < self.num_vars(), "edge variable {j} out of range");
        let mut j = j;
        let mut u = 0;
        while j >= self.m - 1 - u {
            j -= self.m - 1 - u;
            u += 1;
        }
        (u, u + 1 + j)
    }
}

/// Bitmask of the C(s,2) internal edges of a vertex subset.
fn subset_edge_mask(idx: &EdgeIndexing, subset: &[usize]) -> u128 {
    let mut mask = 0u128;
    for pair in subset.iter().combinations(2) {
        mask |= 1 << idx.index(*pair[0], *pair[1]);
    }
    mask
}

/// Brute-force CLIQUE(m,s) evaluator with precomputed subset masks.
#[derive(Debug, Clone)]
pub struct CliqueOracle {
    spec: CliqueSpec,
    num_vars: usize,
    subset_masks: Vec<u128>,
}

impl CliqueOracle {
    pub fn new(spec: CliqueSpec) -> CliqueOracle {
        let idx = EdgeIndexing::new(spec.m);
        let subset_masks = (0..spec.m)
            .combinations(spec.s)
            .map(|subset| subset_edge_mask(&idx, &subset))
            .collect();
        CliqueOracle {
            spec,
            num_vars: idx.num_vars(),
            subset_masks,
        }
    }

    pub fn spec(&self) -> CliqueSpec {
        self.spec
    }

    /// Value with an explicit length check.
    pub fn eval(&self, a: &Assignment) -> Result<bool, CliqueError> {
        if a.len() != self.num_vars {
            return Err(CliqueError::LengthMismatch {
                got: a.len(),
                want: self.num_vars,
            });
        }
        Ok(self.eval_mask(a.to_mask()))
    }

    /// Value under an assignment given as an edge bitmask.
    pub fn eval_mask(&self, mask: u128) -> bool {
        self.subset_masks.iter().any(|&s| s & !mask == 0)
    }
}

impl BoolFn for CliqueOracle {
    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn value(&self, a: &Assignment) -> bool {
        assert_eq!(a.len(), self.num_vars, "assignment length mismatch");
        self.eval_mask(a.to_mask())
    }
}

/// One-shot oracle evaluation: 1 iff the graph encoded by `a` contains an
/// s-clique, by direct enumeration of s-subsets.
pub fn clique_oracle(spec: CliqueSpec, a: &Assignment) -> Result<bool, CliqueError> {
    CliqueOracle::new(spec).eval(a)
}

/// The canonical positive DNF: one monomial of C(s,2) edge variables per
/// s-subset of vertices, in canonical order.
pub fn canonical_dnf(spec: CliqueSpec) -> Dnf {
    let idx = EdgeIndexing::new(spec.m);
    let monomials = (0..spec.m)
        .combinations(spec.s)
        .map(|subset| {
            Monomial::try_new(subset_edge_mask(&idx, &subset), 0)
                .expect("positive monomials cannot contradict")
        })
        .collect();
    Dnf::new(idx.num_vars(), monomials)
}

/// The canonical monotone circuit: OR over all s-subsets of the AND of
/// their internal edges, built from [`canonical_dnf`].
pub fn build_monotone_dnf_circuit(spec: CliqueSpec) -> Circuit {
    canonical_dnf(spec).to_circuit()
}

/// Positive DNF of the clique function under a partial edge assignment:
/// subsets with a forced-absent internal edge drop out, forced-present
/// edges leave their monomials, and the result is re-absorbed.
fn restricted_dnf(spec: CliqueSpec, forced: &[Option<bool>]) -> Dnf {
    let idx = EdgeIndexing::new(spec.m);
    let mut forced_zero = 0u128;
    let mut forced_one = 0u128;
    for (j, f) in forced.iter().enumerate() {
        match f {
            Some(false) => forced_zero |= 1 << j,
            Some(true) => forced_one |= 1 << j,
            None => {}
        }
    }
    let monomials = (0..spec.m)
        .combinations(spec.s)
        .filter_map(|subset| {
            let mask = subset_edge_mask(&idx, &subset);
            if mask & forced_zero != 0 {
                return None;
            }
            Monomial::try_new(mask & !forced_one, 0)
        })
        .collect();
    Dnf::new(idx.num_vars(), monomials).absorb()
}

fn shannon_node(
    b: &mut CircuitBuilder,
    spec: CliqueSpec,
    forced: &mut Vec<Option<bool>>,
    pivots: &[usize],
) -> NodeId {
    match pivots.split_first() {
        None => {
            let leaf = restricted_dnf(spec, forced).to_circuit();
            b.append(&leaf)
        }
        Some((&j, rest)) => {
            let neg = b.neg_input(j);
            let pos = b.input(j);
            forced[j] = Some(false);
            let low = shannon_node(b, spec, forced, rest);
            forced[j] = Some(true);
            let high = shannon_node(b, spec, forced, rest);
            forced[j] = None;
            let l = b.and(neg, low);
            let r = b.and(pos, high);
            b.or(l, r)
        }
    }
}

/// Shannon expansion over the pivot variables:
/// `f = (~xj AND f|xj=0) OR (xj AND f|xj=1)`, recursively, with each leaf
/// the canonical positive DNF circuit of the restricted function. With a
/// non-empty pivot list the result is a standard circuit that computes
/// CLIQUE(m,s) while genuinely using a negated input per pivot. No
/// simplification is applied to the result.
pub fn build_shannon_circuit(spec: CliqueSpec, pivots: &[usize]) -> Result<Circuit, CliqueError> {
    let num_vars = spec.num_vars();
    for (i, &p) in pivots.iter().enumerate() {
        if p >= num_vars {
            return Err(CliqueError::InvalidPivot { var: p, num_vars });
        }
        if pivots[i + 1..].contains(&p) {
            return Err(CliqueError::DuplicatePivot { var: p });
        }
    }
    if pivots.is_empty() {
        return Ok(build_monotone_dnf_circuit(spec));
    }
    let mut b = CircuitBuilder::new(num_vars);
    let mut forced = vec![None; num_vars];
    let out = shannon_node(&mut b, spec, &mut forced, pivots);
    Ok(b.finish(out))
}

/// The adversarial circuit: `Or(And(~x1, x1), M)` where `M` is the
/// canonical monotone circuit. The added term is constantly 0, so the
/// circuit still computes CLIQUE(m,s); replacing `~x1` by constant 1
/// without simplifying first turns the dead term into a live `x1`.
pub fn build_pon_circuit(spec: CliqueSpec) -> Circuit {
    let mut b = CircuitBuilder::new(spec.num_vars());
    let neg = b.neg_input(0);
    let pos = b.input(0);
    let dead = b.and(neg, pos);
    let monotone = b.append(&build_monotone_dnf_circuit(spec));
    let out = b.or(dead, monotone);
    b.finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::NodeKind;
    use crate::dnf::to_dnf;
    use crate::passes::substitute_literal;

    fn spec(m: usize, s: usize) -> CliqueSpec {
        CliqueSpec::new(m, s).unwrap()
    }

    fn bits(text: &str) -> Assignment {
        text.parse().unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CliqueSpec::new(4, 3).is_ok());
        assert_eq!(
            CliqueSpec::new(3, 4),
            Err(CliqueError::InvalidSpec { m: 3, s: 4 })
        );
        assert_eq!(
            CliqueSpec::new(3, 0),
            Err(CliqueError::InvalidSpec { m: 3, s: 0 })
        );
        assert_eq!(
            CliqueSpec::new(17, 3),
            Err(CliqueError::TooManyVertices { m: 17, max: 16 })
        );
    }

    #[test]
    fn edge_indexing_is_lexicographic() {
        let idx = EdgeIndexing::new(4);
        let expected = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (j, &(u, v)) in expected.iter().enumerate() {
            assert_eq!(idx.index(u, v), j);
            assert_eq!(idx.edge(j), (u, v));
        }
    }

    #[test]
    fn edge_indexing_round_trips() {
        for m in 2..=12 {
            let idx = EdgeIndexing::new(m);
            for j in 0..idx.num_vars() {
                let (u, v) = idx.edge(j);
                assert!(u < v && v < m);
                assert_eq!(idx.index(u, v), j);
            }
        }
    }

    #[test]
    fn oracle_detects_triangles() {
        assert!(clique_oracle(spec(3, 3), &bits("111")).unwrap());
        assert!(!clique_oracle(spec(3, 3), &bits("110")).unwrap());
        // edges (0,1), (0,2), (1,2) form the triangle {0,1,2}
        assert!(clique_oracle(spec(4, 3), &bits("110100")).unwrap());
        // edges (0,1), (0,2), (0,3) form a star at vertex 0
        assert!(!clique_oracle(spec(4, 3), &bits("111000")).unwrap());
    }

    #[test]
    fn single_vertex_cliques_are_free() {
        for i in 0..64 {
            let a = Assignment::from_index(i, 6);
            assert!(clique_oracle(spec(4, 1), &a).unwrap());
        }
    }

    #[test]
    fn oracle_checks_assignment_length() {
        assert_eq!(
            clique_oracle(spec(4, 3), &bits("111")),
            Err(CliqueError::LengthMismatch { got: 3, want: 6 })
        );
    }

    #[test]
    fn canonical_dnf_of_4_3_is_the_four_triangles() {
        let d = canonical_dnf(spec(4, 3));
        let expected = [
            Monomial::from_lits(&[0, 1, 3], &[]).unwrap(),
            Monomial::from_lits(&[0, 2, 4], &[]).unwrap(),
            Monomial::from_lits(&[1, 2, 5], &[]).unwrap(),
            Monomial::from_lits(&[3, 4, 5], &[]).unwrap(),
        ];
        assert_eq!(d.monomials(), &expected);
    }

    #[test]
    fn monotone_circuit_gate_counts() {
        assert_eq!(build_monotone_dnf_circuit(spec(3, 3)).size(), 2);
        assert_eq!(build_monotone_dnf_circuit(spec(4, 3)).size(), 11);
        assert_eq!(canonical_dnf(spec(5, 3)).len(), 10);
    }

    #[test]
    fn monotone_circuit_matches_the_oracle() {
        for (m, s) in [(3, 3), (4, 3), (4, 4), (5, 3)] {
            let sp = spec(m, s);
            let oracle = CliqueOracle::new(sp);
            let c = build_monotone_dnf_circuit(sp);
            assert!(c.is_syntactically_monotone());
            for i in 0..1u64 << sp.num_vars() {
                let a = Assignment::from_index(i, sp.num_vars());
                assert_eq!(c.eval(&a).unwrap(), oracle.value(&a), "({m},{s}) at {a}");
            }
        }
    }

    #[test]
    fn degenerate_specs_collapse_to_and_and_or() {
        for m in 2..=5 {
            let n = m * (m - 1) / 2;
            let all = CliqueOracle::new(spec(m, m));
            let any = CliqueOracle::new(spec(m, 2));
            for i in 0..1u64 << n {
                let a = Assignment::from_index(i, n);
                let mask = a.to_mask();
                assert_eq!(all.value(&a), mask.count_ones() as usize == n);
                assert_eq!(any.value(&a), mask != 0);
            }
        }
    }

    #[test]
    fn oracle_is_monotone() {
        let sp = spec(4, 3);
        let oracle = CliqueOracle::new(sp);
        for i in 0..64u64 {
            let a = Assignment::from_index(i, 6);
            if !oracle.value(&a) {
                continue;
            }
            for j in 0..6 {
                if !a.get(j) {
                    assert!(oracle.value(&a.with_bit(j, true)));
                }
            }
        }
    }

    #[test]
    fn shannon_without_pivots_is_the_monotone_circuit() {
        let sp = spec(4, 3);
        assert_eq!(
            build_shannon_circuit(sp, &[]).unwrap(),
            build_monotone_dnf_circuit(sp)
        );
    }

    #[test]
    fn shannon_circuits_match_the_oracle() {
        let sp = spec(4, 3);
        let oracle = CliqueOracle::new(sp);
        for pivots in [&[0usize][..], &[0, 1][..], &[5, 2][..]] {
            let c = build_shannon_circuit(sp, pivots).unwrap();
            assert!(c.is_standard());
            for &p in pivots {
                assert!(
                    c.nodes().contains(&NodeKind::NegInputVar(p)),
                    "pivot {p} lost its negated input"
                );
            }
            for i in 0..64u64 {
                let a = Assignment::from_index(i, 6);
                assert_eq!(c.eval(&a).unwrap(), oracle.value(&a), "{pivots:?} at {a}");
            }
        }
    }

    #[test]
    fn shannon_rejects_bad_pivots() {
        let sp = spec(4, 3);
        assert_eq!(
            build_shannon_circuit(sp, &[6]),
            Err(CliqueError::InvalidPivot {
                var: 6,
                num_vars: 6
            })
        );
        assert_eq!(
            build_shannon_circuit(sp, &[1, 1]),
            Err(CliqueError::DuplicatePivot { var: 1 })
        );
    }

    #[test]
    fn pon_circuit_matches_the_oracle_but_breaks_under_substitution() {
        let sp = spec(4, 3);
        let oracle = CliqueOracle::new(sp);
        let pon = build_pon_circuit(sp);
        assert!(pon.is_standard());
        for i in 0..64u64 {
            let a = Assignment::from_index(i, 6);
            assert_eq!(pon.eval(&a).unwrap(), oracle.value(&a));
        }

        let broken = substitute_literal(&pon, 0).unwrap();
        let witness = bits("100000");
        assert!(broken.eval(&witness).unwrap());
        assert!(!oracle.value(&witness));
    }

    #[test]
    fn pon_expansion_deletes_the_dead_term() {
        let sp = spec(4, 3);
        let d = to_dnf(&build_pon_circuit(sp)).unwrap();
        assert_eq!(d, canonical_dnf(sp));
    }
}
