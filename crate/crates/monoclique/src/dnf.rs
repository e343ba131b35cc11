//! Disjunctive normal form: expansion of standard circuits, factoring on a
//! negated variable, and DNF-level negation elimination.
//!
//! A [`Monomial`] is a conjunction of literals stored as positive and
//! negated variable bitmasks. Contradictory monomials (a variable together
//! with its own negation) are unrepresentable: construction deletes them,
//! which is exactly the simplification `~x AND x = 0`. The [`RawDnf`]
//! variant keeps them, so a diagnosis can point at the contradictory term
//! that an expansion would otherwise silently erase.

use std::fmt;

use thiserror::Error;

use crate::circuit::{Assignment, BoolFn, Circuit, CircuitBuilder, InvalidCircuit, NodeKind};

/// Bitmask representation caps the variable count.
pub const MAX_DNF_VARS: usize = 128;

/// Default cap on the monomial count during expansion.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Error from DNF construction or evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DnfError {
    #[error("invalid circuit: {0}")]
    Invalid(#[from] InvalidCircuit),
    #[error("circuit is not standard (it contains NOT gates)")]
    NotStandard,
    #[error("monomial budget exceeded: reached {reached} with budget {budget}")]
    BudgetExceeded { reached: usize, budget: usize },
    #[error("{num_vars} variables exceed the supported maximum of {max}")]
    TooManyVars { num_vars: usize, max: usize },
    #[error("assignment has {got} bits, DNF has {want} variables")]
    LengthMismatch { got: usize, want: usize },
}

fn write_literals(f: &mut fmt::Formatter<'_>, pos: u128, neg: u128) -> fmt::Result {
    if pos == 0 && neg == 0 {
        return f.write_str("1");
    }
    let mut first = true;
    for j in 0..MAX_DNF_VARS {
        let bit = 1u128 << j;
        if pos & bit == 0 && neg & bit == 0 {
            continue;
        }
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        if neg & bit != 0 {
            write!(f, "~x{}", j + 1)?;
        } else {
            write!(f, "x{}", j + 1)?;
        }
    }
    Ok(())
}

/// A conjunction of literals, contradiction-free by construction. The empty
/// monomial is the constant-1 conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pos: u128,
    neg: u128,
}

impl Monomial {
    /// Build from bitmasks; `None` if some variable appears both ways,
    /// since such a conjunction is the constant 0.
    pub fn try_new(pos: u128, neg: u128) -> Option<Monomial> {
        if pos & neg != 0 {
            None
        } else {
            Some(Monomial { pos, neg })
        }
    }

    /// The constant-1 conjunction.
    pub fn empty() -> Monomial {
        Monomial { pos: 0, neg: 0 }
    }

    /// Build from explicit literal lists; `None` on contradiction.
    pub fn from_lits(pos: &[usize], neg: &[usize]) -> Option<Monomial> {
        let mask = |vars: &[usize]| {
            vars.iter().fold(0u128, |m, &v| {
                assert!(v < MAX_DNF_VARS, "variable index {v} out of range");
                m | (1 << v)
            })
        };
        Monomial::try_new(mask(pos), mask(neg))
    }

    /// Positive literals as a bitmask (bit j = variable j).
    pub fn pos(&self) -> u128 {
        self.pos
    }

    /// Negated literals as a bitmask.
    pub fn neg(&self) -> u128 {
        self.neg
    }

    /// Conjunction of two monomials; `None` if they contradict.
    pub fn product(&self, other: &Monomial) -> Option<Monomial> {
        Monomial::try_new(self.pos | other.pos, self.neg | other.neg)
    }

    /// True when this monomial's literals are a subset of `other`'s, so
    /// `other` implies this one and is absorbed by it.
    pub fn absorbs(&self, other: &Monomial) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    /// Does the monomial contain the literal `~var`?
    pub fn contains_neg(&self, var: usize) -> bool {
        var < MAX_DNF_VARS && self.neg & (1 << var) != 0
    }

    /// Copy with the literal `~var` removed.
    pub fn without_neg(&self, var: usize) -> Monomial {
        Monomial {
            pos: self.pos,
            neg: self.neg & !(1 << var),
        }
    }

    /// Number of literals.
    pub fn literal_count(&self) -> usize {
        (self.pos.count_ones() + self.neg.count_ones()) as usize
    }

    /// Value under an assignment given as a bitmask.
    pub fn eval_mask(&self, mask: u128) -> bool {
        self.pos & !mask == 0 && self.neg & mask == 0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_literals(f, self.pos, self.neg)
    }
}

/// A disjunction of monomials in canonical order: sorted by (pos, neg)
/// bitmasks, duplicate-free. The empty disjunction is the constant 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dnf {
    num_vars: usize,
    monomials: Vec<Monomial>,
}

fn assert_vars_in_range(num_vars: usize, pos: u128, neg: u128) {
    assert!(
        num_vars <= MAX_DNF_VARS,
        "{num_vars} variables exceed the supported maximum of {MAX_DNF_VARS}"
    );
    if num_vars < MAX_DNF_VARS {
        assert!(
            (pos | neg) >> num_vars == 0,
            "monomial mentions a variable >= {num_vars}"
        );
    }
}

impl Dnf {
    /// Canonicalize a monomial list: sort and drop duplicates. Panics if a
    /// monomial mentions a variable index at or beyond `num_vars`.
    pub fn new(num_vars: usize, mut monomials: Vec<Monomial>) -> Dnf {
        for m in &monomials {
            assert_vars_in_range(num_vars, m.pos, m.neg);
        }
        monomials.sort_unstable();
        monomials.dedup();
        Dnf {
            num_vars,
            monomials,
        }
    }

    /// The constant-0 DNF.
    pub fn constant_false(num_vars: usize) -> Dnf {
        Dnf::new(num_vars, Vec::new())
    }

    /// The constant-1 DNF: a single empty monomial.
    pub fn constant_true(num_vars: usize) -> Dnf {
        Dnf::new(num_vars, vec![Monomial::empty()])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Remove every monomial whose literal set contains another monomial's
    /// literal set, leaving only the minimal ones.
    pub fn absorb(&self) -> Dnf {
        let mut mons = self.monomials.clone();
        absorb_vec(&mut mons);
        Dnf {
            num_vars: self.num_vars,
            monomials: mons,
        }
    }

    /// True when some monomial contains the literal `~var`.
    pub fn has_neg(&self, var: usize) -> bool {
        self.monomials.iter().any(|m| m.contains_neg(var))
    }

    /// True when no monomial contains any negated literal.
    pub fn is_positive(&self) -> bool {
        self.monomials.iter().all(|m| m.neg == 0)
    }

    /// Value under an assignment given as a bitmask.
    pub fn eval_mask(&self, mask: u128) -> bool {
        self.monomials.iter().any(|m| m.eval_mask(mask))
    }

    /// Rebuild as a standard circuit: one left-associated AND chain per
    /// monomial with literals in ascending variable order, OR-ed together
    /// left-associated in canonical monomial order. Input nodes are shared
    /// across monomials.
    pub fn to_circuit(&self) -> Circuit {
        let mut b = CircuitBuilder::new(self.num_vars);
        if self.monomials.is_empty() {
            let out = b.constant(false);
            return b.finish(out);
        }
        let mut pos_nodes = vec![None; self.num_vars];
        let mut neg_nodes = vec![None; self.num_vars];
        let mut or_chain = None;
        for m in &self.monomials {
            let mut and_chain = None;
            for j in 0..self.num_vars {
                let bit = 1u128 << j;
                let lit = if m.pos & bit != 0 {
                    *pos_nodes[j].get_or_insert_with(|| b.input(j))
                } else if m.neg & bit != 0 {
                    *neg_nodes[j].get_or_insert_with(|| b.neg_input(j))
                } else {
                    continue;
                };
                and_chain = Some(match and_chain {
                    None => lit,
                    Some(acc) => b.and(acc, lit),
                });
            }
            let term = and_chain.unwrap_or_else(|| b.constant(true));
            or_chain = Some(match or_chain {
                None => term,
                Some(acc) => b.or(acc, term),
            });
        }
        let out = or_chain.expect("non-empty monomial list");
        b.finish(out)
    }
}

impl fmt::Display for Dnf {
    /// One monomial per line in canonical order; `0` alone for the empty
    /// DNF, `1` alone for the constant-1 DNF.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl BoolFn for Dnf {
    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn value(&self, a: &Assignment) -> bool {
        assert_eq!(a.len(), self.num_vars, "assignment length mismatch");
        self.eval_mask(a.to_mask())
    }

    fn report_size(&self) -> Option<usize> {
        Some(self.monomials.len())
    }
}

fn absorb_vec(mons: &mut Vec<Monomial>) {
    mons.sort_unstable();
    mons.dedup();
    mons.sort_by_key(Monomial::literal_count);
    let mut kept: Vec<Monomial> = Vec::with_capacity(mons.len());
    'next: for &m in mons.iter() {
        for k in &kept {
            if k.absorbs(&m) {
                continue 'next;
            }
        }
        kept.push(m);
    }
    kept.sort_unstable();
    *mons = kept;
}

/// Expand a standard circuit into its DNF with the default budget.
pub fn to_dnf(c: &Circuit) -> Result<Dnf, DnfError> {
    to_dnf_with_budget(c, DEFAULT_BUDGET)
}

/// Expand a standard circuit into its DNF, bottom-up: inputs become
/// single-literal monomials, OR is union, AND is the pairwise monomial
/// product. Contradictory products are deleted as they arise and absorption
/// runs at every node, so the result is the canonical absorbed form.
/// Expansion stops with an error as soon as any node's monomial count
/// passes `budget`.
pub fn to_dnf_with_budget(c: &Circuit, budget: usize) -> Result<Dnf, DnfError> {
    c.validate()?;
    if !c.is_standard() {
        return Err(DnfError::NotStandard);
    }
    if c.num_vars() > MAX_DNF_VARS {
        return Err(DnfError::TooManyVars {
            num_vars: c.num_vars(),
            max: MAX_DNF_VARS,
        });
    }
    let monomials = expand(c, budget, false)?;
    Ok(Dnf {
        num_vars: c.num_vars(),
        monomials,
    })
}

/// Value of a DNF under an assignment.
pub fn eval_dnf(d: &Dnf, a: &Assignment) -> Result<bool, DnfError> {
    if a.len() != d.num_vars {
        return Err(DnfError::LengthMismatch {
            got: a.len(),
            want: d.num_vars,
        });
    }
    Ok(d.eval_mask(a.to_mask()))
}

/// Split `d` on the literal `~var`: `p` holds the monomials that contained
/// `~var`, each with `~var` removed; `rest` holds every other monomial
/// untouched. No monomial of `p` mentions `var` at all, because a
/// contradiction-free monomial containing `~var` cannot also contain `var`.
/// For every assignment `a`:
/// `eval(d, a) = (!a[var] && eval(p, a)) || eval(rest, a)`.
pub fn factor(d: &Dnf, var: usize) -> (Dnf, Dnf) {
    assert!(var < d.num_vars, "variable index {var} out of range");
    let mut p = Vec::new();
    let mut rest = Vec::new();
    for m in &d.monomials {
        if m.contains_neg(var) {
            p.push(m.without_neg(var));
        } else {
            rest.push(*m);
        }
    }
    (Dnf::new(d.num_vars, p), Dnf::new(d.num_vars, rest))
}

/// Replace the literal `~var` by constant 1: the union of `p` and `rest`
/// from [`factor`], re-canonicalized with absorption. The result never
/// mentions `~var`. Its value dominates `d`'s on every assignment; the
/// functions are equal whenever `d` computes a monotone function, and may
/// differ otherwise.
pub fn eliminate_negation_dnf(d: &Dnf, var: usize) -> Dnf {
    let (p, rest) = factor(d, var);
    let mut mons = p.monomials;
    mons.extend_from_slice(&rest.monomials);
    absorb_vec(&mut mons);
    Dnf {
        num_vars: d.num_vars,
        monomials: mons,
    }
}

/// Apply [`eliminate_negation_dnf`] for every variable with a negated
/// occurrence, in ascending index order. The result has no negated literals.
pub fn monotonize_dnf(d: &Dnf) -> Dnf {
    let mut cur = d.clone();
    for var in 0..cur.num_vars {
        if cur.has_neg(var) {
            cur = eliminate_negation_dnf(&cur, var);
        }
    }
    cur
}

/// Monomial count and total literal count.
pub fn dnf_size(d: &Dnf) -> (usize, usize) {
    let literals = d.monomials.iter().map(Monomial::literal_count).sum();
    (d.len(), literals)
}

/// A conjunction of literals that may be contradictory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawMonomial {
    pos: u128,
    neg: u128,
}

impl RawMonomial {
    pub fn pos(&self) -> u128 {
        self.pos
    }

    pub fn neg(&self) -> u128 {
        self.neg
    }

    /// True when some variable appears both positively and negated, making
    /// the conjunction the constant 0.
    pub fn is_contradictory(&self) -> bool {
        self.pos & self.neg != 0
    }

    pub fn contains_neg(&self, var: usize) -> bool {
        var < MAX_DNF_VARS && self.neg & (1 << var) != 0
    }

    pub fn without_neg(&self, var: usize) -> RawMonomial {
        RawMonomial {
            pos: self.pos,
            neg: self.neg & !(1 << var),
        }
    }

    /// Value under an assignment bitmask; a contradictory monomial is 0
    /// everywhere.
    pub fn eval_mask(&self, mask: u128) -> bool {
        self.pos & !mask == 0 && self.neg & mask == 0
    }
}

impl fmt::Display for RawMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos == 0 && self.neg == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for j in 0..MAX_DNF_VARS {
            let bit = 1u128 << j;
            for (mask, prefix) in [(self.pos, ""), (self.neg, "~")] {
                if mask & bit != 0 {
                    if !first {
                        f.write_str(" ")?;
                    }
                    first = false;
                    write!(f, "{prefix}x{}", j + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// DNF expansion that keeps contradictory monomials and never absorbs, so
/// the terms a standard expansion would delete remain visible. Monomials
/// are still sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDnf {
    num_vars: usize,
    monomials: Vec<RawMonomial>,
}

impl RawDnf {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn monomials(&self) -> &[RawMonomial] {
        &self.monomials
    }
}

/// Expand a standard circuit keeping contradictory monomials, with no
/// absorption. Used to diagnose failures of circuit-level negation
/// elimination: it shows the expansion as it looks before `~x AND x = 0`
/// simplification.
pub fn to_raw_dnf(c: &Circuit, budget: usize) -> Result<RawDnf, DnfError> {
    c.validate()?;
    if !c.is_standard() {
        return Err(DnfError::NotStandard);
    }
    if c.num_vars() > MAX_DNF_VARS {
        return Err(DnfError::TooManyVars {
            num_vars: c.num_vars(),
            max: MAX_DNF_VARS,
        });
    }
    let monomials = expand(c, budget, true)?;
    let monomials = monomials
        .into_iter()
        .map(|m| RawMonomial {
            pos: m.pos,
            neg: m.neg,
        })
        .collect();
    Ok(RawDnf {
        num_vars: c.num_vars(),
        monomials,
    })
}

/// Split a raw expansion on `~var` exactly as [`factor`] does, keeping
/// contradictory monomials in both parts.
pub fn factor_raw(d: &RawDnf, var: usize) -> (RawDnf, RawDnf) {
    assert!(var < d.num_vars, "variable index {var} out of range");
    let mut p = Vec::new();
    let mut rest = Vec::new();
    for m in &d.monomials {
        if m.contains_neg(var) {
            p.push(m.without_neg(var));
        } else {
            rest.push(*m);
        }
    }
    p.sort_unstable();
    p.dedup();
    rest.sort_unstable();
    rest.dedup();
    (
        RawDnf {
            num_vars: d.num_vars,
            monomials: p,
        },
        RawDnf {
            num_vars: d.num_vars,
            monomials: rest,
        },
    )
}

// Shared bottom-up expansion. In raw mode contradictory monomials survive
// and absorption is skipped; otherwise contradictions are deleted at
// creation and every node is absorbed. The (pos, neg) pair type is reused
// for both since the raw flag alone decides whether pos & neg != 0 lives.
fn expand(c: &Circuit, budget: usize, raw: bool) -> Result<Vec<Monomial>, DnfError> {
    let keep = |pos: u128, neg: u128| -> Option<Monomial> {
        if !raw && pos & neg != 0 {
            None
        } else {
            Some(Monomial { pos, neg })
        }
    };
    let check = |len: usize| -> Result<(), DnfError> {
        if len > budget {
            Err(DnfError::BudgetExceeded {
                reached: len,
                budget,
            })
        } else {
            Ok(())
        }
    };
    let mut per_node: Vec<Vec<Monomial>> = Vec::with_capacity(c.nodes().len());
    let reach = c.reachable();
    for (i, &kind) in c.nodes().iter().enumerate() {
        if !reach[i] {
            per_node.push(Vec::new());
            continue;
        }
        let mut mons = match kind {
            NodeKind::InputVar(k) => vec![Monomial {
                pos: 1 << k,
                neg: 0,
            }],
            NodeKind::NegInputVar(k) => vec![Monomial {
                pos: 0,
                neg: 1 << k,
            }],
            NodeKind::Const(false) => Vec::new(),
            NodeKind::Const(true) => vec![Monomial::empty()],
            NodeKind::Not(_) => unreachable!("standard circuits have no NOT gates"),
            NodeKind::Or(x, y) => {
                let mut mons = per_node[x.index()].clone();
                mons.extend_from_slice(&per_node[y.index()]);
                mons
            }
            NodeKind::And(x, y) => {
                let mut mons = Vec::new();
                for a in &per_node[x.index()] {
                    for b in &per_node[y.index()] {
                        if let Some(m) = keep(a.pos | b.pos, a.neg | b.neg) {
                            mons.push(m);
                            check(mons.len())?;
                        }
                    }
                }
                mons
            }
        };
        if raw {
            mons.sort_unstable();
            mons.dedup();
        } else {
            absorb_vec(&mut mons);
        }
        check(mons.len())?;
        per_node.push(mons);
    }
    Ok(per_node.swap_remove(c.output().index()))
}
