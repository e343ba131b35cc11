//! Seeded random circuit generation for tests and counterexample search.
//!
//! Circuits are built node by node: inputs first, then a random mix of
//! gates whose operands are drawn from everything built so far. The same
//! seed and parameters always produce the same circuit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitBuilder};

/// Shape of the circuits a seed expands into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    /// Number of input variables; every variable gets a positive input node.
    pub num_vars: usize,
    /// Upper bound on the number of gates added after the inputs.
    pub max_gates: usize,
    /// Also seed the pool with negated-input nodes.
    pub with_neg_inputs: bool,
    /// Also seed the pool with the two constants.
    pub with_consts: bool,
    /// Allow NOT gates.
    pub with_not: bool,
}

impl CorpusParams {
    /// General circuits: negations everywhere, constants included.
    pub fn general(num_vars: usize, max_gates: usize) -> Self {
        CorpusParams {
            num_vars,
            max_gates,
            with_neg_inputs: true,
            with_consts: true,
            with_not: true,
        }
    }

    /// Standard circuits: negated inputs allowed, NOT gates not.
    pub fn standard(num_vars: usize, max_gates: usize) -> Self {
        CorpusParams {
            with_not: false,
            ..Self::general(num_vars, max_gates)
        }
    }
}

/// Deterministically expand a seed into a circuit.
pub fn random_circuit(seed: u64, params: CorpusParams) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CircuitBuilder::new(params.num_vars);
    for k in 0..params.num_vars {
        b.input(k);
    }
    if params.with_neg_inputs {
        for k in 0..params.num_vars {
            b.neg_input(k);
        }
    }
    if params.with_consts {
        b.constant(false);
        b.constant(true);
    }
    if b.is_empty() {
        // No variables and no constants to start from; emit a constant so
        // the circuit has an output at all.
        b.constant(false);
    }
    let gates = rng.gen_range(0..=params.max_gates);
    for _ in 0..gates {
        let pick =
            |rng: &mut ChaCha8Rng, len: usize| crate::circuit::NodeId(rng.gen_range(0..len) as u32);
        let x = pick(&mut rng, b.len());
        let choices = if params.with_not { 3 } else { 2 };
        match rng.gen_range(0..choices) {
            0 => {
                let y = pick(&mut rng, b.len());
                b.and(x, y);
            }
            1 => {
                let y = pick(&mut rng, b.len());
                b.or(x, y);
            }
            _ => {
                b.not(x);
            }
        }
    }
    let output = crate::circuit::NodeId(rng.gen_range(0..b.len()) as u32);
    b.finish(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_circuit() {
        let p = CorpusParams::general(5, 30);
        assert_eq!(random_circuit(42, p), random_circuit(42, p));
    }

    #[test]
    fn generated_circuits_are_valid() {
        let p = CorpusParams::general(6, 40);
        for seed in 0..200 {
            let c = random_circuit(seed, p);
            c.validate().unwrap();
            assert!(c.num_vars() == 6);
        }
    }

    #[test]
    fn standard_params_never_emit_not_gates() {
        let p = CorpusParams::standard(4, 30);
        for seed in 0..200 {
            assert!(random_circuit(seed, p).is_standard());
        }
    }
}
