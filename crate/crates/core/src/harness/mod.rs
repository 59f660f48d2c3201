//! Seeded instance generators, a brute-force SAT oracle, and the claim
//! verifier that checks gadget properties against the exact solver.

mod claims;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Cnf, CnfError, MAX_SCAN_VARIABLES};
use crate::graph::DominanceGraph;
use crate::Error;

pub use claims::{
    admissible, exit_code, verify_claim, ClaimId, ClaimInstance, ClaimReport, Counterexample, SubCheck, Verdict,
};

/// Assignment as truth values of `w_1 .. w_n`.
pub type Assignment = Vec<bool>;

/// Packs an assignment into the bit layout used by [`Cnf::is_satisfied_by`].
pub fn assignment_bits(a: &[bool]) -> u64 {
    a.iter().enumerate().fold(0, |acc, (i, &v)| acc | (v as u64) << i)
}

fn assignment_from_rank(rank: u64, n: usize) -> Assignment {
    // w_1 is the most significant position of the rank.
    (0..n).map(|i| rank >> (n - 1 - i) & 1 == 1).collect()
}

/// Every model, in lexicographic order of `(w_1, .., w_n)` with false < true.
pub fn brute_force_sat(phi: &Cnf) -> Result<Vec<Assignment>, CnfError> {
    phi.check_scan_size()?;
    let n = phi.variable_count();
    Ok((0..1u64 << n)
        .map(|rank| assignment_from_rank(rank, n))
        .filter(|a| phi.is_satisfied_by(assignment_bits(a)))
        .collect())
}

/// Every assignment, in the same order as [`brute_force_sat`].
pub fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |rank| assignment_from_rank(rank, n))
}

/// A formula with `clauses` clauses of exactly `width` distinct variables
/// each, signs uniform. Deterministic in `seed`.
pub fn random_cnf(vars: usize, clauses: usize, width: usize, seed: u64) -> Result<Cnf, Error> {
    if vars == 0 || clauses == 0 || width == 0 {
        return Err(Error::InvalidParameter("variables, clauses and clause width must be positive".into()));
    }
    if width > vars {
        return Err(Error::InvalidParameter(format!(
            "clause width {width} exceeds the {vars} available variables; a wider clause would repeat a variable"
        )));
    }
    if vars > MAX_SCAN_VARIABLES {
        return Err(CnfError::TooManyVariables { variables: vars, limit: MAX_SCAN_VARIABLES }.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body: Vec<Vec<i32>> = (0..clauses)
        .map(|_| {
            sample(&mut rng, vars, width)
                .into_iter()
                .map(|v| {
                    let lit = v as i32 + 1;
                    if rng.gen_bool(0.5) {
                        lit
                    } else {
                        -lit
                    }
                })
                .collect()
        })
        .collect();
    Ok(Cnf::new(vars, &body, false)?)
}

/// Each unordered pair independently gets an edge with probability
/// `density`, oriented uniformly. Alternatives are `v00`, `v01`, ...
pub fn random_graph(n: usize, density: f64, seed: u64) -> DominanceGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                if rng.gen_bool(0.5) {
                    edges.push((names[i].as_str(), names[j].as_str()));
                } else {
                    edges.push((names[j].as_str(), names[i].as_str()));
                }
            }
        }
    }
    DominanceGraph::new(names.iter().map(String::as_str), edges).expect("generated graphs are valid")
}
