//! Covering relations, uncovered sets, and covering-set predicates.
//!
//! Everything here is evaluated relative to a reference set `B`: `x` covers
//! `y` in `B` only quantifies over members of `B`. These functions follow the
//! definitions literally and are the reference the fast search is checked
//! against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::graph::{DominanceGraph, GraphError};
use crate::set::AltSet;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upward,
    Downward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Upward => "upward",
            Direction::Downward => "downward",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "up" | "upward" | "u" => Ok(Direction::Upward),
            "down" | "downward" | "d" => Ok(Direction::Downward),
            other => Err(format!("unknown direction {other:?} (expected up or down)")),
        }
    }
}

fn require_member(g: &DominanceGraph, b: AltSet, x: usize) -> Result<(), GraphError> {
    g.check_index(x)?;
    if b.contains(x) {
        Ok(())
    } else {
        Err(GraphError::NotInReferenceSet(g.name(x).to_string()))
    }
}

/// Whether `x` covers `y` within `b`.
///
/// Upward: `x > y` and every `z ∈ b` with `z > x` also has `z > y`.
/// Downward: `x > y` and every `z ∈ b` with `y > z` also has `x > z`.
pub fn covers(g: &DominanceGraph, b: AltSet, x: usize, y: usize, dir: Direction) -> Result<bool, GraphError> {
    g.check_set(b)?;
    require_member(g, b, x)?;
    require_member(g, b, y)?;
    Ok(covers_unchecked(g, b, x, y, dir))
}

fn covers_unchecked(g: &DominanceGraph, b: AltSet, x: usize, y: usize, dir: Direction) -> bool {
    if !g.dominates(x, y) {
        return false;
    }
    match dir {
        Direction::Upward => b.iter().all(|z| !g.dominates(z, x) || g.dominates(z, y)),
        Direction::Downward => b.iter().all(|z| !g.dominates(y, z) || g.dominates(x, z)),
    }
}

/// `{ x ∈ b : no y ∈ b covers x within b }`.
pub fn uncovered_set(g: &DominanceGraph, b: AltSet, dir: Direction) -> Result<AltSet, GraphError> {
    g.check_set(b)?;
    Ok(uncovered_unchecked(g, b, dir))
}

fn uncovered_unchecked(g: &DominanceGraph, b: AltSet, dir: Direction) -> AltSet {
    b.iter()
        .filter(|&x| !b.iter().any(|y| covers_unchecked(g, b, y, x, dir)))
        .collect()
}

/// Internal stability (`UC(m) = m`) plus external stability (every
/// `x ∉ m` is covered in `m ∪ {x}`).
pub fn is_covering_set(g: &DominanceGraph, m: AltSet, dir: Direction) -> Result<bool, GraphError> {
    g.check_set(m)?;
    if uncovered_unchecked(g, m, dir) != m {
        return Ok(false);
    }
    Ok((g.all() - m).iter().all(|x| {
        let ext = m.with(x);
        !uncovered_unchecked(g, ext, dir).contains(x)
    }))
}

/// Whether `m` is a covering set no proper subset of which is a covering set.
///
/// Undominated alternatives belong to every covering set, so only subsets
/// that keep them are probed, in descending cardinality. Fails with a budget
/// error if `2^(|m| - |mandatory ∩ m|)` exceeds the probe budget.
pub fn is_minimal_covering_set(g: &DominanceGraph, m: AltSet, dir: Direction, budget: &Budget) -> Result<bool, Error> {
    if !is_covering_set(g, m, dir)? {
        return Ok(false);
    }
    Ok(crate::search::check_minimal(g, m, dir, budget)?.0)
}

pub fn reverse(g: &DominanceGraph) -> DominanceGraph {
    g.reverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DominanceGraph {
        DominanceGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap()
    }

    fn chain2() -> DominanceGraph {
        DominanceGraph::new(["a", "b"], [("a", "b")]).unwrap()
    }

    #[test]
    fn two_chain_covers_both_ways() {
        let g = chain2();
        assert!(covers(&g, g.all(), 0, 1, Direction::Upward).unwrap());
        assert!(covers(&g, g.all(), 0, 1, Direction::Downward).unwrap());
        assert!(!covers(&g, g.all(), 1, 0, Direction::Upward).unwrap());
        assert_eq!(uncovered_set(&g, g.all(), Direction::Upward).unwrap(), AltSet::singleton(0));
    }

    #[test]
    fn cycle_has_no_covering() {
        let g = cycle3();
        assert!(!covers(&g, g.all(), 0, 1, Direction::Upward).unwrap());
        for dir in [Direction::Upward, Direction::Downward] {
            assert_eq!(uncovered_set(&g, g.all(), dir).unwrap(), g.all());
            // Within {a,b}, a covers b.
            let ab = g.set_of(["a", "b"]).unwrap();
            assert!(!is_covering_set(&g, ab, dir).unwrap());
            assert!(is_covering_set(&g, g.all(), dir).unwrap());
        }
    }

    #[test]
    fn covers_rejects_outsiders() {
        let g = cycle3();
        let b = g.set_of(["b", "c"]).unwrap();
        assert_eq!(
            covers(&g, b, 0, 1, Direction::Upward).unwrap_err(),
            GraphError::NotInReferenceSet("a".into())
        );
        assert!(uncovered_set(&g, AltSet::singleton(9), Direction::Upward).is_err());
    }

    #[test]
    fn chain_covering_sets() {
        let g = chain2();
        let a = AltSet::singleton(0);
        let budget = Budget::default();
        assert!(is_covering_set(&g, a, Direction::Upward).unwrap());
        assert!(is_minimal_covering_set(&g, a, Direction::Upward, &budget).unwrap());
        assert!(!is_minimal_covering_set(&g, g.all(), Direction::Upward, &budget).unwrap());
        assert!(!is_covering_set(&g, AltSet::EMPTY, Direction::Upward).unwrap());
    }

    #[test]
    fn empty_graph_is_its_own_covering_set() {
        let g = DominanceGraph::new(Vec::<&str>::new(), Vec::<(&str, &str)>::new()).unwrap();
        assert!(is_covering_set(&g, AltSet::EMPTY, Direction::Upward).unwrap());
    }

    #[test]
    fn minimality_respects_budget() {
        let names: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = (0..6)
            .map(|i| (names[i].clone(), names[(i + 1) % 6].clone()))
            .collect();
        let g = DominanceGraph::new(&names, edges.iter().map(|(a, b)| (a, b))).unwrap();
        let tight = Budget::default().with_probes(10);
        let err = is_minimal_covering_set(&g, g.all(), Direction::Upward, &tight).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn reverse_twice_is_identity() {
        let g = chain2();
        assert!(reverse(&g).dominates(1, 0));
        assert_eq!(reverse(&reverse(&g)), g);
    }
}
