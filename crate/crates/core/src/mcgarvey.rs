//! Realising dominance graphs as strict pairwise majority relations of
//! linear preference profiles.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DominanceGraph, GraphError};

/// Voters, each ranking every alternative from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PreferenceProfile {
    pub voters: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile has no voters")]
    Empty,
    #[error("voter {voter} does not rank the same alternatives as voter 1")]
    MalformedOrder { voter: usize },
    #[error("voter {voter} ranks {name:?} twice")]
    RepeatedAlternative { voter: usize, name: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid profile JSON: {0}")]
    Json(String),
}

impl PreferenceProfile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        serde_json::from_str(text).map_err(|e| ProfileError::Json(e.to_string()))
    }
}

/// Two voters per edge `x > y`: one ranks `x, y, rest`, the other
/// `reverse(rest), x, y`. Every pair except `(x, y)` nets zero, so the
/// majority margin is exactly 2 on edges and 0 elsewhere. An edgeless graph
/// gets one order and its reverse.
pub fn mcgarvey_profile(g: &DominanceGraph) -> PreferenceProfile {
    let names = g.names();
    let mut voters = Vec::with_capacity(2 * g.edge_count().max(1));
    for (x, y) in g.edges() {
        let rest: Vec<&String> = names.iter().enumerate().filter(|&(i, _)| i != x && i != y).map(|(_, n)| n).collect();
        let mut first = vec![names[x].clone(), names[y].clone()];
        first.extend(rest.iter().map(|n| (*n).clone()));
        let mut second: Vec<String> = rest.iter().rev().map(|n| (*n).clone()).collect();
        second.extend([names[x].clone(), names[y].clone()]);
        voters.push(first);
        voters.push(second);
    }
    if voters.is_empty() {
        voters.push(names.to_vec());
        voters.push(names.iter().rev().cloned().collect());
    }
    PreferenceProfile { voters }
}

/// `x > y` iff strictly more voters rank `x` above `y` than `y` above `x`.
pub fn majority_graph(p: &PreferenceProfile) -> Result<DominanceGraph, ProfileError> {
    let first = p.voters.first().ok_or(ProfileError::Empty)?;
    let n = first.len();
    let mut positions: Vec<HashMap<&str, usize>> = Vec::with_capacity(p.voters.len());
    let reference: HashSet<&str> = first.iter().map(String::as_str).collect();
    for (v, order) in p.voters.iter().enumerate() {
        let mut pos = HashMap::with_capacity(n);
        for (rank, name) in order.iter().enumerate() {
            if pos.insert(name.as_str(), rank).is_some() {
                return Err(ProfileError::RepeatedAlternative { voter: v + 1, name: name.clone() });
            }
        }
        if order.len() != n || !order.iter().all(|a| reference.contains(a.as_str())) {
            return Err(ProfileError::MalformedOrder { voter: v + 1 });
        }
        positions.push(pos);
    }
    let mut edges = Vec::new();
    for x in first {
        for y in first {
            if x == y {
                continue;
            }
            let margin: i64 = positions
                .iter()
                .map(|pos| if pos[x.as_str()] < pos[y.as_str()] { 1 } else { -1 })
                .sum();
            if margin > 0 {
                edges.push((x.as_str(), y.as_str()));
            }
        }
    }
    Ok(DominanceGraph::new(first.iter().map(String::as_str), edges)?)
}
