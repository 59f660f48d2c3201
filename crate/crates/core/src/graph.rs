//! Dominance graphs and the `.dg` text format.
//!
//! A dominance graph is a finite set of named alternatives together with an
//! asymmetric, irreflexive relation `x ≻ y` ("x dominates y"). Alternatives
//! are kept in lexicographic order of their names, so every graph built from
//! the same names and edges is identical, independent of input order.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::set::{AltSet, MAX_ALTERNATIVES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid alternative name {0:?} (expected [A-Za-z0-9_]+)")]
    InvalidName(String),
    #[error("duplicate alternative {0:?}")]
    DuplicateName(String),
    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("symmetric pair: both {0} > {1} and {1} > {0}")]
    SymmetricPair(String, String),
    #[error("graph has {size} alternatives, limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("alternative index {0} is outside the graph")]
    IndexOutOfRange(usize),
    #[error("set contains index {0}, which is outside the graph")]
    SetOutOfRange(usize),
    #[error("{0:?} is not a member of the reference set")]
    NotInReferenceSet(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Size cap applied when constructing or parsing graphs.
pub const DEFAULT_MAX_ALTERNATIVES: usize = MAX_ALTERNATIVES;

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

#[derive(Clone, PartialEq, Eq)]
pub struct DominanceGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // out[x] = { y : x > y }, inn[x] = { y : y > x }
    out: Vec<AltSet>,
    inn: Vec<AltSet>,
}

impl std::fmt::Debug for DominanceGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DominanceGraph")
            .field("alternatives", &self.names)
            .field("edges", &self.edge_names())
            .finish()
    }
}

impl DominanceGraph {
    /// Builds and validates a graph with the default size cap.
    pub fn new<N, E, S>(alternatives: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        Self::with_limit(alternatives, edges, DEFAULT_MAX_ALTERNATIVES)
    }

    pub fn with_limit<N, E, S>(alternatives: N, edges: E, limit: usize) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut seen = BTreeSet::new();
        for name in alternatives {
            let name = name.as_ref();
            if !is_valid_name(name) {
                return Err(GraphError::InvalidName(name.to_string()));
            }
            if !seen.insert(name.to_string()) {
                return Err(GraphError::DuplicateName(name.to_string()));
            }
        }
        let limit = limit.min(MAX_ALTERNATIVES);
        if seen.len() > limit {
            return Err(GraphError::TooLarge { size: seen.len(), limit });
        }
        let names: Vec<String> = seen.into_iter().collect();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = names.len();
        let mut out = vec![AltSet::EMPTY; n];
        let mut inn = vec![AltSet::EMPTY; n];
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let x = *index
                .get(u)
                .ok_or_else(|| GraphError::UnknownAlternative(u.to_string()))?;
            let y = *index
                .get(v)
                .ok_or_else(|| GraphError::UnknownAlternative(v.to_string()))?;
            if x == y {
                return Err(GraphError::SelfLoop(u.to_string()));
            }
            if out[y].contains(x) {
                return Err(GraphError::SymmetricPair(u.to_string(), v.to_string()));
            }
            out[x].insert(y);
            inn[y].insert(x);
        }
        Ok(DominanceGraph { names, index, out, inn })
    }

    /// Builds a graph directly from index pairs over already-sorted, validated names.
    pub(crate) fn from_parts(names: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = names.len();
        let mut out = vec![AltSet::EMPTY; n];
        let mut inn = vec![AltSet::EMPTY; n];
        for &(x, y) in edges {
            debug_assert!(x != y && !out[y].contains(x));
            out[x].insert(y);
            inn[y].insert(x);
        }
        DominanceGraph { names, index, out, inn }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name)
            .ok_or_else(|| GraphError::UnknownAlternative(name.to_string()))
    }

    pub fn all(&self) -> AltSet {
        AltSet::full(self.len())
    }

    #[inline]
    pub fn dominates(&self, x: usize, y: usize) -> bool {
        self.out[x].contains(y)
    }

    /// `{ y : x > y }` over the whole graph.
    #[inline]
    pub fn out_set(&self, x: usize) -> AltSet {
        self.out[x]
    }

    /// `{ z : z > x }` over the whole graph.
    #[inline]
    pub fn in_set(&self, x: usize) -> AltSet {
        self.inn[x]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Edges as index pairs, ordered by (source, target).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(x, s)| s.iter().map(move |y| (x, y)))
    }

    pub fn edge_names(&self) -> Vec<(&str, &str)> {
        self.edges().map(|(x, y)| (self.name(x), self.name(y))).collect()
    }

    pub fn check_index(&self, x: usize) -> Result<(), GraphError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange(x))
        }
    }

    pub fn check_set(&self, s: AltSet) -> Result<(), GraphError> {
        let extra = s - self.all();
        match extra.iter().next() {
            None => Ok(()),
            Some(i) => Err(GraphError::SetOutOfRange(i)),
        }
    }

    /// Looks up a list of names as a set.
    pub fn set_of<S: AsRef<str>>(&self, names: impl IntoIterator<Item = S>) -> Result<AltSet, GraphError> {
        names
            .into_iter()
            .try_fold(AltSet::EMPTY, |s, n| Ok(s.with(self.require(n.as_ref())?)))
    }

    pub fn set_names(&self, s: AltSet) -> Vec<&str> {
        s.iter().map(|i| self.name(i)).collect()
    }

    /// Comma-separated member names in the graph's alternative order.
    pub fn format_set(&self, s: AltSet) -> String {
        self.set_names(s).join(",")
    }

    /// `{ z ∈ b : z > x }`.
    pub fn dominators(&self, x: usize, b: AltSet) -> Result<AltSet, GraphError> {
        self.check_index(x)?;
        self.check_set(b)?;
        Ok(self.inn[x] & b)
    }

    /// `{ z ∈ b : x > z }`.
    pub fn dominated_by(&self, x: usize, b: AltSet) -> Result<AltSet, GraphError> {
        self.check_index(x)?;
        self.check_set(b)?;
        Ok(self.out[x] & b)
    }

    /// Alternatives no other alternative dominates.
    pub fn undominated(&self) -> AltSet {
        (0..self.len()).filter(|&x| self.inn[x].is_empty()).collect()
    }

    /// The same alternatives with every edge flipped.
    pub fn reverse(&self) -> DominanceGraph {
        DominanceGraph {
            names: self.names.clone(),
            index: self.index.clone(),
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    /// Restriction of the graph to `keep`. Returns the subgraph and, for each
    /// subgraph index, the index it had in `self`.
    pub fn induced(&self, keep: AltSet) -> Result<(DominanceGraph, Vec<usize>), GraphError> {
        self.check_set(keep)?;
        let map: Vec<usize> = keep.to_vec();
        let names = map.iter().map(|&i| self.names[i].clone()).collect();
        let mut back = vec![usize::MAX; self.len()];
        for (j, &i) in map.iter().enumerate() {
            back[i] = j;
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(x, y)| keep.contains(x) && keep.contains(y))
            .map(|(x, y)| (back[x], back[y]))
            .collect();
        Ok((DominanceGraph::from_parts(names, &edges), map))
    }

    /// Canonical `.dg` rendering: header, names in order, edges sorted.
    pub fn to_dg(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dg {}", self.len());
        for n in &self.names {
            let _ = writeln!(s, "{n}");
        }
        for (x, y) in self.edges() {
            let _ = writeln!(s, "{} {}", self.name(x), self.name(y));
        }
        s
    }

    pub fn parse_dg(text: &str) -> Result<DominanceGraph, GraphError> {
        Self::parse_dg_with_limit(text, DEFAULT_MAX_ALTERNATIVES)
    }

    /// Parses the `.dg` format.
    ///
    /// After the `dg <n>` header come either exactly `n` one-name lines
    /// followed by `u v` edge lines, or edge lines only, in which case the
    /// alternatives are the edge endpoints and there must be exactly `n`.
    pub fn parse_dg_with_limit(text: &str, limit: usize) -> Result<DominanceGraph, GraphError> {
        let syntax = |line: usize, message: String| GraphError::Syntax { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing `dg <n>` header".into()))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("dg") {
            return Err(syntax(hline, format!("expected `dg <n>`, found {header:?}")));
        }
        let n: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax(hline, "header count must be a nonnegative integer".into()))?;
        if toks.next().is_some() {
            return Err(syntax(hline, "trailing tokens after header".into()));
        }
        if n > limit.min(MAX_ALTERNATIVES) {
            return Err(GraphError::TooLarge { size: n, limit: limit.min(MAX_ALTERNATIVES) });
        }

        let mut names: Vec<String> = Vec::new();
        let mut edges: Vec<(String, String)> = Vec::new();
        let mut implicit = false;
        let mut last_line = hline;
        for (no, line) in lines {
            last_line = no;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [name] if edges.is_empty() && !implicit => {
                    if names.len() == n {
                        return Err(syntax(no, format!("more than {n} alternatives declared")));
                    }
                    if !is_valid_name(name) {
                        return Err(GraphError::InvalidName(name.to_string()));
                    }
                    names.push(name.to_string());
                }
                [u, v] => {
                    if edges.is_empty() && names.is_empty() {
                        implicit = true;
                    } else if !implicit && names.len() != n {
                        return Err(syntax(
                            no,
                            format!("expected {n} alternatives before edges, found {}", names.len()),
                        ));
                    }
                    edges.push((u.to_string(), v.to_string()));
                }
                [_] => return Err(syntax(no, "alternative declared after edges".into())),
                _ => return Err(syntax(no, format!("expected `<u> <v>`, found {line:?}"))),
            }
        }
        if implicit {
            let mut seen = BTreeSet::new();
            for (u, v) in &edges {
                for w in [u, v] {
                    if !is_valid_name(w) {
                        return Err(GraphError::InvalidName(w.clone()));
                    }
                    if seen.insert(w.clone()) {
                        names.push(w.clone());
                    }
                }
            }
        }
        if names.len() != n {
            return Err(syntax(
                last_line,
                format!("header declares {n} alternatives, found {}", names.len()),
            ));
        }
        DominanceGraph::with_limit(names, edges, limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DominanceGraph {
        DominanceGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap()
    }

    #[test]
    fn smallest_graph() {
        let g = DominanceGraph::new(["a", "b"], [("a", "b")]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.dominates(0, 1));
    }

    #[test]
    fn validation_errors_name_the_offender() {
        assert_eq!(
            DominanceGraph::new(["a"], [("a", "a")]).unwrap_err(),
            GraphError::SelfLoop("a".into())
        );
        assert_eq!(
            DominanceGraph::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err(),
            GraphError::SymmetricPair("b".into(), "a".into())
        );
        assert_eq!(
            DominanceGraph::new(["a", "a"], Vec::<(&str, &str)>::new()).unwrap_err(),
            GraphError::DuplicateName("a".into())
        );
        assert_eq!(
            DominanceGraph::new(["a"], [("a", "q")]).unwrap_err(),
            GraphError::UnknownAlternative("q".into())
        );
        assert_eq!(
            DominanceGraph::new(["a-b"], Vec::<(&str, &str)>::new()).unwrap_err(),
            GraphError::InvalidName("a-b".into())
        );
        assert!(matches!(
            DominanceGraph::with_limit(["a", "b", "c"], Vec::<(&str, &str)>::new(), 2),
            Err(GraphError::TooLarge { size: 3, limit: 2 })
        ));
    }

    #[test]
    fn order_is_lexicographic() {
        let g = DominanceGraph::new(["b", "a", "c"], [("c", "a")]).unwrap();
        assert_eq!(g.names(), ["a", "b", "c"]);
        assert!(g.dominates(2, 0));
    }

    #[test]
    fn dominator_queries() {
        let g = cycle3();
        let b = g.index_of("b").unwrap();
        assert_eq!(g.dominators(b, g.all()).unwrap(), g.set_of(["a"]).unwrap());
        assert_eq!(g.dominators(b, g.set_of(["b", "c"]).unwrap()).unwrap(), AltSet::EMPTY);
        assert_eq!(g.dominated_by(0, g.all()).unwrap(), g.set_of(["b"]).unwrap());

        let chain = DominanceGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(chain.dominated_by(0, chain.all()).unwrap(), chain.set_of(["b", "c"]).unwrap());
        assert!(g.dominators(7, g.all()).is_err());
        assert!(g.dominators(0, AltSet::singleton(5)).is_err());
    }

    #[test]
    fn parse_examples() {
        let g = DominanceGraph::parse_dg("dg 2\na b\n").unwrap();
        assert_eq!(g.names(), ["a", "b"]);
        assert_eq!(g.edge_names(), vec![("a", "b")]);

        let explicit = DominanceGraph::parse_dg("# two\ndg 3\nc\na\nb  # comment\n\na b\n").unwrap();
        assert_eq!(explicit.names(), ["a", "b", "c"]);
        assert_eq!(explicit.to_dg(), "dg 3\na\nb\nc\na b\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = DominanceGraph::parse_dg("dg 2\na\nb\na b c\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 4, .. }), "{err:?}");
        let err = DominanceGraph::parse_dg("graph 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 1, .. }));
        let err = DominanceGraph::parse_dg("dg 3\na\nb\na b\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 4, .. }), "{err:?}");
        let err = DominanceGraph::parse_dg("dg 1\na\na a\n").unwrap_err();
        assert_eq!(err, GraphError::SelfLoop("a".into()));
        let err = DominanceGraph::parse_dg("dg 2\na b\nc\n").unwrap_err();
        assert!(matches!(err, GraphError::Syntax { line: 3, .. }));
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = cycle3();
        let (h, map) = g.induced(g.set_of(["a", "b"]).unwrap()).unwrap();
        assert_eq!(h.names(), ["a", "b"]);
        assert_eq!(h.edge_names(), vec![("a", "b")]);
        assert_eq!(map, vec![0, 1]);
    }

    #[test]
    fn reverse_flips_edges() {
        let g = cycle3();
        let r = g.reverse();
        assert!(r.dominates(0, 2) && r.dominates(2, 1) && r.dominates(1, 0));
        assert_eq!(r.reverse(), g);
    }
}
