//! SAT gadget graphs: formulas in, dominance graphs with labelled roles out.
//!
//! Alternatives are named after the symbols they stand for, transliterated
//! to ASCII (`x̄ᵢ′` becomes `xbp{i}`, hats become an `h` prefix). Roles use
//! the same stems with underscores (`xbp_1`, `hat_x_1`), and the label map
//! from role to alternative name is the stable way to address gadget
//! alternatives. In the chained constructions each component's names get a
//! `_{position}` suffix, except `d`, which becomes `d{position}`.

mod downward;
mod upward;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{check_formula_properties, Cnf, CnfError};
use crate::graph::{DominanceGraph, GraphError};
use crate::set::{AltSet, MAX_ALTERNATIVES};

pub use downward::{build_downward_conp_graph, build_downward_member_graph, build_downward_wagner_graph};
pub use upward::{build_upward_conp_graph, build_upward_member_graph, build_upward_wagner_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionId {
    Thm3,
    Cons1,
    Cons3,
    Thm9,
    Cons5,
    Cons6,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 6] = [
        ConstructionId::Thm3,
        ConstructionId::Cons1,
        ConstructionId::Cons3,
        ConstructionId::Thm9,
        ConstructionId::Cons5,
        ConstructionId::Cons6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionId::Thm3 => "thm3",
            ConstructionId::Cons1 => "cons1",
            ConstructionId::Cons3 => "cons3",
            ConstructionId::Thm9 => "thm9",
            ConstructionId::Cons5 => "cons5",
            ConstructionId::Cons6 => "cons6",
        }
    }

    /// Whether the construction takes a list of formulas.
    pub fn is_chained(self) -> bool {
        matches!(self, ConstructionId::Cons3 | ConstructionId::Cons6)
    }

    /// Whether inputs may contain empty clauses.
    pub fn allows_empty_clauses(self) -> bool {
        matches!(self, ConstructionId::Thm9 | ConstructionId::Cons5 | ConstructionId::Cons6)
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstructionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ConstructionId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown construction {s:?} (expected one of thm3, cons1, cons3, thm9, cons5, cons6)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaProperty {
    MinTwoUnsat,
    MinTwoModels,
    FirstVarFree,
}

impl fmt::Display for FormulaProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaProperty::MinTwoUnsat => "unsatisfiable but some assignment falsifies fewer than two clauses",
            FormulaProperty::MinTwoModels => "satisfiable but has fewer than two models",
            FormulaProperty::FirstVarFree => "first variable occurs in every clause",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("{construction}: clause {clause} is empty")]
    EmptyClause { construction: ConstructionId, clause: usize },
    #[error("formula {formula}: {property}")]
    PropertyViolation { formula: usize, property: FormulaProperty },
    #[error("formula {formula} is satisfiable but formula {} is not", formula - 1)]
    ChainViolation { formula: usize },
    #[error("{construction} cannot take {count} formulas (single constructions take one, chains a positive even number)")]
    FormulaCount { construction: ConstructionId, count: usize },
    #[error("{construction} would have {size} alternatives, limit is {limit}")]
    TooLarge { construction: ConstructionId, size: usize, limit: usize },
    #[error("no alternative has role {0:?}")]
    UnknownRole(String),
    #[error(transparent)]
    Formula(#[from] CnfError),
}

/// A generated graph plus the role each designated alternative plays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub graph: DominanceGraph,
    /// Role name (`d`, `e_1`, `up_1_2`, `d_star`, ...) to alternative name.
    pub labels: BTreeMap<String, String>,
    pub construction: ConstructionId,
    /// Alternative names of each chained component `A_1 .. A_2m`; empty for
    /// single-formula constructions.
    pub components: Vec<Vec<String>>,
}

impl ReductionOutput {
    pub fn role(&self, role: &str) -> Result<usize, ReductionError> {
        self.labels
            .get(role)
            .and_then(|name| self.graph.index_of(name))
            .ok_or_else(|| ReductionError::UnknownRole(role.to_string()))
    }

    pub fn roles<'r>(&self, roles: impl IntoIterator<Item = &'r str>) -> Result<AltSet, ReductionError> {
        roles.into_iter().map(|r| self.role(r)).collect()
    }

    /// The alternatives of component `A_j` (1-based).
    pub fn component(&self, j: usize) -> AltSet {
        self.components
            .get(j.wrapping_sub(1))
            .map(|names| names.iter().filter_map(|n| self.graph.index_of(n)).collect())
            .unwrap_or(AltSet::EMPTY)
    }

    pub fn labels_json(&self) -> String {
        serde_json::to_string_pretty(&self.labels).expect("string map serializes")
    }
}

/// Builds any construction. Single-formula constructions take exactly one
/// formula.
pub fn build(id: ConstructionId, formulas: &[Cnf]) -> Result<ReductionOutput, ReductionError> {
    if !id.is_chained() && formulas.len() != 1 {
        return Err(ReductionError::FormulaCount { construction: id, count: formulas.len() });
    }
    match id {
        ConstructionId::Thm3 => build_upward_member_graph(&formulas[0]),
        ConstructionId::Cons1 => build_upward_conp_graph(&formulas[0]),
        ConstructionId::Cons3 => build_upward_wagner_graph(formulas),
        ConstructionId::Thm9 => build_downward_member_graph(&formulas[0]),
        ConstructionId::Cons5 => build_downward_conp_graph(&formulas[0]),
        ConstructionId::Cons6 => build_downward_wagner_graph(formulas),
    }
}

/// Names and roles within one (possibly suffixed) component.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Namer {
    position: Option<usize>,
}

impl Namer {
    pub const PLAIN: Namer = Namer { position: None };

    pub fn at(position: usize) -> Namer {
        Namer { position: Some(position) }
    }

    pub fn position(self) -> Option<usize> {
        self.position
    }

    pub fn name(self, stem: &str, index: Option<usize>) -> String {
        let base = match index {
            Some(i) => format!("{stem}{i}"),
            None => stem.to_string(),
        };
        match self.position {
            None => base,
            Some(p) if stem == "d" && index.is_none() => format!("d{p}"),
            Some(p) => format!("{base}_{p}"),
        }
    }

    pub fn role(self, stem: &str, index: Option<usize>) -> String {
        let base = match index {
            Some(i) => format!("{stem}_{i}"),
            None => stem.to_string(),
        };
        match self.position {
            None => base,
            Some(p) => format!("{base}_{p}"),
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Builder {
    names: Vec<String>,
    edges: Vec<(String, String)>,
    labels: BTreeMap<String, String>,
}

impl Builder {
    /// Adds an alternative named `namer.name(stem, index)` and labels it.
    pub fn alt(&mut self, namer: Namer, stem: &str, index: Option<usize>) -> String {
        let name = namer.name(stem, index);
        self.names.push(name.clone());
        self.labels.insert(namer.role(stem, index), name.clone());
        name
    }

    /// Adds an alternative whose name and role do not follow the stem scheme.
    pub fn alt_with_role(&mut self, name: String, role: String) -> String {
        self.names.push(name.clone());
        self.labels.insert(role, name.clone());
        name
    }

    /// Roles of the given alternatives, in the same order.
    pub fn labels_for(&self, names: &[String]) -> Vec<String> {
        let by_name: BTreeMap<&str, &str> = self.labels.iter().map(|(r, n)| (n.as_str(), r.as_str())).collect();
        names.iter().map(|n| by_name[n.as_str()].to_string()).collect()
    }

    pub fn edge(&mut self, x: &str, y: &str) {
        self.edges.push((x.to_string(), y.to_string()));
    }

    pub fn cycle(&mut self, members: &[&String]) {
        for w in 0..members.len() {
            self.edge(members[w], members[(w + 1) % members.len()]);
        }
    }

    pub fn mark(&self) -> usize {
        self.names.len()
    }

    pub fn names_since(&self, mark: usize) -> Vec<String> {
        self.names[mark..].to_vec()
    }

    pub fn finish(
        self,
        construction: ConstructionId,
        components: Vec<Vec<String>>,
    ) -> Result<ReductionOutput, ReductionError> {
        let graph = DominanceGraph::new(&self.names, self.edges.iter().map(|(a, b)| (a, b))).map_err(|e| match e {
            GraphError::TooLarge { size, limit } => ReductionError::TooLarge { construction, size, limit },
            other => panic!("{construction} produced an invalid graph: {other}"),
        })?;
        Ok(ReductionOutput { graph, labels: self.labels, construction, components })
    }
}

pub(crate) fn check_size(construction: ConstructionId, size: usize) -> Result<(), ReductionError> {
    if size > MAX_ALTERNATIVES {
        return Err(ReductionError::TooLarge { construction, size, limit: MAX_ALTERNATIVES });
    }
    Ok(())
}

pub(crate) fn reject_empty_clauses(construction: ConstructionId, phi: &Cnf) -> Result<(), ReductionError> {
    match phi.clauses().iter().position(Vec::is_empty) {
        Some(j) => Err(ReductionError::EmptyClause { construction, clause: j + 1 }),
        None => Ok(()),
    }
}

/// Formula count is positive and even; satisfiability is monotone along the
/// list (`φ_j` satisfiable implies `φ_{j-1}` satisfiable). Returns the
/// satisfiability of each formula.
pub(crate) fn check_chain(construction: ConstructionId, formulas: &[Cnf]) -> Result<Vec<bool>, ReductionError> {
    if formulas.is_empty() || formulas.len() % 2 != 0 {
        return Err(ReductionError::FormulaCount { construction, count: formulas.len() });
    }
    let sat = formulas
        .iter()
        .map(|f| check_formula_properties(f).map(|p| p.satisfiable))
        .collect::<Result<Vec<_>, _>>()?;
    for j in 1..sat.len() {
        if sat[j] && !sat[j - 1] {
            return Err(ReductionError::ChainViolation { formula: j + 1 });
        }
    }
    Ok(sat)
}
