//! Exact decision and search procedures for minimal and minimum-size covering sets.
//!
//! Every search scans candidate subsets by ascending cardinality and, within
//! a cardinality, in lexicographic order of the graph's alternative order.
//! Undominated alternatives are forced into every candidate; no other pruning
//! is applied, so answers never depend on how a graph was constructed.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter};
use crate::covering::{self, Direction};
use crate::graph::DominanceGraph;
use crate::search::{check_minimal, Probe, Scan};
use crate::set::AltSet;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    InclusionMinimal,
    MinimumSize,
}

impl Notion {
    pub fn as_str(self) -> &'static str {
        match self {
            Notion::InclusionMinimal => "minimal",
            Notion::MinimumSize => "minimum",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "minimal" | "mc" | "inclusion-minimal" => Ok(Notion::InclusionMinimal),
            "minimum" | "msc" | "minimum-size" => Ok(Notion::MinimumSize),
            other => Err(format!("unknown notion {other:?} (expected minimal or minimum)")),
        }
    }
}

/// The question asked about the family of minimal (or minimum-size) covering sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Is there a member of the family with at most `k` alternatives?
    Size(usize),
    /// Is the alternative in some member of the family?
    Member(usize),
    /// Is the alternative in every member of the family?
    MemberAll(usize),
    /// Does the family have exactly one member?
    Unique,
    /// Is the given set a member of the family?
    Test(AltSet),
    /// Produce the first member of the family in enumeration order.
    Find,
    /// Is the family nonempty?
    Exists,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Size(_) => "size",
            ProblemKind::Member(_) => "member",
            ProblemKind::MemberAll(_) => "member-all",
            ProblemKind::Unique => "unique",
            ProblemKind::Test(_) => "test",
            ProblemKind::Find => "find",
            ProblemKind::Exists => "exists",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub subsets_examined: u64,
    pub elapsed_ms: u64,
    pub probe_budget: u64,
    /// Set when a for-all question was answered over an empty family.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveAnswer {
    /// `None` only for `Find` when no covering set exists.
    pub verdict: Option<bool>,
    pub witness: Option<AltSet>,
    pub all_solutions: Option<Vec<AltSet>>,
    pub stats: SearchStats,
}

/// Undominated alternatives. Each belongs to every covering set in both
/// directions: outside `M` it would be uncovered in `M ∪ {x}`.
pub fn mandatory_alternatives(g: &DominanceGraph) -> AltSet {
    g.undominated()
}

struct Levels<'p> {
    scan: Scan<'p>,
}

impl<'p> Levels<'p> {
    fn new(g: &DominanceGraph, probe: &'p Probe, budget: &Budget) -> Result<Self, Error> {
        let mandatory = mandatory_alternatives(g);
        let scan = Scan::new(probe, mandatory, g.all(), Meter::new(budget))?;
        Ok(Levels { scan })
    }

    fn forced_len(&self) -> usize {
        self.scan.forced().len()
    }

    fn max_level(&self) -> usize {
        self.scan.free_len()
    }

    /// Covering sets of the lowest cardinality that has any, scanning no
    /// further than `max_total` alternatives.
    fn first_nonempty(&mut self, max_total: usize, first_only: bool) -> Result<Vec<AltSet>, Error> {
        let forced = self.forced_len();
        if max_total < forced {
            return Ok(Vec::new());
        }
        let top = (max_total - forced).min(self.max_level());
        for k in 0..=top {
            let hits = self.scan.level(k, first_only)?;
            if !hits.is_empty() {
                return Ok(hits);
            }
        }
        Ok(Vec::new())
    }

    /// Streams inclusion-minimal covering sets in enumeration order. A
    /// covering set is minimal iff it contains no minimal set from a lower
    /// level, because every lower level has been scanned completely.
    fn minimal(&mut self, mut visit: impl FnMut(AltSet) -> ControlFlow<()>) -> Result<(), Error> {
        let mut found: Vec<AltSet> = Vec::new();
        for k in 0..=self.max_level() {
            let hits = self.scan.level(k, false)?;
            let start = found.len();
            for h in hits {
                if found[..start].iter().any(|m| m.is_subset(h)) {
                    continue;
                }
                found.push(h);
                if visit(h).is_break() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    fn all(&mut self) -> Result<Vec<AltSet>, Error> {
        let mut out = Vec::new();
        for k in 0..=self.max_level() {
            out.extend(self.scan.level(k, false)?);
        }
        Ok(out)
    }

    fn stats(&self, vacuous: bool) -> SearchStats {
        SearchStats {
            subsets_examined: self.scan.meter.probes,
            elapsed_ms: self.scan.meter.elapsed().as_millis() as u64,
            probe_budget: self.scan.meter.budget.max_probes,
            vacuous,
        }
    }
}

/// Every covering set, in enumeration order.
pub fn enumerate_covering_sets(g: &DominanceGraph, dir: Direction, budget: &Budget) -> Result<Vec<AltSet>, Error> {
    let probe = Probe::new(g, dir);
    Levels::new(g, &probe, budget)?.all()
}

/// Inclusion-minimal covering sets, in enumeration order.
pub fn minimal_covering_sets(g: &DominanceGraph, dir: Direction, budget: &Budget) -> Result<Vec<AltSet>, Error> {
    let probe = Probe::new(g, dir);
    let mut levels = Levels::new(g, &probe, budget)?;
    let mut out = Vec::new();
    levels.minimal(|m| {
        out.push(m);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Covering sets of the smallest cardinality, in enumeration order.
pub fn minimum_size_covering_sets(g: &DominanceGraph, dir: Direction, budget: &Budget) -> Result<Vec<AltSet>, Error> {
    let probe = Probe::new(g, dir);
    Levels::new(g, &probe, budget)?.first_nonempty(g.len(), false)
}

pub fn family(g: &DominanceGraph, dir: Direction, notion: Notion, budget: &Budget) -> Result<Vec<AltSet>, Error> {
    match notion {
        Notion::InclusionMinimal => minimal_covering_sets(g, dir, budget),
        Notion::MinimumSize => minimum_size_covering_sets(g, dir, budget),
    }
}

fn validate(g: &DominanceGraph, kind: &ProblemKind) -> Result<(), Error> {
    match *kind {
        ProblemKind::Size(0) => Err(Error::InvalidParameter("size bound k must be positive".into())),
        ProblemKind::Member(d) | ProblemKind::MemberAll(d) => Ok(g.check_index(d)?),
        ProblemKind::Test(m) => Ok(g.check_set(m)?),
        _ => Ok(()),
    }
}

/// Answers one of the covering-set problems exactly.
pub fn decide(
    g: &DominanceGraph,
    dir: Direction,
    notion: Notion,
    kind: &ProblemKind,
    budget: &Budget,
) -> Result<SolveAnswer, Error> {
    validate(g, kind)?;
    let probe = Probe::new(g, dir);
    if let ProblemKind::Test(m) = *kind {
        return decide_test(g, &probe, dir, notion, m, budget);
    }
    let mut levels = Levels::new(g, &probe, budget)?;

    let (verdict, witness, vacuous) = match (*kind, notion) {
        (ProblemKind::Size(k), _) => {
            // Some covering set of size ≤ k exists iff a minimal (hence also
            // a minimum-size) one does.
            let hits = levels.first_nonempty(k, false)?;
            (Some(!hits.is_empty()), hits.first().copied(), false)
        }
        (ProblemKind::Find, _) | (ProblemKind::Exists, _) => {
            // The first covering set in enumeration order has minimum size,
            // so it is also the first minimal one.
            let hits = levels.first_nonempty(g.len(), false)?;
            let w = hits.first().copied();
            let verdict = match (kind, w) {
                (ProblemKind::Find, None) => None,
                _ => Some(w.is_some()),
            };
            (verdict, w, false)
        }
        (ProblemKind::Member(d), Notion::InclusionMinimal) => {
            let mut hit = None;
            levels.minimal(|m| {
                if m.contains(d) {
                    hit = Some(m);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            (Some(hit.is_some()), hit, false)
        }
        (ProblemKind::MemberAll(d), Notion::InclusionMinimal) => {
            let mut any = false;
            let mut counter = None;
            levels.minimal(|m| {
                any = true;
                if m.contains(d) {
                    ControlFlow::Continue(())
                } else {
                    counter = Some(m);
                    ControlFlow::Break(())
                }
            })?;
            (Some(any && counter.is_none()), counter, !any)
        }
        (ProblemKind::Unique, Notion::InclusionMinimal) => {
            let mut seen = Vec::new();
            levels.minimal(|m| {
                seen.push(m);
                if seen.len() > 1 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            let unique = seen.len() == 1;
            (Some(unique), if unique { seen.first().copied() } else { None }, false)
        }
        (_, Notion::MinimumSize) => {
            let min = levels.first_nonempty(g.len(), false)?;
            match *kind {
                ProblemKind::Member(d) => {
                    let w = min.iter().copied().find(|m| m.contains(d));
                    (Some(w.is_some()), w, false)
                }
                ProblemKind::MemberAll(d) => {
                    let counter = min.iter().copied().find(|m| !m.contains(d));
                    (Some(!min.is_empty() && counter.is_none()), counter, min.is_empty())
                }
                ProblemKind::Unique => {
                    let unique = min.len() == 1;
                    (Some(unique), if unique { min.first().copied() } else { None }, false)
                }
                _ => unreachable!("handled above"),
            }
        }
        (ProblemKind::Test(_), _) => unreachable!("handled above"),
    };
    Ok(SolveAnswer { verdict, witness, all_solutions: None, stats: levels.stats(vacuous) })
}

fn decide_test(
    g: &DominanceGraph,
    probe: &Probe,
    dir: Direction,
    notion: Notion,
    m: AltSet,
    budget: &Budget,
) -> Result<SolveAnswer, Error> {
    let started = std::time::Instant::now();
    let mut stats = SearchStats { probe_budget: budget.max_probes, ..Default::default() };
    let verdict = if !covering::is_covering_set(g, m, dir)? {
        false
    } else {
        match notion {
            Notion::InclusionMinimal => {
                let (minimal, probes) = check_minimal(g, m, dir, budget)?;
                stats.subsets_examined = probes;
                minimal
            }
            Notion::MinimumSize => {
                // Minimum-size iff no covering set is strictly smaller.
                let mut levels = Levels::new(g, probe, budget)?;
                let smaller = if m.is_empty() { Vec::new() } else { levels.first_nonempty(m.len() - 1, true)? };
                stats.subsets_examined = levels.scan.meter.probes;
                smaller.is_empty()
            }
        }
    };
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(SolveAnswer { verdict: Some(verdict), witness: None, all_solutions: None, stats })
}

/// Answers the problem from the full family, which is also returned. Slower
/// than [`decide`] (no early exit) but exposes every solution.
pub fn decide_collecting(
    g: &DominanceGraph,
    dir: Direction,
    notion: Notion,
    kind: &ProblemKind,
    budget: &Budget,
) -> Result<SolveAnswer, Error> {
    validate(g, kind)?;
    let started = std::time::Instant::now();
    let probe = Probe::new(g, dir);
    let mut levels = Levels::new(g, &probe, budget)?;
    let fam = match notion {
        Notion::InclusionMinimal => {
            let mut out = Vec::new();
            levels.minimal(|m| {
                out.push(m);
                ControlFlow::Continue(())
            })?;
            out
        }
        Notion::MinimumSize => levels.first_nonempty(g.len(), false)?,
    };
    let mut vacuous = false;
    let (verdict, witness) = match *kind {
        ProblemKind::Size(k) => {
            let w = fam.iter().copied().find(|m| m.len() <= k);
            (Some(w.is_some()), w)
        }
        ProblemKind::Member(d) => {
            let w = fam.iter().copied().find(|m| m.contains(d));
            (Some(w.is_some()), w)
        }
        ProblemKind::MemberAll(d) => {
            vacuous = fam.is_empty();
            let counter = fam.iter().copied().find(|m| !m.contains(d));
            (Some(!fam.is_empty() && counter.is_none()), counter)
        }
        ProblemKind::Unique => {
            let unique = fam.len() == 1;
            (Some(unique), if unique { fam.first().copied() } else { None })
        }
        ProblemKind::Test(m) => (Some(fam.contains(&m)), None),
        ProblemKind::Find => match fam.first() {
            Some(&w) => (Some(true), Some(w)),
            None => (None, None),
        },
        ProblemKind::Exists => (Some(!fam.is_empty()), fam.first().copied()),
    };
    let mut stats = levels.stats(vacuous);
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(SolveAnswer { verdict, witness, all_solutions: Some(fam), stats })
}
