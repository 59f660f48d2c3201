use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::{all_assignments, assignment_bits, brute_force_sat, Assignment};
use crate::budget::Budget;
use crate::cnf::{check_formula_properties, Cnf};
use crate::covering::{self, Direction};
use crate::graph::DominanceGraph;
use crate::reductions::{
    build_downward_conp_graph, build_downward_member_graph, build_downward_wagner_graph, build_upward_conp_graph,
    build_upward_member_graph, build_upward_wagner_graph, ReductionOutput,
};
use crate::search::check_minimal;
use crate::set::AltSet;
use crate::solver::{decide, minimal_covering_sets, minimum_size_covering_sets, Notion, ProblemKind};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    /// Upward coNP graph: a minimal set containing some `e_j` is all of `A`.
    Claim1,
    /// Upward coNP graph: satisfiable iff no minimal set contains an `e_j`.
    Claim2,
    /// Upward coNP graph: unsatisfiable iff the minimal set is unique.
    Claim3,
    /// Upward chain: `d_{2i-1}` is in a minimal set of `B_i` iff `φ_{2i-1}`
    /// is satisfiable and `φ_{2i}` is not.
    Claim4,
    /// Upward chain: every minimal set of `A` restricts to a superset of a
    /// minimal set of each `B_i`.
    Claim5,
    /// Downward coNP graph: `A` is a downward covering set for itself.
    Claim7,
    /// Downward coNP graph: a minimal set containing `d` is all of `A`.
    Claim8,
    /// Downward coNP graph: satisfiable iff no minimal set contains `d`.
    Claim9,
    /// Downward coNP graph: unsatisfiable iff the minimal set is unique.
    Claim10,
    /// Downward chain: every minimal set of `A` restricts to a superset of a
    /// minimal set of each `A_i`.
    Claim11,
    /// Upward member graph: satisfiable iff every minimum-size set has
    /// `2n + 1` alternatives and contains `d`.
    Size2n1,
    /// Upward coNP graph: assignment sets have `2k + 3` alternatives and
    /// nothing minimal is smaller.
    Size2k3,
    /// Downward coNP graph: minimal and minimum-size sets coincide, with
    /// `5k + 2` alternatives when satisfiable.
    Size5k2,
    /// Downward member graph: minimum-size sets have `3n + r + k_min`
    /// alternatives.
    Size3nrk,
    /// Upward chain: odd number of satisfiable formulas iff `d_1` is in some
    /// minimal set; also iff `d_1` is in every minimum-size set.
    ParityUp,
    /// Downward chain: odd number of satisfiable formulas iff `d*` is in
    /// some minimal set.
    ParityDown,
}

impl ClaimId {
    pub const ALL: [ClaimId; 16] = [
        ClaimId::Claim1,
        ClaimId::Claim2,
        ClaimId::Claim3,
        ClaimId::Claim4,
        ClaimId::Claim5,
        ClaimId::ParityUp,
        ClaimId::Claim7,
        ClaimId::Claim8,
        ClaimId::Claim9,
        ClaimId::Claim10,
        ClaimId::Claim11,
        ClaimId::Size2n1,
        ClaimId::Size2k3,
        ClaimId::Size5k2,
        ClaimId::Size3nrk,
        ClaimId::ParityDown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Claim1 => "CLAIM1",
            ClaimId::Claim2 => "CLAIM2",
            ClaimId::Claim3 => "CLAIM3",
            ClaimId::Claim4 => "CLAIM4",
            ClaimId::Claim5 => "CLAIM5",
            ClaimId::ParityUp => "PARITY_UP",
            ClaimId::Claim7 => "CLAIM7",
            ClaimId::Claim8 => "CLAIM8",
            ClaimId::Claim9 => "CLAIM9",
            ClaimId::Claim10 => "CLAIM10",
            ClaimId::Claim11 => "CLAIM11",
            ClaimId::Size2n1 => "SIZE_2N1",
            ClaimId::Size2k3 => "SIZE_2K3",
            ClaimId::Size5k2 => "SIZE_5K2",
            ClaimId::Size3nrk => "SIZE_3NRK",
            ClaimId::ParityDown => "PARITY_DOWN",
        }
    }

    /// Whether the claim takes a chain of formulas rather than one.
    pub fn takes_chain(self) -> bool {
        matches!(self, ClaimId::Claim4 | ClaimId::Claim5 | ClaimId::ParityUp | ClaimId::Claim11 | ClaimId::ParityDown)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        // CLAIM6 is the upward parity statement.
        if s.eq_ignore_ascii_case("CLAIM6") {
            return Ok(ClaimId::ParityUp);
        }
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown claim id {s:?}"))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimInstance {
    Single(Cnf),
    Chain(Vec<Cnf>),
}

impl fmt::Display for ClaimInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimInstance::Single(phi) => write!(f, "{phi} over {} variables", phi.variable_count()),
            ClaimInstance::Chain(fs) => {
                for (j, phi) in fs.iter().enumerate() {
                    if j > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "φ{} = {phi} over {} variables", j + 1, phi.variable_count())?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped-budget")]
    SkippedBudget,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::SkippedBudget => "skipped-budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub description: String,
    /// Offending alternative set, comma-separated in graph order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub instance: String,
    pub verdict: Verdict,
    pub checks: Vec<SubCheck>,
    pub evidence: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl ClaimReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, name: &str) -> Option<&SubCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// CI exit status over a batch: 0 if all pass, 1 if any fail, 2 if nothing
/// failed but something was skipped.
pub fn exit_code(reports: &[ClaimReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::SkippedBudget) {
        2
    } else {
        0
    }
}

struct Ctx<'g> {
    graph: Option<&'g DominanceGraph>,
    checks: Vec<SubCheck>,
    evidence: BTreeMap<String, Value>,
    counterexample: Option<Counterexample>,
}

impl<'g> Ctx<'g> {
    fn new() -> Self {
        Ctx { graph: None, checks: Vec::new(), evidence: BTreeMap::new(), counterexample: None }
    }

    fn fmt(&self, s: AltSet) -> String {
        self.graph.map(|g| g.format_set(s)).unwrap_or_default()
    }

    fn note(&mut self, key: &str, value: Value) {
        self.evidence.insert(key.to_string(), value);
    }

    fn check(&mut self, name: &str, ok: bool, detail: String, offending: Option<AltSet>) {
        if !ok && self.counterexample.is_none() {
            self.counterexample =
                Some(Counterexample { description: format!("{name}: {detail}"), set: offending.map(|s| self.fmt(s)) });
        }
        self.checks.push(SubCheck { name: name.to_string(), verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail });
    }

    /// Unwraps a solver result, turning budget exhaustion into a skipped check.
    fn budgeted<T>(&mut self, name: &str, r: Result<T, Error>) -> Result<Option<T>, Error> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::Budget(e)) => {
                self.checks.push(SubCheck { name: name.to_string(), verdict: Verdict::SkippedBudget, detail: e.to_string() });
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn verdict(&self) -> Verdict {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.checks.iter().any(|c| c.verdict == Verdict::SkippedBudget) {
            Verdict::SkippedBudget
        } else {
            Verdict::Pass
        }
    }
}

fn single(id: ClaimId, inst: &ClaimInstance) -> Result<&Cnf, Error> {
    match inst {
        ClaimInstance::Single(phi) if !id.takes_chain() => Ok(phi),
        _ => Err(Error::InvalidParameter(format!("{id} takes a single formula"))),
    }
}

fn chain(id: ClaimId, inst: &ClaimInstance) -> Result<&[Cnf], Error> {
    match inst {
        ClaimInstance::Chain(fs) if id.takes_chain() => Ok(fs),
        _ => Err(Error::InvalidParameter(format!("{id} takes a list of 2m formulas"))),
    }
}

fn build(id: ClaimId, inst: &ClaimInstance) -> Result<ReductionOutput, Error> {
    Ok(match id {
        ClaimId::Claim1 | ClaimId::Claim2 | ClaimId::Claim3 | ClaimId::Size2k3 => {
            build_upward_conp_graph(single(id, inst)?)?
        }
        ClaimId::Size2n1 => build_upward_member_graph(single(id, inst)?)?,
        ClaimId::Claim7 | ClaimId::Claim8 | ClaimId::Claim9 | ClaimId::Claim10 | ClaimId::Size5k2 => {
            build_downward_conp_graph(single(id, inst)?)?
        }
        ClaimId::Size3nrk => build_downward_member_graph(single(id, inst)?)?,
        ClaimId::Claim4 | ClaimId::Claim5 | ClaimId::ParityUp => build_upward_wagner_graph(chain(id, inst)?)?,
        ClaimId::Claim11 | ClaimId::ParityDown => build_downward_wagner_graph(chain(id, inst)?)?,
    })
}

/// Whether `inst` meets the claim's shape and provisos. Provisos: CLAIM3 and
/// CLAIM10 need at least two models when satisfiable, SIZE_2N1 needs at
/// least two falsified clauses under every non-satisfying assignment,
/// SIZE_3NRK needs at least two clauses. Construction preconditions are
/// checked by building the graph.
pub fn admissible(id: ClaimId, inst: &ClaimInstance) -> Result<(), Error> {
    build(id, inst)?;
    let formulas: Vec<&Cnf> = match inst {
        ClaimInstance::Single(phi) => vec![phi],
        ClaimInstance::Chain(fs) => fs.iter().collect(),
    };
    for phi in formulas {
        let p = check_formula_properties(phi)?;
        match id {
            ClaimId::Claim3 | ClaimId::Claim10 if !p.min_two_models => {
                return Err(Error::InvalidParameter(format!("{id} needs at least two models when satisfiable")));
            }
            ClaimId::Size2n1 if !p.non_models_falsify_two => {
                return Err(Error::InvalidParameter(format!(
                    "{id} needs every non-satisfying assignment to falsify at least two clauses"
                )));
            }
            ClaimId::Size3nrk if phi.clause_count() < 2 => {
                return Err(Error::InvalidParameter(format!("{id} needs at least two clauses")));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Decides one claim on one instance. The formula side comes from
/// [`brute_force_sat`], the covering side from the exact solver; every
/// solver call gets the full `budget`. Exhausting it yields a
/// skipped-budget verdict, not an error.
pub fn verify_claim(id: ClaimId, inst: &ClaimInstance, budget: &Budget) -> Result<ClaimReport, Error> {
    let started = Instant::now();
    admissible(id, inst)?;
    let out = build(id, inst)?;
    let mut ctx = Ctx::new();
    ctx.graph = Some(&out.graph);
    ctx.note("alternatives", json!(out.graph.len()));
    match inst {
        ClaimInstance::Single(phi) => {
            let models = brute_force_sat(phi)?;
            ctx.note("satisfiable", json!(!models.is_empty()));
            ctx.note("models", json!(models.len()));
            single_claim(id, &mut ctx, &out, phi, &models, budget)?;
        }
        ClaimInstance::Chain(fs) => {
            let sat = fs.iter().map(|f| brute_force_sat(f).map(|m| !m.is_empty())).collect::<Result<Vec<_>, _>>()?;
            ctx.note("satisfiable", json!(sat));
            chain_claim(id, &mut ctx, &out, fs, &sat, budget)?;
        }
    }
    Ok(ClaimReport {
        claim: id,
        instance: inst.to_string(),
        verdict: ctx.verdict(),
        checks: ctx.checks,
        evidence: ctx.evidence,
        counterexample: ctx.counterexample,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

fn indexed_roles(out: &ReductionOutput, stem: &str, count: usize, suffix: &str) -> Result<AltSet, Error> {
    let mut s = AltSet::EMPTY;
    for j in 1..=count {
        s.insert(out.role(&format!("{stem}_{j}{suffix}"))?);
    }
    Ok(s)
}

/// `{a_1, a_2, a_3}` plus `u_i, up_i` for true and `ub_i, ubp_i` for false variables.
fn cons1_assignment_set(out: &ReductionOutput, alpha: &[bool], suffix: &str) -> Result<AltSet, Error> {
    let mut s = indexed_roles(out, "a", 3, suffix)?;
    for (i, &v) in alpha.iter().enumerate() {
        let pair: [&str; 2] = if v { ["u", "up"] } else { ["ub", "ubp"] };
        for stem in pair {
            s.insert(out.role(&format!("{stem}_{}{suffix}", i + 1))?);
        }
    }
    Ok(s)
}

/// `x_i, xp_i` for true and `xb_i, xbp_i` for false variables.
fn thm3_literal_set(out: &ReductionOutput, alpha: &[bool], suffix: &str) -> Result<AltSet, Error> {
    let mut s = AltSet::EMPTY;
    for (i, &v) in alpha.iter().enumerate() {
        let pair: [&str; 2] = if v { ["x", "xp"] } else { ["xb", "xbp"] };
        for stem in pair {
            s.insert(out.role(&format!("{stem}_{}{suffix}", i + 1))?);
        }
    }
    Ok(s)
}

fn single_claim(
    id: ClaimId,
    ctx: &mut Ctx,
    out: &ReductionOutput,
    phi: &Cnf,
    models: &[Assignment],
    budget: &Budget,
) -> Result<(), Error> {
    let g = &out.graph;
    let sat = !models.is_empty();
    let k = phi.variable_count();
    let l = phi.clause_count();
    match id {
        ClaimId::Claim1 | ClaimId::Claim2 | ClaimId::Claim3 | ClaimId::Size2k3 => {
            let Some(fam) = ctx.budgeted("minimal upward sets", minimal_covering_sets(g, Direction::Upward, budget))?
            else {
                return Ok(());
            };
            ctx.note("minimal_sets", json!(fam.len()));
            let es = indexed_roles(out, "e", l, "")?;
            match id {
                ClaimId::Claim1 => {
                    let bad = fam.iter().copied().find(|m| !m.is_disjoint(es) && *m != g.all());
                    let with_e = fam.iter().filter(|m| !m.is_disjoint(es)).count();
                    ctx.check(
                        "minimal sets containing some e_j equal A",
                        bad.is_none(),
                        format!("{with_e} of {} minimal sets contain some e_j", fam.len()),
                        bad,
                    );
                }
                ClaimId::Claim2 => {
                    let with_e = fam.iter().copied().find(|m| !m.is_disjoint(es));
                    ctx.check(
                        "satisfiable iff no minimal set contains an e_j",
                        sat == with_e.is_none(),
                        format!(
                            "formula {}, {}",
                            if sat { "satisfiable" } else { "unsatisfiable" },
                            if with_e.is_some() { "some minimal set contains an e_j" } else { "no minimal set contains an e_j" }
                        ),
                        with_e,
                    );
                }
                ClaimId::Claim3 => {
                    ctx.check(
                        "unsatisfiable iff unique minimal set",
                        !sat == (fam.len() == 1),
                        format!("formula {}, {} minimal sets", if sat { "satisfiable" } else { "unsatisfiable" }, fam.len()),
                        fam.first().copied(),
                    );
                }
                _ => {
                    let target = 2 * k + 3;
                    let mut bad = None;
                    for alpha in models {
                        let b = cons1_assignment_set(out, alpha, "")?;
                        if !fam.contains(&b) || b.len() != target {
                            bad = Some(b);
                            break;
                        }
                    }
                    ctx.check(
                        "assignment sets are minimal with 2k+3 alternatives",
                        bad.is_none(),
                        format!("{} satisfying assignments, 2k+3 = {target}", models.len()),
                        bad,
                    );
                    if sat {
                        let smallest = fam.iter().map(|m| m.len()).min().unwrap_or(0);
                        let witness = fam.iter().copied().find(|m| m.len() == smallest);
                        ctx.check(
                            "no minimal set smaller than 2k+3",
                            smallest == target,
                            format!("smallest minimal set has {smallest} alternatives"),
                            witness,
                        );
                    }
                }
            }
        }
        ClaimId::Size2n1 => {
            let Some(mins) = ctx.budgeted("minimum-size upward sets", minimum_size_covering_sets(g, Direction::Upward, budget))?
            else {
                return Ok(());
            };
            let d = out.role("d")?;
            let target = 2 * k + 1;
            let bad = mins.iter().copied().find(|m| m.len() != target || !m.contains(d));
            ctx.note("minimum_size", json!(mins.first().map_or(0, |m| m.len())));
            ctx.note("minimum_size_sets", json!(mins.len()));
            ctx.check(
                "satisfiable iff every minimum-size set has 2n+1 alternatives and contains d",
                sat == bad.is_none(),
                format!(
                    "formula {}, 2n+1 = {target}, {} minimum-size sets, {}",
                    if sat { "satisfiable" } else { "unsatisfiable" },
                    mins.len(),
                    match bad {
                        Some(m) => format!("one of size {} {} d", m.len(), if m.contains(d) { "with" } else { "without" }),
                        None => "all of size 2n+1 with d".into(),
                    }
                ),
                bad,
            );
        }
        ClaimId::Claim7 => {
            let ok = covering::is_covering_set(g, g.all(), Direction::Downward)?;
            ctx.check("A is a downward covering set for itself", ok, format!("|A| = {}", g.len()), Some(g.all()));
        }
        ClaimId::Claim8 | ClaimId::Claim9 | ClaimId::Claim10 | ClaimId::Size5k2 => {
            let Some(fam) = ctx.budgeted("minimal downward sets", minimal_covering_sets(g, Direction::Downward, budget))?
            else {
                return Ok(());
            };
            ctx.note("minimal_sets", json!(fam.len()));
            let d = out.role("d")?;
            match id {
                ClaimId::Claim8 => {
                    let bad = fam.iter().copied().find(|m| m.contains(d) && *m != g.all());
                    ctx.check(
                        "minimal sets containing d equal A",
                        bad.is_none(),
                        format!("{} of {} minimal sets contain d", fam.iter().filter(|m| m.contains(d)).count(), fam.len()),
                        bad,
                    );
                }
                ClaimId::Claim9 => {
                    let with_d = fam.iter().copied().find(|m| m.contains(d));
                    ctx.check(
                        "satisfiable iff no minimal set contains d",
                        sat == with_d.is_none(),
                        format!(
                            "formula {}, {}",
                            if sat { "satisfiable" } else { "unsatisfiable" },
                            if with_d.is_some() { "some minimal set contains d" } else { "no minimal set contains d" }
                        ),
                        with_d,
                    );
                }
                ClaimId::Claim10 => {
                    ctx.check(
                        "unsatisfiable iff unique minimal set",
                        !sat == (fam.len() == 1),
                        format!("formula {}, {} minimal sets", if sat { "satisfiable" } else { "unsatisfiable" }, fam.len()),
                        fam.first().copied(),
                    );
                }
                _ => {
                    let Some(mins) =
                        ctx.budgeted("minimum-size downward sets", minimum_size_covering_sets(g, Direction::Downward, budget))?
                    else {
                        return Ok(());
                    };
                    let extra = fam.iter().copied().find(|m| !mins.contains(m));
                    ctx.check(
                        "minimal sets are exactly the minimum-size sets",
                        extra.is_none() && mins.len() == fam.len(),
                        format!("{} minimal, {} minimum-size", fam.len(), mins.len()),
                        extra,
                    );
                    if sat {
                        let target = 5 * k + 2;
                        let bad = fam.iter().copied().find(|m| m.len() != target);
                        ctx.check(
                            "minimal sets have 5k+2 alternatives",
                            bad.is_none(),
                            format!("5k+2 = {target}"),
                            bad,
                        );
                    }
                }
            }
        }
        ClaimId::Size3nrk => {
            let r = l;
            let k_min = all_assignments(k)
                .map(|a| {
                    let bits = assignment_bits(&a);
                    if phi.is_satisfied_by(bits) {
                        r + 1
                    } else {
                        r - phi.falsified_clauses(bits)
                    }
                })
                .min()
                .unwrap_or(r + 1);
            let target = 3 * k + r + k_min;
            ctx.note("k_min", json!(k_min));
            let Some(mins) =
                ctx.budgeted("minimum-size downward sets", minimum_size_covering_sets(g, Direction::Downward, budget))?
            else {
                return Ok(());
            };
            ctx.note("minimum_size", json!(mins.first().map_or(0, |m| m.len())));
            let bad = mins.iter().copied().find(|m| m.len() != target);
            ctx.check(
                "minimum-size sets have 3n+r+k_min alternatives",
                !mins.is_empty() && bad.is_none(),
                format!("3n+r+k_min = {target}, found {} sets of size {}", mins.len(), mins.first().map_or(0, |m| m.len())),
                bad,
            );
        }
        _ => unreachable!("chain claims are dispatched separately"),
    }
    Ok(())
}

/// Lifts a family of sets over an induced subgraph back to the full graph.
fn lift(family: &[AltSet], map: &[usize]) -> Vec<AltSet> {
    family.iter().map(|s| s.iter().map(|j| map[j]).collect()).collect()
}

fn minimal_on(g: &DominanceGraph, keep: AltSet, dir: Direction, budget: &Budget) -> Result<Vec<AltSet>, Error> {
    let (sub, map) = g.induced(keep)?;
    Ok(lift(&minimal_covering_sets(&sub, dir, budget)?, &map))
}

fn first_model(phi: &Cnf) -> Result<Option<Assignment>, Error> {
    Ok(brute_force_sat(phi)?.into_iter().next())
}

fn chain_claim(
    id: ClaimId,
    ctx: &mut Ctx,
    out: &ReductionOutput,
    fs: &[Cnf],
    sat: &[bool],
    budget: &Budget,
) -> Result<(), Error> {
    let g = &out.graph;
    let m = fs.len() / 2;
    let count = sat.iter().filter(|&&s| s).count();
    let odd = count % 2 == 1;
    ctx.note("satisfiable_count", json!(count));
    match id {
        ClaimId::Claim4 => {
            for i in 1..=m {
                let keep = out.component(2 * i - 1) | out.component(2 * i);
                let (sub, map) = g.induced(keep)?;
                let d = out.role(&format!("d_{}", 2 * i - 1))?;
                let local = map.iter().position(|&x| x == d).expect("d lies in its component");
                let name = format!("B_{i}: d_{} in some minimal set iff φ{} sat and φ{} unsat", 2 * i - 1, 2 * i - 1, 2 * i);
                let ans = decide(&sub, Direction::Upward, Notion::InclusionMinimal, &ProblemKind::Member(local), budget);
                let Some(ans) = ctx.budgeted(&name, ans)? else { continue };
                let member = ans.verdict == Some(true);
                let expected = sat[2 * i - 2] && !sat[2 * i - 1];
                let witness = ans.witness.map(|w| lift(&[w], &map)[0]);
                ctx.check(&name, member == expected, format!("member = {member}, expected {expected}"), witness);
            }
        }
        ClaimId::Claim5 | ClaimId::Claim11 => {
            let dir = if id == ClaimId::Claim5 { Direction::Upward } else { Direction::Downward };
            let parts: Vec<(String, AltSet)> = if id == ClaimId::Claim5 {
                (1..=m).map(|i| (format!("B_{i}"), out.component(2 * i - 1) | out.component(2 * i))).collect()
            } else {
                (1..=2 * m).map(|i| (format!("A_{i}"), out.component(i))).collect()
            };
            let Some(fam) = ctx.budgeted("minimal sets of A", minimal_covering_sets(g, dir, budget))? else {
                return Ok(());
            };
            ctx.note("minimal_sets", json!(fam.len()));
            for (label, keep) in parts {
                let name = format!("every minimal set of A contains a minimal set of {label}");
                let Some(local) = ctx.budgeted(&name, minimal_on(g, keep, dir, budget))? else { continue };
                let bad = fam.iter().copied().find(|s| !local.iter().any(|n| n.is_subset(*s)));
                ctx.check(&name, bad.is_none(), format!("{} minimal sets of {label}", local.len()), bad);
            }
        }
        ClaimId::ParityUp => parity_up(ctx, out, fs, sat, odd, budget)?,
        ClaimId::ParityDown => parity_down(ctx, out, fs, sat, odd, budget)?,
        _ => unreachable!("single-formula claims are dispatched separately"),
    }
    Ok(())
}

/// Builds the odd-parity witness pair by pair and verifies it; for even
/// parity searches for a minimal set containing `d_1`. Either way also
/// compares membership of `d_1` in all minimum-size sets with the parity.
fn parity_up(ctx: &mut Ctx, out: &ReductionOutput, fs: &[Cnf], sat: &[bool], odd: bool, budget: &Budget) -> Result<(), Error> {
    let g = &out.graph;
    let m = fs.len() / 2;
    let d1 = out.role("d_1")?;
    if odd {
        // φ_1 .. φ_{2i-1} satisfiable, the rest not.
        let i = (sat.iter().filter(|&&s| s).count() + 1) / 2;
        let mut w = AltSet::EMPTY;
        for j in 1..=m {
            let (odd_pos, even_pos) = (2 * j - 1, 2 * j);
            let (so, se) = (format!("_{odd_pos}"), format!("_{even_pos}"));
            if j <= i {
                let alpha = first_model(&fs[odd_pos - 1])?.expect("satisfiable by the chain order");
                w = w | thm3_literal_set(out, &alpha, &so)?;
                w.insert(out.role(&format!("d_{odd_pos}"))?);
            } else {
                let alpha = vec![false; fs[odd_pos - 1].variable_count()];
                w = w | thm3_literal_set(out, &alpha, &so)?;
                let bits = assignment_bits(&alpha);
                for (c, clause) in fs[odd_pos - 1].clauses().iter().enumerate() {
                    if !clause.iter().any(|l| l.eval(bits)) {
                        w.insert(out.role(&format!("y_{}{so}", c + 1))?);
                    }
                }
            }
            if j < i {
                let alpha = first_model(&fs[even_pos - 1])?.expect("satisfiable by the chain order");
                w = w | cons1_assignment_set(out, &alpha, &se)?;
            } else {
                w = w | out.component(even_pos);
            }
        }
        ctx.note("witness", json!(g.format_set(w)));
        ctx.note("witness_size", json!(w.len()));
        let covering = covering::is_covering_set(g, w, Direction::Upward)?;
        ctx.check("witness is an upward covering set", covering, format!("|M| = {}", w.len()), Some(w));
        ctx.check("witness contains d_1", w.contains(d1), String::new(), Some(w));
        if covering {
            let r = check_minimal(g, w, Direction::Upward, budget).map_err(Error::from);
            if let Some((minimal, probes)) = ctx.budgeted("witness is minimal", r)? {
                ctx.check("witness is minimal", minimal, format!("{probes} subsets probed"), Some(w));
            }
        }
    } else {
        let name = "no minimal upward set contains d_1";
        let ans = decide(g, Direction::Upward, Notion::InclusionMinimal, &ProblemKind::Member(d1), budget);
        if let Some(ans) = ctx.budgeted(name, ans)? {
            ctx.check(name, ans.verdict == Some(false), format!("{} subsets probed", ans.stats.subsets_examined), ans.witness);
        }
    }
    let name = "d_1 in every minimum-size set iff parity odd";
    let ans = decide(g, Direction::Upward, Notion::MinimumSize, &ProblemKind::MemberAll(d1), budget);
    if let Some(ans) = ctx.budgeted(name, ans)? {
        let all = ans.verdict == Some(true);
        ctx.check(
            name,
            all == odd,
            format!(
                "d_1 in all minimum-size sets = {all}, parity {}{}",
                if odd { "odd" } else { "even" },
                ans.witness.map(|w| format!(", minimum-size set of size {} without d_1", w.len())).unwrap_or_default()
            ),
            ans.witness,
        );
    }
    Ok(())
}

/// Odd parity: assembles `∪ M_i ∪ {s_i, t_i} ∪ {r_j, c*, d*}` from minimal
/// sets of the components chosen so that `d_i ∈ M_i` exactly when `i` is
/// odd and `φ_i` satisfiable or `i` is even and `φ_i` unsatisfiable, then
/// verifies it. Even parity: searches for a minimal set containing `d*`.
fn parity_down(ctx: &mut Ctx, out: &ReductionOutput, fs: &[Cnf], sat: &[bool], odd: bool, budget: &Budget) -> Result<(), Error> {
    let g = &out.graph;
    let m = fs.len() / 2;
    let dstar = out.role("d_star")?;
    let expected = (1..=2 * m).map(|i| out.component(i).len()).sum::<usize>() + 3 * m + 2;
    ctx.check(
        "|A| = sum of |A_i| + 3m + 2",
        g.len() == expected,
        format!("|A| = {}, expected {expected}", g.len()),
        None,
    );
    let inside = (1..=2 * m).fold(AltSet::EMPTY, |acc, i| acc | out.component(i));
    let connective = g.edges().filter(|&(x, y)| !(inside.contains(x) && inside.contains(y))).count();
    ctx.check(
        "connective edges number 7m + 1",
        connective == 7 * m + 1,
        format!("{connective} edges leave or join the components"),
        None,
    );
    if !odd {
        let name = "no minimal downward set contains d*";
        let ans = decide(g, Direction::Downward, Notion::InclusionMinimal, &ProblemKind::Member(dstar), budget);
        if let Some(ans) = ctx.budgeted(name, ans)? {
            ctx.check(name, ans.verdict == Some(false), format!("{} subsets probed", ans.stats.subsets_examined), ans.witness);
        }
        return Ok(());
    }
    let j = (sat.iter().filter(|&&s| s).count() + 1) / 2;
    let mut w = out.roles(["c_star", "d_star"])?;
    w.insert(out.role(&format!("r_{j}"))?);
    for i in 1..=m {
        w.insert(out.role(&format!("s_{i}"))?);
        w.insert(out.role(&format!("t_{i}"))?);
    }
    for i in 1..=2 * m {
        let want_d = if i % 2 == 1 { sat[i - 1] } else { !sat[i - 1] };
        let di = out.role(&format!("d_{i}"))?;
        let name = format!("A_{i} has a minimal set with d_{i} {}", if want_d { "in" } else { "out" });
        let Some(fam) = ctx.budgeted(&name, minimal_on(g, out.component(i), Direction::Downward, budget))? else {
            return Ok(());
        };
        match fam.iter().copied().find(|s| s.contains(di) == want_d) {
            Some(mi) => w = w | mi,
            None => {
                ctx.check(&name, false, format!("{} minimal sets of A_{i}", fam.len()), None);
                return Ok(());
            }
        }
    }
    ctx.note("witness", json!(g.format_set(w)));
    ctx.note("witness_size", json!(w.len()));
    let covering = covering::is_covering_set(g, w, Direction::Downward)?;
    ctx.check("witness is a downward covering set", covering, format!("|M| = {}", w.len()), Some(w));
    ctx.check("witness contains d*", w.contains(dstar), String::new(), Some(w));
    if covering {
        let r = check_minimal(g, w, Direction::Downward, budget).map_err(Error::from);
        if let Some((minimal, probes)) = ctx.budgeted("witness is minimal", r)? {
            ctx.check("witness is minimal", minimal, format!("{probes} subsets probed"), Some(w));
        }
    }
    Ok(())
}
