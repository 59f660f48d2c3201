//! CNF formulas, DIMACS I/O, and the formula-shaping helpers the Wagner
//! constructions need.

use std::fmt;

use thiserror::Error;

/// Formulas the exhaustive assignment scans will accept.
pub const MAX_SCAN_VARIABLES: usize = 24;

/// A signed variable index: `+i` is `w_i`, `-i` is `¬w_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(i32);

impl Literal {
    pub fn new(value: i32) -> Option<Self> {
        (value != 0).then_some(Literal(value))
    }

    pub fn pos(var: usize) -> Self {
        Literal(var as i32)
    }

    pub fn neg(var: usize) -> Self {
        Literal(-(var as i32))
    }

    /// 1-based variable index.
    pub fn var(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn negated(self) -> Self {
        Literal(-self.0)
    }

    /// Truth under an assignment whose bit `i - 1` is the value of `w_i`.
    pub fn eval(self, assignment: u64) -> bool {
        (assignment >> (self.var() - 1) & 1 == 1) == self.is_positive()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("clause {clause}: literal {literal} is outside 1..={variables}")]
    OutOfRange { clause: usize, literal: i32, variables: usize },
    #[error("clause {clause} is tautological (contains w{var} and its negation)")]
    Tautology { clause: usize, var: usize },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("formula has {variables} variables; exhaustive scans allow at most {limit}")]
    TooManyVariables { variables: usize, limit: usize },
}

/// A formula in conjunctive normal form. Clauses keep their order; literals
/// inside a clause are deduplicated and sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf {
    variable_count: usize,
    clauses: Vec<Vec<Literal>>,
}

fn canonical_clause(index: usize, lits: &[i32], variables: usize, allow_empty: bool) -> Result<Vec<Literal>, CnfError> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for &v in lits {
        let lit = Literal::new(v).ok_or_else(|| CnfError::OutOfRange { clause: index, literal: v, variables })?;
        if lit.var() > variables {
            return Err(CnfError::OutOfRange { clause: index, literal: v, variables });
        }
        out.push(lit);
    }
    out.sort_by_key(|l| (l.var(), !l.is_positive()));
    out.dedup();
    if let Some(w) = out.windows(2).find(|w| w[0].var() == w[1].var()) {
        return Err(CnfError::Tautology { clause: index, var: w[0].var() });
    }
    if out.is_empty() && !allow_empty {
        return Err(CnfError::EmptyClause { clause: index });
    }
    Ok(out)
}

impl Cnf {
    /// Validates and canonicalises. Clause numbers in errors are 1-based.
    pub fn new(variable_count: usize, clauses: &[Vec<i32>], allow_empty: bool) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .enumerate()
            .map(|(j, c)| canonical_clause(j + 1, c, variable_count, allow_empty))
            .collect::<Result<_, _>>()?;
        Ok(Cnf { variable_count, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    /// Sign of variable `var` in clause `j`, if it occurs there.
    pub fn occurrence(&self, j: usize, var: usize) -> Option<bool> {
        self.clauses[j].iter().find(|l| l.var() == var).map(|l| l.is_positive())
    }

    pub fn falsified_clauses(&self, assignment: u64) -> usize {
        self.clauses.iter().filter(|c| !c.iter().any(|l| l.eval(assignment))).count()
    }

    pub fn is_satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }

    pub(crate) fn check_scan_size(&self) -> Result<(), CnfError> {
        if self.variable_count > MAX_SCAN_VARIABLES {
            return Err(CnfError::TooManyVariables { variables: self.variable_count, limit: MAX_SCAN_VARIABLES });
        }
        Ok(())
    }

    fn from_canonical(variable_count: usize, clauses: Vec<Vec<Literal>>) -> Self {
        Cnf { variable_count, clauses }
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("⊤");
        }
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" ∧ ")?;
            }
            f.write_str("(")?;
            if c.is_empty() {
                f.write_str("⊥")?;
            }
            for (i, l) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ∨ ")?;
                }
                if !l.is_positive() {
                    f.write_str("¬")?;
                }
                write!(f, "w{}", l.var())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF. Clauses may span lines; the header's clause count
/// must match the number of clauses read.
pub fn parse_dimacs(text: &str, allow_empty: bool) -> Result<Cnf, CnfError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        last_line = line_no;
        if line.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Syntax { line: line_no, message: "duplicate problem line".into() });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || CnfError::Syntax { line: line_no, message: "expected `p cnf <vars> <clauses>`".into() };
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad());
            }
            let vars = parts[2].parse().map_err(|_| bad())?;
            let count = parts[3].parse().map_err(|_| bad())?;
            header = Some((vars, count, line_no));
            continue;
        }
        if header.is_none() {
            return Err(CnfError::Syntax { line: line_no, message: "clause before problem line".into() });
        }
        for tok in line.split_whitespace() {
            let v: i32 = tok.parse().map_err(|_| CnfError::Syntax {
                line: line_no,
                message: format!("expected an integer literal, found {tok:?}"),
            })?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(v);
            }
        }
    }
    let (vars, count, header_line) =
        header.ok_or(CnfError::Syntax { line: 1, message: "missing problem line".into() })?;
    if !current.is_empty() {
        return Err(CnfError::Syntax { line: last_line, message: "last clause is not terminated by 0".into() });
    }
    if clauses.len() != count {
        return Err(CnfError::Syntax {
            line: header_line,
            message: format!("header declares {count} clauses, found {}", clauses.len()),
        });
    }
    Cnf::new(vars, &clauses, allow_empty)
}

/// Which formula-shaping properties to enforce.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeFlags {
    /// Unsatisfiable formulas falsify at least two clauses under every assignment.
    pub min_two_unsat: bool,
    /// Satisfiable formulas have at least two models.
    pub min_two_models: bool,
    /// Variable 1 is missing from at least one clause.
    pub first_var_free: bool,
}

impl NormalizeFlags {
    pub const ALL: NormalizeFlags = NormalizeFlags { min_two_unsat: true, min_two_models: true, first_var_free: true };
}

/// Result of an exhaustive assignment scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaProperties {
    pub satisfiable: bool,
    pub model_count: u64,
    /// Fewest clauses falsified by any assignment (0 iff satisfiable).
    pub min_falsified: usize,
    /// Vacuously true for satisfiable formulas.
    pub min_two_unsat: bool,
    /// Every assignment that is not a model falsifies at least two clauses.
    pub non_models_falsify_two: bool,
    /// Vacuously true for unsatisfiable formulas.
    pub min_two_models: bool,
    pub first_var_free: bool,
}

pub fn check_formula_properties(phi: &Cnf) -> Result<FormulaProperties, CnfError> {
    phi.check_scan_size()?;
    let mut models = 0u64;
    let mut min_falsified = usize::MAX;
    let mut non_models_falsify_two = true;
    for a in 0..1u64 << phi.variable_count {
        let f = phi.falsified_clauses(a);
        min_falsified = min_falsified.min(f);
        if f == 0 {
            models += 1;
        }
        non_models_falsify_two &= f != 1;
    }
    let satisfiable = models > 0;
    Ok(FormulaProperties {
        satisfiable,
        model_count: models,
        min_falsified,
        min_two_unsat: satisfiable || min_falsified >= 2,
        non_models_falsify_two,
        min_two_models: !satisfiable || models >= 2,
        first_var_free: phi.variable_count >= 1 && phi.clauses.iter().any(|c| c.iter().all(|l| l.var() != 1)),
    })
}

fn shift_variables(phi: &Cnf) -> Cnf {
    let clauses = phi
        .clauses
        .iter()
        .map(|c| c.iter().map(|l| Literal(l.0 + l.0.signum())).collect())
        .collect();
    Cnf::from_canonical(phi.variable_count + 1, clauses)
}

/// Returns a satisfiability-equivalent formula with the requested
/// properties. Each step runs only if its property is currently missing, so
/// compliant formulas come back unchanged. Formulas too large to scan are
/// transformed unconditionally.
///
/// * `first_var_free`: a fresh variable 1 occurring in no clause (a formula
///   without clauses also gets a unit clause on a further fresh variable, so
///   that some clause exists to omit it).
/// * `min_two_unsat`: every clause is duplicated.
/// * `min_two_models`: a fresh variable occurring in no clause is appended.
pub fn normalize_formula(phi: &Cnf, require: NormalizeFlags) -> Cnf {
    let props = |f: &Cnf| check_formula_properties(f).ok();
    let mut out = phi.clone();
    if require.first_var_free && !props(&out).map_or(false, |p| p.first_var_free) {
        out = shift_variables(&out);
        if out.clauses.is_empty() {
            out.variable_count += 1;
            out.clauses.push(vec![Literal::pos(out.variable_count)]);
        }
    }
    if require.min_two_unsat && !props(&out).map_or(false, |p| p.min_two_unsat) {
        let dup = out.clauses.clone();
        out.clauses.extend(dup);
    }
    if require.min_two_models && !props(&out).map_or(false, |p| p.min_two_models) {
        out.variable_count += 1;
    }
    out
}
