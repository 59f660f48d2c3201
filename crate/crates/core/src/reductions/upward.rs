use super::{check_chain, check_size, reject_empty_clauses, Builder, ConstructionId, FormulaProperty, Namer, ReductionError, ReductionOutput};
use crate::cnf::{check_formula_properties, Cnf};

pub(crate) fn thm3_size(phi: &Cnf) -> usize {
    4 * phi.variable_count() + phi.clause_count() + 1
}

pub(crate) fn cons1_size(phi: &Cnf) -> usize {
    4 * phi.variable_count() + 2 * phi.clause_count() + 3
}

fn thm3_into(b: &mut Builder, at: Namer, phi: &Cnf) {
    let n = phi.variable_count();
    let mut lits = Vec::with_capacity(n);
    for i in 1..=n {
        let x = b.alt(at, "x", Some(i));
        let xb = b.alt(at, "xb", Some(i));
        let xp = b.alt(at, "xp", Some(i));
        let xbp = b.alt(at, "xbp", Some(i));
        b.cycle(&[&x, &xb, &xp, &xbp]);
        lits.push((x, xb));
    }
    let d = b.alt(at, "d", None);
    for (j, clause) in phi.clauses().iter().enumerate() {
        let y = b.alt(at, "y", Some(j + 1));
        for l in clause {
            let (x, xb) = &lits[l.var() - 1];
            b.edge(if l.is_positive() { x } else { xb }, &y);
        }
        b.edge(&y, &d);
    }
}

fn cons1_into(b: &mut Builder, at: Namer, phi: &Cnf) {
    let k = phi.variable_count();
    let mut vars = Vec::with_capacity(k);
    for i in 1..=k {
        let u = b.alt(at, "u", Some(i));
        let ub = b.alt(at, "ub", Some(i));
        let up = b.alt(at, "up", Some(i));
        let ubp = b.alt(at, "ubp", Some(i));
        b.cycle(&[&u, &ub, &up, &ubp]);
        vars.push([u, ub, up, ubp]);
    }
    let a: Vec<String> = (1..=3).map(|i| b.alt(at, "a", Some(i))).collect();
    b.cycle(&[&a[0], &a[1], &a[2]]);
    for j in 0..phi.clause_count() {
        let e = b.alt(at, "e", Some(j + 1));
        let ep = b.alt(at, "ep", Some(j + 1));
        for (i, [u, ub, up, ubp]) in vars.iter().enumerate() {
            match phi.occurrence(j, i + 1) {
                Some(true) => {
                    for t in [&e, &ep] {
                        b.edge(u, t);
                        b.edge(t, ub);
                    }
                }
                Some(false) => {
                    for t in [&e, &ep] {
                        b.edge(ub, t);
                        b.edge(t, u);
                    }
                }
                None => {
                    b.edge(&e, up);
                    b.edge(&ep, ubp);
                }
            }
        }
        b.edge(&a[0], &e);
        b.edge(&a[0], &ep);
    }
}

/// The graph for deciding whether `d` lies in some minimal upward covering
/// set: a 4-cycle `x_i > xb_i > xp_i > xbp_i > x_i` per variable, a literal
/// alternative dominating `y_j` for each literal of clause `j`, and
/// `y_j > d`. `4n + r + 1` alternatives.
pub fn build_upward_member_graph(phi: &Cnf) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Thm3;
    reject_empty_clauses(id, phi)?;
    check_size(id, thm3_size(phi))?;
    let mut b = Builder::default();
    thm3_into(&mut b, Namer::PLAIN, phi);
    b.finish(id, Vec::new())
}

/// The upward graph whose minimal covering sets avoid every `e_j` exactly
/// when the formula is satisfiable. `4k + 2l + 3` alternatives.
pub fn build_upward_conp_graph(phi: &Cnf) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Cons1;
    reject_empty_clauses(id, phi)?;
    check_size(id, cons1_size(phi))?;
    let mut b = Builder::default();
    cons1_into(&mut b, Namer::PLAIN, phi);
    b.finish(id, Vec::new())
}

/// Chains `2m` formulas: member graphs at odd positions, coNP graphs at even
/// positions. `up1_{2i}` and `ubp1_{2i}` dominate `d{2i-1}`, and for
/// `i ≥ 2`, `d{2i-1}` dominates all of `A_{2i-2}`.
///
/// Every formula must falsify at least two clauses under each assignment if
/// unsatisfiable, have at least two models if satisfiable, and leave its
/// first variable out of some clause; satisfiability must be monotone along
/// the list. See [`crate::cnf::normalize_formula`].
pub fn build_upward_wagner_graph(formulas: &[Cnf]) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Cons3;
    check_chain(id, formulas)?;
    for (j, phi) in formulas.iter().enumerate() {
        reject_empty_clauses(id, phi)?;
        let p = check_formula_properties(phi)?;
        let failed = if !p.min_two_unsat {
            Some(FormulaProperty::MinTwoUnsat)
        } else if !p.min_two_models {
            Some(FormulaProperty::MinTwoModels)
        } else if !p.first_var_free {
            Some(FormulaProperty::FirstVarFree)
        } else {
            None
        };
        if let Some(property) = failed {
            return Err(ReductionError::PropertyViolation { formula: j + 1, property });
        }
    }
    let size: usize = formulas
        .iter()
        .enumerate()
        .map(|(j, phi)| if j % 2 == 0 { thm3_size(phi) } else { cons1_size(phi) })
        .sum();
    check_size(id, size)?;

    let mut b = Builder::default();
    let mut components = Vec::with_capacity(formulas.len());
    for (j, phi) in formulas.iter().enumerate() {
        let pos = j + 1;
        let mark = b.mark();
        if pos % 2 == 1 {
            thm3_into(&mut b, Namer::at(pos), phi);
        } else {
            cons1_into(&mut b, Namer::at(pos), phi);
        }
        components.push(b.names_since(mark));
    }
    let m = formulas.len() / 2;
    for i in 1..=m {
        let d = Namer::at(2 * i - 1).name("d", None);
        b.edge(&Namer::at(2 * i).name("up", Some(1)), &d);
        b.edge(&Namer::at(2 * i).name("ubp", Some(1)), &d);
        if i >= 2 {
            for z in &components[2 * i - 3] {
                b.edge(&d, z);
            }
        }
    }
    b.finish(id, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::AltSet;

    fn fig1() -> Cnf {
        Cnf::new(3, &[vec![1, -2, 3], vec![-1, -3]], false).unwrap()
    }

    #[test]
    fn thm3_counts() {
        let out = build_upward_member_graph(&fig1()).unwrap();
        assert_eq!(out.graph.len(), 15);
        assert_eq!(out.graph.edge_count(), 19);
        let d = out.role("d").unwrap();
        let ys = out.roles(["y_1", "y_2"]).unwrap();
        assert_eq!(out.graph.dominators(d, out.graph.all()).unwrap(), ys);
    }

    #[test]
    fn cons1_literal_patterns() {
        // (¬w1 ∨ w2) ∧ (w1 ∨ ¬w3)
        let phi = Cnf::new(3, &[vec![-1, 2], vec![1, -3]], false).unwrap();
        let out = build_upward_conp_graph(&phi).unwrap();
        let g = &out.graph;
        assert_eq!(g.len(), 19);
        let r = |s: &str| out.role(s).unwrap();
        // negative occurrence of w1 in clause 1
        assert!(g.dominates(r("ub_1"), r("e_1")) && g.dominates(r("ep_1"), r("u_1")));
        // positive occurrence of w2 in clause 1
        assert!(g.dominates(r("u_2"), r("ep_1")) && g.dominates(r("e_1"), r("ub_2")));
        // w3 absent from clause 1
        assert!(g.dominates(r("e_1"), r("up_3")) && g.dominates(r("ep_1"), r("ubp_3")));
        assert_eq!(g.undominated(), AltSet::EMPTY);
    }

    #[test]
    fn empty_clause_rejected() {
        let phi = Cnf::new(1, &[vec![1], vec![]], true).unwrap();
        assert_eq!(
            build_upward_member_graph(&phi).unwrap_err(),
            ReductionError::EmptyClause { construction: ConstructionId::Thm3, clause: 2 }
        );
        assert!(build_upward_conp_graph(&phi).is_err());
    }

    fn wagner_pair() -> Vec<Cnf> {
        vec![
            Cnf::new(2, &[vec![2]], false).unwrap(),
            Cnf::new(2, &[vec![2], vec![-2], vec![2], vec![-2]], false).unwrap(),
        ]
    }

    #[test]
    fn cons3_single_pair() {
        let out = build_upward_wagner_graph(&wagner_pair()).unwrap();
        assert_eq!(out.graph.len(), 29);
        assert_eq!(out.component(1).len(), 10);
        assert_eq!(out.component(2).len(), 19);
        let a1 = out.component(1);
        let a2 = out.component(2);
        let cross: Vec<(usize, usize)> = out
            .graph
            .edges()
            .filter(|&(x, y)| a1.contains(x) != a1.contains(y) || a2.contains(x) != a2.contains(y))
            .collect();
        let d1 = out.role("d_1").unwrap();
        let mut expected = vec![(out.role("up_1_2").unwrap(), d1), (out.role("ubp_1_2").unwrap(), d1)];
        expected.sort();
        assert_eq!(cross, expected);
        assert_eq!(out.graph.name(d1), "d1");
    }

    #[test]
    fn cons3_two_pairs_link_components() {
        let mut fs = wagner_pair();
        fs.extend(wagner_pair());
        // φ3 satisfiable after φ2 unsatisfiable breaks the chain.
        assert_eq!(build_upward_wagner_graph(&fs).unwrap_err(), ReductionError::ChainViolation { formula: 3 });
        let unsat = fs[1].clone();
        let fs = vec![fs[0].clone(), fs[1].clone(), unsat.clone(), unsat];
        let out = build_upward_wagner_graph(&fs).unwrap();
        let d3 = out.role("d_3").unwrap();
        assert_eq!(out.graph.out_set(d3), out.component(2));
    }

    #[test]
    fn cons3_property_checks() {
        let first_everywhere = Cnf::new(2, &[vec![1, 2]], false).unwrap();
        let unsat = wagner_pair()[1].clone();
        assert_eq!(
            build_upward_wagner_graph(&[first_everywhere, unsat]).unwrap_err(),
            ReductionError::PropertyViolation { formula: 1, property: FormulaProperty::FirstVarFree }
        );
        let one_model = Cnf::new(2, &[vec![2], vec![-1]], false).unwrap();
        let unsat = wagner_pair()[1].clone();
        assert_eq!(
            build_upward_wagner_graph(&[one_model, unsat]).unwrap_err(),
            ReductionError::PropertyViolation { formula: 1, property: FormulaProperty::MinTwoModels }
        );
    }
}
