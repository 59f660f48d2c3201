use super::{check_chain, check_size, Builder, ConstructionId, Namer, ReductionError, ReductionOutput};
use crate::cnf::Cnf;

pub(crate) fn thm9_size(phi: &Cnf) -> usize {
    6 * phi.variable_count() + 2 * phi.clause_count() + 1
}

pub(crate) fn cons5_size(phi: &Cnf) -> usize {
    18 * phi.variable_count() + 2 * phi.clause_count() + 3
}

const SIX: [&str; 6] = ["x", "xb", "xp", "xbp", "xpp", "xbpp"];

/// Per variable: the 6-cycle `x > xb > xp > xbp > xpp > xbpp > x` with the
/// nested 3-cycles `x > xp > xpp > x` and `xb > xbp > xbpp > xb`. Returns
/// `(x_i, xb_i)` and every added name.
fn six_cycles(b: &mut Builder, at: Namer, n: usize) -> (Vec<(String, String)>, Vec<String>) {
    let mut lits = Vec::with_capacity(n);
    let mut all = Vec::with_capacity(6 * n);
    for i in 1..=n {
        let v: Vec<String> = SIX.iter().map(|s| b.alt(at, s, Some(i))).collect();
        b.cycle(&v.iter().collect::<Vec<_>>());
        b.cycle(&[&v[0], &v[2], &v[4]]);
        b.cycle(&[&v[1], &v[3], &v[5]]);
        lits.push((v[0].clone(), v[1].clone()));
        all.extend(v);
    }
    (lits, all)
}

fn thm9_into(b: &mut Builder, at: Namer, phi: &Cnf) {
    let (lits, _) = six_cycles(b, at, phi.variable_count());
    let d = b.alt(at, "d", None);
    let r = phi.clause_count();
    let ys: Vec<String> = (1..=r).map(|j| b.alt(at, "y", Some(j))).collect();
    let zs: Vec<String> = (1..=r).map(|j| b.alt(at, "z", Some(j))).collect();
    for (j, clause) in phi.clauses().iter().enumerate() {
        for l in clause {
            let (x, xb) = &lits[l.var() - 1];
            b.edge(&ys[j], if l.is_positive() { x } else { xb });
        }
        b.edge(&d, &ys[j]);
        b.edge(&zs[j], &d);
    }
    for (i, z) in zs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if i != j {
                b.edge(z, y);
            }
        }
    }
}

fn cons5_into(b: &mut Builder, at: Namer, phi: &Cnf) {
    let k = phi.variable_count();
    let (lits, mut base) = six_cycles(b, at, k);
    let d = b.alt(at, "d", None);
    for (i, (x, xb)) in lits.iter().enumerate() {
        let z = b.alt(at, "z", Some(i + 1));
        let zp = b.alt(at, "zp", Some(i + 1));
        let zpp = b.alt(at, "zpp", Some(i + 1));
        b.edge(&zp, &z);
        b.edge(&z, x);
        b.edge(&zpp, &z);
        b.edge(&z, xb);
        b.edge(&zp, x);
        b.edge(&zpp, xb);
        b.edge(&d, &z);
        base.extend([z, zp, zpp]);
    }
    for (j, clause) in phi.clauses().iter().enumerate() {
        let y = b.alt(at, "y", Some(j + 1));
        for l in clause {
            let (x, xb) = &lits[l.var() - 1];
            b.edge(if l.is_positive() { x } else { xb }, &y);
        }
        b.edge(&d, &y);
        base.push(y);
    }
    let bb = b.alt(at, "b", None);
    let c = b.alt(at, "c", None);
    b.edge(&c, &d);
    let labels = b.labels_for(&base);
    for (a, role) in base.iter().zip(labels) {
        let hat_name = match at.position() {
            // Strip the component suffix so the hat prefix lands on the stem.
            Some(p) => format!("h{}_{p}", a.strip_suffix(&format!("_{p}")).unwrap_or(a)),
            None => format!("h{a}"),
        };
        let hat = b.alt_with_role(hat_name, format!("hat_{role}"));
        b.edge(&bb, &hat);
        b.edge(a, &hat);
        b.edge(&hat, &d);
    }
}

/// The graph for deciding whether `d` lies in some minimal downward covering
/// set: nested 3-cycles per variable, `y_j` dominating the alternatives of
/// its literals, `d > y_j`, `z_j > d`, and `z_i > y_j` for `i ≠ j`.
/// `6n + 2r + 1` alternatives. Empty clauses are accepted.
pub fn build_downward_member_graph(phi: &Cnf) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Thm9;
    check_size(id, thm9_size(phi))?;
    let mut b = Builder::default();
    thm9_into(&mut b, Namer::PLAIN, phi);
    b.finish(id, Vec::new())
}

/// The downward graph in which `d` avoids every minimal covering set exactly
/// when the formula is satisfiable. Every member `a` of `A_1 ∪ A_2` gets a
/// hatted copy `ha` with `b > ha`, `a > ha`, `ha > d`. `18k + 2l + 3`
/// alternatives. Empty clauses are accepted.
pub fn build_downward_conp_graph(phi: &Cnf) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Cons5;
    check_size(id, cons5_size(phi))?;
    let mut b = Builder::default();
    cons5_into(&mut b, Namer::PLAIN, phi);
    b.finish(id, Vec::new())
}

/// Chains `2m` formulas: member graphs at odd positions, coNP graphs at even
/// positions, joined by `r_i, s_i, t_i` per pair plus `cstar > dstar > r_i`.
/// Satisfiability must be monotone along the list.
pub fn build_downward_wagner_graph(formulas: &[Cnf]) -> Result<ReductionOutput, ReductionError> {
    let id = ConstructionId::Cons6;
    check_chain(id, formulas)?;
    let m = formulas.len() / 2;
    let size: usize = formulas
        .iter()
        .enumerate()
        .map(|(j, phi)| if j % 2 == 0 { thm9_size(phi) } else { cons5_size(phi) })
        .sum::<usize>()
        + 3 * m
        + 2;
    check_size(id, size)?;

    let mut b = Builder::default();
    let mut components = Vec::with_capacity(formulas.len());
    for (j, phi) in formulas.iter().enumerate() {
        let pos = j + 1;
        let mark = b.mark();
        if pos % 2 == 1 {
            thm9_into(&mut b, Namer::at(pos), phi);
        } else {
            cons5_into(&mut b, Namer::at(pos), phi);
        }
        components.push(b.names_since(mark));
    }
    let dstar = b.alt_with_role("dstar".into(), "d_star".into());
    let cstar = b.alt_with_role("cstar".into(), "c_star".into());
    b.edge(&cstar, &dstar);
    for i in 1..=m {
        let r = b.alt(Namer::PLAIN, "r", Some(i));
        let s = b.alt(Namer::PLAIN, "s", Some(i));
        let t = b.alt(Namer::PLAIN, "t", Some(i));
        let odd = Namer::at(2 * i - 1).name("d", None);
        let even = Namer::at(2 * i).name("d", None);
        b.edge(&r, &odd);
        b.edge(&r, &even);
        b.edge(&s, &r);
        b.edge(&s, &odd);
        b.edge(&t, &r);
        b.edge(&t, &even);
        b.edge(&dstar, &r);
    }
    b.finish(id, components)
}
