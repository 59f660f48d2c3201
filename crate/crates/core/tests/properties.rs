use covers_core::cnf::{check_formula_properties, normalize_formula, NormalizeFlags};
use covers_core::covering::{covers, is_covering_set, is_minimal_covering_set, uncovered_set};
use covers_core::harness::{brute_force_sat, random_cnf, random_graph, verify_claim, ClaimId, ClaimInstance};
use covers_core::mcgarvey::{majority_graph, mcgarvey_profile};
use covers_core::reductions::{build_downward_conp_graph, build_downward_member_graph, build_upward_conp_graph, build_upward_member_graph};
use covers_core::solver::{decide, enumerate_covering_sets, mandatory_alternatives, minimal_covering_sets, minimum_size_covering_sets};
use covers_core::{AltSet, Budget, Cnf, Direction, DominanceGraph, Notion, ProblemKind};
use proptest::prelude::*;

const DIRS: [Direction; 2] = [Direction::Upward, Direction::Downward];

/// Each unordered pair gets no edge, a forward edge or a backward edge.
fn graph(max_n: usize) -> impl Strategy<Value = DominanceGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |pairs| {
            let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    match pairs[k] {
                        1 => edges.push((names[i].as_str(), names[j].as_str())),
                        2 => edges.push((names[j].as_str(), names[i].as_str())),
                        _ => {}
                    }
                    k += 1;
                }
            }
            DominanceGraph::new(names.iter().map(String::as_str), edges).unwrap()
        })
    })
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (DominanceGraph, AltSet)> {
    graph(max_n).prop_flat_map(|g| {
        let full = g.all().bits();
        (Just(g), any::<u128>().prop_map(move |b| AltSet::from_bits(b & full)))
    })
}

fn cnf(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = Cnf> {
    (1..=max_vars, 1..=max_clauses, any::<u64>()).prop_flat_map(|(v, c, seed)| {
        (1..=v).prop_map(move |w| random_cnf(v, c, w, seed).unwrap())
    })
}

/// Minimal covering sets by testing every subset with the literal definitions.
fn naive_minimal(g: &DominanceGraph, dir: Direction) -> Vec<AltSet> {
    let covering: Vec<AltSet> = (0..1u128 << g.len())
        .map(AltSet::from_bits)
        .filter(|&s| is_covering_set(g, s, dir).unwrap())
        .collect();
    let mut v: Vec<AltSet> =
        covering.iter().copied().filter(|s| !covering.iter().any(|t| t.is_proper_subset(*s))).collect();
    v.sort_by(|a, b| a.canonical_cmp(*b));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn covering_is_transitive((g, b) in graph_and_subset(10)) {
        for dir in DIRS {
            for x in b.iter() {
                for y in b.iter() {
                    if !covers(&g, b, x, y, dir).unwrap() {
                        continue;
                    }
                    for z in b.iter() {
                        if covers(&g, b, y, z, dir).unwrap() {
                            prop_assert!(covers(&g, b, x, z, dir).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn uncovered_set_is_nonempty((g, b) in graph_and_subset(10)) {
        prop_assume!(!b.is_empty());
        for dir in DIRS {
            let uc = uncovered_set(&g, b, dir).unwrap();
            prop_assert!(!uc.is_empty() && uc.is_subset(b));
        }
    }

    #[test]
    fn duality_under_reversal((g, b) in graph_and_subset(8)) {
        let r = g.reverse();
        for x in b.iter() {
            for y in b.iter() {
                prop_assert_eq!(
                    covers(&g, b, x, y, Direction::Upward).unwrap(),
                    covers(&r, b, y, x, Direction::Downward).unwrap()
                );
            }
        }
    }

    #[test]
    fn empty_set_never_covers(g in graph(8)) {
        for dir in DIRS {
            prop_assert!(!is_covering_set(&g, AltSet::EMPTY, dir).unwrap());
        }
    }

    #[test]
    fn upward_find_always_answers(g in graph(10)) {
        let a = decide(&g, Direction::Upward, Notion::InclusionMinimal, &ProblemKind::Find, &Budget::default()).unwrap();
        prop_assert_eq!(a.verdict, Some(true));
        prop_assert!(is_covering_set(&g, a.witness.unwrap(), Direction::Upward).unwrap());
    }

    #[test]
    fn families_are_sound_and_nested(g in graph(9)) {
        let budget = Budget::default();
        let mandatory = mandatory_alternatives(&g);
        for dir in DIRS {
            let all = enumerate_covering_sets(&g, dir, &budget).unwrap();
            let minimal = minimal_covering_sets(&g, dir, &budget).unwrap();
            let minimum = minimum_size_covering_sets(&g, dir, &budget).unwrap();
            for m in &all {
                prop_assert!(mandatory.is_subset(*m));
                prop_assert!(is_covering_set(&g, *m, dir).unwrap());
            }
            for m in &minimal {
                prop_assert!(all.contains(m));
                prop_assert!(is_minimal_covering_set(&g, *m, dir, &budget).unwrap());
            }
            for m in &minimum {
                prop_assert!(minimal.contains(m));
            }
            if let Some(first) = minimum.first() {
                prop_assert!(all.iter().all(|s| s.len() >= first.len()));
            }
            let sorted = all.windows(2).all(|w| w[0].canonical_cmp(w[1]).is_lt());
            prop_assert!(sorted);
        }
    }

    #[test]
    fn solver_matches_naive_oracle(g in graph(8)) {
        for dir in DIRS {
            prop_assert_eq!(minimal_covering_sets(&g, dir, &Budget::default()).unwrap(), naive_minimal(&g, dir));
        }
    }

    #[test]
    fn decide_agrees_with_family(g in graph(8)) {
        let budget = Budget::default();
        for dir in DIRS {
            for notion in [Notion::InclusionMinimal, Notion::MinimumSize] {
                let fam = covers_core::solver::family(&g, dir, notion, &budget).unwrap();
                let ask = |k: ProblemKind| decide(&g, dir, notion, &k, &budget).unwrap().verdict;
                prop_assert_eq!(ask(ProblemKind::Exists), Some(!fam.is_empty()));
                prop_assert_eq!(ask(ProblemKind::Unique), Some(fam.len() == 1));
                for x in 0..g.len() {
                    prop_assert_eq!(ask(ProblemKind::Member(x)), Some(fam.iter().any(|m| m.contains(x))));
                    // An empty family answers false, flagged as vacuous.
                    prop_assert_eq!(ask(ProblemKind::MemberAll(x)), Some(!fam.is_empty() && fam.iter().all(|m| m.contains(x))));
                }
                let smallest = fam.iter().map(|m| m.len()).min();
                for k in 1..=g.len() {
                    prop_assert_eq!(ask(ProblemKind::Size(k)), Some(smallest.is_some_and(|s| s <= k)));
                }
                let find = decide(&g, dir, notion, &ProblemKind::Find, &budget).unwrap();
                prop_assert_eq!(find.witness, fam.first().copied());
                if let Some(m) = fam.first() {
                    prop_assert_eq!(ask(ProblemKind::Test(*m)), Some(true));
                }
            }
        }
    }

    #[test]
    fn mcgarvey_round_trip(g in graph(8)) {
        let p = mcgarvey_profile(&g);
        prop_assert_eq!(majority_graph(&p).unwrap(), g);
    }

    #[test]
    fn dg_round_trip(g in graph(12)) {
        prop_assert_eq!(DominanceGraph::parse_dg(&g.to_dg()).unwrap(), g);
    }

    #[test]
    fn reversal_is_an_involution(g in graph(10)) {
        prop_assert_eq!(g.reverse().reverse(), g);
    }

    #[test]
    fn generator_sizes(phi in cnf(4, 5)) {
        let (n, r) = (phi.variable_count(), phi.clause_count());
        prop_assert_eq!(build_upward_member_graph(&phi).unwrap().graph.len(), 4 * n + r + 1);
        prop_assert_eq!(build_upward_conp_graph(&phi).unwrap().graph.len(), 4 * n + 2 * r + 3);
        prop_assert_eq!(build_downward_member_graph(&phi).unwrap().graph.len(), 6 * n + 2 * r + 1);
        prop_assert_eq!(build_downward_conp_graph(&phi).unwrap().graph.len(), 18 * n + 2 * r + 3);
    }

    #[test]
    fn generators_are_deterministic(phi in cnf(3, 4)) {
        prop_assert_eq!(build_upward_conp_graph(&phi).unwrap(), build_upward_conp_graph(&phi).unwrap());
        prop_assert_eq!(build_downward_conp_graph(&phi).unwrap(), build_downward_conp_graph(&phi).unwrap());
    }

    #[test]
    fn random_cnf_is_deterministic(v in 1usize..8, c in 1usize..8, seed: u64) {
        let w = 1 + (seed as usize) % v;
        prop_assert_eq!(random_cnf(v, c, w, seed).unwrap(), random_cnf(v, c, w, seed).unwrap());
        prop_assert_eq!(random_graph(v, 0.5, seed), random_graph(v, 0.5, seed));
    }

    #[test]
    fn brute_force_sat_cross_check(phi in cnf(10, 12)) {
        let models = brute_force_sat(&phi).unwrap();
        let n = phi.variable_count();
        let mut expected = Vec::new();
        for rank in 0..1u64 << n {
            let a: Vec<bool> = (0..n).map(|i| rank >> (n - 1 - i) & 1 == 1).collect();
            let sat = phi.clauses().iter().all(|c| c.iter().any(|l| a[l.var() - 1] == l.is_positive()));
            if sat {
                expected.push(a);
            }
        }
        prop_assert_eq!(models, expected);
    }

    #[test]
    fn normalization_meets_flags_and_preserves_satisfiability(phi in cnf(4, 5)) {
        let n = normalize_formula(&phi, NormalizeFlags::ALL);
        let before = check_formula_properties(&phi).unwrap();
        let after = check_formula_properties(&n).unwrap();
        prop_assert_eq!(before.satisfiable, after.satisfiable);
        prop_assert!(after.min_two_unsat && after.min_two_models && after.first_var_free);
        prop_assert_eq!(normalize_formula(&n, NormalizeFlags::ALL), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verify_claim_is_deterministic(phi in cnf(2, 3)) {
        let inst = ClaimInstance::Single(phi);
        for id in [ClaimId::Claim2, ClaimId::Claim7] {
            let mut a = verify_claim(id, &inst, &Budget::default()).unwrap();
            let mut b = verify_claim(id, &inst, &Budget::default()).unwrap();
            a.elapsed_ms = 0;
            b.elapsed_ms = 0;
            prop_assert_eq!(a, b);
        }
    }
}
