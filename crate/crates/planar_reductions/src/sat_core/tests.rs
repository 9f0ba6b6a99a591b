use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::io::{from_json, incidence_to_dot, parse_dimacs, parse_instance, to_json, write_dimacs};
use super::*;
use crate::embedding::{is_planar, Multigraph};

fn cnf(clauses: &[&[&str]]) -> Cnf {
    Cnf::from_named(clauses).unwrap()
}

fn lits(f: &Cnf, names: &[&str]) -> Vec<Literal> {
    names
        .iter()
        .map(|n| match n.strip_prefix('¬') {
            Some(x) => Literal::neg(f.var(x).unwrap()),
            None => Literal::pos(f.var(n).unwrap()),
        })
        .collect()
}

fn vars(f: &Cnf, names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| f.var(n).unwrap()).collect()
}

fn linear_example() -> Cnf {
    cnf(&[&["a", "b", "¬c"], &["¬c", "d", "¬a"], &["¬b", "c"], &["c", "¬d"]])
}

fn nine_variable() -> Cnf {
    cnf(&[
        &["a", "b", "c"],
        &["d", "e", "f"],
        &["g", "h", "i"],
        &["¬a", "¬d", "¬g"],
        &["¬b", "¬e", "¬h"],
        &["¬c", "¬f", "¬i"],
    ])
}

fn llp_example() -> (Cnf, Vec<Literal>) {
    let f = cnf(&[&["a", "¬b", "d"], &["b", "¬c", "d"], &["¬d", "c"], &["c", "¬a"]]);
    let pi = lits(&f, &["a", "¬b", "b", "¬c", "d", "¬d", "c", "¬a"]);
    (f, pi)
}

#[test]
fn literal_negation_is_an_involution() {
    let l = Literal::pos(3);
    assert_eq!(l.negate().negate(), l);
    assert_ne!(l.negate(), l);
    assert_eq!(Literal::neg(0).to_dimacs(), -1);
}

#[test]
fn cnf_rejects_bad_clauses() {
    assert_eq!(Cnf::from_named(&[&["a", "¬a"]]), Err(SatError::Tautology(0)));
    assert_eq!(Cnf::from_named(&[&["a"], &["a", "b", "c", "d"]]), Err(SatError::BadClauseSize(1)));
    assert_eq!(Cnf::new(vec!["a".into()], vec![Clause::new()]), Err(SatError::BadClauseSize(0)));
    // Duplicate literals collapse.
    assert_eq!(cnf(&[&["a", "a", "b"]]).clauses()[0].len(), 2);
}

#[test]
fn linearity_examples() {
    assert!(is_linear(&linear_example()));
    assert!(is_linear(&nine_variable()));
    assert!(!is_linear(&cnf(&[&["a", "b"], &["a", "c"], &["a", "d"]])));
    // Two clauses sharing two literals.
    assert!(!is_linear(&cnf(&[&["a", "b", "c"], &["a", "b", "d"]])));
    assert!(is_linear(&cnf(&[])));
}

#[test]
fn monotonicity_examples() {
    assert!(is_monotone(&cnf(&[&["a", "b", "c"], &["¬a", "¬b", "¬d"]])));
    assert!(!is_monotone(&cnf(&[&["a", "¬b"]])));
    assert!(is_monotone(&cnf(&[])));
}

#[test]
fn single_clause_incidence() {
    let g = build_incidence(&cnf(&[&["a"]]), GraphKind::LiteralClause);
    assert_eq!(g.graph.vertices.len(), 2);
    assert_eq!(g.graph.edges.len(), 1);
}

#[test]
fn linear_example_incidence_graphs() {
    let f = linear_example();
    let lg = build_incidence(&f, GraphKind::LiteralClause);
    // Literals a b ¬c d ¬a ¬b c ¬d all occur.
    assert_eq!(lg.graph.vertices.len(), 4 + 8);
    assert_eq!(lg.graph.edges.len(), 10);
    let vg = build_incidence(&f, GraphKind::VariableClause);
    assert_eq!(vg.graph.vertices.len(), 4 + 4);
    assert_eq!(vg.graph.edges.len(), 10);
    for g in [&lg, &vg] {
        for (e, &(u, v)) in &g.graph.edges {
            let clause_side =
                matches!(g.nodes[&u], Node::Clause(_)) as u8 + matches!(g.nodes[&v], Node::Clause(_)) as u8;
            assert_eq!(clause_side, 1, "edge {e} is not bipartite");
        }
    }
}

/// Checks that `g` is a subdivision of K3,3 with the given branch vertices.
fn is_k33_subdivision(g: &Multigraph, left: &[usize], right: &[usize]) -> bool {
    let adj = g.adjacency();
    let branch: BTreeSet<usize> = left.iter().chain(right).copied().collect();
    let mut reached = BTreeMap::new();
    for &a in left {
        for &(_, first) in &adj[&a] {
            let (mut prev, mut cur) = (a, first);
            while !branch.contains(&cur) {
                if adj[&cur].len() != 2 {
                    return false;
                }
                let next = adj[&cur].iter().map(|&(_, w)| w).find(|&w| w != prev).unwrap();
                (prev, cur) = (cur, next);
            }
            *reached.entry((a, cur)).or_insert(0) += 1;
        }
    }
    left.iter().all(|&a| right.iter().all(|&b| reached.get(&(a, b)) == Some(&1))) && reached.len() == 9
}

#[test]
fn nine_variable_graph_is_a_k33_subdivision() {
    let f = nine_variable();
    let g = build_incidence(&f, GraphKind::VariableClause);
    assert!(is_k33_subdivision(&g.graph, &[0, 1, 2], &[3, 4, 5]));
    assert!(!is_planar(&g.graph));
}

#[test]
fn augment_linear_planar_example() {
    let f = cnf(&[&["a", "c", "¬d"], &["b", "c"], &["¬a", "¬b", "d"], &["¬c", "d"]]);
    let g = build_incidence(&f, GraphKind::VariableClause);
    let aug = augment(&g, &CycleOrder::Variables(vars(&f, &["a", "b", "c", "d"]))).unwrap();
    assert_eq!(aug.cycle_edges.len(), 4);
    assert!(aug.paired_edges.is_empty());
    assert!(is_planar(&aug.graph));
    assert!(is_linear(&f));
}

#[test]
fn augment_llp_example_is_valid() {
    let (f, pi) = llp_example();
    assert!(is_linear(&f));
    let g = build_incidence(&f, GraphKind::LiteralClause);
    let aug = augment(&g, &CycleOrder::Literals(pi.clone())).unwrap();
    assert_eq!(aug.paired_edges.len(), 4);
    assert_eq!(aug.cycle_edges.len(), 8);
    let emb = aug.layout().unwrap();
    assert_eq!(check_valid(&emb, &aug), Ok(true));
    assert!(literal_cycle_is_valid_by_crossings(&f, &pi));
}

#[test]
fn clause_moved_inside_is_invalid() {
    let (f, pi) = llp_example();
    let aug = augment(&build_incidence(&f, GraphKind::LiteralClause), &CycleOrder::Literals(pi)).unwrap();
    // Clause (¬d ∨ c) has adjacent attachments and crosses no chord.
    let mut inside: Vec<BTreeSet<usize>> = aug.paired_edges.values().map(|&e| BTreeSet::from([e])).collect();
    inside.push(aug.clause_star(2));
    let outside = [0, 1, 3].iter().map(|&i| aug.clause_star(i)).collect();
    let emb = layout_embedding(&CycleLayout {
        graph: &aug.graph,
        cycle_vertices: &aug.cycle_vertices,
        cycle_edges: &aug.cycle_edges,
        inside,
        outside,
    })
    .unwrap();
    assert_eq!(emb.verify_planar(), Ok(true));
    assert_eq!(check_valid(&emb, &aug), Ok(false));
}

#[test]
fn monotone_example_with_positives_inside_is_valid() {
    let f = cnf(&[&["a", "b", "c"], &["a", "c", "d"], &["¬a", "¬b", "¬d"], &["¬b", "¬c", "¬d"]]);
    assert!(is_monotone(&f));
    let pi = vars(&f, &["a", "b", "c", "d"]);
    let aug = augment(&build_incidence(&f, GraphKind::VariableClause), &CycleOrder::Variables(pi.clone())).unwrap();
    let emb = aug.layout().unwrap();
    assert_eq!(check_valid(&emb, &aug), Ok(true));
    assert_eq!(check_valid(&emb.mirrored(), &aug), Ok(true));
    assert!(variable_cycle_separates_by_crossings(&f, &pi));
}

#[test]
fn augment_errors() {
    let f = cnf(&[&["x"]]);
    let vg = build_incidence(&f, GraphKind::VariableClause);
    assert_eq!(augment(&vg, &CycleOrder::Variables(vec![0])), Err(SatError::CycleIncomplete));
    assert_eq!(
        augment(&vg, &CycleOrder::Literals(vec![Literal::pos(0), Literal::neg(0)])),
        Err(SatError::KindMismatch)
    );
    let f = cnf(&[&["x", "y"]]);
    let vg = build_incidence(&f, GraphKind::VariableClause);
    assert_eq!(augment(&vg, &CycleOrder::Variables(vec![0, 0])), Err(SatError::CycleIncomplete));
    let aug = augment(&vg, &CycleOrder::Variables(vec![1, 0])).unwrap();
    assert_eq!(augment(&aug, &CycleOrder::Variables(vec![1, 0])), Err(SatError::KindMismatch));
    let lg = build_incidence(&f, GraphKind::LiteralClause);
    let partial = CycleOrder::Literals(vec![Literal::pos(0), Literal::pos(1), Literal::neg(1)]);
    assert_eq!(augment(&lg, &partial), Err(SatError::CycleIncomplete));
}

#[test]
fn check_valid_rejects_foreign_embeddings() {
    let (f, pi) = llp_example();
    let g = build_incidence(&f, GraphKind::LiteralClause);
    let aug = augment(&g, &CycleOrder::Literals(pi)).unwrap();
    let emb = aug.layout().unwrap();
    assert_eq!(check_valid(&emb, &g), Err(SatError::CycleIncomplete));
    let other = augment(&g, &CycleOrder::Literals(lits(&f, &["a", "¬a", "b", "¬b", "c", "¬c", "d", "¬d"]))).unwrap();
    assert_eq!(check_valid(&emb, &other), Err(SatError::NonPlanarEmbedding));
}

#[test]
fn crossing_predicate() {
    let s = |xs: &[usize]| xs.iter().copied().collect::<BTreeSet<_>>();
    assert!(clause_sets_cross(&s(&[0, 2]), &s(&[1, 3])));
    assert!(!clause_sets_cross(&s(&[0, 1]), &s(&[2, 3])));
    assert!(!clause_sets_cross(&s(&[0, 2]), &s(&[2, 4])));
    // Shared pair with the third attachments on different arcs.
    assert!(clause_sets_cross(&s(&[0, 1, 3]), &s(&[0, 1, 2])));
    assert!(!clause_sets_cross(&s(&[0, 1, 3]), &s(&[1, 2, 3])));
    assert!(clause_sets_cross(&s(&[0, 1, 2]), &s(&[0, 1, 2])));
    assert!(!clause_sets_cross(&s(&[0, 5]), &s(&[5, 7, 0])));
}

#[test]
fn brute_force_examples() {
    assert_eq!(brute_force_sat(&cnf(&[&["x"]])), Ok(Some(vec![true])));
    assert_eq!(brute_force_sat(&cnf(&[&["x"], &["¬x"]])), Ok(None));
    let f = cnf(&[&["a", "c", "¬d"], &["b", "c"], &["¬a", "¬b", "d"], &["¬c", "d"]]);
    let nu = brute_force_sat(&f).unwrap().unwrap();
    assert!(f.satisfied_by(&nu));
    assert_eq!(Some(nu), all_models(&f).unwrap().into_iter().next());
    let names: Vec<String> = (0..25).map(|i| format!("v{i}")).collect();
    let big = Cnf::new(names, vec![]).unwrap();
    assert_eq!(brute_force_sat(&big), Err(SatError::TooManyVariables(25, BRUTE_FORCE_CAP)));
}

#[test]
fn dimacs_round_trip_with_cycle() {
    let (f, pi) = llp_example();
    let cycle = CycleOrder::Literals(pi);
    let text = write_dimacs(&f, Some(&cycle));
    let back = parse_dimacs(&text).unwrap();
    assert_eq!(back.cnf, f);
    assert_eq!(back.cycle, Some(cycle.clone()));
    let json = to_json(&f, Some(&cycle));
    let back = parse_instance(&json).unwrap();
    assert_eq!(back.cnf, f);
    assert_eq!(back.cycle, Some(cycle));
}

#[test]
fn dimacs_errors_carry_positions() {
    let err = parse_dimacs("p cnf 2 1\n1 x 0\n").unwrap_err();
    assert_eq!(err, SatError::Parse { line: 2, column: 3, message: "expected an integer, found `x`".into() });
    assert!(matches!(parse_dimacs("p cnf 1 1\n1 2 0\n"), Err(SatError::Parse { line: 2, column: 3, .. })));
    assert!(matches!(parse_dimacs("p cnf 1 1\n1\n"), Err(SatError::Parse { line: 2, column: 1, .. })));
    assert!(matches!(parse_dimacs("1 0\n"), Err(SatError::Parse { line: 1, .. })));
    assert!(matches!(parse_dimacs("p cnf 2 1\nc cycle 1 -2\n1 0\n"), Err(SatError::Parse { line: 2, column: 11, .. })));
    assert!(matches!(from_json("{\"variables\": [\"a\"], \"clauses\": [[2]]}"), Err(SatError::Parse { .. })));
}

#[test]
fn dimacs_defaults_and_multiline_clauses() {
    let inst = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
    assert_eq!(inst.cnf.names(), ["x1", "x2", "x3"]);
    assert_eq!(inst.cnf.clauses().len(), 2);
    assert_eq!(inst.cycle, None);
}

#[test]
fn dot_export_styles_cycle_and_paired_edges() {
    let (f, pi) = llp_example();
    let aug = augment(&build_incidence(&f, GraphKind::LiteralClause), &CycleOrder::Literals(pi)).unwrap();
    let dot = incidence_to_dot(&aug, &f);
    assert_eq!(dot.matches("style=dashed").count(), 8);
    assert_eq!(dot.matches("style=bold").count(), 4);
    assert!(dot.contains("label=\"¬a\""));
}

fn formula_strategy(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = Cnf> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (0..n, any::<bool>());
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 0..=max_clauses).prop_map(move |cs| {
            let clauses = cs
                .into_iter()
                .map(|c| {
                    let mut seen = BTreeMap::new();
                    for (v, p) in c {
                        seen.entry(v).or_insert(p);
                    }
                    seen.into_iter().map(|(var, positive)| Literal { var, positive }).collect()
                })
                .collect();
            let names = (0..n).map(|i| format!("x{i}")).collect();
            Cnf::new(names, clauses).unwrap()
        })
    })
}

fn merged_edges(g: &IncidenceGraph) -> Vec<(Node, Node)> {
    let mut out: Vec<(Node, Node)> = g
        .graph
        .edges
        .values()
        .map(|&(u, v)| {
            let merge = |n: Node| match n {
                Node::Literal(l) => Node::Variable(l.var),
                other => other,
            };
            let (a, b) = (merge(g.nodes[&u]), merge(g.nodes[&v]));
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn variable_graph_is_merged_literal_graph(f in formula_strategy(6, 8)) {
        let lg = build_incidence(&f, GraphKind::LiteralClause);
        let vg = build_incidence(&f, GraphKind::VariableClause);
        prop_assert_eq!(merged_edges(&lg), merged_edges(&vg));
    }

    #[test]
    fn linearity_matches_pairwise_scan(f in formula_strategy(5, 6)) {
        prop_assert_eq!(is_linear(&f), is_linear_pairwise(&f));
    }

    #[test]
    fn brute_force_agrees_with_enumeration(f in formula_strategy(6, 10)) {
        let models = all_models(&f).unwrap();
        let found = brute_force_sat(&f).unwrap();
        prop_assert_eq!(found.clone(), models.first().cloned());
        for nu in &models {
            prop_assert!(f.satisfied_by(nu));
        }
    }

    #[test]
    fn literal_layouts_match_crossing_oracle(f in formula_strategy(4, 5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pi: Vec<Literal> = (0..f.num_vars()).flat_map(|x| [Literal::pos(x), Literal::neg(x)]).collect();
        pi.shuffle(&mut rng);
        let aug = augment(&build_incidence(&f, GraphKind::LiteralClause), &CycleOrder::Literals(pi.clone())).unwrap();
        let oracle = literal_cycle_is_valid_by_crossings(&f, &pi);
        match aug.layout() {
            Ok(emb) => {
                prop_assert!(oracle);
                prop_assert_eq!(check_valid(&emb, &aug), Ok(true));
                prop_assert_eq!(check_valid(&emb.mirrored(), &aug), Ok(true));
            }
            Err(e) => {
                prop_assert_eq!(e, SatError::NonPlanarEmbedding);
                prop_assert!(!oracle);
            }
        }
    }

    #[test]
    fn variable_layouts_match_crossing_oracle(f in formula_strategy(5, 6), seed in any::<u64>()) {
        prop_assume!(is_monotone(&f) && f.num_vars() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pi: Vec<Var> = (0..f.num_vars()).collect();
        pi.shuffle(&mut rng);
        let aug = augment(&build_incidence(&f, GraphKind::VariableClause), &CycleOrder::Variables(pi.clone())).unwrap();
        let oracle = variable_cycle_separates_by_crossings(&f, &pi);
        match aug.layout() {
            Ok(emb) => {
                prop_assert!(oracle);
                prop_assert_eq!(check_valid(&emb, &aug), Ok(true));
            }
            Err(_) => prop_assert!(!oracle),
        }
    }

    #[test]
    fn dimacs_round_trips(f in formula_strategy(6, 8)) {
        let back = parse_dimacs(&write_dimacs(&f, None)).unwrap();
        prop_assert_eq!(back.cnf, f.clone());
        let back = from_json(&to_json(&f, None)).unwrap();
        prop_assert_eq!(back.cnf, f);
    }
}
