use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::reconfig::{reconfig_bfs, validate_flip_sequence};
use crate::sat_core::random::{random_llp, random_monotone_planar};
use crate::sat_core::{all_models, brute_force_sat, Clause};

fn cnf(clauses: &[&[&str]]) -> Cnf {
    Cnf::from_named(clauses).unwrap()
}

fn clause_text(f: &Cnf, c: &Clause) -> String {
    let mut names: Vec<String> = c.iter().map(|&l| f.literal_name(l)).collect();
    names.sort();
    names.join(" ∨ ")
}

fn sorted(xs: &[&str]) -> String {
    let mut v: Vec<&str> = xs.to_vec();
    v.sort();
    v.join(" ∨ ")
}

fn example_instance() -> MonotonePlanarInstance {
    let f = cnf(&[&["x", "y", "z"], &["¬x", "¬y", "¬w"], &["x", "y", "w"]]);
    let cycle = ["x", "z", "y", "w"].iter().map(|n| f.var(n).unwrap()).collect();
    MonotonePlanarInstance::new(f, cycle).unwrap()
}

#[test]
fn occurrences_become_fresh_negative_literals() {
    let (llp, _) = mp3sat_to_llp(&example_instance(), ChainCounts::PerVariable).unwrap();
    let f = &llp.cnf;
    assert_eq!(clause_text(f, &f.clauses()[0]), sorted(&["¬p1_x", "¬p1_y", "¬p1_z"]));
    assert_eq!(clause_text(f, &f.clauses()[1]), sorted(&["¬n1_x", "¬n1_y", "¬n1_w"]));
    assert_eq!(clause_text(f, &f.clauses()[2]), sorted(&["¬p2_x", "¬p2_y", "¬p1_w"]));
}

#[test]
fn clause_counts() {
    let inst = example_instance();
    let (global, _) = mp3sat_to_llp(&inst, ChainCounts::Global).unwrap();
    // (2n + 2m)|V| + |C| with n = 2 positive and m = 1 negative clauses.
    assert_eq!(global.cnf.clauses().len(), (2 * 2 + 2) * 4 + 3);
    let (local, _) = mp3sat_to_llp(&inst, ChainCounts::PerVariable).unwrap();
    // x, y: 2 positive + 1 negative occurrence; z: 1 + 0; w: 1 + 1.
    assert_eq!(local.cnf.clauses().len(), 6 + 6 + 4 + 4 + 3);
}

#[test]
fn outputs_are_linear_and_valid() {
    for counts in [ChainCounts::PerVariable, ChainCounts::Global] {
        let (llp, _) = mp3sat_to_llp(&example_instance(), counts).unwrap();
        assert!(is_linear(&llp.cnf));
        let g = llp.incidence();
        assert_eq!(check_valid(&llp.embedding, &g), Ok(true));
    }
}

#[test]
fn single_positive_clause_forces_its_variable() {
    let inst = MonotonePlanarInstance::new(cnf(&[&["x"]]), vec![0]).unwrap();
    let (llp, map) = mp3sat_to_llp(&inst, ChainCounts::PerVariable).unwrap();
    assert_eq!(clause_text(&llp.cnf, &llp.cnf.clauses()[0]), "¬p1_x");
    let models = all_models(&llp.cnf).unwrap();
    assert!(!models.is_empty());
    assert!(models.iter().all(|nu| map.project(nu) == vec![true]));
}

/// Clauses of the chain formulas of one variable.
fn chain_formula(llp: &LlpInstance, g: &VariableGadget) -> Cnf {
    let mine: BTreeSet<Var> =
        [g.var].into_iter().chain(g.p.iter().chain(&g.a).chain(&g.n).chain(&g.b).copied()).collect();
    let clauses: Vec<Clause> = llp
        .cnf
        .clauses()
        .iter()
        .filter(|c| c.iter().all(|l| mine.contains(&l.var)) && c.iter().any(|l| l.positive))
        .cloned()
        .collect();
    Cnf::new(llp.cnf.names().to_vec(), clauses).unwrap()
}

#[test]
fn chain_formulas_entail_occurrence_implications() {
    let (llp, map) = mp3sat_to_llp(&example_instance(), ChainCounts::PerVariable).unwrap();
    for g in &map.gadgets {
        let chain = chain_formula(&llp, g);
        // Restrict enumeration to the gadget's own variables.
        let vars: Vec<Var> =
            [g.var].into_iter().chain(g.p.iter().chain(&g.a).chain(&g.n).chain(&g.b).copied()).collect();
        for mask in 0u32..(1 << vars.len()) {
            let mut nu = vec![false; llp.cnf.num_vars()];
            for (i, &w) in vars.iter().enumerate() {
                nu[w] = mask >> i & 1 == 1;
            }
            if !chain.satisfied_by(&nu) {
                continue;
            }
            for &p in &g.p {
                assert!(nu[p] || nu[g.var], "¬p must entail v");
            }
            for &n in &g.n {
                assert!(nu[n] || !nu[g.var], "¬n must entail ¬v");
            }
        }
    }
}

#[test]
fn lifted_models_satisfy_output() {
    let inst = example_instance();
    let (llp, map) = mp3sat_to_llp(&inst, ChainCounts::PerVariable).unwrap();
    for nu in all_models(&inst.cnf).unwrap() {
        assert!(llp.cnf.satisfied_by(&map.lift(&nu).unwrap()));
    }
}

#[test]
fn rejects_non_monotone_or_crossing_input() {
    assert!(matches!(
        MonotonePlanarInstance::new(cnf(&[&["x", "¬y"]]), vec![0, 1]),
        Err(ReduceError::NotMonotonePlanar(_))
    ));
    // Identical 3-variable positive clauses cannot both be drawn inside.
    let f = cnf(&[&["x", "y", "z"], &["x", "y", "z"]]);
    assert!(matches!(MonotonePlanarInstance::new(f, vec![0, 1, 2]), Err(ReduceError::NotMonotonePlanar(_))));
}

fn worked_llp() -> LlpInstance {
    let f = cnf(&[&["a", "¬b", "d"], &["b", "¬c", "d"], &["¬d", "c"], &["c", "¬a"]]);
    let order = ["a", "¬b", "b", "¬c", "d", "¬d", "c", "¬a"];
    let cycle = order
        .iter()
        .map(|n| match n.strip_prefix('¬') {
            Some(x) => Literal::neg(f.var(x).unwrap()),
            None => Literal::pos(f.var(n).unwrap()),
        })
        .collect();
    LlpInstance::new(f, cycle).unwrap()
}

#[test]
fn llp_to_mlp_worked_example() {
    let (mlp, map) = llp_to_mlp(&worked_llp()).unwrap();
    let f = &mlp.cnf;
    let texts: Vec<String> = f.clauses().iter().map(|c| clause_text(f, c)).collect();
    assert_eq!(
        texts[..4],
        [sorted(&["a", "b'", "d"]), sorted(&["b", "c'", "d"]), sorted(&["d'", "c"]), sorted(&["c", "a'"])]
    );
    for (i, v) in ["a", "b", "d", "c"].iter().enumerate() {
        assert_eq!(texts[4 + i], sorted(&[&format!("¬{v}"), &format!("¬{v}'")]));
    }
    assert!(is_monotone(f) && is_linear(f) && mlp.negatives_are_unique());
    assert_eq!(map.prime(0), 4);
    assert_eq!(check_valid(&mlp.embedding, &mlp.incidence()), Ok(true));
}

#[test]
fn friend_assignments() {
    assert_eq!(friend_assignment(&[true]), vec![true, false]);
    assert_eq!(friend_assignment(&[false]), vec![false, true]);
    let map = PrimeMap { num_original: 3 };
    let nu = vec![true, false, true];
    assert_eq!(project_assignment(map, &friend_assignment(&nu)), nu);
}

#[test]
fn friend_assignment_transports_models() {
    let llp = worked_llp();
    let (mlp, _) = llp_to_mlp(&llp).unwrap();
    for nu in all_models(&llp.cnf).unwrap() {
        assert!(mlp.cnf.satisfied_by(&friend_assignment(&nu)));
    }
}

#[test]
fn lift_single_flip() {
    let f = cnf(&[&["x", "y"]]);
    let seq = lift_flip_sequence(&f, &[true, true], &[0]).unwrap();
    assert_eq!(seq, vec![0, 2]);
    assert_eq!(project_flip_sequence(PrimeMap { num_original: 2 }, &seq), vec![0]);
    // 0 → 1 flips the primed copy first.
    assert_eq!(lift_flip_sequence(&f, &[false, true], &[0]).unwrap(), vec![2, 0]);
    assert_eq!(lift_flip_sequence(&f, &[true, false], &[0]), Err(ReduceError::IntermediateUnsat(0)));
}

fn monotone_strategy() -> impl Strategy<Value = MonotonePlanarInstance> {
    (2usize..=4, 0usize..=5, any::<u64>()).prop_map(|(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, cycle) = random_monotone_planar(&mut rng, n, m);
        MonotonePlanarInstance::new(f, cycle).unwrap()
    })
}

fn llp_strategy() -> impl Strategy<Value = LlpInstance> {
    (1usize..=4, 0usize..=5, any::<u64>()).prop_map(|(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, cycle) = random_llp(&mut rng, n, m);
        LlpInstance::new(f, cycle).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mp3sat_to_llp_is_valid_and_equisatisfiable(inst in monotone_strategy()) {
        let (llp, map) = mp3sat_to_llp(&inst, ChainCounts::PerVariable).unwrap();
        prop_assert!(is_linear(&llp.cnf));
        prop_assert_eq!(check_valid(&llp.embedding, &llp.incidence()), Ok(true));
        prop_assume!(llp.cnf.num_vars() <= 20);
        let src = brute_force_sat(&inst.cnf).unwrap();
        let dst = brute_force_sat(&llp.cnf).unwrap();
        prop_assert_eq!(src.is_some(), dst.is_some());
        if let Some(nu) = dst {
            prop_assert!(inst.cnf.satisfied_by(&map.project(&nu)));
        }
    }

    #[test]
    fn llp_to_mlp_is_valid_and_equisatisfiable(llp in llp_strategy()) {
        let (mlp, map) = llp_to_mlp(&llp).unwrap();
        prop_assert!(is_monotone(&mlp.cnf) && is_linear(&mlp.cnf) && mlp.negatives_are_unique());
        let src = brute_force_sat(&llp.cnf).unwrap();
        let dst = brute_force_sat(&mlp.cnf).unwrap();
        prop_assert_eq!(src.is_some(), dst.is_some());
        if let Some(nu) = dst {
            prop_assert!(llp.cnf.satisfied_by(&project_assignment(map, &nu)));
        }
        // Primed variables occur positively at most twice, negatively once.
        for w in map.num_original..mlp.cnf.num_vars() {
            let pos = mlp.cnf.clauses().iter().filter(|c| c.contains(&Literal::pos(w))).count();
            let neg = mlp.cnf.clauses().iter().filter(|c| c.contains(&Literal::neg(w))).count();
            prop_assert!(pos <= 2);
            prop_assert_eq!(neg, 1);
        }
    }

    #[test]
    fn lifted_sequences_are_valid_and_project_back(llp in llp_strategy(), pick in any::<(prop::sample::Index, prop::sample::Index)>()) {
        let models = all_models(&llp.cnf).unwrap();
        prop_assume!(!models.is_empty());
        let (s, t) = (pick.0.get(&models), pick.1.get(&models));
        let (mlp, map) = llp_to_mlp(&llp).unwrap();
        let direct = reconfig_bfs(&llp.cnf, s, t).unwrap();
        let lifted = reconfig_bfs(&mlp.cnf, &friend_assignment(s), &friend_assignment(t)).unwrap();
        prop_assert_eq!(direct.is_some(), lifted.is_some());
        if let Some(seq) = direct {
            let up = lift_flip_sequence(&llp.cnf, s, &seq).unwrap();
            prop_assert_eq!(up.len(), 2 * seq.len());
            prop_assert!(validate_flip_sequence(&mlp.cnf, &friend_assignment(s), &up));
            prop_assert_eq!(project_flip_sequence(map, &up), seq);
        }
    }
}
