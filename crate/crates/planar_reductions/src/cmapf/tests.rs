use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::reconfig::reconfig_bfs;
use crate::sat_core::{all_models, Cnf};
use crate::sat_reduce::MlpInstance;

fn row(cells: &[Cell]) -> GridEnvironment {
    GridEnvironment::open(cells.iter().copied().collect(), 1)
}

fn line(n: i32) -> GridEnvironment {
    row(&(0..n).map(|x| (x, 0)).collect::<Vec<_>>())
}

fn mlp(clauses: &[&[&str]], cycle: &[&str]) -> MlpInstance {
    let cnf = Cnf::from_named(clauses).unwrap();
    let cycle = cycle.iter().map(|n| cnf.var(n).unwrap()).collect();
    MlpInstance::new(cnf, cycle).unwrap()
}

/// Small formulas within the occurrence bounds, with their cycles.
fn corpus() -> Vec<MlpInstance> {
    vec![
        mlp(&[&["x"], &["y"]], &["x", "y"]),
        mlp(&[&["-x"], &["x", "y"]], &["x", "y"]),
        mlp(&[&["x", "y"], &["-x", "-y"]], &["x", "y"]),
        mlp(&[&["x", "y"], &["x", "z"], &["-x", "-z"]], &["x", "y", "z"]),
        mlp(&[&["x", "y", "z"], &["-x"], &["-y", "-z"]], &["x", "y", "z"]),
        mlp(&[&["w", "x"], &["x", "y"], &["-x", "-y", "-z"], &["-w"], &["z"]], &["w", "x", "y", "z"]),
        mlp(&[&["y"], &["w", "x", "y"], &["-w", "-x"], &["-y", "-z"]], &["w", "x", "y", "z"]),
        mlp(&[&["w", "z"], &["x", "y"], &["-w", "-x"], &["-y", "-z"]], &["w", "x", "y", "z"]),
    ]
}

fn states(env: &GridEnvironment, s: &[Cell]) -> u128 {
    s.iter()
        .filter(|&&c| env.movement_neighbours(c).next().is_some())
        .map(|&c| movement_component(env, c).len() as u128)
        .product()
}

#[test]
fn configuration_examples() {
    let env = line(3);
    assert!(validate_configuration(&env, &[(0, 0), (1, 0)]).unwrap());
    assert!(!validate_configuration(&env, &[(0, 0), (2, 0)]).unwrap());
    assert!(validate_configuration(&env, &[(0, 0), (1, 0), (2, 0)]).unwrap());
    assert!(!validate_configuration(&env, &[(0, 0), (0, 0)]).unwrap());
    assert_eq!(validate_configuration(&env, &[(5, 0)]), Err(CmapfError::UnknownCell((5, 0))));
}

#[test]
fn execution_examples() {
    let env = line(4);
    assert!(!validate_execution(&env, &[vec![(0, 0), (1, 0)], vec![(1, 0), (0, 0)]]));
    let walk: Execution = (0..4).map(|x| vec![(x, 0)]).collect();
    assert!(validate_execution(&env, &walk));
    assert!(!validate_execution(&env, &[vec![(0, 0)], vec![(2, 0)]]));
    assert!(!validate_execution(&env, &[]));

    let square = row(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
    let rotate = vec![vec![(0, 0), (1, 0), (1, 1)], vec![(1, 0), (1, 1), (0, 1)]];
    assert!(validate_execution(&square, &rotate));
}

#[test]
fn bfs_on_a_line() {
    let env = line(4);
    let exec = cmapf_bfs(&env, &[(0, 0)], &[(3, 0)], Some(3), JOINT_STATE_CAP).unwrap().unwrap();
    assert_eq!(exec.len(), 4);
    assert!(validate_execution(&env, &exec));
    assert_eq!(cmapf_bfs(&env, &[(0, 0)], &[(3, 0)], Some(2), JOINT_STATE_CAP).unwrap(), None);
    assert!(matches!(cmapf_bfs(&env, &[(0, 0)], &[(3, 0)], None, 2), Err(CmapfError::TooLarge { .. })));
    assert_eq!(
        cmapf_bfs(&env, &[(0, 0), (3, 0)], &[(0, 0), (1, 0)], None, JOINT_STATE_CAP),
        Err(CmapfError::InvalidEndpoint("start"))
    );
}

#[test]
fn bfs_moves_in_lockstep() {
    // Two parallel corridors; the agents must stay side by side.
    let env = row(&[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]);
    let exec = cmapf_bfs(&env, &[(0, 0), (0, 1)], &[(2, 0), (2, 1)], None, JOINT_STATE_CAP).unwrap().unwrap();
    assert_eq!(exec.len(), 3);
    for c in &exec {
        assert!(validate_configuration(&env, c).unwrap());
    }
}

fn assert_structure(env: &GridEnvironment, layout: &GadgetLayout, s: &[Cell], t: &[Cell]) {
    assert!(validate_configuration(env, s).unwrap(), "start is invalid");
    assert!(validate_configuration(env, t).unwrap(), "target is invalid");
    for a in &layout.agents {
        let moves = env.movement_neighbours(a.start).count();
        assert_eq!(a.role == Role::Mobile, moves > 0, "{} has {moves} movement edges", a.name);
    }
}

#[test]
fn bounded_witnesses_validate() {
    for inst in corpus() {
        let b = compile_bounded(&inst).unwrap();
        assert_structure(&b.env, &b.layout, &b.start, &b.target);
        for nu in all_models(&inst.cnf).unwrap() {
            let exec = witness_from_assignment(&b, &nu).unwrap();
            assert_eq!(exec.len(), 3);
            assert_eq!(exec.last(), Some(&b.target));
            assert!(validate_execution(&b.env, &exec), "{:?} under {nu:?}", inst.cnf.clauses());
        }
    }
}

#[test]
fn bounded_witness_rejects_unsatisfying_assignments() {
    let b = compile_bounded(&mlp(&[&["x"], &["y"]], &["x", "y"])).unwrap();
    assert!(matches!(witness_from_assignment(&b, &[false, true]), Err(CmapfError::InvalidWitness(_))));
}

#[test]
fn bounded_micro_instances_agree_with_satisfiability() {
    for (clauses, sat) in
        [(&[&["x"][..]][..], true), (&[&["-x"][..]][..], true), (&[&["x"][..], &["-x"][..]][..], false)]
    {
        let b = compile_bounded_formula(&Cnf::from_named(clauses).unwrap(), &[0]).unwrap();
        assert!(states(&b.env, &b.start) <= 1_000_000);
        let found = cmapf_bfs(&b.env, &b.start, &b.target, Some(2), JOINT_STATE_CAP).unwrap();
        assert_eq!(found.is_some(), sat, "{clauses:?}");
    }
}

#[test]
fn occurrence_bound_is_enforced() {
    let inst = mlp(&[&["-x"], &["-x", "-y"]], &["x", "y"]);
    assert!(matches!(compile_bounded(&inst), Err(CmapfError::OccurrenceBoundViolated(_))));
}

fn flip_pairs(inst: &MlpInstance) -> Vec<(Vec<bool>, Vec<bool>)> {
    let models = all_models(&inst.cnf).unwrap();
    let mut out = Vec::new();
    for a in &models {
        for b in &models {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

#[test]
fn unbounded_witnesses_validate() {
    for inst in corpus() {
        for (from, to) in flip_pairs(&inst) {
            let u = compile_unbounded(&inst, &from, &to).unwrap();
            assert_structure(&u.env, &u.layout, &u.start, &u.target);
            let Some(seq) = reconfig_bfs(&inst.cnf, &from, &to).unwrap() else { continue };
            let exec = witness_from_flips(&u, &seq).unwrap();
            assert_eq!(exec.last(), Some(&u.target));
            assert!(validate_execution(&u.env, &exec), "{:?} from {from:?} to {to:?}", inst.cnf.clauses());
            for c in &exec {
                assert_eq!(free_line_agents(&u, c).len(), 1);
            }
        }
    }
}

#[test]
fn unbounded_rejects_bad_endpoints_and_sequences() {
    let inst = mlp(&[&["x", "y"], &["-x", "-y"]], &["x", "y"]);
    assert_eq!(compile_unbounded(&inst, &[true, true], &[true, false]).err(), Some(CmapfError::EndpointUnsat("start")));
    let u = compile_unbounded(&inst, &[true, false], &[false, true]).unwrap();
    assert!(matches!(witness_from_flips(&u, &[0, 1]), Err(CmapfError::InvalidWitness(_))));
    assert!(matches!(witness_from_flips(&u, &[]), Err(CmapfError::InvalidWitness(_))));
}

#[test]
fn unbounded_micro_instances_agree_with_reconfiguration() {
    let free = Cnf::new(vec!["x".into()], vec![]).unwrap();
    let unit = Cnf::from_named(&[&["x"]]).unwrap();
    let neg = Cnf::from_named(&[&["-x"]]).unwrap();
    let cases = [
        (&unit, vec![true], vec![true]),
        (&neg, vec![false], vec![false]),
        (&free, vec![false], vec![true]),
        (&free, vec![true], vec![false]),
        (&free, vec![true], vec![true]),
    ];
    for (cnf, from, to) in cases {
        let u = compile_unbounded_formula(cnf, &[0], &from, &to).unwrap();
        assert!(states(&u.env, &u.start) <= 1_000_000);
        let oracle = reconfig_bfs(cnf, &from, &to).unwrap().is_some();
        let found = cmapf_bfs(&u.env, &u.start, &u.target, None, JOINT_STATE_CAP).unwrap();
        assert_eq!(found.is_some(), oracle);
    }
}

#[test]
fn at_most_one_line_agent_is_free() {
    for inst in corpus() {
        let nu = all_models(&inst.cnf).unwrap().remove(0);
        let u = compile_unbounded(&inst, &nu, &nu).unwrap();
        let placements = line_placements_all_set(&u).unwrap();
        assert!(!placements.is_empty());
        let pins: BTreeSet<Cell> = u.layout.region("line:pins").iter().copied().collect();
        for p in placements {
            assert!(p.iter().filter(|c| !pins.contains(c)).count() <= 1, "{p:?}");
        }
    }
}

#[test]
fn map_round_trip() {
    let b = compile_bounded(&mlp(&[&["x", "y"], &["-x", "-y"]], &["x", "y"])).unwrap();
    let map = b.map();
    let (grid, sidecar) = instance_to_map(&map);
    assert_eq!(instance_from_map(&grid, &sidecar).unwrap(), map);
    assert!(instance_to_svg(&map, &map.start()).starts_with("<svg"));

    let open = MapInstance {
        env: line(3),
        agents: vec![AgentSpec { name: "a".into(), role: Role::Mobile, start: (0, 0), target: (2, 0) }],
    };
    let (grid, sidecar) = instance_to_map(&open);
    assert_eq!(grid, "m..\n");
    assert!(!sidecar.contains("moves"));
    assert_eq!(instance_from_map(&grid, &sidecar).unwrap(), open);
    assert!(matches!(instance_from_map("m.x\n", &sidecar), Err(CmapfError::Parse(_))));
    assert!(matches!(instance_from_map("...\n", &sidecar), Err(CmapfError::Parse(_))));
}

/// Provider components, merged across every movement track all of whose
/// cells touch both: such a track joins them whichever cell its agent is on.
fn bridged_provider_components(env: &GridEnvironment, providers: &BTreeSet<Cell>) -> usize {
    let mut comp: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut count = 0;
    for &p in providers {
        if comp.contains_key(&p) {
            continue;
        }
        let mut stack = vec![p];
        comp.insert(p, count);
        while let Some(c) = stack.pop() {
            for d in env.in_range(c) {
                if providers.contains(&d) && !comp.contains_key(&d) {
                    comp.insert(d, count);
                    stack.push(d);
                }
            }
        }
        count += 1;
    }
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    let tracks: BTreeSet<Cell> = env.movement_edges().flat_map(|(a, b)| [a, b]).collect();
    for &t in &tracks {
        let cells = movement_component(env, t);
        let touching: Vec<BTreeSet<usize>> =
            cells.iter().map(|&c| env.in_range(c).filter_map(|d| comp.get(&d).copied()).collect()).collect();
        let common = touching.iter().skip(1).fold(touching[0].clone(), |acc, s| &acc & s);
        let common: Vec<usize> = common.into_iter().collect();
        for w in common.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    (0..count).filter(|&i| find(&mut parent, i) == i).count()
}

#[test]
fn providers_are_joined_by_bridging_tracks() {
    for inst in corpus() {
        let b = compile_bounded(&inst).unwrap();
        assert_eq!(bridged_provider_components(&b.env, &b.cells.providers), 1, "{:?}", inst.cnf.clauses());
        let nu = all_models(&inst.cnf).unwrap().remove(0);
        let u = compile_unbounded(&inst, &nu, &nu).unwrap();
        assert_eq!(bridged_provider_components(&u.env, &u.cells.providers), 1, "{:?}", inst.cnf.clauses());
    }
}
