//! Random generators for structured formulas, used by tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{clause_sets_cross, Clause, Cnf, Literal, Var};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{}", i + 1)).collect()
}

fn random_var_subset<R: Rng>(rng: &mut R, n: usize, max: usize) -> Vec<Var> {
    let k = rng.gen_range(1..=max.min(n));
    let mut vars: Vec<Var> = (0..n).collect();
    vars.shuffle(rng);
    vars.truncate(k);
    vars
}

/// A monotone formula with a variable cycle separating positive from
/// negative clauses. Clauses are drawn at random and kept when they cross
/// no clause of the same polarity; up to `clauses` are produced.
pub fn random_monotone_planar<R: Rng>(rng: &mut R, n: usize, clauses: usize) -> (Cnf, Vec<Var>) {
    let mut cycle: Vec<Var> = (0..n).collect();
    cycle.shuffle(rng);
    let mut pos = vec![0; n];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i;
    }
    let mut kept: Vec<(bool, BTreeSet<usize>, Clause)> = Vec::new();
    for _ in 0..clauses * 8 {
        if kept.len() == clauses {
            break;
        }
        let positive = rng.gen_bool(0.5);
        let vars = random_var_subset(rng, n, 3);
        let at: BTreeSet<usize> = vars.iter().map(|&v| pos[v]).collect();
        if kept.iter().any(|(p, other, _)| *p == positive && clause_sets_cross(&at, other)) {
            continue;
        }
        let clause = vars.iter().map(|&var| Literal { var, positive }).collect();
        kept.push((positive, at, clause));
    }
    let cnf = Cnf::new(names(n), kept.into_iter().map(|(_, _, c)| c).collect()).expect("well-formed clauses");
    (cnf, cycle)
}

/// A random non-crossing perfect matching of `2n` cyclic positions, as a
/// partner array.
fn random_noncrossing_matching<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut partner = vec![0; 2 * n];
    let mut stack = Vec::new();
    let (mut opened, mut closed) = (0, 0);
    for i in 0..2 * n {
        let can_open = opened < n;
        let can_close = !stack.is_empty();
        if can_open && (!can_close || rng.gen_bool(0.5)) {
            stack.push(i);
            opened += 1;
        } else {
            let j = stack.pop().expect("open position");
            partner[i] = j;
            partner[j] = i;
            closed += 1;
        }
    }
    debug_assert_eq!(closed, n);
    partner
}

/// A linear formula with a valid literal cycle: paired edges form a random
/// non-crossing matching and clauses are kept when they keep the formula
/// linear and cross no earlier clause.
pub fn random_llp<R: Rng>(rng: &mut R, n: usize, clauses: usize) -> (Cnf, Vec<Literal>) {
    let partner = random_noncrossing_matching(rng, n);
    let mut cycle = vec![Literal::pos(0); 2 * n];
    let mut vars: Vec<Var> = (0..n).collect();
    vars.shuffle(rng);
    let mut next = vars.into_iter();
    for i in 0..2 * n {
        if partner[i] > i {
            let v = next.next().expect("one variable per chord");
            let flip = rng.gen_bool(0.5);
            cycle[i] = Literal { var: v, positive: !flip };
            cycle[partner[i]] = Literal { var: v, positive: flip };
        }
    }
    let mut pos = vec![0; 2 * n];
    for (i, l) in cycle.iter().enumerate() {
        pos[2 * l.var + usize::from(!l.positive)] = i;
    }
    let at = |l: &Literal| pos[2 * l.var + usize::from(!l.positive)];
    let mut kept: Vec<Clause> = Vec::new();
    for _ in 0..clauses * 8 {
        if kept.len() == clauses {
            break;
        }
        let vars = random_var_subset(rng, n, 3);
        let clause: Clause = vars.iter().map(|&var| Literal { var, positive: rng.gen_bool(0.5) }).collect();
        let spots: BTreeSet<usize> = clause.iter().map(at).collect();
        if kept.iter().any(|c| clause_sets_cross(&spots, &c.iter().map(at).collect())) {
            continue;
        }
        let mut trial = kept.clone();
        trial.push(clause);
        let f = Cnf::new(names(n), trial.clone()).expect("well-formed clauses");
        if super::is_linear(&f) {
            kept = trial;
        }
    }
    (Cnf::new(names(n), kept).expect("well-formed clauses"), cycle)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::sat_core::{
        augment, build_incidence, check_valid, is_linear, is_monotone, literal_cycle_is_valid_by_crossings,
        variable_cycle_separates_by_crossings, CycleOrder, GraphKind,
    };

    #[test]
    fn generated_llp_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let (f, pi) = random_llp(&mut rng, n, 5);
            assert!(is_linear(&f));
            assert!(literal_cycle_is_valid_by_crossings(&f, &pi));
            let aug = augment(&build_incidence(&f, GraphKind::LiteralClause), &CycleOrder::Literals(pi)).unwrap();
            assert_eq!(check_valid(&aug.layout().unwrap(), &aug), Ok(true));
        }
    }

    #[test]
    fn generated_monotone_instances_separate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let n = rng.gen_range(2..=5);
            let (f, pi) = random_monotone_planar(&mut rng, n, 5);
            assert!(is_monotone(&f));
            assert!(variable_cycle_separates_by_crossings(&f, &pi));
        }
    }
}
