//! Connected multi-agent pathfinding on finite subsets of the square grid:
//! environments, configuration and execution validators, an exact
//! breadth-first solver, and gadget compilers from monotone linear planar
//! 3-SAT (bounded, two steps) and its reconfiguration (unbounded).

mod bounded;
mod io;
mod layout;
mod unbounded;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub use bounded::{compile_bounded, compile_bounded_formula, witness_from_assignment, BoundedInstance};
pub use io::{instance_from_map, instance_to_json, instance_to_map, instance_to_svg, MapInstance};
pub use layout::{AgentSpec, GadgetLayout, LayoutCells, Role};
pub use unbounded::{
    compile_unbounded, compile_unbounded_formula, free_line_agents, line_placements_all_set, witness_from_flips,
    UnboundedInstance,
};

/// A grid cell `(x, y)`.
pub type Cell = (i32, i32);
/// Position of every agent, indexed by agent id.
pub type AgentConfiguration = Vec<Cell>;
pub type Execution = Vec<AgentConfiguration>;

/// Default cap on the number of joint states [`cmapf_bfs`] may consider.
pub const JOINT_STATE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmapfError {
    #[error("cell {0:?} is not in the environment")]
    UnknownCell(Cell),
    #[error("movement edge {0:?}-{1:?} joins cells at distance other than 1")]
    BadMovementEdge(Cell, Cell),
    #[error("joint state space of {states} exceeds the cap of {cap}")]
    TooLarge { states: u128, cap: u128 },
    #[error("{0} configuration is invalid")]
    InvalidEndpoint(&'static str),
    #[error("occurrence bound violated: {0}")]
    OccurrenceBoundViolated(String),
    #[error("{0} assignment does not satisfy the formula")]
    EndpointUnsat(&'static str),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("cannot lay out the formula: {0}")]
    InvalidLayout(String),
    #[error("malformed map: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CmapfError>;

pub fn manhattan(a: Cell, b: Cell) -> u32 {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1)
}

/// Cells, movement edges between orthogonal neighbours, and the
/// communication radius. Staying put is always allowed; a cell with no
/// movement edges traps its occupant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEnvironment {
    cells: BTreeSet<Cell>,
    moves: BTreeMap<Cell, BTreeSet<Cell>>,
    radius: u32,
}

impl GridEnvironment {
    pub fn new(cells: BTreeSet<Cell>, moves: impl IntoIterator<Item = (Cell, Cell)>, radius: u32) -> Result<Self> {
        let mut adj: BTreeMap<Cell, BTreeSet<Cell>> = BTreeMap::new();
        for (a, b) in moves {
            for c in [a, b] {
                if !cells.contains(&c) {
                    return Err(CmapfError::UnknownCell(c));
                }
            }
            if manhattan(a, b) != 1 {
                return Err(CmapfError::BadMovementEdge(a, b));
            }
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        Ok(GridEnvironment { cells, moves: adj, radius })
    }

    /// Every pair of orthogonally adjacent cells is a movement edge.
    pub fn open(cells: BTreeSet<Cell>, radius: u32) -> Self {
        let moves: Vec<(Cell, Cell)> = cells
            .iter()
            .flat_map(|&(x, y)| [((x, y), (x + 1, y)), ((x, y), (x, y + 1))])
            .filter(|(_, b)| cells.contains(b))
            .collect();
        GridEnvironment::new(cells, moves, radius).expect("neighbours of present cells")
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn movement_neighbours(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        self.moves.get(&c).into_iter().flatten().copied()
    }

    pub fn can_move(&self, a: Cell, b: Cell) -> bool {
        a == b || self.moves.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn movement_edges(&self) -> impl Iterator<Item = (Cell, Cell)> + '_ {
        self.moves.iter().flat_map(|(&a, bs)| bs.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Cells within communication range of `c`, other than `c`.
    fn in_range(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        let r = self.radius as i32;
        (-r..=r)
            .flat_map(move |dx| {
                let rest = r - dx.abs();
                (-rest..=rest).map(move |dy| (c.0 + dx, c.1 + dy))
            })
            .filter(move |&d| d != c && self.cells.contains(&d))
    }
}

/// Agents on distinct cells whose communication graph is connected.
pub fn validate_configuration(env: &GridEnvironment, c: &[Cell]) -> Result<bool> {
    if let Some(&bad) = c.iter().find(|p| !env.cells.contains(p)) {
        return Err(CmapfError::UnknownCell(bad));
    }
    let occupied: BTreeSet<Cell> = c.iter().copied().collect();
    if occupied.len() != c.len() {
        return Ok(false);
    }
    let Some(&first) = c.first() else { return Ok(true) };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(p) = queue.pop_front() {
        for q in env.in_range(p) {
            if occupied.contains(&q) && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    Ok(seen.len() == occupied.len())
}

/// Whether every agent follows a movement edge (or stays) and no two agents
/// swap cells.
pub fn is_step(env: &GridEnvironment, a: &[Cell], b: &[Cell]) -> bool {
    if a.len() != b.len() || a.iter().zip(b).any(|(&p, &q)| !env.can_move(p, q)) {
        return false;
    }
    let moved: HashMap<(Cell, Cell), usize> =
        a.iter().zip(b).enumerate().filter(|(_, (p, q))| p != q).map(|(i, (&p, &q))| ((p, q), i)).collect();
    !moved.keys().any(|&(p, q)| moved.contains_key(&(q, p)))
}

pub fn validate_execution(env: &GridEnvironment, exec: &[AgentConfiguration]) -> bool {
    !exec.is_empty()
        && exec.iter().all(|c| validate_configuration(env, c).unwrap_or(false))
        && exec.windows(2).all(|w| is_step(env, &w[0], &w[1]))
}

/// Connectivity check specialised to a fixed set of immobile agents: their
/// components are computed once, and a configuration only adds the mobile
/// agents.
pub(crate) struct FastValidator<'a> {
    env: &'a GridEnvironment,
    /// Immobile components within range of each cell.
    near: HashMap<Cell, Vec<usize>>,
    components: usize,
    immobile: BTreeSet<Cell>,
}

impl<'a> FastValidator<'a> {
    pub(crate) fn new(env: &'a GridEnvironment, immobile: &[Cell]) -> Self {
        let immobile: BTreeSet<Cell> = immobile.iter().copied().collect();
        let mut comp: HashMap<Cell, usize> = HashMap::new();
        let mut components = 0;
        for &start in &immobile {
            if comp.contains_key(&start) {
                continue;
            }
            comp.insert(start, components);
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for q in env.in_range(p) {
                    if immobile.contains(&q) && !comp.contains_key(&q) {
                        comp.insert(q, components);
                        queue.push_back(q);
                    }
                }
            }
            components += 1;
        }
        let mut near: HashMap<Cell, Vec<usize>> = HashMap::new();
        for &c in &env.cells {
            let mut ids: Vec<usize> = env.in_range(c).filter_map(|q| comp.get(&q).copied()).collect();
            ids.sort_unstable();
            ids.dedup();
            if !ids.is_empty() {
                near.insert(c, ids);
            }
        }
        FastValidator { env, near, components, immobile }
    }

    pub(crate) fn valid(&self, mobile: &[Cell]) -> bool {
        let n = self.components + mobile.len();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut merges = 0;
        let mut union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
                merges += 1;
            }
        };
        for (i, &c) in mobile.iter().enumerate() {
            if self.immobile.contains(&c) {
                return false;
            }
            if let Some(ids) = self.near.get(&c) {
                for &k in ids {
                    union(&mut parent, self.components + i, k);
                }
            }
            for (j, &d) in mobile.iter().enumerate().skip(i + 1) {
                if c == d {
                    return false;
                }
                if manhattan(c, d) <= self.env.radius {
                    union(&mut parent, self.components + i, self.components + j);
                }
            }
        }
        merges == n - 1
    }
}

/// Shortest execution from `s` to `t`, at most `bound` steps long when a
/// bound is given. Agents without movement edges are held fixed; the joint
/// state count (product of the sizes of the movement components of the
/// other agents) must not exceed `cap`.
pub fn cmapf_bfs(
    env: &GridEnvironment,
    s: &[Cell],
    t: &[Cell],
    bound: Option<usize>,
    cap: u128,
) -> Result<Option<Execution>> {
    for (c, which) in [(s, "start"), (t, "target")] {
        if !validate_configuration(env, c)? {
            return Err(CmapfError::InvalidEndpoint(which));
        }
    }
    if s.len() != t.len() {
        return Err(CmapfError::InvalidEndpoint("target"));
    }
    let mobile: Vec<usize> = (0..s.len()).filter(|&i| env.movement_neighbours(s[i]).next().is_some()).collect();
    let fixed: Vec<Cell> = (0..s.len()).filter(|i| !mobile.contains(i)).map(|i| s[i]).collect();
    if (0..s.len()).any(|i| !mobile.contains(&i) && s[i] != t[i]) {
        return Ok(None);
    }
    let mut states: u128 = 1;
    for &i in &mobile {
        states = states.saturating_mul(movement_component(env, s[i]).len() as u128);
    }
    if states > cap {
        return Err(CmapfError::TooLarge { states, cap });
    }
    let fast = FastValidator::new(env, &fixed);
    let start: Vec<Cell> = mobile.iter().map(|&i| s[i]).collect();
    let goal: Vec<Cell> = mobile.iter().map(|&i| t[i]).collect();
    let mut parent: HashMap<Vec<Cell>, (Option<Vec<Cell>>, usize)> = HashMap::new();
    parent.insert(start.clone(), (None, 0));
    let mut queue = VecDeque::from([start]);
    let mut found = false;
    while let Some(state) = queue.pop_front() {
        if state == goal {
            found = true;
            break;
        }
        let depth = parent[&state].1;
        if bound.is_some_and(|b| depth >= b) {
            continue;
        }
        for next in successors(env, &state, &fast) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), (Some(state.clone()), depth + 1));
                queue.push_back(next);
            }
        }
    }
    if !found {
        return Ok(None);
    }
    let mut path = vec![goal.clone()];
    let mut cur = goal;
    while let Some(prev) = parent[&cur].0.clone() {
        path.push(prev.clone());
        cur = prev;
    }
    path.reverse();
    Ok(Some(
        path.into_iter()
            .map(|m| {
                let mut full = s.to_vec();
                for (k, &i) in mobile.iter().enumerate() {
                    full[i] = m[k];
                }
                full
            })
            .collect(),
    ))
}

fn movement_component(env: &GridEnvironment, c: Cell) -> BTreeSet<Cell> {
    let mut seen = BTreeSet::from([c]);
    let mut stack = vec![c];
    while let Some(p) = stack.pop() {
        for q in env.movement_neighbours(p) {
            if seen.insert(q) {
                stack.push(q);
            }
        }
    }
    seen
}

/// Valid joint moves of the mobile agents: each stays or follows a movement
/// edge, no two end on one cell, no two swap.
fn successors(env: &GridEnvironment, state: &[Cell], fast: &FastValidator) -> Vec<Vec<Cell>> {
    let options: Vec<Vec<Cell>> =
        state.iter().map(|&c| std::iter::once(c).chain(env.movement_neighbours(c)).collect()).collect();
    let mut out = Vec::new();
    let mut next: Vec<Cell> = Vec::with_capacity(state.len());
    fn rec(
        i: usize,
        state: &[Cell],
        options: &[Vec<Cell>],
        next: &mut Vec<Cell>,
        out: &mut Vec<Vec<Cell>>,
        fast: &FastValidator,
    ) {
        if i == state.len() {
            if fast.valid(next) {
                out.push(next.clone());
            }
            return;
        }
        for &q in &options[i] {
            let clash = next.iter().enumerate().any(|(j, &p)| p == q || (q == state[j] && p == state[i] && q != p));
            if clash {
                continue;
            }
            next.push(q);
            rec(i + 1, state, options, next, out, fast);
            next.pop();
        }
    }
    rec(0, state, &options, &mut next, &mut out, fast);
    out
}

#[cfg(test)]
mod tests;
